"""Live teleoperation service: one pipeline loop per session, JSON
messages over a websocket, latest-wins commands with a dead-man timeout."""

from __future__ import annotations

import base64
import io
import json
import threading
import time
import uuid
from pathlib import Path

import numpy as np
from fastapi import FastAPI, HTTPException, WebSocket, WebSocketDisconnect
from fastapi.responses import PlainTextResponse
from fastapi.staticfiles import StaticFiles

from . import scenarios as scenario_lib
from .config import ConfigError, parse_config
from .harness import _TICK_FIELDS, compute_metrics, tick_row
from .pipeline import METHOD_AMGPF, METHOD_GPF, Pipeline, PipelineParams
from .world import World, world_hash

PROTO_VERSION = 1
COMMAND_TIMEOUT_S = 0.5
OUTBOUND_QUEUE_SIZE = 2  # bounded; overflow drops the oldest frame


def _png_b64(rgb: np.ndarray) -> str:
    from PIL import Image
    buf = io.BytesIO()
    Image.fromarray(rgb.astype(np.uint8), mode="RGB").save(buf, format="PNG")
    return base64.b64encode(buf.getvalue()).decode("ascii")


def _downsample_map(values: np.ndarray, limit: int = 64) -> tuple[np.ndarray, int, int]:
    """Byte-quantized attentiveness grid, decimated to <= limit per axis."""
    w, h = values.shape
    sx = max(1, -(-w // limit))
    sy = max(1, -(-h // limit))
    small = values[::sx, ::sy]
    return np.round(small * 255).astype(np.uint8), sx, sy


class Session:
    """One teleoperated robot. The pipeline loop runs either on a
    background thread (start/pause) or via explicit step controls."""

    def __init__(self, session_id: str, world_name: str, world: World,
                 params: PipelineParams, method: str):
        self.id = session_id
        self.world_name = world_name
        self.world = world
        self.params = params
        self.pipeline = Pipeline(world, params, method)
        self.lock = threading.Lock()
        self.running = False
        self._thread = None
        self._stop = threading.Event()
        self.latest_axes = (0.0, 0.0)
        self.last_command_tick = -10**9
        self.seq = 0
        self.ticks = []          # TickRecord log
        self.command_log = []    # axes actually applied each tick
        self.subscribers = []    # per-connection deques of outbound frames

    @property
    def method(self) -> str:
        return self.pipeline.method

    def handle_command(self, axes) -> None:
        with self.lock:
            self.latest_axes = (float(axes[0]), float(axes[1]))
            self.last_command_tick = self.pipeline.tick_count

    def _effective_axes(self) -> tuple[float, float]:
        timeout_ticks = int(round(COMMAND_TIMEOUT_S * self.params.tick_rate))
        if self.pipeline.tick_count - self.last_command_tick > timeout_ticks:
            return (0.0, 0.0)  # dead-man: stale input decays to zero
        return self.latest_axes

    def step(self) -> dict:
        with self.lock:
            axes = self._effective_axes()
            record = self.pipeline.tick(lambda state, force: axes)
            self.ticks.append(record)
            self.command_log.append(axes)
            self.seq += 1
            frame = self._frame_message(record)
        self._publish(frame)
        return frame

    def _frame_message(self, record) -> dict:
        amap = self.pipeline.map
        small, sx, sy = _downsample_map(amap.values)
        metrics = compute_metrics(self.ticks, self.params.dt).to_dict()
        return {
            "type": "frame",
            "proto_version": PROTO_VERSION,
            "session": self.id,
            "tick": record.tick,
            "seq": self.seq,
            "method": self.method,
            "rgb_png": _png_b64(self.pipeline.last_frame.rgb),
            "pose": {"x": record.x, "y": record.y, "theta": record.theta,
                     "v": record.v, "omega": record.omega},
            "force": {"forward": record.force_forward,
                      "lateral": record.force_lateral,
                      "norm": record.force_norm,
                      "magnitude": record.total_repulsion},
            "obstacles": [
                {"id": o.obstacle_id, "distance": o.distance,
                 "closing_speed": o.closing_speed, "repulsion": o.repulsion,
                 "attentiveness": o.attentiveness, "modulated": o.modulated,
                 "weight": o.weight}
                for o in record.obstacles
            ],
            "attentiveness": {
                "width": small.shape[0], "height": small.shape[1],
                "stride": [sx, sy],
                "resolution": amap.grid.resolution,
                "origin": list(amap.grid.origin),
                "data": base64.b64encode(small.T.tobytes()).decode("ascii"),
            },
            "colliding": record.colliding,
            "metrics": metrics,
        }

    def _publish(self, frame: dict) -> None:
        for queue in list(self.subscribers):
            if len(queue) >= OUTBOUND_QUEUE_SIZE:
                queue.popleft()  # newest wins, never queue unboundedly
            queue.append(frame)

    def start(self) -> None:
        with self.lock:
            if self.running:
                return
            self.running = True
            self._stop.clear()
            self._thread = threading.Thread(target=self._loop, daemon=True)
            self._thread.start()

    def pause(self) -> None:
        with self.lock:
            self.running = False
            self._stop.set()
        if self._thread is not None:
            self._thread.join(timeout=2.0)
            self._thread = None

    def reset(self) -> None:
        self.pause()
        with self.lock:
            self.pipeline.reset()
            self.ticks = []
            self.command_log = []
            self.seq = 0
            self.latest_axes = (0.0, 0.0)
            self.last_command_tick = -10**9

    def set_method(self, method: str) -> None:
        if method not in (METHOD_AMGPF, METHOD_GPF):
            raise ValueError(f"unknown method: {method}")
        with self.lock:
            self.pipeline.method = method

    def _loop(self) -> None:
        period = self.params.dt
        next_tick = time.monotonic()
        while not self._stop.is_set():
            self.step()
            next_tick += period
            delay = next_tick - time.monotonic()
            if delay > 0:
                self._stop.wait(delay)
            else:
                next_tick = time.monotonic()  # fell behind: drop the backlog


def create_app(worlds: dict[str, World] | None = None) -> FastAPI:
    if worlds is None:
        worlds = {s.name: s.world for s in scenario_lib.all_scenarios()}
        worlds["reverse-approach"] = scenario_lib.reverse_approach_world()
    app = FastAPI(title="attentive-teleop")
    sessions: dict[str, Session] = {}
    app.state.sessions = sessions

    @app.get("/healthz")
    def healthz():
        return {"ok": True, "proto_version": PROTO_VERSION}

    @app.get("/worlds")
    def list_worlds():
        return {"proto_version": PROTO_VERSION,
                "worlds": [
                    {"name": name, "hash": world_hash(world),
                     "bounds": [world.bounds.xmin, world.bounds.ymin,
                                world.bounds.xmax, world.bounds.ymax],
                     "obstacles": [[b.xmin, b.ymin, b.xmax, b.ymax]
                                   for b in world.obstacles]}
                    for name, world in sorted(worlds.items())
                ]}

    @app.post("/sessions")
    def create_session(body: dict):
        world_name = body.get("world")
        if world_name not in worlds:
            raise HTTPException(404, f"unknown world: {world_name}")
        method = body.get("method", METHOD_AMGPF)
        if method not in (METHOD_AMGPF, METHOD_GPF):
            raise HTTPException(422, f"unknown method: {method}")
        try:
            config = parse_config(body.get("config", {}))
        except ConfigError as exc:
            raise HTTPException(422, str(exc))
        session_id = uuid.uuid4().hex[:12]
        sessions[session_id] = Session(session_id, world_name,
                                       worlds[world_name], config.pipeline,
                                       method)
        return {"proto_version": PROTO_VERSION, "session": session_id,
                "world": world_name, "method": method,
                "world_hash": world_hash(worlds[world_name])}

    def _get(session_id: str) -> Session:
        if session_id not in sessions:
            raise HTTPException(404, f"no such session: {session_id}")
        return sessions[session_id]

    @app.get("/sessions/{session_id}/log", response_class=PlainTextResponse)
    def session_log(session_id: str):
        session = _get(session_id)
        lines = [",".join(_TICK_FIELDS)]
        lines += [",".join(tick_row(rec)) for rec in session.ticks]
        return "\n".join(lines) + "\n"

    @app.get("/sessions/{session_id}/commands")
    def session_commands(session_id: str):
        session = _get(session_id)
        return {"proto_version": PROTO_VERSION,
                "world": session.world_name,
                "world_hash": world_hash(session.world),
                "method": session.method,
                "commands": [list(axes) for axes in session.command_log]}

    @app.websocket("/sessions/{session_id}/stream")
    async def stream(websocket: WebSocket, session_id: str):
        import asyncio
        from collections import deque

        await websocket.accept()
        if session_id not in sessions:
            await websocket.send_json({"type": "error", "error": "no such session"})
            await websocket.close()
            return
        session = sessions[session_id]
        outbound = deque()
        session.subscribers.append(outbound)
        try:
            while True:
                while outbound:
                    await websocket.send_json(outbound.popleft())
                try:
                    raw = await asyncio.wait_for(websocket.receive_text(), 0.02)
                except asyncio.TimeoutError:
                    continue
                try:
                    msg = json.loads(raw)
                except json.JSONDecodeError:
                    await websocket.send_json(
                        {"type": "error", "error": "malformed message"})
                    continue
                reply = _handle_message(session, msg)
                if reply is not None:
                    await websocket.send_json(reply)
        except WebSocketDisconnect:
            pass
        finally:
            if outbound in session.subscribers:
                session.subscribers.remove(outbound)

    def _handle_message(session: Session, msg: dict):
        kind = msg.get("type")
        if kind == "command":
            axes = msg.get("axes")
            if (not isinstance(axes, (list, tuple)) or len(axes) != 2
                    or not all(isinstance(a, (int, float)) for a in axes)):
                return {"type": "error", "error": "bad command axes"}
            session.handle_command(axes)
            return {"type": "ack", "proto_version": PROTO_VERSION,
                    "ack": "command", "tick": session.pipeline.tick_count}
        if kind == "control":
            action = msg.get("action")
            try:
                if action == "start":
                    session.start()
                elif action == "pause":
                    session.pause()
                elif action == "reset":
                    session.reset()
                elif action == "step":
                    for _ in range(int(msg.get("ticks", 1))):
                        session.step()
                elif action == "select_method":
                    session.set_method(msg.get("method", ""))
                else:
                    return {"type": "error", "error": f"unknown action: {action}"}
            except ValueError as exc:
                return {"type": "error", "error": str(exc)}
            return {"type": "ack", "proto_version": PROTO_VERSION,
                    "ack": action, "method": session.method,
                    "tick": session.pipeline.tick_count}
        return {"type": "error", "error": f"unknown message type: {kind}"}

    # Serve the browser cockpit when its static bundle has been built.
    frontend = Path(__file__).resolve().parents[2] / "frontend"
    if (frontend / "index.html").exists():
        app.mount("/ui", StaticFiles(directory=frontend, html=True),
                  name="cockpit")

    return app


app = create_app()
