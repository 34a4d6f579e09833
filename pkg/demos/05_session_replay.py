"""Drive a live teleoperation session programmatically, then replay the
recorded per-tick command log through the offline harness and confirm the
trajectory reproduces bit-for-bit.

Run:  python3 demos/05_session_replay.py
"""
from attentive_teleop.harness import run_commands
from attentive_teleop.pipeline import PipelineParams
from attentive_teleop.scenarios import build_scenario
from attentive_teleop.service import Session

world = build_scenario(1).world
session = Session("demo", "corridor-1", world, PipelineParams(), "amgpf")

# A short joystick gesture: accelerate, curve left, coast.
inputs = [(0.9, 0.0)] * 10 + [(0.6, 0.4)] * 10 + [(0.0, 0.0)] * 5
for axes in inputs:
    session.handle_command(axes)
    session.step()

last = session.ticks[-1]
print(f"live session: {len(session.ticks)} ticks, final pose "
      f"({last.x:.3f}, {last.y:.3f}, {last.theta:.3f})")

replayed = run_commands(world, session.command_log, "amgpf", session.params)
exact = all((a.x, a.y, a.theta, a.v, a.omega, a.force_norm) ==
            (b.x, b.y, b.theta, b.v, b.omega, b.force_norm)
            for a, b in zip(session.ticks, replayed))
print(f"replay of the recorded command log: "
      f"{'bit-exact match' if exact else 'MISMATCH'}")

print("\nTo run the live service instead:")
print("  uvicorn attentive_teleop.service:app --port 8000")
print("then POST /sessions and stream WS /sessions/<id>/stream.")
