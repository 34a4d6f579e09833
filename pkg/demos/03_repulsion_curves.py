"""Tabulate the haptic field primitives: risk, saturating repulsion, and
how attentiveness scales the warning down while keeping a residual.

Run:  python3 demos/03_repulsion_curves.py
"""
import numpy as np

from attentive_teleop.haptics import FieldParams, repulsion, risk

params = FieldParams()
print(f"defaults: t_safe={params.t_safe}s d_safe={params.d_safe}m "
      f"alpha={params.alpha} gain={params.gain} gamma={params.gamma}")

print("\ndistance sweep at closing speed 1.0 m/s")
print(f"{'d [m]':>6} {'risk':>8} {'repulsion':>10} "
      f"{'x(1-g*0.5)':>11} {'x(1-g*1.0)':>11}")
for d in np.arange(0.3, 3.01, 0.3):
    r = risk(d, 1.0, params)
    rep = repulsion(d, 1.0, params)
    half = rep * (1 - params.gamma * 0.5)   # half attention
    full = rep * (1 - params.gamma * 1.0)   # full attention
    print(f"{d:6.1f} {r:8.3f} {rep:10.3f} {half:11.3f} {full:11.3f}")

print("\nclosing-speed sweep at distance 1.0 m")
print(f"{'v [m/s]':>8} {'risk':>8} {'repulsion':>10}")
for v in [0.0, 0.2, 0.5, 1.0, 2.0, 4.0]:
    print(f"{v:8.1f} {risk(1.0, v, params):8.3f} "
          f"{repulsion(1.0, v, params):10.3f}")

print("\nNote the saturation at 1.0 once risk reaches 1/gain, and that even "
      "full attention leaves a (1-gamma) residual warning.")
