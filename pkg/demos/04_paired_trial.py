"""Run one scripted-operator trial with and without attentiveness modulation
on the same corridor and seed, and compare the metrics side by side.

Takes roughly half a minute on one CPU.

Run:  python3 demos/04_paired_trial.py
"""
from attentive_teleop.harness import run_trial
from attentive_teleop.operator import OperatorModel
from attentive_teleop.scenarios import build_scenario

scenario = build_scenario(1)
operator = OperatorModel()
print(f"scenario {scenario.name}: {len(scenario.world.obstacles)} obstacles, "
      f"{len(scenario.world.working_areas)} working areas, "
      f"budget {scenario.max_duration:.0f} s\n")

results = {m: run_trial(scenario, m, operator, seed=1) for m in ("amgpf", "gpf")}

print(f"{'metric':<28} {'amgpf':>10} {'gpf':>10}")
amgpf, gpf = results["amgpf"].metrics.to_dict(), results["gpf"].metrics.to_dict()
for key in ("completion_time_s", "total_displacement_m", "average_speed_mps",
            "collisions", "average_feedback_force_n"):
    print(f"{key:<28} {amgpf[key]:>10.3f} {gpf[key]:>10.3f}")
for m, res in results.items():
    if res.metrics.dnf:
        print(f"({m} did not finish within the budget)")

reduction = 100 * (1 - amgpf["average_feedback_force_n"]
                   / gpf["average_feedback_force_n"])
print(f"\nfeedback force reduced by {reduction:.1f}% "
      f"with attentiveness modulation")
