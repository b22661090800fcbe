"""Would a few extra meteors stand out against the natural Poisson count?

Run with ``python3 demos/meteors.py``.
"""

from oneshot.workflows import MeteorScenario, meteor_experiment

scenario = MeteorScenario(k_values=range(0, 16, 3))
rows = meteor_experiment(scenario)
print("Miss probability of the best detector for k deliberately added meteors:")
print(f"{'rate':>5} {'eps':>6} " + " ".join(f"k={k:<6d}" for k in scenario.k_values))
for lam in scenario.lambda_values:
    for eps in scenario.epsilon_values:
        betas = [b for l, e, _, b in rows if l == lam and e == eps]
        print(f"{lam:5.1f} {eps:6.3f} " + " ".join(f"{b:8.2e}" for b in betas))
print("\nA busier sky (rate 6) needs more meteors for the same miss probability.")
