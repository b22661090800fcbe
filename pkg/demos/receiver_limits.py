"""How well can a receiver separate a signal from natural noise in one shot?

Run with ``python3 demos/receiver_limits.py``.
"""

import math

import numpy as np

from oneshot import ClassicalDistribution, DensityOperator, solve_classical, solve_quantum
from oneshot.divergences import stein_rate_curve

print("Noise always emits outcome 0; the signal is a fair coin.")
noise, coin = ClassicalDistribution([1.0, 0.0]), ClassicalDistribution([0.5, 0.5])
for eps in (0.01, 0.1, 0.3):
    cert = solve_classical(noise, coin, eps)
    print(f"  false-alarm budget {eps:4.2f}: best miss probability {cert.beta:.4f}")

print("\nSame pair, but the signal arrives as the superposition |+>.")
ket0 = DensityOperator(np.diag([1.0, 0.0]))
plus = DensityOperator(0.5 * np.ones((2, 2)))
for eps in (0.01, 0.1, 0.3):
    q = solve_quantum(ket0, plus, eps).beta
    c = solve_classical(noise, coin, eps).beta
    closed = 0.5 * (1 - 2 * math.sqrt(eps * (1 - eps)))
    print(f"  eps {eps:4.2f}: quantum {q:.4f} (closed form {closed:.4f}) vs classical {c:.4f}")

print("\nRepeating a weak signal: normalized one-shot divergence against the relative entropy.")
curve = stein_rate_curve(ClassicalDistribution([0.5, 0.5]), ClassicalDistribution([0.9, 0.1]), 0.05, 10)
for n, rate in curve.points:
    print(f"  n={n:2d}: {rate:.4f} bits/slot (limit {curve.reference_rate:.4f})")
