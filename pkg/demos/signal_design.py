"""Sender-side design: which device distribution is easiest to detect?

Run with ``python3 demos/signal_design.py``.
"""

import numpy as np

from oneshot import ConstraintPolytope, identity_channel, optimize_source_exact, point_mass, uniform_mix_map
from oneshot.design import budget_sweep, optimize_source_gradient
from oneshot.channels import MatrixChannel
from oneshot.distributions import ClassicalDistribution

print("Noiseless channel, unconstrained device:")
res = optimize_source_exact(identity_channel(3), point_mass(0, 3), ConstraintPolytope.simplex(3))
print(f"  objective {res.objective}, witness {res.info['witness']}: perfectly separable.")

print("\nChannel that randomizes 20% of pulses, device on at most 60% of the time:")
poly = ConstraintPolytope(2, [[0, 1]], [0.6])
mix = uniform_mix_map(0.2, 2)
exact = optimize_source_exact(mix, point_mass(0, 2), poly)
grad = optimize_source_gradient(mix, point_mass(0, 2), poly, restarts=4, seed=0)
print(f"  vertex search: {exact.best_device.mass} -> {exact.objective:.6f} bits")
print(f"  gradient:      {np.round(grad.best_device.mass, 6)} -> {grad.objective:.6f} bits")

print("\nInscribed artefact under an energy budget (noisy three-symbol medium):")
noise = MatrixChannel([[0.7, 0.2, 0.1], [0.2, 0.6, 0.2], [0.1, 0.2, 0.7]])
null = ClassicalDistribution([0.6, 0.3, 0.1])
for (res, cert), budget in zip(budget_sweep(noise, null, 0.1, [0, 1, 2], [0.0, 0.5, 1.0, 1.5, 2.0]),
                               [0.0, 0.5, 1.0, 1.5, 2.0]):
    print(f"  budget {budget:3.1f}: device {np.round(res.best_device.mass, 3)}, miss probability {cert.beta:.4f}")
