"""A pulsed laser seen through loss and background light, then random corruption.

The relative entropy between the idle and pulsing received sequences does
not depend on the pulse power, as long as the pulse survives the loss.

Run with ``python3 demos/laser.py``.
"""

from oneshot.workflows import laser_experiment

rows = laser_experiment(g=6, s=1, c=1, q=0.2, delta=0.1, n=5, powers=[1, 2, 3, 4, 5])
for power, value, reference in rows:
    note = "  (pulse fully absorbed)" if value == 0 else ""
    print(f"power {power}: {value:.10f} bits, closed form {reference:.10f}{note}")
