"""Checking a recorded outcome against candidate signal models.

Run with ``python3 demos/measured_data.py``.
"""

from oneshot import ClassicalDistribution
from oneshot.workflows import MeasuredDataCase, analyze_measured_data

null = ClassicalDistribution([0.5, 0.3, 0.15, 0.05])
models = [ClassicalDistribution([0.05, 0.05, 0.1, 0.8]), ClassicalDistribution([0.25] * 4), null]
names = ("burst", "flat", "null-like")
for observed in (0, 2, 3):
    print(f"observed outcome {observed}:")
    case = MeasuredDataCase(observed, null, models, 0.1, names)
    for rep in analyze_measured_data(case, u=0.42):
        print(f"  {rep['model']:>9}: acceptance {rep['acceptance_probability']:.3f}, "
              f"verdict {rep['verdict']}, decision {rep['decision']}")
