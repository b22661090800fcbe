"""One-shot asymmetric hypothesis testing for detection problems.

Optimal decision functions and minimum type II errors for classical and
quantum hypotheses, together with the design tools and experiment
pipelines built on them.
"""

from .channels import (
    ClassicalChannel,
    MatrixChannel,
    QuantumChannel,
    adjoint_apply,
    apply,
    compose,
    identity_channel,
    lift,
    loss_map,
    pinching_channel,
    saturating_add_map,
    truncate_projection,
    uniform_mix_map,
)
from .decision import DecisionFunction
from .design import (
    ConstraintPolytope,
    DesignResult,
    budget_sweep,
    em_power_design,
    inscribed_matter_design,
    optimize_source_exact,
    optimize_source_gradient,
)
from .distributions import (
    ClassicalDistribution,
    DensityOperator,
    SequenceSpace,
    classical_to_density,
    embed_signal_with_arrival,
    iid_power,
    jittered_pulse,
    pinch,
    point_mass,
    poisson_truncated,
    shifted,
    tensor,
    uniform,
)
from .divergences import RateCurve, kl, laser_example_kl, quantum_relative_entropy, stein_rate_curve
from .errors import CapacityError, DomainError, OneShotError, SolverError, ValidationError
from .hermitian import Spectrum, eigendecompose, is_decision_operator, kron, positive_part, trace_norm
from .hyptest import (
    TestCertificate,
    bits_to_nats,
    dhte,
    evaluate_errors,
    finite_time_beta,
    solve_classical,
    solve_composite,
    solve_quantum,
    verify_dual,
)
from .workflows import (
    MeasuredDataCase,
    MeteorScenario,
    analyze_measured_data,
    laser_experiment,
    laser_hypotheses,
    meteor_experiment,
)

__version__ = "0.1.0"
