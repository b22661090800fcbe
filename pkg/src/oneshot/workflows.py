"""End-to-end experiments built from the solvers and channels."""

import math
from dataclasses import dataclass

import numpy as np

from .channels import apply, compose, lift, loss_map, saturating_add_map, uniform_mix_map
from .distributions import (
    ClassicalDistribution,
    default_fold_point,
    jittered_pulse,
    poisson_truncated,
    shifted,
)
from .divergences import check_laser_parameters, kl, laser_example_kl
from .errors import DomainError, ValidationError
from .hyptest import solve_classical

METEOR_HEADER = ("lambda", "epsilon", "k", "beta")
LASER_HEADER = ("power", "kl_bits", "reference_bits")


@dataclass(frozen=True)
class MeteorScenario:
    """Grid of Poisson rates and type I budgets against extra-meteor counts.

    ``fold_tol`` sets the Poisson tail mass folded into the last outcome.
    The outcome space is wide enough that every shifted distribution keeps
    its bulk below the fold point.
    """

    lambda_values: tuple = (3.0, 6.0)
    epsilon_values: tuple = (0.05, 0.01, 0.001)
    k_values: tuple = tuple(range(16))
    fold_tol: float = 1e-12

    def __post_init__(self):
        object.__setattr__(self, "lambda_values", tuple(float(x) for x in self.lambda_values))
        object.__setattr__(self, "epsilon_values", tuple(float(x) for x in self.epsilon_values))
        object.__setattr__(self, "k_values", tuple(int(x) for x in self.k_values))
        if any(not (x >= 0 and math.isfinite(x)) for x in self.lambda_values):
            raise ValidationError("meteor rates must be finite and non-negative")
        if any(not 0 < e < 1 for e in self.epsilon_values):
            raise ValidationError("epsilon values must lie in (0, 1)")
        if not self.k_values or min(self.k_values) < 0:
            raise ValidationError("k range must be non-empty and non-negative")
        if not 0 < self.fold_tol < 1:
            raise ValidationError("fold tolerance must lie in (0, 1)")

    def fold_point(self, rate):
        return default_fold_point(rate, self.fold_tol) + max(self.k_values)


def meteor_hypotheses(rate, k, fold_point):
    """Natural count ``Poisson(rate)`` against the count with ``k`` added meteors."""
    p0 = poisson_truncated(rate, fold_point=fold_point)
    return p0, shifted(p0, k)


def meteor_experiment(scenario=None):
    """Rows ``(lambda, epsilon, k, beta)`` in scenario order.

    For each rate the null is the truncated Poisson count and the
    alternative the same count shifted by ``k`` (re-folded at the same
    cutoff); beta is the exact minimum type II error.
    """
    s = MeteorScenario() if scenario is None else scenario
    rows = []
    for lam in s.lambda_values:
        fold = s.fold_point(lam)
        for eps in s.epsilon_values:
            for k in s.k_values:
                p0, p1 = meteor_hypotheses(lam, k, fold)
                rows.append((lam, eps, k, solve_classical(p0, p1, eps).beta))
    return rows


def laser_hypotheses(power, g, s, c, q, delta, n=5):
    """Received distributions for the idle and pulsing laser.

    The transmitted pulse is jittered by one slot either way with total
    probability ``q``, then every slot loses ``c`` (floored at 0), gains
    background ``s`` (capped at ``g``) and the whole sequence is mixed with
    the uniform distribution at weight ``delta``.
    """
    stack = compose(
        uniform_mix_map(delta, (g + 1) ** n),
        compose(lift(saturating_add_map(s, g), n), lift(loss_map(c, g), n)),
    )
    idle = jittered_pulse(0, g, n, q)
    pulse = jittered_pulse(power, g, n, q)
    return apply(stack, idle), apply(stack, pulse)


def laser_experiment(g, s, c, q, delta, n=5, powers=None):
    """Rows ``(power, kl_bits, reference_bits)`` for the jittered laser.

    ``powers`` defaults to every integer power strictly between ``c`` and
    ``g - s + c``; ``power == c`` is also accepted.
    """
    if powers is None:
        powers = list(range(c + 1, g - s + c))
    if not powers:
        raise DomainError("no admissible power in the requested range")
    rows = []
    for p in powers:
        check_laser_parameters(p, c, s, g, q, delta, n)
        p0, p1 = laser_hypotheses(p, g, s, c, q, delta, n)
        rows.append((p, kl(p0, p1), laser_example_kl(p, c, s, g, q, delta, n)))
    return rows


@dataclass(frozen=True, eq=False)
class MeasuredDataCase:
    """An observed outcome ``d`` to be checked against several signal models."""

    observed: int
    null: ClassicalDistribution
    models: tuple
    epsilon: float
    names: tuple = None

    def __post_init__(self):
        models = tuple(self.models)
        if not models:
            raise ValidationError("need at least one candidate model")
        if not 0 <= self.epsilon < 1:
            raise DomainError("epsilon must lie in [0, 1)")
        d = int(self.observed)
        if not 0 <= d < self.null.dim:
            raise ValidationError(f"observed outcome {d} outside the alphabet")
        for i, q in enumerate(models):
            if q.dim != self.null.dim:
                raise ValidationError(f"model {i} has the wrong dimension")
            if q.mass[d] <= 0:
                raise ValidationError(f"model {i} gives the observed outcome zero probability")
        names = tuple(f"model_{i}" for i in range(len(models))) if self.names is None else tuple(self.names)
        if len(names) != len(models):
            raise ValidationError("one name per model is required")
        object.__setattr__(self, "observed", d)
        object.__setattr__(self, "models", models)
        object.__setattr__(self, "names", names)


def analyze_measured_data(case, u=None, tol=1e-12):
    """Apply each model's optimal test to the observed outcome.

    ``A`` is the optimal null-acceptance weight vector for the model.  When
    ``A(d) = 0`` within ``tol`` the outcome lies in the kernel of ``A`` and
    the verdict is ``"not-evidence"``.  Otherwise the test is applied to
    ``d``: it accepts the null with probability ``A(d)``.  A caller-supplied
    ``u`` in ``[0, 1)`` realizes a randomized test (accept iff ``u < A(d)``);
    ``A(d) = 1`` accepts deterministically.

    Returns
    -------
    list of dict
        One report per model, JSON-serializable.
    """
    if u is not None and not 0 <= u < 1:
        raise DomainError("u must lie in [0, 1)")
    d = case.observed
    out = []
    for name, q in zip(case.names, case.models):
        cert = solve_classical(case.null, q, case.epsilon)
        accept = float(cert.decision.values[d])
        report = {
            "model": name,
            "observed": d,
            "epsilon": case.epsilon,
            "beta": cert.beta,
            "acceptance_probability": accept,
            "in_kernel": accept <= tol,
        }
        if accept <= tol:
            report["verdict"] = "not-evidence"
            report["deterministic"] = True
            report["decision"] = None
        else:
            report["verdict"] = "test-applied"
            report["deterministic"] = accept >= 1.0 - tol
            if report["deterministic"]:
                report["decision"] = "accept-null"
            elif u is None:
                report["decision"] = None
            else:
                report["decision"] = "accept-null" if u < accept else "reject-null"
        out.append(report)
    return out


def table_column(rows, index):
    return np.array([r[index] for r in rows], dtype=float)
