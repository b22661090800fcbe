"""Relative entropies and Stein-rate curves, plus the pulsed-laser closed form.

All values are in bits.  ``math.inf`` is returned, never raised, when the
first argument has mass outside the support of the second.
"""

import math
from dataclasses import dataclass

import numpy as np

from .distributions import ClassicalDistribution, DensityOperator, iid_power
from .errors import DomainError, ValidationError
from .hermitian import eigendecompose
from .hyptest import solve

LN2 = math.log(2.0)
SUPPORT_TOL = 1e-12


def kl(p0, p1):
    """Kullback-Leibler divergence ``D(P0 || P1)`` in bits.

    Terms with ``P0(y) = 0`` contribute zero; any ``y`` with
    ``P0(y) > 0 = P1(y)`` makes the result ``inf``.
    """
    a = p0.mass if isinstance(p0, ClassicalDistribution) else np.asarray(p0, dtype=float)
    b = p1.mass if isinstance(p1, ClassicalDistribution) else np.asarray(p1, dtype=float)
    if a.shape != b.shape:
        raise ValidationError(f"dimension mismatch: {a.size} vs {b.size}")
    live = a > 0
    if np.any(b[live] <= 0):
        return math.inf
    return max(float(np.sum(a[live] * np.log2(a[live] / b[live]))), 0.0)


def quantum_relative_entropy(rho, sigma):
    """Umegaki relative entropy ``Tr rho (log rho - log sigma)`` in bits."""
    r = rho.matrix if isinstance(rho, DensityOperator) else np.asarray(rho, dtype=complex)
    s = sigma.matrix if isinstance(sigma, DensityOperator) else np.asarray(sigma, dtype=complex)
    if r.shape != s.shape:
        raise ValidationError(f"dimension mismatch: {r.shape} vs {s.shape}")
    rs = eigendecompose(r)
    ss = eigendecompose(s)
    r_pos = rs.eigenvalues > SUPPORT_TOL
    s_ker = ss.eigenvalues <= SUPPORT_TOL
    # Overlap of rho's support with sigma's kernel, weighted by rho.
    if np.any(s_ker):
        leak = np.real(np.einsum("ik,ij,jk->", ss.eigenvectors[:, s_ker].conj(), r,
                                 ss.eigenvectors[:, s_ker]))
        if leak > SUPPORT_TOL:
            return math.inf
    lam = rs.eigenvalues[r_pos]
    first = float(np.sum(lam * np.log2(lam)))
    mu = ss.eigenvalues
    # Tr rho log sigma = sum_j log(mu_j) <v_j| rho |v_j> over sigma's support.
    weights = np.real(np.einsum("ij,ik,kj->j", ss.eigenvectors.conj(), r, ss.eigenvectors))
    keep = ~s_ker
    second = float(np.sum(weights[keep] * np.log2(mu[keep])))
    return max(first - second, 0.0)


@dataclass(frozen=True)
class RateCurve:
    """Normalized one-shot divergences ``D_H / n`` against the Stein limit."""

    epsilon: float
    points: tuple
    reference_rate: float

    @property
    def ns(self):
        return np.array([n for n, _ in self.points])

    @property
    def rates(self):
        return np.array([r for _, r in self.points])

    def rows(self):
        return [(n, r, self.reference_rate) for n, r in self.points]

    header = ("n", "rate_bits", "reference_bits")


def stein_rate_curve(p0, p1, eps, n_max):
    """``(1/n) D_H^eps(P0^n || P1^n)`` for ``n = 1..n_max`` by exact solves.

    Classical inputs go through the likelihood-ratio solver, density
    operators through threshold bisection.  The reference rate is the
    relative entropy of the single-slot pair.
    """
    if n_max < 1:
        raise DomainError("n_max must be at least 1")
    points = []
    for n in range(1, n_max + 1):
        cert = solve(iid_power(p0, n), iid_power(p1, n), eps)
        points.append((n, cert.dhte() / n))
    if isinstance(p0, DensityOperator):
        ref = quantum_relative_entropy(p0, p1)
    else:
        ref = kl(p0, p1)
    return RateCurve(float(eps), tuple(points), ref)


def check_laser_parameters(power, c, s, g, q, delta, n):
    if not 0 < q < 1:
        raise DomainError(f"jitter probability must lie in (0, 1), got {q}")
    if not 0 < delta < 1:
        raise DomainError(f"mixing weight must lie in (0, 1), got {delta}")
    if n < 3:
        raise DomainError("need at least three slots for a jittered pulse")
    if not 0 <= s <= g or c < 0:
        raise DomainError("need 0 <= s <= g and c >= 0")
    if power != c and not c < power < g - s + c:
        raise DomainError(f"power {power} outside the range ({c}, {g - s + c})")


def laser_example_kl(power, c, s, g, q, delta, n=5):
    """Closed-form ``D(P0 || P1)`` in bits for the jittered laser pulse.

    The null is the all-background sequence smeared by uniform mixing; the
    alternative moves mass to the three jitter positions of the received
    pulse.  Only four sequences differ between the two, giving

    ``(1-d+k) ln((1-d+k)/k) - k [ln(1 + (1-d)(1-q)/k) + 2 ln(1 + q(1-d)/(2k))]``

    nats with ``k = d / (g+1)^n`` and ``d = delta``, independent of
    ``power``.  Returns 0 when ``power == c``.
    """
    check_laser_parameters(power, c, s, g, q, delta, n)
    if power == c:
        return 0.0
    kappa = delta / float(g + 1) ** n
    keep = 1.0 - delta
    head = keep + kappa
    nats = head * math.log(head / kappa) - kappa * (
        math.log1p(keep * (1.0 - q) / kappa) + 2.0 * math.log1p(q * keep / (2.0 * kappa))
    )
    return nats / LN2
