"""Optimal one-shot tests and minimum type II errors.

``xi(P0 || P1)`` is the smallest ``<P1, A>`` over decision operators with
``<P0, A> >= 1 - eps``.  Three routes compute it:

* :func:`solve_classical` - greedy likelihood-ratio filling (exact LP optimum);
* :func:`solve_quantum` - threshold bisection over the quantum
  Neyman-Pearson family ``{rho - t sigma > 0}``;
* :func:`solve_composite` - primal-dual interior point on the SDP with
  several nulls and alternatives.

Every solver returns a :class:`TestCertificate` whose dual variables are
feasible by construction, so ``gap = beta - dual_value`` bounds the
suboptimality of the returned decision function.
"""

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from . import config
from ._sdp import solve_hypothesis_sdp
from .decision import DecisionFunction
from .distributions import (
    ClassicalDistribution,
    DensityOperator,
    classical_to_density,
    iid_power,
)
from .errors import CapacityError, DomainError, SolverError, ValidationError
from .hermitian import eigendecompose, positive_part

log = logging.getLogger(__name__)

RATIO_TIE_RTOL = 1e-12
BISECTION_MAX_ITER = 200
BISECTION_TOL = 1e-12
COMPOSITE_GAP_TOL = 1e-6


@dataclass(frozen=True, eq=False)
class TestCertificate:
    """Primal value with its dual certificate and decision function.

    ``z`` has one entry per null, ``v`` one per alternative.  ``Z`` is a
    matrix for quantum problems and the diagonal vector for classical ones.
    """

    __test__ = False

    epsilon: float
    beta: float
    alpha: float
    dual_value: float
    gap: float
    z: np.ndarray
    v: np.ndarray
    Z: np.ndarray
    decision: DecisionFunction
    info: dict = field(default_factory=dict)

    def dhte(self, base=2.0):
        return math.inf if self.beta <= 0 else -math.log(self.beta, base)


def _check_eps(eps):
    if not (0.0 <= eps < 1.0) or not math.isfinite(eps):
        raise DomainError(f"epsilon must lie in [0, 1), got {eps}")
    return float(eps)


def _mass(p):
    if isinstance(p, ClassicalDistribution):
        return p.mass
    return np.asarray(p, dtype=float).reshape(-1)


def solve_classical(p0, p1, eps):
    """Exact minimum type II error for classical hypotheses.

    Outcomes are visited in increasing likelihood ratio ``P1/P0``;
    acceptance weight 1 is assigned until the accepted null mass reaches
    ``1 - eps`` and the boundary block (all outcomes sharing the boundary
    ratio) gets a common fractional weight.  Outcomes with ``P0 = P1 = 0``
    are accepted for free; outcomes with ``P0 = 0 < P1`` are never accepted.

    Parameters
    ----------
    p0 : ClassicalDistribution
        Normalized null distribution.
    p1 : ClassicalDistribution
        Alternative; may be sub-normalized.
    eps : float
        Type I error budget in ``[0, 1)``.
    """
    eps = _check_eps(eps)
    if isinstance(p0, ClassicalDistribution):
        p0.require_normalized("the null hypothesis")
    a, b = _mass(p0), _mass(p1)
    if a.shape != b.shape:
        raise ValidationError(f"dimension mismatch: {a.size} vs {b.size}")
    need = 1.0 - eps
    w = np.zeros(a.size)

    free = (a == 0) & (b == 0)
    zero_ratio = (a > 0) & (b == 0)
    w[free | zero_ratio] = 1.0
    accepted = a[zero_ratio].sum()
    threshold = 0.0

    if accepted < need:
        idx = np.flatnonzero((a > 0) & (b > 0))
        ratio = b[idx] / a[idx]
        order = np.argsort(ratio, kind="stable")
        idx, ratio = idx[order], ratio[order]
        start = 0
        while start < idx.size:
            stop = start + 1
            while stop < idx.size and ratio[stop] - ratio[start] <= RATIO_TIE_RTOL * ratio[start]:
                stop += 1
            block = idx[start:stop]
            block_mass = a[block].sum()
            if accepted + block_mass < need:
                w[block] = 1.0
                accepted += block_mass
            else:
                w[block] = min(1.0, max(0.0, (need - accepted) / block_mass))
                threshold = ratio[start]
                break
            start = stop
        else:
            # Rounding left the accepted mass a hair below 1 - eps.
            threshold = ratio[-1] if idx.size else 0.0

    beta = float(b @ w)
    alpha = float(1.0 - a @ w)
    big_z = np.maximum(threshold * a - b, 0.0)
    dual = float(need * threshold - big_z.sum())
    return TestCertificate(
        epsilon=eps,
        beta=beta,
        alpha=alpha,
        dual_value=dual,
        gap=beta - dual,
        z=np.array([threshold]),
        v=np.array([1.0]),
        Z=big_z,
        decision=DecisionFunction.classical(w),
        info={"method": "likelihood-ratio", "threshold_ratio": float(threshold)},
    )


def _as_state(x):
    if isinstance(x, DensityOperator):
        return x.matrix
    if isinstance(x, ClassicalDistribution):
        return classical_to_density(x).matrix
    return np.asarray(x, dtype=complex)


def _np_family(rho, sigma, t):
    """Spectral data of ``rho - t sigma`` and the null acceptance of its parts."""
    spec = eigendecompose(rho - t * sigma)
    lam = spec.eigenvalues
    v = spec.eigenvectors
    weights = np.real(np.einsum("ik,ij,jk->k", v.conj(), rho, v))
    tol = 1e-12 * max(1.0, np.max(np.abs(lam)))
    gt = lam > tol
    ge = lam >= -tol
    return spec, weights, gt, ge


def _quantum_dual(rho, sigma, eps, ts):
    best = (-math.inf, 0.0, np.zeros_like(rho))
    for t in ts:
        if not t > 0:
            continue
        z = min(1.0 / t, 1e12)
        big_z = positive_part(z * rho - sigma)
        value = (1.0 - eps) * z - np.trace(big_z).real
        if value > best[0]:
            best = (value, z, big_z)
    if best[0] == -math.inf:
        return 0.0, 0.0, np.zeros_like(rho)
    return best


def solve_quantum(rho, sigma, eps):
    """Minimum type II error for a pair of density operators.

    Bisects the threshold ``t`` of the Neyman-Pearson family
    ``A(t) = {rho - t sigma > 0}`` until the null acceptance brackets
    ``1 - eps`` to within 1e-12, then mixes the two bracketing tests so the
    constraint holds with equality.  When the kernel of ``sigma`` already
    captures ``1 - eps`` of the null, ``beta`` is zero.
    """
    eps = _check_eps(eps)
    if isinstance(rho, DensityOperator):
        rho.require_normalized("the null hypothesis")
    r, s = _as_state(rho), _as_state(sigma)
    if r.shape != s.shape:
        raise ValidationError(f"dimension mismatch: {r.shape} vs {s.shape}")
    need = 1.0 - eps

    sig_spec = eigendecompose(s)
    kernel = sig_spec.eigenvalues <= 1e-12
    if np.any(kernel):
        pk = sig_spec.projector(kernel)
        if np.trace(r @ pk).real >= need - BISECTION_TOL:
            a = pk
            beta = max(float(np.trace(s @ a).real), 0.0)
            return TestCertificate(
                epsilon=eps,
                beta=beta,
                alpha=float(1.0 - np.trace(r @ a).real),
                dual_value=0.0,
                gap=beta,
                z=np.array([0.0]),
                v=np.array([1.0]),
                Z=np.zeros_like(r),
                decision=DecisionFunction.quantum(a),
                info={"method": "kernel", "threshold": math.inf},
            )

    rho_spec = eigendecompose(r)
    lo = 0.0
    a_lo = rho_spec.projector(rho_spec.eigenvalues > 1e-12)
    f_lo = float(np.trace(r @ a_lo).real)
    lam_min_pos = sig_spec.eigenvalues[~kernel][-1]
    hi = rho_spec.eigenvalues[0] / lam_min_pos + 1.0
    while True:
        spec, wts, gt, ge = _np_family(r, s, hi)
        f_hi = float(wts[ge].sum())
        if f_hi < need:
            a_hi = spec.projector(ge)
            break
        hi *= 2.0
        if hi > 1e300:
            raise SolverError("could not bracket the Neyman-Pearson threshold")

    exact = None
    iterations = 0
    for iterations in range(1, BISECTION_MAX_ITER + 1):
        if f_lo - need <= BISECTION_TOL:
            break
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        spec, wts, gt, ge = _np_family(r, s, mid)
        f_gt = float(wts[gt].sum())
        f_ge = float(wts[ge].sum())
        if f_gt <= need <= f_ge:
            p_gt = spec.projector(gt)
            edge = ge & ~gt
            frac = 0.0 if f_ge - f_gt <= 0 else (need - f_gt) / (f_ge - f_gt)
            exact = (mid, p_gt + frac * spec.projector(edge))
            break
        if f_gt > need:
            lo, a_lo, f_lo = mid, spec.projector(gt), f_gt
        else:
            hi, a_hi, f_hi = mid, spec.projector(ge), f_ge

    if exact is not None:
        t_star, a = exact
    else:
        t_star = 0.5 * (lo + hi)
        mix = 1.0 if f_lo - f_hi <= 0 else (need - f_hi) / (f_lo - f_hi)
        mix = min(1.0, max(0.0, mix))
        a = mix * a_lo + (1.0 - mix) * a_hi
    a = 0.5 * (a + a.conj().T)

    beta = float(np.trace(s @ a).real)
    alpha = float(1.0 - np.trace(r @ a).real)
    dual, z, big_z = _quantum_dual(r, s, eps, (t_star, lo, hi))
    return TestCertificate(
        epsilon=eps,
        beta=beta,
        alpha=alpha,
        dual_value=float(dual),
        gap=beta - float(dual),
        z=np.array([z]),
        v=np.array([1.0]),
        Z=big_z,
        decision=DecisionFunction.quantum(a),
        info={"method": "bisection", "threshold": float(t_star), "iterations": iterations},
    )


def _repair_primal(x, nulls, eps):
    """Clip ``x`` into ``[0, I]`` and blend with ``I`` until every null passes."""
    spec = eigendecompose(x, tol=1e-8)
    x = spec.apply(lambda lam: np.clip(lam, 0.0, 1.0))
    need = 1.0 - eps
    theta = 0.0
    for p in nulls:
        acc = np.trace(x @ p).real
        if acc < need and acc < 1.0:
            theta = max(theta, (need - acc) / (1.0 - acc))
    x = (1.0 - theta) * x + theta * np.eye(x.shape[0])
    return 0.5 * (x + x.conj().T)


def dual_objective(z, v, nulls, alts, eps):
    """Best dual value for fixed multipliers: ``Z`` is the positive part."""
    h = sum(zi * p for zi, p in zip(z, nulls)) - sum(vj * q for vj, q in zip(v, alts))
    big_z = positive_part(h)
    return (1.0 - eps) * float(np.sum(z)) - float(np.trace(big_z).real), big_z


def verify_dual(cert, nulls, alts):
    """Check a certificate's dual variables by substituting them back.

    Returns the largest violation among: sign constraints on ``z`` and
    ``v``, ``sum(v) <= 1``, ``Z >= 0``, ``Z >= sum z P - sum v Q`` and the
    reported dual value.
    """
    nulls = [_as_state(p) for p in nulls]
    alts = [_as_state(q) for q in alts]
    z, v = np.asarray(cert.z, float), np.asarray(cert.v, float)
    big_z = cert.Z if np.ndim(cert.Z) == 2 else np.diag(cert.Z)
    h = sum(zi * p for zi, p in zip(z, nulls)) - sum(vj * q for vj, q in zip(v, alts))
    worst = max(0.0, -z.min(initial=0.0), -v.min(initial=0.0), v.sum() - 1.0)
    worst = max(worst, -eigendecompose(big_z, tol=1e-9).eigenvalues[-1])
    worst = max(worst, -eigendecompose(big_z - h, tol=1e-9).eigenvalues[-1])
    value = (1.0 - cert.epsilon) * z.sum() - np.trace(big_z).real
    worst = max(worst, abs(value - cert.dual_value))
    return float(worst)


def solve_composite(nulls, alts, eps, max_iter=200, gap_tol=1e-8):
    """Minimum worst-case type II error over finite hypothesis sets.

    Solves ``min gamma`` s.t. ``<X, P_i> >= 1 - eps`` for every null,
    ``<X, Q_j> <= gamma`` for every alternative and ``0 <= X <= I``.

    The interior-point iterate is turned into a certificate by clipping the
    primal into ``[0, I]`` (blending with ``I`` if a null constraint slipped)
    and completing ``(z, v)`` with the optimal ``Z`` for them, so the
    reported ``beta`` is attained and ``dual_value`` is a true lower bound.

    Raises
    ------
    SolverError
        If the certified gap exceeds 1e-6 after ``max_iter`` iterations.
    """
    eps = _check_eps(eps)
    if not nulls or not alts:
        raise ValidationError("need at least one null and one alternative")
    for p in nulls:
        if getattr(p, "subnormalized", False):
            raise ValidationError("null hypotheses must be normalized")
    ps = [_as_state(p) for p in nulls]
    qs = [_as_state(q) for q in alts]
    n = ps[0].shape[0]
    if any(x.shape != (n, n) for x in ps + qs):
        raise ValidationError("all hypotheses must share one dimension")
    if n > config.MAX_SDP_DIM:
        raise CapacityError(f"SDP dimension {n} exceeds the cap of {config.MAX_SDP_DIM}")

    res = solve_hypothesis_sdp(ps, qs, eps, max_iter=max_iter, gap_tol=gap_tol)
    x = _repair_primal(res.x, ps, eps)
    beta = max(max(np.trace(x @ q).real for q in qs), 0.0)
    alpha = max(1.0 - np.trace(x @ p).real for p in ps)
    z = np.maximum(res.z, 0.0)
    v = np.maximum(res.v, 0.0)
    v = v / max(1.0, v.sum())
    dual, big_z = dual_objective(z, v, ps, qs, eps)
    gap = beta - dual
    if gap > COMPOSITE_GAP_TOL:
        raise SolverError(
            f"interior point stopped with certified gap {gap:.3e} after {res.iterations} iterations",
            last_gap=gap,
            iterations=res.iterations,
        )
    if not res.converged:
        log.warning("interior point hit max_iter; certified gap %.3e", gap)
    return TestCertificate(
        epsilon=eps,
        beta=float(beta),
        alpha=float(alpha),
        dual_value=float(dual),
        gap=float(gap),
        z=z,
        v=v,
        Z=big_z,
        decision=DecisionFunction.quantum(x),
        info={
            "method": "interior-point",
            "iterations": res.iterations,
            "converged": res.converged,
            "solver_gap": res.primal_value - res.dual_value,
        },
    )


def finite_time_beta(eta, signals, eps, extra_slots=0):
    """Asymptotic type II error for finite-length signals that return to the null.

    Builds ``{rho^(k) : rho in eta}`` against ``signals`` (each over ``k``
    slots) and solves the composite program; this value is reached at every
    block length ``n >= k``.  ``extra_slots = m`` solves the longer problem
    ``rho^(k+m)`` against ``sigma (x) rho^(m)`` explicitly, which is only a
    composite program of this form for a single null.
    """
    eps = _check_eps(eps)
    eta = [x if isinstance(x, DensityOperator) else DensityOperator(_as_state(x)) for x in eta]
    signals = [x if isinstance(x, DensityOperator) else DensityOperator(_as_state(x)) for x in signals]
    if not eta or not signals:
        raise ValidationError("need at least one null state and one signal")
    d = eta[0].dim
    dims = {s.dim for s in signals}
    if len(dims) != 1:
        raise ValidationError("all signals must share one slot count")
    sdim = dims.pop()
    k = round(math.log(sdim, d)) if d > 1 else 1
    if d ** k != sdim:
        raise ValidationError(f"signal dimension {sdim} is not a power of {d}")
    if d ** (k + extra_slots) > config.MAX_SDP_DIM:
        raise CapacityError(f"{d}^{k + extra_slots} exceeds the SDP cap of {config.MAX_SDP_DIM}")
    if extra_slots and len(eta) > 1:
        raise ValidationError("extra_slots needs a single null state")
    nulls = [iid_power(rho, k + extra_slots).matrix for rho in eta]
    alts = [s.matrix for s in signals]
    if extra_slots:
        tail = iid_power(eta[0], extra_slots).matrix
        alts = [np.kron(q, tail) for q in alts]
    cert = solve_composite(nulls, alts, eps)
    cert.info["slots"] = k + extra_slots
    return cert


def evaluate_errors(a, p0, p1):
    """Type I and type II errors ``(1 - <P0, A>, <P1, A>)`` of a decision function."""
    if isinstance(a, DecisionFunction) and a.kind == "classical" and not (
        isinstance(p0, DensityOperator) or isinstance(p1, DensityOperator)
    ):
        w = a.values
        m0, m1 = _mass(p0), _mass(p1)
        if m0.size != w.size or m1.size != w.size:
            raise ValidationError("dimension mismatch")
        return float(1.0 - m0 @ w), float(m1 @ w)
    op = a.operator() if isinstance(a, DecisionFunction) else np.asarray(a, dtype=complex)
    r, s = _as_state(p0), _as_state(p1)
    if op.shape != r.shape or op.shape != s.shape:
        raise ValidationError("dimension mismatch")
    return float(1.0 - np.trace(r @ op).real), float(np.trace(s @ op).real)


def _is_classical(x):
    return isinstance(x, ClassicalDistribution) or (isinstance(x, np.ndarray) and x.ndim == 1)


def solve(p0, p1, eps):
    """Dispatch to the classical or quantum solver by input kind."""
    if _is_classical(p0) and _is_classical(p1):
        return solve_classical(p0, p1, eps)
    return solve_quantum(p0, p1, eps)


def dhte(p0, p1, eps, base=2.0):
    """Hypothesis-testing relative divergence ``-log xi`` (bits by default).

    Returns ``math.inf`` when the minimum type II error is zero.
    """
    return solve(p0, p1, eps).dhte(base)


def bits_to_nats(value):
    return value * math.log(2.0)
