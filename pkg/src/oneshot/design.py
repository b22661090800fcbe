"""Sender-side design: choosing the device distribution.

Two problems are covered:

* maximize ``D(N(star) || N(P))`` over a polytope of device distributions
  (:func:`optimize_source_exact`, :func:`optimize_source_gradient`,
  :func:`em_power_design`);
* minimize the one-shot type II error of a designed artefact ``P`` seen
  through a noise channel, under an energy budget
  (:func:`inscribed_matter_design`).

The relative entropy is jointly convex, hence convex in its second argument,
so its maximum over a polytope sits at a vertex; vertex enumeration is the
exact method and projected gradient ascent a heuristic cross-check.
"""

import itertools
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linprog

from .channels import apply, compose
from .distributions import ClassicalDistribution
from .divergences import kl
from .errors import CapacityError, DomainError, SolverError, ValidationError
from .hyptest import solve_classical


FEAS_TOL = 1e-9
MAX_VERTEX_DIM = 12


@dataclass(frozen=True, eq=False)
class ConstraintPolytope:
    """Device distributions ``p`` with ``p >= 0``, ``sum(p) = 1`` and ``G p <= h``.

    The optional energy form adds the row ``energy . p <= budget``.
    """

    dim: int
    ineq_a: np.ndarray = None
    ineq_b: np.ndarray = None
    energy: np.ndarray = None
    budget: float = None

    def __post_init__(self):
        if self.dim < 1:
            raise ValidationError("polytope dimension must be positive")
        a = np.zeros((0, self.dim)) if self.ineq_a is None else np.array(self.ineq_a, dtype=float)
        b = np.zeros(0) if self.ineq_b is None else np.array(self.ineq_b, dtype=float).reshape(-1)
        a = a.reshape(-1, self.dim)
        if a.shape[0] != b.size:
            raise ValidationError("inequality rows and bounds disagree in number")
        if (self.energy is None) != (self.budget is None):
            raise ValidationError("energy form and budget must be given together")
        object.__setattr__(self, "ineq_a", a)
        object.__setattr__(self, "ineq_b", b)
        if self.energy is not None:
            e = np.array(self.energy, dtype=float).reshape(-1)
            if e.size != self.dim:
                raise ValidationError("energy form has the wrong length")
            object.__setattr__(self, "energy", e)
            object.__setattr__(self, "budget", float(self.budget))
        if self.feasible_point() is None:
            raise DomainError("constraint polytope is empty")

    @classmethod
    def simplex(cls, dim):
        return cls(dim)

    @classmethod
    def singleton(cls, point):
        """The polytope containing only ``point``."""
        p = point.mass if isinstance(point, ClassicalDistribution) else np.asarray(point, float)
        return cls(p.size, np.eye(p.size), p)

    def rows(self):
        """All inequality rows ``(G, h)`` other than non-negativity."""
        if self.energy is None:
            return self.ineq_a, self.ineq_b
        return np.vstack([self.ineq_a, self.energy]), np.append(self.ineq_b, self.budget)

    def violation(self, p):
        p = np.asarray(p, dtype=float)
        g, h = self.rows()
        worst = max(0.0, -p.min(), abs(p.sum() - 1.0))
        if h.size:
            worst = max(worst, float(np.max(g @ p - h)))
        return worst

    def contains(self, p, tol=FEAS_TOL):
        return self.violation(p) <= tol

    def feasible_point(self):
        g, h = self.rows()
        res = linprog(
            np.zeros(self.dim),
            A_ub=g if h.size else None,
            b_ub=h if h.size else None,
            A_eq=np.ones((1, self.dim)),
            b_eq=[1.0],
            bounds=[(0, None)] * self.dim,
            method="highs",
        )
        return res.x if res.status == 0 else None

    def vertices(self):
        """All extreme points, sorted lexicographically.

        Each vertex makes ``dim - 1`` inequalities (non-negativity included)
        active alongside ``sum(p) = 1``; every such subset is tried.
        """
        d = self.dim
        if d > MAX_VERTEX_DIM:
            raise CapacityError(f"vertex enumeration is limited to dimension {MAX_VERTEX_DIM}")
        g, h = self.rows()
        big_g = np.vstack([-np.eye(d), g])
        big_h = np.concatenate([np.zeros(d), h])
        found = {}
        for active in itertools.combinations(range(big_g.shape[0]), d - 1):
            lhs = np.vstack([np.ones((1, d)), big_g[list(active)]])
            rhs = np.concatenate([[1.0], big_h[list(active)]])
            if abs(np.linalg.det(lhs)) < 1e-12:
                continue
            p = np.linalg.solve(lhs, rhs)
            if np.all(big_g @ p <= big_h + FEAS_TOL):
                p = np.where(np.abs(p) < 1e-14, 0.0, p)
                found.setdefault(tuple(np.round(p, 10)), p)
        return [found[k] for k in sorted(found)]

    def project(self, x, max_iter=2000, tol=1e-12):
        """Euclidean projection onto the polytope by Dykstra's algorithm."""
        g, h = self.rows()
        sets = [("simplex", None, None)] + [("half", g[i], h[i]) for i in range(h.size)]
        if len(sets) == 1:
            return _project_simplex(x)
        y = np.asarray(x, dtype=float).copy()
        incr = [np.zeros_like(y) for _ in sets]
        for _ in range(max_iter):
            prev = y.copy()
            for k, (kind, a, b) in enumerate(sets):
                z = y + incr[k]
                if kind == "simplex":
                    y = _project_simplex(z)
                else:
                    excess = a @ z - b
                    y = z - (excess / (a @ a)) * a if excess > 0 and a @ a > 0 else z
                incr[k] = z - y
            if np.max(np.abs(y - prev)) < tol and self.violation(y) <= tol:
                break
        if self.violation(y) > 1e-7:
            raise SolverError("projection onto the constraint polytope did not converge")
        return y


def _project_simplex(x):
    """Euclidean projection onto the probability simplex (sort-based)."""
    u = np.sort(x)[::-1]
    css = np.cumsum(u) - 1.0
    k = np.arange(1, x.size + 1)
    rho = np.nonzero(u - css / k > 0)[0][-1]
    return np.maximum(x - css[rho] / (rho + 1.0), 0.0)


@dataclass(frozen=True, eq=False)
class DesignResult:
    """Best device distribution found and its objective (bits or beta)."""

    best_device: ClassicalDistribution
    objective: float
    method: str
    iterations: int
    info: dict = field(default_factory=dict)


def _as_mass(x):
    return x.mass if isinstance(x, ClassicalDistribution) else np.asarray(x, dtype=float)


def _source_objective(channel, target):
    def f(p):
        return kl(target, channel.apply_vector(np.clip(p, 0.0, None)))
    return f


def optimize_source_exact(channel, star, polytope):
    """Maximize ``D(N(star) || N(P))`` over the vertices of ``polytope``.

    Ties are broken by lexicographic vertex order.  An infinite optimum
    comes with the first vertex whose output misses part of the support of
    ``N(star)`` as witness (``info['witness']``).
    """
    if channel.in_dim != polytope.dim:
        raise ValidationError("channel input and polytope dimension differ")
    target = apply(channel, star)
    f = _source_objective(channel, target)
    best_v, best_val = None, -math.inf
    verts = polytope.vertices()
    for v in verts:
        val = f(v)
        if val > best_val:
            best_v, best_val = v, val
    info = {"vertices": len(verts)}
    if math.isinf(best_val):
        info["witness"] = best_v.copy()
    return DesignResult(ClassicalDistribution(best_v), best_val, "vertex-enumeration", len(verts), info)


def _gradient(channel, target, p):
    out = channel.apply_vector(p)
    live = target.mass > 0
    ratio = np.zeros_like(out)
    ratio[live] = target.mass[live] / out[live]
    return -channel.adjoint_vector(ratio) / math.log(2.0)


def optimize_source_gradient(channel, star, polytope, restarts=8, seed=0, max_iter=500):
    """Multi-start projected gradient ascent on ``D(N(star) || N(P))``.

    Steps use Armijo backtracking from length 1 with halving; a trial point
    where the objective becomes infinite is rejected like a failed step, so
    the iterate never leaves the region where the gradient is defined.
    Results are reproducible for a fixed ``seed``.
    """
    if channel.in_dim != polytope.dim:
        raise ValidationError("channel input and polytope dimension differ")
    target = apply(channel, star)
    f = _source_objective(channel, target)
    rng = np.random.default_rng(seed)
    best_p, best_val, total_iter = None, -math.inf, 0
    for r in range(max(1, restarts)):
        start = polytope.feasible_point() if r == 0 else rng.dirichlet(np.ones(polytope.dim))
        p = polytope.project(start)
        val = f(p)
        if math.isinf(val):
            # The gradient is undefined here; keep the point as a candidate only.
            if val > best_val:
                best_p, best_val = p, val
            continue
        for _ in range(max_iter):
            total_iter += 1
            grad = _gradient(channel, target, p)
            step, moved = 1.0, False
            while step > 1e-12:
                trial = polytope.project(p + step * grad)
                f_trial = f(trial)
                if math.isfinite(f_trial) and f_trial >= val + 1e-4 * grad @ (trial - p):
                    moved = True
                    break
                step *= 0.5
            if not moved or f_trial - val < 1e-13:
                if moved and f_trial > val:
                    p, val = trial, f_trial
                break
            p, val = trial, f_trial
        if val > best_val:
            best_p, best_val = p, val
    return DesignResult(
        ClassicalDistribution(best_p / best_p.sum()),
        best_val,
        "multi-start-gradient",
        total_iter,
        {"restarts": restarts, "seed": seed},
    )


def em_power_design(noise_stack, star, avg_power, peak_power, power_cost=None, levels=None):
    """Best pulse distribution under average and peak power constraints.

    Parameters
    ----------
    noise_stack : sequence of channels
        ``(N_s, N_t, N_r)``; they are applied in this order.
    star : ClassicalDistribution
        Device distribution of the idle transmitter.
    avg_power : float
        Bound on ``power_cost . P``.
    peak_power : float
        No mass on symbols whose power level exceeds this.
    power_cost : array_like, optional
        Linear power functional; defaults to the power levels.
    levels : array_like, optional
        Power level of each device symbol; defaults to ``0, 1, 2, ...``.
    """
    chan = noise_stack[0]
    for nxt in noise_stack[1:]:
        chan = compose(nxt, chan)
    dim = chan.in_dim
    lv = np.arange(dim, dtype=float) if levels is None else np.asarray(levels, dtype=float)
    cost = lv if power_cost is None else np.asarray(power_cost, dtype=float)
    over = np.flatnonzero(lv > peak_power)
    rows = [np.eye(dim)[i] for i in over]
    bounds = [0.0] * len(over)
    try:
        poly = ConstraintPolytope(dim, np.array(rows).reshape(-1, dim), bounds, cost, avg_power)
    except DomainError as exc:
        raise DomainError("average and peak power constraints are infeasible") from exc
    res = optimize_source_exact(chan, star, poly)
    res.info["polytope"] = poly
    return res


def _min_linear(weights, polytope):
    g, h = polytope.rows()
    res = linprog(
        weights,
        A_ub=g if h.size else None,
        b_ub=h if h.size else None,
        A_eq=np.ones((1, polytope.dim)),
        b_eq=[1.0],
        bounds=[(0, None)] * polytope.dim,
        method="highs",
    )
    if res.status != 0:
        raise SolverError(f"design LP failed: {res.message}")
    return np.clip(res.x, 0.0, None)


def _interior_start(polytope):
    if polytope.dim <= MAX_VERTEX_DIM:
        return np.mean(polytope.vertices(), axis=0)
    return polytope.feasible_point()


def inscribed_matter_design(noise, null, eps, energy, budget, initial=None, max_rounds=100, tol=1e-10):
    """Alternating minimization of the one-shot type II error of a designed object.

    Alternates between the optimal test for the current design
    (likelihood-ratio solver on ``null`` vs ``N(P_d)``) and the design
    minimizing that test's acceptance of ``N(P_d)`` over the energy
    polytope (an LP).  Each round cannot increase beta; the loop stops when
    beta drops by less than ``tol`` or after ``max_rounds``.  The result is
    a stationary point only.

    Returns
    -------
    (DesignResult, TestCertificate)
    """
    try:
        poly = ConstraintPolytope(noise.in_dim, energy=energy, budget=budget)
    except DomainError as exc:
        raise DomainError(f"no design meets the energy budget {budget}") from exc
    p = _interior_start(poly) if initial is None else _as_mass(initial).astype(float)
    if not poly.contains(p):
        raise ValidationError("initial design violates the constraints")
    cert = solve_classical(null, noise.apply_vector(p), eps)
    rounds = 0
    for rounds in range(1, max_rounds + 1):
        w = noise.adjoint_vector(cert.decision.values)
        cand = _min_linear(w, poly)
        new = solve_classical(null, noise.apply_vector(cand), eps)
        if new.beta < cert.beta:
            improvement = cert.beta - new.beta
            p, cert = cand, new
            if improvement < tol:
                break
        else:
            break
    result = DesignResult(
        ClassicalDistribution(p / p.sum()),
        cert.beta,
        "alternating",
        rounds,
        {"globally_optimal": False, "stationary": True},
    )
    return result, cert


def budget_sweep(noise, null, eps, energy, budgets):
    """Run :func:`inscribed_matter_design` over increasing budgets.

    Each budget is solved from the interior start and from the previous
    design; the better run is kept.  The previous design is feasible for the
    next (larger) budget, so the reported betas never increase.
    """
    budgets = list(budgets)
    if any(b2 < b1 for b1, b2 in zip(budgets, budgets[1:])):
        raise ValidationError("budgets must be non-decreasing")
    out, prev = [], None
    for b in budgets:
        res, cert = inscribed_matter_design(noise, null, eps, energy, b)
        if prev is not None:
            warm = inscribed_matter_design(noise, null, eps, energy, b, initial=prev)
            if warm[1].beta < cert.beta:
                res, cert = warm
        prev = res.best_device
        out.append((res, cert))
    return out
