"""Classical distributions and density operators, with their constructors.

Outcomes of a sequence space ``Y^n`` with ``|Y| = alphabet`` are indexed in
base ``alphabet`` with the first slot as the most significant digit, which is
exactly the ordering produced by ``np.kron`` of per-slot vectors.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats

from . import config
from .errors import CapacityError, DomainError, ValidationError
from .hermitian import as_hermitian, eigendecompose, kron

NORM_TOL = 1e-12
STATE_TOL = 1e-10


@dataclass(frozen=True)
class SequenceSpace:
    """Sequences of ``length`` symbols drawn from ``range(alphabet)``."""

    alphabet: int
    length: int = 1

    def __post_init__(self):
        if self.alphabet < 1 or self.length < 1:
            raise ValidationError("alphabet and length must be positive")
        if self.alphabet ** self.length > config.MAX_OUTCOMES:
            raise CapacityError(
                f"{self.alphabet}^{self.length} outcomes exceed the cap of {config.MAX_OUTCOMES}"
            )

    @property
    def size(self):
        return self.alphabet ** self.length

    def index(self, sequence):
        seq = tuple(int(s) for s in sequence)
        if len(seq) != self.length or any(s < 0 or s >= self.alphabet for s in seq):
            raise ValidationError(f"{sequence!r} is not a sequence of this space")
        idx = 0
        for s in seq:
            idx = idx * self.alphabet + s
        return idx

    def sequence(self, index):
        if not 0 <= index < self.size:
            raise ValidationError(f"outcome index {index} out of range")
        digits = []
        for _ in range(self.length):
            index, r = divmod(index, self.alphabet)
            digits.append(r)
        return tuple(reversed(digits))


@dataclass(frozen=True, eq=False)
class ClassicalDistribution:
    """Probability vector over a finite (possibly sequence) alphabet.

    ``subnormalized`` marks outputs of trace non-increasing maps; such
    vectors may sum to less than one and are rejected by operations that
    need a normalized input.
    """

    mass: np.ndarray
    space: SequenceSpace = None
    subnormalized: bool = False

    def __post_init__(self):
        m = np.array(self.mass, dtype=float).reshape(-1)
        if m.size == 0:
            raise ValidationError("distribution needs at least one outcome")
        if not np.all(np.isfinite(m)):
            raise ValidationError("mass has non-finite entries")
        if np.any(m < 0):
            raise ValidationError(f"negative mass {m.min():.3e}")
        total = m.sum()
        if self.subnormalized:
            if total > 1 + NORM_TOL:
                raise ValidationError(f"sub-normalized mass sums to {total!r} > 1")
        elif abs(total - 1) > NORM_TOL:
            raise ValidationError(f"mass sums to {total!r}, expected 1")
        space = self.space if self.space is not None else SequenceSpace(m.size, 1)
        if space.size != m.size:
            raise ValidationError(f"space has {space.size} outcomes but mass has {m.size}")
        m.setflags(write=False)
        object.__setattr__(self, "mass", m)
        object.__setattr__(self, "space", space)

    @property
    def dim(self):
        return self.mass.size

    @property
    def total(self):
        return float(self.mass.sum())

    def __len__(self):
        return self.mass.size

    def __getitem__(self, outcome):
        if isinstance(outcome, (tuple, list)):
            outcome = self.space.index(outcome)
        return float(self.mass[outcome])

    def require_normalized(self, what="operation"):
        if self.subnormalized:
            raise ValidationError(f"{what} needs a normalized distribution")


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """Positive semidefinite, unit-trace complex matrix.

    With ``subnormalized=True`` the trace may lie anywhere in ``[0, 1]``.
    """

    matrix: np.ndarray
    subnormalized: bool = False

    def __post_init__(self):
        h = as_hermitian(self.matrix)
        tr = float(np.trace(h).real)
        if self.subnormalized:
            if tr > 1 + STATE_TOL:
                raise ValidationError(f"trace {tr!r} exceeds 1")
        elif abs(tr - 1) > STATE_TOL:
            raise ValidationError(f"trace is {tr!r}, expected 1")
        lam_min = eigendecompose(h).eigenvalues[-1]
        if lam_min < -STATE_TOL:
            raise ValidationError(f"not positive semidefinite (eigenvalue {lam_min:.3e})")
        h.setflags(write=False)
        object.__setattr__(self, "matrix", h)

    @property
    def dim(self):
        return self.matrix.shape[0]

    @property
    def trace(self):
        return float(np.trace(self.matrix).real)

    def require_normalized(self, what="operation"):
        if self.subnormalized:
            raise ValidationError(f"{what} needs a normalized state")


def point_mass(outcome, dim):
    m = np.zeros(dim)
    m[outcome] = 1.0
    return ClassicalDistribution(m)


def uniform(dim):
    return ClassicalDistribution(np.full(dim, 1.0 / dim))


def default_fold_point(rate, tail_tol=1e-12):
    """Smallest ``k`` with Poisson tail mass ``1 - F(k - 1) <= tail_tol``."""
    if rate < 0 or not math.isfinite(rate):
        raise DomainError(f"Poisson rate must be finite and >= 0, got {rate}")
    k = 1
    while stats.poisson.sf(k - 1, rate) > tail_tol:
        k += 1
    return k


def poisson_truncated(rate, fold_point=None, cutoff=None, tail_tol=1e-12):
    """Poisson(rate) with the tail folded onto a single outcome.

    ``mass[k]`` is the Poisson pmf for ``k < fold_point``, ``mass[fold_point]``
    carries the whole tail ``1 - F(fold_point - 1)``, and entries between
    ``fold_point`` and ``cutoff`` are zero.

    Parameters
    ----------
    rate : float
        Expected count per interval (lambda * dt), must be >= 0.
    fold_point : int, optional
        Defaults to :func:`default_fold_point` at ``tail_tol``.
    cutoff : int, optional
        Largest represented outcome; defaults to ``fold_point``.
    """
    if rate < 0 or not math.isfinite(rate):
        raise DomainError(f"Poisson rate must be finite and >= 0, got {rate}")
    if fold_point is None:
        fold_point = default_fold_point(rate, tail_tol)
    if cutoff is None:
        cutoff = fold_point
    if fold_point < 0 or cutoff < fold_point:
        raise DomainError("need 0 <= fold_point <= cutoff")
    mass = np.zeros(cutoff + 1)
    ks = np.arange(fold_point)
    mass[:fold_point] = stats.poisson.pmf(ks, rate)
    mass[fold_point] = stats.poisson.sf(fold_point - 1, rate)
    return ClassicalDistribution(mass)


def shifted(dist, k, fold_point=None):
    """Distribution of ``X + k`` re-folded at ``fold_point`` (default: last outcome)."""
    if k < 0:
        raise DomainError("shift must be non-negative")
    m = dist.mass
    last = m.size - 1 if fold_point is None else fold_point
    out = np.zeros(m.size)
    if k <= last:
        out[k:last] = m[: last - k]
        out[last] = m[last - k:].sum()
    else:
        out[last] = m.sum()
    return ClassicalDistribution(out, subnormalized=dist.subnormalized)


def iid_power(p, n):
    """n-fold product of a distribution or state with itself."""
    if n < 1:
        raise DomainError("n must be a positive integer")
    if isinstance(p, DensityOperator):
        p.require_normalized("iid_power")
        out = p.matrix
        for _ in range(n - 1):
            out = kron(out, p.matrix)
        return DensityOperator(out)
    p.require_normalized("iid_power")
    if p.space.length != 1:
        space = SequenceSpace(p.space.alphabet, p.space.length * n)
    else:
        space = SequenceSpace(p.dim, n)
    out = p.mass
    for _ in range(n - 1):
        out = np.multiply.outer(out, p.mass).reshape(-1)
    return ClassicalDistribution(out, space)


def tensor(*parts):
    """Tensor product of distributions (or of density operators)."""
    if all(isinstance(x, DensityOperator) for x in parts):
        out = parts[0].matrix
        for x in parts[1:]:
            out = kron(out, x.matrix)
        return DensityOperator(out)
    out = np.array([1.0])
    for x in parts:
        out = np.multiply.outer(out, x.mass).reshape(-1)
    if out.size > config.MAX_OUTCOMES:
        raise CapacityError(f"{out.size} outcomes exceed the cap")
    return ClassicalDistribution(out)


def embed_signal_with_arrival(signal, null_symbol, arrival, n):
    """Mixture over arrival times of ``null^nu (x) signal (x) null^(n-k-nu)``.

    Parameters
    ----------
    signal : ClassicalDistribution or DensityOperator
        Signal over ``k`` slots of the null symbol's alphabet.
    null_symbol : ClassicalDistribution or DensityOperator
        Single-slot distribution observed before and after the signal.
    arrival : array_like
        ``arrival[nu]`` is the probability that the signal starts at slot
        ``nu``; must be supported on ``0..n-k``.
    n : int
        Total number of slots.
    """
    quantum = isinstance(signal, DensityOperator)
    d = null_symbol.dim
    k = round(math.log(signal.dim, d)) if d > 1 else 1
    if d ** k != signal.dim:
        raise DomainError(f"signal dimension {signal.dim} is not a power of {d}")
    if n < k:
        raise DomainError(f"need n >= k, got n={n}, k={k}")
    w = np.asarray(arrival, dtype=float).reshape(-1)
    if np.any(w < 0) or abs(w.sum() - 1) > NORM_TOL:
        raise ValidationError("arrival weights must form a probability vector")
    if np.any(w[n - k + 1:] > 0):
        raise DomainError(f"arrival support exceeds n - k = {n - k}")
    total = None
    for nu, weight in enumerate(w[: n - k + 1]):
        if weight == 0:
            continue
        parts = [null_symbol] * nu + [signal] + [null_symbol] * (n - k - nu)
        term = tensor(*parts)
        x = term.matrix if quantum else term.mass
        total = weight * x if total is None else total + weight * x
    if quantum:
        return DensityOperator(total)
    return ClassicalDistribution(total, SequenceSpace(d, n))


def classical_to_density(p):
    return DensityOperator(np.diag(p.mass).astype(complex), subnormalized=p.subnormalized)


def pinch(rho):
    """Diagonal of a density operator as a classical distribution."""
    diag = np.clip(np.real(np.diag(rho.matrix)), 0.0, None)
    return ClassicalDistribution(diag, subnormalized=rho.subnormalized)


def jittered_pulse(power, g, n=5, q=0.0, center=None):
    """Pulse of height ``power`` in slot ``center`` with +/-1 slot jitter.

    Slot ``center`` carries the pulse with probability ``1 - q`` and each
    neighbour with probability ``q / 2``; every other slot reads 0.
    """
    if center is None:
        center = n // 2
    if not 0 <= power <= g:
        raise DomainError(f"power {power} outside [0, {g}]")
    if not 0 <= q <= 1:
        raise DomainError("jitter probability must lie in [0, 1]")
    if not 1 <= center <= n - 2:
        raise DomainError("pulse needs a neighbour slot on each side")
    space = SequenceSpace(g + 1, n)
    mass = np.zeros(space.size)
    for pos, w in ((center, 1 - q), (center - 1, q / 2), (center + 1, q / 2)):
        seq = [0] * n
        seq[pos] = power
        mass[space.index(seq)] += w
    return ClassicalDistribution(mass, space)


def random_density(dim, rng, rank=None):
    """Random density operator (Ginibre construction) for tests and demos."""
    rank = dim if rank is None else rank
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = g @ g.conj().T
    return DensityOperator(rho / np.trace(rho).real)
