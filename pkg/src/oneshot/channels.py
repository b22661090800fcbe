"""Completely positive, trace non-increasing maps.

Classical channels act on probability vectors by column-substochastic
matrices ``N[y_out, y_in]``.  Per-slot maps on sequence spaces are kept in
factored form (:class:`SlotwiseChannel`) and only contracted along each slot
axis, so a 7-symbol alphabet over five slots never needs a 16807 x 16807
matrix.  Quantum channels are Kraus families.
"""

import numpy as np

from .decision import DecisionFunction
from .distributions import (
    NORM_TOL,
    ClassicalDistribution,
    DensityOperator,
    SequenceSpace,
)
from .errors import DomainError, ValidationError
from .hermitian import eigendecompose

KRAUS_TOL = 1e-10


class ClassicalChannel:
    """Linear map on probability vectors with column sums at most one."""

    in_dim: int
    out_dim: int

    def apply_vector(self, v):
        raise NotImplementedError

    def adjoint_vector(self, a):
        """Transpose action ``N^T a``; maps acceptance weights back."""
        raise NotImplementedError

    def matrix(self):
        """Dense ``out_dim x in_dim`` transition matrix."""
        return np.column_stack([self.apply_vector(e) for e in np.eye(self.in_dim)])

    def column_sums(self):
        return self.adjoint_vector(np.ones(self.out_dim))

    @property
    def stochastic(self):
        return bool(np.all(np.abs(self.column_sums() - 1) <= NORM_TOL))

    def _validate(self):
        sums = self.column_sums()
        if np.any(sums > 1 + NORM_TOL):
            raise ValidationError(f"column sum {sums.max()!r} exceeds 1")


class MatrixChannel(ClassicalChannel):
    def __init__(self, matrix):
        m = np.array(matrix, dtype=float)
        if m.ndim != 2:
            raise ValidationError("transition matrix must be 2-D")
        if np.any(m < 0) or not np.all(np.isfinite(m)):
            raise ValidationError("transition weights must be finite and non-negative")
        m.setflags(write=False)
        self._m = m
        self.out_dim, self.in_dim = m.shape
        self._validate()

    def apply_vector(self, v):
        return self._m @ v

    def adjoint_vector(self, a):
        return self._m.T @ a

    def matrix(self):
        return self._m

    def __repr__(self):
        return f"MatrixChannel({self.out_dim}x{self.in_dim})"


class SlotwiseChannel(ClassicalChannel):
    """Same per-slot map applied independently to each of ``n`` slots."""

    def __init__(self, per_slot, n):
        if n < 1:
            raise DomainError("number of slots must be positive")
        self.per_slot = per_slot if isinstance(per_slot, MatrixChannel) else MatrixChannel(per_slot.matrix())
        self.n = n
        self.in_space = SequenceSpace(self.per_slot.in_dim, n)
        self.out_space = SequenceSpace(self.per_slot.out_dim, n)
        self.in_dim = self.in_space.size
        self.out_dim = self.out_space.size

    def _contract(self, m, v, d_in):
        t = np.asarray(v, dtype=float).reshape((d_in,) * self.n)
        for axis in range(self.n):
            t = np.moveaxis(np.tensordot(m, t, axes=([1], [axis])), 0, axis)
        return t.reshape(-1)

    def apply_vector(self, v):
        return self._contract(self.per_slot.matrix(), v, self.per_slot.in_dim)

    def adjoint_vector(self, a):
        return self._contract(self.per_slot.matrix().T, a, self.per_slot.out_dim)

    def column_sums(self):
        sums = self.per_slot.column_sums()
        out = np.array([1.0])
        for _ in range(self.n):
            out = np.multiply.outer(out, sums).reshape(-1)
        return out

    def __repr__(self):
        return f"SlotwiseChannel({self.per_slot!r}, n={self.n})"


class UniformMixChannel(ClassicalChannel):
    """``q -> (1 - delta) q + delta * sum(q) / dim * 1``."""

    def __init__(self, delta, dim):
        if not 0 < delta <= 1:
            raise DomainError(f"delta must lie in (0, 1], got {delta}")
        self.delta = float(delta)
        self.in_dim = self.out_dim = int(dim)

    def apply_vector(self, v):
        v = np.asarray(v, dtype=float)
        return (1 - self.delta) * v + self.delta * v.sum() / self.in_dim

    adjoint_vector = apply_vector

    def matrix(self):
        d = self.in_dim
        return (1 - self.delta) * np.eye(d) + np.full((d, d), self.delta / d)

    def column_sums(self):
        return np.ones(self.in_dim)

    def __repr__(self):
        return f"UniformMixChannel(delta={self.delta}, dim={self.in_dim})"


class ProjectionChannel(ClassicalChannel):
    """Zeroes every outcome outside ``keep``; never renormalizes."""

    def __init__(self, keep):
        keep = np.array(keep, dtype=bool).reshape(-1)
        keep.setflags(write=False)
        self.keep = keep
        self.in_dim = self.out_dim = keep.size

    def apply_vector(self, v):
        return np.where(self.keep, v, 0.0)

    adjoint_vector = apply_vector

    def column_sums(self):
        return self.keep.astype(float)

    def __repr__(self):
        return f"ProjectionChannel(kept={int(self.keep.sum())}/{self.in_dim})"


class ComposedChannel(ClassicalChannel):
    """``outer o inner``: apply ``inner`` first."""

    def __init__(self, outer, inner):
        if inner.out_dim != outer.in_dim:
            raise ValidationError(
                f"cannot compose: inner output {inner.out_dim} != outer input {outer.in_dim}"
            )
        self.outer = outer
        self.inner = inner
        self.in_dim = inner.in_dim
        self.out_dim = outer.out_dim

    def apply_vector(self, v):
        return self.outer.apply_vector(self.inner.apply_vector(v))

    def adjoint_vector(self, a):
        return self.inner.adjoint_vector(self.outer.adjoint_vector(a))

    def __repr__(self):
        return f"ComposedChannel({self.outer!r}, {self.inner!r})"


class QuantumChannel:
    """Kraus family ``{K_k}`` with ``sum K_k^H K_k <= I``."""

    def __init__(self, kraus):
        ops = [np.array(k, dtype=complex) for k in kraus]
        if not ops:
            raise ValidationError("need at least one Kraus operator")
        shape = ops[0].shape
        if any(k.ndim != 2 or k.shape != shape for k in ops):
            raise ValidationError("Kraus operators must share one 2-D shape")
        for k in ops:
            k.setflags(write=False)
        self.kraus = tuple(ops)
        self.out_dim, self.in_dim = shape
        gram = sum(k.conj().T @ k for k in ops)
        lam = eigendecompose(gram, tol=1e-10).eigenvalues
        if lam[0] > 1 + KRAUS_TOL:
            raise ValidationError(f"sum of K^H K has eigenvalue {lam[0]!r} > 1")
        self.trace_preserving = bool(np.all(np.abs(lam - 1) <= KRAUS_TOL))

    def apply_matrix(self, x):
        return sum(k @ x @ k.conj().T for k in self.kraus)

    def adjoint_matrix(self, a):
        return sum(k.conj().T @ a @ k for k in self.kraus)

    def __repr__(self):
        return f"QuantumChannel({len(self.kraus)} Kraus ops, {self.out_dim}x{self.in_dim})"


def _check_dim(channel, dim):
    if channel.in_dim != dim:
        raise ValidationError(f"channel expects dimension {channel.in_dim}, got {dim}")


def apply(channel, x):
    """Push a distribution or state through a channel.

    The result is flagged sub-normalized whenever its total mass falls below
    one (by more than 1e-12) or the input already was.
    """
    if isinstance(channel, QuantumChannel):
        if not isinstance(x, DensityOperator):
            raise ValidationError("quantum channels act on density operators")
        _check_dim(channel, x.dim)
        out = channel.apply_matrix(x.matrix)
        sub = x.subnormalized or abs(np.trace(out).real - 1) > NORM_TOL
        return DensityOperator(out, subnormalized=sub)
    if not isinstance(x, ClassicalDistribution):
        raise ValidationError("classical channels act on classical distributions")
    _check_dim(channel, x.dim)
    out = np.clip(channel.apply_vector(x.mass), 0.0, None)
    sub = x.subnormalized or abs(out.sum() - 1) > NORM_TOL
    space = getattr(channel, "out_space", None)
    if space is None and channel.out_dim == x.dim:
        space = x.space
    return ClassicalDistribution(out, space, subnormalized=sub)


def compose(outer, inner):
    """``outer o inner`` for two classical or two quantum channels."""
    if isinstance(outer, QuantumChannel) and isinstance(inner, QuantumChannel):
        if inner.out_dim != outer.in_dim:
            raise ValidationError("cannot compose: dimension mismatch")
        return QuantumChannel([a @ b for a in outer.kraus for b in inner.kraus])
    if isinstance(outer, QuantumChannel) or isinstance(inner, QuantumChannel):
        raise ValidationError("cannot compose a classical with a quantum channel")
    return ComposedChannel(outer, inner)


def adjoint_apply(channel, a):
    """Apply the adjoint map to a decision function.

    For a trace non-increasing channel the adjoint is sub-unital, so the
    result is again a valid decision function.
    """
    if isinstance(channel, QuantumChannel):
        op = a.operator() if isinstance(a, DecisionFunction) else np.asarray(a, dtype=complex)
        if op.shape != (channel.out_dim, channel.out_dim):
            raise ValidationError("decision operator does not match channel output")
        return DecisionFunction.quantum(channel.adjoint_matrix(op))
    if isinstance(a, DecisionFunction):
        if a.kind != "classical":
            raise ValidationError("classical channel needs classical acceptance weights")
        w = a.values
    else:
        w = np.asarray(a, dtype=float).reshape(-1)
    if w.size != channel.out_dim:
        raise ValidationError("decision weights do not match channel output")
    return DecisionFunction.classical(np.clip(channel.adjoint_vector(w), 0.0, 1.0))


def identity_channel(dim):
    return MatrixChannel(np.eye(dim))


def _deterministic(func, size):
    m = np.zeros((size, size))
    for y in range(size):
        m[func(y), y] = 1.0
    return MatrixChannel(m)


def loss_map(c, g):
    """Per-slot loss ``y -> max(y - c, 0)`` on the alphabet ``0..g``."""
    if c < 0:
        raise DomainError("loss must be non-negative")
    return _deterministic(lambda y: max(y - c, 0), g + 1)


def saturating_add_map(s, g):
    """Per-slot additive background ``y -> min(y + s, g)``."""
    if not 0 <= s <= g:
        raise DomainError(f"need 0 <= s <= g, got s={s}, g={g}")
    return _deterministic(lambda y: min(y + s, g), g + 1)


def uniform_mix_map(delta, dim):
    return UniformMixChannel(delta, dim)


def lift(channel, n):
    """Apply a per-slot classical channel to every slot of length-n sequences."""
    return SlotwiseChannel(channel, n)


def truncate_projection(keep, dim=None):
    """Projection keeping the outcomes selected by ``keep``.

    ``keep`` is either a boolean mask or a predicate evaluated on
    ``range(dim)``.
    """
    if callable(keep):
        if dim is None:
            raise ValidationError("a predicate needs an explicit dimension")
        keep = [bool(keep(y)) for y in range(dim)]
    return ProjectionChannel(keep)


def pinching_channel(dim):
    """Zeroes every off-diagonal entry."""
    basis = np.eye(dim)
    return QuantumChannel([np.outer(e, e) for e in basis])


def random_substochastic(in_dim, out_dim, rng, stochastic=False):
    """Random column-substochastic matrix channel (tests and demos)."""
    m = rng.random((out_dim, in_dim))
    m /= m.sum(axis=0, keepdims=True)
    if not stochastic:
        m *= rng.uniform(0.3, 1.0, size=in_dim)
    return MatrixChannel(m)


def random_kraus_channel(in_dim, out_dim, rng, n_ops=2, trace_preserving=False):
    """Random Kraus family, rescaled to be trace non-increasing."""
    ops = [rng.normal(size=(out_dim, in_dim)) + 1j * rng.normal(size=(out_dim, in_dim))
           for _ in range(n_ops)]
    gram = sum(k.conj().T @ k for k in ops)
    w, v = np.linalg.eigh(gram)
    inv_sqrt = (v / np.sqrt(w)) @ v.conj().T
    ops = [k @ inv_sqrt for k in ops]
    if not trace_preserving:
        shrink = np.diag(rng.uniform(0.3, 1.0, size=in_dim))
        ops = [k @ shrink for k in ops]
    return QuantumChannel(ops)
