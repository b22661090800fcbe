"""Random instance generators shared by the property and acceptance suites."""

import numpy as np

from oneshot.channels import MatrixChannel, QuantumChannel
from oneshot.distributions import ClassicalDistribution, DensityOperator, random_density


def random_pair(rng, dim):
    a = rng.dirichlet(np.ones(dim))
    b = rng.dirichlet(np.ones(dim))
    return ClassicalDistribution(a), ClassicalDistribution(b)


def null_preserving_substochastic(rng, null_mass, out_dim):
    """Column-substochastic matrix whose columns on the null support sum to one."""
    m = rng.random((out_dim, null_mass.size))
    m /= m.sum(axis=0, keepdims=True)
    shrink = np.where(null_mass > 0, 1.0, rng.uniform(0.2, 0.9, size=null_mass.size))
    return MatrixChannel(m * shrink)


def classical_dpi_triple(rng):
    dim = int(rng.integers(2, 6))
    support = max(1, int(rng.integers(1, dim + 1)))
    a = np.zeros(dim)
    a[:support] = rng.dirichlet(np.ones(support))
    b = rng.dirichlet(np.ones(dim))
    chan = null_preserving_substochastic(rng, a, int(rng.integers(2, 6)))
    return ClassicalDistribution(a), ClassicalDistribution(b), chan, float(rng.uniform(0.01, 0.9))


def quantum_dpi_triple(rng):
    """Null supported on a subspace ``S``; the channel is trace preserving on ``S``."""
    dim = int(rng.integers(2, 4))
    rank = int(rng.integers(1, dim + 1))
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    basis, _ = np.linalg.qr(g)
    w = rng.dirichlet(np.ones(rank))
    rho = DensityOperator((basis * w) @ basis.conj().T)
    sigma = random_density(dim, rng)
    proj = basis @ basis.conj().T
    # Kraus family with sum K^dag K = proj + c (I - proj), c < 1.
    out = int(rng.integers(2, 4))
    ops = [rng.normal(size=(out, dim)) + 1j * rng.normal(size=(out, dim)) for _ in range(2)]
    gram = sum(k.conj().T @ k for k in ops)
    vals, vecs = np.linalg.eigh(gram)
    inv_sqrt = (vecs / np.sqrt(vals)) @ vecs.conj().T
    c = rng.uniform(0.2, 0.9)
    target = proj + c * (np.eye(dim) - proj)
    vals, vecs = np.linalg.eigh(target)
    root = (vecs * np.sqrt(np.clip(vals, 0, None))) @ vecs.conj().T
    ops = [k @ inv_sqrt @ root for k in ops]
    return rho, sigma, QuantumChannel(ops), float(rng.uniform(0.01, 0.9))


def random_composite(rng, max_dim=4, max_sets=3):
    dim = int(rng.integers(2, max_dim + 1))
    nulls = [random_density(dim, rng).matrix for _ in range(int(rng.integers(1, max_sets + 1)))]
    alts = [random_density(dim, rng).matrix for _ in range(int(rng.integers(1, max_sets + 1)))]
    return nulls, alts, float(rng.uniform(0.02, 0.5))


def grid_pair(rng, dim, step=0.05):
    """Pair of distributions whose masses are multiples of ``step``."""
    units = round(1 / step)
    out = []
    for _ in range(2):
        cuts = np.sort(rng.integers(0, units + 1, size=dim - 1))
        counts = np.diff(np.concatenate([[0], cuts, [units]]))
        out.append(counts * step)
    return out


def vertex_beta(p0, p1, eps):
    """Minimum type II error by enumerating vertices of the classical LP.

    Vertices of ``{0 <= w <= 1, p0 . w >= 1 - eps}`` with the constraint
    active have at most one fractional coordinate; those with it inactive
    are 0/1 vectors.
    """
    n = p0.size
    need = 1.0 - eps
    best = np.inf
    for mask in range(1 << n):
        w = np.array([(mask >> i) & 1 for i in range(n)], dtype=float)
        acc = p0 @ w
        if acc >= need - 1e-15:
            best = min(best, p1 @ w)
        for j in range(n):
            if w[j] == 0 and p0[j] > 0 and acc < need <= acc + p0[j]:
                wj = w.copy()
                wj[j] = (need - acc) / p0[j]
                best = min(best, p1 @ wj)
    return best
