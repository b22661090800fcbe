"""Dense complex Hermitian linear algebra.

The eigensolver is a cyclic Jacobi method working directly on complex
Hermitian matrices.  Every quantum-side routine in the package goes through
:func:`eigendecompose`, :func:`positive_part` and the spectral projectors of
:class:`Spectrum`.
"""

from dataclasses import dataclass

import numpy as np

from . import config
from .errors import CapacityError, ValidationError

HERMITIAN_TOL = 1e-12
MAX_SWEEPS = 100


def as_hermitian(a, tol=HERMITIAN_TOL):
    """Return ``a`` as a complex square array after checking Hermiticity.

    Raises
    ------
    ValidationError
        If ``a`` is not square or ``|a - a^H|`` exceeds ``tol`` anywhere.
    """
    h = np.array(a, dtype=complex)
    if h.ndim == 0:
        h = h.reshape(1, 1)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise ValidationError(f"expected a square matrix, got shape {h.shape}")
    if h.shape[0] == 0:
        raise ValidationError("matrix must have positive dimension")
    if not np.all(np.isfinite(h)):
        raise ValidationError("matrix has non-finite entries")
    dev = np.max(np.abs(h - h.conj().T))
    if dev > tol:
        raise ValidationError(f"matrix is not Hermitian (max deviation {dev:.3e})")
    # Symmetrize so downstream code sees an exactly Hermitian array.
    return 0.5 * (h + h.conj().T)


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues sorted descending with matching orthonormal eigenvectors.

    ``eigenvectors[:, k]`` belongs to ``eigenvalues[k]``.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def dim(self):
        return self.eigenvalues.shape[0]

    def reconstruct(self):
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T

    def projector(self, mask):
        """Spectral projector onto the eigenvectors selected by ``mask``."""
        v = self.eigenvectors[:, np.asarray(mask, dtype=bool)]
        return v @ v.conj().T

    def apply(self, func):
        """Return ``sum_k func(lambda_k) v_k v_k^H``."""
        v = self.eigenvectors
        return (v * func(self.eigenvalues)) @ v.conj().T


def _rotation(a_pp, a_qq, a_pq):
    """Unitary 2x2 block diagonalising ``[[a_pp, a_pq], [conj(a_pq), a_qq]]``."""
    mag = abs(a_pq)
    phase = a_pq / mag
    tau = (a_qq - a_pp) / (2.0 * mag)
    if abs(tau) > 1e150:
        t = 0.5 / tau
    else:
        t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + np.sqrt(1.0 + tau * tau))
    c = 1.0 / np.sqrt(1.0 + t * t)
    s = t * c
    return np.array([[c * phase, s * phase], [-s, c]], dtype=complex)


def eigendecompose(h, tol=HERMITIAN_TOL, max_sweeps=MAX_SWEEPS):
    """Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Sweeps visit every pair ``(p, q)`` with ``p < q`` in row order and stop
    once the off-diagonal Frobenius norm falls below
    ``1e-14 * dim * max(1, ||H||_F)``.

    Parameters
    ----------
    h : array_like
        Hermitian matrix (checked to ``tol``).
    tol : float
        Hermiticity tolerance for the input.
    max_sweeps : int
        Hard cap on the number of full sweeps.

    Returns
    -------
    Spectrum
        Eigenvalues in descending order; the output depends only on ``h``.
    """
    a = as_hermitian(h, tol=tol)
    n = a.shape[0]
    u = np.eye(n, dtype=complex)
    scale = max(1.0, np.linalg.norm(a))
    threshold = 1e-14 * n * scale
    # Rotations below this size cannot change the matrix in double precision.
    skip = 1e-300

    for _ in range(max_sweeps):
        off = np.linalg.norm(a[~np.eye(n, dtype=bool)])
        if off < threshold:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                a_pq = a[p, q]
                if abs(a_pq) <= skip:
                    continue
                g = _rotation(a[p, p].real, a[q, q].real, a_pq)
                idx = [p, q]
                a[:, idx] = a[:, idx] @ g
                a[idx, :] = g.conj().T @ a[idx, :]
                a[p, q] = a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                u[:, idx] = u[:, idx] @ g

    evals = np.real(np.diag(a)).copy()
    order = np.argsort(-evals, kind="stable")
    return Spectrum(evals[order], u[:, order])


def kron(a, b, max_dim=None):
    """Kronecker product with a dimension cap.

    Raises
    ------
    CapacityError
        If the product dimension would exceed ``max_dim`` (default from
        :func:`oneshot.config.max_dim`).
    """
    a = np.asarray(a)
    b = np.asarray(b)
    limit = config.max_dim() if max_dim is None else max_dim
    dim = a.shape[0] * b.shape[0]
    if dim > limit:
        raise CapacityError(f"kron dimension {dim} exceeds the cap of {limit}")
    return np.kron(a, b)


def is_decision_operator(a, tol=1e-9):
    """True iff every eigenvalue of ``a`` lies in ``[-tol, 1 + tol]``."""
    evals = eigendecompose(a).eigenvalues
    return bool(evals[-1] >= -tol and evals[0] <= 1.0 + tol)


def positive_part(h):
    """Return ``sum_{lambda_k > 0} lambda_k v_k v_k^H``."""
    spec = eigendecompose(h)
    return spec.apply(lambda lam: np.where(lam > 0, lam, 0.0))


def trace_norm(h):
    return float(np.sum(np.abs(eigendecompose(h).eigenvalues)))
