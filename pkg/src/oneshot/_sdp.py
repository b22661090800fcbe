"""Primal-dual interior-point method for the composite hypothesis-testing SDP.

The program solved here is::

    minimize    gamma
    subject to  <X, P_i> >= 1 - eps          for every null P_i
                <X, Q_j> <= gamma            for every alternative Q_j
                0 <= X <= I

written in the inequality (LMI) form ``S = C - A*(y) in K`` with
``y = (coords(X), gamma)`` and ``K`` the product of a non-negative orthant
(one entry per linear constraint) and two Hermitian PSD cones (``X`` and
``I - X``).  The conic dual variable ``W = (z, v, W1, Z)`` is exactly the
multiplier set of::

    maximize    (1 - eps) * sum(z) - tr(Z)
    subject to  sum_i z_i P_i - sum_j v_j Q_j <= Z,
                sum_j v_j = 1,  z, v >= 0,  Z >= 0

The search direction is HKM with a Mehrotra predictor-corrector.  Hermitian
matrices are parametrised by the orthonormal real basis ``E_ii``,
``(E_ij + E_ji)/sqrt2`` and ``i(E_ij - E_ji)/sqrt2``.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp

from .hermitian import positive_part

SQRT2 = np.sqrt(2.0)


class HermitianCoords:
    """Real coordinates of ``n x n`` Hermitian matrices in an orthonormal basis."""

    def __init__(self, n):
        self.n = n
        self.iu = np.triu_indices(n, 1)
        self.size = n * n
        rows, cols, vals = [], [], []
        col = 0
        for i in range(n):
            rows.append(i * n + i)
            cols.append(col)
            vals.append(1.0)
            col += 1
        ii, jj = self.iu
        for i, j in zip(ii, jj):
            rows += [i * n + j, j * n + i]
            cols += [col, col]
            vals += [1 / SQRT2, 1 / SQRT2]
            col += 1
        for i, j in zip(ii, jj):
            rows += [i * n + j, j * n + i]
            cols += [col, col]
            vals += [1j / SQRT2, -1j / SQRT2]
            col += 1
        # Columns are vec(B_k) in row-major order.
        self.basis = sp.csc_matrix((vals, (rows, cols)), shape=(n * n, n * n), dtype=complex)

    def coords(self, h):
        d = np.real(np.diag(h))
        upper = h[self.iu]
        return np.concatenate([d, SQRT2 * upper.real, SQRT2 * upper.imag])

    def matrix(self, x):
        n = self.n
        k = len(self.iu[0])
        h = np.diag(x[:n]).astype(complex)
        upper = (x[n:n + k] + 1j * x[n + k:]) / SQRT2
        h[self.iu] = upper
        h[(self.iu[1], self.iu[0])] = upper.conj()
        return h

    def schur(self, w, s_inv):
        """Real matrix of ``H -> herm(W H S^-1)`` in these coordinates."""
        k = np.kron(w, s_inv.T)
        t = self.basis
        kt = (t.T @ k.T).T
        return np.real(t.conj().T @ kt)


def _herm(a):
    return 0.5 * (a + a.conj().T)


def _max_step_psd(x, dx):
    """Largest alpha with ``x + alpha * dx`` PSD (``x`` positive definite)."""
    l = np.linalg.cholesky(x)
    li = sla.solve_triangular(l, np.eye(x.shape[0]), lower=True)
    m = _herm(li @ dx @ li.conj().T)
    lam = np.linalg.eigvalsh(m)[0]
    return np.inf if lam >= 0 else -1.0 / lam


def _max_step_lp(x, dx):
    neg = dx < 0
    if not np.any(neg):
        return np.inf
    return float(np.min(-x[neg] / dx[neg]))


@dataclass
class SDPResult:
    x: np.ndarray
    gamma: float
    z: np.ndarray
    v: np.ndarray
    w_lower: np.ndarray
    w_upper: np.ndarray
    primal_value: float
    dual_value: float
    iterations: int
    converged: bool
    primal_infeasibility: float
    dual_infeasibility: float


def solve_hypothesis_sdp(nulls, alts, eps, max_iter=200, gap_tol=1e-8, feas_tol=1e-10):
    """Run the interior-point iteration; see the module docstring."""
    n = nulls[0].shape[0]
    hc = HermitianCoords(n)
    n_p, n_q = len(nulls), len(alts)
    m_x = hc.size
    m = m_x + 1
    eye = np.eye(n, dtype=complex)

    cp = np.array([hc.coords(p) for p in nulls])
    cq = np.array([hc.coords(q) for q in alts])
    # Rows of G give the linear-block part of A*(y).
    g = np.zeros((n_p + n_q, m))
    g[:n_p, :m_x] = -cp
    g[n_p:, :m_x] = cq
    g[n_p:, m_x] = -1.0
    c_lp = np.concatenate([np.full(n_p, -(1.0 - eps)), np.zeros(n_q)])
    b = np.zeros(m)
    b[m_x] = -1.0
    nu = n_p + n_q + 2 * n

    def a_star(y):
        xm = hc.matrix(y[:m_x])
        return g @ y, -xm, xm

    def a_op(w_lp, w1, w2):
        out = g.T @ w_lp
        out[:m_x] += hc.coords(_herm(w2)) - hc.coords(_herm(w1))
        return out

    # Dual start: the strictly feasible point built from the positive part
    # of sum(P) - sum(Q).
    delta = 0.5 / n_q
    h = delta * (sum(nulls) - sum(alts))
    h_plus = positive_part(h)
    w_lp = np.full(n_p + n_q, delta)
    w2 = 2.0 * h_plus + delta * eye
    w1 = _herm(w2 - h)
    # Primal start: X = I/2, gamma above every alternative's acceptance.
    y = np.zeros(m)
    y[:m_x] = hc.coords(0.5 * eye)
    y[m_x] = 1.5
    s_lp = np.maximum(c_lp - g @ y, 0.5)
    s1 = 0.5 * eye
    s2 = 0.5 * eye

    converged = False
    it = 0
    pinf = dinf = np.inf
    for it in range(1, max_iter + 1):
        a_lp, a1, a2 = a_star(y)
        rd_lp = c_lp - s_lp - a_lp
        rd1 = -s1 - a1
        rd2 = eye - s2 - a2
        rp = b - a_op(w_lp, w1, w2)
        pobj = y[m_x]
        dobj = (1.0 - eps) * w_lp[:n_p].sum() - np.trace(w2).real
        mu = (w_lp @ s_lp + np.trace(w1 @ s1).real + np.trace(w2 @ s2).real) / nu
        pinf = np.linalg.norm(rp)
        dinf = max(np.linalg.norm(rd_lp), np.linalg.norm(rd1), np.linalg.norm(rd2))
        if abs(pobj - dobj) <= gap_tol and pinf <= feas_tol and dinf <= feas_tol:
            converged = True
            break

        s1_inv = np.linalg.inv(s1)
        s2_inv = np.linalg.inv(s2)
        s1_inv = _herm(s1_inv)
        s2_inv = _herm(s2_inv)
        mat = g.T @ ((w_lp / s_lp)[:, None] * g)
        mat[:m_x, :m_x] += hc.schur(w1, s1_inv) + hc.schur(w2, s2_inv)
        mat = 0.5 * (mat + mat.T)
        try:
            factor = sla.cho_factor(mat)
            solve = lambda r: sla.cho_solve(factor, r)
        except np.linalg.LinAlgError:
            lu = sla.lu_factor(mat)
            solve = lambda r: sla.lu_solve(lu, r)

        def direction(sigma, corr):
            t_lp = sigma * mu / s_lp - w_lp * rd_lp / s_lp
            t1 = sigma * mu * s1_inv - w1 @ rd1 @ s1_inv
            t2 = sigma * mu * s2_inv - w2 @ rd2 @ s2_inv
            if corr is not None:
                c_lp_, c1, c2 = corr
                t_lp = t_lp - c_lp_
                t1 = t1 - c1
                t2 = t2 - c2
            dy = solve(b - a_op(t_lp, t1, t2))
            da_lp, da1, da2 = a_star(dy)
            ds_lp = rd_lp - da_lp
            ds1 = rd1 - da1
            ds2 = rd2 - da2
            dw_lp = sigma * mu / s_lp - w_lp - w_lp * ds_lp / s_lp
            dw1 = sigma * mu * s1_inv - w1 - w1 @ ds1 @ s1_inv
            dw2 = sigma * mu * s2_inv - w2 - w2 @ ds2 @ s2_inv
            if corr is not None:
                dw_lp = dw_lp - c_lp_
                dw1 = dw1 - c1
                dw2 = dw2 - c2
            return dy, (ds_lp, _herm(ds1), _herm(ds2)), (dw_lp, _herm(dw1), _herm(dw2))

        def steps(ds, dw):
            ap = min(_max_step_lp(w_lp, dw[0]), _max_step_psd(w1, dw[1]), _max_step_psd(w2, dw[2]))
            ad = min(_max_step_lp(s_lp, ds[0]), _max_step_psd(s1, ds[1]), _max_step_psd(s2, ds[2]))
            return ap, ad

        try:
            dy, ds, dw = direction(0.0, None)
            ap, ad = steps(ds, dw)
            ap, ad = min(1.0, ap), min(1.0, ad)
            mu_aff = (
                (w_lp + ap * dw[0]) @ (s_lp + ad * ds[0])
                + np.trace((w1 + ap * dw[1]) @ (s1 + ad * ds[1])).real
                + np.trace((w2 + ap * dw[2]) @ (s2 + ad * ds[2])).real
            ) / nu
            expo = max(1.0, 3.0 * min(ap, ad) ** 2)
            sigma = min(1.0, max(0.0, mu_aff / mu) ** expo)
            corr = (dw[0] * ds[0] / s_lp, dw[1] @ ds[1] @ s1_inv, dw[2] @ ds[2] @ s2_inv)
            dy, ds, dw = direction(sigma, corr)
            ap, ad = steps(ds, dw)
            frac = 0.9 + 0.09 * min(1.0, ap, ad)
            ap, ad = min(1.0, frac * ap), min(1.0, frac * ad)

            w_lp = w_lp + ap * dw[0]
            w1 = _herm(w1 + ap * dw[1])
            w2 = _herm(w2 + ap * dw[2])
            y = y + ad * dy
            s_lp = s_lp + ad * ds[0]
            s1 = _herm(s1 + ad * ds[1])
            s2 = _herm(s2 + ad * ds[2])
        except np.linalg.LinAlgError:
            # Rounding pushed an iterate off the cone; keep the last good one.
            break

    pobj = y[m_x]
    dobj = (1.0 - eps) * w_lp[:n_p].sum() - np.trace(w2).real
    return SDPResult(
        x=hc.matrix(y[:m_x]),
        gamma=float(pobj),
        z=w_lp[:n_p].copy(),
        v=w_lp[n_p:].copy(),
        w_lower=w1,
        w_upper=w2,
        primal_value=float(pobj),
        dual_value=float(dobj),
        iterations=it,
        converged=converged,
        primal_infeasibility=float(pinf),
        dual_infeasibility=float(dinf),
    )
