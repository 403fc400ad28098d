"""Dense symmetric eigendecomposition (cyclic Jacobi) and matrix helpers.

Everything here works on plain float64 numpy arrays. eigen_sym is the
single eigensolver used by the spectral machinery; the Jacobi sweep order
is fixed, so results are deterministic for identical input.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# Sweep convergence: off-diagonal Frobenius norm relative to the input norm.
JACOBI_REL_THRESHOLD = 1e-12
JACOBI_MAX_SWEEPS = 100


@dataclass(frozen=True, eq=False)
class EigenDecomposition:
    """Eigenvalues ascending; column k of eigenvectors pairs with value k."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def order(self) -> int:
        return len(self.eigenvalues)


def require_symmetric(a: np.ndarray) -> np.ndarray:
    """Return a as a float64 symmetric matrix, rejecting real asymmetry.

    Tiny asymmetries (below 1e-10 relative to the largest entry) are
    symmetrized; anything larger is an error in the caller.
    """
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    asym = np.abs(a - a.T).max() if a.size else 0.0
    scale = max(1.0, np.abs(a).max()) if a.size else 1.0
    if asym > 1e-10 * scale:
        raise ValueError(f"matrix is not symmetric (max |a - a.T| = {asym:g})")
    if asym > 0.0:
        a = (a + a.T) / 2.0
    return a


def _off_norm(a: np.ndarray) -> float:
    b = a.copy()
    np.fill_diagonal(b, 0.0)
    return float(np.linalg.norm(b))


def eigen_sym(a: np.ndarray) -> EigenDecomposition:
    """Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.

    Sweeps row-major over the strict upper triangle until the off-diagonal
    Frobenius norm drops below JACOBI_REL_THRESHOLD times the input
    Frobenius norm. Raises RuntimeError if the sweep cap is hit.
    """
    a = require_symmetric(a).copy()
    n = a.shape[0]
    v = np.eye(n)
    threshold = JACOBI_REL_THRESHOLD * float(np.linalg.norm(a))

    for _ in range(JACOBI_MAX_SWEEPS):
        if _off_norm(a) <= threshold:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if abs(theta) > 1e154:
                    t = 1.0 / (2.0 * theta)  # avoid theta**2 overflow
                else:
                    t = math.copysign(1.0, theta) / (abs(theta) + math.hypot(theta, 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                rot = np.array([[c, s], [-s, c]])
                a[:, [p, q]] = a[:, [p, q]] @ rot
                a[[p, q], :] = rot.T @ a[[p, q], :]
                a[p, q] = 0.0
                a[q, p] = 0.0
                v[:, [p, q]] = v[:, [p, q]] @ rot
    else:
        raise RuntimeError(
            f"jacobi eigensolver did not converge within {JACOBI_MAX_SWEEPS} sweeps"
        )

    values = np.diag(a).copy()
    order = np.argsort(values, kind="stable")
    values = values[order]
    vectors = v[:, order]
    values.setflags(write=False)
    vectors.setflags(write=False)
    return EigenDecomposition(eigenvalues=values, eigenvectors=vectors)


def shift_scale_spectrum(c1: float, c2: float, eig: EigenDecomposition) -> np.ndarray:
    """Ascending spectrum of c1*I - c2*A from the spectrum of A.

    For c2 >= 0 the map reverses the eigenvalue order; for c2 < 0 it
    preserves it. No re-decomposition happens.
    """
    vals = c1 - c2 * eig.eigenvalues
    if c2 >= 0:
        vals = vals[::-1]
    return np.ascontiguousarray(vals)


def mat_vec(a: np.ndarray, v: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    v = np.asarray(v, dtype=float)
    if a.ndim != 2 or v.ndim != 1 or a.shape[1] != v.shape[0]:
        raise ValueError(f"dimension mismatch: {a.shape} @ {v.shape}")
    return a @ v


def mat_mat(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.ndim != 2 or b.ndim != 2 or a.shape[1] != b.shape[0]:
        raise ValueError(f"dimension mismatch: {a.shape} @ {b.shape}")
    return a @ b


def weighted_sum(coeffs, matrices) -> np.ndarray:
    """Sum of coeff[k] * matrices[k] with shape checking."""
    coeffs = list(coeffs)
    matrices = [np.asarray(mx, dtype=float) for mx in matrices]
    if len(coeffs) != len(matrices) or not matrices:
        raise ValueError("need equally many coefficients and matrices")
    shape = matrices[0].shape
    out = np.zeros(shape)
    for c, mx in zip(coeffs, matrices):
        if mx.shape != shape:
            raise ValueError(f"dimension mismatch: {mx.shape} vs {shape}")
        out += c * mx
    return out


def weyl_bounds_hold(a: np.ndarray, b: np.ndarray, slack: float = 1e-9) -> bool:
    """Check every Weyl eigenvalue inequality for the pair (A, B).

    With la, lb, ls the ascending spectra of A, B and A+B (1-based
    indexing below), verifies

        ls[i] <= la[i+j] + lb[n-j]   for j = 0..n-i
        ls[i] >= la[i-j+1] + lb[j]   for j = 1..i

    for every i, within an additive floating-point slack.
    """
    a = require_symmetric(a)
    b = require_symmetric(b)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    la = eigen_sym(a).eigenvalues
    lb = eigen_sym(b).eigenvalues
    ls = eigen_sym(a + b).eigenvalues
    n = len(la)
    for i in range(1, n + 1):
        for j in range(0, n - i + 1):
            if ls[i - 1] > la[i + j - 1] + lb[n - j - 1] + slack:
                return False
        for j in range(1, i + 1):
            if ls[i - 1] < la[i - j] + lb[j - 1] - slack:
                return False
    return True
