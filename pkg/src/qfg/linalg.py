"""Dense complex matrix primitives for small dimensions (d <= 8).

Conventions used everywhere downstream:

* matrices are ``numpy.ndarray`` with ``dtype=complex128``, row-major;
* a matrix is accepted as Hermitian when ``||M - M^dag||_F <= 1e-12 * max(1, ||M||_F)``;
* eigenvalues are returned ascending, eigenvectors as unitary column matrices.

The eigensolver is self-contained: a closed-form solve at d=2 (the hot path)
and cyclic Jacobi sweeps for 2 < d <= 8.
"""

from __future__ import annotations

from functools import cached_property

import numpy as np

from .errors import (
    DimensionMismatch,
    NonHermitianInput,
    NotNormalized,
    NotPositiveSemidefinite,
)

HERMITIAN_RTOL = 1e-12
PSD_EIGENVALUE_FLOOR = -1e-10
MAX_DIM = 8

IDENTITY2 = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (PAULI_X, PAULI_Y, PAULI_Z)


def as_matrix(m) -> np.ndarray:
    """Coerce to a square complex matrix, checking shape and finiteness."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {a.shape}")
    if a.shape[0] > MAX_DIM:
        raise DimensionMismatch(f"dimension {a.shape[0]} exceeds supported maximum {MAX_DIM}")
    if not np.all(np.isfinite(a.view(float))):
        raise NonHermitianInput("matrix contains NaN or Inf entries")
    return a


def require_hermitian(m, *, rtol: float = HERMITIAN_RTOL) -> np.ndarray:
    """Validate Hermiticity and return the exactly symmetrized matrix."""
    a = as_matrix(m)
    scale = max(1.0, float(np.linalg.norm(a)))
    defect = float(np.linalg.norm(a - a.conj().T))
    if defect > rtol * scale:
        raise NonHermitianInput(f"Hermiticity defect {defect:.3e} exceeds {rtol:.1e} * {scale:.3e}")
    return (a + a.conj().T) / 2


def _eigh2(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Closed-form eigensolve for a 2x2 Hermitian matrix."""
    a = m[0, 0].real
    c = m[1, 1].real
    b = m[0, 1]
    mean = (a + c) / 2
    half_gap = np.hypot((a - c) / 2, abs(b))
    lo, hi = mean - half_gap, mean + half_gap
    if abs(b) == 0.0:
        if a <= c:
            return np.array([a, c]), np.eye(2, dtype=complex)
        return np.array([c, a]), np.array([[0, 1], [1, 0]], dtype=complex)
    # (b, hi - a) is the hi-eigenvector; its orthocomplement carries lo.
    t = hi - a
    norm = np.hypot(abs(b), t)
    v_hi = np.array([b / norm, t / norm])
    v_lo = np.array([-t / norm, b.conjugate() / norm])
    vecs = np.column_stack([v_lo, v_hi])
    return np.array([lo, hi]), vecs


def _jacobi(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Cyclic Jacobi diagonalization for complex Hermitian matrices."""
    d = m.shape[0]
    a = m.copy()
    v = np.eye(d, dtype=complex)
    scale = max(1.0, float(np.linalg.norm(a)))
    for _ in range(60):
        off = float(np.linalg.norm(a - np.diag(np.diag(a))))
        if off <= 1e-14 * scale:
            break
        for p in range(d - 1):
            for q in range(p + 1, d):
                apq = a[p, q]
                if abs(apq) <= 1e-16 * scale:
                    continue
                phase = apq / abs(apq)
                app, aqq = a[p, p].real, a[q, q].real
                tau = (aqq - app) / (2 * abs(apq))
                t = np.sign(tau) / (abs(tau) + np.hypot(1.0, tau)) if tau != 0 else 1.0
                cth = 1.0 / np.hypot(1.0, t)
                sth = t * cth
                g = np.eye(d, dtype=complex)
                g[p, p] = cth
                g[q, q] = cth
                g[p, q] = sth * phase
                g[q, p] = -sth * np.conj(phase)
                a = g.conj().T @ a @ g
                v = v @ g
        a = (a + a.conj().T) / 2
    return np.diag(a).real.copy(), v


def herm_eigen(m) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition M = V diag(w) V^dag with w ascending and V unitary.

    Raises NonHermitianInput if M is not Hermitian within tolerance.
    """
    a = require_hermitian(m)
    d = a.shape[0]
    if d == 1:
        return np.array([a[0, 0].real]), np.eye(1, dtype=complex)
    if d == 2:
        return _eigh2(a)
    w, v = _jacobi(a)
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


def psd_sqrt(m) -> np.ndarray:
    """Positive-semidefinite square root via eigendecomposition.

    Eigenvalues in [-1e-10, 0] are clamped to 0; anything more negative
    raises NotPositiveSemidefinite.
    """
    w, v = herm_eigen(m)
    if w[0] < PSD_EIGENVALUE_FLOOR:
        raise NotPositiveSemidefinite(f"minimum eigenvalue {w[0]:.3e} below {PSD_EIGENVALUE_FLOOR:.1e}")
    w = np.sqrt(np.clip(w, 0.0, None))
    root = (v * w) @ v.conj().T
    return (root + root.conj().T) / 2


def comm_anticomm(a, b) -> tuple[np.ndarray, np.ndarray]:
    """Return ([A, B], {A, B}) = (AB - BA, AB + BA)."""
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape != b.shape:
        raise DimensionMismatch(f"shapes {a.shape} and {b.shape} differ")
    ab = a @ b
    ba = b @ a
    return ab - ba, ab + ba


class DensityOp:
    """A density operator: Hermitian, unit trace, positive semidefinite.

    The eigendecomposition is computed once on demand and cached; instances
    are treated as immutable.
    """

    def __init__(self, matrix):
        m = require_hermitian(matrix)
        tr = float(np.trace(m).real)
        if abs(tr - 1.0) > 1e-9:
            raise NotNormalized(f"trace {tr!r} differs from 1 by more than 1e-9")
        self._matrix = m
        self._matrix.setflags(write=False)
        if self.eigenvalues[0] < PSD_EIGENVALUE_FLOOR:
            raise NotPositiveSemidefinite(
                f"density operator has eigenvalue {self.eigenvalues[0]:.3e}"
            )

    @property
    def matrix(self) -> np.ndarray:
        return self._matrix

    @property
    def dim(self) -> int:
        return self._matrix.shape[0]

    @cached_property
    def _eigen(self) -> tuple[np.ndarray, np.ndarray]:
        return herm_eigen(self._matrix)

    @property
    def eigenvalues(self) -> np.ndarray:
        return self._eigen[0]

    @property
    def eigenvectors(self) -> np.ndarray:
        return self._eigen[1]

    @cached_property
    def sqrt(self) -> np.ndarray:
        w, v = self._eigen
        root = (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T
        return (root + root.conj().T) / 2

    def __repr__(self) -> str:
        return f"DensityOp(dim={self.dim})"
