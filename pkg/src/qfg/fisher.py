"""Classical and quantum Fisher information and the full Fisher tensor.

Classical Fisher information of a POVM {m_x}:

    i = sum_{x: p_x > eps} (Tr[drho m_x])^2 / Tr[rho m_x],   p_x = Tr[rho m_x],

with eps = 1e-12 realizing the restriction to outcomes of positive
probability. Quantum Fisher information is Tr[rho L^2] for the SLD L, an
upper bound on i for every POVM.

The Fisher tensor evaluated on a pair of tangent directions is the complex
number Tr[rho L1 L2]; its real part is the metric (Fubini-Study type) and its
imaginary part the antisymmetric (KKS type) form. On a qubit sphere tangent
pair (v, v') it reduces to

    4 (k1-k2)^2 / (1+|z|^2)^2 * [ (k1+k2) Re(v* v') + i (k1-k2) Im(v* v') ].
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .errors import DomainError, InvalidPovm, NotAPovm, NotNormalized
from .linalg import DensityOp, herm_eigen, require_hermitian
from .sld import drho_sphere, drho_transverse, sld_solve

#: Outcomes with probability at or below this are excluded from classical sums.
EPS_P = 1e-12


def povm_diagnose(elements: Sequence) -> str | None:
    """Return a defect description for an operator family, or None if it is a POVM."""
    if len(elements) == 0:
        return "POVM has no elements"
    try:
        mats = [require_hermitian(m) for m in elements]
    except Exception as exc:
        return f"element is not Hermitian: {exc}"
    dim = mats[0].shape[0]
    for i, m in enumerate(mats):
        if m.shape[0] != dim:
            return f"element {i} has dimension {m.shape[0]}, expected {dim}"
        w, _ = herm_eigen(m)
        if w[0] < -1e-10:
            return f"element {i} has negative eigenvalue {w[0]:.3e}"
    total = sum(mats)
    defect = float(np.linalg.norm(total - np.eye(dim)))
    if defect > 1e-9:
        return f"elements sum to identity with defect {defect:.3e} > 1e-9"
    return None


class Povm:
    """Finite POVM: PSD elements summing to the identity within 1e-9."""

    def __init__(self, elements: Sequence):
        diag = povm_diagnose(elements)
        if diag is not None:
            raise InvalidPovm(diag)
        mats = []
        for m in elements:
            h = require_hermitian(m)
            h.setflags(write=False)
            mats.append(h)
        self._elements = tuple(mats)

    @property
    def elements(self) -> tuple:
        return self._elements

    @property
    def dim(self) -> int:
        return self._elements[0].shape[0]

    def __len__(self) -> int:
        return len(self._elements)

    def __iter__(self):
        return iter(self._elements)

    def __repr__(self) -> str:
        return f"Povm({len(self)} outcomes, dim={self.dim})"


def classical_fisher(rho: DensityOp, drho, povm: Povm) -> float:
    """Classical Fisher information of the POVM at (rho, drho)."""
    drho = require_hermitian(drho)
    if povm.dim != rho.dim or drho.shape[0] != rho.dim:
        raise DomainError("rho, drho and POVM dimensions must agree")
    total = 0.0
    for m in povm:
        p = float(np.trace(rho.matrix @ m).real)
        if p <= EPS_P:
            continue
        dp = float(np.trace(drho @ m).real)
        total += dp * dp / p
    return total


def quantum_fisher(rho: DensityOp, drho) -> float:
    """Quantum Fisher information Tr[rho L^2]."""
    ell = sld_solve(rho, drho)
    value = float(np.trace(rho.matrix @ ell @ ell).real)
    return max(value, 0.0)


class QubitQfi(NamedTuple):
    sphere: float
    transverse: float
    total: float


def qfi_qubit_closed_form(k: float, dk: float, z: complex, v: complex) -> QubitQfi:
    """Closed-form qubit QFI split into sphere and transverse contributions.

    sphere = 4 (k1-k2)^2 |v|^2 / (1+|z|^2)^2, transverse = dk^2 / (k (1-k)).
    """
    if not (0.0 < k <= 0.5):
        raise DomainError(f"k={k!r} outside (0, 1/2]")
    z = complex(z)
    v = complex(v)
    kdiff = 2.0 * k - 1.0
    sphere = 4.0 * kdiff * kdiff * abs(v) ** 2 / (1.0 + abs(z) ** 2) ** 2
    transverse = dk * dk / (k * (1.0 - k))
    return QubitQfi(sphere, transverse, sphere + transverse)


def total_fisher_metric(
    k: float, z: complex, t1: tuple[float, complex], t2: tuple[float, complex]
) -> float:
    """Bilinear total Fisher metric on two tangents (dk, v) at (k, z).

    The diagonal t1 = t2 reproduces qfi_qubit_closed_form.total.
    """
    if not (0.0 < k <= 0.5):
        raise DomainError(f"k={k!r} outside (0, 1/2]")
    dk1, v1 = t1
    dk2, v2 = t2
    kdiff = 2.0 * k - 1.0
    sphere = 4.0 * kdiff * kdiff * (complex(v1).conjugate() * complex(v2)).real
    sphere /= (1.0 + abs(complex(z)) ** 2) ** 2
    return dk1 * dk2 / (k * (1.0 - k)) + sphere


def assemble_drho(k: float, z: complex, dk: float, v: complex) -> np.ndarray:
    """Full qubit drho for the combined tangent (dk, v) at (k, z)."""
    out = np.zeros((2, 2), dtype=complex)
    if v != 0:
        out = out + drho_sphere(k, z, v)
    if dk != 0:
        out = out + drho_transverse(k, dk, z)
    return out


@dataclass(frozen=True)
class FisherTensorValue:
    """Fisher tensor on an ordered tangent pair; sym/antisym split the value."""

    value: complex

    @property
    def sym(self) -> float:
        return self.value.real

    @property
    def antisym(self) -> float:
        return self.value.imag


def fisher_tensor(k: float, z: complex, v: complex, v2: complex) -> FisherTensorValue:
    """Closed-form Fisher tensor on sphere tangents (v, v2) at (k, z)."""
    if not (0.0 < k <= 0.5):
        raise DomainError(f"k={k!r} outside (0, 1/2]")
    z = complex(z)
    kdiff = 2.0 * k - 1.0
    pref = 4.0 * kdiff * kdiff / (1.0 + abs(z) ** 2) ** 2
    ip = complex(v).conjugate() * complex(v2)
    return FisherTensorValue(pref * (ip.real + 1j * kdiff * ip.imag))


def fisher_tensor_general(rho: DensityOp, drho1, drho2) -> FisherTensorValue:
    """Fisher tensor Tr[rho L1 L2] on two matrix directions at rho."""
    ell1 = sld_solve(rho, drho1)
    ell2 = sld_solve(rho, drho2)
    return FisherTensorValue(complex(np.trace(rho.matrix @ ell1 @ ell2)))


def pure_qdit_fisher(a: Sequence[complex], xi_outcomes: Sequence) -> tuple[float, float]:
    """Classical and quantum Fisher information for a pure d-level direction.

    ``a`` are the velocity coefficients in the adapted frame (a[0] pure
    imaginary); ``xi_outcomes`` the rank-one measurement vectors, which must
    satisfy the completeness relation sum_x xi_i(x)* xi_j(x) = delta_ij.
    """
    a = np.asarray([complex(x) for x in a])
    if abs(a[0].real) > 1e-12:
        raise DomainError(f"a[0] = {a[0]!r} must be pure imaginary")
    d = a.shape[0]
    xis = [np.asarray(x, dtype=complex).reshape(-1) for x in xi_outcomes]
    for i, xi in enumerate(xis):
        if xi.shape[0] != d:
            raise DomainError(f"outcome {i} has dimension {xi.shape[0]}, expected {d}")
    gram = sum(np.outer(xi.conj(), xi) for xi in xis)
    defect = float(np.abs(gram - np.eye(d)).max())
    if defect > 1e-9:
        raise NotAPovm(f"outcome vectors violate completeness with defect {defect:.3e} > 1e-9")
    quantum = 4.0 * float(np.sum(np.abs(a[1:]) ** 2))
    classical = 0.0
    for xi in xis:
        if abs(xi[0]) <= 1e-12:
            continue
        s = complex(np.dot(xi[1:], a[1:].conj()))
        classical += (xi[0].conjugate() * s).real ** 2 / abs(xi[0]) ** 2
    classical *= 4.0
    return classical, quantum


@dataclass(frozen=True)
class WavefunctionGrid:
    """Discretized wavefunction family sqrt(p) e^{i alpha} on a uniform grid."""

    x: np.ndarray
    p: np.ndarray
    alpha: np.ndarray
    dp: np.ndarray
    dalpha: np.ndarray

    def __post_init__(self):
        arrays = {}
        for name in ("x", "p", "alpha", "dp", "dalpha"):
            arr = np.asarray(getattr(self, name), dtype=float).reshape(-1)
            if not np.all(np.isfinite(arr)):
                raise NotNormalized(f"grid field {name} contains non-finite values")
            arrays[name] = arr
        n = arrays["x"].shape[0]
        if n < 2:
            raise NotNormalized("grid needs at least 2 points")
        for name, arr in arrays.items():
            if arr.shape[0] != n:
                raise NotNormalized(f"grid field {name} has length {arr.shape[0]}, expected {n}")
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        steps = np.diff(arrays["x"])
        if np.any(steps <= 0) or np.abs(steps - steps[0]).max() > 1e-9 * abs(steps[0]):
            raise NotNormalized("grid points must be uniformly increasing")
        if np.any(arrays["p"] < -1e-15):
            raise NotNormalized("probabilities must be nonnegative")
        if abs(float(np.sum(arrays["p"])) * self.dx - 1.0) > 1e-9:
            raise NotNormalized("sum(p) * dx differs from 1 by more than 1e-9")

    @property
    def dx(self) -> float:
        return float(self.x[1] - self.x[0])


def wavefunction_fisher(grid: WavefunctionGrid) -> tuple[float, float]:
    """Classical and quantum Fisher information of a wavefunction grid.

    classical = sum p (d log p)^2 dx over p > eps;
    quantum = classical + sum p (d alpha)^2 dx - (sum p d alpha dx)^2.
    """
    dx = grid.dx
    mask = grid.p > EPS_P
    classical = float(np.sum(grid.dp[mask] ** 2 / grid.p[mask]) * dx)
    mean_dalpha = float(np.sum(grid.p * grid.dalpha) * dx)
    quantum = classical + float(np.sum(grid.p * grid.dalpha**2) * dx) - mean_dalpha**2
    return classical, quantum
