"""Parameter curves of density operators and symmetric logarithmic derivatives.

The SLD of a direction drho at rho is the Hermitian L solving
``drho = (rho L + L rho) / 2``; in rho's eigenbasis ``L_ij = 2 drho_ij /
(lam_i + lam_j)`` on the support. Closed forms for the mixed-qubit chart:

* sphere direction (fixed mixing, moving eigenvectors): L = 2 drho;
* transverse direction (fixed eigenvectors, moving mixing k): L =
  dk / ((1+|z|^2) k (1-k)) * [[|z|^2 - k(|z|^2+1), -z], [-z*, 1 - k(|z|^2+1)]].

Built-in curve families evaluate rho(theta) exactly; finite differences are
available for all families and are the only route for tabulated curves.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import (
    ChartSingularity,
    DomainError,
    SupportMismatch,
    TableResolutionError,
)
from .linalg import DensityOp, herm_eigen, require_hermitian
from .states import Chart, PureState, QubitPoint, pure_projector, rho_of_kz, unitary_of_z

ANALYTIC = "analytic"
FD = "fd"
DEFAULT_FD_STEP = 1e-5

#: Minimum eigenvalue keeping a rank-2 family at constant rank.
RANK_GUARD = 1e-9


def _guard_rank2(k: float, theta: float):
    if not (RANK_GUARD <= k <= 0.5):
        raise DomainError(
            f"mixing weight k(theta={theta!r}) = {k!r} leaves [{RANK_GUARD}, 1/2]; "
            "rank-2 curves must keep their rank"
        )


@dataclass(frozen=True)
class GreatCirclePure:
    """Pure qubit great circle psi(theta) = (cos(theta/2), e^{i phase} sin(theta/2))."""

    phase: float = 0.0

    def state_at(self, theta: float) -> PureState:
        half = theta / 2.0
        return PureState(np.array([math.cos(half), cmath.exp(1j * self.phase) * math.sin(half)]))

    def rho_at(self, theta: float) -> DensityOp:
        return pure_projector(self.state_at(theta))

    def drho_analytic(self, theta: float) -> np.ndarray:
        half = theta / 2.0
        psi = self.state_at(theta).amplitudes
        dpsi = 0.5 * np.array([-math.sin(half), cmath.exp(1j * self.phase) * math.cos(half)])
        return np.outer(dpsi, psi.conj()) + np.outer(psi, dpsi.conj())


@dataclass(frozen=True)
class SphereCurve:
    """Fixed mixing k, stereographic path z(theta) = z0 + velocity * theta."""

    k: float
    z0: complex = 0j
    velocity: complex = 0j

    def __post_init__(self):
        if not (0.0 < self.k <= 0.5):
            raise DomainError(f"k={self.k!r} outside (0, 1/2]")

    def point_at(self, theta: float) -> QubitPoint:
        _guard_rank2(self.k, theta)
        return QubitPoint(self.k, self.z0 + self.velocity * theta)

    def rho_at(self, theta: float) -> DensityOp:
        return rho_of_kz(self.point_at(theta))

    def drho_analytic(self, theta: float) -> np.ndarray:
        point = self.point_at(theta)
        return drho_sphere(self.k, point.coord, self.velocity)


@dataclass(frozen=True)
class TransverseCurve:
    """Mixing path k(theta) = k0 + rate * theta at a fixed sphere point.

    ``z=None`` places the curve at the infinity pole, where rho(theta) is the
    diagonal matrix diag(k, 1-k).
    """

    k0: float
    rate: float = 1.0
    z: complex | None = None

    def k_at(self, theta: float) -> float:
        return self.k0 + self.rate * theta

    def point_at(self, theta: float) -> QubitPoint:
        k = self.k_at(theta)
        _guard_rank2(k, theta)
        if self.z is None:
            return QubitPoint(k, 0j, Chart.SOUTH)
        return QubitPoint(k, complex(self.z))

    def rho_at(self, theta: float) -> DensityOp:
        return rho_of_kz(self.point_at(theta))

    def drho_analytic(self, theta: float) -> np.ndarray:
        _guard_rank2(self.k_at(theta), theta)
        diag = np.diag([self.rate, -self.rate]).astype(complex)
        if self.z is None:
            return diag
        u = unitary_of_z(self.z)
        return u @ diag @ u.conj().T


@dataclass(frozen=True)
class PureQditCoeffs:
    """Pure d-level curve with prescribed velocity coefficients at theta = 0.

    In the adapted frame psi(0) = e1 and dpsi(0) = sum_i a_i e_i with a_1 pure
    imaginary; the curve is the unitary flow psi(theta) = exp(theta A) e1 for
    the anti-Hermitian generator A with A e1 = dpsi(0).
    """

    a: tuple[complex, ...]

    def __post_init__(self):
        a = tuple(complex(x) for x in self.a)
        if len(a) < 2:
            raise DomainError("coefficient vector needs dimension >= 2")
        if abs(a[0].real) > 1e-12:
            raise DomainError(f"a[0] = {a[0]!r} must be pure imaginary")
        object.__setattr__(self, "a", a)

    @cached_property
    def _generator(self) -> np.ndarray:
        d = len(self.a)
        gen = np.zeros((d, d), dtype=complex)
        gen[0, 0] = 1j * self.a[0].imag
        for i in range(1, d):
            gen[i, 0] = self.a[i]
            gen[0, i] = -self.a[i].conjugate()
        return gen

    def state_at(self, theta: float) -> PureState:
        h = 1j * self._generator  # Hermitian
        w, v = herm_eigen(h)
        u = (v * np.exp(-1j * theta * w)) @ v.conj().T
        return PureState(u[:, 0])

    def rho_at(self, theta: float) -> DensityOp:
        return pure_projector(self.state_at(theta))

    def drho_analytic(self, theta: float) -> np.ndarray:
        rho = self.rho_at(theta).matrix
        gen = self._generator
        return gen @ rho - rho @ gen


@dataclass(frozen=True)
class TableCurve:
    """Curve tabulated as (theta_j, rho_j) samples; evaluated by linear interpolation."""

    thetas: tuple[float, ...]
    rhos: tuple

    def __post_init__(self):
        if len(self.thetas) != len(self.rhos):
            raise DomainError("table thetas and rhos differ in length")
        if len(self.thetas) >= 2 and not all(
            b > a for a, b in zip(self.thetas, self.thetas[1:])
        ):
            raise DomainError("table thetas must be strictly increasing")

    def rho_at(self, theta: float) -> DensityOp:
        if len(self.thetas) < 2:
            raise TableResolutionError("tabulated curve needs at least 2 samples")
        ts = self.thetas
        if not (ts[0] <= theta <= ts[-1]):
            raise TableResolutionError(
                f"theta={theta!r} outside the tabulated range [{ts[0]}, {ts[-1]}]"
            )
        j = int(np.searchsorted(ts, theta, side="right") - 1)
        j = min(j, len(ts) - 2)
        frac = (theta - ts[j]) / (ts[j + 1] - ts[j])
        m = (1.0 - frac) * np.asarray(self.rhos[j]) + frac * np.asarray(self.rhos[j + 1])
        return DensityOp(m)

    def drho_analytic(self, theta: float) -> np.ndarray:
        raise TableResolutionError("tabulated curves support finite-difference derivatives only")


Curve = GreatCirclePure | SphereCurve | TransverseCurve | PureQditCoeffs | TableCurve


def differentiate_curve(curve, theta: float, mode: str = ANALYTIC, h: float = DEFAULT_FD_STEP) -> np.ndarray:
    """d rho / d theta along a curve, closed-form or central finite difference."""
    if mode == ANALYTIC:
        drho = curve.drho_analytic(theta)
    elif mode == FD:
        if not (h > 0):
            raise DomainError(f"finite-difference step h={h!r} must be positive")
        drho = (curve.rho_at(theta + h).matrix - curve.rho_at(theta - h).matrix) / (2 * h)
    else:
        raise DomainError(f"unknown differentiation mode {mode!r}")
    drho = (drho + drho.conj().T) / 2
    # the FD trace residue is pure roundoff of unit traces and grows like eps/h
    tol = 1e-12 if mode == ANALYTIC else 1e-10 * max(1.0, DEFAULT_FD_STEP / h)
    trace = complex(np.trace(drho))
    if abs(trace) > tol * max(1.0, float(np.linalg.norm(drho))):
        raise DomainError(f"drho trace {trace!r} is not negligible; curve is not trace preserving")
    dim = drho.shape[0]
    return drho - (trace.real / dim) * np.eye(dim)


def sld_solve(rho: DensityOp, drho) -> np.ndarray:
    """Solve drho = (rho L + L rho)/2 for Hermitian L in rho's eigenbasis.

    Entries over vanishing eigenvalue pairs are set to 0 when drho vanishes
    there too; otherwise the direction leaves the support and SupportMismatch
    is raised.
    """
    drho = require_hermitian(drho)
    if drho.shape[0] != rho.dim:
        raise DomainError(f"drho dimension {drho.shape[0]} does not match rho dimension {rho.dim}")
    if abs(complex(np.trace(drho))) > 1e-10 * max(1.0, float(np.linalg.norm(drho))):
        raise DomainError("drho must be traceless")
    w, v = rho.eigenvalues, rho.eigenvectors
    dr = v.conj().T @ drho @ v
    ell = np.zeros_like(dr)
    for i in range(rho.dim):
        for j in range(rho.dim):
            denom = w[i] + w[j]
            if denom > 1e-12:
                ell[i, j] = 2.0 * dr[i, j] / denom
            elif abs(dr[i, j]) > 1e-10:
                raise SupportMismatch(
                    f"drho has weight {abs(dr[i, j]):.3e} outside the support of rho"
                )
    out = v @ ell @ v.conj().T
    return (out + out.conj().T) / 2


def sld_transverse(k: float, dk: float, z: complex) -> np.ndarray:
    """Closed-form SLD of the transverse (mixing-weight) direction at (k, z)."""
    if not (0.0 < k <= 0.5):
        raise DomainError(f"k={k!r} outside (0, 1/2]")
    z = complex(z)
    az2 = abs(z) ** 2
    pref = dk / ((1.0 + az2) * k * (1.0 - k))
    return pref * np.array(
        [[az2 - k * (az2 + 1.0), -z], [-z.conjugate(), 1.0 - k * (az2 + 1.0)]],
        dtype=complex,
    )


def _drho_sphere(kdiff: float, z: complex, v: complex) -> np.ndarray:
    z = complex(z)
    v = complex(v)
    zc, vc = z.conjugate(), v.conjugate()
    pref = kdiff / (1.0 + abs(z) ** 2) ** 2
    return pref * np.array(
        [[zc * v + z * vc, z * z * vc - v], [zc * zc * v - vc, -(zc * v + z * vc)]],
        dtype=complex,
    )


def drho_sphere(k: float, z: complex, v: complex) -> np.ndarray:
    """Sphere-direction drho at mixing k, point z, stereographic velocity v."""
    if not (0.0 < k <= 0.5):
        raise DomainError(f"k={k!r} outside (0, 1/2]")
    return _drho_sphere(2.0 * k - 1.0, z, v)


def drho_sphere_pure(z: complex, v: complex) -> np.ndarray:
    """Sphere-direction drho of the pure projector family (the k -> 0 limit)."""
    return _drho_sphere(-1.0, z, v)


def drho_transverse(k: float, dk: float, z: complex) -> np.ndarray:
    """Transverse drho: dk * U(z) diag(1, -1) U(z)^dag."""
    if not (0.0 < k <= 0.5):
        raise DomainError(f"k={k!r} outside (0, 1/2]")
    u = unitary_of_z(z)
    return dk * (u @ np.diag([1.0, -1.0]).astype(complex) @ u.conj().T)


def connection_coefficient(z: complex) -> complex:
    """Chart coefficient lambda = e^{-2i chi} / (1 + |z|^2), with chi := 0 at z = 0."""
    z = complex(z)
    chi = cmath.phase(z) if z != 0 else 0.0
    return cmath.exp(-2j * chi) / (1.0 + abs(z) ** 2)


@dataclass(frozen=True)
class TangentDir:
    """Tangent (dk, v) at a chart point, with its matrix representations.

    ``drho`` is the full direction (sphere + transverse); ``generator`` is the
    Hermitian K with -i[K, rho] equal to the sphere part; ``xtilde0`` is the
    reference-frame matrix tangent (k1-k2) [[0, v* lam*], [v lam, 0]].
    """

    point: QubitPoint
    dk: float = 0.0
    v: complex = 0j

    def __post_init__(self):
        object.__setattr__(self, "v", complex(self.v))
        if self.point.at_infinity and self.v != 0:
            raise ChartSingularity(
                "sphere velocity is chart-undefined at the infinity pole; use the north chart"
            )

    @property
    def _z(self) -> complex:
        return 0j if self.point.at_infinity else self.point.z

    @cached_property
    def drho_sphere_part(self) -> np.ndarray:
        if self.v == 0:
            return np.zeros((2, 2), dtype=complex)
        return drho_sphere(self.point.k, self._z, self.v)

    @cached_property
    def drho_transverse_part(self) -> np.ndarray:
        if self.dk == 0:
            return np.zeros((2, 2), dtype=complex)
        if self.point.at_infinity:
            return np.diag([self.dk, -self.dk]).astype(complex)
        return drho_transverse(self.point.k, self.dk, self._z)

    @cached_property
    def drho(self) -> np.ndarray:
        return self.drho_sphere_part + self.drho_transverse_part

    @cached_property
    def lam(self) -> complex:
        return connection_coefficient(self._z)

    @cached_property
    def xtilde0(self) -> np.ndarray:
        kdiff = self.point.k1 - self.point.k2
        lv = self.lam * self.v
        return kdiff * np.array([[0.0, lv.conjugate()], [lv, 0.0]], dtype=complex)

    @cached_property
    def xtilde(self) -> np.ndarray:
        u = unitary_of_z(self._z)
        return u @ self.xtilde0 @ u.conj().T

    @cached_property
    def generator(self) -> np.ndarray:
        lv = self.lam * self.v
        k0 = 1j * np.array([[0.0, -lv.conjugate()], [lv, 0.0]], dtype=complex)
        u = unitary_of_z(self._z)
        return u @ k0 @ u.conj().T
