"""Pure d-level states and the rank-2 mixed-qubit manifold.

A mixed qubit with eigenvalues (k, 1-k), 0 < k <= 1/2, lives on a sphere of
stereographic coordinate z (eigenvector direction) times the mixing interval.
The north chart carries finite z; the point z = infinity is represented in the
south chart with coordinate w = 1/z, so every point has a finite coordinate in
some chart. The gauge of the unitary lift U(z) is fixed by taking both column
phases to zero, with chi := 0 at z = 0.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import ChartSingularity, DomainError, NotNormalized
from .linalg import DensityOp


class Chart(Enum):
    NORTH = "north"
    SOUTH = "south"


#: Sentinel accepted by :func:`qubit_point` for the z = infinity pole.
AT_INFINITY = "inf"


@dataclass(frozen=True)
class PureState:
    """Normalized state vector of a d-level system."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        norm = float(np.linalg.norm(amps))
        if abs(norm - 1.0) > 1e-12:
            raise NotNormalized(f"state norm {norm!r} differs from 1 by more than 1e-12")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]


@dataclass(frozen=True)
class QubitPoint:
    """Chart point (k, coord) on the mixed-qubit manifold.

    ``coord`` is z in the north chart and w = 1/z in the south chart; w = 0
    is the z = infinity pole, where the density matrix is diagonal.
    """

    k: float
    coord: complex = 0j
    chart: Chart = Chart.NORTH

    def __post_init__(self):
        if not (0.0 < self.k <= 0.5):
            raise DomainError(f"k={self.k!r} outside (0, 1/2]")
        c = complex(self.coord)
        if not (math.isfinite(c.real) and math.isfinite(c.imag)):
            raise DomainError("chart coordinate must be finite")
        object.__setattr__(self, "coord", c)

    @property
    def k1(self) -> float:
        return self.k

    @property
    def k2(self) -> float:
        return 1.0 - self.k

    @property
    def r(self) -> float:
        return 1.0 - 2.0 * self.k

    @property
    def psi_angle(self) -> float:
        """Transverse arc coordinate Psi = arcsin(1 - 2k) in [0, pi/2)."""
        return math.asin(self.r)

    @property
    def at_infinity(self) -> bool:
        return self.chart is Chart.SOUTH and self.coord == 0

    @property
    def z(self) -> complex:
        """Physical north-chart coordinate; undefined at the infinity pole."""
        if self.chart is Chart.NORTH:
            return self.coord
        if self.coord == 0:
            raise ChartSingularity("z is infinite at the south-chart origin")
        return 1.0 / self.coord

    @property
    def chi(self) -> float:
        z = self.z
        if z == 0:
            raise ChartSingularity("chi = arg z undefined at z = 0")
        return cmath.phase(z)


def qubit_point(k: float, z) -> QubitPoint:
    """Build a QubitPoint from (k, z), with z = AT_INFINITY ("inf") allowed."""
    if isinstance(z, str):
        if z == AT_INFINITY:
            return QubitPoint(k, 0j, Chart.SOUTH)
        raise DomainError(f"unrecognized z value {z!r}")
    return QubitPoint(k, complex(z), Chart.NORTH)


@dataclass(frozen=True)
class S3Point:
    x1: float
    x2: float
    x3: float
    x4: float

    def __post_init__(self):
        norm = math.sqrt(self.x1**2 + self.x2**2 + self.x3**2 + self.x4**2)
        if abs(norm - 1.0) > 1e-12:
            raise NotNormalized(f"S3 point norm {norm!r} differs from 1")

    def as_array(self) -> np.ndarray:
        return np.array([self.x1, self.x2, self.x3, self.x4])


def pure_projector(psi: PureState) -> DensityOp:
    """Rank-one projector |psi><psi|."""
    amps = psi.amplitudes
    return DensityOp(np.outer(amps, amps.conj()))


def unitary_of_z(z: complex) -> np.ndarray:
    """Gauge-fixed unitary lift U(z) of a sphere point, with chi := 0 at z = 0.

    U(z) = [[|z|, e^{i chi}], [-e^{-i chi}, |z|]] / sqrt(1 + |z|^2).
    """
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise DomainError("z must be finite; the infinity pole lives in the south chart")
    chi = cmath.phase(z) if z != 0 else 0.0
    az = abs(z)
    phase = cmath.exp(1j * chi)
    return np.array([[az, phase], [-1.0 / phase, az]], dtype=complex) / math.sqrt(1.0 + az * az)


def rho_of_kz(point: QubitPoint) -> DensityOp:
    """Density matrix U(z) diag(k1, k2) U(z)^dag, in the point's own chart.

    Eigenvalues are exactly {k, 1-k}; at the south-chart origin (z = infinity)
    the matrix is diag(k1, k2).
    """
    k1, k2 = point.k1, point.k2
    c = point.coord
    ac2 = abs(c) ** 2
    if point.chart is Chart.NORTH:
        m = np.array(
            [[k1 * ac2 + k2, (k2 - k1) * c], [(k2 - k1) * c.conjugate(), k1 + ac2 * k2]],
            dtype=complex,
        )
    else:
        m = np.array(
            [[k1 + k2 * ac2, (k2 - k1) * c.conjugate()], [(k2 - k1) * c, k2 + k1 * ac2]],
            dtype=complex,
        )
    return DensityOp(m / (1.0 + ac2))


def chart_convert(point: QubitPoint, target: str):
    """Convert between charts; target is "north", "south", or "spherical".

    "north"/"south" return the coordinate in the target chart; "spherical"
    returns (theta, phi) with z = cot(theta/2) e^{i phi}. Raises
    ChartSingularity where the target representation is undefined (phi at the
    poles, the opposite chart at its own origin's antipode).
    """
    if target == "spherical":
        if point.at_infinity:
            raise ChartSingularity("phi undefined at theta = 0 (z = infinity)")
        z = point.z
        if z == 0:
            raise ChartSingularity("phi undefined at theta = pi (z = 0)")
        theta = 2.0 * math.atan2(1.0, abs(z))
        return theta, cmath.phase(z)
    if target == "north":
        if point.chart is Chart.NORTH:
            return point.coord
        return point.z
    if target == "south":
        if point.chart is Chart.SOUTH:
            return point.coord
        if point.coord == 0:
            raise ChartSingularity("z = 0 has no south-chart coordinate")
        return 1.0 / point.coord
    raise DomainError(f"unknown chart target {target!r}")


def from_spherical(k: float, theta: float, phi: float) -> QubitPoint:
    """Point with z = cot(theta/2) e^{i phi}; theta = 0 maps to the south-chart origin."""
    if not (0.0 <= theta <= math.pi):
        raise DomainError(f"theta={theta!r} outside [0, pi]")
    if theta == 0.0:
        return QubitPoint(k, 0j, Chart.SOUTH)
    half = theta / 2.0
    z = (math.cos(half) / math.sin(half)) * cmath.exp(1j * phi)
    return QubitPoint(k, z, Chart.NORTH)


def s3_embed(point: QubitPoint) -> S3Point:
    """Embed (k, z) into the unit 3-sphere.

    Returns (sin Psi sin theta cos phi, sin Psi sin theta sin phi,
    sin Psi cos theta, cos Psi) with sin Psi = 1 - 2k. At the chart poles
    (theta = 0 or pi) the azimuth is immaterial and taken as 0.
    """
    psi = point.psi_angle
    if point.at_infinity:
        theta, phi = 0.0, 0.0
    elif point.z == 0:
        theta, phi = math.pi, 0.0
    else:
        theta, phi = chart_convert(point, "spherical")
    sp = math.sin(psi)
    return S3Point(
        sp * math.sin(theta) * math.cos(phi),
        sp * math.sin(theta) * math.sin(phi),
        sp * math.cos(theta),
        math.cos(psi),
    )


def spherical_tangent(z: complex, v: complex) -> tuple[float, float]:
    """Push a stereographic velocity v = dz/dt to (dtheta, dphi).

    Inverts dz = -(1/2) csc^2(theta/2) e^{i phi} dtheta + i z dphi; undefined
    at the poles z = 0 and z = infinity.
    """
    z = complex(z)
    if z == 0:
        raise ChartSingularity("spherical tangent undefined at z = 0")
    az2 = abs(z) ** 2
    zv = z.conjugate() * v
    dtheta = -2.0 * (zv.real / abs(z)) / (1.0 + az2)
    dphi = zv.imag / az2
    return dtheta, dphi


def s3_tangent(point: QubitPoint, dk: float, v: complex) -> tuple[float, float, float]:
    """Push a manifold tangent (dk, v) to S^3 chart velocities (dPsi, dtheta, dphi)."""
    cos_psi = math.cos(point.psi_angle)
    dpsi = -2.0 * dk / cos_psi
    dtheta, dphi = spherical_tangent(point.z, v)
    return dpsi, dtheta, dphi
