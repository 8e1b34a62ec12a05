"""Charts, metrics, quadrature and differentiation on S2 and S3.

S3 is parametrized as

    (cos(t/2) cos a, cos(t/2) sin a, sin(t/2) cos b, sin(t/2) sin b),

with 0 <= t <= pi and a, b periodic. The metric is diagonal,
``diag(1/4, cos^2(t/2), sin^2(t/2))``, and the volume density is
``sin(t) / 4``.

Grid functions are complex (or real) arrays of shape ``(Nt, Na, Nb)``.
Derivatives in the periodic angles are taken with FFTs; derivatives in
``t`` use the barycentric collocation matrix of the Gauss-Legendre nodes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import PoleError, SizeError

TWO_PI = 2.0 * math.pi
_T_SLACK = 1e-12
_POLE_TOL = 1e-12


def _reduce_angle(x: float) -> float:
    r = math.fmod(x, TWO_PI)
    if r < 0.0:
        r += TWO_PI
    # fmod of values just below 2*pi can round up to exactly 2*pi
    return 0.0 if r >= TWO_PI else r


def _check_polar(name: str, value: float) -> float:
    if not (-_T_SLACK <= value <= math.pi + _T_SLACK):
        raise ValueError(f"{name}={value!r} outside [0, pi]")
    return min(max(value, 0.0), math.pi)


@dataclass(frozen=True)
class AngleCoordS3:
    """A point of S3 in (t, alpha, beta) coordinates."""

    t: float
    alpha: float = 0.0
    beta: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "t", _check_polar("t", float(self.t)))
        object.__setattr__(self, "alpha", _reduce_angle(float(self.alpha)))
        object.__setattr__(self, "beta", _reduce_angle(float(self.beta)))

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.t, self.alpha, self.beta)


@dataclass(frozen=True)
class AngleCoordS2:
    """A point of S2 in polar coordinates (theta, phi)."""

    theta: float
    phi: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "theta", _check_polar("theta", float(self.theta)))
        object.__setattr__(self, "phi", _reduce_angle(float(self.phi)))

    def as_tuple(self) -> tuple[float, float]:
        return (self.theta, self.phi)


@dataclass(frozen=True)
class MetricDiagS3:
    g_tt: float
    g_aa: float
    g_bb: float
    jacobian: float

    @property
    def det(self) -> float:
        return self.g_tt * self.g_aa * self.g_bb


def metric_s3(t: float) -> MetricDiagS3:
    return MetricDiagS3(
        g_tt=0.25,
        g_aa=math.cos(t / 2) ** 2,
        g_bb=math.sin(t / 2) ** 2,
        jacobian=math.sin(t) / 4,
    )


# ---------------------------------------------------------------------------
# embedding and projection


def embed_s3(t, alpha, beta) -> np.ndarray:
    """Vectorized embedding into R4; the last axis holds (y1, y2, y3, y4)."""
    t, alpha, beta = np.broadcast_arrays(
        np.asarray(t, float), np.asarray(alpha, float), np.asarray(beta, float)
    )
    c, s = np.cos(t / 2), np.sin(t / 2)
    return np.stack(
        [c * np.cos(alpha), c * np.sin(alpha), s * np.cos(beta), s * np.sin(beta)],
        axis=-1,
    )


def s3_embed(p: AngleCoordS3) -> np.ndarray:
    return embed_s3(p.t, p.alpha, p.beta)


def s3_extract(y) -> AngleCoordS3:
    """Inverse of :func:`s3_embed` (well defined away from t = 0, pi)."""
    y = np.asarray(y, float)
    r12 = math.hypot(y[0], y[1])
    r34 = math.hypot(y[2], y[3])
    t = 2.0 * math.atan2(r34, r12)
    return AngleCoordS3(t, math.atan2(y[1], y[0]), math.atan2(y[3], y[2]))


def stereographic_points(t, alpha, beta) -> np.ndarray:
    """Project S3 points to R3 from the pole y4 = 1, i.e. (t=pi, beta=pi/2).

    Raises
    ------
    PoleError
        If any point lies within 1e-12 (in the denominator) of the pole.
    """
    y = embed_s3(t, alpha, beta)
    denom = 1.0 - y[..., 3]
    if np.any(denom < _POLE_TOL):
        raise PoleError("point maps to infinity under stereographic projection")
    return y[..., :3] / denom[..., None]


def stereographic_project(p: AngleCoordS3) -> np.ndarray:
    return stereographic_points(p.t, p.alpha, p.beta)


# ---------------------------------------------------------------------------
# quadrature


def gauss_legendre_interval(n: int, a: float, b: float):
    """Gauss-Legendre nodes and weights on (a, b), together with the
    barycentric weights of the reference nodes."""
    x, w = np.polynomial.legendre.leggauss(n)
    half = 0.5 * (b - a)
    nodes = a + half * (x + 1.0)
    # barycentric weights for Legendre points (Wang & Xiang, 2012)
    bary = (-1.0) ** np.arange(n) * np.sqrt((1.0 - x**2) * w)
    return nodes, half * w, bary


def collocation_matrix(nodes: np.ndarray, bary: np.ndarray) -> np.ndarray:
    """First-derivative matrix of the polynomial interpolant through ``nodes``."""
    diff = nodes[:, None] - nodes[None, :]
    np.fill_diagonal(diff, 1.0)
    D = (bary[None, :] / bary[:, None]) / diff
    np.fill_diagonal(D, 0.0)
    # negative-sum trick keeps D annihilating constants to rounding
    np.fill_diagonal(D, -D.sum(axis=1))
    return D


def _fourier_wavenumbers(n: int) -> np.ndarray:
    k = np.fft.fftfreq(n, d=1.0 / n)
    if n % 2 == 0:
        k[n // 2] = 0.0
    return k


@dataclass(frozen=True, eq=False)
class QuadratureGrid:
    """Tensor-product grid over (t, alpha, beta).

    ``t`` uses Gauss-Legendre nodes on the open interval (0, pi); alpha and
    beta are uniform with trapezoidal weights.
    """

    t: np.ndarray
    t_weights: np.ndarray
    alpha: np.ndarray
    beta: np.ndarray
    _bary: np.ndarray = field(repr=False)

    @property
    def shape(self) -> tuple[int, int, int]:
        return (self.t.size, self.alpha.size, self.beta.size)

    @cached_property
    def mesh(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return tuple(np.meshgrid(self.t, self.alpha, self.beta, indexing="ij"))

    @cached_property
    def coordinate_weights(self) -> np.ndarray:
        """Weights for the coordinate measure dt da db."""
        da = TWO_PI / self.alpha.size
        db = TWO_PI / self.beta.size
        w = self.t_weights * da * db
        return np.broadcast_to(w[:, None, None], self.shape)

    @cached_property
    def volume_weights(self) -> np.ndarray:
        """Weights for the Riemannian measure (sin t / 4) dt da db."""
        v = np.sin(self.t) / 4.0
        return self.coordinate_weights * v[:, None, None]

    @cached_property
    def d_t_matrix(self) -> np.ndarray:
        return collocation_matrix(self.t, self._bary)

    @cached_property
    def k_alpha(self) -> np.ndarray:
        return _fourier_wavenumbers(self.alpha.size)

    @cached_property
    def k_beta(self) -> np.ndarray:
        return _fourier_wavenumbers(self.beta.size)

    def sample(self, func) -> np.ndarray:
        """Evaluate ``func(t, alpha, beta)`` on the full mesh."""
        T, A, B = self.mesh
        return np.asarray(func(T, A, B))


def build_grid(Nt: int, Na: int, Nb: int) -> QuadratureGrid:
    if min(Nt, Na, Nb) < 4:
        raise SizeError(f"grid sizes must all be >= 4, got {(Nt, Na, Nb)}")
    t, wt, bary = gauss_legendre_interval(int(Nt), 0.0, math.pi)
    alpha = TWO_PI * np.arange(Na) / Na
    beta = TWO_PI * np.arange(Nb) / Nb
    return QuadratureGrid(t=t, t_weights=wt, alpha=alpha, beta=beta, _bary=bary)


def integrate(f: np.ndarray, grid: QuadratureGrid, measure: str = "volume"):
    """Integrate a grid function over S3 (``measure`` is 'volume' or 'coordinate')."""
    w = grid.volume_weights if measure == "volume" else grid.coordinate_weights
    return np.sum(w * f)


def l2_norm(f: np.ndarray, grid: QuadratureGrid) -> float:
    return float(np.sqrt(np.real(integrate(np.abs(f) ** 2, grid))))


@dataclass(frozen=True, eq=False)
class SphereGrid:
    """Gauss-Legendre in theta times uniform phi, for integrals over S2."""

    theta: np.ndarray
    theta_weights: np.ndarray
    phi: np.ndarray

    @property
    def shape(self) -> tuple[int, int]:
        return (self.theta.size, self.phi.size)

    @cached_property
    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        return tuple(np.meshgrid(self.theta, self.phi, indexing="ij"))

    @cached_property
    def coordinate_weights(self) -> np.ndarray:
        w = self.theta_weights * (TWO_PI / self.phi.size)
        return np.broadcast_to(w[:, None], self.shape)


def build_sphere_grid(Ntheta: int, Nphi: int, theta_max: float = math.pi) -> SphereGrid:
    """Quadrature grid over the polar cap ``0 < theta < theta_max``."""
    if min(Ntheta, Nphi) < 4:
        raise SizeError(f"grid sizes must all be >= 4, got {(Ntheta, Nphi)}")
    theta, wt, _ = gauss_legendre_interval(int(Ntheta), 0.0, theta_max)
    phi = TWO_PI * np.arange(Nphi) / Nphi
    return SphereGrid(theta=theta, theta_weights=wt, phi=phi)


# ---------------------------------------------------------------------------
# differential operators on grid functions


def d_t(f: np.ndarray, grid: QuadratureGrid) -> np.ndarray:
    return np.tensordot(grid.d_t_matrix, f, axes=(1, 0))


def d_alpha(f: np.ndarray, grid: QuadratureGrid) -> np.ndarray:
    k = grid.k_alpha[None, :, None]
    out = np.fft.ifft(1j * k * np.fft.fft(f, axis=1), axis=1)
    return out if np.iscomplexobj(f) else out.real


def d_beta(f: np.ndarray, grid: QuadratureGrid) -> np.ndarray:
    k = grid.k_beta[None, None, :]
    out = np.fft.ifft(1j * k * np.fft.fft(f, axis=2), axis=2)
    return out if np.iscomplexobj(f) else out.real


def laplacian_apply(f: np.ndarray, grid: QuadratureGrid) -> np.ndarray:
    """Laplace-Beltrami operator of the unit S3 applied to a grid function.

    ``4 f_tt + 4 cot(t) f_t + f_aa / cos^2(t/2) + f_bb / sin^2(t/2)``
    """
    t = grid.t[:, None, None]
    ft = d_t(f, grid)
    ftt = d_t(ft, grid)
    faa = d_alpha(d_alpha(f, grid), grid)
    fbb = d_beta(d_beta(f, grid), grid)
    return (
        4.0 * ftt
        + 4.0 * (np.cos(t) / np.sin(t)) * ft
        + faa / np.cos(t / 2) ** 2
        + fbb / np.sin(t / 2) ** 2
    )
