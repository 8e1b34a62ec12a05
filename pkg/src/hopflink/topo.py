"""Topological invariants: Chern numbers, the Chern-Simons integral, linking.

Chern numbers are reported in the half-integer normalization
``C = (1/8 pi) int eps^{mu nu} F_mu_nu d^2x`` (the +1 band of ``r . sigma``
has C = 1/2). ``normalized`` carries the integer ``2 C`` (total Berry flux
divided by 2 pi).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.spatial.distance import cdist

from .berry import connection_components, curvature_density, h_dot_sigma
from .errors import BandDegeneracy, CurvesTooClose, DomainMismatch, OpenCurve
from .hmap import HopfS3, format_map_spec, h_field, pontrjagin_density
from .manifold import QuadratureGrid, SphereGrid, build_grid, build_sphere_grid
from .results import InvariantResult, quantize

#: spin-1 matrices; the text this follows prints S_z with a spurious 1/sqrt(2)
SPIN1 = np.array(
    [
        np.array([[0, 1, 0], [1, 0, 1], [0, 1, 0]]) / math.sqrt(2),
        np.array([[0, -1j, 0], [1j, 0, -1j], [0, 1j, 0]]) / math.sqrt(2),
        np.diag([1.0, 0.0, -1.0]),
    ],
    dtype=complex,
)


def spin1_identity_field(theta, phi) -> np.ndarray:
    """``S . r_hat`` for spin 1; a 3x3 Hamiltonian field over S2."""
    r = np.stack(
        [np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)], axis=-1
    )
    return np.einsum("...i,ijk->...jk", r, SPIN1)


def map_hamiltonian_field(spec) -> Callable:
    """``h . sigma`` of an S2 map as a matrix field ``(theta, phi) -> 2x2``."""
    return lambda theta, phi: h_dot_sigma(h_field(spec, theta, phi))


# ---------------------------------------------------------------------------
# Chern number


def _chern_formula(spec, grid: SphereGrid) -> float:
    TH, PH = grid.mesh
    return float(np.sum(grid.coordinate_weights * pontrjagin_density(spec, TH, PH)) / (8 * math.pi))


def plaquette_flux(field: Callable, n_theta: int, n_phi: int, band: int = -1) -> float:
    """Total Berry flux of one band over S2 by the link-variable method.

    The band eigenvector is sampled on the closed grid ``theta_i = i pi/n_theta``
    times periodic ``phi``; each pole row reuses a single eigenvector so that
    the collapsed edges carry no phase.
    """
    theta = math.pi * np.arange(n_theta + 1) / n_theta
    phi = 2 * math.pi * np.arange(n_phi) / n_phi
    TH, PH = np.meshgrid(theta, phi, indexing="ij")
    _, vecs = np.linalg.eigh(field(TH, PH))
    u = vecs[..., band]  # (n_theta+1, n_phi, dim)
    u[0, :] = u[0, 0]
    u[-1, :] = u[-1, 0]

    def link(a, b):
        ov = np.einsum("...i,...i->...", a.conj(), b)
        mag = np.abs(ov)
        if np.any(mag < 1e-6):
            raise BandDegeneracy("link overlap below 1e-6; band not isolated or grid too coarse")
        return ov / mag

    u_next_phi = np.roll(u, -1, axis=1)
    U_theta = link(u[:-1], u[1:])  # (i, j) -> (i+1, j)
    U_phi = link(u, u_next_phi)  # (i, j) -> (i, j+1)
    loop = U_theta * U_phi[1:] * np.conj(np.roll(U_theta, -1, axis=1)) * np.conj(U_phi[:-1])
    return float(np.sum(np.angle(loop)))


def chern_number(source, grid=None, *, band: int = -1, method: str = "auto") -> InvariantResult:
    """Chern number of the +1 band of ``h . sigma`` or of a matrix field's band.

    Parameters
    ----------
    source
        An S2 map spec, or a callable ``(theta, phi) -> (..., n, n)`` giving a
        Hermitian matrix field.
    grid
        A :class:`SphereGrid` (formula route) or ``(n_theta, n_phi)`` (both
        routes). Defaults to 128 x 256.
    band
        Eigenvalue index (ascending) tracked by the plaquette route.
    method
        ``"formula"``, ``"plaquette"`` or ``"auto"`` (formula for map specs).
    """
    is_callable = callable(source) and not hasattr(source, "domain")
    if not is_callable and source.domain == "S3":
        raise DomainMismatch("chern_number needs a Hamiltonian over S2")
    if method == "auto":
        method = "plaquette" if is_callable else "formula"
    if isinstance(grid, SphereGrid):
        shape = grid.shape
    else:
        shape = tuple(grid) if grid is not None else (128, 256)
    coarse_shape = (max(shape[0] // 2, 4), max(shape[1] // 2, 4))

    if method == "formula":
        if is_callable:
            raise ValueError("the formula route needs a map spec, not a matrix field")
        g = grid if isinstance(grid, SphereGrid) else build_sphere_grid(*shape)
        raw = _chern_formula(source, g)
        coarse = _chern_formula(source, build_sphere_grid(*coarse_shape))
    elif method == "plaquette":
        field = source if is_callable else map_hamiltonian_field(source)
        raw = plaquette_flux(field, *shape, band=band) / (4 * math.pi)
        coarse = plaquette_flux(field, *coarse_shape, band=band) / (4 * math.pi)
    else:
        raise ValueError(f"unknown method {method!r}")
    meta = {
        "method": method,
        "grid": list(shape),
        "orientation": "d theta ^ d phi positive",
        "normalization": "C = (1/8 pi) int eps F; normalized = 2 C = flux / 2 pi",
    }
    if not is_callable:
        meta["map"] = format_map_spec(source)
    return InvariantResult(
        raw=raw,
        normalized=2 * raw,
        rounded=quantize(raw, 0.5),
        residual=abs(raw - coarse),
        metadata=meta,
    )


# ---------------------------------------------------------------------------
# Chern-Simons

CS_UNIT = -4 * math.pi**2
"""Raw Chern-Simons integral of the m = 1 Hopf connection."""


def chern_simons_density(spec: HopfS3, t, alpha, beta) -> np.ndarray:
    """Coefficient of ``A ^ dA`` on ``dt ^ da ^ db``, F taken from ``h``."""
    A = connection_components(spec, t, alpha, beta)
    F = curvature_density(spec, t, alpha, beta)  # pairs (t,a), (t,b), (a,b)
    return A[..., 0] * F[..., 2] - A[..., 1] * F[..., 1] + A[..., 2] * F[..., 0]


def _cs_integral(spec: HopfS3, grid: QuadratureGrid) -> float:
    T, A, B = grid.mesh
    return float(np.sum(grid.coordinate_weights * chern_simons_density(spec, T, A, B)))


def chern_simons_raw(spec: HopfS3, grid: QuadratureGrid | None = None) -> InvariantResult:
    """``I = int_{S3} A ^ dA`` for the Berry connection of a Hopf map.

    ``normalized`` is ``(1/8 pi) int eps^{mu nu lambda} A_mu F_nu_lambda d^3x
    = I / (4 pi)``; ``rounded`` is the nearest integer multiple of the m = 1
    value ``-4 pi^2``.
    """
    if not isinstance(spec, HopfS3):
        raise DomainMismatch("chern_simons_raw needs a Hopf variant")
    grid = grid or build_grid(64, 64, 64)
    raw = _cs_integral(spec, grid)
    Nt, Na, Nb = grid.shape
    coarse = _cs_integral(spec, build_grid(max(Nt // 2, 4), max(Na // 2, 4), max(Nb // 2, 4)))
    ratio = raw / CS_UNIT
    return InvariantResult(
        raw=raw,
        normalized=raw / (4 * math.pi),
        rounded=CS_UNIT * round(ratio),
        residual=abs(raw - coarse),
        metadata={
            "map": format_map_spec(spec),
            "grid": list(grid.shape),
            "orientation": "dt ^ dalpha ^ dbeta positive",
            "gauge": "Z = (exp(i m alpha) cos(theta/2), exp(i m beta) sin(theta/2))",
            "normalization": "normalized = (1/8 pi) int eps A F d^3x = raw / (4 pi)",
            "ratio_to_m1": ratio,
        },
    )


# ---------------------------------------------------------------------------
# linking numbers


@dataclass(frozen=True, eq=False)
class Polyline3:
    """Ordered vertices in R3; closed polylines repeat the first vertex last."""

    points: np.ndarray
    closed: bool = True

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 3:
            raise ValueError("points must have shape (N, 3)")
        if pts.shape[0] - 1 < 16:
            raise ValueError("a polyline needs at least 16 segments")
        if self.closed and np.linalg.norm(pts[0] - pts[-1]) > 1e-9:
            raise OpenCurve("closed polyline must end at its first vertex")
        object.__setattr__(self, "points", pts)

    @classmethod
    def loop(cls, samples) -> "Polyline3":
        """Close a list of distinct samples by appending the first one."""
        s = np.asarray(samples, dtype=float)
        return cls(np.vstack([s, s[:1]]), closed=True)

    @property
    def n_segments(self) -> int:
        return self.points.shape[0] - 1

    def reversed(self) -> "Polyline3":
        return Polyline3(self.points[::-1].copy(), self.closed)

    def bisected(self) -> "Polyline3":
        p = self.points
        mid = 0.5 * (p[:-1] + p[1:])
        out = np.empty((2 * p.shape[0] - 1, 3))
        out[0::2] = p
        out[1::2] = mid
        return Polyline3(out, self.closed)


def _gauss_midpoint(p1: np.ndarray, p2: np.ndarray, chunk: int = 256) -> float:
    d1, m1 = np.diff(p1, axis=0), 0.5 * (p1[:-1] + p1[1:])
    d2, m2 = np.diff(p2, axis=0), 0.5 * (p2[:-1] + p2[1:])
    total = 0.0
    for i in range(0, d1.shape[0], chunk):
        r = m1[i : i + chunk, None, :] - m2[None, :, :]
        a = d1[i : i + chunk, None, :]
        b = d2[None, :, :]
        # (a x b) . r as a determinant, written out to avoid temporaries
        triple = (
            r[..., 0] * (a[..., 1] * b[..., 2] - a[..., 2] * b[..., 1])
            + r[..., 1] * (a[..., 2] * b[..., 0] - a[..., 0] * b[..., 2])
            + r[..., 2] * (a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0])
        )
        dist2 = np.einsum("ijk,ijk->ij", r, r)
        total += float(np.sum(triple / (dist2 * np.sqrt(dist2))))
    return total / (4 * math.pi)


def linking_number(c1: Polyline3, c2: Polyline3, refine: bool = True) -> float:
    """Gauss linking integral of two disjoint closed polylines.

    The double integral uses the segment-midpoint rule; with ``refine`` the
    result is Richardson-extrapolated against a once-bisected evaluation.
    """
    for c in (c1, c2):
        if not c.closed:
            raise OpenCurve("linking number needs closed curves")
    if cdist(c1.points, c2.points).min() <= 1e-6:
        raise CurvesTooClose("curves come within 1e-6 of each other")
    coarse = _gauss_midpoint(c1.points, c2.points)
    if not refine:
        return coarse
    fine = _gauss_midpoint(c1.bisected().points, c2.bisected().points)
    return (4.0 * fine - coarse) / 3.0
