"""Berry connections and curvatures of ``h . sigma`` Hamiltonians.

Abelian conventions: ``A_mu = -i <psi | d_mu psi>`` and
``F_mu_nu = d_mu A_nu - d_nu A_mu``. For the +1 band of ``h . sigma`` this
equals ``(1/2) h . (d_mu h x d_nu h)``.

The second half of the module treats the projector Hamiltonian ``|n><n|``
of a surface embedded in R^{d+1}. Its degenerate null space is spanned by
the coordinate tangents ``psi_mu = d_mu X``, and the real connection
``(A_mu)^a_b = <psi^a | d_mu psi_b>`` (index raised with the induced
metric) reproduces the Christoffel symbols ``Gamma^a_{b mu}``. With
``F_rs = -(d_r A_s - d_s A_r + [A_r, A_s])`` the Riemann tensor satisfies
``R^b_{n r s} = -(F_rs)^b_n``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from itertools import combinations
from typing import Callable

import numpy as np

from .errors import DegenerateFrame, DomainMismatch, PatchSingularity
from .hmap import (
    ConstantNorth,
    HopfS3,
    PontrjaginS2,
    h_derivatives,
    h_field,
    target_angles,
    target_polar_angle,
)
from .manifold import AngleCoordS2, AngleCoordS3, build_sphere_grid

PAULI = np.array(
    [[[0, 1], [1, 0]], [[0, -1j], [1j, 0]], [[1, 0], [0, -1]]], dtype=complex
)
_PATCH_TOL = 1e-9
DEFAULT_STEP = 1e-5


class Patch(enum.Enum):
    NORTH = "north"  # regular except at h = -z
    SOUTH = "south"  # regular except at h = +z
    HOPF = "hopf"  # global gauge on S3 for Hopf maps


@dataclass(frozen=True, eq=False)
class Spinor2:
    components: np.ndarray
    patch: Patch

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.components, dtype=dtype)


def _names(ncoords: int) -> tuple[str, ...]:
    return ("t", "alpha", "beta") if ncoords == 3 else ("theta", "phi")


def _as_coords(p) -> tuple[float, ...]:
    if isinstance(p, (AngleCoordS2, AngleCoordS3)):
        return p.as_tuple()
    return tuple(float(x) for x in p)


def h_dot_sigma(h) -> np.ndarray:
    return np.einsum("...i,ijk->...jk", np.asarray(h, dtype=float), PAULI)


# ---------------------------------------------------------------------------
# spinors


def eigen_plus_components(h, patch: Patch = Patch.NORTH) -> np.ndarray:
    """Vectorized +1 eigenvector of ``h . sigma`` in a Wu-Yang patch."""
    h = np.asarray(h, dtype=float)
    hx, hy, hz = h[..., 0], h[..., 1], h[..., 2]
    if patch is Patch.NORTH:
        gap = np.sqrt(hx**2 + hy**2 + (1.0 + hz) ** 2)
        if np.any(gap < _PATCH_TOL):
            raise PatchSingularity("north patch is singular at h = (0, 0, -1)")
        norm = np.sqrt(2.0 * (1.0 + hz))
        return np.stack([(1.0 + hz) / norm, (hx + 1j * hy) / norm], axis=-1)
    if patch is Patch.SOUTH:
        gap = np.sqrt(hx**2 + hy**2 + (1.0 - hz) ** 2)
        if np.any(gap < _PATCH_TOL):
            raise PatchSingularity("south patch is singular at h = (0, 0, +1)")
        norm = np.sqrt(2.0 * (1.0 - hz))
        return np.stack([(hx - 1j * hy) / norm, (1.0 - hz) / norm + 0j], axis=-1)
    raise ValueError(f"eigen_plus needs the NORTH or SOUTH patch, got {patch}")


def eigen_plus(h, patch: Patch = Patch.NORTH) -> Spinor2:
    return Spinor2(eigen_plus_components(h, patch), patch)


def hopf_spinor_components(spec: HopfS3, t, alpha, beta) -> np.ndarray:
    """``(e^{i m alpha} cos(theta/2), e^{i m beta} sin(theta/2))`` on S3."""
    if not isinstance(spec, HopfS3):
        raise DomainMismatch("the Hopf gauge exists only for Hopf variants")
    theta, _ = target_polar_angle(spec, t)
    m = spec.m
    return np.stack(
        [
            np.exp(1j * m * np.asarray(alpha)) * np.cos(theta / 2),
            np.exp(1j * m * np.asarray(beta)) * np.sin(theta / 2),
        ],
        axis=-1,
    )


def hopf_gauge_spinor(spec: HopfS3, p: AngleCoordS3) -> Spinor2:
    if not isinstance(p, AngleCoordS3):
        raise DomainMismatch("the Hopf gauge spinor lives on S3")
    return Spinor2(hopf_spinor_components(spec, *p.as_tuple()), Patch.HOPF)


def eigen_residual(h, psi) -> float:
    """``|| (h . sigma - 1) psi ||``."""
    psi = np.asarray(psi, dtype=complex)
    return float(np.linalg.norm(h_dot_sigma(h) @ psi - psi))


def hopf_spinor_field(spec: HopfS3) -> Callable[[np.ndarray], np.ndarray]:
    return lambda x: hopf_spinor_components(spec, x[0], x[1], x[2])


def patch_spinor_field(spec, patch: Patch = Patch.NORTH) -> Callable[[np.ndarray], np.ndarray]:
    """Spinor field ``x -> eigen_plus(h(x), patch)`` for any map spec."""
    return lambda x: eigen_plus_components(h_field(spec, *x), patch)


# ---------------------------------------------------------------------------
# Abelian connection and curvature


@dataclass(frozen=True, eq=False)
class ConnectionSample:
    names: tuple[str, ...]
    values: np.ndarray

    def __getitem__(self, name: str) -> float:
        return float(self.values[self.names.index(name)])


@dataclass(frozen=True, eq=False)
class CurvatureSample:
    """Independent components ``F_mu_nu`` with mu < nu, in lexicographic order."""

    names: tuple[str, ...]
    values: np.ndarray

    @property
    def pairs(self) -> list[tuple[int, int]]:
        return list(combinations(range(len(self.names)), 2))

    def component(self, mu, nu) -> float:
        i = self.names.index(mu) if isinstance(mu, str) else mu
        j = self.names.index(nu) if isinstance(nu, str) else nu
        if i == j:
            return 0.0
        if i < j:
            return float(self.values[self.pairs.index((i, j))])
        return -float(self.values[self.pairs.index((j, i))])

    def matrix(self) -> np.ndarray:
        d = len(self.names)
        out = np.zeros((d, d))
        for k, (i, j) in enumerate(self.pairs):
            out[i, j] = self.values[k]
            out[j, i] = -self.values[k]
        return out


def connection_components(spec, *coords, patch: Patch | None = None) -> np.ndarray:
    """Closed-form Berry connection, shape ``(..., ncoords)``.

    Hopf variants use the global gauge: ``(0, m cos^2(theta/2), m sin^2(theta/2))``.
    Pontrjagin maps use a Wu-Yang patch (north by default), where
    ``A_phi = n sin^2(T/2)`` (north) or ``-n cos^2(T/2)`` (south).
    """
    shape = np.broadcast(*coords).shape
    out = np.zeros(shape + (len(coords),))
    if isinstance(spec, ConstantNorth):
        return out
    if isinstance(spec, HopfS3):
        if len(coords) != 3:
            raise DomainMismatch("Hopf connection needs (t, alpha, beta)")
        theta, _ = target_polar_angle(spec, coords[0])
        out[..., 1] = spec.m * np.cos(theta / 2) ** 2
        out[..., 2] = spec.m * np.sin(theta / 2) ** 2
        return out
    if isinstance(spec, PontrjaginS2):
        if len(coords) != 2:
            raise DomainMismatch("Pontrjagin connection needs (theta, phi)")
        T, _ = target_angles(spec, *coords)
        if (patch or Patch.NORTH) is Patch.SOUTH:
            out[..., 1] = -spec.n * np.cos(T / 2) ** 2
        else:
            out[..., 1] = spec.n * np.sin(T / 2) ** 2
        return out
    raise DomainMismatch(f"no analytic connection for {spec!r}")


def connection_analytic(spec, p, patch: Patch | None = None) -> ConnectionSample:
    x = _as_coords(p)
    return ConnectionSample(_names(len(x)), connection_components(spec, *x, patch=patch))


def _fd4(func, x0: np.ndarray, mu: int, step: float):
    e = np.zeros_like(x0)
    e[mu] = step
    f = [func(x0 + k * e) for k in (-2, -1, 1, 2)]
    return (f[0] - 8 * f[1] + 8 * f[2] - f[3]) / (12 * step)


def connection_numeric(spinor_field, p, step: float = DEFAULT_STEP) -> ConnectionSample:
    """``-i <psi | d_mu psi>`` by fourth-order centred differences."""
    x0 = np.asarray(_as_coords(p), dtype=float)
    psi = np.asarray(spinor_field(x0), dtype=complex)
    vals = np.empty(x0.size)
    for mu in range(x0.size):
        dpsi = _fd4(lambda x: np.asarray(spinor_field(x), dtype=complex), x0, mu, step)
        vals[mu] = np.imag(np.vdot(psi, dpsi))
    return ConnectionSample(_names(x0.size), vals)


def curvature_density(spec, *coords) -> np.ndarray:
    """``(1/2) h . (d_mu h x d_nu h)`` for all mu < nu; shape ``(..., npairs)``."""
    h = h_field(spec, *coords)
    dh = h_derivatives(spec, *coords)
    pairs = list(combinations(range(len(coords)), 2))
    out = np.empty(h.shape[:-1] + (len(pairs),))
    for k, (i, j) in enumerate(pairs):
        out[..., k] = 0.5 * np.einsum("...i,...i->...", h, np.cross(dh[..., i, :], dh[..., j, :]))
    return out


def curvature_from_h(spec, p) -> CurvatureSample:
    x = _as_coords(p)
    return CurvatureSample(_names(len(x)), curvature_density(spec, *x))


def curvature_from_A(spec, p, step: float = DEFAULT_STEP, patch: Patch | None = None) -> CurvatureSample:
    """Curvature from centred differences of the closed-form connection."""
    x0 = np.asarray(_as_coords(p), dtype=float)
    d = x0.size
    # dA[mu, nu] = d_mu A_nu
    dA = np.array(
        [_fd4(lambda x: connection_components(spec, *x, patch=patch), x0, mu, step) for mu in range(d)]
    )
    pairs = list(combinations(range(d), 2))
    vals = np.array([dA[i, j] - dA[j, i] for i, j in pairs])
    return CurvatureSample(_names(d), vals)


def curvature_samples(spec, n: int = 16) -> np.ndarray:
    """Cell-centred ``n^d`` sample points of the map's chart, poles excluded."""
    d = 3 if spec.domain == "S3" else 2
    t = (np.arange(n) + 0.5) * math.pi / n
    ang = 2 * math.pi * np.arange(n) / n
    axes = [t] + [ang] * (d - 1)
    return np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, d)


def curvature_theorem_deviation(spec, n: int = 16, step: float = DEFAULT_STEP) -> float:
    """Worst ``|dA - (1/2) h.(dh x dh)|`` over :func:`curvature_samples`."""
    pts = curvature_samples(spec, n)
    exact = curvature_density(spec, *pts.T)
    worst = 0.0
    for x, f in zip(pts, exact):
        worst = max(worst, float(np.max(np.abs(curvature_from_A(spec, x, step).values - f))))
    return worst


@dataclass(frozen=True)
class BerryPhase:
    """Line integral of A around a latitude circle and flux through its cap."""

    line: float
    surface: float
    patch: Patch

    def phase_mismatch(self) -> float:
        return abs(np.exp(1j * self.line) - np.exp(1j * self.surface))


def berry_phase_loop(
    spec, theta0: float, n_nodes: int = 64, patch: Patch = Patch.NORTH, step: float = 1e-3
) -> BerryPhase:
    """Berry phase of the circle ``theta = theta0`` traversed in +phi.

    The line integral differentiates the patch spinor numerically; the
    surface integral uses the curvature of ``h`` over ``theta < theta0``.
    The default ``step`` balances the fourth-order truncation error against
    rounding, which keeps the line integral near 1e-13.
    """
    if spec.domain == "S3":
        raise DomainMismatch("berry_phase_loop works on S2 maps")
    phis = 2 * math.pi * np.arange(n_nodes) / n_nodes
    field = patch_spinor_field(spec, patch)
    a_phi = [connection_numeric(field, (theta0, ph), step)["phi"] for ph in phis]
    line = float(np.sum(a_phi) * 2 * math.pi / n_nodes)
    grid = build_sphere_grid(max(n_nodes, 4), 4, theta_max=theta0)
    TH, PH = grid.mesh
    flux = curvature_density(spec, TH, PH)[..., 0]
    surface = float(np.sum(grid.coordinate_weights * flux))
    return BerryPhase(line=line, surface=surface, patch=patch)


# ---------------------------------------------------------------------------
# projector Hamiltonian |n><n| of an embedded surface


class UnitSphere:
    """Round S2 in R3, coordinates (theta, phi)."""

    name = "sphere"
    dim = 2
    # polar caps excluded: the coordinate frame degenerates at theta = 0, pi
    sample_box = ((0.05 * math.pi, 0.95 * math.pi), (0.0, 2 * math.pi))

    def embedding(self, x):
        th, ph = x
        return np.array([math.sin(th) * math.cos(ph), math.sin(th) * math.sin(ph), math.cos(th)])

    def tangents(self, x) -> np.ndarray:
        th, ph = x
        ct, st, cp, sp = math.cos(th), math.sin(th), math.cos(ph), math.sin(ph)
        return np.array([[ct * cp, -st * sp], [ct * sp, st * cp], [-st, 0.0]])

    def normal(self, x):
        return self.embedding(x)


class FlatPlane:
    """The plane z = 0 in Cartesian coordinates (u, v)."""

    name = "plane"
    dim = 2
    sample_box = ((-1.0, 1.0), (-1.0, 1.0))

    def embedding(self, x):
        return np.array([x[0], x[1], 0.0])

    def tangents(self, x) -> np.ndarray:
        return np.array([[1.0, 0.0], [0.0, 1.0], [0.0, 0.0]])

    def normal(self, x):
        return np.array([0.0, 0.0, 1.0])


class PolarPlane:
    """The plane z = 0 in polar coordinates (r, phi): flat, but Gamma != 0."""

    name = "polar-plane"
    dim = 2
    sample_box = ((0.5, 2.0), (0.0, 2 * math.pi))

    def embedding(self, x):
        r, ph = x
        return np.array([r * math.cos(ph), r * math.sin(ph), 0.0])

    def tangents(self, x) -> np.ndarray:
        r, ph = x
        return np.array([[math.cos(ph), -r * math.sin(ph)], [math.sin(ph), r * math.cos(ph)], [0.0, 0.0]])

    def normal(self, x):
        return np.array([0.0, 0.0, 1.0])


SURFACES = {s.name: s for s in (UnitSphere(), FlatPlane(), PolarPlane())}


@dataclass(frozen=True, eq=False)
class ProjectorFrame:
    point: np.ndarray
    normal: np.ndarray
    tangents: np.ndarray  # columns are psi_mu
    metric: np.ndarray

    @property
    def hamiltonian(self) -> np.ndarray:
        return np.outer(self.normal, self.normal)


def projector_frame(surface, x, frame=None) -> ProjectorFrame:
    x = np.asarray(x, dtype=float)
    E = np.asarray(frame(x) if frame is not None else surface.tangents(x), dtype=float)
    n = np.asarray(surface.normal(x), dtype=float)
    g = E.T @ E
    if np.linalg.det(g) < 1e-12:
        raise DegenerateFrame(f"induced metric is degenerate at {x.tolist()}")
    return ProjectorFrame(point=surface.embedding(x), normal=n, tangents=E, metric=g)


def projector_connection(surface, p, step: float = 1e-4, frame=None) -> np.ndarray:
    """``A[mu, a, b] = <psi^a | d_mu psi_b>`` with ``psi^a = g^{ab} psi_b``.

    ``frame`` optionally replaces the coordinate tangents by another basis of
    the null space of ``|n><n|`` (a callable returning a (d+1, d) matrix).
    """
    x0 = np.asarray(_as_coords(p), dtype=float)
    fr = projector_frame(surface, x0, frame)
    get = frame if frame is not None else surface.tangents
    ginv = np.linalg.inv(fr.metric)
    out = np.empty((x0.size, x0.size, x0.size))
    for mu in range(x0.size):
        dE = _fd4(lambda x: np.asarray(get(x), dtype=float), x0, mu, step)
        out[mu] = ginv @ fr.tangents.T @ dE
    return out


def frame_curvature(surface, p, step: float = 1e-4, frame=None) -> np.ndarray:
    """``F[r, s] = -(d_r A_s - d_s A_r + [A_r, A_s])`` as (d, d, d, d)."""
    x0 = np.asarray(_as_coords(p), dtype=float)
    d = x0.size
    A = projector_connection(surface, x0, step, frame)
    dA = np.array([_fd4(lambda x: projector_connection(surface, x, step, frame), x0, mu, step) for mu in range(d)])
    F = np.zeros((d, d, d, d))
    for r in range(d):
        for s in range(d):
            F[r, s] = -(dA[r, s] - dA[s, r] + A[r] @ A[s] - A[s] @ A[r])
    return F


def christoffel_from_metric(metric_fn, x, step: float = 1e-4) -> np.ndarray:
    """``G[a, b, c] = Gamma^a_{bc}`` from centred differences of the metric."""
    x0 = np.asarray(x, dtype=float)
    d = x0.size
    g = np.asarray(metric_fn(x0))
    ginv = np.linalg.inv(g)
    dg = np.array([_fd4(lambda y: np.asarray(metric_fn(y)), x0, mu, step) for mu in range(d)])  # dg[c, a, b]
    lower = 0.5 * (np.einsum("bdc->dbc", dg) + np.einsum("cdb->dbc", dg) - np.einsum("dbc->dbc", dg))
    return np.einsum("ad,dbc->abc", ginv, lower)


def riemann_from_christoffel(gamma_fn, x, step: float = 1e-4) -> np.ndarray:
    """``R[b, n, r, s]`` = d_r G^b_ns - d_s G^b_nr + G^b_ar G^a_ns - G^b_as G^a_nr."""
    x0 = np.asarray(x, dtype=float)
    d = x0.size
    G = gamma_fn(x0)
    dG = np.array([_fd4(gamma_fn, x0, mu, step) for mu in range(d)])  # dG[r, b, n, s]
    R = np.einsum("rbns->bnrs", dG) - np.einsum("sbnr->bnrs", dG)
    R += np.einsum("bar,ans->bnrs", G, G) - np.einsum("bas,anr->bnrs", G, G)
    return R


def surface_metric(surface):
    return lambda x: surface.tangents(x).T @ surface.tangents(x)


def riemann_from_surface(surface, p, step: float = 1e-4) -> np.ndarray:
    gfun = surface_metric(surface)
    return riemann_from_christoffel(lambda y: christoffel_from_metric(gfun, y, step), _as_coords(p), step)


def riemann_vs_curvature(surface, p, step: float = 1e-4) -> float:
    """Max over components of ``|R^b_{n r s} + (F_rs)^b_n|``.

    R comes from the metric alone (metric -> Christoffel -> Riemann); F comes
    from the projector connection built on the embedding frames.
    """
    R = riemann_from_surface(surface, p, step)
    F = frame_curvature(surface, p, step)
    return float(np.max(np.abs(R + np.einsum("rsbn->bnrs", F))))


def bridge_samples(surface, n: int = 32) -> np.ndarray:
    """An ``n x n`` tensor grid of parameter points inside ``surface.sample_box``."""
    (a0, a1), (b0, b1) = surface.sample_box
    u = np.linspace(a0, a1, n)
    periodic = abs((b1 - b0) - 2 * math.pi) < 1e-12
    v = np.linspace(b0, b1, n, endpoint=not periodic)
    return np.stack(np.meshgrid(u, v, indexing="ij"), axis=-1).reshape(-1, 2)


def bridge_deviation(surface, n: int = 32, step: float = 1e-4) -> float:
    """Worst ``|R + F|`` over :func:`bridge_samples`."""
    return max(riemann_vs_curvature(surface, x, step) for x in bridge_samples(surface, n))
