"""Unit-vector fields h: S2 -> S2 and S3 -> S2 used as Hamiltonian data.

Every map is of the form ``h = (sin T cos P, sin T sin P, cos T)`` where the
target polar angle ``T`` depends on the chart's polar coordinate only and the
target azimuth ``P`` is linear in the chart's periodic coordinates:

* ``PontrjaginS2(n)``: ``T = 2 arccot(cot^n(theta/2))``, ``P = n phi``.
* ``HopfS3(m)``: ``T = 2 arccot(cot^m(t/2))``, ``P = m (beta - alpha)``.
* ``HopfS3(m, deformed=True)``: ``T = t``, ``P = m (beta - alpha)``.
* ``ConstantNorth``: ``h = (0, 0, 1)`` on either sphere.

The Hopf azimuth runs as ``m (beta - alpha)`` so that the spinor
``(e^{i m alpha} cos(T/2), e^{i m beta} sin(T/2))`` is the +1 eigenvector
of ``h . sigma``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

import numpy as np

from .errors import DomainMismatch
from .manifold import AngleCoordS2, AngleCoordS3, SphereGrid, build_sphere_grid
from .results import InvariantResult, quantize


@dataclass(frozen=True)
class PontrjaginS2:
    """Degree-``n`` map of S2 onto itself.

    ``warp`` reparametrizes the polar angle by the monotone, endpoint-fixing
    ``theta -> theta - (warp/2) sin(2 theta)`` (requires ``|warp| < 1``).
    """

    n: int
    warp: float = 0.0
    domain = "S2"

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 0:
            raise ValueError(f"n must be a non-negative integer, got {self.n!r}")
        if not abs(self.warp) < 1.0:
            raise ValueError("warp must satisfy |warp| < 1")


@dataclass(frozen=True)
class HopfS3:
    m: int
    deformed: bool = False
    domain = "S3"

    def __post_init__(self):
        if int(self.m) != self.m or self.m < 0:
            raise ValueError(f"m must be a non-negative integer, got {self.m!r}")


@dataclass(frozen=True)
class ConstantNorth:
    domain = None


MapSpec = PontrjaginS2 | HopfS3 | ConstantNorth


# ---------------------------------------------------------------------------
# profiles


def cot_power_profile(x, p: int):
    """``2 arccot(cot^p(x/2))`` and its derivative, for x in [0, pi].

    Evaluated as ``2 atan(tan^p(x/2))`` below pi/2 and through the mirrored
    expression above it, so neither tan^p nor cot^p can overflow.
    """
    x = np.asarray(x, dtype=float)
    if p == 0:
        return np.full_like(x, math.pi / 2), np.zeros_like(x)
    lower = x <= math.pi / 2
    # u <= 1 on both branches
    u = np.where(lower, np.tan(x / 2), np.tan((math.pi - x) / 2))
    up = u**p
    core = 2.0 * np.arctan(up)
    value = np.where(lower, core, math.pi - core)
    deriv = p * u ** (p - 1) * (1.0 + u**2) / (1.0 + up**2)
    return value, deriv


def _polar_profile(spec, x):
    if isinstance(spec, PontrjaginS2):
        g = x - 0.5 * spec.warp * np.sin(2 * x)
        dg = 1.0 - spec.warp * np.cos(2 * x)
        val, dval = cot_power_profile(g, spec.n)
        return val, dval * dg
    if isinstance(spec, HopfS3):
        if spec.deformed:
            x = np.asarray(x, dtype=float)
            return x.copy(), np.ones_like(x)
        return cot_power_profile(x, spec.m)
    raise DomainMismatch(f"{spec!r} has no polar profile")


def target_polar_angle(spec: HopfS3, t):
    """The target polar angle ``theta(t)`` of a Hopf variant and ``d theta/dt``."""
    if not isinstance(spec, HopfS3):
        raise DomainMismatch("target_polar_angle expects a Hopf variant")
    return _polar_profile(spec, t)


def _coords(spec, p) -> tuple:
    if isinstance(p, AngleCoordS3):
        if isinstance(spec, PontrjaginS2):
            raise DomainMismatch("Pontrjagin maps are defined on S2, got an S3 point")
        return p.as_tuple()
    if isinstance(p, AngleCoordS2):
        if isinstance(spec, HopfS3):
            raise DomainMismatch("Hopf maps are defined on S3, got an S2 point")
        return p.as_tuple()
    raise DomainMismatch(f"unsupported point type {type(p).__name__}")


def _check_arity(spec, n: int):
    want = {"S2": 2, "S3": 3}.get(spec.domain)
    if want is not None and n != want:
        raise DomainMismatch(f"{type(spec).__name__} expects {want} coordinates, got {n}")
    if n not in (2, 3):
        raise DomainMismatch(f"expected 2 or 3 chart coordinates, got {n}")


def target_angles(spec, *coords):
    """Target polar angle and azimuth of ``h`` at the chart coordinates."""
    _check_arity(spec, len(coords))
    if isinstance(spec, ConstantNorth):
        z = np.zeros(np.broadcast(*coords).shape)
        return z, z.copy()
    T, _ = _polar_profile(spec, coords[0])
    if isinstance(spec, PontrjaginS2):
        P = spec.n * np.asarray(coords[1], float)
    else:
        P = spec.m * (np.asarray(coords[2], float) - np.asarray(coords[1], float))
    return np.broadcast_arrays(T, P)


def h_field(spec, *coords) -> np.ndarray:
    """Vectorized ``h``; the last axis holds (hx, hy, hz)."""
    T, P = target_angles(spec, *coords)
    st = np.sin(T)
    return np.stack([st * np.cos(P), st * np.sin(P), np.cos(T)], axis=-1)


def h_derivatives(spec, *coords) -> np.ndarray:
    """Closed-form partials of ``h``; shape ``(..., ncoords, 3)``."""
    _check_arity(spec, len(coords))
    shape = np.broadcast(*coords).shape
    if isinstance(spec, ConstantNorth):
        return np.zeros(shape + (len(coords), 3))
    T, dT = _polar_profile(spec, coords[0])
    T, P = target_angles(spec, *coords)
    dT = np.broadcast_to(dT, shape)
    ct, st, cp, sp = np.cos(T), np.sin(T), np.cos(P), np.sin(P)
    h_T = np.stack([ct * cp, ct * sp, -st], axis=-1)
    h_P = np.stack([-st * sp, st * cp, np.zeros_like(st)], axis=-1)
    out = np.empty(shape + (len(coords), 3))
    out[..., 0, :] = dT[..., None] * h_T
    if isinstance(spec, PontrjaginS2):
        out[..., 1, :] = spec.n * h_P
    else:
        out[..., 1, :] = -spec.m * h_P
        out[..., 2, :] = spec.m * h_P
    return out


def h_derivatives_fd(spec, coords, step: float = 1e-5) -> np.ndarray:
    """Fourth-order centred differences of ``h`` at one chart point."""
    x0 = np.asarray(coords, dtype=float)
    out = np.empty((x0.size, 3))
    for mu in range(x0.size):
        e = np.zeros_like(x0)
        e[mu] = step
        f = [h_field(spec, *(x0 + k * e)) for k in (-2, -1, 1, 2)]
        out[mu] = (f[0] - 8 * f[1] + 8 * f[2] - f[3]) / (12 * step)
    return out


def eval_map(spec, p) -> np.ndarray:
    """Evaluate ``h`` at a chart point; returns a unit 3-vector."""
    return h_field(spec, *_coords(spec, p))


def pontrjagin_density(spec, theta, phi) -> np.ndarray:
    """``h . (d_theta h x d_phi h)``, positive for orientation-preserving maps."""
    h = h_field(spec, theta, phi)
    dh = h_derivatives(spec, theta, phi)
    return np.einsum("...i,...i->...", h, np.cross(dh[..., 0, :], dh[..., 1, :]))


def _degree(spec, grid: SphereGrid) -> float:
    TH, PH = grid.mesh
    return float(np.sum(grid.coordinate_weights * pontrjagin_density(spec, TH, PH)) / (4 * math.pi))


def pontrjagin_index(spec, grid: SphereGrid | None = None) -> InvariantResult:
    """Degree of an S2 -> S2 map, ``(1/4 pi) * integral of h . (h_theta x h_phi)``."""
    if spec.domain == "S3":
        raise DomainMismatch("pontrjagin_index needs a map defined on S2")
    grid = grid or build_sphere_grid(128, 256)
    raw = _degree(spec, grid)
    coarse = build_sphere_grid(max(grid.shape[0] // 2, 4), max(grid.shape[1] // 2, 4))
    residual = abs(raw - _degree(spec, coarse))
    return InvariantResult(
        raw=raw,
        normalized=raw,
        rounded=quantize(raw),
        residual=residual,
        metadata={"orientation": "d theta ^ d phi positive", "grid": list(grid.shape)},
    )


# ---------------------------------------------------------------------------
# textual map specs, e.g. "hopf:m=2,deformed=true"

_TRUE = {"1", "true", "yes", "on", ""}
_FALSE = {"0", "false", "no", "off"}


def _parse_bool(text: str) -> bool:
    t = text.strip().lower()
    if t in _TRUE:
        return True
    if t in _FALSE:
        return False
    raise ValueError(f"not a boolean: {text!r}")


def parse_map_spec(text: str):
    m = re.fullmatch(r"\s*([a-z0-9_-]+)\s*(?::(.*))?", text.strip().lower())
    if not m:
        raise ValueError(f"cannot parse map spec {text!r}")
    kind, rest = m.group(1), m.group(2) or ""
    params = {}
    for item in filter(None, (s.strip() for s in rest.split(","))):
        key, _, value = item.partition("=")
        params[key.strip()] = value.strip()
    try:
        if kind in ("pontrjagin", "pontryagin"):
            extra = set(params) - {"n", "warp"}
            if extra:
                raise ValueError(f"unknown keys {sorted(extra)}")
            return PontrjaginS2(int(params.get("n", 1)), float(params.get("warp", 0.0)))
        if kind == "hopf":
            extra = set(params) - {"m", "deformed"}
            if extra:
                raise ValueError(f"unknown keys {sorted(extra)}")
            deformed = _parse_bool(params["deformed"]) if "deformed" in params else False
            return HopfS3(int(params.get("m", 1)), deformed)
        if kind in ("constant", "constant-north", "north"):
            if params:
                raise ValueError("constant map takes no parameters")
            return ConstantNorth()
    except KeyError as exc:  # pragma: no cover - defensive
        raise ValueError(f"missing parameter {exc} in {text!r}") from None
    raise ValueError(f"unknown map kind {kind!r}")


def format_map_spec(spec) -> str:
    if isinstance(spec, PontrjaginS2):
        return f"pontrjagin:n={spec.n}" + (f",warp={spec.warp!r}" if spec.warp else "")
    if isinstance(spec, HopfS3):
        return f"hopf:m={spec.m},deformed={'true' if spec.deformed else 'false'}"
    return "constant"
