"""Flux lines of the Hopf curvature on S3 and their stereographic images.

The dual field ``B^mu = eps^{mu nu lambda} F_{nu lambda}`` of any Hopf
variant has ``B^t = 0`` and ``B^alpha = B^beta``, so its integral curves are
the circles ``t = t0``, ``alpha - beta = delta0``. Under stereographic
projection these become mutually linked rings on nested tori.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field

import numpy as np

from .berry import curvature_density
from .errors import CurvesTooClose, DomainMismatch, IoError, PoleError
from .hmap import HopfS3, format_map_spec
from .manifold import AngleCoordS3, embed_s3, stereographic_points
from .topo import Polyline3, linking_number

_POLE_GAP = 1e-9
_TANGENCY_TOL = 1e-6


@dataclass(frozen=True)
class DualFieldSample:
    B_t: float
    B_alpha: float
    B_beta: float

    def as_array(self) -> np.ndarray:
        return np.array([self.B_t, self.B_alpha, self.B_beta])


def dual_field_components(spec: HopfS3, t, alpha, beta) -> np.ndarray:
    """``(B^t, B^alpha, B^beta)`` with ``eps^{t alpha beta} = +1``; last axis 3."""
    if not isinstance(spec, HopfS3):
        raise DomainMismatch("dual_field needs a Hopf variant")
    F = curvature_density(spec, t, alpha, beta)  # pairs (t,a), (t,b), (a,b)
    return np.stack([2 * F[..., 2], -2 * F[..., 1], 2 * F[..., 0]], axis=-1)


def dual_field(spec: HopfS3, p: AngleCoordS3) -> DualFieldSample:
    B = dual_field_components(spec, *p.as_tuple())
    return DualFieldSample(*(float(x) for x in B))


# ---------------------------------------------------------------------------
# loops


@dataclass(frozen=True, eq=False)
class FluxLoop:
    t0: float
    delta0: float
    polyline: Polyline3
    beta_offset: float = 0.0
    tangency: float | None = None
    metadata: dict = field(default_factory=dict)

    @property
    def samples(self) -> np.ndarray:
        """Distinct samples (the closing vertex dropped)."""
        return self.polyline.points[:-1]


def _chart_points(t0: float, delta0: float, n: int) -> tuple[np.ndarray, ...]:
    s = 2 * math.pi * np.arange(n) / n
    return np.full(n, float(t0)), delta0 / 2 + s, -delta0 / 2 + s


def trace_loop(
    t0: float,
    delta0: float,
    n_samples: int = 512,
    spec: HopfS3 | None = None,
    beta_offset: float = 0.0,
) -> FluxLoop:
    """Trace the flux circle ``s -> (t0, delta0/2 + s, -delta0/2 + s)`` and project it.

    ``beta_offset`` shifts every beta before projection, which moves the loop
    away from the projection pole; the shift is recorded on the result. The
    chart direction ``(0, 1, 1)`` is checked against the dual field at eight
    samples (absolute cosine similarity).
    """
    if not 0.0 < t0 < math.pi:
        raise ValueError("t0 must lie strictly between 0 and pi")
    if n_samples < 64:
        raise ValueError("n_samples must be >= 64")
    spec = spec or HopfS3(1, deformed=True)
    t, a, b = _chart_points(t0, delta0, n_samples)
    b = b + beta_offset
    gap = 1.0 - embed_s3(t, a, b)[..., 3]
    if np.min(gap) < _POLE_GAP:
        raise PoleError(
            f"loop (t0={t0}, delta0={delta0}) passes the projection pole; retry with beta_offset"
        )
    pts = stereographic_points(t, a, b)

    tangency = None
    if spec.m != 0:
        idx = np.linspace(0, n_samples, 8, endpoint=False).astype(int)
        B = dual_field_components(spec, t[idx], a[idx], b[idx])
        direction = np.array([0.0, 1.0, 1.0])
        cos = np.abs(B @ direction) / (np.linalg.norm(B, axis=-1) * np.linalg.norm(direction))
        tangency = float(cos.min())
        if tangency < 1 - _TANGENCY_TOL:
            raise ArithmeticError(f"traced direction is not tangent to B (|cos| = {tangency})")

    return FluxLoop(
        t0=float(t0),
        delta0=float(delta0),
        polyline=Polyline3.loop(pts),
        beta_offset=float(beta_offset),
        tangency=tangency,
        metadata={"map": format_map_spec(spec), "orientation": "increasing s"},
    )


def torus_radii(t0: float) -> tuple[float, float]:
    """Centre-circle radius and tube radius of the image torus of ``t = t0``."""
    c = math.cos(t0 / 2)
    return 1.0 / c, math.tan(t0 / 2)


def torus_residual(points: np.ndarray, t0: float | None = None) -> tuple[float, float, float]:
    """Fit a circular torus about the z-axis; returns ``(R, r, max residual)``.

    With ``t0`` the radii are taken from the closed form, otherwise they are
    fitted by least squares on ``(rho - R)^2 + z^2 = r^2``.
    """
    p = np.asarray(points, dtype=float)
    rho = np.hypot(p[:, 0], p[:, 1])
    z = p[:, 2]
    if t0 is not None:
        R, r = torus_radii(t0)
    else:
        # rho^2 + z^2 = 2 R rho + (r^2 - R^2): linear in (2R, r^2 - R^2)
        A = np.stack([rho, np.ones_like(rho)], axis=1)
        coef, *_ = np.linalg.lstsq(A, rho**2 + z**2, rcond=None)
        R = coef[0] / 2
        r = math.sqrt(max(coef[1] + R * R, 0.0))
    res = np.abs(np.hypot(rho - R, z) - r)
    return float(R), float(r), float(res.max())


def min_self_distance(loop: FluxLoop) -> float:
    """Smallest distance between non-adjacent samples of a loop."""
    p = loop.samples
    n = p.shape[0]
    d = np.linalg.norm(p[:, None, :] - p[None, :, :], axis=-1)
    i, j = np.indices((n, n))
    sep = np.minimum(np.abs(i - j), n - np.abs(i - j))
    return float(d[sep > 1].min())


# ---------------------------------------------------------------------------
# linking of the reference loop sets


FIG1_PANEL_A = (0.3 * math.pi, tuple(0.2 * math.pi * k for k in range(10)))
FIG1_PANEL_B = ((0.2 * math.pi, 0.7 * math.pi), 0.0)


def fig1_parameters() -> list[tuple[float, float]]:
    """The twelve ``(t0, delta0)`` pairs: ten loops on one torus plus two tori."""
    t_a, deltas = FIG1_PANEL_A
    ts_b, d_b = FIG1_PANEL_B
    return [(t_a, d) for d in deltas] + [(t, d_b) for t in ts_b]


@dataclass(frozen=True, eq=False)
class LinkingDemo:
    loops: tuple[FluxLoop, ...]
    matrix: np.ndarray

    def off_diagonal(self) -> np.ndarray:
        n = self.matrix.shape[0]
        return self.matrix[~np.eye(n, dtype=bool)]

    def max_magnitude_error(self) -> float:
        off = self.off_diagonal()
        return float(np.max(np.abs(np.abs(off) - 1.0))) if off.size else 0.0


def _same_circle(p: tuple[float, float], q: tuple[float, float]) -> bool:
    dd = (p[1] - q[1]) % (2 * math.pi)
    return abs(p[0] - q[0]) < 1e-12 and min(dd, 2 * math.pi - dd) < 1e-12


def linking_demo(
    params: list[tuple[float, float]] | None = None,
    spec: HopfS3 | None = None,
    n_samples: int = 512,
) -> LinkingDemo:
    """Trace every ``(t0, delta0)`` loop and compute all pairwise linking numbers.

    The diagonal is left at zero (self-linking is not defined for a polyline).
    """
    params = list(params if params is not None else fig1_parameters())
    for i, p in enumerate(params):
        for q in params[:i]:
            if _same_circle(p, q):
                raise CurvesTooClose(f"loops {q} and {p} coincide")
    loops = tuple(trace_loop(t0, d0, n_samples, spec) for t0, d0 in params)
    n = len(loops)
    mat = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            mat[i, j] = mat[j, i] = linking_number(loops[i].polyline, loops[j].polyline)
    return LinkingDemo(loops, mat)


# ---------------------------------------------------------------------------
# export / import


def _loop_record(loop: FluxLoop) -> dict:
    return {
        "t0": loop.t0,
        "delta0": loop.delta0,
        "beta_offset": loop.beta_offset,
        "points": loop.samples.tolist(),
    }


def export_loops(loops, path, fmt: str = "json", metadata: dict | None = None) -> None:
    """Write loops as JSON records or OBJ-style ``v``/``l`` polylines."""
    from .serialize import dumps_json

    loops = list(loops)
    if not loops:
        raise ValueError("no loops to export")
    try:
        if fmt == "json":
            doc = {"metadata": metadata or {}, "loops": [_loop_record(lp) for lp in loops]}
            text = dumps_json(doc)
        elif fmt in ("obj", "obj-polyline"):
            lines = ["# hopflink flux loops"]
            for k, v in sorted((metadata or {}).items()):
                lines.append(f"# {k}: {v}")
            base = 1
            for i, lp in enumerate(loops):
                pts = lp.samples
                lines.append(f"o loop_{i}")
                lines.append(f"# t0={lp.t0!r} delta0={lp.delta0!r} beta_offset={lp.beta_offset!r}")
                lines.extend(f"v {x!r} {y!r} {z!r}" for x, y, z in pts.tolist())
                idx = list(range(base, base + len(pts))) + [base]
                lines.append("l " + " ".join(map(str, idx)))
                base += len(pts)
            text = "\n".join(lines) + "\n"
        else:
            raise ValueError(f"unknown loop format {fmt!r}")
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise IoError(f"cannot write {os.fspath(path)}: {exc}") from exc


def _loop_from_record(t0, d0, off, pts) -> FluxLoop:
    return FluxLoop(float(t0), float(d0), Polyline3.loop(np.asarray(pts, float)), float(off))


def import_loops(path, fmt: str | None = None) -> list[FluxLoop]:
    """Read loops written by :func:`export_loops`."""
    fmt = fmt or ("obj" if str(path).endswith(".obj") else "json")
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise IoError(f"cannot read {os.fspath(path)}: {exc}") from exc
    try:
        if fmt == "json":
            doc = json.loads(text)
            return [
                _loop_from_record(r["t0"], r["delta0"], r.get("beta_offset", 0.0), r["points"])
                for r in doc["loops"]
            ]
        loops, verts, header = [], [], None
        for line in text.splitlines():
            if line.startswith("# t0="):
                header = dict(item.split("=") for item in line[2:].split())
            elif line.startswith("v "):
                verts.append([float(x) for x in line.split()[1:]])
            elif line.startswith("l "):
                idx = [int(i) - 1 for i in line.split()[1:]][:-1]
                h = header or {}
                loops.append(
                    _loop_from_record(
                        h.get("t0", "nan"), h.get("delta0", "nan"), h.get("beta_offset", 0.0),
                        [verts[i] for i in idx],
                    )
                )
                header = None
        return loops
    except (KeyError, ValueError, IndexError) as exc:
        raise IoError(f"malformed loop file {os.fspath(path)}: {exc}") from exc
