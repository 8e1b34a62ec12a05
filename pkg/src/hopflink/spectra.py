"""Magnetic Schroedinger operator on S3 in the field of a deformed Hopf map.

With the connection ``A = (0, m cos^2(t/2), m sin^2(t/2))`` the Hamiltonian is

    H = -(2/M) { d_t^2 + cot(t) d_t
                 + [d_a - i m cos^2(t/2)]^2 / (4 cos^2(t/2))
                 + [d_b - i m sin^2(t/2)]^2 / (4 sin^2(t/2)) }

and every SO(4) harmonic is an eigenfunction with

    lambda = j(j+1) - m (m1 + m2)/2 + m^2/4,   E = 2 lambda / M.

Expanding the squares shows ``H = (2/M){(L^2 + M^2)/4 - m I_3 + m^2/4}`` as an
operator identity, which :func:`operator_identity_check` tests numerically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

import numpy as np
from scipy.linalg import LinAlgError, eigh_tridiagonal

from .errors import ConvergenceError
from .harmonics import (
    Harmonic,
    HarmonicLabel,
    apply_generator,
    casimir_apply,
    generate,
    labels_upto,
)
from .manifold import QuadratureGrid, build_grid, d_alpha, d_beta, d_t, l2_norm


@dataclass(frozen=True)
class FieldStrength:
    """Hopf winding ``m`` and particle mass ``M``."""

    m: int
    M: float = 1

    def __post_init__(self):
        if int(self.m) != self.m or self.m < 0:
            raise ValueError(f"m must be a non-negative integer, got {self.m!r}")
        object.__setattr__(self, "m", int(self.m))
        if not self.M > 0:
            raise ValueError(f"mass must be positive, got {self.M!r}")

    def energy(self, lam: Fraction):
        """``2 lambda / M``; exact when ``M`` is rational."""
        if isinstance(self.M, Rational):
            return 2 * Fraction(lam) / Fraction(self.M)
        return 2.0 * float(lam) / float(self.M)


def eigenvalue_formula(label: HarmonicLabel, fs: FieldStrength) -> Fraction:
    """``j(j+1) - (m/2)(m1 + m2) + m^2/4`` as an exact fraction."""
    j = label.j
    m = fs.m
    return j * (j + 1) - Fraction(m, 2) * (label.m1 + label.m2) + Fraction(m * m, 4)


def default_grid(two_j_max: int = 4, Nt: int = 64) -> QuadratureGrid:
    """A grid resolving all modes ``|m1|, |m2| <= two_j_max`` (t-nodes ``Nt``)."""
    n = max(8, 2 * two_j_max + 4)
    return build_grid(Nt, n, n)


def magnetic_laplacian_apply(fs: FieldStrength, psi: np.ndarray, grid: QuadratureGrid) -> np.ndarray:
    t = grid.t[:, None, None]
    c2, s2 = np.cos(t / 2) ** 2, np.sin(t / 2) ** 2
    m = fs.m
    psi = np.asarray(psi, dtype=complex)
    pt = d_t(psi, grid)
    ptt = d_t(pt, grid)

    def cov_sq(deriv, a2):
        # (d - i m a2)^2 with a2 independent of the periodic angle
        once = deriv(psi, grid) - 1j * m * a2 * psi
        return deriv(once, grid) - 1j * m * a2 * once

    bracket = (
        ptt
        + (np.cos(t) / np.sin(t)) * pt
        + cov_sq(d_alpha, c2) / (4 * c2)
        + cov_sq(d_beta, s2) / (4 * s2)
    )
    return -(2.0 / fs.M) * bracket


def residual(
    label: HarmonicLabel,
    fs: FieldStrength,
    grid: QuadratureGrid | None = None,
    energy: float | None = None,
) -> float:
    """``||H Y - E Y|| / ||Y||`` with ``E`` from :func:`eigenvalue_formula` by default."""
    grid = grid or default_grid(label.two_j)
    psi = generate(label).sample(grid)
    E = float(fs.energy(eigenvalue_formula(label, fs))) if energy is None else energy
    r = magnetic_laplacian_apply(fs, psi, grid) - E * psi
    return l2_norm(r, grid) / l2_norm(psi, grid)


# ---------------------------------------------------------------------------
# radial cross-check


def radial_potential(m1: int, m2: int, fs: FieldStrength, t: np.ndarray) -> np.ndarray:
    c2, s2 = np.cos(t / 2) ** 2, np.sin(t / 2) ** 2
    m = fs.m
    return (m1 - m * c2) ** 2 / (4 * c2) + (m2 - m * s2) ** 2 / (4 * s2)


def _radial_eigs(m1: int, m2: int, fs: FieldStrength, k: int, n: int) -> np.ndarray:
    # cell-centred finite volumes with flux weight sin t; the weight vanishes
    # on the outer faces, which enforces regularity at both poles
    h = math.pi / n
    tc = (np.arange(n) + 0.5) * h
    tf = np.arange(1, n) * h
    wc, wf = np.sin(tc), np.sin(tf)
    flux = np.concatenate([[0.0], wf, [0.0]])
    diag = (flux[:-1] + flux[1:]) / (h * h * wc) + radial_potential(m1, m2, fs, tc)
    off = -wf / (h * h * np.sqrt(wc[:-1] * wc[1:]))
    try:
        vals = eigh_tridiagonal(diag, off, eigvals_only=True, select="i", select_range=(0, k - 1))
    except (LinAlgError, ValueError) as exc:
        raise ConvergenceError(f"tridiagonal eigensolve failed: {exc}") from exc
    return vals


def radial_ode_solve(m1: int, m2: int, fs: FieldStrength, k: int = 3, n: int = 2000) -> list[float]:
    """Lowest ``k`` eigenvalues of the radial operator for fixed ``(m1, m2)``.

    The operator is ``-(1/sin t) d/dt (sin t d/dt) + V(t)`` with ``V`` the
    magnetic centrifugal potential; the finite-volume eigenvalues on ``n`` and
    ``2n`` cells are Richardson-combined (second-order scheme).
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    coarse = _radial_eigs(m1, m2, fs, k, n)
    fine = _radial_eigs(m1, m2, fs, k, 2 * n)
    out = (4.0 * fine - coarse) / 3.0
    if not np.all(np.isfinite(out)):
        raise ConvergenceError("non-finite radial eigenvalues")
    return [float(v) for v in out]


def radial_expected(m1: int, m2: int, fs: FieldStrength, k: int = 3) -> list[Fraction]:
    """Formula eigenvalues for the ``k`` smallest admissible ``j`` at fixed ``(m1, m2)``."""
    two_j = max(abs(m1 + m2), abs(m1 - m2))
    return [eigenvalue_formula(HarmonicLabel(two_j + 2 * i, m1, m2), fs) for i in range(k)]


# ---------------------------------------------------------------------------
# spectrum tables


@dataclass(frozen=True)
class SpectrumEntry:
    label: HarmonicLabel
    lam: Fraction
    energy: object
    residual: float | None = None
    level_id: int = -1

    def row(self) -> dict:
        lab = self.label
        return {
            "two_j": lab.two_j,
            "m1": lab.m1,
            "m2": lab.m2,
            "mI": str(lab.mI),
            "mK": str(lab.mK),
            "lambda": str(self.lam),
            "energy": str(self.energy) if isinstance(self.energy, Fraction) else self.energy,
            "residual": self.residual,
            "level_id": self.level_id,
        }


@dataclass(frozen=True)
class Level:
    level_id: int
    lam: Fraction
    energy: object
    labels: tuple[HarmonicLabel, ...]

    @property
    def multiplicity(self) -> int:
        return len(self.labels)


@dataclass(frozen=True)
class SpectrumTable:
    strength: FieldStrength
    entries: tuple[SpectrumEntry, ...]
    levels: tuple[Level, ...] = ()

    def multiplicities(self) -> dict[Fraction, int]:
        return {lv.lam: lv.multiplicity for lv in self.levels}

    def max_residual(self) -> float | None:
        vals = [e.residual for e in self.entries if e.residual is not None]
        return max(vals) if vals else None


CSV_COLUMNS = ("two_j", "m1", "m2", "mI", "mK", "lambda", "energy", "residual", "level_id")


def spectrum_table(
    two_j_max: int, fs: FieldStrength, grid: QuadratureGrid | None = None, verify: bool = False
) -> SpectrumTable:
    """All labels up to ``two_j_max`` grouped into exactly degenerate levels.

    Residuals are computed when ``verify`` is set or a grid is supplied.
    """
    if two_j_max < 0:
        raise ValueError("two_j_max must be >= 0")
    labs = labels_upto(two_j_max)
    lams = {lab: eigenvalue_formula(lab, fs) for lab in labs}
    distinct = sorted(set(lams.values()))
    level_of = {lam: i for i, lam in enumerate(distinct)}
    if verify and grid is None:
        grid = default_grid(two_j_max)
    entries = []
    for lab in labs:
        lam = lams[lab]
        res = residual(lab, fs, grid) if grid is not None else None
        entries.append(SpectrumEntry(lab, lam, fs.energy(lam), res, level_of[lam]))
    levels = tuple(
        Level(i, lam, fs.energy(lam), tuple(lab for lab in labs if lams[lab] == lam))
        for i, lam in enumerate(distinct)
    )
    return SpectrumTable(fs, tuple(entries), levels)


def operator_identity_check(
    fs: FieldStrength,
    grid: QuadratureGrid | None = None,
    two_j_max: int = 2,
    test_functions=None,
) -> float:
    """Worst relative gap between ``H psi`` and ``(2/M){(L^2+M^2)/4 - m I3 + m^2/4} psi``.

    The left side uses the covariant-derivative form of ``H``; the right side
    is composed from :func:`apply_generator` calls. Test functions default to
    every harmonic with ``two_j <= two_j_max``.
    """
    grid = grid or default_grid(two_j_max)
    if test_functions is None:
        test_functions = [generate(lab).sample(grid) for lab in labels_upto(two_j_max)]
    worst = 0.0
    m = fs.m
    for f in test_functions:
        f = f.sample(grid) if isinstance(f, Harmonic) else np.asarray(f, dtype=complex)
        lhs = magnetic_laplacian_apply(fs, f, grid)
        rhs = (2.0 / fs.M) * (
            0.25 * casimir_apply(f, grid) - m * apply_generator("I3", f, grid) + 0.25 * m * m * f
        )
        worst = max(worst, l2_norm(lhs - rhs, grid) / l2_norm(f, grid))
    return worst
