"""Command-line front end: ``hopflink <subcommand> [options]``.

Exit codes: 0 success, 2 configuration error, 3 numerical failure,
4 I/O failure. Option values come from flags, then an optional ``--config``
file (JSON or YAML), then built-in defaults, in that order of precedence.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from . import __version__
from .berry import SURFACES, bridge_deviation
from .errors import (
    BandDegeneracy,
    ConvergenceError,
    CurvesTooClose,
    DegenerateFrame,
    DomainMismatch,
    InvalidLabel,
    IoError,
    LadderBottom,
    OpenCurve,
    PatchSingularity,
    PoleError,
    SizeError,
)
from .fluxlines import export_loops, fig1_parameters, linking_demo
from .harmonics import generate, labels, labels_upto
from .hmap import HopfS3, parse_map_spec
from .manifold import build_grid
from .serialize import dumps_csv, dumps_json
from .spectra import CSV_COLUMNS, FieldStrength, default_grid, spectrum_table
from .topo import Polyline3, chern_number, chern_simons_raw, linking_number, spin1_identity_field

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_IO = 0, 2, 3, 4

DEFAULTS = {
    "chern": {"map": "pontrjagin:n=1", "grid": "128x256", "method": "auto", "format": "json"},
    "cs": {"map": "hopf:m=1,deformed=true", "grid": "64x64x64", "format": "json"},
    "spectrum": {"m": 0, "mass": 1, "two_j_max": 2, "grid": "96", "verify": False,
                 "tol": 1e-6, "format": "json"},
    "harmonics": {"two_j": None, "two_j_max": 2, "format": "json"},
    "fluxlines": {"fig1": False, "t0": None, "delta": None, "m": 1, "samples": 512,
                  "format": "json", "tol": 1e-3},
    "linking": {"fig1": False, "t0": None, "delta": None, "m": 1, "samples": 512,
                "control": False, "format": "json"},
    "bridge": {"surface": "sphere", "grid": "32", "step": 1e-4, "tol": 1e-5, "format": "json"},
}


class ConfigError(ValueError):
    pass


class CheckFailed(ArithmeticError):
    """A ``--verify`` style tolerance check did not pass."""


def _sizes(text, n: int) -> tuple[int, ...]:
    parts = [int(p) for p in str(text).lower().replace(",", "x").split("x") if p]
    if len(parts) == 1:
        parts = parts * n
    if len(parts) != n:
        raise ConfigError(f"grid {text!r} needs {n} sizes")
    return tuple(parts)


def _floats(text) -> list[float]:
    """Comma list of reals; ``pi`` is allowed as a factor, e.g. ``0.2pi``."""
    if text is None:
        return []
    if isinstance(text, (int, float)):
        return [float(text)]
    if isinstance(text, list):
        return [v for item in text for v in _floats(item)]
    out = []
    for item in str(text).split(","):
        item = item.strip().lower()
        if item.endswith("pi"):
            coef = item[:-2].rstrip("*") or "1"
            out.append(float(coef) * math.pi)
        elif item:
            out.append(float(item))
    return out


def _load_config(path) -> dict:
    if path is None:
        return {}
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot read config {p}: {exc}") from exc
    try:
        if p.suffix.lower() in (".yaml", ".yml"):
            import yaml

            data = yaml.safe_load(text) or {}
        else:
            data = json.loads(text)
    except Exception as exc:
        raise ConfigError(f"cannot parse config {p}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("config file must hold a mapping")
    return {str(k).replace("-", "_"): v for k, v in data.items()}


def effective_config(args: argparse.Namespace) -> dict:
    cmd = args.command
    cfg = dict(DEFAULTS[cmd])
    from_file = _load_config(args.config)
    unknown = set(from_file) - set(cfg) - {"out"}
    if unknown:
        raise ConfigError(f"unknown config keys for {cmd}: {sorted(unknown)}")
    cfg.update(from_file)
    cfg.setdefault("out", None)
    for key in list(cfg):
        v = getattr(args, key, None)
        if v is not None:
            cfg[key] = v
    return cfg


def _provenance(cmd: str, cfg: dict, extra: dict | None = None) -> dict:
    meta = {"tool": "hopflink", "version": __version__, "command": cmd, "config": cfg}
    meta.update(extra or {})
    return meta


# ---------------------------------------------------------------------------
# commands; each returns (document, csv rows or None, csv columns or None)


def cmd_chern(cfg):
    shape = _sizes(cfg["grid"], 2)
    if cfg["map"] in ("spin1-identity", "spin1"):
        res = chern_number(spin1_identity_field, shape, method="plaquette")
        res.metadata["map"] = "spin1-identity"
    else:
        spec = parse_map_spec(cfg["map"])
        res = chern_number(spec, shape, method=cfg["method"])
    return {"result": res.to_dict()}, None, None


def cmd_cs(cfg):
    spec = parse_map_spec(cfg["map"])
    res = chern_simons_raw(spec, build_grid(*_sizes(cfg["grid"], 3)))
    return {"result": res.to_dict()}, None, None


def cmd_spectrum(cfg):
    fs = FieldStrength(int(cfg["m"]), cfg["mass"])
    two_j_max = int(cfg["two_j_max"])
    grid = default_grid(two_j_max, *_sizes(cfg["grid"], 1)) if cfg["verify"] else None
    table = spectrum_table(two_j_max, fs, grid)
    rows = [e.row() for e in table.entries]
    doc = {
        "entries": rows,
        "levels": [
            {
                "level_id": lv.level_id,
                "lambda": str(lv.lam),
                "energy": lv.energy,
                "multiplicity": lv.multiplicity,
                "labels": [[lab.two_j, lab.m1, lab.m2] for lab in lv.labels],
            }
            for lv in table.levels
        ],
    }
    if cfg["verify"]:
        worst = table.max_residual()
        doc["max_residual"] = worst
        if worst >= cfg["tol"]:
            raise CheckFailed(f"max residual {worst:.3g} >= {cfg['tol']}")
    return doc, rows, CSV_COLUMNS


def cmd_harmonics(cfg):
    labs = labels(int(cfg["two_j"])) if cfg["two_j"] is not None else labels_upto(int(cfg["two_j_max"]))
    hs = [generate(lab).to_dict() for lab in labs]
    rows = [
        {"two_j": h["two_j"], "m1": h["m1"], "m2": h["m2"], **mono}
        for h in hs
        for mono in h["monomials"]
    ]
    cols = ("two_j", "m1", "m2", "a", "b", "coeff_rational", "coeff_radicand")
    return {"conventions": {"prefactor": "1/pi", "variable": "cos^a(t/2) sin^b(t/2)"},
            "harmonics": hs}, rows, cols


def _loop_params(cfg) -> list[tuple[float, float]]:
    if cfg["fig1"]:
        return fig1_parameters()
    ts, ds = _floats(cfg["t0"]), _floats(cfg["delta"]) or [0.0]
    if not ts:
        raise ConfigError("give --fig1 or --t0 (with optional --delta)")
    return [(t, d) for t in ts for d in ds]


def _demo(cfg):
    spec = HopfS3(int(cfg["m"]), deformed=True)
    demo = linking_demo(_loop_params(cfg), spec, int(cfg["samples"]))
    summary = {
        "n_loops": len(demo.loops),
        "parameters": [[lp.t0, lp.delta0] for lp in demo.loops],
        "linking_matrix": demo.matrix,
        "max_abs_lk_error": demo.max_magnitude_error(),
        "orientation": "increasing s, alpha and beta both increasing",
    }
    return demo, summary


def cmd_fluxlines(cfg):
    demo, summary = _demo(cfg)
    if cfg["out"]:
        fmt = "obj" if cfg["format"] in ("obj", "obj-polyline") else "json"
        export_loops(demo.loops, cfg["out"], fmt, metadata=_provenance("fluxlines", cfg, summary))
    if len(demo.loops) > 1 and summary["max_abs_lk_error"] > cfg["tol"]:
        raise CheckFailed(f"|Lk| deviates from 1 by {summary['max_abs_lk_error']:.3g}")
    return {"result": summary}, None, None


def _circle(center, u, v, n=512):
    import numpy as np

    s = 2 * np.pi * np.arange(n) / n
    pts = np.asarray(center) + np.outer(np.cos(s), u) + np.outer(np.sin(s), v)
    return Polyline3.loop(pts)


def cmd_linking(cfg):
    doc = {}
    if cfg["fig1"] or cfg["t0"] is not None:
        _, summary = _demo(cfg)
        doc["result"] = summary
    if cfg["control"] or not doc:
        ex, ey, ez = (1, 0, 0), (0, 1, 0), (0, 0, 1)
        doc["controls"] = {
            "disjoint_circles": linking_number(_circle((0, 0, 0), ex, ey), _circle((10, 0, 0), ex, ey)),
            "hopf_link": linking_number(_circle((0, 0, 0), ex, ey), _circle((1, 0, 0), ex, ez)),
        }
    return doc, None, None


def cmd_bridge(cfg):
    if cfg["surface"] not in SURFACES:
        raise ConfigError(f"unknown surface {cfg['surface']!r}; choose from {sorted(SURFACES)}")
    n = _sizes(cfg["grid"], 1)[0]
    dev = bridge_deviation(SURFACES[cfg["surface"]], n, float(cfg["step"]))
    doc = {"result": {"surface": cfg["surface"], "samples": n * n, "max_abs_R_plus_F": dev,
                      "sign_convention": "F = -(dA + A A), so R = -F"}}
    if dev >= cfg["tol"]:
        raise CheckFailed(f"max |R + F| = {dev:.3g} >= {cfg['tol']}")
    return doc, None, None


COMMANDS = {
    "chern": cmd_chern,
    "cs": cmd_cs,
    "spectrum": cmd_spectrum,
    "harmonics": cmd_harmonics,
    "fluxlines": cmd_fluxlines,
    "linking": cmd_linking,
    "bridge": cmd_bridge,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hopflink", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"hopflink {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, formats=("json",)):
        p.add_argument("--config", help="JSON or YAML file of option defaults")
        p.add_argument("--out", help="output path (stdout when omitted)")
        p.add_argument("--format", choices=formats)

    p = sub.add_parser("chern", help="Chern number of an S2 Hamiltonian")
    p.add_argument("--map", help="pontrjagin:n=N[,warp=W] | constant | spin1-identity")
    p.add_argument("--grid", help="NTHETAxNPHI")
    p.add_argument("--method", choices=("auto", "formula", "plaquette"))
    common(p)

    p = sub.add_parser("cs", help="Chern-Simons integral of a Hopf map")
    p.add_argument("--map", help="hopf:m=M[,deformed]")
    p.add_argument("--grid", help="NTxNAxNB")
    common(p)

    p = sub.add_parser("spectrum", help="magnetic spectrum table on S3")
    p.add_argument("--m", type=int)
    p.add_argument("--mass", type=float)
    p.add_argument("--two-j-max", dest="two_j_max", type=int)
    p.add_argument("--grid", help="t-nodes used for residuals")
    p.add_argument("--verify", action="store_true", default=None)
    p.add_argument("--tol", type=float)
    common(p, ("json", "csv"))

    p = sub.add_parser("harmonics", help="exact SO(4) harmonics")
    p.add_argument("--two-j", dest="two_j", type=int, help="a single multiplet")
    p.add_argument("--two-j-max", dest="two_j_max", type=int)
    common(p, ("json", "csv"))

    for name, helptext in (("fluxlines", "trace and export flux loops"),
                           ("linking", "pairwise linking numbers")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--fig1", action="store_true", default=None,
                       help="the twelve reference loops: ten on the t = 0.3pi torus plus the t = 0.2pi and 0.7pi fibres")
        p.add_argument("--t0", help="comma list, e.g. 0.2pi,0.7pi")
        p.add_argument("--delta", help="comma list of alpha - beta offsets")
        p.add_argument("--m", type=int)
        p.add_argument("--samples", type=int)
        if name == "linking":
            p.add_argument("--control", action="store_true", default=None,
                           help="also evaluate two analytic control pairs")
            common(p)
        else:
            p.add_argument("--tol", type=float)
            common(p, ("json", "obj", "obj-polyline"))

    p = sub.add_parser("bridge", help="Riemann tensor versus projector curvature")
    p.add_argument("--surface", help=f"one of {sorted(SURFACES)}")
    p.add_argument("--grid", help="samples per axis")
    p.add_argument("--step", type=float)
    p.add_argument("--tol", type=float)
    common(p)
    return ap


def _write(text: str, out) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    try:
        Path(out).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot write {out}: {exc}") from exc


_CONFIG_ERRORS = (ConfigError, InvalidLabel, DomainMismatch, SizeError, LadderBottom, ValueError, TypeError)
_NUMERIC_ERRORS = (
    CheckFailed, ConvergenceError, BandDegeneracy, CurvesTooClose, PoleError,
    PatchSingularity, DegenerateFrame, OpenCurve, ArithmeticError, FloatingPointError,
)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    cmd = args.command
    try:
        cfg = effective_config(args)
        doc, rows, cols = COMMANDS[cmd](cfg)
        if cmd == "fluxlines" and cfg["out"]:
            # loops went to the file; the report goes to stdout
            _write(dumps_json({"metadata": _provenance(cmd, cfg), **doc}), None)
        elif cfg.get("format") == "csv" and rows is not None:
            _write(dumps_csv(rows, cols), cfg["out"])
        else:
            _write(dumps_json({"metadata": _provenance(cmd, cfg), **doc}), cfg["out"])
    except (IoError, OSError) as exc:
        print(f"hopflink {cmd}: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except _NUMERIC_ERRORS as exc:
        print(f"hopflink {cmd}: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except _CONFIG_ERRORS as exc:
        print(f"hopflink {cmd}: invalid configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
