"""Command line: radii, coefficient tables, verification suites and plot grids.

Exit codes: 0 success, 1 verification failure, 2 bad input, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from . import radius as rad
from .errors import AmbiguousCase, FPsiError, HypothesisUnverified, InputError, NumericalFailure
from .extremal import extremal_function
from .functionals import fekete_szego_bound, hankel2_bound, initial_bounds, zalcman_bound
from .oracle import EDGE_MARGIN, f_over_z
from .psi import PsiSpec, from_json, make_psi
from .suites import NU_GRID, SUITES, run_suite

EXIT_OK, EXIT_VERIFY, EXIT_INPUT, EXIT_NUMERIC = 0, 1, 2, 3

FAMILY_PARAMS = {
    "identity": (),
    "booth": ("beta",),
    "cissoid": ("beta",),
    "s_gamma": ("gamma", "eta"),
    "janowski": ("D", "E"),
    "concave": ("beta",),
}

DEFAULTS = {
    "psi": "identity",
    "N": 1,
    "m": "inf",
    "alpha": 2,
    "order": 8,
    "format": "csv",
    "nu": list(NU_GRID),
    "resolution": 64,
    "seed": 0,
}


def fmt(v):
    """Fixed 12-significant-digit rendering for table cells."""
    if isinstance(v, bool) or isinstance(v, np.bool_):
        return "true" if v else "false"
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.12g}"
    return str(v)


def _json_value(v):
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        f = float(v)
        return float(f"{f:.12g}") if math.isfinite(f) else str(f)
    return v


def render(rows: list, columns: list, form: str) -> str:
    if form == "json":
        return json.dumps([{c: _json_value(r.get(c)) for c in columns} for r in rows], indent=2) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([fmt(r.get(c, "")) for c in columns])
    return buf.getvalue()


def number(text: str):
    """Float, or an exact ``Fraction`` when written as ``p/q``."""
    if "/" in text:
        return Fraction(text)
    return float(text)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fpsi", description="Numerics for the class F(psi).")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", help="JSON file of option values; flags override it")
        sp.add_argument("--psi", help="psi family, or a JSON object {family, params}")
        for name in ("beta", "gamma", "eta", "D", "E"):
            sp.add_argument(f"--{name}", type=number)
        sp.add_argument("--output", help="write here instead of standard output")
        sp.add_argument("--format", choices=("csv", "json"))
        sp.add_argument("--seed", type=int)

    sp = sub.add_parser("radius", help="solve a registered radius equation")
    common(sp)
    sp.add_argument("--equation", choices=rad.EQUATIONS)
    sp.add_argument("--alpha", type=int)
    sp.add_argument("--N", type=int)
    sp.add_argument("--m", help="positive integer or 'inf'")
    sp.add_argument("--M", type=float)

    sp = sub.add_parser("extremal", help="Taylor coefficients of the extremal function")
    common(sp)
    sp.add_argument("--order", type=int)

    sp = sub.add_parser("bounds", help="coefficient functional bounds")
    common(sp)
    sp.add_argument("--nu", type=float, nargs="+")

    sp = sub.add_parser("verify", help="run a verification suite")
    common(sp)
    sp.add_argument("--suite", choices=SUITES)
    sp.add_argument("--samples", type=int)

    sp = sub.add_parser("grid", help="Re and Im of f(z)/z on a polar grid")
    common(sp)
    sp.add_argument("--target", choices=("booth_fhat", "kappa", "extremal"))
    sp.add_argument("--resolution", type=int)
    return p


def merge_config(args: argparse.Namespace) -> dict:
    cfg = dict(DEFAULTS)
    if args.config:
        with open(args.config) as fh:
            cfg.update(json.load(fh))
    for k, v in vars(args).items():
        if v is not None and k != "config":
            cfg[k] = v
    return cfg


def resolve_psi(cfg: dict) -> PsiSpec:
    psi = cfg.get("psi", "identity")
    if isinstance(psi, dict):
        return from_json(psi)
    if isinstance(psi, str) and psi.lstrip().startswith("{"):
        return from_json(json.loads(psi))
    if psi not in FAMILY_PARAMS:
        raise InputError(f"unknown psi family {psi!r}")
    params = {}
    for name in FAMILY_PARAMS[psi]:
        if cfg.get(name) is None:
            raise InputError(f"psi {psi} needs --{name}")
        params[name] = cfg[name]
    return make_psi(psi, **params)


def _m(cfg):
    m = cfg.get("m", "inf")
    if m in ("inf", "infinity", None) or (isinstance(m, float) and math.isinf(m)):
        return rad.M_INF
    try:
        return int(m)
    except (TypeError, ValueError):
        raise InputError(f"m must be a positive integer or 'inf', got {m!r}")


def _need(cfg, *names):
    for n in names:
        if cfg.get(n) is None:
            raise InputError(f"missing required parameter {n}")


def cmd_radius(cfg: dict):
    _need(cfg, "equation")
    eq = cfg["equation"]
    if eq not in rad.EQUATIONS:
        raise InputError(f"unknown equation {eq!r}")
    N, m, alpha = int(cfg["N"]), _m(cfg), int(cfg["alpha"])
    extra = {}
    if eq == "bohr":
        res = rad.bohr_radius(resolve_psi(cfg), certify=True)
        label = f"psi={res.params['spec']}"
    elif eq == "bohr-rogosinski":
        res = rad.bohr_rogosinski_radius(resolve_psi(cfg), m=m, N=N, certify=True)
        label = f"psi={res.params['spec']};m={fmt(m)};N={N}"
    elif eq == "booth-br":
        _need(cfg, "beta")
        res = rad.booth_BR_radius(cfg["beta"], m=m, N=N)
        label = f"beta={fmt(cfg['beta'])};m={fmt(m)};N={N}"
    elif eq == "landau":
        _need(cfg, "M")
        out = rad.landau_radius(alpha, cfg["M"])
        res = out.certificate
        extra["R1"] = out.R1
        label = f"alpha={alpha};M={fmt(cfg['M'])}"
    else:
        params = {}
        if eq == "poly-generic":
            params["spec"] = resolve_psi(cfg)
        elif eq == "poly-janowski":
            _need(cfg, "D", "E")
            params.update(D=cfg["D"], E=cfg["E"])
        elif eq == "poly-concave":
            _need(cfg, "beta")
            params["beta"] = cfg["beta"]
        if eq in ("poly-convex", "poly-starlike") and rad._is_inf(m):
            raise InputError(f"{eq} needs a finite --m")
        res = rad.polyanalytic_radius(eq, alpha, N=N, m=m, certify=True, **params)
        shown = {k: (v.label if isinstance(v, PsiSpec) else v) for k, v in params.items()}
        label = ";".join([f"alpha={alpha}", f"N={N}", f"m={fmt(m)}"] + [f"{k}={fmt(v)}" for k, v in shown.items()])
    row = {
        "equation": eq,
        "params": label,
        "radius": res.radius,
        "clamped_at_third": res.clamped_at_third,
        "residual": res.residual,
        "bracket_lo": res.bracket[0],
        "bracket_hi": res.bracket[1],
        **extra,
    }
    cols = ["equation", "params", "radius", "clamped_at_third", "residual", "bracket_lo", "bracket_hi"] + list(extra)
    return EXIT_OK, render([row], cols, cfg["format"])


def cmd_extremal(cfg: dict):
    spec = resolve_psi(cfg)
    f = extremal_function(spec, int(cfg["order"]))
    rows = [{"n": n, "a_n": f.coeff(n)} for n in range(1, f.series.order + 1)]
    if not f.series.exact:
        rows = [{"n": r["n"], "a_n": complex(r["a_n"]).real} for r in rows]
    return EXIT_OK, render(rows, ["n", "a_n"], cfg["format"])


def cmd_bounds(cfg: dict):
    spec = resolve_psi(cfg)
    b2, b3, b4 = initial_bounds(spec)
    rows = [
        {"functional": "a2", "nu": "", "bound": float(b2.value), "branch": b2.branch, "witness": b2.witness},
        {"functional": "a3", "nu": "", "bound": float(b3.value), "branch": b3.branch, "witness": b3.witness},
        {"functional": "a4", "nu": "", "bound": float(b4.value), "branch": b4.branch, "witness": b4.witness},
    ]
    for nu in cfg["nu"]:
        b = fekete_szego_bound(spec, float(nu))
        rows.append({"functional": "fekete", "nu": float(nu), "bound": float(b.value), "branch": b.branch, "witness": b.witness})
    for b in (zalcman_bound(spec), hankel2_bound(spec)):
        rows.append({"functional": b.kind, "nu": "", "bound": float(b.value), "branch": b.branch, "witness": b.witness})
    return EXIT_OK, render(rows, ["functional", "nu", "bound", "branch", "witness"], cfg["format"])


def cmd_verify(cfg: dict):
    _need(cfg, "suite")
    spec = resolve_psi(cfg)
    res = run_suite(cfg["suite"], spec, cfg.get("samples"), int(cfg["seed"]))
    lines = [json.dumps(_jsonable(r), sort_keys=True) for r in res.records]
    lines.append(json.dumps({"suite": res.suite, "verdict": "summary", "spec": spec.label, "checked": res.checked,
                             "failures": res.failures, "ok": res.ok}, sort_keys=True))
    return (EXIT_OK if res.ok else EXIT_VERIFY), "\n".join(lines) + "\n"


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return _json_value(obj)


def cmd_grid(cfg: dict):
    _need(cfg, "target")
    n = int(cfg["resolution"])
    if n < 1:
        raise InputError("resolution must be positive")
    target = cfg["target"]
    r = (1 - EDGE_MARGIN) * np.arange(n) / n
    theta = 2 * math.pi * np.arange(n) / n
    z = (r[:, None] * np.exp(1j * theta[None, :])).ravel()
    kw = {}
    if target == "booth_fhat":
        _need(cfg, "beta")
        kw["beta"] = float(cfg["beta"])
    elif target == "kappa":
        _need(cfg, "eta")
        kw["eta"] = float(cfg["eta"])
    elif target == "extremal":
        kw["spec"] = resolve_psi(cfg)
    else:
        raise InputError(f"unknown target {target!r}")
    q = f_over_z(target, z, **kw)
    rows = [{"x": zz.real, "y": zz.imag, "re": v.real, "im": v.imag} for zz, v in zip(z, q)]
    return EXIT_OK, render(rows, ["x", "y", "re", "im"], cfg["format"])


COMMANDS = {"radius": cmd_radius, "extremal": cmd_extremal, "bounds": cmd_bounds, "verify": cmd_verify, "grid": cmd_grid}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = merge_config(args)
        code, text = COMMANDS[args.command](cfg)
    except (InputError, HypothesisUnverified, OSError, json.JSONDecodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except (NumericalFailure, AmbiguousCase) as e:
        print(f"numerical failure: {e}", file=sys.stderr)
        return EXIT_NUMERIC
    except FPsiError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    if cfg.get("output"):
        with open(cfg["output"], "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
