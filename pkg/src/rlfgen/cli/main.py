"""Command-line driver.

Exit codes: 0 success or Found, 1 NoneForTemplate or false, 2 Unknown, 3 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from .. import logic
from ..dynamics import FieldError, Template, lie_derivative, pointwise_rank
from ..ideals import ResourceLimitError, chain_bound, chain_report
from ..realqe.api import BACKENDS
from ..rlfg import (MODES, Found, NoneForTemplate, RlfCertificate, SearchConfig, check_certificate,
                    outcome_json, run)
from .parser import ParseError, parse_grid, parse_point, parse_poly, parse_rational
from .system import SystemDefinitionError, load_system

EXIT_OK, EXIT_NONE, EXIT_UNKNOWN, EXIT_USAGE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def _emit(args, text: str, doc: dict):
    if args.json:
        print(json.dumps(doc, indent=2, ensure_ascii=False, default=str))
    else:
        print(text)


def _poly(args, system, required=True):
    if args.poly is None:
        if system.template is not None and not required:
            return system.template.body
        raise UsageError("--poly is required")
    return parse_poly(args.poly, system.ring)


def _instantiated(system, p):
    extra = [v for v in p.support() if v not in system.vars]
    if extra:
        raise UsageError(f"polynomial must be over the state variables; found {extra}")
    return p.embed(system.vars)


# --------------------------------------------------------------------------
# subcommands

def cmd_lie(args, system) -> int:
    p = _poly(args, system)
    if args.order < 0:
        raise UsageError("--order must be >= 0")
    orders = range(args.order + 1) if args.all else [args.order]
    lies = {k: lie_derivative(p, system.field, k) for k in orders}
    text = "\n".join(f"L^{k}: {q}" if args.all else str(q) for k, q in lies.items())
    _emit(args, text, {"lie": {str(k): str(q) for k, q in lies.items()}})
    return EXIT_OK


def cmd_rank(args, system) -> int:
    p = _instantiated(system, _poly(args, system))
    pt = parse_point(args.at)
    if len(pt) != len(system.vars):
        raise UsageError(f"--at needs {len(system.vars)} coordinates")
    bound = args.bound if args.bound is not None else chain_bound(p, system.field)
    rank = pointwise_rank(p, system.field, pt, bound)
    _emit(args, str(rank), {"rank": None if rank.is_infinite else rank.value, "bound": bound})
    return EXIT_OK


def cmd_nbound(args, system) -> int:
    p = _poly(args, system, required=False)
    if system.template is not None and args.poly is None:
        p = system.template
    rep = chain_report(p, system.field, max_chain=args.max_chain)
    _emit(args, str(rep.bound), rep.as_dict())
    return EXIT_OK


_BUILDERS = {
    "phi": lambda p, f, n: logic.build_phi(p, f, n),
    "phi1": lambda p, f, n: logic.build_phi1(p, f),
    "phi2": lambda p, f, n: logic.build_phi2(p, f),
    "phi3": lambda p, f, n: logic.build_phi3(p, f, n),
    "phi12": lambda p, f, n: logic.build_phi12(p, f),
    "psi": lambda p, f, n: logic.build_psi(p, f, n),
    "theta": lambda p, f, n: logic.build_theta(p, f, n),
    "theta_bar": lambda p, f, n: logic.build_theta_bar(p, f, n),
    "phi_bar": lambda p, f, n: logic.build_phi_bar(p, f, n),
    "phi_tilde": lambda p, f, n: logic.build_phi_tilde(p, f, n),
}


def _template(args, system) -> Template:
    if args.poly is not None:
        return Template(system.params, system.vars, parse_poly(args.poly, system.ring))
    if system.template is None:
        raise UsageError("no template: pass --poly or add 'template' to the system file")
    return system.template


def cmd_phi(args, system) -> int:
    t = _template(args, system)
    n = args.i
    if n is None:
        n = chain_bound(t, system.field) if args.which in ("phi", "phi3") else 1
    fm = _BUILDERS[args.which](t, system.field, n)
    if args.smt:
        text = logic.to_smtlib(fm)
    else:
        text = str(fm)
    _emit(args, text, {"formula": args.which, "i": n, "text": text})
    return EXIT_OK


def _search_config(args, system) -> SearchConfig:
    cfg = dict(system.config)
    mode = args.mode or cfg.get("mode", "parametric")
    grid = None
    if args.grid or "grid" in cfg:
        grid = {}
        for name, vals in (cfg.get("grid") or {}).items():
            if isinstance(vals, str):
                grid[name] = parse_grid(f"{name}:{vals}")[1]
            else:
                grid[name] = tuple(parse_rational(str(v)) for v in vals)
        for spec in args.grid or []:
            name, vals = parse_grid(spec)
            grid[name] = vals
    radii = cfg.get("radii", cfg.get("radius"))
    if args.radius is not None:
        radii = args.radius
    if radii is None:
        radii = (Fraction(1), Fraction(1, 2), Fraction(1, 4))
    elif isinstance(radii, str):
        radii = parse_point(radii)
    elif isinstance(radii, (int, float)):
        radii = (parse_rational(str(radii)),)
    else:
        radii = tuple(parse_rational(str(v)) for v in radii)
    return SearchConfig(
        mode=mode,
        backend=args.backend or cfg.get("backend", "auto"),
        grid=grid,
        radii=tuple(radii),
        max_order=args.max_order if args.max_order is not None else cfg.get("max_order"),
        seed=args.seed if args.seed is not None else cfg.get("seed", 0),
        budget_ms=args.budget_ms if args.budget_ms is not None else cfg.get("budget_ms", 60_000),
    )


def _outcome_text(out) -> str:
    if isinstance(out, Found):
        c = out.certificate
        w = ", ".join(f"{k}={v}" for k, v in c.params.items())
        return (f"Found at iteration {c.iteration}: {w}{', ' if w else ''}r={c.radius}\n"
                f"RLF: {c.polynomial}")
    if isinstance(out, NoneForTemplate):
        cap = " (order cap)" if out.capped else ""
        return f"NoneForTemplate: exit {out.exit} at iteration {out.iteration}{cap}"
    return f"Unknown: {out.reason}"


def cmd_find(args, system) -> int:
    t = _template(args, system)
    cfg = _search_config(args, system)
    out = run(system.field, t, cfg)
    doc = outcome_json(out)
    if isinstance(out, Found) and args.out:
        Path(args.out).write_text(out.certificate.dumps() + "\n")
    _emit(args, _outcome_text(out), doc)
    if isinstance(out, Found):
        return EXIT_OK
    return EXIT_NONE if isinstance(out, NoneForTemplate) else EXIT_UNKNOWN


def cmd_check(args, system) -> int:
    try:
        cert = RlfCertificate.from_json(json.loads(Path(args.cert).read_text()))
    except (KeyError, TypeError, json.JSONDecodeError) as e:
        raise UsageError(f"malformed certificate: {e}") from None
    cfg = SearchConfig(backend=args.backend or "auto", seed=args.seed or 0,
                       budget_ms=args.budget_ms if args.budget_ms is not None else 60_000)
    chk = check_certificate(cert, system.field, cfg)
    text = "verified" if chk.ok else f"rejected: {chk.reason}"
    _emit(args, text, {"ok": chk.ok, "reason": chk.reason, "conditions": chk.conditions})
    if chk.ok:
        return EXIT_OK
    unknown = any(v.get("verdict") is None for v in chk.conditions.values() if isinstance(v, dict))
    return EXIT_UNKNOWN if unknown else EXIT_NONE


def cmd_simulate(args, system) -> int:
    from ..simcheck import simulate

    try:
        x0 = [float(v) for v in args.x0.split(",")]
    except ValueError:
        raise UsageError(f"--x0 must be comma-separated numbers, got {args.x0!r}") from None
    if len(x0) != len(system.vars):
        raise UsageError(f"--x0 needs {len(system.vars)} coordinates")
    try:
        tr = simulate(system.field, x0, args.h, args.T)
    except ValueError as e:
        raise UsageError(str(e)) from None
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            tr.to_csv(fh)
    final = [float(v) for v in tr.final]
    text = (f"t={tr.times[-1]:.6g} x=({', '.join(f'{v:.6g}' for v in final)})"
            f"{' diverged' if tr.diverged else ''}")
    _emit(args, text, {"t": float(tr.times[-1]), "final": final, "steps": len(tr) - 1,
                       "diverged": tr.diverged})
    return EXIT_OK


# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--system", required=True, help="system definition JSON file")
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--backend", choices=BACKENDS)
    common.add_argument("--seed", type=int)
    common.add_argument("--budget-ms", type=int, dest="budget_ms")

    ap = _Parser(prog="rlfgen", description="Relaxed Lyapunov function discovery.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("lie", parents=[common], help="Lie derivatives")
    s.add_argument("--poly")
    s.add_argument("--order", type=int, default=1)
    s.add_argument("--all", action="store_true", help="print orders 0..ORDER")
    s.set_defaults(fn=cmd_lie)

    s = sub.add_parser("rank", parents=[common], help="pointwise rank")
    s.add_argument("--poly")
    s.add_argument("--at", required=True, help='point, e.g. "2,1"')
    s.add_argument("--bound", type=int, help="rank cutoff (default: the chain bound)")
    s.set_defaults(fn=cmd_rank)

    s = sub.add_parser("nbound", parents=[common], help="ideal chain bound")
    s.add_argument("--poly")
    s.add_argument("--max-chain", type=int, default=16, dest="max_chain")
    s.set_defaults(fn=cmd_nbound)

    s = sub.add_parser("phi", parents=[common], help="print a constraint formula")
    s.add_argument("--poly")
    s.add_argument("--which", choices=sorted(_BUILDERS), default="phi")
    s.add_argument("-i", type=int, help="order (default: chain bound for phi/phi3, else 1)")
    s.add_argument("--smt", action="store_true", help="emit SMT-LIB2")
    s.set_defaults(fn=cmd_phi)

    s = sub.add_parser("find", parents=[common], help="search for an RLF")
    s.add_argument("--poly", help="template (default: the system file's)")
    s.add_argument("--mode", choices=MODES)
    s.add_argument("--grid", action="append", help='e.g. "a:-2..2:1/2"; repeatable')
    s.add_argument("--radius", type=parse_point, help='radius candidates, e.g. "1,1/2"')
    s.add_argument("--max-order", type=int, dest="max_order")
    s.add_argument("--out", help="write the certificate JSON here")
    s.set_defaults(fn=cmd_find)

    s = sub.add_parser("check", parents=[common], help="verify a certificate")
    s.add_argument("--cert", required=True)
    s.set_defaults(fn=cmd_check)

    s = sub.add_parser("simulate", parents=[common], help="RK4 trajectory")
    s.add_argument("--x0", required=True)
    s.add_argument("--h", type=float, default=1e-3)
    s.add_argument("--T", type=float, default=10.0)
    s.add_argument("--csv", help="write the trajectory here")
    s.set_defaults(fn=cmd_simulate)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except ParseError as e:
        print(f"rlfgen: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    try:
        system = load_system(args.system)
        return args.fn(args, system)
    except (UsageError, ParseError, SystemDefinitionError, FieldError, OSError) as e:
        print(f"rlfgen: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceLimitError as e:
        print(f"rlfgen: resource limit: {e}", file=sys.stderr)
        return EXIT_UNKNOWN
    except ValueError as e:
        print(f"rlfgen: error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
