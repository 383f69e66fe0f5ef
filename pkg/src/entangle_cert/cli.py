"""``entangle-cert`` command line: generate, analyze, tables."""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .certificate import Certificate, jsonable
from .certify import CHECKS, Report, certify_qces, run_report
from .exact import ParseError, gr
from .families import ParamConstraintViolated, UnknownFamily, make_family
from .states import InvariantViolation, StateSet, dump_state_set, load_state_set

EXIT_PARSE = 3
EXIT_INVARIANT = 4
EXIT_USAGE = 5


@dataclass
class RunConfig:
    input: Path | None = None
    family: str | None = None
    params: dict = field(default_factory=dict)
    checks: list[str] = field(default_factory=list)
    format: str = "text"
    pin: int | None = None
    out: Path | None = None

    def __post_init__(self):
        if (self.input is None) == (self.family is None):
            raise ValueError("give exactly one of an input file or --family")
        if self.params.get("z") is not None:
            gr(self.params["z"])

    def load(self) -> StateSet:
        if self.family is not None:
            return make_family(self.family, self.params)
        return load_state_set(Path(self.input).read_text())


def _params(args) -> dict:
    return {k: getattr(args, k) for k in ("z", "a1", "b1") if getattr(args, k, None) is not None}


def _emit(text: str, out: Path | None):
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


# text rendering


def _fmt_matrix(m, indent: str = "    ") -> str:
    rows = [[str(x) for x in row] for row in m]
    w = max((len(x) for r in rows for x in r), default=1)
    return "\n".join(indent + "[ " + "  ".join(x.rjust(w) for x in r) + " ]" for r in rows)


def _fmt_complex(z: complex) -> str:
    if abs(z.imag) < 5e-7:
        return f"{z.real:.6f}"
    sign = "+" if z.imag >= 0 else "-"
    return f"{z.real:.6f} {sign} i {abs(z.imag):.6f}"


def render_certificate(c: Certificate) -> str:
    lines = [str(c)]
    ev = c.evidence
    if ev.get("error"):
        lines.append(f"  error: {ev['error']}")
    if c.property == "strong-nonlocality":
        for g, r in ev.get("ranks", {}).items():
            lines.append(f"  rank over {g}: {r} (bound {ev['bounds'][g]})")
        w = ev.get("witness")
        if w is not None:
            lines.append(_render_witness(w))
    elif c.property == "opm" and ev.get("witness") is not None:
        lines.append(_render_witness(ev["witness"]))
    elif c.property == "qces" and ev.get("generator"):
        lines.append(f"  generator: {ev['generator']}")
        for v, h in ev.get("back_subst", {}).items():
            lines.append(f"  {v} = {h}")
    elif c.property == "ubb":
        lines.append(f"  complement dimension: {c.summary.get('complement_dimension')}")
    elif c.property == "split":
        for row in ev.get("per_removal", []):
            lines.append(f"  remove {row['removed']}: W {row['W']}, W_perp {row['W_perp']}")
    elif c.property == "stability":
        lines.append(f"  membership: {ev.get('membership')}")
        if "x_eqs_in_ideal" in ev:
            lines.append(f"  back-substitution relations in ideal: {ev['x_eqs_in_ideal']}")
    elif c.property == "distill":
        bad = [r for r in ev.get("bimarginals", []) if not r["ok"]]
        lines.append(f"  {len(ev.get('bimarginals', []))} bimarginals, {len(bad)} below bound")
    elif c.property == "ces" and ev.get("witness") is not None:
        lines.append(f"  product vector coordinates: {jsonable(ev['witness'])}")
    return "\n".join(lines)


def _render_witness(w) -> str:
    out = [f"  OPM witness on {w.group}: mu = {w.mu:g}, nu = {w.nu:g}"]
    out.append("  E =")
    out.append(_fmt_matrix(w.E))
    m0 = w.M0_exact if w.M0_exact is not None else w.M0.round(9).real.tolist()
    m1 = w.M1_exact if w.M1_exact is not None else w.M1.round(9).real.tolist()
    out.append("  M0 =")
    out.append(_fmt_matrix(m0))
    out.append("  M1 =")
    out.append(_fmt_matrix(m1))
    for b in (0, 1):
        out.append(f"  outcome {b} eliminates: {', '.join(w.eliminated.get(b, [])) or '-'}")
    return "\n".join(out)


def render_report(rep: Report) -> str:
    head = f"set: {rep.set}"
    return head + "\n" + "\n".join(render_certificate(c) for c in rep.checks) + "\n"


def render_tables(cert: Certificate) -> str:
    idx = cert.summary.get("product_index")
    ev = cert.evidence
    if idx == 0:
        return "product index 0, no table\n"
    if idx is None:
        return f"not finitely many product states ({ev.get('reason', '')})\n"
    lines = [f"product index {idx}"]
    if "generator" in ev:
        lines.append(f"generator: {ev['generator']} = 0")
    sols = ev.get("solutions")
    if sols:
        keep = ev["keep"]
        lines.append("")
        lines.append(f"roots of the generator in {keep}")
        for k, s in enumerate(sols, 1):
            lines.append(f"  {keep}^({k})  {_fmt_complex(s.root)}")
        others = [v for v in sols[0].coordinates if v != keep]
        lines.append("")
        lines.append("back-substituted coordinates")
        lines.append("  k  " + "  |  ".join(others))
        for k, s in enumerate(sols, 1):
            lines.append(f"  {k}  " + "  |  ".join(_fmt_complex(s.coordinates[v]) for v in others))
        gram = ev.get("gram")
        if gram is not None:
            lines.append("")
            lines.append("Gram matrix of the product states")
            for row in gram:
                lines.append("  " + "  ".join(f"{z.real:10.4f}{z.imag:+10.4f}i" for z in row))
            lines.append(f"all off-diagonal entries nonzero: {ev.get('gram_all_nonzero')}")
    else:
        for st in ev.get("strata", []):
            lines.append(f"  first nonzero coordinate x{st['first_nonzero']}: {st['points']} product state(s)")
    return "\n".join(lines) + "\n"


def tables_json(cert: Certificate) -> dict:
    ev = cert.evidence
    out = {"product_index": cert.summary.get("product_index")}
    for key in ("generator", "back_subst", "strata", "gram_all_nonzero"):
        if key in ev:
            out[key] = jsonable(ev[key])
    if ev.get("solutions"):
        out["rows"] = [s.to_dict() for s in ev["solutions"]]
    if ev.get("gram") is not None:
        out["gram"] = [[[round(z.real, 6), round(z.imag, 6)] for z in row] for row in ev["gram"]]
    return out


# commands


def cmd_generate(args) -> int:
    ss = make_family(args.family, _params(args))
    _emit(dump_state_set(ss), args.out)
    return 0


def cmd_analyze(args) -> int:
    cfg = RunConfig(
        input=Path(args.input) if args.input else None,
        family=args.family,
        params=_params(args),
        checks=[c.strip() for c in args.check.split(",") if c.strip()],
        format=args.format,
        pin=args.pin,
        out=args.out,
    )
    ss = cfg.load()
    rep = run_report(ss, cfg.checks, {"pin": cfg.pin})
    if cfg.format == "json":
        _emit(json.dumps(rep.to_dict(timing=not args.no_timing), indent=2, ensure_ascii=False) + "\n", cfg.out)
    else:
        _emit(render_report(rep), cfg.out)
    return rep.exit_code()


def cmd_tables(args) -> int:
    cfg = RunConfig(
        input=Path(args.input) if args.input else None,
        family=args.family,
        params=_params(args),
        format=args.format,
        pin=args.pin,
        out=args.out,
    )
    ss = cfg.load()
    cert = certify_qces(ss, pinned=cfg.pin)
    if cfg.format == "json":
        _emit(json.dumps(tables_json(cert), indent=2) + "\n", cfg.out)
    else:
        _emit(render_tables(cert), cfg.out)
    return 0 if cert.holds else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="entangle-cert", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    def family_flags(sp, required=False):
        sp.add_argument("--family", required=required, help="basis-B, set-S, set-Sz, set-S0, ubb-U, omega, tau, kappa")
        sp.add_argument("--z", help="Gaussian rational, e.g. 1+i")
        sp.add_argument("--a1")
        sp.add_argument("--b1")
        sp.add_argument("--out", type=Path)

    g = sub.add_parser("generate", help="write a canonical state-set document")
    family_flags(g, required=True)
    g.set_defaults(func=cmd_generate)

    a = sub.add_parser("analyze", help="run certifications on a state set")
    a.add_argument("input", nargs="?")
    family_flags(a)
    a.add_argument("--check", default="orthogonality,strong-nonlocality", help=f"comma list from: {', '.join(CHECKS)}")
    a.add_argument("--format", choices=("text", "json"), default="text")
    a.add_argument("--pin", type=int, help="index pinned to 1 (stability stopper, qces)")
    a.add_argument("--no-timing", action="store_true", help="omit the ms sidecar from JSON")
    a.set_defaults(func=cmd_analyze)

    t = sub.add_parser("tables", help="product-state root and coordinate tables")
    t.add_argument("input", nargs="?")
    family_flags(t)
    t.add_argument("--format", choices=("text", "json"), default="text")
    t.add_argument("--pin", type=int)
    t.set_defaults(func=cmd_tables)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"entangle-cert: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (InvariantViolation, ParamConstraintViolated) as exc:
        print(f"entangle-cert: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except (UnknownFamily, ValueError, OSError) as exc:
        print(f"entangle-cert: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
