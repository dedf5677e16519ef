"""Command-line front end.

Exit codes: 0 success, 1 a failed check or runtime error, 2 an uncertified
result that was required to be certified (argparse also uses 2 for usage
errors).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from typing import Optional

from .intersection import DEFAULT_KMAX_CAP

log = logging.getLogger("bolza")

SYSTEM_NAMES = ("Sys", "Omega1", "Omega2", "SecondSystoles", "Gamma")


def _dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _dump_csv(header: list, rows: list) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _emit(text: str, out: Optional[str]):
    if out and out != "-":
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _model(args):
    from .model import bolza

    return bolza(args.precision)


# -- subcommands ---------------------------------------------------------------------


def cmd_spectrum(args) -> int:
    from .spectrum import IncompleteEnumerationError, length_spectrum

    try:
        table = length_spectrum(args.max_length, _model(args), jobs=args.jobs)
    except IncompleteEnumerationError as exc:
        print(f"enumeration not certified: {exc}", file=sys.stderr)
        return 2
    rows = [r.as_dict() for r in table.rows]
    if args.format == "csv":
        header = ["length", "trace_p", "trace_q", "mult_total", "mult_simple", "words"]
        _emit(_dump_csv(header, [[f"{r['length']:.9f}", *(r[h] for h in header[1:5]), " ".join(r["words"])] for r in rows]), args.out)
    else:
        _emit(_dump_json({"max_length": args.max_length, "certified": table.certified, "rows": rows}), args.out)
    return 0


def cmd_complexity(args) -> int:
    from .intersection import complexity_table

    if not 1 <= args.kmax <= DEFAULT_KMAX_CAP:
        print(f"--kmax must lie in 1..{DEFAULT_KMAX_CAP}", file=sys.stderr)
        return 2
    rows = complexity_table(args.kmax, _model(args))
    if args.format == "csv":
        _emit(_dump_csv(["k", "T_k", "certified", "witnesses"],
                        [[r.k, r.T_k, str(r.certified).lower(), " ".join(r.witnesses)] for r in rows]), args.out)
    else:
        _emit(_dump_json({"kmax": args.kmax, "rows": [r.as_dict() for r in rows]}), args.out)
    if args.certified_only and not all(r.certified for r in rows):
        print("some rows are not certified", file=sys.stderr)
        return 2
    return 0


def _system(args, model):
    from . import systems
    from .intersection import gamma_set

    if args.words:
        return systems.system_from_words("custom", args.words.split(","), model)
    getters = {
        "Sys": systems.systolic_set,
        "Omega1": systems.omega1,
        "Omega2": systems.omega2,
        "SecondSystoles": systems.second_systoles,
        "Gamma": gamma_set,
    }
    return getters[args.system](model)


def cmd_graph(args) -> int:
    from .graphs import build_arrangement

    model = _model(args)
    S = _system(args, model)
    G = build_arrangement(S, model, strict=False)
    if args.format == "dot":
        _emit(G.to_dot(), args.out)
    elif args.format == "csv":
        d = G.as_dict()
        rows = [[c["signature"] and "-".join(map(str, c["signature"])), c["count"]] for c in d["census"]]
        _emit(_dump_csv(["signature", "count"], rows), args.out)
    else:
        _emit(_dump_json(G.as_dict()), args.out)
    return 0


def cmd_render(args) -> int:
    from .render import RenderSpec, render_svg

    spec = RenderSpec(
        systems=args.systems.split(",") if args.systems else [],
        words=args.words.split(",") if args.words else [],
        depth=args.depth,
        size=args.size,
    )
    _emit(render_svg(spec, _model(args)), args.out)
    return 0


def cmd_verify(args) -> int:
    from .acceptance import AcceptanceConfig, run

    only = tuple(int(x) for x in args.only.split(",")) if args.only else ()
    cfg = AcceptanceConfig(kmax=args.kmax, precision=args.precision, seed=args.seed,
                           perturb=args.perturb_generator, only=only)
    print(f"seed {cfg.seed}, precision {cfg.precision}, kmax {cfg.kmax}")
    report = run(cfg, echo=lambda line: print(line, flush=True))
    if args.out:
        _emit(_dump_json(report.as_dict()), args.out)
    failed = [c for c in report.criteria if c.status == "fail"]
    if failed:
        print("failed criteria: " + ", ".join(str(c.number) for c in failed))
        return 1
    return 0


# -- parser --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision", choices=("double", "high"), default="double")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for enumeration")
    common.add_argument("--out", default=None, help="output path (default stdout)")
    common.add_argument("--seed", type=int, default=20240611)
    common.add_argument("--rebuild-certificates", action="store_true",
                        help="re-derive the curve-system data file before running")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="bolza", description="Closed geodesics on the Bolza surface.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("spectrum", parents=[common], help="length spectrum up to a cutoff")
    s.add_argument("--max-length", type=float, default=5.0)
    s.add_argument("--format", choices=("json", "csv"), default="json")
    s.set_defaults(func=cmd_spectrum)

    c = sub.add_parser("complexity", parents=[common], help="the table T_k")
    c.add_argument("--kmax", type=int, default=10)
    c.add_argument("--certified-only", action="store_true")
    c.add_argument("--format", choices=("json", "csv"), default="json")
    c.set_defaults(func=cmd_complexity)

    g = sub.add_parser("graph", parents=[common], help="arrangement of a curve system")
    g.add_argument("--system", choices=SYSTEM_NAMES, default="Sys")
    g.add_argument("--words", default=None, help="comma separated words instead of a named system")
    g.add_argument("--format", choices=("json", "csv", "dot"), default="json")
    g.set_defaults(func=cmd_graph)

    r = sub.add_parser("render", parents=[common], help="SVG picture")
    r.add_argument("--systems", default="Sys", help=f"comma separated, from {','.join(SYSTEM_NAMES)}")
    r.add_argument("--words", default=None)
    r.add_argument("--depth", type=int, default=0)
    r.add_argument("--size", type=int, default=800)
    r.set_defaults(func=cmd_render)

    v = sub.add_parser("verify", parents=[common], help="run the acceptance suite")
    v.add_argument("--kmax", type=int, default=11)
    v.add_argument("--only", default=None, help="comma separated criterion numbers")
    v.add_argument("--format", choices=("json",), default="json")
    v.add_argument("--perturb-generator", type=float, default=0.0, help=argparse.SUPPRESS)
    v.set_defaults(func=cmd_verify)
    return p


def main(argv: Optional[list] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    if args.jobs < 1:
        print("--jobs must be positive", file=sys.stderr)
        return 2
    try:
        if args.rebuild_certificates:
            from .systems import rebuild_certificates

            log.info("rebuilt %s", rebuild_certificates())
        return args.func(args)
    except (ValueError, RuntimeError, ArithmeticError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
