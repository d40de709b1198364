"""Command-line interface.

Subcommands: measure, table, scan, fuzz, roof, repro. Global options
--seed / --json / --output are accepted by every subcommand; QCORR_SEED
provides the default seed. Exit codes: 0 success, 1 usage or validation
error (single-line diagnostic on stderr), 2 counterexample reproduction
mismatch.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Sequence

from . import cluster, locc, measures, roof
from .errors import QcorrError, ReproductionError
from .measures import _sig12
from .qstate import load_state, mixture


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _common() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="RNG seed (default: $QCORR_SEED or 0)")
    common.add_argument("--json", action="store_true", help="emit JSON instead of text")
    common.add_argument("--output", metavar="PATH", default=None, help="write output to a file")
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qcorr", description="Multipartite correlation measures for few-qubit states")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    common = _common()

    p = sub.add_parser("measure", parents=[common], help="correlation report for a state")
    p.add_argument("--state", metavar="FILE", help="state file: '<bitstring> <re> <im>' lines")
    p.add_argument("--family", choices=sorted(cluster._FAMILY_DEFS), help="family tag")
    p.add_argument("--coeffs", help="comma-separated complex coefficients, e.g. 2,2,0.2,3")
    p.add_argument("--n", type=int, default=4, help="register size for the ghz family")

    p = sub.add_parser("table", parents=[common], help="closed forms vs numeric pipeline")
    p.add_argument("--family", required=True, choices=("f1", "f2", "f3"))
    p.add_argument("--coeffs", required=True)

    p = sub.add_parser("scan", parents=[common], help="grid scan over two raw coefficients (CSV)")
    p.add_argument("--family", required=True, choices=("f1", "f2"))
    p.add_argument("--coeffs", required=True, help="fixed raw coefficients a,b,c,d")
    p.add_argument("--vary", required=True, help="two coefficient names, e.g. a,d")
    p.add_argument("--range", dest="range_", required=True, help="lo,hi for both varied coefficients")
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--numeric", action="store_true", help="use the numeric pipeline instead of closed forms")

    p = sub.add_parser("fuzz", parents=[common], help="randomized monotonicity campaign")
    p.add_argument("--measure", required=True, help="ems, m_A..m_D, tau4:f2, tau3:f2:BCD, ...")
    p.add_argument("--generator", required=True, choices=locc.FUZZ_GENERATORS)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--bounds", default=None, help="alpha/beta sampling bounds lo,hi")
    p.add_argument("--unitaries", action="store_true", help="sample Haar-random POVM unitaries")

    p = sub.add_parser("roof", parents=[common], help="convex-roof minimization of a rank-2 mixture")
    p.add_argument("--psi1", required=True, metavar="FILE")
    p.add_argument("--psi2", required=True, metavar="FILE")
    p.add_argument("--p", type=float, required=True, help="weight of psi1 in the mixture")
    p.add_argument("--measure", required=True, choices=sorted(roof.ROOF_MEASURES))
    p.add_argument("--m-values", default="2,3,4", help="decomposition sizes to search")
    p.add_argument("--restarts", type=int, default=8, help="search restarts per size")

    sub.add_parser("repro", parents=[common], help="recompute the published counterexample")
    return parser


def _parse_coeffs(text: str) -> tuple[complex, ...]:
    try:
        return tuple(complex(part.strip().replace(" ", "")) for part in text.split(","))
    except ValueError:
        raise QcorrError(f"cannot parse coefficients {text!r}") from None


def _resolve_seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("QCORR_SEED")
    return int(env) if env else 0


def _family_from_args(args) -> cluster.ClusterFamily:
    if not args.coeffs:
        raise QcorrError("--family requires --coeffs")
    return cluster.ClusterFamily(args.family, _parse_coeffs(args.coeffs), n=getattr(args, "n", 4))


def _report_text(report: measures.CorrelationReport) -> str:
    lines = []
    for q, v in report.tau_k.items():
        lines.append(f"tau_{q} = {_sig12(v):.12g}")
    for pair, v in report.c2_pairs.items():
        lines.append(f"C2_{pair} = {_sig12(v):.12g}")
    for q, v in report.m_k.items():
        lines.append(f"M_{q} = {_sig12(v):.12g}")
    lines.append(f"E_ms = {_sig12(report.e_ms):.12g}")
    if report.t4 is not None:
        for t, v in report.t3.items():
            lines.append(f"t3_{t} = {_sig12(v):.12g}")
        lines.append(f"t4 = {_sig12(report.t4):.12g}")
        lines.append(f"qcr_residual = {_sig12(report.qcr_residual):.12g}")
    return "\n".join(lines) + "\n"


def _cmd_measure(args) -> str:
    if bool(args.state) == bool(args.family):
        raise QcorrError("give exactly one of --state or --family")
    if args.state:
        state, _ = load_state(args.state)
        known = None
    else:
        family = _family_from_args(args)
        state = cluster.family_state(family)
        known = cluster.FAMILY_KNOWN_T3.get(family.tag)
    report = measures.correlation_report(state, known)
    return report.to_json(indent=2) + "\n" if args.json else _report_text(report)


def _cmd_table(args) -> str:
    family = _family_from_args(args)
    record = cluster.closed_form_measures(family)
    report = measures.correlation_report(cluster.family_state(family), cluster.FAMILY_KNOWN_T3[family.tag])
    rows = [("tau4", record.tau4, report.t4)]
    rows += [(f"tau3_{t}", record.tau3[t], report.t3[t]) for t in measures.QCR_TRIPLES]
    rows += [(f"tau2_{p}", record.tau2[p], report.c2_pairs[p]) for p in cluster._PAIRS]
    rows.append(("e_ms", record.e_ms, report.e_ms))
    discrepancy = max(abs(c - n) for _, c, n in rows)
    if args.json:
        payload = {
            "family": family.tag,
            "entries": {name: {"closed": _sig12(c), "numeric": _sig12(n)} for name, c, n in rows},
            "max_discrepancy": _sig12(discrepancy),
        }
        return json.dumps(payload, indent=2) + "\n"
    width = max(len(name) for name, _, _ in rows)
    lines = [f"{'entry':<{width}}  {'closed form':>18}  {'numeric':>18}"]
    for name, c, n in rows:
        lines.append(f"{name:<{width}}  {_sig12(c):>18.12g}  {_sig12(n):>18.12g}")
    lines.append(f"max discrepancy = {discrepancy:.3e}")
    return "\n".join(lines) + "\n"


def _cmd_scan(args) -> str:
    family = _family_from_args(args)
    names = tuple(v.strip() for v in args.vary.split(","))
    try:
        lo, hi = (float(x) for x in args.range_.split(","))
    except ValueError:
        raise QcorrError(f"cannot parse --range {args.range_!r}") from None
    rows = cluster.scan_grid(family, names, lo, hi, args.steps, numeric=args.numeric)
    return cluster.scan_to_csv(rows)


def _cmd_fuzz(args) -> str:
    bounds = (1e-3, 1.0 - 1e-3)
    if args.bounds:
        try:
            lo, hi = (float(x) for x in args.bounds.split(","))
        except ValueError:
            raise QcorrError(f"cannot parse --bounds {args.bounds!r}") from None
        bounds = (lo, hi)
    config = locc.FuzzConfig(
        measure=args.measure,
        generator=args.generator,
        trials=args.trials,
        seed=_resolve_seed(args),
        bounds=bounds,
        unitaries=args.unitaries,
    )
    report = locc.fuzz_campaign(config)
    text = report.summary() + "\n"
    if args.json:
        text += report.to_json(indent=2) + "\n"
    return text


def _cmd_roof(args) -> str:
    psi1, _ = load_state(args.psi1)
    psi2, _ = load_state(args.psi2)
    if not 0.0 <= args.p <= 1.0:
        raise QcorrError("--p must lie in [0, 1]")
    dm = mixture([psi1, psi2], [args.p, 1.0 - args.p])
    try:
        m_values = tuple(int(x) for x in args.m_values.split(","))
    except ValueError:
        raise QcorrError(f"cannot parse --m-values {args.m_values!r}") from None
    config = roof.RoofConfig(m_values=m_values, restarts=args.restarts, seed=_resolve_seed(args))
    result = roof.roof_minimize(dm, args.measure, config)
    payload = {
        "measure": args.measure,
        "value": _sig12(result.value),
        "spread": _sig12(result.spread),
        "restarts_used": result.restarts_used,
        "argmin": {
            "m": result.argmin.m,
            "weights": [_sig12(w) for w in result.argmin.weights],
            "vectors": [
                None if v is None else [[_sig12(z.real), _sig12(z.imag)] for z in v.amplitudes]
                for v in result.argmin.vectors
            ],
        },
    }
    return json.dumps(payload, indent=2) + "\n"


def _cmd_repro(args) -> str:
    record = locc.reproduce_counterexample()
    if args.json:
        return record.to_json(indent=2) + "\n"
    lines = [
        f"M_A          = {record.values['m_A']:.4f}  (published {record.reference['m_A']})",
        f"M_C          = {record.values['m_C']:.4f}  (published {record.reference['m_C']})",
        f"delta M_C    = {record.values['delta_m_C']:.4f}  (published {record.reference['delta_m_C']})",
        f"delta tau3   = {record.values['delta_tau3_BCD']:.4f}  (published {record.reference['delta_tau3_BCD']})",
        f"delta tau4   = {record.values['delta_tau4']:.5f}  (published {record.reference['delta_tau4']})",
        f"max error    = {record.max_error:.2e}",
    ]
    return "\n".join(lines) + "\n"


_COMMANDS = {
    "measure": _cmd_measure,
    "table": _cmd_table,
    "scan": _cmd_scan,
    "fuzz": _cmd_fuzz,
    "roof": _cmd_roof,
    "repro": _cmd_repro,
}


def run(argv: Sequence[str] | None = None) -> int:
    """Parse argv, dispatch, and return the exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        text = _COMMANDS[args.command](args)
    except SystemExit as exc:
        return int(exc.code or 0)
    except ReproductionError as exc:
        print(f"qcorr: reproduction mismatch: {exc}", file=sys.stderr)
        return 2
    except (QcorrError, OSError, ValueError) as exc:
        print(f"qcorr: error: {exc}", file=sys.stderr)
        return 1
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def main() -> None:
    raise SystemExit(run())


if __name__ == "__main__":
    main()
