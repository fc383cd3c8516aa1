"""Command line entry point: ``sstlab <subcommand> ...``.

Exit codes: 0 success, 1 usage or input error, 2 table check mismatch.
"""

import argparse
import json
import sys

from sstlab.core import Alphabet, empirical_entropy, information_content
from sstlab.errors import SSTError
from sstlab.harness import (
    coding_cost_report,
    dumps,
    parse_configs,
    read_expected_csv,
    run_table,
    sweep_configs,
)
from sstlab.shaping import RESIDUAL_POLICIES, Codebook, ShapingConfig, build_codebook, decode, encode
from sstlab.testability import ErrorModel, detection_rate


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _range(text: str):
    """``a..b`` inclusive, either direction; a bare integer is a one-element range."""
    if ".." not in text:
        return [int(text)]
    a, b = (int(v) for v in text.split("..", 1))
    step = 1 if b >= a else -1
    return list(range(a, b + step, step))


def cmd_info(args):
    alphabet = Alphabet.from_string(args.alphabet)
    s = alphabet.parse(args.string)
    print(json.dumps({
        "length": len(s), "h0": empirical_entropy(s), "info_bits": information_content(s),
    }))
    return 0


def cmd_codebook(args):
    cb = build_codebook(
        ShapingConfig.parse(args.config), Alphabet.from_string(args.alphabet), args.n,
        materialize=args.materialize, residual_policy=args.residuals,
    )
    cb.save(args.out)
    return 0


def cmd_encode(args):
    cb = Codebook.load(args.codebook)
    print(encode(cb.alphabet.parse(args.string), cb))
    return 0


def cmd_decode(args):
    cb = Codebook.load(args.codebook)
    print(decode(cb.alphabet.parse(args.string), cb))
    return 0


def cmd_table(args):
    alphabet = Alphabet.from_string(args.alphabet)
    configs = parse_configs(args.configs)
    expected = None
    if args.check:
        with open(args.check, encoding="utf-8") as fh:
            expected = read_expected_csv(fh.read())
    report = run_table(
        alphabet, args.n, configs, expected=expected, tol=args.tol,
        residual_policy=args.residuals, workers=args.workers,
    )
    if args.format == "csv":
        sys.stdout.write(report.to_csv())
    else:
        sys.stdout.write(dumps(report.to_json()))
    for row in report.failures():
        msg = row.error or f"deviation {row.deviation():.4f} > tol {report.tol}"
        print(f"{row.config}: {msg}", file=sys.stderr)
    if any(row.error for row in report.rows):
        return 1
    return 0 if report.passed else 2


def cmd_sweep(args):
    rows = sweep_configs(
        Alphabet.from_string(args.alphabet), args.n, _range(args.kpos), _range(args.kneg),
        residual_policy=args.residuals,
    )
    out = [
        {"k_pos": r.config.k_pos, "k_neg": r.config.k_neg,
         "avg_info_y": r.avg_info_y, "delta": r.delta}
        for r in rows
    ]
    sys.stdout.write(dumps(out))
    return 0


def cmd_testability(args):
    cb = Codebook.load(args.codebook)
    em = ErrorModel(args.t, args.seed)
    if args.exhaustive:
        report = detection_rate(cb, em, "exhaustive")
    else:
        report = detection_rate(cb, em, "sampled", trials=args.trials)
    sys.stdout.write(dumps(report.to_json(cb, em)))
    return 0


def cmd_coding_cost(args):
    report = coding_cost_report(
        Alphabet.from_string(args.alphabet), args.n, ShapingConfig.parse(args.config),
        gram=args.gram, overhead=args.overhead, pad=args.pad, residual_policy=args.residuals,
    )
    sys.stdout.write(dumps(report.to_json()))
    return 0


def build_parser():
    p = _Parser(prog="sstlab", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def residuals(sp):
        sp.add_argument("--residuals", choices=RESIDUAL_POLICIES, default="chained")

    sp = sub.add_parser("info", help="information content of one string")
    sp.add_argument("--alphabet", required=True)
    sp.add_argument("--string", required=True)
    sp.set_defaults(func=cmd_info)

    sp = sub.add_parser("codebook", help="build a stage codebook and save it as JSON")
    sp.add_argument("--alphabet", required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--config", required=True)
    sp.add_argument("--materialize", action="store_true")
    sp.add_argument("--out", required=True)
    residuals(sp)
    sp.set_defaults(func=cmd_codebook)

    for name, func in (("encode", cmd_encode), ("decode", cmd_decode)):
        sp = sub.add_parser(name, help=f"{name} one string with a saved codebook")
        sp.add_argument("--codebook", required=True)
        sp.add_argument("--string", required=True)
        sp.set_defaults(func=func)

    sp = sub.add_parser("table", help="average information content per config")
    sp.add_argument("--alphabet", required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--configs", required=True, help="e.g. '0;1;2;1,-1'")
    sp.add_argument("--check", help="CSV of expected rows")
    sp.add_argument("--tol", type=float, default=None, help="bits; default 0 in check mode")
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    sp.add_argument("--workers", type=int, default=1)
    residuals(sp)
    sp.set_defaults(func=cmd_table)

    sp = sub.add_parser("sweep", help="rank (k_pos, k_neg) pairs by average information")
    sp.add_argument("--alphabet", required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--kpos", required=True, help="a..b")
    sp.add_argument("--kneg", required=True, help="-a..-b")
    residuals(sp)
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("testability", help="error detection rate of a saved codebook")
    sp.add_argument("--codebook", required=True)
    sp.add_argument("--t", type=int, required=True)
    mode = sp.add_mutually_exclusive_group(required=True)
    mode.add_argument("--exhaustive", action="store_true")
    mode.add_argument("--trials", type=int)
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_testability)

    sp = sub.add_parser("coding-cost", help="NH0 versus Huffman cost of the transformed set")
    sp.add_argument("--alphabet", required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--config", required=True)
    sp.add_argument("--gram", type=int, default=1)
    sp.add_argument("--overhead", choices=("none", "table"), default="none")
    sp.add_argument("--pad", choices=("strict", "repeat-last"), default="strict")
    residuals(sp)
    sp.set_defaults(func=cmd_coding_cost)
    return p


def _attach_range_values(argv):
    # `--kneg -1..-3` would otherwise be read as an unknown option
    out = []
    it = iter(argv)
    for a in it:
        if a in ("--kpos", "--kneg"):
            value = next(it, None)
            out.append(a if value is None else f"{a}={value}")
        else:
            out.append(a)
    return out


def main(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(_attach_range_values(argv))
    try:
        return args.func(args)
    except (SSTError, OSError, ValueError) as exc:
        print(f"sstlab {args.command}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
