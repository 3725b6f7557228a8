"""Command-line driver: ``mfarm audit`` and ``mfarm synth``.

Exit codes: 0 success, 1 input error, 2 configuration error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from .aggregate import run_audit
from .core import AuditConfig
from .errors import AuditError, ConfigError
from .io import emit_report, parse_panel, write_panel_csv
from .metrics import METRICS
from .synth import SynthSpec, generate

METRIC_ALIASES = {
    "mean": "mean_difference",
    "abs": "absolute_deviation",
    "ks": "ks_distributional",
    "var": "variance_heterogeneity",
    "corr": "correlation_difference",
}
SCOPES = {"all": "all-variants", "base": "base-only"}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(2)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mfarm", description="Multi-metric fairness audit of prediction panels.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    audit = sub.add_parser("audit", help="audit a long-format prediction panel")
    audit.add_argument("--input", required=True, type=Path)
    audit.add_argument("--format", choices=("csv", "json"), default=None,
                       help="panel file format (default: from the file extension)")
    audit.add_argument("--base-group", default="BASE")
    audit.add_argument("--alpha", type=float, default=0.05)
    audit.add_argument("--threshold", type=float, default=0.5)
    audit.add_argument("--accuracy-scope", choices=tuple(SCOPES), default="all")
    audit.add_argument("--levene-centering", choices=("mean", "median"), default="mean")
    audit.add_argument("--wilcoxon-zeros", choices=("drop-zeros", "pratt"), default="drop-zeros")
    audit.add_argument("--output", type=Path, default=None,
                       help="report path (default: print the report to stdout)")
    audit.add_argument("--report", choices=("json", "md"), default=None,
                       help="report format (default: from the output extension, else json)")
    audit.add_argument("--metrics", default="all",
                       help="comma list of mean,abs,ks,var,corr (default: all five)")

    synth = sub.add_parser("synth", help="write a synthetic panel CSV from a JSON spec")
    synth.add_argument("--spec", required=True, type=Path)
    synth.add_argument("--seed", type=int, default=None, help="overrides the spec's seed")
    synth.add_argument("--output", required=True, type=Path)
    return parser


def _parse_metrics(text: str) -> list[str]:
    if text.strip() == "all":
        return list(METRICS)
    out = []
    for item in text.split(","):
        item = item.strip()
        name = METRIC_ALIASES.get(item, item)
        if name not in METRICS:
            raise ConfigError(f"unknown metric {item!r}; choose from {', '.join(METRIC_ALIASES)}")
        if name not in out:
            out.append(name)
    return out


def _audit(args) -> int:
    try:
        config = AuditConfig(
            alpha=args.alpha,
            threshold=args.threshold,
            levene_centering=args.levene_centering,
            wilcoxon_zero_policy=args.wilcoxon_zeros,
            accuracy_scope=SCOPES[args.accuracy_scope],
        )
        metrics = _parse_metrics(args.metrics)
    except ConfigError as exc:
        print(f"mfarm: config error: {exc}", file=sys.stderr)
        return 2
    try:
        panel = parse_panel(args.input, args.format, config, args.base_group)
    except OSError as exc:
        print(f"mfarm: cannot read {args.input}: {exc.strerror or exc}", file=sys.stderr)
        return 1
    except AuditError as exc:
        print(f"mfarm: input error: {exc}", file=sys.stderr)
        return 1

    report = run_audit(panel, config, metrics)
    fmt = args.report
    if fmt is None:
        fmt = "md" if args.output is not None and args.output.suffix.lower() == ".md" else "json"
    text = emit_report(report, fmt)
    if args.output is None:
        sys.stdout.write(text)
        return 0
    args.output.write_text(text)
    fmt_num = lambda v: "n/a" if v is None else f"{v:.4f}"  # noqa: E731
    print(f"mFARM={fmt_num(report.mfarm)} accuracy={fmt_num(report.accuracy)} FAB={fmt_num(report.fab)}")
    return 0


def _synth(args) -> int:
    try:
        spec = SynthSpec.from_json(args.spec.read_text())
        if args.seed is not None:
            spec = replace(spec, seed=args.seed)
    except OSError as exc:
        print(f"mfarm: cannot read {args.spec}: {exc.strerror or exc}", file=sys.stderr)
        return 1
    except (AuditError, ValueError) as exc:
        print(f"mfarm: invalid spec: {exc}", file=sys.stderr)
        return 1
    result = generate(spec)
    write_panel_csv(result.panel, args.output)
    print(f"wrote {result.panel.n} cases x {result.panel.k} groups to {args.output} "
          f"({result.total_clips} clipped cells)")
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "audit":
        return _audit(args)
    return _synth(args)


if __name__ == "__main__":
    sys.exit(main())
