"""Panel ingestion (long-format CSV/JSON) and report serialization."""

from __future__ import annotations

import csv
import io as _io
import json
import math
from pathlib import Path

from .aggregate import AuditReport
from .core import AuditConfig, GroupSet, PredictionPanel, build_panel
from .errors import AuditError, ParseError
from .kernels import EffectSize, TestOutcome
from .metrics import ComparisonRecord, MetricReport

PANEL_COLUMNS = ("case_id", "group", "prob_yes", "true_label", "pred_label")
REQUIRED_COLUMNS = PANEL_COLUMNS[:4]

METRIC_LABELS = {
    "mean_difference": "Mean",
    "absolute_deviation": "Abs.",
    "ks_distributional": "KS",
    "variance_heterogeneity": "Var.",
    "correlation_difference": "Corr.",
}


def _parse_prob(text, where: str) -> float:
    try:
        p = float(text)
    except (TypeError, ValueError):
        raise ParseError(f"{where}: prob_yes {text!r} is not a number") from None
    if not math.isfinite(p):
        raise ParseError(f"{where}: prob_yes {text!r} is not finite")
    return p


def _parse_label_text(text, column: str, where: str, optional=False):
    if text is None or (optional and str(text).strip() == ""):
        if optional:
            return None
        raise ParseError(f"{where}: missing {column}")
    t = str(text).strip().lower()
    if t in ("yes", "no"):
        return t == "yes"
    if isinstance(text, bool):
        return text
    raise ParseError(f"{where}: {column} must be yes or no, got {text!r}")


def _read_csv_rows(text: str):
    reader = csv.DictReader(_io.StringIO(text))
    header = reader.fieldnames
    if not header:
        raise ParseError("line 1: missing header row")
    header = [h.strip() for h in header]
    reader.fieldnames = header
    missing = [c for c in REQUIRED_COLUMNS if c not in header]
    if missing:
        raise ParseError(f"line 1: header lacks column(s) {', '.join(missing)}; got {', '.join(header)}")
    for record in reader:
        yield f"line {reader.line_num}", record


def _read_json_rows(text: str):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    rows = doc.get("rows") if isinstance(doc, dict) else doc
    if not isinstance(rows, list):
        raise ParseError("JSON panel must be a list of rows or an object with a 'rows' list")
    for n, record in enumerate(rows):
        if not isinstance(record, dict):
            raise ParseError(f"row {n}: expected an object, got {type(record).__name__}")
        missing = [c for c in REQUIRED_COLUMNS if c not in record]
        if missing:
            raise ParseError(f"row {n}: missing field(s) {', '.join(missing)}")
        yield f"row {n}", record


def parse_panel_text(text: str, fmt: str = "csv", config: AuditConfig | None = None,
                     base_group: str = "BASE") -> PredictionPanel:
    config = config or AuditConfig()
    if fmt == "csv":
        records = _read_csv_rows(text)
    elif fmt == "json":
        records = _read_json_rows(text)
    else:
        raise ParseError(f"unknown panel format {fmt!r}")

    rows = []
    groups: dict[str, None] = {}
    for where, rec in records:
        case_id = str(rec["case_id"]).strip() if rec["case_id"] is not None else ""
        group = str(rec["group"]).strip() if rec["group"] is not None else ""
        if not case_id or not group:
            raise ParseError(f"{where}: case_id and group must be non-empty")
        prob = _parse_prob(rec["prob_yes"], where)
        truth = _parse_label_text(rec["true_label"], "true_label", where)
        pred = _parse_label_text(rec.get("pred_label"), "pred_label", where, optional=True)
        groups.setdefault(group)
        rows.append((case_id, group, prob, truth, pred))
    if not rows:
        raise ParseError("panel file has no data rows")
    group_set = GroupSet.with_base(list(groups), base_group)
    return build_panel(rows, group_set, config)


def parse_panel(path, fmt: str | None = None, config: AuditConfig | None = None,
                base_group: str = "BASE") -> PredictionPanel:
    """Read a long-format panel file and validate it into a :class:`PredictionPanel`."""
    path = Path(path)
    if fmt is None:
        fmt = "json" if path.suffix.lower() == ".json" else "csv"
    return parse_panel_text(path.read_text(), fmt, config, base_group)


def panel_to_csv(panel: PredictionPanel) -> str:
    """Long-format CSV; probabilities use ``repr`` so they round-trip exactly."""
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(PANEL_COLUMNS)
    yn = ("no", "yes")
    for i, cid in enumerate(panel.case_ids):
        for j, g in enumerate(panel.group_set.groups):
            w.writerow([cid, g, repr(float(panel.probs[i, j])), yn[bool(panel.true_labels[i])],
                        yn[bool(panel.pred_labels[i, j])]])
    return buf.getvalue()


def write_panel_csv(panel: PredictionPanel, path) -> None:
    Path(path).write_text(panel_to_csv(panel))


# --- reports -----------------------------------------------------------------

def _num(x):
    if x is None:
        return None
    x = float(x)
    if math.isfinite(x):
        return x
    return "nan" if math.isnan(x) else ("inf" if x > 0 else "-inf")


def _unnum(x):
    if x is None:
        return None
    return float(x)


def _outcome_to_dict(o: TestOutcome | None):
    if o is None:
        return None
    return {"statistic": _num(o.statistic), "p_value": _num(o.p_value), "df": list(o.df),
            "degenerate": o.degenerate, "method": o.method}


def _outcome_from_dict(d):
    if d is None:
        return None
    return TestOutcome(_unnum(d["statistic"]), _unnum(d["p_value"]), tuple(d["df"]),
                       d["degenerate"], d["method"])


def _metric_to_dict(r: MetricReport) -> dict:
    return {
        "metric": r.metric,
        "fairness_score": _num(r.fairness_score),
        "short_circuited": r.short_circuited,
        "u_components": {k: _num(v) for k, v in r.u_components.items()},
        "omnibus": _outcome_to_dict(r.omnibus),
        "diagnostics": {k: _num(v) for k, v in r.diagnostics.items()},
        "comparisons": [
            {
                "family": c.family,
                "group_a": c.group_a,
                "group_b": c.group_b,
                "statistic": _num(c.statistic),
                "raw_p": _num(c.raw_p),
                "adjusted_p": _num(c.adjusted_p),
                "significant": c.significant,
                "effect_kind": c.effect.kind,
                "effect": _num(c.effect.value),
            }
            for c in r.comparisons
        ],
        "notes": list(r.notes),
    }


def _metric_from_dict(d) -> MetricReport:
    comparisons = tuple(
        ComparisonRecord(c["family"], c["group_a"], c["group_b"], _unnum(c["statistic"]),
                         _unnum(c["raw_p"]), _unnum(c["adjusted_p"]), c["significant"],
                         EffectSize(c["effect_kind"], _unnum(c["effect"])))
        for c in d["comparisons"]
    )
    return MetricReport(
        d["metric"], _outcome_from_dict(d["omnibus"]), comparisons,
        {k: _unnum(v) for k, v in d["u_components"].items()}, _unnum(d["fairness_score"]),
        d["short_circuited"], {k: _unnum(v) for k, v in d["diagnostics"].items()}, tuple(d["notes"]),
    )


def report_to_dict(report: AuditReport) -> dict:
    cfg = report.config_echo
    return {
        "tool_version": report.tool_version,
        "config": {
            "alpha": cfg.alpha,
            "threshold": cfg.threshold,
            "levene_centering": cfg.levene_centering,
            "wilcoxon_zero_policy": cfg.wilcoxon_zero_policy,
            "min_exact_n": cfg.min_exact_n,
            "accuracy_scope": cfg.accuracy_scope,
        },
        "panel_digest": report.panel_digest,
        "metrics": {name: _metric_to_dict(r) for name, r in report.metric_reports.items()},
        "aggregates": {
            "mfarm": _num(report.mfarm),
            "accuracy": _num(report.accuracy),
            "accuracy_scope": report.accuracy_scope,
            "fab": _num(report.fab),
            "accuracy_skew": _num(report.accuracy_skew),
            "sp_score": _num(report.sp_score),
            "eo_score": _num(report.eo_score),
            "baseline_variant": report.baseline_variant,
        },
        "notes": list(report.notes),
    }


def report_from_dict(d: dict) -> AuditReport:
    agg = d["aggregates"]
    return AuditReport(
        metric_reports={name: _metric_from_dict(m) for name, m in d["metrics"].items()},
        mfarm=_unnum(agg["mfarm"]),
        accuracy=_unnum(agg["accuracy"]),
        accuracy_scope=agg["accuracy_scope"],
        fab=_unnum(agg["fab"]),
        accuracy_skew=_unnum(agg["accuracy_skew"]),
        sp_score=_unnum(agg["sp_score"]),
        eo_score=_unnum(agg["eo_score"]),
        config_echo=AuditConfig(**d["config"]),
        panel_digest=d["panel_digest"],
        baseline_variant=agg["baseline_variant"],
        tool_version=d["tool_version"],
        notes=tuple(d["notes"]),
    )


def load_report(text: str) -> AuditReport:
    try:
        return report_from_dict(json.loads(text))
    except (KeyError, TypeError, json.JSONDecodeError) as exc:
        raise ParseError(f"not a valid audit report: {exc}") from None


def _fmt(x) -> str:
    if x is None:
        return "n/a"
    return f"{x:.6g}"


def report_to_markdown(report: AuditReport) -> str:
    digest = report.panel_digest
    lines = [
        "# Fairness audit report",
        "",
        f"{digest['n_cases']} cases x {digest['n_groups']} groups, BASE group `{digest['base_group']}`; "
        f"alpha = {report.config_echo.alpha}, accuracy scope {report.accuracy_scope}.",
        "",
    ]
    header = [METRIC_LABELS[m] for m in METRIC_LABELS if m in report.metric_reports]
    header += ["Fairness", "Accuracy", "H-Score"]
    row = [_fmt(report.metric_reports[m].fairness_score) for m in METRIC_LABELS if m in report.metric_reports]
    row += [_fmt(report.mfarm), _fmt(report.accuracy), _fmt(report.fab)]
    lines += ["| " + " | ".join(header) + " |", "|" + "---|" * len(header), "| " + " | ".join(row) + " |", ""]
    lines += [
        f"- accuracy skew: {_fmt(report.accuracy_skew)}",
        f"- SP score ({report.baseline_variant}): {_fmt(report.sp_score)}",
        f"- EO score ({report.baseline_variant}): {_fmt(report.eo_score)}",
        "",
    ]
    for name, r in report.metric_reports.items():
        lines.append(f"## {name}")
        lines.append("")
        if r.omnibus is not None:
            lines.append(f"omnibus statistic {_fmt(r.omnibus.statistic)}, p = {_fmt(r.omnibus.p_value)}"
                         + (" (degenerate)" if r.omnibus.degenerate else ""))
        else:
            lines.append("no omnibus test")
        us = ", ".join(f"{k} = {_fmt(v)}" for k, v in r.u_components.items())
        lines.append(f"score {_fmt(r.fairness_score)}; {us}"
                     + ("; short-circuited" if r.short_circuited else ""))
        for note in r.notes:
            lines.append(f"note: {note}")
        if r.comparisons:
            lines += ["", "| family | group | vs | raw p | adj. p | I(c) | s_c |", "|---|---|---|---|---|---|---|"]
            for c in r.comparisons:
                lines.append(f"| {c.family} | {c.group_a} | {c.group_b} | {_fmt(c.raw_p)} | "
                             f"{_fmt(c.adjusted_p)} | {int(c.significant)} | {_fmt(c.effect.value)} |")
        lines.append("")
    lines += [f"_{n}_" for n in report.notes]
    lines.append("")
    return "\n".join(lines)


def emit_report(report: AuditReport, fmt: str = "json") -> str:
    if fmt == "json":
        return json.dumps(report_to_dict(report), indent=2, allow_nan=False) + "\n"
    if fmt in ("md", "markdown"):
        return report_to_markdown(report)
    raise AuditError(f"unknown report format {fmt!r}")
