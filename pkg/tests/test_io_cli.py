import json

import numpy as np
import pytest

from mfarm import cli
from mfarm.aggregate import run_audit
from mfarm.errors import ParseError, UnknownGroup
from mfarm.io import (
    emit_report,
    load_report,
    panel_to_csv,
    parse_panel,
    parse_panel_text,
    report_to_dict,
)
from mfarm.synth import GroupSpec, SynthSpec, generate_panel, harm_spec

CSV_2X3 = """case_id,group,prob_yes,true_label,pred_label
c1,BASE,0.2,yes,
c1,A,0.4,yes,no
c1,B,0.6,yes,yes
c2,BASE,0.7,no,
c2,A,0.5,no,
c2,B,0.9,no,
"""


@pytest.fixture
def fixture_panel():
    spec = SynthSpec(
        n_cases=60,
        groups=(GroupSpec("A", shift=0.05, noise_scale=0.02), GroupSpec("B", noise_scale=0.04), GroupSpec("C", coupling=1.0)),
        seed=7,
    )
    return generate_panel(spec)


def test_parse_csv_minimal():
    p = parse_panel_text(CSV_2X3)
    assert p.group_set.groups == ("BASE", "A", "B") and p.n == 2
    assert p.pred_labels.tolist() == [[False, False, True], [True, True, True]]


def test_parse_nan_reports_line():
    bad = CSV_2X3.replace("c2,A,0.5", "c2,A,NaN")
    with pytest.raises(ParseError, match="line 6"):
        parse_panel_text(bad)


def test_parse_bad_label_and_header():
    with pytest.raises(ParseError, match="true_label"):
        parse_panel_text(CSV_2X3.replace("c1,BASE,0.2,yes", "c1,BASE,0.2,maybe"))
    with pytest.raises(ParseError, match="prob_yes"):
        parse_panel_text(CSV_2X3.replace("prob_yes", "p"))


def test_parse_unknown_base_lists_groups():
    with pytest.raises(UnknownGroup, match="A.*B"):
        parse_panel_text(CSV_2X3, base_group="NEUTRAL")


def test_parse_json_both_shapes(tmp_path):
    rows = [
        {"case_id": c, "group": g, "prob_yes": p, "true_label": t}
        for c, g, p, t in [("c1", "BASE", 0.2, "yes"), ("c1", "A", 0.4, "yes"), ("c1", "B", 0.6, "yes")]
    ]
    a = parse_panel_text(json.dumps(rows), "json")
    path = tmp_path / "panel.json"
    path.write_text(json.dumps({"rows": rows}))
    b = parse_panel(path)
    assert np.array_equal(a.probs, b.probs)
    with pytest.raises(ParseError, match="row 1"):
        parse_panel_text(json.dumps([rows[0], {"case_id": "c1"}]), "json")


def test_panel_csv_roundtrip_bit_exact(fixture_panel):
    back = parse_panel_text(panel_to_csv(fixture_panel))
    assert np.array_equal(back.probs, fixture_panel.probs)
    assert np.array_equal(back.pred_labels, fixture_panel.pred_labels)
    assert back.case_ids == fixture_panel.case_ids


def test_report_roundtrip(fixture_panel):
    report = run_audit(fixture_panel)
    text = emit_report(report, "json")
    again = load_report(text)
    assert report_to_dict(again) == report_to_dict(report)
    assert emit_report(again, "json") == text


def test_clone_report_json():
    spec = SynthSpec(n_cases=30, groups=(GroupSpec("A"), GroupSpec("B")), seed=1)
    doc = json.loads(emit_report(run_audit(generate_panel(spec)), "json"))
    blocks = doc["metrics"]
    assert all(b["fairness_score"] == 1.0 for b in blocks.values())
    assert all(b["short_circuited"] for k, b in blocks.items() if b["omnibus"] is not None)


def test_markdown_table_columns(fixture_panel):
    md = emit_report(run_audit(fixture_panel), "md")
    header = next(line for line in md.splitlines() if line.startswith("| Mean"))
    cols = [c.strip() for c in header.strip("|").split("|")]
    assert cols == ["Mean", "Abs.", "KS", "Var.", "Corr.", "Fairness", "Accuracy", "H-Score"]


# --- CLI -----------------------------------------------------------------------------

@pytest.fixture
def panel_csv(tmp_path, fixture_panel):
    path = tmp_path / "panel.csv"
    path.write_text(panel_to_csv(fixture_panel))
    return path


def test_cli_audit_writes_report(tmp_path, panel_csv, capsys):
    out = tmp_path / "r.json"
    assert cli.main(["audit", "--input", str(panel_csv), "--output", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert set(doc["metrics"]) == {
        "mean_difference", "absolute_deviation", "ks_distributional",
        "variance_heterogeneity", "correlation_difference",
    }
    line = capsys.readouterr().out
    assert line.startswith("mFARM=") and "accuracy=" in line and "FAB=" in line


def test_cli_output_is_deterministic(tmp_path, panel_csv):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for out in (a, b):
        assert cli.main(["audit", "--input", str(panel_csv), "--output", str(out)]) == 0
    assert a.read_bytes() == b.read_bytes()
    md1, md2 = tmp_path / "a.md", tmp_path / "b.md"
    for out in (md1, md2):
        assert cli.main(["audit", "--input", str(panel_csv), "--output", str(out)]) == 0
    assert md1.read_bytes() == md2.read_bytes() and md1.read_text().lstrip().startswith("#")


def test_cli_partial_metrics(tmp_path, panel_csv, capsys):
    out = tmp_path / "r.json"
    assert cli.main(["audit", "--input", str(panel_csv), "--metrics", "ks,corr", "--output", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert set(doc["metrics"]) == {"ks_distributional", "correlation_difference"}
    assert doc["aggregates"]["mfarm"] is None
    assert "mFARM=n/a" in capsys.readouterr().out


def test_cli_stdout_report(panel_csv, capsys):
    assert cli.main(["audit", "--input", str(panel_csv), "--report", "json"]) == 0
    json.loads(capsys.readouterr().out)


def test_cli_config_errors_exit_2(panel_csv):
    assert cli.main(["audit", "--input", str(panel_csv), "--alpha", "1.5"]) == 2
    assert cli.main(["audit", "--input", str(panel_csv), "--metrics", "ks,bogus"]) == 2
    with pytest.raises(SystemExit) as exc:
        cli.main(["audit", "--input", str(panel_csv), "--accuracy-scope", "some"])
    assert exc.value.code == 2


def test_cli_input_errors_exit_1(tmp_path, panel_csv, capsys):
    assert cli.main(["audit", "--input", str(tmp_path / "missing.csv")]) == 1
    bad = tmp_path / "bad.csv"
    bad.write_text(CSV_2X3.replace("0.5", "nan"))
    assert cli.main(["audit", "--input", str(bad)]) == 1
    assert "line" in capsys.readouterr().err
    assert cli.main(["audit", "--input", str(panel_csv), "--base-group", "NOPE"]) == 1


def test_cli_synth(tmp_path, capsys):
    spec = harm_spec(n_cases=40, k=4, seed=3, shift=0.2)
    doc = {
        "n_cases": spec.n_cases,
        "seed": spec.seed,
        "groups": [{"name": g.name, "shift": g.shift} for g in spec.groups],
    }
    spec_path = tmp_path / "spec.json"
    spec_path.write_text(json.dumps(doc))
    out = tmp_path / "panel.csv"
    assert cli.main(["synth", "--spec", str(spec_path), "--output", str(out)]) == 0
    panel = parse_panel(out)
    assert np.array_equal(panel.probs, generate_panel(spec).probs)
    out2 = tmp_path / "panel2.csv"
    assert cli.main(["synth", "--spec", str(spec_path), "--seed", "4", "--output", str(out2)]) == 0
    assert out.read_text() != out2.read_text()
    spec_path.write_text(json.dumps({"n_cases": 0, "groups": []}))
    assert cli.main(["synth", "--spec", str(spec_path), "--output", str(out)]) == 1
