import csv
import io
import json
import math

import pytest

from trackmetric.cli import main
from trackmetric.core import TrackSet, make_track, validate
from trackmetric.io import load_track_set, save_track_set
from trackmetric.scenarios import FigureId, ScenarioSpec, build


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def write_scenario(tmp_path, fig, **kw):
    sc = build(ScenarioSpec(fig, **kw))
    truth = tmp_path / "truth.json"
    est = tmp_path / "est.json"
    save_track_set(sc.truth, truth)
    save_track_set(sc.est, est)
    return truth, est


# ------------------------------------------------------------------ files


def test_round_trip_bit_exact(tmp_path):
    awkward = [0.1, 1.0 / 3.0, math.pi, -2.5e-17, 1e300, 123456789.123456789]
    ts = validate(
        TrackSet(
            3,
            2,
            (
                make_track({1: (awkward[0], awkward[1]), 3: (awkward[2], awkward[3])}, "a"),
                make_track({2: (awkward[4], awkward[5])}, "b"),
            ),
        )
    )
    path = tmp_path / "set.json"
    save_track_set(ts, path)
    back = load_track_set(path)
    assert back.scans == ts.scans and back.state_dim == ts.state_dim
    for orig, loaded in zip(ts.tracks, back.tracks):
        assert loaded.points == orig.points  # bit-exact coordinates
        assert loaded.label == orig.label


def test_points_sorted_on_load_and_duplicate_t_rejected(tmp_path):
    path = tmp_path / "unsorted.json"
    path.write_text(
        json.dumps(
            {
                "scans": 3,
                "state_dim": 1,
                "tracks": [
                    {"id": "x", "points": [{"t": 3, "x": [1.0]}, {"t": 1, "x": [0.0]}]}
                ],
            }
        )
    )
    ts = load_track_set(path)
    assert sorted(ts.tracks[0].points) == [1, 3]
    path.write_text(
        json.dumps(
            {
                "scans": 3,
                "state_dim": 1,
                "tracks": [
                    {"id": "x", "points": [{"t": 1, "x": [1.0]}, {"t": 1, "x": [0.0]}]}
                ],
            }
        )
    )
    from trackmetric.errors import ParseError

    with pytest.raises(ParseError, match="duplicate"):
        load_track_set(path)


# ---------------------------------------------------------------- compute


def test_scenario_then_compute_fig5(tmp_path, capsys):
    truth = tmp_path / "t.json"
    est = tmp_path / "e.json"
    code, out, _ = run(capsys, "scenario", "fig5", "--truth", str(truth), "--est", str(est))
    assert code == 0
    assert truth.exists() and est.exists()
    code, out, _ = run(
        capsys, "compute", str(truth), str(est), "--metric", "ospamt", "--output", "json"
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["metrics"]["ospamt"]["total"] == pytest.approx(5.0, rel=1e-9)


def test_compute_identical_files_zero(tmp_path, capsys):
    truth, _ = write_scenario(tmp_path, FigureId.FIG1A)
    code, out, _ = run(
        capsys, "compute", str(truth), str(truth), "--metric", "all", "--output", "json"
    )
    assert code == 0
    doc = json.loads(out)
    for metric in ("ospa", "ospat", "ospamt"):
        assert doc["metrics"][metric]["total"] == pytest.approx(0.0, abs=1e-12)


def test_compute_all_fig9a_at_t1(tmp_path, capsys):
    truth, est = write_scenario(tmp_path, FigureId.FIG9A)
    code, out, _ = run(
        capsys, "compute", str(truth), str(est), "--metric", "all", "--output", "json"
    )
    assert code == 0
    doc = json.loads(out)
    t1 = {m: doc["metrics"][m]["per_time"][0] for m in ("ospa", "ospat", "ospamt")}
    assert t1["ospa"]["total"] == pytest.approx(1.0, rel=1e-9)
    assert t1["ospat"]["total"] == pytest.approx(11.0, rel=1e-9)  # (alpha + eps) at p=1
    assert t1["ospamt"]["total"] == pytest.approx(80.0, rel=1e-9)


def test_compute_empty_truth_set(tmp_path, capsys):
    empty = tmp_path / "empty.json"
    empty.write_text(json.dumps({"scans": 5, "state_dim": 1, "tracks": []}))
    _, est = write_scenario(tmp_path, FigureId.FIG1A)
    code, out, _ = run(
        capsys, "compute", str(empty), str(est), "--metric", "all", "--output", "json"
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["metrics"]["ospamt"]["total"] == pytest.approx(80.0, rel=1e-9)
    assert doc["metrics"]["ospa"]["per_time"][0]["total"] == pytest.approx(80.0)


def test_compute_dimension_mismatch_exit_3(tmp_path, capsys):
    truth, _ = write_scenario(tmp_path, FigureId.FIG1A)
    other = tmp_path / "dim2.json"
    save_track_set(
        validate(TrackSet(5, 2, (make_track({1: (0.0, 0.0)}),))), other
    )
    code, _, err = run(capsys, "compute", str(truth), str(other))
    assert code == 3
    assert "dimension" in err.lower()


def test_compute_parse_error_exit_2(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    truth, _ = write_scenario(tmp_path, FigureId.FIG1A)
    code, _, err = run(capsys, "compute", str(bad), str(truth))
    assert code == 2


def test_compute_validation_error_names_track_and_scan(tmp_path, capsys):
    bad = tmp_path / "invalid.json"
    bad.write_text(
        json.dumps(
            {
                "scans": 2,
                "state_dim": 1,
                "tracks": [{"id": "rogue", "points": [{"t": 9, "x": [0.0]}]}],
            }
        )
    )
    truth, _ = write_scenario(tmp_path, FigureId.FIG1A)
    code, _, err = run(capsys, "compute", str(bad), str(bad))
    assert code == 3
    assert "rogue" in err and "9" in err


def test_csv_structure_and_partition(tmp_path, capsys):
    truth, est = write_scenario(tmp_path, FigureId.FIG1B)
    code, out, _ = run(
        capsys, "compute", str(truth), str(est), "--metric", "all", "--output", "csv",
        "--p", "2",
    )
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert list(rows[0]) == ["t", "metric", "total", "loc", "card", "n_t"]
    by_metric = {}
    for row in rows:
        by_metric.setdefault(row["metric"], []).append(row)
    for metric, mrows in by_metric.items():
        assert len(mrows) == 5  # exactly T data rows
        for row in mrows:
            total, loc, card = (float(row[k]) for k in ("total", "loc", "card"))
            assert total**2 == pytest.approx(loc**2 + card**2, rel=1e-9, abs=1e-9)


def test_unknown_figure_exit_4(tmp_path, capsys):
    code, _, err = run(
        capsys, "scenario", "fig99",
        "--truth", str(tmp_path / "t.json"), "--est", str(tmp_path / "e.json"),
    )
    assert code == 4


def test_bad_scenario_ordering_exit_4(tmp_path, capsys):
    code, _, err = run(
        capsys, "scenario", "fig9b", "--epsilon", "6", "--eta", "5",
        "--truth", str(tmp_path / "t.json"), "--est", str(tmp_path / "e.json"),
    )
    assert code == 4


def test_fig13_triangle_demo_via_cli(tmp_path, capsys):
    t, e, a = (tmp_path / n for n in ("t.json", "e.json", "a.json"))
    code, _, _ = run(
        capsys, "scenario", "fig13",
        "--truth", str(t), "--est", str(e), "--alt", str(a),
    )
    assert code == 0

    def ospat_at4(x, y):
        code, out, _ = run(
            capsys, "compute", str(x), str(y), "--metric", "ospat", "--output", "json"
        )
        assert code == 0
        return json.loads(out)["metrics"]["ospat"]["per_time"][3]["total"]

    d_te = ospat_at4(t, e)
    d_ea = ospat_at4(e, a)
    d_ta = ospat_at4(t, a)
    assert d_ta > d_te + d_ea  # the documented triangle violation


def test_fig13_requires_alt_path(tmp_path, capsys):
    code, _, err = run(
        capsys, "scenario", "fig13",
        "--truth", str(tmp_path / "t.json"), "--est", str(tmp_path / "e.json"),
    )
    assert code == 4
    assert "--alt" in err


def test_split_fig5(tmp_path, capsys):
    truth, est = write_scenario(tmp_path, FigureId.FIG5)
    out_path = tmp_path / "split.json"
    code, out, _ = run(capsys, "split", str(truth), str(est), "--out", str(out_path))
    assert code == 0
    assert "split" in out
    new_est = load_track_set(out_path)
    assert len(new_est.tracks) == 2
    code, out, _ = run(
        capsys, "compute", str(truth), str(out_path), "--output", "json"
    )
    assert json.loads(out)["metrics"]["ospamt"]["total"] == pytest.approx(1.0, rel=1e-9)


def test_split_noop(tmp_path, capsys):
    truth, est = write_scenario(tmp_path, FigureId.FIG8)
    out_path = tmp_path / "split.json"
    code, out, _ = run(capsys, "split", str(truth), str(est), "--out", str(out_path))
    assert code == 0
    assert "already one-to-one" in out
    assert load_track_set(out_path).as_multiset() == load_track_set(est).as_multiset()


def test_split_no_convergence_exit_5(tmp_path, capsys):
    truth = tmp_path / "t.json"
    est = tmp_path / "e.json"
    save_track_set(
        validate(
            TrackSet(
                2, 1,
                (make_track({1: 1.0, 2: 1.0}, "A"), make_track({1: 2.0, 2: 2.0}, "B")),
            )
        ),
        truth,
    )
    save_track_set(
        validate(
            TrackSet(
                2, 1,
                (make_track({1: 0.0, 2: 0.0}, "E1"), make_track({1: 50.0, 2: 50.0}, "E2")),
            )
        ),
        est,
    )
    code, _, err = run(
        capsys, "split", str(truth), str(est), "--out", str(tmp_path / "o.json"),
        "--mode", "greedy",
    )
    assert code == 5


def test_env_mode_override(tmp_path, capsys, monkeypatch):
    # Twelve tracks force TooLarge when the environment demands exact mode.
    tracks = tuple(make_track({1: float(i)}, f"t{i}") for i in range(6))
    big = validate(TrackSet(1, 1, tracks))
    truth = tmp_path / "t.json"
    save_track_set(big, truth)
    monkeypatch.setenv("TRACKMETRIC_MODE", "exact")
    code, _, err = run(capsys, "compute", str(truth), str(truth))
    assert code == 4
    assert "cap" in err
    monkeypatch.setenv("TRACKMETRIC_MODE", "auto")
    code, _, _ = run(capsys, "compute", str(truth), str(truth))
    assert code == 0


def test_jobs_output_is_deterministic(tmp_path, capsys):
    truth, est = write_scenario(tmp_path, FigureId.FIG9A)
    _, out1, _ = run(
        capsys, "compute", str(truth), str(est), "--metric", "all", "--output", "json"
    )
    _, out3, _ = run(
        capsys, "compute", str(truth), str(est), "--metric", "all", "--output", "json",
        "--jobs", "3",
    )
    assert out1 == out3


def test_scenario_random_round_trips(tmp_path, capsys):
    truth = tmp_path / "t.json"
    est = tmp_path / "e.json"
    code, _, _ = run(
        capsys, "scenario", "random", "--seed", "5", "--n-truth", "3",
        "--scans", "6", "--noise", "0.3", "--miss-rate", "0.2",
        "--truth", str(truth), "--est", str(est),
    )
    assert code == 0
    code, out, _ = run(capsys, "compute", str(truth), str(est), "--output", "json")
    assert code == 0
    assert json.loads(out)["metrics"]["ospamt"]["total"] >= 0.0


def test_scenario_random_requires_seed(tmp_path, capsys):
    code, _, err = run(
        capsys, "scenario", "random",
        "--truth", str(tmp_path / "t.json"), "--est", str(tmp_path / "e.json"),
    )
    assert code == 4


def test_per_time_table_and_assignment(tmp_path, capsys):
    truth, est = write_scenario(tmp_path, FigureId.FIG1A)
    code, out, _ = run(
        capsys, "compute", str(truth), str(est), "--metric", "ospamt",
        "--per-time", "--report-assignment",
    )
    assert code == 0
    assert "t1<-(e1, e2)" in out
    assert out.count("ospamt") >= 6  # summary plus five per-scan rows


def test_at_time_flag(tmp_path, capsys):
    truth, est = write_scenario(tmp_path, FigureId.FIG1A)
    code, out, _ = run(
        capsys, "compute", str(truth), str(est), "--output", "csv", "--at-time", "4"
    )
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 1 and rows[0]["t"] == "4"
    code, _, err = run(
        capsys, "compute", str(truth), str(est), "--at-time", "9"
    )
    assert code == 4


def test_selftest_passes(capsys):
    code, out, _ = run(capsys, "selftest")
    assert code == 0
    assert out.count("PASS") == 6 and "FAIL" not in out
