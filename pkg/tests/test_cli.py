import re
from pathlib import Path

import pytest

from spectra_lease.cli import main
from spectra_lease.config import ConfigError, config_pairs, load_config, manifest_text, parse_config
from spectra_lease.game import GameParams
from spectra_lease.output import SchemaError, emit_chart, emit_csv, read_csv, render_svg
from spectra_lease.sim import ScenarioConfig

SMALL = ["grid = 15", "realizations = 6", "distances = 5, 20, 60", "n_slots = 12", "n_runs = 2", "window = 4"]


def test_empty_config_gives_defaults(tmp_path):
    p = tmp_path / "empty.cfg"
    p.write_text("# nothing here\n\n")
    cfg = parse_config(p)
    g = cfg.game
    assert (g.t_slot, g.eta1, g.eta2, g.sigma2, g.rho, g.p_p) == (1.0, 0.004, 0.0005, 1.0, 0.7, 3.0)
    assert g.eta3 == 0.1
    assert (cfg.n_sus, cfg.selfish_fraction, cfg.deviation_prob) == (10, 0.7, 0.2)
    assert cfg == ScenarioConfig()


def test_override_wins_over_file(tmp_path):
    p = tmp_path / "a.cfg"
    p.write_text("rho = 0.5\nseed = 4  # trailing comment\n")
    cfg = parse_config(p, ["rho=0.9"])
    assert cfg.game.rho == 0.9 and cfg.seed == 4
    assert cfg.game == GameParams(rho=0.9)


@pytest.mark.parametrize(
    "line, key",
    [("eta1 = -1", "eta1"), ("bogus = 3", "bogus"), ("n_slots = many", "n_slots"), ("pt = 1", "pt"), ("policy = nearest", "policy")],
)
def test_bad_values_name_the_key(tmp_path, line, key):
    p = tmp_path / "bad.cfg"
    p.write_text(line + "\n")
    with pytest.raises(ConfigError, match=key):
        parse_config(p)


def test_missing_file_is_config_error(tmp_path):
    with pytest.raises(ConfigError):
        parse_config(tmp_path / "nope.cfg")


def test_manifest_round_trips():
    cfg = ScenarioConfig(seed=77, distances=(1.5, 2.25), ed=(3.0, -4.5), game=GameParams(rho=0.123456789123))
    back, meta = load_config(None, manifest_text(cfg, "scenario1").splitlines())
    assert back == cfg and meta["scenario"] == "scenario1"


def test_csv_format(tmp_path):
    rows = [{"a": 1, "b": 0.1234567891234, "c": "x"}, {"a": 2, "b": 1e-12, "c": "y"}, {"a": 3, "b": float("nan"), "c": "z"}]
    p = tmp_path / "t.csv"
    emit_csv(rows, p)
    text = p.read_bytes().decode("utf-8")
    assert text.splitlines() == ["a,b,c", "1,0.123456789,x", "2,1e-12,y", "3,nan,z"]
    assert text.endswith("\n")
    first = p.read_bytes()
    emit_csv(rows, p)
    assert p.read_bytes() == first


def test_csv_rejects_empty(tmp_path):
    with pytest.raises(SchemaError):
        emit_csv([], tmp_path / "x.csv")


def _s2_rows():
    return [{"window_end_slot": w, "policy": p, "p_unreliable": 0.1 * w} for p in ("reputation", "random", "best_csi") for w in (1, 2, 3)]


def test_chart_one_polyline_per_policy():
    svg = render_svg(_s2_rows(), "unreliable_vs_time")
    assert svg.count("<polyline") == 3
    assert svg.startswith("<svg") and "Probability of selecting unreliable nodes" in svg


def test_chart_single_point():
    svg = render_svg([{"distance_m": 10.0, "mean_secrecy_rate": 0.1}], "rate_vs_distance")
    assert svg.count("<polyline") == 1 and svg.count("<circle") == 1


def test_chart_deterministic_and_schema(tmp_path):
    emit_chart(_s2_rows(), "unreliable_vs_time", tmp_path / "a.svg")
    emit_chart(_s2_rows(), "unreliable_vs_time", tmp_path / "b.svg")
    assert (tmp_path / "a.svg").read_bytes() == (tmp_path / "b.svg").read_bytes()
    with pytest.raises(SchemaError):
        render_svg(_s2_rows(), "rate_vs_distance")
    with pytest.raises(SchemaError):
        render_svg(_s2_rows(), "pie")


def _run(tmp_path, scenario, out, extra=()):
    args = [scenario, "--out", str(out)]
    for s in SMALL:
        args += ["--set", s]
    return main(args + list(extra))


def test_scenario1_cli_and_manifest_rerun(tmp_path):
    out = tmp_path / "s1"
    assert _run(tmp_path, "scenario1", out) == 0
    csv_bytes = (out / "scenario1.csv").read_bytes()
    lines = csv_bytes.decode().splitlines()
    assert lines[0] == "distance_m,mean_secrecy_rate,mean_p_j_mw,mean_alpha_beta,lease_fraction"
    assert len(lines) == 4
    for kind in ("rate_vs_distance", "jamming_vs_distance", "alphabeta_vs_distance"):
        assert (out / f"{kind}.svg").exists()
    again = tmp_path / "again"
    assert main(["scenario1", "--config", str(out / "manifest.txt"), "--out", str(again)]) == 0
    assert (again / "scenario1.csv").read_bytes() == csv_bytes
    # chart is derivable from the CSV alone
    assert render_svg(read_csv(out / "scenario1.csv"), "rate_vs_distance") == (out / "rate_vs_distance.svg").read_text()


def test_scenario2_cli_flags(tmp_path):
    out = tmp_path / "s2"
    assert _run(tmp_path, "scenario2", out, ["--seed", "5", "--policy", "random", "--slots", "8", "--runs", "1"]) == 0
    text = (out / "scenario2.csv").read_text().splitlines()
    assert text[0] == "window_end_slot,policy,p_unreliable"
    assert [l.split(",")[:2] for l in text[1:]] == [["4", "random"], ["8", "random"]]
    manifest = (out / "manifest.txt").read_text()
    assert re.search(r"^seed = 5$", manifest, re.M) and re.search(r"^n_slots = 8$", manifest, re.M)


def test_manifest_for_other_scenario_rejected(tmp_path):
    out = tmp_path / "s1"
    assert _run(tmp_path, "scenario1", out) == 0
    assert main(["scenario2", "--config", str(out / "manifest.txt"), "--out", str(tmp_path / "x")]) == 2


def test_config_error_exit_code(tmp_path, capsys):
    assert main(["scenario1", "--set", "eta1=-1", "--out", str(tmp_path)]) == 2
    assert "eta1" in capsys.readouterr().err


def test_runtime_error_exit_code(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("")
    assert main(["scenario1", "--out", str(blocker / "sub")] + sum((["--set", s] for s in SMALL), [])) == 3


def test_solve_subcommand(tmp_path, capsys):
    ch = tmp_path / "ch.txt"
    ch.write_text("g_ps = 0.05\ng_sp = 0.04\ng_ss = 0.1\ng_se = 0.001\ngrid = 19\n")
    assert main(["solve", str(ch)]) == 0
    out = dict(l.split(" = ") for l in capsys.readouterr().out.splitlines())
    assert out["leased"] == "True" and float(out["secrecy_rate"]) > 0
    ch.write_text("g_ps = 0.05\ng_sp = 0.04\n")
    assert main(["solve", str(ch)]) == 2


def test_selftest_subcommand(capsys):
    assert main(["selftest"]) == 0
    assert capsys.readouterr().out.count("PASS") == 5
