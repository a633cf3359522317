import csv
import io
from dataclasses import replace

import pytest

from beam_misalignment.cli import CliError, cmd_validate, fmt, main, parse_int_range, read_config, run
from beam_misalignment.sweep_timing import sweep_time_closed_form


def invoke(*argv):
    buf = io.StringIO()
    code = run(list(argv), out=buf)
    return code, buf.getvalue()


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_table1():
    code, text = invoke("table1")
    assert code == 0
    table = {(r["case"], r["pattern"]): (int(r["l_eff_dl"]), int(r["l_eff_dl_s"])) for r in rows(text)}
    assert len(table) == 6
    assert table[("D", "a")] == (52, 56)
    assert table[("D", "b")] == (50, 52)
    assert table[("G", "b")] == (64, 64)


def test_sweep_curve_case_f_ramp():
    code, text = invoke("sweep-curve", "--configs", "F/a/dl", "--n-req", "1:64")
    assert code == 0
    t = [float(r["t_sweep_ms"]) for r in rows(text)]
    assert len(t) == 64
    assert all(b > a for a, b in zip(t, t[1:]))
    assert t[-1] == pytest.approx(447 / 448, abs=1e-6)
    assert t[-1] <= 1.0


def test_sweep_curve_first_step_case_d():
    _, text = invoke("sweep-curve", "--configs", "D/a/dl", "--n-req", "1:60")
    sets = [int(r["n_sweep_sets"]) for r in rows(text)]
    assert sets.index(2) + 1 == 53


@pytest.mark.parametrize("argv", [("sweep-curve", "--n-req", "0"), ("sweep-curve", "--configs", "E/a/dl"), ("sweep-curve", "--configs", "D/a")])
def test_sweep_curve_rejects_bad_input(argv):
    with pytest.raises(CliError):
        invoke(*argv)


def test_fraction_curve_high_speed_saturates():
    _, text = invoke("fraction-curve", "--case", "D", "--pattern", "a", "--isd", "100", "--speed", "8", "--tau-ss", "20", "--nue", "4", "--values", "96")
    (row,) = rows(text)
    assert float(row["gamma_total"]) > 0.95
    assert row["valid"] == "false"


def test_duration_curve_non_decreasing():
    _, text = invoke("duration-curve", "--values", "1:128")
    g = [float(r["big_gamma_ms"]) for r in rows(text)]
    assert all(b >= a for a, b in zip(g, g[1:]))


def test_gain_curve_rises_from_one_beam():
    _, text = invoke("gain-curve", "--values", "1,2,4,8,16,32,64,128")
    gains = [float(r["e_gain"]) for r in rows(text)]
    assert gains[0] < max(gains)
    _, text_db = invoke("gain-curve", "--values", "1,2,4,8,16,32,64,128", "--db")
    db = [float(r["e_gain_db"]) for r in rows(text_db)]
    assert db[0] == pytest.approx(10 * __import__("math").log10(gains[0]), abs=1e-4)


def test_metric_curve_other_axis():
    _, text = invoke("gain-curve", "--axis", "speed", "--values", "1,2,4,8")
    gains = [float(r["e_gain"]) for r in rows(text)]
    assert gains == sorted(gains, reverse=True)
    with pytest.raises(CliError):
        invoke("gain-curve", "--axis", "nbs", "--values", "1.5")


def test_config_file_and_flag_precedence(tmp_path):
    cfg = tmp_path / "scenario.cfg"
    cfg.write_text("# defaults\ncase = F\nspeed = 8\nnbs = 32\naxis = nbs\nvalues = 32\n")
    _, from_file = invoke("gain-curve", "--config", str(cfg))
    _, explicit = invoke("gain-curve", "--case", "F", "--speed", "8", "--values", "32")
    assert from_file == explicit
    _, override = invoke("gain-curve", "--config", str(cfg), "--speed", "1")
    _, explicit_slow = invoke("gain-curve", "--case", "F", "--speed", "1", "--values", "32")
    assert override == explicit_slow
    bad = tmp_path / "bad.cfg"
    bad.write_text("warp = 9\n")
    with pytest.raises(CliError):
        read_config(bad)


def test_grid_dump():
    _, text = invoke("grid-dump", "--case", "D", "--pattern", "b", "--filter", "dl")
    recs = rows(text)
    ssb = [r for r in recs if r["record"] == "ssb"]
    seg = [r for r in recs if r["record"] == "segment"]
    assert len(ssb) == 50
    assert sum(int(r["capacity"]) for r in seg) == 50


def test_validate_passes():
    code, text = invoke("validate", "--n-req-max", "1")
    assert code == 0 and "PASS 12/12 checks" in text
    code, text = invoke("validate", "--n-req-max", "100")
    assert code == 0 and text.strip().endswith("PASS 1200/1200 checks")


def test_validate_locates_injected_fault():
    def off_by_one(req):
        t = sweep_time_closed_form(req)
        if req.n_ssb_req == 37:
            t = replace(t, sweep_symbols_r=t.sweep_symbols_r + 1)
        return t

    buf = io.StringIO()
    assert cmd_validate(40, buf, closed_form=off_by_one) == 1
    text = buf.getvalue()
    assert "first mismatch: D/a/dl n_req=37" in text
    assert "!= sweep_symbols_r" in text


def test_simulate_defaults_pass_and_repeat():
    code, first = invoke("simulate", "--seed", "42")
    _, second = invoke("simulate", "--seed", "42")
    assert code == 0 and first == second
    recs = rows(first)
    assert [r["metric"] for r in recs] == ["gamma_bs", "gamma_ue", "gamma_total", "big_gamma", "e_gain"]
    assert all(abs(float(r["z_score"])) <= 4 for r in recs)


def test_simulate_stationary():
    code, text = invoke("simulate", "--speed", "0", "--horizon", "10", "--replications", "3")
    assert code == 0
    for r in rows(text):
        if r["metric"] != "e_gain":
            assert float(r["analytic"]) == float(r["simulated"]) == 0


def test_simulate_gate_trips():
    code, _ = invoke("simulate", "--nbs", "48", "--horizon", "4000", "--replications", "10", "--z-max", "1")
    assert code == 1


def test_out_file(tmp_path):
    out = tmp_path / "t.csv"
    code, text = invoke("table1", "--out", str(out))
    assert code == 0 and text == ""
    assert out.read_text().startswith("case,scs_khz")


def test_main_exit_codes(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["sweep-curve", "--n-req", "0"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["validate", "--n-req-max", "2"])
    assert exc.value.code == 0


def test_helpers():
    assert parse_int_range("1:5,8,10:14:2") == [1, 2, 3, 4, 5, 8, 10, 12, 14]
    assert fmt(0.1234567891) == "0.123457"
    assert fmt(1e-7) == "1e-07"
    assert fmt(3) == "3" and fmt(True) == "true"
