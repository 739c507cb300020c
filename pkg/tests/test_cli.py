import csv
import json
import math
import os
import time
from fractions import Fraction

import pytest

import apps.sweeps as aw
import main
import mods.errors as me
import mods.inequalities as mi
import mods.modes as mm


@pytest.fixture
def empty_conf(tmp_path):
    path = tmp_path/"conf.json"
    path.write_text("{}", encoding="utf-8")
    return str(path)


def read_rows(directory, name):
    with open(os.path.join(directory, f"{name}.csv"), encoding="utf-8", newline="") as handle:
        return list(csv.DictReader(handle))


def read_bytes(directory, name):
    with open(os.path.join(directory, name), "rb") as handle:
        return handle.read()


# ----------------------------------------------------------------------------

def test_config_defaults_and_b_grid():
    config = aw.RunConfig.load(None, {"command": "trace"})
    assert config.b_grid(3) == [1.25, 1.5, 1.75, 2.0, 2.25, 2.5, 2.75]
    assert config.b_grid(2) == [1.25, 1.5, 1.75]
    assert config.tolerances["trace"] == aw.TOLERANCES["trace"]
    explicit = aw.RunConfig.load(None, {"command": "trace", "n_list": [3], "b_list": [2.0, 2.95, 1.0]})
    assert explicit.b_grid(3) == [2.0]


def test_config_normalises_values():
    config = aw.RunConfig.load(None, {"command": "exponents", "n_list": [4, 3, 3], "r_exp_list": ["inf", 2],
        "p": "5/2", "equation": "wave", "tolerances": {"trace": "1e-8"}})
    assert config.n_list == [3, 4]
    assert config.r_exp_list == [float("inf"), 2.0]
    assert config.p == Fraction(5, 2)
    assert config.equation == ["wave"]
    assert config.tolerances["trace"] == 1e-8


@pytest.mark.parametrize("overrides", [
    {"command": "plot"},
    {"format": "xml"},
    {"jobs": 0},
    {"k_list": [-1]},
    {"n_list": [1]},
    {"tolerances": {"bogus": 1.0}},
    {"p": "abc"},
    {"a_list": [0.0]},
    {"colour": "red"},
    {"command": "trace", "n_list": [2], "b_list": [1.95]},
])
def test_config_rejects_invalid_values(overrides):
    with pytest.raises(me.UsageError):
        aw.RunConfig.load(None, overrides)


def test_config_file_errors(tmp_path):
    with pytest.raises(me.UsageError):
        aw.RunConfig.load(str(tmp_path/"missing.json"))
    bad = tmp_path/"bad.json"
    bad.write_text("[1, 2]", encoding="utf-8")
    with pytest.raises(me.UsageError):
        aw.RunConfig.load(str(bad))


def test_status_policy():
    assert aw.status([]) == 0
    assert aw.status([{"error": "DomainError"}]) == 3
    assert aw.status([{"error": "ToleranceError"}, {"error": "BudgetError"}]) == 4
    assert aw.status([{"error": "KeyError"}]) == 4


# ----------------------------------------------------------------------------

def test_trace_command(tmp_path, empty_conf):
    out = str(tmp_path/"out")
    code = main.main(["trace", "--n", "3", "--b", "2.0", "--kmax", "20", "-o", out, "-c", empty_conf, "-l", "NONE"])
    assert code == 0
    rows = read_rows(out, "trace")
    assert len(rows) == 21
    for row in rows:
        assert float(row["c_closed"]) == pytest.approx(1.0/(2*int(row["k"]) + 1), rel=1e-12)
        assert row["passed"] == "true"
    manifest = json.loads(read_bytes(out, "manifest.json"))
    assert manifest["status"] == 0 and manifest["failures"] == []
    assert manifest["files"] == {"trace.csv": 21, "trace_bounds.csv": 1}


def test_exponents_command(tmp_path, empty_conf):
    out = str(tmp_path/"out")
    assert main.main(["exponents", "--wave", "--n", "3", "--p", "5/2", "-o", out, "-c", empty_conf, "-l", "NONE"]) == 0
    rows = {row["quantity"]: row for row in read_rows(out, "exponents")}
    assert float(rows["p_c"]["value"]) == pytest.approx(1.0 + 2.0**0.5)
    assert rows["p_conf"]["value"] == "3"
    assert rows["strauss_s2"]["value"] == "11/15"
    assert rows["strauss"]["holds"] == "true"
    assert not os.path.exists(os.path.join(out, "windows.csv"))


def test_empty_b_grid_is_a_usage_error(tmp_path, empty_conf):
    out = str(tmp_path/"out")
    assert main.main(["trace", "--n", "2", "--b", "1.95", "-o", out, "-c", empty_conf, "-l", "NONE"]) == 2
    assert not os.path.exists(out)


def test_failed_check_keeps_partial_results(tmp_path):
    conf = tmp_path/"strict.json"
    conf.write_text(json.dumps({"tolerances": {"stirling": 1e-9}}), encoding="utf-8")
    out = str(tmp_path/"out")
    code = main.main(["trace", "--n", "3", "--b", "2.0", "--kmax", "2", "-o", out, "-c", str(conf), "-l", "NONE"])
    assert code == 3
    manifest = json.loads(read_bytes(out, "manifest.json"))
    assert manifest["status"] == 3
    assert [failure["error"] for failure in manifest["failures"]] == ["ToleranceError"]
    assert len(read_rows(out, "trace")) == 3
    assert read_rows(out, "trace_bounds")[0]["passed"] == "false"


def test_reports_are_deterministic(tmp_path, empty_conf):
    outputs = []
    for name, jobs in (("first", "1"), ("second", "1"), ("parallel", "2")):
        out = str(tmp_path/name)
        arguments = ["trace", "--n", "2", "3", "--b", "1.5", "--kmax", "3", "-j", jobs, "-o", out, "-c", empty_conf, "-l", "NONE"]
        assert main.main(arguments) == 0
        outputs.append((read_bytes(out, "trace.csv"), read_bytes(out, "trace_bounds.csv"), read_bytes(out, "manifest.json")))
    assert outputs[0] == outputs[1] == outputs[2]


def test_json_format(tmp_path, empty_conf):
    out = str(tmp_path/"out")
    assert main.main(["trace", "--n", "3", "--b", "2.0", "--kmax", "1", "--format", "json", "-o", out, "-c", empty_conf, "-l", "NONE"]) == 0
    records = json.loads(read_bytes(out, "trace.json"))
    assert [record["k"] for record in records] == [0, 1]
    assert records[1]["c_closed"] == pytest.approx(1.0/3.0)
    assert records[0]["ck_scaled"] is None


# ----------------------------------------------------------------------------

def test_calculus_checks_pass():
    rows = aw.calculus_task(aw.TOLERANCES["exponents"], aw.TOLERANCES["interpolation"])["calculus"][1]
    assert {row["check"] for row in rows} == {"p_c", "s_c=s_sb", "s+s1", "nls_window", "interpolation"}
    assert all(row["passed"] for row in rows)


def test_window_scan_agrees_with_the_exact_window():
    assert aw.window_scan(3, "11/5")
    assert not aw.window_scan(7, "3/2")


@pytest.mark.slow
def test_divergence_command(tmp_path, empty_conf):
    out = str(tmp_path/"out")
    assert main.main(["divergence", "--n", "3", "--k", "0", "-o", out, "-c", empty_conf, "-l", "NONE"]) == 0
    statistics = {row["statistic"]: row for row in read_rows(out, "divergence_summary")}
    assert set(statistics) == {"log_slope", "decade_increment"}


# ----------------------------------------------------------------------------

@pytest.fixture
def records(tmp_path):
    f = mm.SpectralFunction(3, (mm.Component(mm.Mode(3, 0), mm.GaussianProfile()),
        mm.Component(mm.Mode(3, 2), mm.GaussianProfile(power=2, sigma=0.5))))
    path = tmp_path/"function.txt"
    path.write_text(mm.dumps_spectral(f), encoding="utf-8")
    return str(path)


def test_records_replace_the_dimension_and_degrees(tmp_path, empty_conf, records):
    config = aw.RunConfig.load(None, {"command": "trace", "function": records, "n_list": [2, 4]})
    assert config.n_list == [3]
    assert config.records.degrees == (0, 2)
    out = str(tmp_path/"out")
    code = main.main(["trace", "--n", "2", "--b", "2.0", "-f", records, "-o", out, "-c", empty_conf, "-l", "NONE"])
    assert code == 0
    rows = read_rows(out, "trace")
    assert [(row["n"], row["k"]) for row in rows] == [("3", "0"), ("3", "2")]
    assert float(rows[1]["c_closed"]) == pytest.approx(0.2, rel=1e-12)


def test_verify_all_ignores_records(records):
    config = aw.RunConfig.load(None, {"function": records})
    replaced = aw._replaced(config, "morawetz", aw.ACCEPTANCE["morawetz"])
    assert replaced.records is None and replaced.n_list == [2, 3]


def test_unreadable_records_are_a_usage_error(tmp_path, empty_conf):
    out = str(tmp_path/"out")
    assert main.main(["trace", "-f", str(tmp_path/"missing.txt"), "-o", out, "-c", empty_conf, "-l", "NONE"]) == 2
    bad = tmp_path/"bad.txt"
    bad.write_text("n=3\nk=0\nkind=sampled\n", encoding="utf-8")
    assert main.main(["trace", "-f", str(bad), "-o", out, "-c", empty_conf, "-l", "NONE"]) == 2
    assert not os.path.exists(out)


def test_sobolev_command_on_records(tmp_path, empty_conf, records):
    out = str(tmp_path/"out")
    code = main.main(["sobolev", "--b", "2.0", "-f", records, "-o", out, "-c", empty_conf, "-l", "NONE"])
    assert code == 0
    rows = read_rows(out, "sobolev")
    assert sorted(row["variant"] for row in rows) == ["dual", "l2-omega", "zonal-infty"]
    assert all(row["k"] == "0;2" and row["passed"] == "true" for row in rows)


def test_missed_cross_validation_fails_the_row(monkeypatch):
    report = mi.EstimateReport("morawetz", 3, 2.0, 1.0, "simulation", b=2.0, a=2.0, k=0,
        extras={"exact": math.pi, "relative_error": 0.27})

    def missed(*arguments, **keywords):
        raise me.ToleranceError("missed", report)

    monkeypatch.setattr(mi, "cross_validate_function", missed)
    row = aw.morawetz_task(3, 2.0, 2.0, 0, "gaussian", 5e-3, mi.HORIZON, 1.0)["morawetz"][1][0]
    assert row["passed"] is False
    assert row["exact"] == math.pi and row["relative_error"] == 0.27
    assert row["bracket_exact"] == pytest.approx(mi.morawetz_mode_ratio_exact(3, 2.0, 2.0, 0, "bracket-k"))
    outcome = aw.Outcome()
    outcome.check(("morawetz", 3, 2.0, 2.0, 0, "gaussian"), [row], "Morawetz check")
    assert aw.status(outcome.failures) == aw.EXIT_TOLERANCE


@pytest.mark.slow
def test_morawetz_command_on_records(tmp_path, empty_conf, records):
    out = str(tmp_path/"out")
    code = main.main(["morawetz", "--b", "2.0", "--a", "2", "-f", records, "-o", out, "-c", empty_conf, "-l", "NONE"])
    assert code == 0
    rows = read_rows(out, "morawetz")
    assert len(rows) == 1
    assert rows[0]["profile"] == "records" and rows[0]["k"] == "0;2"
    assert float(rows[0]["relative_error"]) <= aw.TOLERANCES["morawetz"]
    assert read_rows(out, "morawetz_profiles") == []


@pytest.mark.slow
def test_strict_morawetz_tolerance_exits_with_the_tolerance_status(tmp_path):
    conf = tmp_path/"strict.json"
    conf.write_text(json.dumps({"tolerances": {"morawetz": 1e-12}}), encoding="utf-8")
    out = str(tmp_path/"out")
    code = main.main(["morawetz", "--n", "3", "--b", "2.0", "--a", "2", "--k", "0", "-o", out, "-c", str(conf), "-l", "NONE"])
    assert code == aw.EXIT_TOLERANCE
    rows = read_rows(out, "morawetz")
    assert len(rows) == 2 and all(row["passed"] == "false" for row in rows)
    manifest = json.loads(read_bytes(out, "manifest.json"))
    assert {failure["error"] for failure in manifest["failures"]} == {"ToleranceError"}


@pytest.mark.slow
@pytest.mark.parametrize("command, budget", [("trace", 120.0), ("morawetz", 600.0)])
def test_acceptance_sweeps_fit_their_time_budget(tmp_path, command, budget):
    config = aw.RunConfig(command=command, output=str(tmp_path/command), logg="CRITICAL", **aw.ACCEPTANCE[command])
    config.validate()
    start = time.perf_counter()
    assert aw.run(config) == aw.EXIT_OK
    assert time.perf_counter() - start <= budget
