import json

import numpy as np
import pytest

from cointkit import report as R
from cointkit.cli import main
from cointkit.data import Dataset, derive, load
from cointkit.errors import DataError
from cointkit.series import AnnualSeries


@pytest.fixture
def synthetic_csv(tmp_path):
    g = np.random.default_rng(0)
    years = np.arange(1956, 2005)
    lf = 20000 * np.cumprod(1 + 0.007 + 0.004 * g.standard_normal(years.size))
    rate = np.r_[np.nan, np.diff(lf) / lf[:-1]]
    ue = 0.06 + 0.02 * g.standard_normal(years.size)
    gdpd = np.r_[[np.nan] * 4, 17 * rate[:-4] - 0.065] + 0.01 * g.standard_normal(years.size)
    cpi = gdpd + 0.005 * g.standard_normal(years.size)
    lines = ["year,GDPD,CPI,LF,UE"]
    for i, y in enumerate(years):
        cells = ["" if np.isnan(v) or (y < 1971 and k == 0) else repr(float(v))
                 for k, v in enumerate((gdpd[i], cpi[i], lf[i], ue[i]))]
        lines.append(",".join([str(y), *cells]))
    p = tmp_path / "synthetic.csv"
    p.write_text("\n".join(lines) + "\n")
    return p


def test_descstats_layout(france):
    t = R.cmd_descstats(france).tables["descriptive_stats"]
    assert t.columns[1:] == list(R.DESC_COLUMNS)
    assert [r[0] for r in t.rows] == ["span", "n", "mean", "stdev", "skewness", "kurtosis"]


def test_descstats_synthetic_same_layout(synthetic_csv):
    t = R.cmd_descstats(derive(load(synthetic_csv))).tables["descriptive_stats"]
    assert t.columns[1:] == list(R.DESC_COLUMNS)


def test_descstats_empty():
    with pytest.raises(DataError):
        R.cmd_descstats(Dataset({}))


def test_unitroot_tables(france):
    b = R.cmd_unitroot(france)
    lv, df = b.tables["unit_root_levels"], b.tables["unit_root_differences"]
    assert len(lv.rows) == 4 * 4
    assert len(df.rows) == 4 * 2 * 8
    assert {r[2] for r in df.rows} == {"trend", "constant"}
    assert len(lv.operations) == len(lv.rows)


def test_unitroot_short_series_partial():
    ds = Dataset({"GDPD": AnnualSeries("GDPD", 2000, np.random.default_rng(1).standard_normal(11))})
    b = R.cmd_unitroot(ds)
    rows = b.tables["unit_root_levels"].rows
    assert any(r[5] is None for r in rows) and any(r[5] is not None for r in rows)
    assert b.warnings


def test_engle_granger_tables(france):
    rel = R.relations(R.default_config(), ["trivariate"])[0]
    b = R.cmd_engle_granger(france, rel)
    assert {r[0] for r in b.tables["eg_residuals_trivariate"].rows} == {"diff1", "diff2", "diff3", "diff4"}
    assert [r[0] for r in b.tables["spec_tests_trivariate"].rows] == \
        ["UE+dLF/LF", "predicted", "MA(2)", "MA(3)", "MA(4)"]


def test_engle_granger_degenerate(tmp_path):
    years = np.arange(1950, 2000)
    lf = 100 * np.cumprod(1 + 0.01 + 0.003 * np.sin(years * 1.7))
    rate = np.diff(lf) / lf[:-1]
    gdpd = 17 * rate[:-4] - 0.065
    ds = derive(Dataset({"LF": AnnualSeries("LF", 1950, lf, "level"),
                         "GDPD": AnnualSeries("GDPD", 1955, gdpd)}))
    rel = R.Relation.from_dict("x", {"target": "GDPD", "window": [1960, 1999],
                                     "coefficients": {"a1": 17, "a2": -0.065, "t1": 4}})
    rows = R.cmd_engle_granger(ds, rel).tables["spec_tests_x"].rows
    assert rows[0][-1] == "degenerate"


def test_johansen_grid(france):
    rel = R.relations(R.default_config(), ["trivariate"])[0]
    t = R.cmd_johansen(france, rel).tables["johansen_trivariate"]
    assert len(t.rows) == 3 * 3 * 4
    assert {r[1] for r in t.rows} == {"constant", "rconstant", "none"}


def test_vecm_rows(france):
    rel = R.relations(R.default_config(), ["ue"])[0]
    t = R.cmd_vecm(france, rel).tables["vecm_ue"]
    assert [r[1] for r in t.rows] == [1, 2, 3, 4]
    with pytest.raises(DataError):
        R.cmd_vecm(france, rel, ranks=[2])


def test_cumfit_rows_and_figures(france):
    rel = R.relations(R.default_config(), ["trivariate"])[0]
    b = R.cmd_cumfit(france, rel)
    rows = b.tables["integral_comparison_trivariate"].rows
    assert [r[0] for r in rows][:3] == ["Cumulative", "Cumulative (a0=-1)", "Relation"]
    assert "trivariate/residual_cumulative" in b.figures
    assert "trivariate/measured_cumulative" in b.figures


def test_cumfit_noiseless_synthetic():
    g = np.random.default_rng(3)
    lf = 100 * np.cumprod(1 + 0.007 + 0.004 * g.standard_normal(50))
    rate = np.diff(lf) / lf[:-1]
    gdpd = 17 * rate[:-4] - 0.065
    ds = derive(Dataset({"LF": AnnualSeries("LF", 1950, lf, "level"),
                         "GDPD": AnnualSeries("GDPD", 1955, gdpd)}))
    rel = R.Relation.from_dict("syn", {"target": "GDPD", "window": [1960, 1999],
                                       "coefficients": {"a1": 17, "a2": -0.065, "t1": 4}})
    rows = R.cmd_cumfit(ds, rel).tables["integral_comparison_syn"].rows
    by = {r[0]: r for r in rows}
    assert by["Cumulative"][5] < 1e-6 and by["Cumulative"][7] < 1e-6
    assert by["Relation"][7] < 1e-12


def test_cumfit_unavailable_vecm_rows():
    g = np.random.default_rng(4)
    lf = 100 * np.cumprod(1 + 0.007 + 0.004 * g.standard_normal(30))
    rate = np.diff(lf) / lf[:-1]
    gdpd = 17 * rate[:-4] - 0.065 + 0.01 * g.standard_normal(25)
    ds = derive(Dataset({"LF": AnnualSeries("LF", 1950, lf, "level"),
                         "GDPD": AnnualSeries("GDPD", 1955, gdpd)}))
    rel = R.Relation.from_dict("short", {"target": "GDPD", "window": [1971, 1979],
                                         "coefficients": {"a1": 17, "a2": -0.065, "t1": 4}})
    b = R.cmd_cumfit(ds, rel)
    rows = {r[0]: r for r in b.tables["integral_comparison_short"].rows}
    assert rows["VECM lag 4"][-1] == "unavailable"
    assert b.warnings


def test_config_validation(tmp_path):
    with pytest.raises(DataError):
        R.Relation.from_dict("x", {"window": [1970, 1980]})
    with pytest.raises(DataError):
        R.Relation.from_dict("x", {"target": "GDPD", "window": [1980, 1970]})
    with pytest.raises(DataError):
        R.relations(R.default_config(), ["nope"])
    bad = tmp_path / "c.json"
    bad.write_text("{not json")
    with pytest.raises(DataError):
        R.load_config(bad)


def test_last_digit_unit():
    assert R.last_digit_unit("5.3E-2") == pytest.approx(1e-3)
    assert R.last_digit_unit("-1.2E+1") == pytest.approx(1.0)
    assert R.last_digit_unit("0.157") == pytest.approx(1e-3)


# ---------------------------------------------------------------- command line

def test_cli_stdout(capsys):
    assert main(["descstats"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("# descriptive_stats")
    assert "\tGDPD\tCPI\t" in out


def test_cli_structured_out(tmp_path):
    assert main(["vecm", "--preset", "ue", "--format", "structured", "--out", str(tmp_path)]) == 0
    doc = json.loads((tmp_path / "tables" / "vecm_ue.json").read_text())
    assert doc["columns"][0] == "rank" and len(doc["rows"]) == 4
    meta = json.loads((tmp_path / "metadata.json").read_text())
    assert meta["seed"] == 0 and len(meta["config_sha256"]) == 64
    assert meta["tables"]["vecm_ue"]["operations"][0]["op"] == "vecm_estimate"
    assert "reconstruct" in meta["dataset"]["provenance"].lower()


def test_cli_exit_codes(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("year,UE\n2000,0.1\n2001,\n2002,0.1\n")
    assert main(["descstats", "--data", str(bad)]) == 1
    assert main(["vecm", "--preset", "ue", "--rank", "2"]) == 1
    assert main(["johansen", "--preset", "nope"]) == 1
    assert "input error" in capsys.readouterr().err


def test_cli_numerical_failure_exit_code(tmp_path):
    p = tmp_path / "flat.csv"
    rows = ["year,GDPD"] + [f"{y},0.05" for y in range(1960, 2000)]
    p.write_text("\n".join(rows) + "\n")
    assert main(["unitroot", "--data", str(p)]) == 2


def test_cli_config_override(tmp_path):
    cfg = tmp_path / "rel.json"
    cfg.write_text(json.dumps({"mine": {"target": "CPI", "window": [1970, 2000],
                                        "coefficients": {"a1": 15, "a2": -0.05, "t1": 4}}}))
    assert main(["cumfit", "--config", str(cfg), "--preset", "mine", "--out", str(tmp_path / "o")]) == 0
    assert (tmp_path / "o" / "tables" / "integral_comparison_mine.tsv").exists()
    assert (tmp_path / "o" / "figures" / "mine" / "measured_cumulative.tsv").read_text().startswith("year\tvalue\n")


def test_cli_calibrate(capsys):
    assert main(["calibrate", "jarque_bera", "--reps", "500", "--seed", "3"]) == 0
    assert "jarque_bera\t500" in capsys.readouterr().out


def test_cli_percent_input(tmp_path, synthetic_csv):
    text = synthetic_csv.read_text().splitlines()
    scaled = [text[0]]
    for line in text[1:]:
        c = line.split(",")
        c = [c[0]] + [("" if v == "" else repr(float(v) * 100)) for v in c[1:3]] + [c[3]] + \
            [("" if c[4] == "" else repr(float(c[4]) * 100))]
        scaled.append(",".join(c))
    p = tmp_path / "pct.csv"
    p.write_text("\n".join(scaled) + "\n")
    assert main(["descstats", "--data", str(p)]) == 1
    assert main(["descstats", "--data", str(p), "--percent-input"]) == 0


def test_report_all_byte_identical(tmp_path, synthetic_csv):
    for d in ("a", "b"):
        assert main(["report-all", "--data", str(synthetic_csv), "--seed", "5",
                     "--out", str(tmp_path / d)]) == 0
    files_a = sorted(p.relative_to(tmp_path / "a") for p in (tmp_path / "a").rglob("*") if p.is_file())
    files_b = sorted(p.relative_to(tmp_path / "b") for p in (tmp_path / "b").rglob("*") if p.is_file())
    assert files_a == files_b and len(files_a) > 50
    for f in files_a:
        assert (tmp_path / "a" / f).read_bytes() == (tmp_path / "b" / f).read_bytes()
