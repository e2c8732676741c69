import csv
import json

import pytest

from sublinexp.cli import main
from sublinexp.reports import csv_from_json

PAIR_SET = {
    "lattice": {"step": 1},
    "generators": [[[-1, 0.5], [1, 0.5]], [[-1, 0.25], [1, 0.75]]],
}


def write_config(tmp_path, name, payload):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return str(path)


def read_rows(tmp_path, name):
    with open(tmp_path / f"{name}.csv", newline="") as handle:
        return list(csv.DictReader(handle))


def run(tmp_path, cmd, payload, *extra):
    cfg = write_config(tmp_path, f"{cmd.replace('-', '_')}_cfg.json", payload)
    return main([cmd, *extra, "--config", cfg, "--out", str(tmp_path), "--quiet"])


class TestSubcommands:
    def test_eval(self, tmp_path):
        payload = dict(PAIR_SET, function={"kind": "identity"})
        assert run(tmp_path, "eval", payload) == 0
        (row,) = read_rows(tmp_path, "eval")
        assert float(row["upper"]) == 0.5 and float(row["lower"]) == 0.0

    def test_capacity(self, tmp_path):
        payload = dict(
            PAIR_SET, n=2, event={"kind": "FINAL_ABS_GE", "threshold": 2}, side="UPPER"
        )
        assert run(tmp_path, "capacity", payload) == 0
        (row,) = read_rows(tmp_path, "capacity")
        # adversary switches generator with the sign of the partial sum
        assert float(row["value"]) == 0.6875

    def test_lln_sweep(self, tmp_path):
        payload = dict(
            PAIR_SET,
            function={"kind": "tent", "params": {"center": 0.25, "halfwidth": 0.25}},
            horizons=[4, 8, 16],
        )
        assert run(tmp_path, "lln-sweep", payload) == 0
        rows = read_rows(tmp_path, "lln_sweep")
        assert [r["n"] for r in rows] == ["4", "8", "16"]
        errs = [float(r["abs_error"]) for r in rows]
        assert errs == sorted(errs, reverse=True)

    def test_conditions_with_set(self, tmp_path):
        payload = dict(PAIR_SET, n_max=4)
        assert run(tmp_path, "conditions", payload) == 0
        rows = read_rows(tmp_path, "conditions")
        assert [r["n"] for r in rows] == ["1", "2", "3", "4"]
        assert float(rows[-1]["nV_tail"]) == 0.0

    def test_conditions_with_family(self, tmp_path):
        payload = {"family": {"name": "HEAVY", "truncation": 32}, "n_max": 4}
        assert run(tmp_path, "conditions", payload) == 0
        rows = read_rows(tmp_path, "conditions")
        assert all(float(r["nV_tail"]) == 1.0 for r in rows)
        meta = json.loads((tmp_path / "conditions.json").read_text())["meta"]
        assert "violated" in meta["condition_i_trend"]

    def test_ottaviani(self, tmp_path):
        payload = dict(PAIR_SET, n=2, alpha=2.0, c=0.5)
        assert run(tmp_path, "ottaviani", payload) == 0
        (row,) = read_rows(tmp_path, "ottaviani")
        assert row["status"] in ("HOLDS", "VACUOUS")

    def test_product_identity(self, tmp_path):
        payload = dict(PAIR_SET, n=3, threshold=1.0)
        assert run(tmp_path, "product-identity", payload) == 0
        (row,) = read_rows(tmp_path, "product_identity")
        assert float(row["delta"]) <= 1e-9

    def test_chebyshev(self, tmp_path):
        payload = dict(PAIR_SET, n=2, eps=1.0)
        assert run(tmp_path, "chebyshev", payload) == 0
        (row,) = read_rows(tmp_path, "chebyshev")
        assert row["holds"] == "true"

    def test_counterexample_exm3(self, tmp_path):
        payload = {"K": 100, "lambdas": [10.0], "ms": [5, 10]}
        assert run(tmp_path, "counterexample", payload, "exm3") == 0
        (lam_row,) = read_rows(tmp_path, "exm3_excess")
        assert float(lam_row["lambda"]) == 10.0
        tail_rows = read_rows(tmp_path, "exm3_tail")
        assert [r["m"] for r in tail_rows] == ["5", "10"]

    def test_counterexample_heavy(self, tmp_path):
        assert run(tmp_path, "counterexample", {"K": 50, "n": 5}, "heavy") == 0
        (row,) = read_rows(tmp_path, "heavy")
        assert float(row["value"]) >= float(row["lower_bound"]) - 1e-12
        meta = json.loads((tmp_path / "heavy.json").read_text())["meta"]
        assert meta["maximal_distribution_value"] == 0.0

    def test_simulate_robust(self, tmp_path):
        payload = dict(
            PAIR_SET,
            function={"kind": "tent", "params": {"center": 0.25, "halfwidth": 0.25}},
            n=4,
            paths=5000,
            policy="robust",
        )
        assert run(tmp_path, "simulate", payload, "--seed", "3") == 0
        (row,) = read_rows(tmp_path, "simulate")
        est, err, exact = (float(row[k]) for k in ("estimate", "stderr", "policy_value"))
        assert abs(est - exact) <= max(4 * err, 1e-9)

    def test_simulate_constant_policy(self, tmp_path):
        payload = dict(
            PAIR_SET,
            function={"kind": "abs"},
            n=3,
            paths=1000,
            policy={"constant": 0},
            seed=11,
        )
        assert run(tmp_path, "simulate", payload) == 0

    def test_oracle(self, tmp_path):
        payload = dict(PAIR_SET, function={"kind": "abs"}, n=3)
        assert run(tmp_path, "oracle", payload) == 0
        (row,) = read_rows(tmp_path, "oracle")
        assert float(row["delta"]) <= 1e-9


class TestExitCodes:
    def test_validation_error_is_1(self, tmp_path, capsys):
        payload = {
            "lattice": {"step": 1},
            "generators": [[[0, 0.5]]],
            "function": {"kind": "abs"},
        }
        assert run(tmp_path, "eval", payload) == 1
        assert "WEIGHT_SUM" in capsys.readouterr().err

    def test_unknown_config_key_named(self, tmp_path, capsys):
        payload = dict(PAIR_SET, function={"kind": "abs"}, wrong_key=1)
        assert run(tmp_path, "eval", payload) == 1
        assert "wrong_key" in capsys.readouterr().err

    def test_missing_config_file(self, tmp_path, capsys):
        assert main(["eval", "--config", str(tmp_path / "nope.json"), "--quiet"]) == 1

    def test_budget_error_is_2(self, tmp_path, capsys):
        payload = dict(
            PAIR_SET,
            function={"kind": "abs"},
            n=8,
            budgets={"states": 4},
        )
        assert run(tmp_path, "oracle", payload) == 2
        assert "STATE_BUDGET_EXCEEDED" in capsys.readouterr().err

    def test_enumeration_budget_is_2(self, tmp_path, capsys):
        payload = dict(PAIR_SET, function={"kind": "abs"}, n=6, budgets={"enumeration": 3})
        assert run(tmp_path, "oracle", payload) == 2

    def test_family_and_generators_exclusive(self, tmp_path):
        payload = dict(PAIR_SET, family={"name": "HEAVY", "truncation": 5}, n_max=3)
        assert run(tmp_path, "conditions", payload) == 1


class TestReports:
    def test_json_mirror_round_trips_csv(self, tmp_path):
        payload = dict(PAIR_SET, function={"kind": "identity"})
        run(tmp_path, "eval", payload)
        csv_bytes = (tmp_path / "eval.csv").read_bytes()
        assert csv_from_json(tmp_path / "eval.json").encode() == csv_bytes

    def test_rerun_is_byte_identical(self, tmp_path):
        payload = dict(
            PAIR_SET,
            function={"kind": "tent", "params": {"center": 0.25, "halfwidth": 0.25}},
            horizons=[4, 8],
        )
        run(tmp_path, "lln-sweep", payload)
        first = (tmp_path / "lln_sweep.csv").read_bytes()
        run(tmp_path, "lln-sweep", payload)
        assert (tmp_path / "lln_sweep.csv").read_bytes() == first

    def test_no_temp_files_left_behind(self, tmp_path):
        run(tmp_path, "eval", dict(PAIR_SET, function={"kind": "identity"}))
        leftovers = [p for p in tmp_path.iterdir() if p.name.startswith(".eval")]
        assert leftovers == []
