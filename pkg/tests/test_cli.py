import json

import numpy as np
import pytest
from click.testing import CliRunner

from zbounds.cli import main
from zbounds.io import (
    canonical_digest,
    cover_spec_from_json,
    cover_spec_to_json,
    model_from_json,
    model_to_json,
)
from zbounds.covers import sample_cover
from zbounds.models import FactorGraph, exact_partition


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def single_var_file(tmp_path):
    doc = {
        "variables": [{"id": "x", "cardinality": 2}],
        "factors": [],
        "node_potentials": {"x": [1.0, 2.0]},
    }
    path = tmp_path / "single.json"
    path.write_text(json.dumps(doc))
    return str(path)


@pytest.fixture
def tree_file(tmp_path):
    rng = np.random.default_rng(0)
    doc = {
        "variables": [{"id": i, "cardinality": 2} for i in range(3)],
        "factors": [
            {"id": "f0", "scope": [0, 1], "table": list(np.exp(rng.uniform(-1, 1, 4)))},
            {"id": "f1", "scope": [1, 2], "table": list(np.exp(rng.uniform(-1, 1, 4)))},
        ],
    }
    path = tmp_path / "tree.json"
    path.write_text(json.dumps(doc))
    return str(path)


def last_record(output):
    for line in output.splitlines():
        if line.startswith("{"):
            return json.loads(line)
    raise AssertionError(f"no JSON record in output: {output!r}")


class TestRoundTrip:
    def test_model_json_roundtrip(self):
        rng = np.random.default_rng(1)
        m = FactorGraph(
            [(0, 2), ("y", 3)],
            [("f", (0, "y"), rng.uniform(0, 1, 6))],
            {0: [1.0, 2.0], "y": [1.0, 0.5, 2.0]},
        )
        again = model_from_json(model_to_json(m))
        assert exact_partition(again) == exact_partition(m)
        assert again.var_ids == m.var_ids
        assert canonical_digest(model_to_json(again)) == canonical_digest(model_to_json(m))

    def test_cover_spec_roundtrip(self):
        m = FactorGraph([(0, 2), (1, 2)], [("e", (0, 1), np.ones(4))])
        spec = sample_cover(m, 3, seed=5)
        again = cover_spec_from_json(cover_spec_to_json(spec))
        assert again.m == 3
        assert again.perms == spec.perms


class TestCommands:
    def test_z(self, runner, single_var_file):
        res = runner.invoke(main, ["z", "--model", single_var_file])
        assert res.exit_code == 0, res.output
        rec = last_record(res.output)
        assert rec["results"]["z"] == 3.0
        # default CSV row present
        assert any(line.startswith("z,") for line in res.output.splitlines())

    def test_z_malformed_json_exit_2(self, runner, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        res = runner.invoke(main, ["z", "--model", str(bad)])
        assert res.exit_code == 2

    def test_z_cap_exit_1(self, runner, tree_file):
        res = runner.invoke(main, ["z", "--model", tree_file, "--cap", "4"])
        assert res.exit_code == 1

    def test_bp_matches_z_on_tree(self, runner, tree_file):
        res_z = runner.invoke(main, ["z", "--model", tree_file])
        res_bp = runner.invoke(main, ["bp", "--model", tree_file])
        assert res_bp.exit_code == 0, res_bp.output
        z = last_record(res_z.output)["results"]["z"]
        rec = last_record(res_bp.output)["results"]
        assert rec["converged"]
        assert rec["z_bethe_at_fixed_point"] == pytest.approx(z, rel=1e-9)

    def test_z_bethe_and_meanfield_order(self, runner, tree_file):
        res_b = runner.invoke(
            main, ["z-bethe", "--model", tree_file, "--restarts", "8"]
        )
        res_m = runner.invoke(
            main, ["z-meanfield", "--model", tree_file, "--restarts", "4"]
        )
        assert res_b.exit_code == 0 and res_m.exit_code == 0
        zb = last_record(res_b.output)["results"]["z_bethe"]
        zmf = last_record(res_m.output)["results"]["z_mean_field"]
        assert zmf <= zb * (1 + 1e-9)

    def test_cover_sample_deterministic(self, runner, single_var_file, tree_file):
        out1 = runner.invoke(
            main, ["cover", "sample", "--model", tree_file, "--m", "2", "--seed", "1"]
        )
        out2 = runner.invoke(
            main, ["cover", "sample", "--model", tree_file, "--m", "2", "--seed", "1"]
        )
        assert out1.exit_code == 0
        assert out1.output == out2.output

    def test_cover_build_z(self, runner, tree_file, tmp_path):
        sampled = runner.invoke(
            main, ["cover", "sample", "--model", tree_file, "--m", "2", "--seed", "3"]
        )
        spec_path = tmp_path / "spec.json"
        spec_path.write_text(sampled.output)
        res = runner.invoke(main, ["cover", "build", "--spec", str(spec_path), "--z"])
        assert res.exit_code == 0, res.output
        rec = last_record(res.output)["results"]
        assert rec["valid"] is True
        assert rec["lifted_variables"] == 6
        # covers of trees are disjoint unions
        assert rec["z_lifted"] == pytest.approx(rec["z_base"] ** 2, rel=1e-9)

    def test_potts_rc_agree(self, runner, tmp_path):
        doc = {"n_vertices": 3, "edges": [[0, 1], [1, 2], [0, 2]], "q": 3, "J": 0.8}
        p = tmp_path / "g.json"
        p.write_text(json.dumps(doc))
        rp = runner.invoke(main, ["potts", "--graph", str(p)])
        rr = runner.invoke(main, ["rc", "--graph", str(p)])
        assert rp.exit_code == 0 and rr.exit_code == 0
        zp = last_record(rp.output)["results"]["z_potts"]
        zrc = last_record(rr.output)["results"]["z_rc"]
        assert zrc == pytest.approx(zp, rel=1e-9)

    def test_wef(self, runner, tmp_path):
        code = tmp_path / "rep3.txt"
        code.write_text("2 1 3\n1 1 1\n")
        res = runner.invoke(
            main, ["wef", "--code", str(code), "--lam", "0.5", "--restarts", "8"]
        )
        assert res.exit_code == 0, res.output
        rec = last_record(res.output)["results"]
        assert rec["exact"] == pytest.approx(1.125, rel=1e-12)
        assert rec["identity_value"] == pytest.approx(1.125, rel=1e-9)
        assert rec["bethe_bound"] <= rec["exact"] * (1 + 1e-6)

    def test_hom(self, runner, tmp_path):
        doc = {
            "n_vertices": 2,
            "edges": [[0, 1]],
            "w": [1, 1, 1],
            "a": [1, 1, 1],
            "b": [1, 1, 1],
        }
        p = tmp_path / "hom.json"
        p.write_text(json.dumps(doc))
        res = runner.invoke(main, ["hom", "--model", str(p)])
        assert res.exit_code == 0, res.output
        rec = last_record(res.output)["results"]
        assert rec["z_hom"] == pytest.approx(18.0)
        assert rec["z_edge"] == pytest.approx(18.0)

    def test_check_lsm_table(self, runner, tmp_path):
        good = tmp_path / "good.json"
        good.write_text(json.dumps(list(np.exp([0.0, 0.0, 0.0, 1.0]))))
        res = runner.invoke(main, ["check-lsm", "--table", str(good)])
        assert res.exit_code == 0
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps(list(np.exp([0.0, 0.0, 0.0, -1.0]))))
        res = runner.invoke(main, ["check-lsm", "--table", str(bad)])
        assert res.exit_code == 1

    def test_verify_appendix_a(self, runner):
        res = runner.invoke(
            main, ["verify", "appendix-a", "--trials", "10", "--seed", "7"]
        )
        assert res.exit_code == 0, res.output
        assert "10/10" in res.output

    def test_verify_unknown_tag(self, runner):
        res = runner.invoke(main, ["verify", "nope"])
        assert res.exit_code == 2

    def test_verify_jobs_deterministic(self, runner):
        r1 = runner.invoke(main, ["verify", "appendix-b", "--trials", "8", "--seed", "3"])
        r2 = runner.invoke(
            main, ["verify", "appendix-b", "--trials", "8", "--seed", "3", "--jobs", "4"]
        )
        rec1 = last_record(r1.output)["results"]
        rec2 = last_record(r2.output)["results"]
        assert rec1 == rec2

    def test_counterexample_reports_gap(self, runner):
        res = runner.invoke(
            main, ["counterexample", "--restarts", "8", "--seed", "0"]
        )
        assert res.exit_code == 0, res.output
        rec = last_record(res.output)["results"]
        assert rec["z"] == pytest.approx(2553.8353, rel=1e-4)
        assert "gap" in rec and "target_gap" in rec

    def test_counterexample_emit_model(self, runner):
        res = runner.invoke(main, ["counterexample", "--emit-model"])
        assert res.exit_code == 0
        doc = json.loads(res.output)
        m = model_from_json(doc)
        assert m.num_vars == 3

    def test_csv_rows_format(self, runner, single_var_file):
        res = runner.invoke(main, ["z", "--model", single_var_file])
        rows = [l for l in res.output.splitlines() if l.startswith("z,")]
        assert rows and rows[0].split(",")[2] == "z"
