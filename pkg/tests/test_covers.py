import numpy as np
import pytest

from zbounds.covers import (
    CoverSpec,
    bethe_estimate_via_covers,
    build_cover,
    cover_average_exhaustive,
    iter_cover_specs,
    sample_cover,
    validate_cover,
)
from zbounds.errors import ModelError
from zbounds.lattice import model_is_log_supermodular
from zbounds.models import FactorGraph, exact_partition
from zbounds.potts import count_components


def single_edge_model():
    return FactorGraph(
        [("a", 2), ("b", 2)],
        [("e", ("a", "b"), np.exp([0.3, 0.0, 0.0, 0.7]))],
        {"a": [1.0, 2.0], "b": [0.5, 1.0]},
    )


def double_edge_model():
    """Two parallel factors between a and b; 2-covers can braid into the
    four-cycle pattern."""
    return FactorGraph(
        [("a", 2), ("b", 2)],
        [
            ("e0", ("a", "b"), np.exp([0.2, 0.0, 0.0, 0.6])),
            ("e1", ("a", "b"), np.exp([0.0, 0.1, 0.4, 0.0])),
        ],
    )


class TestBuildCover:
    def test_one_cover_is_isomorphic(self):
        base = single_edge_model()
        spec = sample_cover(base, 1, seed=0)
        lifted = build_cover(spec)
        assert exact_partition(lifted.cover) == exact_partition(base)
        ok, diag = validate_cover(
            lifted.cover, base, lifted.var_copy_map, lifted.factor_copy_map
        )
        assert ok, diag

    def test_identity_perms_give_disjoint_union(self):
        base = single_edge_model()
        spec = CoverSpec(base, 2, {("e", "a"): (0, 1), ("e", "b"): (0, 1)})
        lifted = build_cover(spec)
        assert exact_partition(lifted.cover) == pytest.approx(
            exact_partition(base) ** 2, rel=1e-12
        )

    def test_swap_on_double_edge_gives_connected_cycle(self):
        # With two parallel factors, an identity lift on one and a swap on
        # the other wires a@0-b@0-a@1-b@1-a@0: one four-cycle, not two
        # disjoint copies.
        base = double_edge_model()
        spec = CoverSpec(
            base,
            2,
            {
                ("e0", "a"): (0, 1),
                ("e0", "b"): (0, 1),
                ("e1", "a"): (0, 1),
                ("e1", "b"): (1, 0),
            },
        )
        lifted = build_cover(spec)
        edges = []
        vid = {v: k for k, v in enumerate(lifted.cover.var_ids)}
        for fac in lifted.cover.factors:
            u, v = fac.scope
            edges.append((vid[u], vid[v]))
        assert count_components(4, edges, (1 << len(edges)) - 1) == 1
        ok, diag = validate_cover(
            lifted.cover, base, lifted.var_copy_map, lifted.factor_copy_map
        )
        assert ok, diag

    def test_layer_map_partitions_variables(self):
        base = single_edge_model()
        lifted = build_cover(sample_cover(base, 3, seed=1))
        for m in range(3):
            layer = [v for v, l in lifted.layer_map.items() if l == m]
            assert sorted(lifted.var_copy_map[v] for v in layer) == ["a", "b"]

    def test_malformed_permutation_rejected(self):
        base = single_edge_model()
        with pytest.raises(ModelError):
            CoverSpec(base, 2, {("e", "a"): (0, 0), ("e", "b"): (0, 1)})
        with pytest.raises(ModelError):
            CoverSpec(base, 2, {("e", "a"): (0, 1)})


class TestValidateCover:
    def test_disjoint_copies_validate(self):
        base = single_edge_model()
        spec = CoverSpec(base, 2, {("e", "a"): (0, 1), ("e", "b"): (0, 1)})
        lifted = build_cover(spec)
        ok, _ = validate_cover(
            lifted.cover, base, lifted.var_copy_map, lifted.factor_copy_map
        )
        assert ok

    def test_rewired_map_diagnosed(self):
        base = double_edge_model()
        lifted = build_cover(sample_cover(base, 2, seed=3))
        bad_map = dict(lifted.var_copy_map)
        bad_map["a@0"] = "b"
        ok, diag = validate_cover(
            lifted.cover, base, bad_map, lifted.factor_copy_map
        )
        assert not ok
        # the first violated node is the factor whose scope now covers the
        # wrong base variable
        assert "covers" in diag and "'a'" in diag

    def test_local_bijectivity_breakage_diagnosed(self):
        # Hand-build a non-cover: both copies of the factor attach to b@0.
        base = single_edge_model()
        candidate = FactorGraph(
            [("a@0", 2), ("a@1", 2), ("b@0", 2), ("b@1", 2)],
            [
                ("e@0", ("a@0", "b@0"), np.exp([0.3, 0.0, 0.0, 0.7])),
                ("e@1", ("a@1", "b@0"), np.exp([0.3, 0.0, 0.0, 0.7])),
            ],
            {
                "a@0": [1.0, 2.0], "a@1": [1.0, 2.0],
                "b@0": [0.5, 1.0], "b@1": [0.5, 1.0],
            },
        )
        var_map = {"a@0": "a", "a@1": "a", "b@0": "b", "b@1": "b"}
        factor_map = {"e@0": "e", "e@1": "e"}
        ok, diag = validate_cover(candidate, base, var_map, factor_map)
        assert not ok
        assert "b@" in diag


class TestSampleCover:
    def test_deterministic(self):
        base = single_edge_model()
        s1 = sample_cover(base, 3, seed=42)
        s2 = sample_cover(base, 3, seed=42)
        assert s1.perms == s2.perms

    def test_m1_trivial(self):
        base = single_edge_model()
        spec = sample_cover(base, 1, seed=0)
        assert all(p == (0,) for p in spec.perms.values())

    def test_topology_frequencies_match_enumeration(self):
        # 2-covers of a triangle are connected iff the edge voltages
        # multiply to the swap; exhaustive pinned enumeration gives 4/8.
        tri = FactorGraph(
            [(i, 2) for i in range(3)],
            [(f"e{k}", sc, np.ones(4)) for k, sc in enumerate([(0, 1), (1, 2), (0, 2)])],
        )

        def connected(spec):
            lifted = build_cover(spec)
            vid = {v: k for k, v in enumerate(lifted.cover.var_ids)}
            edges = [(vid[f.scope[0]], vid[f.scope[1]]) for f in lifted.cover.factors]
            return count_components(6, edges, (1 << 6) - 1) == 1

        exhaustive = [connected(s) for s in iter_cover_specs(tri, 2)]
        assert len(exhaustive) == 8
        assert sum(exhaustive) == 4
        sampled = [connected(sample_cover(tri, 2, seed=s)) for s in range(400)]
        freq = sum(sampled) / len(sampled)
        assert abs(freq - 0.5) < 0.08


class TestCoverEstimate:
    def test_m1_equals_z(self):
        base = single_edge_model()
        est = bethe_estimate_via_covers(base, 1, num_samples=5, seed=0)
        assert est.estimate == pytest.approx(exact_partition(base), rel=1e-14)

    def test_lsm_estimate_below_z(self):
        # every cover of a log-supermodular model obeys Z(H) <= Z(G)^M
        rng = np.random.default_rng(0)
        t = np.exp([0.4, 0.0, 0.0, 0.9])
        base = FactorGraph(
            [("a", 2), ("b", 2), ("c", 2)],
            [("e0", ("a", "b"), t), ("e1", ("b", "c"), t)],
            {"a": rng.uniform(0.5, 1.5, 2)},
        )
        assert all(r.ok for r in model_is_log_supermodular(base).values())
        z = exact_partition(base)
        for seed in range(50):
            est = bethe_estimate_via_covers(base, 2, num_samples=4, seed=seed)
            assert est.estimate <= z * (1 + 1e-9)

    def test_tree_exhaustive_matches_bethe(self):
        # Bethe is exact on trees, and every cover of a tree is a disjoint
        # union, so the exhaustive average must sit within 5% of Z.
        base = FactorGraph(
            [("a", 2), ("b", 3), ("c", 2)],
            [
                ("e0", ("a", "b"), np.exp(np.random.default_rng(1).uniform(-1, 1, 6))),
                ("e1", ("b", "c"), np.exp(np.random.default_rng(2).uniform(-1, 1, 6))),
            ],
        )
        from zbounds.bethe import maximize_bethe

        _tau, zb = maximize_bethe(base, restarts=8, seed=0)
        est = cover_average_exhaustive(base, 2)
        assert est.estimate == pytest.approx(zb, rel=0.05)
