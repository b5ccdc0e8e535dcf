"""Potts and random-cluster models on simple graphs.

The random-cluster weight of an edge subset A is q^{k(A)} prod_{e in A} p_e
with k(A) the number of connected components (isolated vertices included)
and p_e = e^{J_e} - 1; summed over all subsets it reproduces the Potts
partition function.  The external-field variant weights every component C
by sum_w exp(h_w |V(C)|) instead of q.

Edge subsets are plain integer bitmasks: bit j is edge j of the owning
graph's edge list.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .covers import CoverSpec, lifted_id
from .errors import EnumerationCapError, ModelError
from .lattice import sorted_stack
from .models import DEFAULT_ENUMERATION_CAP, Factor, FactorGraph, PotentialTable


class UnionFind:
    """Array-based union-find with union by size and path halving."""

    def __init__(self, n: int) -> None:
        self.parent = list(range(n))
        self.size = [1] * n
        self.count = n

    def find(self, x: int) -> int:
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        self.count -= 1
        return True


def _check_simple(n_vertices: int, edges: Sequence) -> tuple:
    seen = set()
    out = []
    for i, j in edges:
        i, j = int(i), int(j)
        if i == j:
            raise ModelError(f"self-loop at vertex {i}")
        if not (0 <= i < n_vertices and 0 <= j < n_vertices):
            raise ModelError(f"edge ({i},{j}) outside vertex range")
        key = (min(i, j), max(i, j))
        if key in seen:
            raise ModelError(f"duplicate edge {key}")
        seen.add(key)
        out.append((i, j))
    return tuple(out)


@dataclass
class PottsModel:
    """A q-state Potts model: per-edge couplings, optional uniform field.

    ``q`` may be any real >= 1 for the random-cluster side; the spin-space
    enumeration requires an integer.  The field, when present, is one
    length-q vector shared by every vertex.
    """

    n_vertices: int
    edges: tuple
    q: float
    coupling: np.ndarray
    field: np.ndarray | None = None

    def __init__(self, n_vertices, edges, q, coupling, field=None) -> None:
        if n_vertices < 0:
            raise ModelError("negative vertex count")
        self.n_vertices = int(n_vertices)
        self.edges = _check_simple(self.n_vertices, edges)
        if q < 1:
            raise ModelError(f"q must be >= 1, got {q}")
        self.q = float(q)
        self.coupling = np.asarray(coupling, dtype=float)
        if self.coupling.shape != (len(self.edges),):
            raise ModelError("need one coupling per edge")
        if field is not None:
            field = np.asarray(field, dtype=float)
            if float(q) != int(q) or field.shape != (int(q),):
                raise ModelError("field must be a length-q vector with integer q")
        self.field = field

    @property
    def ferromagnetic(self) -> bool:
        return bool(np.all(self.coupling > 0))

    @property
    def edge_probabilities(self) -> np.ndarray:
        """p_e = e^(J_e) - 1; requires J >= 0."""
        if np.any(self.coupling < 0):
            raise ModelError("antiferromagnetic edge: p = e^J - 1 would be negative")
        return np.expm1(self.coupling)


def count_components(n_vertices: int, edges: Sequence, mask: int) -> int:
    """Connected components of (V, A) for the edge subset encoded by mask."""
    uf = UnionFind(n_vertices)
    for idx, (i, j) in enumerate(edges):
        if (mask >> idx) & 1:
            uf.union(i, j)
    return uf.count


def potts_partition(model: PottsModel, cap: int = DEFAULT_ENUMERATION_CAP) -> float:
    """Sum the spin model over all q^n spin vectors (integer q only)."""
    if float(model.q) != int(model.q):
        raise ModelError("spin enumeration needs an integer q")
    q = int(model.q)
    n = model.n_vertices
    total = q**n
    if total > cap:
        raise EnumerationCapError(
            f"{total} spin configurations exceed the enumeration cap {cap}"
        )
    radix = q ** np.arange(n - 1, -1, -1, dtype=np.int64) if n else np.zeros(0, dtype=np.int64)
    parts = []
    chunk = 1 << 20
    ew = np.exp(model.coupling)
    fw = np.exp(model.field) if model.field is not None else None
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total), dtype=np.int64)
        sigma = (idx[:, None] // radix[None, :]) % q if n else np.zeros((idx.size, 0), int)
        w = np.ones(idx.size)
        if fw is not None:
            for k in range(n):
                w = w * fw[sigma[:, k]]
        for e, (i, j) in enumerate(model.edges):
            w = w * np.where(sigma[:, i] == sigma[:, j], ew[e], 1.0)
        parts.append(math.fsum(w))
    return math.fsum(parts)


def rc_weight(model: PottsModel, mask: int) -> float:
    """Random-cluster weight of one edge subset.

    Without a field: q^k(A) * prod p_e.  With a field h: every component C
    contributes sum_w exp(h_w * |V(C)|) in place of one factor of q.
    """
    p = model.edge_probabilities
    w = 1.0
    for idx in range(len(model.edges)):
        if (mask >> idx) & 1:
            w *= p[idx]
    if model.field is None:
        return w * model.q ** count_components(model.n_vertices, model.edges, mask)
    uf = UnionFind(model.n_vertices)
    for idx, (i, j) in enumerate(model.edges):
        if (mask >> idx) & 1:
            uf.union(i, j)
    for v in range(model.n_vertices):
        if uf.find(v) == v:
            w *= math.fsum(math.exp(h * uf.size[v]) for h in model.field)
    return w


def rc_partition(model: PottsModel, cap: int = DEFAULT_ENUMERATION_CAP) -> float:
    """Sum rc_weight over all 2^|E| edge subsets."""
    m = len(model.edges)
    if 2**m > cap:
        raise EnumerationCapError(f"2^{m} edge subsets exceed the enumeration cap {cap}")
    return math.fsum(rc_weight(model, mask) for mask in range(1 << m))


def potts_to_factor_graph(model: PottsModel) -> FactorGraph:
    """Pairwise factor-graph form: tables e^(J*delta), node potentials e^h."""
    if float(model.q) != int(model.q):
        raise ModelError("factor-graph form needs an integer q")
    q = int(model.q)
    variables = [(v, q) for v in range(model.n_vertices)]
    factors = []
    for e, (i, j) in enumerate(model.edges):
        table = np.exp(model.coupling[e] * np.eye(q)).ravel()
        factors.append(Factor(f"e{e}", (i, j), PotentialTable((q, q), table)))
    pots = None
    if model.field is not None:
        fw = np.exp(model.field)
        pots = {v: fw for v in range(model.n_vertices)}
    return FactorGraph(variables, factors, pots)


def cover_potts_model(base: PottsModel, spec: CoverSpec) -> tuple:
    """Lift a Potts model along a cover of its pairwise factor graph.

    Returns (cover PottsModel, lifted edge list as (edge index, layer) in
    enumeration order).  The spec must be built on potts_to_factor_graph
    of the base (factor ids ``e{k}`` matching base edge order).
    """
    m_total = spec.m
    vid = {}
    for v in range(base.n_vertices):
        for layer in range(m_total):
            vid[lifted_id(v, layer)] = len(vid)
    lifted_edges = []
    lifted_J = []
    labels = []
    for e, (i, j) in enumerate(base.edges):
        key_i = (f"e{e}", i)
        key_j = (f"e{e}", j)
        if key_i not in spec.perms or key_j not in spec.perms:
            raise ModelError(f"cover spec is missing incidences of edge e{e}")
        for layer in range(m_total):
            u = vid[lifted_id(i, spec.perms[key_i][layer])]
            w = vid[lifted_id(j, spec.perms[key_j][layer])]
            lifted_edges.append((u, w))
            lifted_J.append(base.coupling[e])
            labels.append((e, layer))
    cover = PottsModel(
        base.n_vertices * m_total,
        lifted_edges,
        base.q,
        np.array(lifted_J),
        base.field,
    )
    return cover, labels


@dataclass
class CoverComponentReport:
    """Both sides of the cover component-count inequality (and, with a
    field, the component-weight inequality) for one layered edge subset."""

    lhs_components: int
    rhs_components: int
    component_ok: bool
    lhs_weight: float | None = None
    rhs_weight: float | None = None
    weight_ok: bool | None = None

    @property
    def ok(self) -> bool:
        return self.component_ok and (self.weight_ok is not False)


def check_cover_component_inequality(
    base: PottsModel, spec: CoverSpec, layers: Sequence[int]
) -> CoverComponentReport:
    """Check k_H(A^1..A^M) <= sum_m k_G(A^[m]) on a cover of a Potts model.

    ``layers[m]`` is a bitmask over the base edges selecting the m-th copy
    of each edge.  With a field the random-cluster weight inequality
    f_rc+(H) <= prod_m f_rc+(G at the m-th sorted stack) is checked too.
    """
    m_total = spec.m
    if len(layers) != m_total:
        raise ModelError(f"need {m_total} layers, got {len(layers)}")
    n_e = len(base.edges)
    cover, labels = cover_potts_model(base, spec)
    cover_mask = 0
    for pos, (e, layer) in enumerate(labels):
        if (layers[layer] >> e) & 1:
            cover_mask |= 1 << pos
    lhs = count_components(cover.n_vertices, cover.edges, cover_mask)
    indicators = [
        np.array([(layers[m] >> e) & 1 for e in range(n_e)], dtype=np.uint8)
        for m in range(m_total)
    ]
    stacks = sorted_stack(indicators)
    stack_masks = [int(sum(int(b) << e for e, b in enumerate(s))) for s in stacks]
    rhs = sum(count_components(base.n_vertices, base.edges, sm) for sm in stack_masks)
    report = CoverComponentReport(
        lhs_components=lhs, rhs_components=rhs, component_ok=lhs <= rhs
    )
    if base.field is not None:
        lw = rc_weight(cover, cover_mask)
        rw = 1.0
        for sm in stack_masks:
            rw *= rc_weight(base, sm)
        report.lhs_weight = lw
        report.rhs_weight = rw
        report.weight_ok = lw <= rw * (1 + 1e-9) + 1e-300
    return report


# ---------------------------------------------------------------------------
# The external-field counterexample on the 3-cycle
# ---------------------------------------------------------------------------

# Conventions for the 3-state, 3-cycle counterexample model.  The pairwise
# product over "i != j" can mean one factor per unordered edge (coupling
# e^(2 delta)) or both ordered pairs (effective e^(4 delta)); the displayed
# field vectors (entries e^2 and e^-1, rotated so vertex k favours state k)
# can be the potential values themselves or exponents to apply exp to once
# more.  All four readings are built by the flags below.
COUNTEREXAMPLE_PAIR_MODES = ("unordered", "ordered")
COUNTEREXAMPLE_FIELD_MODES = ("direct", "exp")

# Reading frozen into the artifact; see build_counterexample's docstring.
COUNTEREXAMPLE_DEFAULT_PAIR_MODE = "unordered"
COUNTEREXAMPLE_DEFAULT_FIELD_MODE = "direct"

COUNTEREXAMPLE_TARGET_GAP = 973.046


def build_counterexample(
    pair_mode: str = COUNTEREXAMPLE_DEFAULT_PAIR_MODE,
    field_mode: str = COUNTEREXAMPLE_DEFAULT_FIELD_MODE,
) -> FactorGraph:
    """The q = 3 triangle with rotating external fields.

    Three 3-state variables on a 3-cycle; each edge carries e^(2 delta)
    ("unordered") or e^(4 delta) ("ordered"); vertex k's potential vector
    has e^2 in position k and e^-1 elsewhere ("direct"), or exp of those
    entries ("exp").
    """
    if pair_mode not in COUNTEREXAMPLE_PAIR_MODES:
        raise ModelError(f"unknown pair mode {pair_mode!r}")
    if field_mode not in COUNTEREXAMPLE_FIELD_MODES:
        raise ModelError(f"unknown field mode {field_mode!r}")
    strength = 2.0 if pair_mode == "unordered" else 4.0
    table = np.exp(strength * np.eye(3)).ravel()
    factors = [
        Factor(f"e{k}", scope, PotentialTable((3, 3), table))
        for k, scope in enumerate([(0, 1), (1, 2), (0, 2)])
    ]
    pots = {}
    for k in range(3):
        h = np.full(3, math.exp(-1))
        h[k] = math.exp(2)
        pots[k] = np.exp(h) if field_mode == "exp" else h
    return FactorGraph([(k, 3) for k in range(3)], factors, pots)
