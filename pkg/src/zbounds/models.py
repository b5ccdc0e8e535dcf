"""Factor-graph data model and exact inference by enumeration.

A model is a collection of finite-cardinality variables, nonnegative
potential tables attached to ordered variable scopes, and optional
per-variable node potentials.  The joint weight of an assignment is the
product of all node potentials and factor tables; the partition function
is the sum of that weight over every joint assignment.

Table layout convention, used everywhere in this package: tables are flat,
row-major, with the LAST scope variable fastest.  States are 0-based.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence, Union

import numpy as np

from .errors import EnumerationCapError, ModelError, UnnormalizableError

VarId = Union[int, str]

DEFAULT_ENUMERATION_CAP = 1 << 26

# Joint tensors above this size are never materialized; enumeration falls
# back to conditioning on leading variables.
_DENSE_BLOCK = 1 << 22


def _as_table_array(values) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1:
        arr = arr.ravel()
    if arr.size and (not np.all(np.isfinite(arr)) or np.any(arr < 0)):
        raise ModelError("potential entries must be finite and >= 0")
    arr = arr.copy()
    arr.setflags(write=False)
    return arr


class PotentialTable:
    """A flat nonnegative table over an ordered list of cardinalities.

    ``values[idx]`` holds the entry for the assignment obtained by writing
    ``idx`` in mixed radix over ``cards`` with the last variable fastest.
    """

    __slots__ = ("cards", "values")

    def __init__(self, cards: Sequence[int], values) -> None:
        cards = tuple(int(c) for c in cards)
        if any(c < 1 for c in cards):
            raise ModelError(f"cardinalities must be >= 1, got {cards}")
        vals = _as_table_array(values)
        expected = math.prod(cards)
        if vals.size != expected:
            raise ModelError(
                f"table has {vals.size} entries, expected {expected} for cards {cards}"
            )
        self.cards = cards
        self.values = vals

    def as_ndarray(self) -> np.ndarray:
        """The table reshaped to one axis per scope variable."""
        return self.values.reshape(self.cards)

    def restrict(self, position: int, state: int) -> "PotentialTable":
        """Fix the scope variable at ``position`` to ``state``."""
        arr = self.as_ndarray()
        sliced = np.take(arr, state, axis=position)
        rest = self.cards[:position] + self.cards[position + 1 :]
        return PotentialTable(rest, np.ascontiguousarray(sliced).ravel())

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PotentialTable)
            and self.cards == other.cards
            and np.array_equal(self.values, other.values)
        )

    def __repr__(self) -> str:
        return f"PotentialTable(cards={self.cards}, values={self.values.tolist()})"


@dataclass(frozen=True)
class Factor:
    id: VarId
    scope: tuple
    table: PotentialTable


# An assignment maps every variable id to a 0-based state index.
Assignment = Mapping


class FactorGraph:
    """Variables with finite cardinalities plus factors over ordered scopes.

    Node potentials are optional per-variable nonnegative vectors.  The
    instance is immutable after construction and safe to share.
    """

    def __init__(
        self,
        variables: Iterable[tuple],
        factors: Iterable = (),
        node_potentials: Mapping | None = None,
    ) -> None:
        var_list = []
        cards = {}
        for vid, card in variables:
            card = int(card)
            if card < 1:
                raise ModelError(f"variable {vid!r} has cardinality {card} < 1")
            if vid in cards:
                raise ModelError(f"duplicate variable id {vid!r}")
            cards[vid] = card
            var_list.append(vid)
        self._var_ids = tuple(var_list)
        self._cards = cards

        fac_list = []
        fac_ids = set()
        for k, fac in enumerate(factors):
            if not isinstance(fac, Factor):
                fid, scope, table = fac
                if fid is None:
                    fid = f"f{k}"
                if not isinstance(table, PotentialTable):
                    unknown = [v for v in scope if v not in cards]
                    if unknown:
                        raise ModelError(
                            f"factor {fid!r} references unknown variable {unknown[0]!r}"
                        )
                    table = PotentialTable([cards[v] for v in scope], table)
                fac = Factor(fid, tuple(scope), table)
            if fac.id in fac_ids:
                raise ModelError(f"duplicate factor id {fac.id!r}")
            fac_ids.add(fac.id)
            seen = set()
            for v in fac.scope:
                if v not in cards:
                    raise ModelError(f"factor {fac.id!r} references unknown variable {v!r}")
                if v in seen:
                    raise ModelError(f"factor {fac.id!r} repeats variable {v!r} in its scope")
                seen.add(v)
            expected = tuple(cards[v] for v in fac.scope)
            if fac.table.cards != expected:
                raise ModelError(
                    f"factor {fac.id!r} table cards {fac.table.cards} != scope cards {expected}"
                )
            fac_list.append(fac)
        self._factors = tuple(fac_list)

        pots = {}
        if node_potentials:
            for vid, vec in node_potentials.items():
                if vid not in cards:
                    raise ModelError(f"node potential for unknown variable {vid!r}")
                arr = _as_table_array(vec)
                if arr.size != cards[vid]:
                    raise ModelError(
                        f"node potential for {vid!r} has length {arr.size}, "
                        f"expected {cards[vid]}"
                    )
                pots[vid] = arr
        self._node_potentials = pots

        self._incidence = {v: [] for v in self._var_ids}
        for fac in self._factors:
            for pos, v in enumerate(fac.scope):
                self._incidence[v].append((fac.id, pos))

    @property
    def var_ids(self) -> tuple:
        return self._var_ids

    @property
    def factors(self) -> tuple:
        return self._factors

    @property
    def node_potentials(self) -> Mapping:
        return dict(self._node_potentials)

    def card(self, vid: VarId) -> int:
        return self._cards[vid]

    def node_potential(self, vid: VarId):
        return self._node_potentials.get(vid)

    def factor(self, fid) -> Factor:
        for fac in self._factors:
            if fac.id == fid:
                return fac
        raise KeyError(fid)

    def incidences(self, vid: VarId):
        """(factor id, scope position) pairs of every factor touching ``vid``."""
        return tuple(self._incidence[vid])

    @property
    def num_vars(self) -> int:
        return len(self._var_ids)

    @property
    def joint_size(self) -> int:
        """Number of joint assignments, as an exact Python int."""
        n = 1
        for v in self._var_ids:
            n *= self._cards[v]
        return n

    def __repr__(self) -> str:
        return (
            f"FactorGraph({self.num_vars} variables, {len(self._factors)} factors, "
            f"joint size {self.joint_size})"
        )


def evaluate(model: FactorGraph, x: Assignment) -> float:
    """Joint weight of one assignment: the product of all potentials.

    Returns 1.0 for a model with no factors and no node potentials.
    """
    if set(x.keys()) != set(model.var_ids):
        raise ModelError("assignment must cover every model variable exactly once")
    for v in model.var_ids:
        s = x[v]
        if not 0 <= s < model.card(v):
            raise ModelError(f"state {s} out of range for variable {v!r}")
    total = 1.0
    for v, pot in model.node_potentials.items():
        total *= pot[x[v]]
    for fac in model.factors:
        idx = 0
        for v in fac.scope:
            idx = idx * model.card(v) + x[v]
        total *= fac.table.values[idx]
    return total


def dense_joint(model: FactorGraph, limit: int = _DENSE_BLOCK) -> np.ndarray:
    """The full joint weight tensor, one axis per variable in model order."""
    if model.joint_size > limit:
        raise EnumerationCapError(
            f"joint space of {model.joint_size} states exceeds the dense limit {limit}"
        )
    axis = {v: k for k, v in enumerate(model.var_ids)}
    shape = tuple(model.card(v) for v in model.var_ids)
    w = np.ones(shape)
    n = len(shape)
    for v, pot in model.node_potentials.items():
        vec_shape = [1] * n
        vec_shape[axis[v]] = model.card(v)
        w = w * pot.reshape(vec_shape)
    for fac in model.factors:
        arr = fac.table.as_ndarray()
        positions = [axis[v] for v in fac.scope]
        order = np.argsort(positions)
        arr = arr.transpose(order)
        new_shape = [1] * n
        for p in sorted(positions):
            new_shape[p] = shape[p]
        w = w * arr.reshape(new_shape)
    return w


def condition(model: FactorGraph, vid: VarId, state: int) -> tuple:
    """Clamp one variable, returning ``(reduced model, scale)``.

    The scale collects the clamped node potential and any factor that lost
    its whole scope, so that Z(model) = sum_s scale_s * Z(reduced_s).
    """
    if vid not in model.var_ids:
        raise ModelError(f"unknown variable {vid!r}")
    if not 0 <= state < model.card(vid):
        raise ModelError(f"state {state} out of range for variable {vid!r}")
    scale = 1.0
    pots = {}
    for v, pot in model.node_potentials.items():
        if v == vid:
            scale *= pot[state]
        else:
            pots[v] = pot
    factors = []
    for fac in model.factors:
        if vid in fac.scope:
            pos = fac.scope.index(vid)
            table = fac.table.restrict(pos, state)
            scope = fac.scope[:pos] + fac.scope[pos + 1 :]
            if not scope:
                scale *= table.values[0]
            else:
                factors.append(Factor(fac.id, scope, table))
        else:
            factors.append(fac)
    variables = [(v, model.card(v)) for v in model.var_ids if v != vid]
    return FactorGraph(variables, factors, pots), scale


def exact_partition(model: FactorGraph, cap: int = DEFAULT_ENUMERATION_CAP) -> float:
    """Partition function by exhaustive enumeration.

    Summation is compensated (math.fsum) in a fixed deterministic order.
    Refuses models whose joint space exceeds ``cap``.
    """
    size = model.joint_size
    if size > cap:
        raise EnumerationCapError(
            f"joint space of {size} states exceeds the enumeration cap {cap}"
        )
    return _partition_recursive(model)


def _partition_recursive(model: FactorGraph) -> float:
    if model.joint_size <= _DENSE_BLOCK:
        w = dense_joint(model)
        return math.fsum(w.ravel())
    vid = model.var_ids[0]
    parts = []
    for s in range(model.card(vid)):
        sub, scale = condition(model, vid, s)
        parts.append(scale * _partition_recursive(sub))
    return math.fsum(parts)


@dataclass
class PseudoMarginals:
    """Node beliefs (one distribution per variable) and factor beliefs.

    Factor beliefs are stored as ndarrays shaped by their scope
    cardinalities, axes in scope order.
    """

    node: dict = field(default_factory=dict)
    factor: dict = field(default_factory=dict)

    def polytope_violation(self, model: FactorGraph) -> float:
        """Worst absolute violation of the local consistency constraints.

        Checks nonnegativity, node normalization, and, for every factor and
        every scope variable, agreement between the factor belief marginal
        and the node belief.
        """
        worst = 0.0
        for v in model.var_ids:
            tau = np.asarray(self.node[v], dtype=float)
            worst = max(worst, float(-tau.min(initial=0.0)))
            worst = max(worst, abs(float(tau.sum()) - 1.0))
        for fac in model.factors:
            tab = np.asarray(self.factor[fac.id], dtype=float)
            worst = max(worst, float(-tab.min(initial=0.0)))
            for pos, v in enumerate(fac.scope):
                axes = tuple(a for a in range(tab.ndim) if a != pos)
                marg = tab.sum(axis=axes)
                worst = max(worst, float(np.max(np.abs(marg - self.node[v]))))
        return worst


def exact_marginals(
    model: FactorGraph, cap: int = _DENSE_BLOCK
) -> PseudoMarginals:
    """True node and factor marginals by enumeration.

    The output satisfies the local-consistency constraints by construction.
    Raises UnnormalizableError when the partition function is zero.
    """
    if model.joint_size > cap:
        raise EnumerationCapError(
            f"joint space of {model.joint_size} states exceeds the marginals cap {cap}"
        )
    w = dense_joint(model)
    z = math.fsum(w.ravel())
    if z <= 0.0:
        raise UnnormalizableError("partition function is zero; marginals undefined")
    axis = {v: k for k, v in enumerate(model.var_ids)}
    n = len(model.var_ids)
    node = {}
    for v in model.var_ids:
        axes = tuple(a for a in range(n) if a != axis[v])
        node[v] = w.sum(axis=axes) / z
    factor = {}
    for fac in model.factors:
        positions = [axis[v] for v in fac.scope]
        other = tuple(a for a in range(n) if a not in positions)
        marg = w.sum(axis=other)
        # marg axes are in model order; permute into scope order.
        perm = np.argsort(np.argsort(positions))
        factor[fac.id] = marg.transpose(perm) / z
    return PseudoMarginals(node=node, factor=factor)
