"""M-covers of factor graphs: construction, validation, sampling.

A cover is encoded by one permutation of {0..M-1} per (factor, scope
variable) incidence: copy m of factor alpha is wired, in the position of
base variable i, to copy pi[alpha,i](m) of i.  This permutation-voltage
encoding generates exactly the M-covers of each connected component and
makes uniform sampling a matter of drawing independent permutations.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterator, Mapping

import numpy as np

from .errors import ModelError
from .models import Factor, FactorGraph, exact_partition


def lifted_id(base_id, layer: int) -> str:
    """Id of copy ``layer`` of a base node."""
    return f"{base_id}@{layer}"


@dataclass
class CoverSpec:
    """An M-cover encoded by per-incidence permutations.

    ``perms`` maps (factor id, variable id) to a length-M tuple that is a
    bijection on {0..M-1}; every incidence of the base model must appear.
    """

    base: FactorGraph
    m: int
    perms: Mapping

    def __post_init__(self) -> None:
        if self.m < 1:
            raise ModelError(f"cover degree must be >= 1, got {self.m}")
        want = {
            (fac.id, v) for fac in self.base.factors for v in fac.scope
        }
        have = set(self.perms.keys())
        if want != have:
            missing = want - have
            extra = have - want
            raise ModelError(
                f"permutations must cover each incidence exactly: "
                f"missing {sorted(map(str, missing))[:3]}, extra {sorted(map(str, extra))[:3]}"
            )
        for key, perm in self.perms.items():
            if sorted(perm) != list(range(self.m)):
                raise ModelError(f"permutation for incidence {key} is not a bijection")


@dataclass
class LiftedModel:
    """A built cover together with its covering maps.

    ``var_copy_map``/``factor_copy_map`` send lifted nodes to the base node
    they copy; ``layer_map`` sends each lifted variable to its copy index,
    which partitions the lifted variables into M layers each holding one
    copy of every base variable.
    """

    cover: FactorGraph
    var_copy_map: dict
    factor_copy_map: dict
    layer_map: dict


def build_cover(spec: CoverSpec) -> LiftedModel:
    """Materialize the lifted model described by a CoverSpec."""
    base = spec.base
    m_total = spec.m
    variables = []
    var_copy_map = {}
    layer_map = {}
    pots = {}
    base_pots = base.node_potentials
    for v in base.var_ids:
        for m in range(m_total):
            lv = lifted_id(v, m)
            variables.append((lv, base.card(v)))
            var_copy_map[lv] = v
            layer_map[lv] = m
            if v in base_pots:
                pots[lv] = base_pots[v]
    factors = []
    factor_copy_map = {}
    for fac in base.factors:
        for m in range(m_total):
            lf = lifted_id(fac.id, m)
            scope = tuple(
                lifted_id(v, spec.perms[(fac.id, v)][m]) for v in fac.scope
            )
            factors.append(Factor(lf, scope, fac.table))
            factor_copy_map[lf] = fac.id
    cover = FactorGraph(variables, factors, pots)
    return LiftedModel(
        cover=cover,
        var_copy_map=var_copy_map,
        factor_copy_map=factor_copy_map,
        layer_map=layer_map,
    )


def validate_cover(
    candidate: FactorGraph,
    base: FactorGraph,
    var_map: Mapping,
    factor_map: Mapping,
) -> tuple:
    """Check that (var_map, factor_map) is a locally bijective M-to-1 cover map.

    Returns (ok, diagnosis); the diagnosis names the first violated node.
    """
    for v in candidate.var_ids:
        if v not in var_map:
            return False, f"variable {v!r} has no image"
        if var_map[v] not in base.var_ids:
            return False, f"variable {v!r} maps to unknown base variable"
        if candidate.card(v) != base.card(var_map[v]):
            return False, f"variable {v!r} changes cardinality"
        cp = candidate.node_potential(v)
        bp = base.node_potential(var_map[v])
        if (cp is None) != (bp is None) or (
            cp is not None and not np.array_equal(cp, bp)
        ):
            return False, f"variable {v!r} changes its node potential"
    base_factor = {fac.id: fac for fac in base.factors}
    for fac in candidate.factors:
        if fac.id not in factor_map:
            return False, f"factor {fac.id!r} has no image"
        bid = factor_map[fac.id]
        if bid not in base_factor:
            return False, f"factor {fac.id!r} maps to unknown base factor"
        bfac = base_factor[bid]
        if len(fac.scope) != len(bfac.scope):
            return False, f"factor {fac.id!r} changes arity"
        for pos, v in enumerate(fac.scope):
            if var_map[v] != bfac.scope[pos]:
                return False, (
                    f"factor {fac.id!r} position {pos} covers "
                    f"{var_map[v]!r}, expected {bfac.scope[pos]!r}"
                )
        if fac.table != bfac.table:
            return False, f"factor {fac.id!r} changes its table"
    # Local bijectivity at variables: each base incidence (alpha, i) must be
    # hit exactly once around every copy of i.
    for v in candidate.var_ids:
        seen = {}
        for fid, _pos in candidate.incidences(v):
            key = factor_map[fid]
            seen[key] = seen.get(key, 0) + 1
        want = {}
        for fid, _pos in base.incidences(var_map[v]):
            want[fid] = want.get(fid, 0) + 1
        if seen != want:
            return False, f"variable {v!r} breaks local bijectivity"
    counts_v = {}
    for v in candidate.var_ids:
        counts_v[var_map[v]] = counts_v.get(var_map[v], 0) + 1
    counts_f = {}
    for fac in candidate.factors:
        counts_f[factor_map[fac.id]] = counts_f.get(factor_map[fac.id], 0) + 1
    fibers = set(counts_v.get(v, 0) for v in base.var_ids) | set(
        counts_f.get(fac.id, 0) for fac in base.factors
    )
    if len(fibers) != 1 or 0 in fibers:
        return False, "base nodes have unequal numbers of copies"
    return True, None


def sample_cover(base: FactorGraph, m: int, seed: int) -> CoverSpec:
    """Draw a uniform permutation assignment for every incidence.

    Deterministic given the seed.  Sampling is uniform over permutation
    assignments (labeled covers), which weights isomorphism classes by
    their labeled multiplicity; see the module notes in the README.
    """
    rng = np.random.default_rng(seed)
    perms = {}
    for fac in base.factors:
        for v in fac.scope:
            perms[(fac.id, v)] = tuple(int(x) for x in rng.permutation(m))
    return CoverSpec(base=base, m=m, perms=perms)


def iter_cover_specs(base: FactorGraph, m: int) -> Iterator[CoverSpec]:
    """Every permutation assignment, first incidence of each factor pinned.

    Pinning one incidence per factor to the identity drops relabelings of
    factor copies that produce the same lifted graph, keeping exhaustive
    enumeration small.
    """
    incidences = [(fac.id, v) for fac in base.factors for v in fac.scope]
    first_of = {}
    for fac in base.factors:
        if fac.scope:
            first_of[fac.id] = (fac.id, fac.scope[0])
    all_perms = list(itertools.permutations(range(m)))
    free = [inc for inc in incidences if first_of.get(inc[0]) != inc]
    for combo in itertools.product(all_perms, repeat=len(free)):
        perms = {inc: tuple(range(m)) for inc in incidences}
        for inc, perm in zip(free, combo):
            perms[inc] = perm
        yield CoverSpec(base=base, m=m, perms=perms)


@dataclass
class CoverEstimate:
    """An M-th-root-of-average-cover-Z statistic.

    This is a finite-M heuristic for the cover characterization of the
    Bethe partition function, not the M -> infinity limit; sampling is
    uniform over labeled permutation assignments.
    """

    m: int
    num_samples: int
    mean_z: float
    estimate: float
    variance: float
    exhaustive: bool = False
    note: str = field(
        default="finite-M heuristic over labeled permutation covers"
    )


def bethe_estimate_via_covers(
    base: FactorGraph,
    m: int,
    num_samples: int,
    seed: int,
    cap: int | None = None,
) -> CoverEstimate:
    """Estimate the M-th root of the average cover partition function."""
    if num_samples < 1:
        raise ModelError("need at least one sample")
    zs = []
    for k in range(num_samples):
        spec = sample_cover(base, m, seed + k)
        lifted = build_cover(spec)
        kwargs = {} if cap is None else {"cap": cap}
        zs.append(exact_partition(lifted.cover, **kwargs))
    mean = math.fsum(zs) / len(zs)
    var = math.fsum((z - mean) ** 2 for z in zs) / len(zs)
    return CoverEstimate(
        m=m,
        num_samples=num_samples,
        mean_z=mean,
        estimate=mean ** (1.0 / m),
        variance=var,
    )


def cover_average_exhaustive(
    base: FactorGraph, m: int, cap: int | None = None
) -> CoverEstimate:
    """Exact average of Z over all pinned permutation covers (small bases)."""
    zs = []
    for spec in iter_cover_specs(base, m):
        lifted = build_cover(spec)
        kwargs = {} if cap is None else {"cap": cap}
        zs.append(exact_partition(lifted.cover, **kwargs))
    mean = math.fsum(zs) / len(zs)
    var = math.fsum((z - mean) ** 2 for z in zs) / len(zs)
    return CoverEstimate(
        m=m,
        num_samples=len(zs),
        mean_z=mean,
        estimate=mean ** (1.0 / m),
        variance=var,
        exhaustive=True,
    )
