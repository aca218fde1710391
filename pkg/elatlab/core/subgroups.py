"""Subgroup lattices: enumeration, cores, meets and joins, group-class predicates."""
import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple

import numpy as np
from sympy.ntheory import factorint

from elatlab.config.settings import settings
from elatlab.core.exceptions import LatticeConsistencyError, OrderBoundError, SubgroupError
from elatlab.core.perm_group import FiniteGroup, is_normal_members

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Subgroup:
    parent: FiniteGroup = field(repr=False, compare=False)
    members: FrozenSet[int]
    id: int

    @property
    def order(self) -> int:
        return len(self.members)

    def __contains__(self, x: int) -> bool:
        return x in self.members


@dataclass(frozen=True, eq=False)
class SubgroupLattice:
    """All subgroups of a group, ordered by (order, sorted members).

    ``leq[i, j]`` holds when subgroup i is contained in subgroup j.
    """

    group: FiniteGroup
    subgroups: Tuple[Subgroup, ...]
    leq: np.ndarray = field(repr=False)
    normal_ids: Tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.subgroups)

    @cached_property
    def index(self) -> Dict[FrozenSet[int], int]:
        return {h.members: h.id for h in self.subgroups}

    @property
    def trivial(self) -> Subgroup:
        return self.subgroups[0]

    @property
    def whole(self) -> Subgroup:
        return self.subgroups[-1]

    @cached_property
    def normal_set(self) -> FrozenSet[int]:
        return frozenset(self.normal_ids)

    @property
    def normal_subgroups(self) -> List[Subgroup]:
        return [self.subgroups[i] for i in self.normal_ids]

    def is_normal(self, h: Subgroup) -> bool:
        return self.check(h).id in self.normal_set

    def check(self, h: Subgroup) -> Subgroup:
        """Return h if it belongs to this lattice, else raise SubgroupError."""
        if h.parent is not self.group or self.index.get(h.members) != h.id:
            raise SubgroupError(f"Subgroup {h.id} does not belong to the lattice of {self.group.label}")
        return h

    def by_members(self, members: Iterable[int]) -> Subgroup:
        members = frozenset(members)
        i = self.index.get(members)
        if i is None:
            raise SubgroupError(f"Not a subgroup of {self.group.label}: {sorted(members)}")
        return self.subgroups[i]

    @cached_property
    def sizes(self) -> np.ndarray:
        return np.array([h.order for h in self.subgroups], dtype=np.int64)

    @cached_property
    def conjugation(self) -> np.ndarray:
        """conjugation[y, x] is the index of x⁻¹·y·x."""
        g = self.group
        n = g.order
        inv = np.asarray(g.inverse)
        left = g.cayley[inv[None, :], np.arange(n)[:, None]]
        return g.cayley[left, np.arange(n)[None, :]]

    @cached_property
    def cores(self) -> Tuple[int, ...]:
        return tuple(_core_id(self, h) for h in self.subgroups)

    @cached_property
    def covers(self) -> Tuple[Tuple[int, int], ...]:
        """Hasse diagram edges (i, j): i < j with nothing strictly between."""
        strict = self.leq & ~np.eye(self.size, dtype=bool)
        between = (strict.astype(np.int64) @ strict.astype(np.int64)) > 0
        return tuple((int(i), int(j)) for i, j in np.argwhere(strict & ~between))

    def upper_bounds(self, a: int, b: int) -> np.ndarray:
        return np.flatnonzero(self.leq[a] & self.leq[b])

    def lower_bounds(self, a: int, b: int) -> np.ndarray:
        return np.flatnonzero(self.leq[:, a] & self.leq[:, b])


@dataclass(frozen=True)
class GroupPredicates:
    abelian: bool
    dedekind: bool
    hamiltonian: bool
    simple: bool
    primary: bool
    nilpotent: bool
    satisfies_star: bool


@dataclass(frozen=True)
class FrattiniDerived:
    maximal: Tuple[Subgroup, ...]
    frattini: Subgroup
    derived: Subgroup


def all_subgroups(g: FiniteGroup, max_order: Optional[int] = None) -> SubgroupLattice:
    """Enumerate every subgroup: cyclic subgroups first, then joins with cyclics to a fixpoint."""
    limit = settings.bound('max_order', max_order)
    if g.order > limit:
        raise OrderBoundError(f"group too large: subgroup enumeration of {g.label} needs order <= {limit}, got {g.order}")

    cyclics: Dict[FrozenSet[int], int] = {}
    for x in range(g.order):
        cyclics.setdefault(g.cyclic(x), x)
    found: Dict[FrozenSet[int], Tuple[int, ...]] = {c: (x,) for c, x in cyclics.items()}
    frontier = list(found)
    rounds = 0
    while frontier:
        rounds += 1
        fresh = []
        for h in frontier:
            for c, x in cyclics.items():
                if c <= h:
                    continue
                gens = found[h] + (x,)
                joined = g.closure(gens)
                if joined not in found:
                    found[joined] = gens
                    fresh.append(joined)
        frontier = fresh

    ordered = sorted(found, key=lambda m: (len(m), sorted(m)))
    subgroups = tuple(Subgroup(parent=g, members=m, id=i) for i, m in enumerate(ordered))
    membership = np.zeros((len(subgroups), g.order), dtype=np.int64)
    for h in subgroups:
        membership[h.id, list(h.members)] = 1
    overlap = membership @ membership.T
    leq = overlap == membership.sum(axis=1)[:, None]
    leq.setflags(write=False)
    normal_ids = tuple(h.id for h in subgroups if is_normal_members(g, h.members))
    logger.info(f"{g.label}: {len(subgroups)} subgroups, {len(normal_ids)} normal ({rounds} join rounds)")
    return SubgroupLattice(group=g, subgroups=subgroups, leq=leq, normal_ids=normal_ids)


def _core_id(lat: SubgroupLattice, h: Subgroup) -> int:
    inside = np.zeros(lat.group.order, dtype=bool)
    inside[list(h.members)] = True
    stable = inside & inside[lat.conjugation].all(axis=1)
    return lat.by_members(np.flatnonzero(stable).tolist()).id


def core(lat: SubgroupLattice, h: Subgroup) -> Subgroup:
    """The intersection of all conjugates of h, i.e. the largest normal subgroup inside h."""
    lat.check(h)
    return lat.subgroups[lat.cores[h.id]]


def set_product(g: FiniteGroup, a: Subgroup, b: Subgroup) -> FrozenSet[int]:
    table = g.cayley[np.ix_(sorted(a.members), sorted(b.members))]
    return frozenset(int(x) for x in np.unique(table))


def meet_join(lat: SubgroupLattice, a: Subgroup, b: Subgroup) -> Tuple[Subgroup, Subgroup]:
    """Return (a ∩ b, ⟨a ∪ b⟩).

    For two normal arguments the set product a·b must coincide with the join.
    """
    lat.check(a)
    lat.check(b)
    meet = lat.by_members(a.members & b.members)
    join = lat.subgroups[int(lat.upper_bounds(a.id, b.id)[0])]
    if a.id in lat.normal_set and b.id in lat.normal_set:
        product = set_product(lat.group, a, b)
        if product != join.members:
            raise LatticeConsistencyError(
                f"Set product of normal subgroups {a.id} and {b.id} of {lat.group.label} is not their join"
            )
    return meet, join


def frattini_derived(lat: SubgroupLattice) -> FrattiniDerived:
    g = lat.group
    whole = lat.whole.id
    # Maximal subgroups have exactly two upper bounds: themselves and the whole group.
    maximal = tuple(
        h for h in lat.subgroups if h.id != whole and int(lat.leq[h.id].sum()) == 2
    )
    members = frozenset(range(g.order))
    for m in maximal:
        members &= m.members
    frattini = lat.by_members(members)

    inv = np.asarray(g.inverse)
    commutators = g.cayley[g.cayley[inv[:, None], inv[None, :]], g.cayley]
    derived = lat.by_members(g.closure(sorted(set(commutators.ravel().tolist()))))
    return FrattiniDerived(maximal=maximal, frattini=frattini, derived=derived)


def prime_power_base(n: int) -> Optional[int]:
    """The prime p with n = p^k (k ≥ 1); None when n is not a nontrivial prime power."""
    factors = factorint(n)
    return next(iter(factors)) if len(factors) == 1 else None


def is_primary_order(n: int) -> bool:
    return n == 1 or prime_power_base(n) is not None


def group_predicates(lat: SubgroupLattice) -> GroupPredicates:
    """Group-class flags read off the subgroup lattice.

    Condition (*) is evaluated through the correspondence theorem: G/N is
    hamiltonian iff every subgroup above N is normal and D(G) is not inside N.
    """
    g = lat.group
    dedekind = len(lat.normal_ids) == lat.size
    fd = frattini_derived(lat)
    nilpotent = all(lat.is_normal(m) for m in fd.maximal)

    satisfies_star = True
    for n_id in lat.normal_ids:
        above = np.flatnonzero(lat.leq[n_id])
        quotient_dedekind = all(int(k) in lat.normal_set for k in above)
        quotient_abelian = bool(lat.leq[fd.derived.id, n_id])
        if quotient_dedekind and not quotient_abelian:
            if not is_primary_order(g.order // lat.subgroups[n_id].order):
                satisfies_star = False
                break

    return GroupPredicates(
        abelian=g.is_abelian,
        dedekind=dedekind,
        hamiltonian=dedekind and not g.is_abelian,
        simple=len(lat.normal_ids) == 2,
        primary=is_primary_order(g.order),
        nilpotent=nilpotent,
        satisfies_star=satisfies_star,
    )


def nilpotent_by_sylow(lat: SubgroupLattice) -> bool:
    """Nilpotency via "every Sylow subgroup is normal" (unique per prime)."""
    for p, k in factorint(lat.group.order).items():
        sylows = [h for h in lat.subgroups if h.order == p ** k]
        if len(sylows) != 1:
            return False
    return True
