"""Finite permutation groups with explicit Cayley tables.

Elements are stored as image tuples on the points ``0..n-1``. Every group
keeps its elements in breadth-first order from the identity, so element
indices (and everything derived from them) are reproducible.
"""
import logging
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from elatlab.config.settings import settings
from elatlab.core.exceptions import (
    GroupConstructionError,
    NotNormalError,
    OrderBoundError,
    SubgroupError,
)
from elatlab.utils.helpers import format_cycles

logger = logging.getLogger(__name__)

Perm = Tuple[int, ...]

# Largest order whose associativity is checked exhaustively.
ASSOCIATIVITY_CHECK_ORDER = 64


def compose(a: Perm, b: Perm) -> Perm:
    """Return a∘b, i.e. apply b first."""
    return tuple(a[x] for x in b)


def invert(p: Perm) -> Perm:
    inv = [0] * len(p)
    for point, image in enumerate(p):
        inv[image] = point
    return tuple(inv)


def is_permutation(images: Sequence[int]) -> bool:
    return sorted(images) == list(range(len(images)))


def identity_perm(degree: int) -> Perm:
    return tuple(range(degree))


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """A finite group given by its elements; element 0 is the identity."""

    elements: Tuple[Perm, ...]
    label: str = "G"
    table: Optional[np.ndarray] = field(default=None, repr=False)

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def degree(self) -> int:
        return len(self.elements[0])

    @cached_property
    def index(self) -> Dict[Perm, int]:
        return {p: i for i, p in enumerate(self.elements)}

    @cached_property
    def cayley(self) -> np.ndarray:
        """cayley[i, j] is the index of elements[i]∘elements[j]."""
        if self.table is not None:
            return self.table
        if self.order > settings.max_table_order:
            raise OrderBoundError(
                f"group too large: Cayley table of {self.label} needs order <= {settings.max_table_order}, got {self.order}"
            )
        index = self.index
        table = np.empty((self.order, self.order), dtype=np.int64)
        for i, a in enumerate(self.elements):
            table[i] = [index[compose(a, b)] for b in self.elements]
        table.setflags(write=False)
        return table

    @cached_property
    def inverse(self) -> Tuple[int, ...]:
        index = self.index
        return tuple(index[invert(p)] for p in self.elements)

    def mul(self, i: int, j: int) -> int:
        return int(self.cayley[i, j])

    def conjugate(self, x: int, by: int) -> int:
        """Return by⁻¹·x·by."""
        return self.mul(self.mul(self.inverse[by], x), by)

    @cached_property
    def element_orders(self) -> Tuple[int, ...]:
        orders = []
        for i in range(self.order):
            k, x = 1, i
            while x != 0:
                x = self.mul(x, i)
                k += 1
            orders.append(k)
        return tuple(orders)

    @cached_property
    def order_census(self) -> Tuple[int, ...]:
        return tuple(sorted(self.element_orders))

    @cached_property
    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.cayley, self.cayley.T))

    @cached_property
    def exponent(self) -> int:
        return int(np.lcm.reduce(np.asarray(self.element_orders, dtype=np.int64)))

    def closure(self, gens: Iterable[int]) -> FrozenSet[int]:
        """Return the subgroup generated by the given element indices."""
        gens = tuple(dict.fromkeys(gens))
        seen = {0}
        queue = deque([0])
        while queue:
            x = queue.popleft()
            for g in gens:
                y = self.mul(x, g)
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        return frozenset(seen)

    def cyclic(self, x: int) -> FrozenSet[int]:
        powers = {0}
        y = x
        while y != 0:
            powers.add(y)
            y = self.mul(y, x)
        return frozenset(powers)

    @cached_property
    def generating_set(self) -> Tuple[int, ...]:
        """A generating set of minimum size.

        Candidates are one generator per maximal cyclic subgroup, which loses
        no generality: replacing a generator by one of a larger cyclic
        subgroup keeps the generated group.
        """
        if self.order == 1:
            return ()
        cyclics: Dict[FrozenSet[int], int] = {}
        for x in range(1, self.order):
            cyclics.setdefault(self.cyclic(x), x)
        maximal = [x for cyc, x in cyclics.items() if not any(cyc < other for other in cyclics)]
        maximal.sort(key=lambda x: (-self.element_orders[x], x))
        for k in range(1, len(maximal) + 1):
            for combo in combinations(maximal, k):
                if len(self.closure(combo)) == self.order:
                    return combo
        raise GroupConstructionError(f"No generating set found for {self.label}")

    @property
    def rank(self) -> int:
        return len(self.generating_set)

    def check_axioms(self) -> List[str]:
        """Return the list of violated group axioms (empty when the table is a group)."""
        problems = []
        n = self.order
        table = self.cayley
        if len(set(self.elements)) != n:
            problems.append("elements are not pairwise distinct")
        if self.elements[0] != identity_perm(self.degree):
            problems.append("element 0 is not the identity")
        idx = np.arange(n)
        if not (np.array_equal(table[0], idx) and np.array_equal(table[:, 0], idx)):
            problems.append("identity row or column is wrong")
        if np.any((table < 0) | (table >= n)):
            problems.append("table is not closed")
        inv = np.asarray(self.inverse)
        if not (np.all(table[idx, inv] == 0) and np.all(table[inv, idx] == 0)):
            problems.append("inverses are wrong")
        if n <= ASSOCIATIVITY_CHECK_ORDER:
            a, b, c = idx[:, None, None], idx[None, :, None], idx[None, None, :]
            if not np.array_equal(table[table[a, b], c], table[a, table[b, c]]):
                problems.append("table is not associative")
        return problems

    def describe(self, i: int) -> str:
        return format_cycles(self.elements[i])


@dataclass(frozen=True, eq=False)
class GroupHom:
    source: FiniteGroup
    target: FiniteGroup
    map: Tuple[int, ...]

    def __call__(self, i: int) -> int:
        return self.map[i]

    def is_homomorphism(self) -> bool:
        m = np.asarray(self.map, dtype=np.int64)
        if m[0] != 0:
            return False
        lhs = m[self.source.cayley]
        rhs = self.target.cayley[m[:, None], m[None, :]]
        return bool(np.array_equal(lhs, rhs))

    def is_bijective(self) -> bool:
        return self.source.order == self.target.order and len(set(self.map)) == self.target.order

    def kernel(self) -> FrozenSet[int]:
        return frozenset(i for i, image in enumerate(self.map) if image == 0)

    def image(self) -> FrozenSet[int]:
        return frozenset(self.map)

    def image_of(self, members: Iterable[int]) -> FrozenSet[int]:
        return frozenset(self.map[i] for i in members)


def _require_order(g: FiniteGroup, limit: int, what: str) -> None:
    if g.order > limit:
        raise OrderBoundError(f"group too large: {what} of {g.label} needs order <= {limit}, got {g.order}")


def group_from_generators(
    gens: Sequence[Sequence[int]],
    label: Optional[str] = None,
    degree: Optional[int] = None,
    max_order: Optional[int] = None,
) -> FiniteGroup:
    """Close a list of permutations under composition."""
    limit = settings.bound('max_closure_order', max_order)
    gens = [tuple(int(x) for x in g) for g in gens]
    degrees = {len(g) for g in gens}
    if len(degrees) > 1 or (degree is not None and degrees and degrees != {degree}):
        raise GroupConstructionError(f"Generators have mismatched degrees: {sorted(degrees | ({degree} if degree else set()))}")
    if degrees:
        degree = degrees.pop()
    if degree is None:
        degree = 1
    if degree < 1:
        raise GroupConstructionError("Degree must be at least 1")
    for g in gens:
        if not is_permutation(g):
            raise GroupConstructionError(f"Not a bijection on 0..{degree - 1}: {list(g)}")

    identity = identity_perm(degree)
    elements = [identity]
    seen = {identity}
    queue = deque([identity])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = compose(x, g)
            if y not in seen:
                if len(elements) >= limit:
                    raise OrderBoundError(f"group too large: closure exceeds {limit} elements")
                seen.add(y)
                elements.append(y)
                queue.append(y)

    if label is None:
        label = "<" + ", ".join(format_cycles(g) for g in gens) + ">"
    logger.debug(f"Closed {len(gens)} generators of degree {degree} into a group of order {len(elements)}")
    return FiniteGroup(elements=tuple(elements), label=label)


def group_from_table(table: Sequence[Sequence[int]], label: str = "G") -> FiniteGroup:
    """Build a group from a multiplication table via its left regular representation.

    Row 0 must be the identity; element i acts on the points as x ↦ table[i][x].
    """
    arr = np.asarray(table, dtype=np.int64)
    n = arr.shape[0] if arr.ndim == 2 else 0
    if arr.ndim != 2 or arr.shape != (n, n) or n == 0:
        raise GroupConstructionError("Multiplication table must be a non-empty square")
    idx = np.arange(n)
    if not (np.array_equal(arr[0], idx) and np.array_equal(arr[:, 0], idx)):
        raise GroupConstructionError("Element 0 of the table must be the identity")
    sorted_rows = np.sort(arr, axis=1)
    sorted_cols = np.sort(arr, axis=0)
    if not (np.all(sorted_rows == idx[None, :]) and np.all(sorted_cols == idx[:, None])):
        raise GroupConstructionError("Multiplication table is not a Latin square")
    if n <= ASSOCIATIVITY_CHECK_ORDER:
        a, b, c = idx[:, None, None], idx[None, :, None], idx[None, None, :]
        if not np.array_equal(arr[arr[a, b], c], arr[a, arr[b, c]]):
            raise GroupConstructionError("Multiplication table is not associative")
    arr.setflags(write=False)
    elements = tuple(tuple(int(x) for x in row) for row in arr)
    return FiniteGroup(elements=elements, label=label, table=arr)


def is_subgroup_members(g: FiniteGroup, members: FrozenSet[int]) -> bool:
    if 0 not in members:
        return False
    return all(g.mul(a, g.inverse[b]) in members for a in members for b in members)


def is_normal_members(g: FiniteGroup, members: FrozenSet[int]) -> bool:
    return all(g.conjugate(h, x) in members for x in g.generating_set for h in members)


def quotient_group(g: FiniteGroup, n, label: Optional[str] = None) -> Tuple[FiniteGroup, GroupHom]:
    """Return G/N built from the coset table, plus the projection G → G/N.

    ``n`` is a Subgroup or any collection of element indices.
    """
    members = frozenset(getattr(n, "members", n))
    if not is_subgroup_members(g, members):
        raise SubgroupError(f"Not a subgroup of {g.label}: {sorted(members)}")
    if not is_normal_members(g, members):
        raise NotNormalError(f"Subgroup of order {len(members)} is not normal in {g.label}")

    coset_of = [-1] * g.order
    reps: List[int] = []
    for x in range(g.order):
        if coset_of[x] == -1:
            c = len(reps)
            reps.append(x)
            for h in members:
                coset_of[g.mul(x, h)] = c
    table = [[coset_of[g.mul(a, b)] for b in reps] for a in reps]
    q = group_from_table(table, label=label or f"{g.label}/N{len(members)}")
    return q, GroupHom(source=g, target=q, map=tuple(coset_of))


def _extend(
    src: FiniteGroup, tgt: FiniteGroup, gens: Sequence[int], images: Sequence[int]
) -> Optional[Dict[int, int]]:
    """Extend generator images along the Cayley graph of <gens>; None on conflict."""
    mapping = {0: 0}
    queue = deque([0])
    while queue:
        x = queue.popleft()
        for g, h in zip(gens, images):
            y = src.mul(x, g)
            w = tgt.mul(mapping[x], h)
            known = mapping.get(y)
            if known is None:
                mapping[y] = w
                queue.append(y)
            elif known != w:
                return None
    if len(set(mapping.values())) != len(mapping):
        return None
    return mapping


def iter_isomorphisms(g: FiniteGroup, h: FiniteGroup, max_order: Optional[int] = None) -> Iterator[GroupHom]:
    """Yield every isomorphism g → h in a deterministic order.

    Backtracks over images of the minimal generating set of g, restricted to
    elements of h of equal order; each partial assignment is extended over the
    subgroup it generates and pruned on conflict or collision.
    """
    limit = settings.bound('max_order', max_order)
    _require_order(g, limit, "isomorphism search")
    _require_order(h, limit, "isomorphism search")
    if g.order != h.order or g.order_census != h.order_census or g.is_abelian != h.is_abelian:
        return
    gens = g.generating_set
    candidates = [
        [y for y in range(h.order) if h.element_orders[y] == g.element_orders[x]] for x in gens
    ]

    def backtrack(images: List[int]) -> Iterator[GroupHom]:
        depth = len(images)
        if depth == len(gens):
            mapping = _extend(g, h, gens, images)
            if mapping is None or len(mapping) != g.order:
                return
            hom = GroupHom(source=g, target=h, map=tuple(mapping[i] for i in range(g.order)))
            if hom.is_bijective() and hom.is_homomorphism():
                yield hom
            return
        for y in candidates[depth]:
            if y in images:
                continue
            if _extend(g, h, gens[:depth + 1], images + [y]) is None:
                continue
            yield from backtrack(images + [y])

    yield from backtrack([])


def automorphism_group(g: FiniteGroup, max_order: Optional[int] = None) -> List[GroupHom]:
    """Return every automorphism of g in backtracking order."""
    automorphisms = list(iter_isomorphisms(g, g, max_order=max_order))
    logger.info(f"{g.label}: {len(automorphisms)} automorphisms")
    return automorphisms


def isomorphism_class(g: FiniteGroup, h: FiniteGroup, max_order: Optional[int] = None) -> Optional[GroupHom]:
    """Return a witness isomorphism g → h, or None when the groups are not isomorphic."""
    return next(iter_isomorphisms(g, h, max_order=max_order), None)
