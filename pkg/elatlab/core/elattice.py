"""ε-lattices over a finite carrier.

An ε-lattice is a carrier ``0..N-1`` with a map ε and two commutative,
associative operations such that ``a∧a = a∨a = ε(a)`` and
``a∧(a∨b) = a∨(a∧b) = ε(a)``. Operations are stored as explicit N×N tables.
"""
import json
import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np
from pydantic import ValidationError

from elatlab.core.exceptions import (
    ELatticeFileError,
    EquivalenceError,
    LatticeConsistencyError,
    MalformedTableError,
)
from elatlab.core.subgroups import SubgroupLattice, meet_join
from elatlab.models.documents import ELatticeDocument

logger = logging.getLogger(__name__)


def _frozen_table(values, shape: Tuple[int, ...], name: str) -> np.ndarray:
    try:
        arr = np.array(values, dtype=np.int64)
    except (TypeError, ValueError) as e:
        raise MalformedTableError(f"{name} is not an integer table: {e}")
    if arr.shape != shape:
        raise MalformedTableError(f"{name} has shape {arr.shape}, expected {shape}")
    bad = np.argwhere((arr < 0) | (arr >= shape[0]))
    if len(bad):
        where = tuple(int(x) for x in bad[0])
        raise MalformedTableError(f"{name}{list(where)} = {int(arr[where])} is out of range")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class ELattice:
    size: int
    eps: np.ndarray
    meet: np.ndarray = field(repr=False)
    join: np.ndarray = field(repr=False)
    labels: Optional[Tuple[str, ...]] = None

    def __post_init__(self):
        if self.size < 1:
            raise MalformedTableError("carrier must be non-empty")
        n = self.size
        object.__setattr__(self, 'eps', _frozen_table(self.eps, (n,), "eps"))
        object.__setattr__(self, 'meet', _frozen_table(self.meet, (n, n), "meet"))
        object.__setattr__(self, 'join', _frozen_table(self.join, (n, n), "join"))
        if self.labels is not None:
            if len(self.labels) != n:
                raise MalformedTableError(f"labels has {len(self.labels)} entries, expected {n}")
            object.__setattr__(self, 'labels', tuple(self.labels))

    @cached_property
    def fix(self) -> Tuple[int, ...]:
        return tuple(int(i) for i in np.flatnonzero(self.eps == np.arange(self.size)))

    @cached_property
    def partition(self) -> "ClassPartition":
        return class_partition(self)

    @cached_property
    def is_canonical(self) -> bool:
        in_fix = np.zeros(self.size, dtype=bool)
        in_fix[list(self.fix)] = True
        return bool(in_fix[self.meet].all() and in_fix[self.join].all())

    def label(self, i: int) -> str:
        return self.labels[i] if self.labels else str(i)


@dataclass(frozen=True)
class AxiomReport:
    passed: bool
    canonical: bool
    eps_idempotent: bool
    image_is_fix: bool
    violated: Optional[str] = None
    witness: Optional[Tuple[int, ...]] = None


def _first_violation(l: ELattice) -> Optional[Tuple[str, Tuple[int, ...]]]:
    n = l.size
    meet, join, eps = l.meet, l.join, l.eps
    idx = np.arange(n)
    for name, op in (("meet associativity", meet), ("join associativity", join)):
        for a in range(n):
            # op[op[a, b], c] vs op[a, op[b, c]] over all (b, c)
            lhs = op[op[a][:, None], idx[None, :]]
            rhs = op[a][op]
            bad = np.argwhere(lhs != rhs)
            if len(bad):
                return name, (a, int(bad[0][0]), int(bad[0][1]))
    for name, op in (("meet commutativity", meet), ("join commutativity", join)):
        bad = np.argwhere(op != op.T)
        if len(bad):
            return name, tuple(int(x) for x in bad[0])
    for name, op in (("meet idempotence", meet), ("join idempotence", join)):
        bad = np.flatnonzero(op[idx, idx] != eps)
        if len(bad):
            return name, (int(bad[0]),)
    for name, outer, inner in (("meet absorption", meet, join), ("join absorption", join, meet)):
        # outer[a, inner[a, b]] == eps[a]
        bad = np.argwhere(outer[idx[:, None], inner] != eps[:, None])
        if len(bad):
            return name, tuple(int(x) for x in bad[0])
    return None


def verify_axioms(l: ELattice) -> AxiomReport:
    """Exhaustively check axioms a)-d), ε idempotence, Im ε = Fix ε and canonicity."""
    violation = _first_violation(l)
    idempotent = bool(np.array_equal(l.eps[l.eps], l.eps))
    image_is_fix = set(l.eps.tolist()) == set(l.fix)
    passed = violation is None and idempotent and image_is_fix
    if violation is None and not idempotent:
        a = int(np.flatnonzero(l.eps[l.eps] != l.eps)[0])
        violation = ("eps idempotence", (a,))
    elif violation is None and not image_is_fix:
        a = min(set(l.eps.tolist()) ^ set(l.fix))
        violation = ("image equals Fix", (a,))
    report = AxiomReport(
        passed=passed,
        canonical=l.is_canonical,
        eps_idempotent=idempotent,
        image_is_fix=image_is_fix,
        violated=violation[0] if violation else None,
        witness=violation[1] if violation else None,
    )
    if not passed:
        logger.info(f"Axiom check failed: {report.violated} at {report.witness}")
    return report


def respects_eps(l: ELattice) -> bool:
    """meet(a, b) = meet(ε a, ε b) and join(a, b) = join(ε a, ε b) for all pairs."""
    grid = np.ix_(l.eps, l.eps)
    return bool(np.array_equal(l.meet[grid], l.meet) and np.array_equal(l.join[grid], l.join))


@dataclass(frozen=True, eq=False)
class FixLattice:
    """A finite lattice on local positions 0..k-1.

    ``elements[i]`` is the carrier index behind position i when the lattice is
    the Fix set of an ε-lattice.
    """

    elements: Tuple[int, ...]
    meet0: np.ndarray = field(repr=False)
    join0: np.ndarray = field(repr=False)
    leq: np.ndarray = field(repr=False)
    labels: Optional[Tuple[str, ...]] = None

    @property
    def size(self) -> int:
        return len(self.elements)

    @cached_property
    def position(self) -> Dict[int, int]:
        return {x: i for i, x in enumerate(self.elements)}

    @cached_property
    def covers(self) -> Tuple[Tuple[int, int], ...]:
        strict = self.leq & ~np.eye(self.size, dtype=bool)
        between = (strict.astype(np.int64) @ strict.astype(np.int64)) > 0
        return tuple((int(i), int(j)) for i, j in np.argwhere(strict & ~between))

    @cached_property
    def is_chain(self) -> bool:
        return bool((self.leq | self.leq.T).all())

    @cached_property
    def bottom(self) -> int:
        return int(np.flatnonzero(self.leq.all(axis=1))[0])

    @cached_property
    def top(self) -> int:
        return int(np.flatnonzero(self.leq.all(axis=0))[0])

    def to_digraph(self) -> nx.DiGraph:
        graph = nx.DiGraph()
        graph.add_nodes_from(range(self.size))
        graph.add_edges_from(self.covers)
        return graph

    def verify(self) -> bool:
        """Lattice laws on the restricted tables."""
        k = self.size
        if k == 0:
            return False
        idx = np.arange(k)
        for op in (self.meet0, self.join0):
            if not np.array_equal(op, op.T) or not np.array_equal(op[idx, idx], idx):
                return False
            if not np.array_equal(op[op[:, :, None], idx[None, None, :]], op[idx[:, None, None], op[None, :, :]]):
                return False
        absorb_meet = self.meet0[idx[:, None], self.join0]
        absorb_join = self.join0[idx[:, None], self.meet0]
        return bool((absorb_meet == idx[:, None]).all() and (absorb_join == idx[:, None]).all())

    def label(self, i: int) -> str:
        return self.labels[i] if self.labels else str(self.elements[i])

    @classmethod
    def from_tables(cls, meet0, join0, elements: Optional[Sequence[int]] = None,
                    labels: Optional[Sequence[str]] = None) -> "FixLattice":
        k = len(meet0)
        meet0 = _frozen_table(meet0, (k, k), "meet")
        join0 = _frozen_table(join0, (k, k), "join")
        leq = meet0 == np.arange(k)[:, None]
        leq.setflags(write=False)
        return cls(
            elements=tuple(elements) if elements is not None else tuple(range(k)),
            meet0=meet0,
            join0=join0,
            leq=leq,
            labels=tuple(labels) if labels is not None else None,
        )

    @classmethod
    def from_leq(cls, leq, elements: Optional[Sequence[int]] = None,
                 labels: Optional[Sequence[str]] = None) -> "FixLattice":
        """Build meets and joins from a partial order; raise if it is not a lattice."""
        leq = np.asarray(leq, dtype=bool)
        k = leq.shape[0]
        meet0 = np.empty((k, k), dtype=np.int64)
        join0 = np.empty((k, k), dtype=np.int64)
        for i in range(k):
            for j in range(i, k):
                lower = np.flatnonzero(leq[:, i] & leq[:, j])
                upper = np.flatnonzero(leq[i] & leq[j])
                glb = [x for x in lower if leq[lower, x].all()]
                lub = [x for x in upper if leq[x, upper].all()]
                if len(glb) != 1 or len(lub) != 1:
                    raise MalformedTableError(f"Order is not a lattice: no unique bound for ({i}, {j})")
                meet0[i, j] = meet0[j, i] = glb[0]
                join0[i, j] = join0[j, i] = lub[0]
        return cls.from_tables(meet0, join0, elements, labels)

    @classmethod
    def chain(cls, n: int) -> "FixLattice":
        """The n-element chain 0 < 1 < ... < n-1."""
        idx = np.arange(n)
        return cls.from_tables(np.minimum.outer(idx, idx), np.maximum.outer(idx, idx))

    @classmethod
    def diamond(cls, k: int) -> "FixLattice":
        """M_k: a bottom (0), k pairwise incomparable atoms (1..k) and a top (k+1)."""
        size = k + 2
        leq = np.zeros((size, size), dtype=bool)
        leq[0, :] = True
        leq[:, size - 1] = True
        leq[np.arange(size), np.arange(size)] = True
        return cls.from_leq(leq)


@dataclass(frozen=True)
class ClassPartition:
    class_of: Tuple[int, ...]
    classes: Dict[int, Tuple[int, ...]]

    @property
    def sizes(self) -> Dict[int, int]:
        return {a: len(members) for a, members in self.classes.items()}

    @property
    def profile(self) -> Tuple[int, ...]:
        """Class sizes in decreasing order."""
        return tuple(sorted((len(m) for m in self.classes.values()), reverse=True))


def class_partition(l: ELattice) -> ClassPartition:
    classes: Dict[int, List[int]] = {a: [] for a in l.fix}
    for b, a in enumerate(l.eps.tolist()):
        if a not in classes:
            raise LatticeConsistencyError(f"ε({b}) = {a} is not a fixed point")
        classes[a].append(b)
    return ClassPartition(
        class_of=tuple(int(x) for x in l.eps),
        classes={a: tuple(members) for a, members in classes.items()},
    )


def fix_lattice(l: ELattice) -> FixLattice:
    """(Fix ε, ∧°, ∨°) as a lattice on local positions."""
    fix = list(l.fix)
    position = {x: i for i, x in enumerate(fix)}
    grid = np.ix_(fix, fix)
    try:
        meet0 = np.vectorize(position.__getitem__, otypes=[np.int64])(l.meet[grid])
        join0 = np.vectorize(position.__getitem__, otypes=[np.int64])(l.join[grid])
    except KeyError as e:
        raise LatticeConsistencyError(f"Fix ε is not closed under the operations: {e} escapes")
    labels = [l.label(x) for x in fix] if l.labels else None
    return FixLattice.from_tables(meet0, join0, elements=fix, labels=labels)


@dataclass(frozen=True)
class QuotientLattice:
    blocks: Tuple[Tuple[int, ...], ...]
    lattice: FixLattice
    to_fix: Tuple[int, ...]


def quotient_mod(l: ELattice, blocks: Sequence[Sequence[int]]) -> QuotientLattice:
    """The factor set L/~ for ~ given by its blocks, with the isomorphism to Fix ε.

    Only ~ = Ker ε yields a lattice: a coarser relation merges different
    ε-values, a finer one leaves blocks whose self-meet is a different block.
    """
    seen: Dict[int, int] = {}
    ordered = sorted((tuple(sorted(int(x) for x in b)) for b in blocks), key=lambda b: b[:1])
    for i, block in enumerate(ordered):
        if not block:
            raise EquivalenceError("empty block in equivalence relation")
        for x in block:
            if not 0 <= x < l.size:
                raise EquivalenceError(f"element {x} is outside the carrier")
            if x in seen:
                raise EquivalenceError(f"element {x} lies in two blocks")
            seen[x] = i
    if len(seen) != l.size:
        missing = min(set(range(l.size)) - set(seen))
        raise EquivalenceError(f"element {missing} lies in no block")
    for block in ordered:
        values = {int(l.eps[x]) for x in block}
        if len(values) > 1:
            raise EquivalenceError(f"block {list(block)} is not contained in Ker ε (ε-values {sorted(values)})")
    if len(ordered) != len(l.fix):
        raise EquivalenceError("relation is strictly finer than Ker ε; the factor set is not a lattice")

    reps = [block[0] for block in ordered]
    meet0 = [[seen[int(l.meet[a, b])] for b in reps] for a in reps]
    join0 = [[seen[int(l.join[a, b])] for b in reps] for a in reps]
    lattice = FixLattice.from_tables(meet0, join0)
    if not lattice.verify():
        raise LatticeConsistencyError("factor set violates the lattice laws")
    to_fix = tuple(int(l.eps[r]) for r in reps)
    return QuotientLattice(blocks=tuple(ordered), lattice=lattice, to_fix=to_fix)


def kernel_blocks(l: ELattice) -> List[Tuple[int, ...]]:
    return list(l.partition.classes.values())


def inflate(base: FixLattice, sizes: Sequence[int]) -> ELattice:
    """Canonical ε-lattice whose class over base position x has sizes[x] members.

    Positions 0..k-1 of the carrier are the base elements themselves (the
    fixed representatives); extra class members are appended in base order.
    """
    k = base.size
    sizes = [int(s) for s in sizes]
    if len(sizes) != k:
        raise MalformedTableError(f"expected {k} class sizes, got {len(sizes)}")
    if any(s < 1 for s in sizes):
        raise MalformedTableError(f"class sizes must be positive: {sizes}")
    owner = list(range(k))
    labels = [base.label(x) for x in range(k)]
    for x, s in enumerate(sizes):
        for j in range(1, s):
            owner.append(x)
            labels.append(f"{base.label(x)}'{j}")
    owner_arr = np.asarray(owner, dtype=np.int64)
    grid = np.ix_(owner_arr, owner_arr)
    return ELattice(
        size=len(owner),
        eps=owner_arr,
        meet=base.meet0[grid],
        join=base.join0[grid],
        labels=tuple(labels),
    )


def subgroup_elattice(lat: SubgroupLattice) -> ELattice:
    """L(G) with ε = core, H₁∧H₂ = core(H₁)∩core(H₂), H₁∨H₂ = core(H₁)·core(H₂)."""
    cores = np.asarray(lat.cores, dtype=np.int64)
    n = lat.size
    meet = np.zeros((n, n), dtype=np.int64)
    join = np.zeros((n, n), dtype=np.int64)
    normal = lat.normal_subgroups
    for a in normal:
        for b in normal:
            if b.id < a.id:
                continue
            m, j = meet_join(lat, a, b)
            meet[a.id, b.id] = meet[b.id, a.id] = m.id
            join[a.id, b.id] = join[b.id, a.id] = j.id
    grid = np.ix_(cores, cores)
    labels = tuple(f"H{h.id}" for h in lat.subgroups)
    return ELattice(size=n, eps=cores, meet=meet[grid], join=join[grid], labels=labels)


def plain_lattice(lat: SubgroupLattice) -> FixLattice:
    """L(G) as an ordinary lattice: meet is intersection, join the generated subgroup."""
    return FixLattice.from_leq(lat.leq, labels=[f"H{h.id}" for h in lat.subgroups])


def normal_lattice(lat: SubgroupLattice) -> FixLattice:
    ids = list(lat.normal_ids)
    return FixLattice.from_leq(lat.leq[np.ix_(ids, ids)], elements=ids, labels=[f"H{i}" for i in ids])


def _field_path(loc) -> str:
    return ".".join(str(part) for part in loc)


def load_elattice(text: str) -> ELattice:
    """Parse an ε-lattice document; errors name the offending field or JSON position."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise ELatticeFileError(f"not valid JSON: {e.msg}", line=e.lineno, column=e.colno)
    if not isinstance(raw, dict):
        raise ELatticeFileError("top level must be an object")
    try:
        doc = ELatticeDocument.parse_obj(raw)
    except ValidationError as e:
        first = e.errors()[0]
        raise ELatticeFileError(first["msg"], field=_field_path(first["loc"]))
    return ELattice(
        size=doc.size,
        eps=doc.eps,
        meet=doc.meet,
        join=doc.join,
        labels=tuple(doc.labels) if doc.labels is not None else None,
    )


def dump_elattice_document(l: ELattice) -> str:
    doc = ELatticeDocument(
        size=l.size,
        eps=l.eps.tolist(),
        meet=l.meet.tolist(),
        join=l.join.tolist(),
        labels=list(l.labels) if l.labels else None,
    )
    return doc.json(exclude_none=True)
