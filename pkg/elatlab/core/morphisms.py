"""ε-lattice homomorphisms, isomorphism search and the structure of Aut_E.

An isomorphism of canonical ε-lattices is the same thing as a lattice
isomorphism g of the Fix lattices together with a bijection [a] → [g(a)] for
every fixed point a. Such a g extends iff it preserves class sizes
("admissible"), so

    |Aut_E(L)| = ∏ (m_i − 1)! × |{admissible automorphisms of Fix ε}|

where the m_i are the class sizes and the factorials count the class
permutations that fix the representative.
"""
import logging
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import islice, permutations
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np
from networkx.algorithms.isomorphism import DiGraphMatcher

from elatlab.config.settings import settings
from elatlab.core.catalog import identify
from elatlab.core.elattice import ELattice, FixLattice, fix_lattice, subgroup_elattice
from elatlab.core.exceptions import (
    InvalidIsomorphismError,
    MalformedMapError,
    NonCanonicalError,
    NotNormalError,
    OrderBoundError,
    ThresholdExceededError,
)
from elatlab.core.perm_group import FiniteGroup, automorphism_group, group_from_generators, quotient_group
from elatlab.core.subgroups import Subgroup, SubgroupLattice, all_subgroups
from elatlab.utils.helpers import factorial_product, format_factorial_product

logger = logging.getLogger(__name__)

CarrierMap = Tuple[int, ...]


def compose_maps(f: Sequence[int], g: Sequence[int]) -> CarrierMap:
    """f∘g on carrier indices."""
    return tuple(f[x] for x in g)


def invert_map(f: Sequence[int]) -> CarrierMap:
    inv = [0] * len(f)
    for x, y in enumerate(f):
        inv[y] = x
    return tuple(inv)


@dataclass(frozen=True, eq=False)
class ELMap:
    source: ELattice
    target: ELattice
    map: CarrierMap

    def __post_init__(self):
        if len(self.map) != self.source.size:
            raise MalformedMapError(f"map has {len(self.map)} entries, source carrier has {self.source.size}")
        for x, y in enumerate(self.map):
            if not 0 <= int(y) < self.target.size:
                raise MalformedMapError(f"map[{x}] = {y} is outside the target carrier")
        object.__setattr__(self, 'map', tuple(int(y) for y in self.map))

    @property
    def is_bijective(self) -> bool:
        return self.source.size == self.target.size and len(set(self.map)) == self.target.size


@dataclass(frozen=True)
class MorphismVerdict:
    verdict: str
    violated: Optional[str] = None
    witness: Optional[Tuple[int, ...]] = None


def check_el_morphism(m: ELMap) -> MorphismVerdict:
    """Classify a map as not_hom, hom or iso; report the first broken equation."""
    f = np.asarray(m.map, dtype=np.int64)
    s, t = m.source, m.target
    bad = np.flatnonzero(f[s.eps] != t.eps[f])
    if len(bad):
        return MorphismVerdict("not_hom", "f∘ε₁ = ε₂∘f", (int(bad[0]),))
    rows, cols = f[:, None], f[None, :]
    for name, op1, op2 in (("f(a∧b) = f(a)∧f(b)", s.meet, t.meet), ("f(a∨b) = f(a)∨f(b)", s.join, t.join)):
        bad = np.argwhere(f[op1] != op2[rows, cols])
        if len(bad):
            return MorphismVerdict("not_hom", name, tuple(int(x) for x in bad[0]))
    return MorphismVerdict("iso" if m.is_bijective else "hom")


def lattice_isomorphisms(a: FixLattice, b: FixLattice) -> List[CarrierMap]:
    """Every order isomorphism a → b as a tuple over local positions, sorted."""
    if a.size != b.size or len(a.covers) != len(b.covers) or a.is_chain != b.is_chain:
        return []
    matcher = DiGraphMatcher(a.to_digraph(), b.to_digraph())
    found = sorted(tuple(m[i] for i in range(a.size)) for m in matcher.isomorphisms_iter())
    logger.debug(f"{len(found)} lattice isomorphisms between lattices of size {a.size}")
    return found


def lattice_isomorphism(a: FixLattice, b: FixLattice) -> Optional[CarrierMap]:
    """One order isomorphism a → b, or None."""
    if a.size != b.size or len(a.covers) != len(b.covers):
        return None
    matcher = DiGraphMatcher(a.to_digraph(), b.to_digraph())
    first = next(matcher.isomorphisms_iter(), None)
    return None if first is None else tuple(first[i] for i in range(a.size))


@dataclass(frozen=True, eq=False)
class ELIsomorphism:
    """A fixed-lattice isomorphism plus one bijection [a]₁ → [fix_iso(a)]₂ per fixed point."""

    source: ELattice
    target: ELattice
    fix_iso: Dict[int, int]
    class_bijections: Dict[int, Dict[int, int]] = field(repr=False)

    def assemble(self) -> ELMap:
        total = [0] * self.source.size
        for bijection in self.class_bijections.values():
            for x, y in bijection.items():
                total[x] = y
        return ELMap(self.source, self.target, tuple(total))

    def validate(self) -> "ELIsomorphism":
        for a, b in self.fix_iso.items():
            if self.class_bijections[a].get(a) != b:
                raise InvalidIsomorphismError(f"class bijection of {a} does not send it to {b}")
        verdict = check_el_morphism(self.assemble())
        if verdict.verdict != "iso":
            raise InvalidIsomorphismError(f"assembled map is {verdict.verdict}: {verdict.violated} at {verdict.witness}")
        return self

    @classmethod
    def from_map(cls, m: ELMap) -> "ELIsomorphism":
        """Split an ε-lattice isomorphism into its Fix part and class parts."""
        verdict = check_el_morphism(m)
        if verdict.verdict != "iso":
            raise InvalidIsomorphismError(f"map is {verdict.verdict}: {verdict.violated} at {verdict.witness}")
        fix_iso = {a: m.map[a] for a in m.source.fix}
        classes = m.source.partition.classes
        bijections = {a: {x: m.map[x] for x in classes[a]} for a in m.source.fix}
        return cls(m.source, m.target, fix_iso, bijections)

    @property
    def map(self) -> CarrierMap:
        return self.assemble().map


def _ordered_class(l: ELattice, a: int) -> List[int]:
    """Class of fixed point a: the representative first, then the rest by index."""
    return [a] + [x for x in l.partition.classes[a] if x != a]


def fix_maps(l1: ELattice, l2: ELattice) -> List[Dict[int, int]]:
    """Lattice isomorphisms Fix ε₁ → Fix ε₂ as carrier-index dictionaries."""
    f1, f2 = fix_lattice(l1), fix_lattice(l2)
    return [
        {f1.elements[i]: f2.elements[j] for i, j in enumerate(iso)}
        for iso in lattice_isomorphisms(f1, f2)
    ]


def is_admissible(l1: ELattice, l2: ELattice, g: Dict[int, int]) -> bool:
    sizes1, sizes2 = l1.partition.sizes, l2.partition.sizes
    return all(sizes1[a] == sizes2[b] for a, b in g.items())


def canonical_extension(l1: ELattice, l2: ELattice, g: Dict[int, int]) -> ELIsomorphism:
    """Extend an admissible g: representative to representative, the rest in index order."""
    bijections = {}
    for a, b in g.items():
        bijections[a] = dict(zip(_ordered_class(l1, a), _ordered_class(l2, b)))
    return ELIsomorphism(l1, l2, dict(g), bijections)


def _require_canonical(*lattices: ELattice) -> None:
    for l in lattices:
        if not l.is_canonical:
            raise NonCanonicalError("isomorphism search needs canonical ε-lattices")


@dataclass(frozen=True)
class ELIsoSearch:
    witness: Optional[ELIsomorphism]
    fix_iso_count: int
    admissible: Tuple[Dict[int, int], ...] = field(repr=False)

    @property
    def admissible_count(self) -> int:
        return len(self.admissible)


def el_isomorphism_search(l1: ELattice, l2: ELattice) -> ELIsoSearch:
    _require_canonical(l1, l2)
    if l1.size != l2.size or l1.partition.profile != l2.partition.profile:
        # No admissible g can exist; the Fix isomorphisms are still counted.
        gs = fix_maps(l1, l2) if len(l1.fix) == len(l2.fix) else []
        return ELIsoSearch(witness=None, fix_iso_count=len(gs), admissible=())
    gs = fix_maps(l1, l2)
    admissible = tuple(g for g in gs if is_admissible(l1, l2, g))
    witness = canonical_extension(l1, l2, admissible[0]).validate() if admissible else None
    logger.debug(f"{len(gs)} fix isomorphisms, {len(admissible)} admissible")
    return ELIsoSearch(witness=witness, fix_iso_count=len(gs), admissible=admissible)


def _class_choices(targets: Sequence[Sequence[int]]) -> Iterator[Tuple[Tuple[int, ...], ...]]:
    """Lazy product of the permutations of each target class, first class slowest."""
    if not targets:
        yield ()
        return
    for head in permutations(targets[0]):
        for rest in _class_choices(targets[1:]):
            yield (head,) + rest


def iter_el_isomorphisms(l1: ELattice, l2: ELattice, admissible: Optional[Sequence[Dict[int, int]]] = None) -> Iterator[ELMap]:
    """Every ε-lattice isomorphism l1 → l2, admissible g first, class bijections in lexicographic order.

    Maps are generated one at a time, so callers may stop early on huge classes.
    """
    if admissible is None:
        admissible = el_isomorphism_search(l1, l2).admissible
    fixed = list(l1.fix)
    for g in admissible:
        targets = [_ordered_class(l2, g[a])[1:] for a in fixed]
        sources = [_ordered_class(l1, a)[1:] for a in fixed]
        for choice in _class_choices(targets):
            total = [0] * l1.size
            for a, src, tgt in zip(fixed, sources, choice):
                total[a] = g[a]
                for x, y in zip(src, tgt):
                    total[x] = y
            yield ELMap(l1, l2, tuple(total))


@dataclass(frozen=True)
class AutEDecomposition:
    class_sizes: Tuple[int, ...]
    s_prime_terms: Tuple[int, ...]
    aut_fix_order: int
    im_psi_order: int
    total_order: int
    factored: str
    aut_fix_trivial: bool
    fix_is_chain: bool
    psi_surjective: bool
    admissible: Tuple[Dict[int, int], ...] = field(repr=False, default=())

    @property
    def kernel_order(self) -> int:
        return factorial_product(self.s_prime_terms)


def aut_e_decomposition(l: ELattice) -> AutEDecomposition:
    """Structure of Aut_E(L) from class sizes and the admissible Fix automorphisms."""
    _require_canonical(l)
    sizes = tuple(sorted(l.partition.sizes.values(), reverse=True))
    terms = tuple(m - 1 for m in sizes)
    gs = fix_maps(l, l)
    admissible = tuple(g for g in gs if is_admissible(l, l, g))
    total = factorial_product(terms) * len(admissible)
    decomposition = AutEDecomposition(
        class_sizes=sizes,
        s_prime_terms=terms,
        aut_fix_order=len(gs),
        im_psi_order=len(admissible),
        total_order=total,
        factored=format_factorial_product(terms, len(admissible)),
        aut_fix_trivial=len(gs) == 1,
        fix_is_chain=fix_lattice(l).is_chain,
        psi_surjective=len(admissible) == len(gs),
        admissible=admissible,
    )
    logger.info(f"|Aut_E| = {decomposition.factored} = {total}")
    return decomposition


def enumerate_aut_e(l: ELattice, max_order: Optional[int] = None,
                    decomposition: Optional[AutEDecomposition] = None) -> List[ELMap]:
    """All ε-lattice automorphisms; refuses when the count exceeds the threshold."""
    limit = settings.bound('enum_threshold', max_order)
    decomposition = decomposition or aut_e_decomposition(l)
    if decomposition.total_order > limit:
        raise ThresholdExceededError(
            f"Aut_E has {decomposition.total_order} elements, above the enumeration threshold {limit}"
        )
    return list(iter_el_isomorphisms(l, l, decomposition.admissible))


def brute_force_isomorphisms(l1: ELattice, l2: ELattice, max_carrier: Optional[int] = None) -> List[CarrierMap]:
    """Filter every carrier bijection through the definition; small carriers only."""
    limit = settings.bound('brute_force_max_carrier', max_carrier)
    if l1.size > limit:
        raise OrderBoundError(f"carrier of {l1.size} elements is above the brute-force bound {limit}")
    if l1.size != l2.size:
        return []
    found = []
    for candidate in permutations(range(l2.size)):
        if check_el_morphism(ELMap(l1, l2, candidate)).verdict == "iso":
            found.append(candidate)
    return found


@dataclass(frozen=True)
class ExactSequenceReport:
    automorphism_count: int
    kernel_psi_order: int
    image_phi_order: int
    image_psi_order: int
    predicted_order: int
    phi_injective: bool
    kernel_equals_image: bool
    restrictions_admissible: bool
    counting_identity: bool
    kernel_normal: bool

    @property
    def exact(self) -> bool:
        return (self.phi_injective and self.kernel_equals_image and self.restrictions_admissible
                and self.counting_identity and self.kernel_normal)


def _phi_image(l: ELattice) -> List[CarrierMap]:
    """Images of ∏ S′([a]) in Aut_E: identity on Fix, representative-fixing class permutations."""
    fixed = list(l.fix)
    rests = [_ordered_class(l, a)[1:] for a in fixed]
    images = []
    for choice in _class_choices(rests):
        total = list(range(l.size))
        for rest, perm in zip(rests, choice):
            for x, y in zip(rest, perm):
                total[x] = y
        images.append(tuple(total))
    return images


def _kernel_generators(l: ELattice) -> List[CarrierMap]:
    """Adjacent transpositions of the non-representative members of each class."""
    gens = []
    for a in l.fix:
        rest = _ordered_class(l, a)[1:]
        for x, y in zip(rest, rest[1:]):
            swap = list(range(l.size))
            swap[x], swap[y] = y, x
            gens.append(tuple(swap))
    return gens


def exact_sequence_report(l: ELattice, max_order: Optional[int] = None,
                          sample: Optional[int] = None) -> ExactSequenceReport:
    """Check 1 → ∏S′([a]) → Aut_E → Im ψ → 1 on an enumerable instance."""
    sample = settings.bound('extension_sample', sample)
    decomposition = aut_e_decomposition(l)
    automorphisms = [m.map for m in enumerate_aut_e(l, max_order, decomposition)]
    fixed = list(l.fix)
    identity_on_fix = tuple(fixed)
    kernel = {f for f in automorphisms if tuple(f[a] for a in fixed) == identity_on_fix}
    phi = _phi_image(l)
    restrictions = {tuple(f[a] for a in fixed) for f in automorphisms}
    admissible = {tuple(g[a] for a in fixed) for g in decomposition.admissible}

    # Conjugating the generators of Ker ψ is enough for normality.
    kernel_normal = True
    for f in islice(automorphisms, sample):
        f_inv = invert_map(f)
        if any(compose_maps(compose_maps(f, k), f_inv) not in kernel for k in _kernel_generators(l)):
            kernel_normal = False
            break

    report = ExactSequenceReport(
        automorphism_count=len(automorphisms),
        kernel_psi_order=len(kernel),
        image_phi_order=len(set(phi)),
        image_psi_order=len(restrictions),
        predicted_order=decomposition.total_order,
        phi_injective=len(set(phi)) == len(phi) == decomposition.kernel_order,
        kernel_equals_image=kernel == set(phi),
        restrictions_admissible=restrictions == admissible,
        counting_identity=len(automorphisms) == decomposition.total_order,
        kernel_normal=kernel_normal,
    )
    logger.info(f"Exact sequence check on carrier {l.size}: exact={report.exact}")
    return report


@dataclass(frozen=True)
class TowerGroup:
    order: int
    name: str
    elements: Tuple[CarrierMap, ...] = field(repr=False, default=())


@dataclass(frozen=True)
class AutTowers:
    decomposition: AutEDecomposition
    aut0: TowerGroup
    aut1: TowerGroup
    aut2: TowerGroup
    containments: Dict[str, bool]


def _tower_group(perms: Sequence[CarrierMap], degree: int, label: str, max_order: int) -> Tuple[FiniteGroup, str]:
    group = group_from_generators(sorted(set(perms)), label=label, degree=degree, max_order=max(max_order, len(perms)) + 1)
    name = identify(group, max_order=max_order) if group.order <= max_order else "unknown"
    return group, name


def _kernel_name(terms: Sequence[int]) -> str:
    parts = [f"S{k}" for k in sorted((k for k in terms if k >= 2), reverse=True)]
    return " × ".join(parts) if parts else "C1"


def _induced_perm(lat: SubgroupLattice, image_of) -> CarrierMap:
    return tuple(lat.by_members(image_of(h.members)).id for h in lat.subgroups)


def aut_towers(lat: SubgroupLattice, max_order: Optional[int] = None) -> AutTowers:
    """Aut⁰ (identity on N(G)), Aut¹ (group automorphisms), Aut² (conjugations) of L(G).

    Aut⁰ is generated from class transpositions, i.e. as Im φ; its equality with
    Ker ψ is what exact_sequence_report checks.
    """
    limit = settings.bound('max_order', max_order)
    g = lat.group
    l = subgroup_elattice(lat)
    decomposition = aut_e_decomposition(l)

    gens0 = _kernel_generators(l)
    kernel_order = decomposition.kernel_order
    if kernel_order <= limit:
        group0, name0 = _tower_group(gens0, l.size, f"Aut0({g.label})", limit)
        aut0 = TowerGroup(group0.order, name0, group0.elements)
    else:
        aut0 = TowerGroup(kernel_order, _kernel_name(decomposition.s_prime_terms))

    perms1 = {_induced_perm(lat, alpha.image_of) for alpha in automorphism_group(g, max_order=limit)}
    group1, name1 = _tower_group(list(perms1), l.size, f"Aut1({g.label})", limit)
    aut1 = TowerGroup(group1.order, name1, tuple(sorted(perms1)))

    conj = lat.conjugation
    perms2 = {
        _induced_perm(lat, lambda members, a=a: frozenset(int(conj[x, a]) for x in members))
        for a in range(g.order)
    }
    group2, name2 = _tower_group(list(perms2), l.size, f"Aut2({g.label})", limit)
    aut2 = TowerGroup(group2.order, name2, tuple(sorted(perms2)))

    fixed = list(l.fix)
    set1 = set(perms1)

    def in_aut0(p: CarrierMap) -> bool:
        return all(p[a] == a for a in fixed) and check_el_morphism(ELMap(l, l, p)).verdict == "iso"

    containments = {
        "aut2_in_aut0": all(in_aut0(p) for p in perms2),
        "aut2_in_aut1": perms2 <= set1,
        "aut2_normal_in_aut1": all(
            compose_maps(compose_maps(s, t), invert_map(s)) in perms2 for s in perms1 for t in perms2
        ),
        "aut1_in_aut_e": all(check_el_morphism(ELMap(l, l, p)).verdict == "iso" for p in perms1),
        "aut0_normal_under_aut1": all(
            in_aut0(compose_maps(compose_maps(s, k), invert_map(s))) for s in perms1 for k in gens0
        ),
    }
    logger.info(f"{g.label}: Aut0 {aut0.name} ({aut0.order}), Aut1 {aut1.name} ({aut1.order}), Aut2 {aut2.name} ({aut2.order})")
    return AutTowers(decomposition, aut0, aut1, aut2, containments)


@dataclass(frozen=True, eq=False)
class QuotientIso:
    quotient1: FiniteGroup
    quotient2: FiniteGroup
    image_of_h1: Subgroup
    iso: ELIsomorphism


@lru_cache(maxsize=256)
def _quotient_lattice(lat: SubgroupLattice, h: Subgroup, max_order: Optional[int]):
    """G/H, the projection, and the subgroup lattice and ε-lattice of G/H; shared across isomorphisms."""
    q, pi = quotient_group(lat.group, h, label=f"{lat.group.label}/H{h.id}")
    qlat = all_subgroups(q, max_order)
    return q, pi, qlat, subgroup_elattice(qlat)


def quotient_induced_iso(f: ELIsomorphism, lat1: SubgroupLattice, lat2: SubgroupLattice,
                         h1: Subgroup, max_order: Optional[int] = None) -> QuotientIso:
    """The isomorphism L(G1/H1) → L(G2/f(H1)) sending K/H1 to f(K)/f(H1)."""
    if f.source.size != lat1.size or f.target.size != lat2.size:
        raise InvalidIsomorphismError("isomorphism does not match the given subgroup lattices")
    f.validate()
    lat1.check(h1)
    if not lat1.is_normal(h1):
        raise NotNormalError(f"Subgroup {h1.id} is not normal in {lat1.group.label}")
    fmap = f.map
    h2 = lat2.subgroups[fmap[h1.id]]

    q1, pi1, qlat1, ql1 = _quotient_lattice(lat1, h1, max_order)
    q2, pi2, qlat2, ql2 = _quotient_lattice(lat2, h2, max_order)

    induced = [0] * qlat1.size
    for k in np.flatnonzero(lat1.leq[h1.id]):
        k = int(k)
        source = qlat1.by_members(pi1.image_of(lat1.subgroups[k].members))
        image = lat2.subgroups[fmap[k]]
        if not lat2.leq[h2.id, image.id]:
            raise InvalidIsomorphismError(f"f(H{k}) does not contain f(H{h1.id})")
        induced[source.id] = qlat2.by_members(pi2.image_of(image.members)).id

    iso = ELIsomorphism.from_map(ELMap(ql1, ql2, tuple(induced)))
    return QuotientIso(q1, q2, h2, iso)
