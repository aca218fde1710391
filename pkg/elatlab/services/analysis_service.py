import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Dict, Optional

from elatlab.config.settings import settings
from elatlab.core.cache import cache
from elatlab.core.catalog import catalog_group, identify
from elatlab.core.elattice import (
    AxiomReport,
    ELattice,
    FixLattice,
    normal_lattice,
    plain_lattice,
    respects_eps,
    subgroup_elattice,
    verify_axioms,
)
from elatlab.core.morphisms import (
    AutEDecomposition,
    AutTowers,
    ELIsoSearch,
    aut_e_decomposition,
    aut_towers,
    el_isomorphism_search,
    lattice_isomorphism,
)
from elatlab.core.perm_group import FiniteGroup, isomorphism_class
from elatlab.core.subgroups import (
    FrattiniDerived,
    GroupPredicates,
    SubgroupLattice,
    all_subgroups,
    frattini_derived,
    group_predicates,
    nilpotent_by_sylow,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class GroupAnalysis:
    """Everything derived from one group; each part is computed once, on demand."""

    spec: str
    group: FiniteGroup
    lattice: SubgroupLattice
    max_order: int

    @cached_property
    def elattice(self) -> ELattice:
        return subgroup_elattice(self.lattice)

    @cached_property
    def predicates(self) -> GroupPredicates:
        return group_predicates(self.lattice)

    @cached_property
    def frattini_derived(self) -> FrattiniDerived:
        return frattini_derived(self.lattice)

    @cached_property
    def nilpotent_by_sylow(self) -> bool:
        return nilpotent_by_sylow(self.lattice)

    @cached_property
    def axioms(self) -> AxiomReport:
        return verify_axioms(self.elattice)

    @cached_property
    def respects_eps(self) -> bool:
        return respects_eps(self.elattice)

    @cached_property
    def decomposition(self) -> AutEDecomposition:
        return aut_e_decomposition(self.elattice)

    @cached_property
    def towers(self) -> AutTowers:
        return aut_towers(self.lattice, self.max_order)

    @cached_property
    def normal_lattice(self) -> FixLattice:
        return normal_lattice(self.lattice)

    @cached_property
    def plain_lattice(self) -> FixLattice:
        return plain_lattice(self.lattice)

    @cached_property
    def identified(self) -> str:
        if self.group.order > self.max_order:
            return "unknown"
        return identify(self.group, self.max_order)

    @property
    def class_profile(self):
        return self.elattice.partition.profile

    @property
    def is_cyclic(self) -> bool:
        return self.group.rank <= 1


class AnalysisService:
    def analyse(self, spec: str, max_order: Optional[int] = None) -> GroupAnalysis:
        """Analysis of the group a spec names, memoised per (spec, bound)."""
        limit = settings.bound('max_order', max_order)
        key = cache.get_analysis_key(spec.strip(), "analysis", limit)

        def build() -> GroupAnalysis:
            group = catalog_group(spec)
            lattice = all_subgroups(group, limit)
            return GroupAnalysis(spec=spec.strip(), group=group, lattice=lattice, max_order=limit)

        return cache.get_or_compute(key, build)

    def search(self, a: GroupAnalysis, b: GroupAnalysis) -> ELIsoSearch:
        """εL-isomorphism search between the subgroup ε-lattices, memoised per pair."""
        key = cache.get_analysis_key(f"{a.spec}|{b.spec}", "el_search", a.max_order)
        return cache.get_or_compute(key, lambda: el_isomorphism_search(a.elattice, b.elattice))

    def el_isomorphic(self, a: GroupAnalysis, b: GroupAnalysis) -> bool:
        if a.lattice.size != b.lattice.size or a.class_profile != b.class_profile:
            return False
        return self.search(a, b).witness is not None

    def compare(self, spec1: str, spec2: str, max_order: Optional[int] = None) -> Dict[str, Any]:
        """The three isomorphism notions for two groups, each with a witness when it holds."""
        a, b = self.analyse(spec1, max_order), self.analyse(spec2, max_order)
        group_iso = isomorphism_class(a.group, b.group, max_order=a.max_order) if a.group.order == b.group.order else None
        l_iso = lattice_isomorphism(a.plain_lattice, b.plain_lattice)
        n_iso = lattice_isomorphism(a.normal_lattice, b.normal_lattice)
        search = el_isomorphism_search(a.elattice, b.elattice)

        n_witness = None
        if n_iso is not None:
            n_witness = [[a.normal_lattice.elements[i], b.normal_lattice.elements[j]] for i, j in enumerate(n_iso)]
        el_witness = None
        if search.witness is not None:
            el_witness = {
                "fix_iso": [[x, y] for x, y in sorted(search.witness.fix_iso.items())],
                "map": list(search.witness.map),
            }
        logger.info(f"compare {a.spec} / {b.spec}: L={l_iso is not None} N={n_iso is not None} εL={el_witness is not None}")
        return {
            "isomorphic": group_iso is not None,
            "group_iso": list(group_iso.map) if group_iso is not None else None,
            "l_iso": l_iso is not None,
            "l_iso_witness": [[i, j] for i, j in enumerate(l_iso)] if l_iso is not None else None,
            "n_iso": n_iso is not None,
            "n_iso_witness": n_witness,
            "el_iso": search.witness is not None,
            "el_iso_witness": el_witness,
            "fix_iso_count": search.fix_iso_count,
            "admissible_count": search.admissible_count,
            "class_sizes": [list(a.class_profile), list(b.class_profile)],
            "subgroup_counts": [a.lattice.size, b.lattice.size],
        }


analysis = AnalysisService()
