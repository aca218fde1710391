from itertools import combinations

import pytest

from elatlab.core.catalog import catalog_group
from elatlab.core.exceptions import OrderBoundError, SubgroupError
from elatlab.core.perm_group import is_subgroup_members
from elatlab.core.subgroups import (
    all_subgroups,
    core,
    frattini_derived,
    group_predicates,
    meet_join,
    nilpotent_by_sylow,
    prime_power_base,
)


@pytest.mark.parametrize("name, count, normal", [
    ("C1", 1, 1),
    ("C12", 6, 6),
    ("V4", 5, 5),
    ("S3", 6, 3),
    ("D4", 10, 6),
    ("Q8", 6, 6),
    ("C4xC2", 8, 8),
    ("Z2xZ2xZ2", 16, 16),
    ("Z3xZ3", 6, 6),
    ("A4", 10, 3),
    ("Q12", 8, 5),
    ("Dih12", 16, 7),
    ("S4", 30, 4),
])
def test_subgroup_and_normal_counts(lattice_of, name, count, normal):
    lat = lattice_of(name)
    assert lat.size == count
    assert len(lat.normal_ids) == normal


@pytest.mark.parametrize("name", ["C6", "V4", "S3", "D4", "Q8", "A4"])
def test_enumeration_matches_subset_oracle(lattice_of, name):
    g = catalog_group(name)
    rest = range(1, g.order)
    oracle = {
        frozenset((0,) + extra)
        for k in range(g.order)
        for extra in combinations(rest, k)
        if g.order % (k + 1) == 0 and is_subgroup_members(g, frozenset((0,) + extra))
    }
    assert {h.members for h in lattice_of(name).subgroups} == oracle


def test_ordering_and_containment(lattice_of):
    lat = lattice_of("D4")
    assert lat.trivial.order == 1
    assert lat.whole.order == 8
    assert list(lat.sizes) == sorted(lat.sizes)
    for a in lat.subgroups:
        for b in lat.subgroups:
            assert bool(lat.leq[a.id, b.id]) == (a.members <= b.members)


def test_cores_in_s3(lattice_of):
    lat = lattice_of("S3")
    for h in lat.subgroups:
        if h.order == 2:
            assert core(lat, h) == lat.trivial
        else:
            assert core(lat, h) == h


def test_meet_join_of_normal_subgroups(lattice_of):
    lat = lattice_of("D4")
    fours = [lat.subgroups[i] for i in lat.normal_ids if lat.subgroups[i].order == 4]
    assert len(fours) == 3
    meet, join = meet_join(lat, fours[0], fours[1])
    assert meet.order == 2
    assert join == lat.whole


def test_foreign_subgroup_is_rejected(lattice_of):
    lat = lattice_of("S3")
    other = lattice_of("C6").subgroups[1]
    with pytest.raises(SubgroupError):
        lat.check(other)


@pytest.mark.parametrize("name, frattini, derived", [
    ("C4", 2, 1),
    ("C6", 1, 1),
    ("S3", 1, 3),
    ("D4", 2, 2),
    ("Q8", 2, 2),
    ("A4", 1, 4),
    ("S4", 1, 12),
    ("Z2xZ2xZ2", 1, 1),
])
def test_frattini_and_derived_orders(lattice_of, name, frattini, derived):
    fd = frattini_derived(lattice_of(name))
    assert fd.frattini.order == frattini
    assert fd.derived.order == derived


def test_predicates_of_q8(lattice_of):
    p = group_predicates(lattice_of("Q8"))
    assert p.dedekind and p.hamiltonian and p.primary and p.nilpotent
    assert not p.abelian and not p.simple
    assert p.satisfies_star


def test_predicates_of_s3(lattice_of):
    p = group_predicates(lattice_of("S3"))
    assert not p.dedekind and not p.nilpotent and not p.simple
    assert p.satisfies_star


def test_hamiltonian_non_primary_group_violates_star(lattice_of):
    p = group_predicates(lattice_of("Q8xC3"))
    assert p.hamiltonian
    assert not p.primary
    assert not p.satisfies_star


@pytest.mark.parametrize("name, simple", [("C5", True), ("C1", False), ("C4", False), ("A4", False), ("A5", True)])
def test_simple(lattice_of, name, simple):
    assert group_predicates(lattice_of(name)).simple == simple


@pytest.mark.parametrize("name", ["C12", "S3", "D4", "Q8", "A4", "Dih12", "C6xC2", "Q8xC3", "S4"])
def test_nilpotency_agrees_with_sylow_oracle(lattice_of, name):
    lat = lattice_of(name)
    assert group_predicates(lat).nilpotent == nilpotent_by_sylow(lat)


def test_prime_power_base():
    assert prime_power_base(8) == 2
    assert prime_power_base(9) == 3
    assert prime_power_base(12) is None


def test_enumeration_bound():
    with pytest.raises(OrderBoundError):
        all_subgroups(catalog_group("S4"), max_order=12)
