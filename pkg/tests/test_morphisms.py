from itertools import islice, permutations, product
from math import factorial

import pytest
from hypothesis import given, strategies as st

from elatlab.core.elattice import FixLattice, inflate, normal_lattice, plain_lattice
from elatlab.core.exceptions import (
    InvalidIsomorphismError,
    MalformedMapError,
    NotNormalError,
    OrderBoundError,
    ThresholdExceededError,
)
from elatlab.core.morphisms import (
    ELIsomorphism,
    ELMap,
    _class_choices,
    aut_e_decomposition,
    aut_towers,
    brute_force_isomorphisms,
    check_el_morphism,
    el_isomorphism_search,
    enumerate_aut_e,
    exact_sequence_report,
    iter_el_isomorphisms,
    lattice_isomorphism,
    lattice_isomorphisms,
    quotient_induced_iso,
)

small_inflations = st.sampled_from(
    [FixLattice.chain(2), FixLattice.chain(3), FixLattice.diamond(2), FixLattice.diamond(3)]
).flatmap(
    lambda base: st.lists(st.integers(1, 3), min_size=base.size, max_size=base.size).map(
        lambda sizes: inflate(base, sizes)
    )
)


@pytest.mark.parametrize("name, total, factored, aut_fix", [
    ("C4", 1, "1", 1),
    ("S3", 6, "3!", 1),
    ("Q8", 6, "6", 6),
    ("D4", 144, "4! × 6", 6),
    ("A4", 5040, "7!", 1),
])
def test_aut_e_decomposition(elattice_of, name, total, factored, aut_fix):
    d = aut_e_decomposition(elattice_of(name))
    assert d.total_order == total
    assert d.factored == factored
    assert d.aut_fix_order == aut_fix
    assert d.psi_surjective


def test_s4_order_is_factored(elattice_of):
    d = aut_e_decomposition(elattice_of("S4"))
    assert d.factored == "23! × 3!"
    assert d.total_order == factorial(23) * factorial(3)
    assert d.fix_is_chain and d.aut_fix_trivial
    with pytest.raises(ThresholdExceededError):
        enumerate_aut_e(elattice_of("S4"))


def test_psi_is_not_always_onto():
    l = inflate(FixLattice.diamond(2), (1, 2, 1, 1))
    d = aut_e_decomposition(l)
    assert d.aut_fix_order == 2
    assert d.im_psi_order == 1
    assert d.total_order == 1
    assert not d.psi_surjective
    assert len(brute_force_isomorphisms(l, l)) == 1


def test_s3_enumeration_matches_brute_force(elattice_of):
    l = elattice_of("S3")
    enumerated = {m.map for m in enumerate_aut_e(l)}
    assert len(enumerated) == 6
    assert enumerated == set(brute_force_isomorphisms(l, l))


@pytest.mark.parametrize("name", ["S3", "C8", "Q8", "D4"])
def test_exact_sequence(elattice_of, name):
    report = exact_sequence_report(elattice_of(name))
    assert report.exact
    assert report.kernel_psi_order == report.image_phi_order
    assert report.automorphism_count == report.predicted_order


@given(small_inflations)
def test_automorphism_count_matches_formula(l):
    d = aut_e_decomposition(l)
    maps = [m.map for m in iter_el_isomorphisms(l, l)]
    assert len(maps) == len(set(maps)) == d.total_order
    assert all(check_el_morphism(ELMap(l, l, m)).verdict == "iso" for m in maps)


@given(small_inflations, small_inflations)
def test_search_is_symmetric(l1, l2):
    forward = el_isomorphism_search(l1, l2)
    backward = el_isomorphism_search(l2, l1)
    assert (forward.witness is None) == (backward.witness is None)
    assert forward.admissible_count == backward.admissible_count


def test_cyclic_prime_squares_are_el_isomorphic(elattice_of):
    search = el_isomorphism_search(elattice_of("C4"), elattice_of("C9"))
    assert search.witness is not None
    assert search.fix_iso_count == 1
    assert search.witness.map == (0, 1, 2)


def test_q8_d4_counterexample(lattice_of, elattice_of):
    assert lattice_isomorphism(normal_lattice(lattice_of("Q8")), normal_lattice(lattice_of("D4"))) is not None
    assert el_isomorphism_search(elattice_of("Q8"), elattice_of("D4")).witness is None


def test_p_group_counterexample(lattice_of, elattice_of):
    assert lattice_isomorphism(plain_lattice(lattice_of("Z3xZ3")), plain_lattice(lattice_of("S3"))) is not None
    assert el_isomorphism_search(elattice_of("Z3xZ3"), elattice_of("S3")).witness is None


def test_lattice_automorphisms_of_m3():
    assert len(lattice_isomorphisms(FixLattice.diamond(3), FixLattice.diamond(3))) == 6


def test_non_homomorphism_is_classified(elattice_of):
    l = elattice_of("S3")
    swap = list(range(l.size))
    swap[0], swap[-1] = swap[-1], swap[0]
    verdict = check_el_morphism(ELMap(l, l, tuple(swap)))
    assert verdict.verdict == "not_hom"
    assert verdict.witness is not None


def test_map_outside_target(elattice_of):
    l = elattice_of("C4")
    with pytest.raises(MalformedMapError):
        ELMap(l, l, (0, 1, 3))


def test_split_and_reassemble(elattice_of):
    l = elattice_of("D4")
    for m in list(iter_el_isomorphisms(l, l))[:10]:
        iso = ELIsomorphism.from_map(m)
        assert iso.map == m.map
        assert iso.validate() is iso


def test_from_map_rejects_non_isomorphism(elattice_of):
    l = elattice_of("C4")
    with pytest.raises(InvalidIsomorphismError):
        ELIsomorphism.from_map(ELMap(l, l, (0, 0, 0)))


def test_brute_force_bound(elattice_of):
    with pytest.raises(OrderBoundError):
        brute_force_isomorphisms(elattice_of("D4"), elattice_of("D4"))


def test_towers_of_s3(lattice_of):
    towers = aut_towers(lattice_of("S3"))
    assert [(t.name, t.order) for t in (towers.aut0, towers.aut1, towers.aut2)] == [("S3", 6)] * 3
    assert all(towers.containments.values())


def test_towers_of_d4(lattice_of, elattice_of):
    towers = aut_towers(lattice_of("D4"))
    assert (towers.aut0.name, towers.aut0.order) == ("S4", 24)
    assert (towers.aut1.name, towers.aut1.order) == ("D4", 8)
    # Inner automorphisms of D4 form a Klein four-group.
    assert (towers.aut2.name, towers.aut2.order) == ("V4", 4)
    assert all(towers.containments.values())
    # Aut0 is built from class transpositions and must match the kernel of psi.
    report = exact_sequence_report(elattice_of("D4"))
    assert towers.aut0.order == report.kernel_psi_order


def test_quotient_induced_isomorphism(lattice_of, elattice_of):
    lat = lattice_of("S3")
    l = elattice_of("S3")
    identity = ELIsomorphism.from_map(ELMap(l, l, tuple(range(l.size))))
    a3 = next(h for h in lat.subgroups if h.order == 3)
    result = quotient_induced_iso(identity, lat, lat, a3)
    assert result.quotient1.order == 2
    assert result.image_of_h1 == a3
    assert result.iso.map == (0, 1)
    c2 = next(h for h in lat.subgroups if h.order == 2)
    with pytest.raises(NotNormalError):
        quotient_induced_iso(identity, lat, lat, c2)


def test_class_choices_follow_product_order():
    targets = [[1, 2], [3, 4, 5], []]
    assert list(_class_choices(targets)) == list(product(*(permutations(t) for t in targets)))


def test_isomorphisms_are_generated_lazily(elattice_of):
    # The trivial class of S4 has 24 members.
    l = elattice_of("S4")
    first = list(islice(iter_el_isomorphisms(l, l), 3))
    assert len(first) == 3
    assert first[0].map == tuple(range(l.size))
    assert len({m.map for m in first}) == 3
    assert all(check_el_morphism(m).verdict == "iso" for m in first)


def test_quotient_by_the_center_of_d4(lattice_of, elattice_of):
    lat = lattice_of("D4")
    l = elattice_of("D4")
    identity = tuple(range(l.size))
    f = next(
        ELIsomorphism.from_map(m) for m in iter_el_isomorphisms(l, l)
        if m.map != identity and all(m.map[a] == a for a in l.fix)
    )
    center = next(lat.subgroups[i] for i in lat.normal_ids if lat.subgroups[i].order == 2)
    result = quotient_induced_iso(f, lat, lat, center)
    assert result.quotient1.order == 4
    assert result.image_of_h1 == center
    assert result.iso.source.size == 5
    assert result.iso.map == (0, 1, 2, 3, 4)


def test_quotient_by_the_whole_group(lattice_of, elattice_of):
    lat = lattice_of("D4")
    l = elattice_of("D4")
    f = ELIsomorphism.from_map(next(iter_el_isomorphisms(l, l)))
    result = quotient_induced_iso(f, lat, lat, lat.whole)
    assert result.quotient1.order == 1
    assert result.iso.map == (0,)
