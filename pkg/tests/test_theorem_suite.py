import pytest

from elatlab.config.settings import settings
from elatlab.core.catalog import catalog_scope
from elatlab.core.exceptions import GroupSpecError, ScopeError, UnknownCheckError
from elatlab.models.reports import Verdict
from elatlab.services.theorem_suite import TheoremSuite


@pytest.fixture(scope="module")
def suite():
    return TheoremSuite()


def by_description(result):
    return {i.description: i for i in result.instances}


def test_registry_order(suite):
    assert suite.check_ids[:4] == ["simple_preserved", "dedekind_preserved", "simple_iff_count", "dedekind_iff_liso"]
    assert len(suite.check_ids) == 18
    assert suite.resolve_ids(["all"]) == suite.check_ids
    assert suite.resolve_ids([]) == suite.check_ids
    assert suite.resolve_ids(["axioms", "axioms", "corollary3"]) == ["axioms", "corollary3"]
    assert suite.resolve_ids(["all", "corollary3"]) == suite.check_ids
    assert suite.resolve_ids(["corollary3", "all"])[0] == "corollary3"


def test_unknown_check(suite):
    with pytest.raises(UnknownCheckError, match="no_such_check"):
        suite.resolve_ids(["no_such_check"])
    with pytest.raises(UnknownCheckError):
        suite.run_check("no_such_check")


def test_scope_validation(suite):
    with pytest.raises(GroupSpecError):
        suite.scopes(["S3", "K9"])
    with pytest.raises(ScopeError):
        suite.scopes(["A5"], max_order=24)
    assert suite.scopes(["S3", "Dih6", "S3"]) == (["S3", "Dih6"], ["S3", "Dih6"])


def test_default_scopes_follow_settings(suite):
    pair, single = suite.scopes()
    assert "S4" in pair and "Q8xC3" in pair
    assert "Dih16" in single and "A5" not in single


def test_counterexamples(suite):
    q8_d4 = suite.run_check("counterexample_q8_d4")
    assert q8_d4.overall == Verdict.PASS
    witness = q8_d4.instances[0].witness
    assert witness["normal_lattice_iso"] is not None
    assert witness["el_iso"] is False

    pgroup = suite.run_check("counterexample_pgroup")
    assert pgroup.overall == Verdict.PASS
    assert pgroup.instances[0].witness["plain_lattice_iso"] is not None


def test_towers_report_the_d4_divergence(suite):
    result = suite.run_check("examples_towers")
    assert result.overall == Verdict.DIVERGENCE
    instances = by_description(result)
    for level in ("aut0", "aut1", "aut2"):
        assert instances[f"{level}(S3)"].verdict == Verdict.PASS
    assert instances["aut0(D4)"].witness["computed"] == "S4"
    assert instances["aut1(D4)"].witness["computed"] == "D4"
    aut2 = instances["aut2(D4)"]
    assert aut2.verdict == Verdict.DIVERGENCE
    assert aut2.witness == {"computed": "V4", "order": 4, "published": "C2", "oracle_order": 4}


def test_psi_surjectivity_divergence(suite):
    result = suite.run_check("psi_surjectivity")
    assert result.overall == Verdict.DIVERGENCE
    witness = result.instances[0].witness
    assert (witness["aut_fix"], witness["im_psi"], witness["aut_e"], witness["brute_force"]) == (2, 1, 1, 1)


def test_corollary3(suite):
    result = suite.run_check("corollary3", scope=["S3", "C4", "C8", "C9", "S4"])
    assert result.overall == Verdict.PASS
    instances = by_description(result)
    assert instances["S3"].witness == {"predicted": 6, "enumerated": 6, "factored": "3!", "brute_force": 6}
    assert instances["S4"].verdict == Verdict.SKIPPED


def test_corollary3_needs_a_chain(suite):
    result = suite.run_check("corollary3", scope=["Q8", "D4"])
    assert result.vacuous
    assert result.overall == Verdict.PASS


@pytest.mark.parametrize("check_id, scope", [
    ("simple_preserved", ["C2", "C3", "C5"]),
    ("dedekind_preserved", ["Q8", "C4xC2", "C6"]),
    ("simple_iff_count", ["C2", "C3", "C7"]),
    ("dedekind_iff_liso", ["Q8", "C4xC2", "Z3xZ3", "C6", "C10"]),
    ("frattini_containment", ["C4", "C9", "D4", "Q8"]),
    ("derived_containment", ["S3", "D4", "Q8", "A4"]),
    ("quotient_lemma", ["S3", "C4", "C9", "Q8", "D4"]),
    ("heineken_consequence", ["C4xC2", "Q8", "Z3xZ3"]),
    ("exact_sequence", ["S3", "D4", "Q8", "A4"]),
    ("axioms", ["C1", "S3", "D4", "Q8", "A4"]),
    ("prop1_equivalence", ["S3", "C12", "Q8"]),
    ("iso_implications", ["S3", "Dih6", "C6", "Q8", "D4"]),
    ("tower_containments", ["S3", "D4", "Q8"]),
])
def test_checks_pass_on_small_scopes(suite, check_id, scope):
    result = suite.run_check(check_id, scope=scope)
    failing = [i for i in result.instances if i.verdict == Verdict.FAIL]
    assert failing == []
    assert result.overall == Verdict.PASS
    assert not result.vacuous
    assert not [i.description for i in result.instances if i.verdict == Verdict.FAIL]


def test_empty_scope_is_vacuous(suite):
    result = suite.run_check("simple_preserved", scope=[])
    assert result.vacuous
    assert result.overall == Verdict.PASS
    assert result.instances[0].verdict == Verdict.SKIPPED


def test_claims_come_from_the_message_catalog(suite):
    result = suite.run_check("corollary3", scope=["C4"])
    assert result.claim.startswith("If Fix ε is a chain")


def test_run_is_ordered(suite):
    results = suite.run(["axioms", "counterexample_pgroup"], scope=["S3"])
    assert [r.check_id for r in results] == ["axioms", "counterexample_pgroup"]


def test_prop1_covers_every_small_catalog_lattice(suite, lattice_of):
    small = [
        name for name in catalog_scope(settings.single_scope_max_order)
        if lattice_of(name).size <= settings.brute_force_max_carrier
    ]
    assert {"C1", "C2", "S3", "Q8", "V4", "C12"} <= set(small)
    result = suite.run_check("prop1_equivalence", scope=small)
    assert result.overall == Verdict.PASS
    covered = {i.description.split(" -> ")[0] for i in result.instances}
    assert set(small) <= covered


@pytest.mark.slow
@pytest.mark.parametrize("check_id", ["derived_containment", "frattini_containment", "quotient_lemma"])
def test_containment_checks_on_the_default_scope(suite, check_id):
    result = suite.run_check(check_id)
    assert result.overall == Verdict.PASS
    assert not result.vacuous
    assert not [i.description for i in result.instances if i.verdict == Verdict.FAIL]
