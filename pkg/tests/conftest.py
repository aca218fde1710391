import pytest
from hypothesis import HealthCheck, settings as hypothesis_settings

from elatlab.core.catalog import catalog_group
from elatlab.core.elattice import subgroup_elattice
from elatlab.core.subgroups import all_subgroups

hypothesis_settings.register_profile(
    "elatlab",
    max_examples=30,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
hypothesis_settings.load_profile("elatlab")


@pytest.fixture(scope="session")
def lattice_of():
    """Subgroup lattice of a catalog group, built once per name."""
    built = {}

    def build(name):
        if name not in built:
            built[name] = all_subgroups(catalog_group(name))
        return built[name]

    return build


@pytest.fixture(scope="session")
def elattice_of(lattice_of):
    return lambda name: subgroup_elattice(lattice_of(name))
