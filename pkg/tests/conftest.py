import functools

import pytest
from hypothesis import HealthCheck, settings

from modularpoly.modpoly import PhiStore
from modularpoly.oracle import eval_interp_phi, phi_qexp

settings.register_profile("ci", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("ci")


@functools.lru_cache(maxsize=None)
def oracle_j(l):
    return phi_qexp(l)


@functools.lru_cache(maxsize=None)
def oracle_other(inv, l):
    return eval_interp_phi(inv, l)


@pytest.fixture(scope="session")
def cache_dir(tmp_path_factory):
    return str(tmp_path_factory.mktemp("cache"))


@pytest.fixture(scope="session")
def store(cache_dir):
    return PhiStore(cache_dir)
