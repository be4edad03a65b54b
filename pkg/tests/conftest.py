from functools import lru_cache

import pytest

from coxfano.enumerate import ClassifyOptions, classify


@lru_cache(maxsize=None)
def run(d, mu, torsion="nontrivial", jobs=1, **kw):
    return tuple(classify(ClassifyOptions(d, mu, torsion=torsion, **kw), jobs=jobs))


@pytest.fixture(scope="session")
def surface_runs():
    return {mu: run(2, mu) for mu in (2, 3, 4, 5, 6)}


@pytest.fixture(scope="session")
def threefold_run():
    return run(3, 2, jobs=4)
