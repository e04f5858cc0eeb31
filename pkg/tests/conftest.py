import random

import pytest

from enumkit.model import CnfFormula


def cnf(n, *clauses):
    return CnfFormula(n, [tuple(c) for c in clauses])


@pytest.fixture
def rng():
    return random.Random(1234)
