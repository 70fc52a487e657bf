import pytest

from pairing_automata import validate_pairing
from support import CYCLE3, EXAMPLE_3X4, SWAP2


@pytest.fixture
def ex34():
    return validate_pairing(EXAMPLE_3X4)


@pytest.fixture
def swap2():
    return validate_pairing(SWAP2)


@pytest.fixture
def cycle3():
    return validate_pairing(CYCLE3)
