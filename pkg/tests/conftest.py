import random

import pytest
from hypothesis import settings

from cantorv.core import Signature
from cantorv.parsing import parse_code, parse_tableau

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

V21 = Signature(2, 1)


def words(code) -> set:
    """Address words of a code, as strings (single-root signatures)."""
    return {"".join(map(str, a.word)) or "e" for a in code}


def code(text, sig=V21):
    return parse_code(text, sig)


def tab(text, sig=None):
    return parse_tableau(text, sig)


@pytest.fixture
def A():
    return parse_tableau("n=2 r=1 {0->00, 10->01, 11->1}")


@pytest.fixture
def rng():
    return random.Random(1234)
