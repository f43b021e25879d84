import random
import sys
from pathlib import Path

import pytest
from hypothesis import settings, strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from tracesys import fixtures  # noqa: E402
from tracesys.generators import SystemConfig, random_system  # noqa: E402
from tracesys.traces import IndependenceAlphabet  # noqa: E402

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

DATA = Path(__file__).resolve().parent.parent / "data"


@pytest.fixture
def sys_a():
    return fixtures.system_a()


@pytest.fixture
def sys_b():
    return fixtures.system_b()


@pytest.fixture
def sys_c():
    return fixtures.system_c()


@pytest.fixture
def m1():
    return fixtures.alphabet_m1()


@pytest.fixture
def m2():
    return fixtures.alphabet_m2()


@st.composite
def alphabets(draw, max_letters=4, min_letters=1):
    n = draw(st.integers(min_letters, max_letters))
    letters = [chr(ord("a") + k) for k in range(n)]
    pairs = [(a, b) for k, a in enumerate(letters) for b in letters[k + 1:]]
    chosen = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return IndependenceAlphabet.of(letters, [p for p, keep in zip(pairs, chosen) if keep])


@st.composite
def words(draw, alphabet, max_len=8):
    return draw(st.lists(st.sampled_from(alphabet.letters), max_size=max_len))


@st.composite
def systems(draw, config=SystemConfig()):
    """Random valid systems, reproducible from a drawn seed."""
    seed = draw(st.integers(0, 2**32 - 1))
    return random_system(random.Random(seed), config)


# acceptance criterion number -> PASS/FAIL line, filled in by tests/test_acceptance.py
ACCEPTANCE: dict = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[n])
