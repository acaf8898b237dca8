import random
import string

import pytest
from hypothesis import strategies as st

from mealysync.automata import Dfa
from mealysync.mealy import GroupColoring, MealyMachine, color

LETTERS = "01234"


def make_dfa(delta, alphabet=None):
    n, k = len(delta), len(delta[0])
    alphabet = alphabet or LETTERS[:k]
    return Dfa([string.ascii_lowercase[i] for i in range(n)], tuple(alphabet), delta)


def random_dfa(rng, n, k):
    return make_dfa([[rng.randrange(n) for _ in range(k)] for _ in range(n)])


def random_sink_dfa(rng, n, k, p_back=0.3):
    """Sink is the last state.  Edges mostly go forward, sometimes back."""
    delta = []
    for i in range(n - 1):
        row = []
        for _ in range(k):
            if rng.random() < p_back:
                row.append(rng.randrange(n - 1))
            else:
                row.append(rng.randrange(i + 1, n))
        if all(t == i for t in row):
            row[0] = i + 1  # keep the sink unique
        delta.append(row)
    delta.append([n - 1] * k)
    return make_dfa(delta)


def random_coloring(rng, dfa):
    rows = []
    for _ in dfa.states:
        row = list(dfa.alphabet)
        rng.shuffle(row)
        rows.append(row)
    return GroupColoring(dfa.states, dfa.alphabet, rows)


def random_mealy(rng, n, k, sink=False):
    d = random_sink_dfa(rng, n, k) if sink else random_dfa(rng, n, k)
    return color(d, random_coloring(rng, d))


def corpus(seed=2024, size=20):
    """A fixed mixed corpus: sink automata of several shapes plus general ones."""
    rng = random.Random(seed)
    out = []
    for i in range(size):
        n = 2 + i % 4
        k = 2 + (i // 4) % 2
        if i % 3 == 2:
            out.append(random_dfa(rng, n, k))
        else:
            out.append(random_sink_dfa(rng, n, k, p_back=[0.0, 0.3, 0.6][i % 3]))
    return out


@st.composite
def dfas(draw, max_n=5, max_k=3):
    n = draw(st.integers(1, max_n))
    k = draw(st.integers(1, max_k))
    delta = [[draw(st.integers(0, n - 1)) for _ in range(k)] for _ in range(n)]
    return make_dfa(delta)


@st.composite
def mealies(draw, max_n=4, max_k=3, invertible=True):
    d = draw(dfas(max_n=max_n, max_k=max_k))
    rows = []
    for _ in d.states:
        if invertible:
            rows.append(draw(st.permutations(list(d.alphabet))))
        else:
            rows.append([draw(st.sampled_from(d.alphabet)) for _ in d.alphabet])
    if invertible:
        return color(d, GroupColoring(d.states, d.alphabet, rows))
    ix = {a: i for i, a in enumerate(d.alphabet)}
    return MealyMachine(d, [[ix[b] for b in r] for r in rows])


@pytest.fixture
def rng():
    return random.Random(7)


# -- acceptance summary ---------------------------------------------------------------

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
