import random
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from conftest import make_dfa, mealies, random_coloring, random_sink_dfa
from mealysync import automata, groups
from mealysync.errors import Nilpotent, NoSink, NotInvertible, NotSynchronizing
from mealysync.families import cerny, cerny_machine
from mealysync.groups import ColoringEnumerator, ExceedsCap, Finite
from mealysync.mealy import (GroupColoring, GroupWord, MealyMachine, adding_machine, apply,
                             color, element_of, equal_elements)

NILPOTENT = make_dfa([[1, 2], [2, 2], [2, 2]])  # a -0-> b, a -1-> s, b -> s
ADDING_DFA = make_dfa([[1, 0], [1, 1]])         # q -0-> s, q -1-> q


def nilpotent_machines():
    return [color(NILPOTENT, chi) for chi in ColoringEnumerator(NILPOTENT)]


# -- enumeration -------------------------------------------------------------------------

@pytest.mark.invariant
@pytest.mark.parametrize("idx", range(8))
def test_enumeration_exactness(idx):
    m = nilpotent_machines()[idx]
    table = groups.enumerate_group(m)
    assert table.closed
    words = list(table.elements.values())
    for i in range(len(words)):
        for j in range(i + 1, len(words)):
            assert not equal_elements(m, words[i], words[j])
    # one more sweep by every generator and inverse stays inside
    for x in table.elements:
        for q, e in product(m.states, (1, -1)):
            assert element_of(m, GroupWord.gen(q, e)).compose(x) in table.elements
    # each stored word evaluates to its key
    for x, w in table.elements.items():
        assert element_of(m, w) == x


@pytest.mark.parametrize("idx", range(8))
def test_nilpotent_orders_match_level_action(idx):
    m = nilpotent_machines()[idx]
    n = automata.nilpotency_index(NILPOTENT)
    assert groups.enumerate_group(m).order == oracles.group_order_on_level(m, n + 1)


@pytest.mark.parametrize("seed", range(12))
def test_random_nilpotent_colourings(seed):
    rng = random.Random(seed)
    d = random_sink_dfa(rng, rng.randint(2, 4), 2, p_back=0.0)
    m = color(d, random_coloring(rng, d))
    n = automata.nilpotency_index(d)
    assert groups.enumerate_group(m).order == oracles.group_order_on_level(m, n + 1)


def test_counts_per_length_sum_to_order():
    m = nilpotent_machines()[5]
    t = groups.enumerate_group(m)
    assert sum(t.counts) == t.order
    assert t.report().startswith("status: closed\norder: ")


def test_enumeration_cap_is_inconclusive():
    t = groups.enumerate_group(adding_machine(), element_cap=50)
    assert not t.closed and t.order is None
    assert t.status == ExceedsCap(50)


def test_enumeration_needs_invertibility():
    with pytest.raises(NotInvertible):
        groups.enumerate_group(MealyMachine(make_dfa([[0, 0]]), [[0, 0]]))


@pytest.mark.parametrize("n", [3, 4])
def test_cerny_flip_group(n):
    """Every state outputs 1 - x, so all generators are one involution."""
    m = cerny_machine(n)
    t = groups.enumerate_group(m)
    assert t.order == 2 == oracles.group_order_on_level(m, 3)
    for q in m.states:
        assert equal_elements(m, GroupWord.gen(q), GroupWord.gen("0"))


@st.composite
def machine_and_word(draw):
    m = draw(mealies(max_n=3, max_k=2))
    fs = draw(st.lists(st.tuples(st.sampled_from(m.states), st.sampled_from([1, -1])),
                       max_size=5))
    return m, GroupWord(tuple(fs))


@pytest.mark.invariant
@given(machine_and_word())
@settings(max_examples=60, deadline=None)
def test_canonical_form_stability(mg):
    m, g = mg
    assert element_of(m, g * g.inverse()) == element_of(m, GroupWord())
    assert element_of(m, g.inverse() * g).is_identity


# -- element orders ----------------------------------------------------------------------------

def test_adding_machine_has_infinite_order():
    r = groups.element_order(adding_machine(), GroupWord.gen("q"), cap=64)
    assert r == ExceedsCap(64)
    assert str(r) == "exceeds-cap(64)"
    assert groups.element_order(adding_machine(), GroupWord.gen("s")) == Finite(1)


@pytest.mark.parametrize("idx", range(8))
def test_element_orders_in_finite_groups(idx):
    m = nilpotent_machines()[idx]
    n = automata.nilpotency_index(NILPOTENT) + 1
    for q in m.states:
        perm = oracles.level_permutation(m, [(q, 1)], n)
        words = list(product(m.alphabet, repeat=n))
        ix = {w: i for i, w in enumerate(words)}
        p = [ix[w] for w in perm]
        cur, order = p[:], 1
        while cur != list(range(len(words))):
            cur = [p[i] for i in cur]
            order += 1
        assert groups.element_order(m, GroupWord.gen(q)) == Finite(order)


@pytest.mark.invariant
@pytest.mark.parametrize("m_len", range(1, 11))
def test_adding_machine_law(m_len):
    """q^n applied to 0^m is n in little-endian binary."""
    am = adding_machine()
    w = ("0",) * m_len
    for n in range(2 ** m_len):
        expect = tuple(str(n >> i & 1) for i in range(m_len))
        assert w == expect
        w = apply(am, "q", w)


# -- relations and colourings -----------------------------------------------------------------

def test_relation_search_on_adding_machine():
    pairs = groups.relation_search(adding_machine(), 2)
    assert [(str(a), str(b)) for a, b in pairs] == [
        ("q", "q s"), ("q", "s q"), ("s", "s s"), ("q s", "s q")]


def test_coloring_enumerator():
    colourings = list(ColoringEnumerator(NILPOTENT))
    assert len(colourings) == len(ColoringEnumerator(NILPOTENT)) == 8
    assert len(set(colourings)) == 8


# -- adding-machine colourings ----------------------------------------------------------------

def test_adding_machine_coloring_recovers_the_adding_machine():
    amc = groups.adding_machine_coloring(ADDING_DFA)
    m = color(ADDING_DFA, amc.coloring)
    assert (amc.q0, amc.k, amc.d, amc.case) == ("a", 1, 1, "d<=k")
    for w in oracles.all_words(m.alphabet, 6):
        assert apply(m, "a", w) == apply(adding_machine(), "q", w)
    assert groups.verify_block_recursion(amc, m)


@pytest.mark.parametrize("seed", range(30))
def test_adding_machine_coloring_on_random_sink_dfas(seed):
    rng = random.Random(seed)
    d = random_sink_dfa(rng, rng.randint(3, 6), rng.randint(2, 3), p_back=0.5)
    if not automata.is_synchronizing(d)[0]:
        return
    if automata.is_nilpotent(d):
        with pytest.raises(Nilpotent):
            groups.adding_machine_coloring(d)
        return
    amc = groups.adding_machine_coloring(d)
    m = color(d, amc.coloring)
    assert groups.element_order(m, GroupWord.gen(amc.q0), 64) == ExceedsCap(64)
    if amc.case == "d<=k":
        assert groups.verify_block_recursion(amc, m)


def test_adding_machine_coloring_errors():
    with pytest.raises(NoSink):
        groups.adding_machine_coloring(cerny(3))
    with pytest.raises(NotSynchronizing):
        groups.adding_machine_coloring(make_dfa([[0, 0], [1, 1]]))
    with pytest.raises(Nilpotent):
        groups.adding_machine_coloring(NILPOTENT)


def test_long_cycle_block_view():
    # q -0-> r -0-> q is the cycle, q -1-> s exits, r -1-> s
    d = make_dfa([[1, 2], [0, 2], [2, 2]])
    amc = groups.adding_machine_coloring(d)
    m = color(d, amc.coloring)
    assert amc.k == 2 and amc.blocks[0] == ("0", "0")
    assert groups.block_view(amc, m)["0"] == ("1", amc.q0)


@pytest.mark.parametrize("n", range(0, 11))
def test_prefix_law_with_odometer_exponent(n):
    """With the bars read as binary digits (0-bar = 1), q0^(1 + 2^n) sends
    0-bar^(n+2) to 1-bar^n 0-bar 1-bar."""
    amc = groups.adding_machine_coloring(ADDING_DFA)
    m = color(ADDING_DFA, amc.coloring)
    ok, got, want = groups.prefix_law(amc, m, n, exponent=1 + 2 ** n)
    assert ok, (got, want)


def test_base_of_the_block_recursion():
    # q0 o 0-bar^infinity = 1-bar^infinity, checked on a long prefix
    amc = groups.adding_machine_coloring(ADDING_DFA)
    m = color(ADDING_DFA, amc.coloring)
    _, got, _ = groups.prefix_law(amc, m, 10, exponent=1)
    assert got == "1" * 12


# -- finite iff nilpotent -------------------------------------------------------------------------

def test_experiment_on_nilpotent_dfa():
    rep = groups.finite_iff_nilpotent_experiment(NILPOTENT)
    assert rep.nilpotent and rep.all_closed and rep.consistent
    assert rep.colorings_checked == rep.colorings_total == 8
    assert rep.within_pair_bound
    assert "pair-bound: 16 divides-all: true" in rep.report()


def test_experiment_on_adding_dfa():
    rep = groups.finite_iff_nilpotent_experiment(ADDING_DFA)
    assert not rep.nilpotent and rep.consistent
    assert rep.witness_order == ExceedsCap(64)


@pytest.mark.invariant
def test_nilpotent_colouring_bound():
    """Group orders divide |Sym(A)|^((|A|^n - 1)/(|A| - 1))."""
    bound = groups.wreath_bound(NILPOTENT)
    assert bound == 8
    for m in nilpotent_machines():
        assert bound % groups.enumerate_group(m).order == 0


def test_nilpotent_orders_divide_pair_bound():
    rng = random.Random(3)
    for _ in range(10):
        d = random_sink_dfa(rng, rng.randint(2, 4), 2, p_back=0.0)
        m = color(d, random_coloring(rng, d))
        assert groups.pair_bound(d) % groups.enumerate_group(m).order == 0


def test_identity_colouring_is_trivial():
    m = color(NILPOTENT, GroupColoring.identity(NILPOTENT))
    assert groups.enumerate_group(m).order == 1
