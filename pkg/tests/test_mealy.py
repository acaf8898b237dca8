import random
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from conftest import make_dfa, mealies, random_mealy
from mealysync import mealy as M
from mealysync.errors import NotBijective, NotInvertible, ParseError, ResourceExceeded
from mealysync.mealy import GroupColoring, GroupWord, MealyMachine


def corpus_machines(seed=11, size=12):
    rng = random.Random(seed)
    return [random_mealy(rng, rng.randint(1, 4), rng.randint(2, 3), sink=i % 2 == 0)
            for i in range(size)]


def words_upto(alphabet, n):
    return list(oracles.all_words(alphabet, n))


# -- parsing and basic structure ----------------------------------------------------

def test_round_trip_and_invertibility():
    m = M.adding_machine()
    assert M.parse_mealy(M.render_mealy(m)) == m
    assert m.invertible
    bad = M.parse_mealy("type: mealy\nalphabet: 0 1\nstates: q\ntrans: q 0|0 q\ntrans: q 1|0 q\n")
    assert not bad.invertible


def test_parse_requires_output_labels():
    with pytest.raises(ParseError):
        M.parse_mealy("type: mealy\nalphabet: 0\nstates: q\ntrans: q 0 q\n")
    with pytest.raises(ParseError):
        M.parse_mealy("type: dfa\nalphabet: 0\nstates: q\ntrans: q 0 q\n")


def test_coloring_must_be_bijective():
    d = make_dfa([[0, 0]])
    with pytest.raises(NotBijective):
        GroupColoring(d.states, d.alphabet, [("0", "0")])
    chi = GroupColoring.from_map(d, {"a": {"0": "1", "1": "0"}})
    assert chi.as_map() == {"a": {"0": "1", "1": "0"}}


def test_group_word_syntax():
    g = GroupWord.parse("q r^-1 q^+1")
    assert g.factors == (("q", 1), ("r", -1), ("q", 1))
    assert str(g.inverse()) == "q^-1 r q^-1"
    assert str(GroupWord.parse("  ")) == "1"
    assert (GroupWord.gen("q") ** -2).factors == (("q", -1), ("q", -1))
    with pytest.raises(ValueError):
        GroupWord.parse("q^2")


# -- the adding machine -------------------------------------------------------------------

def test_adding_machine_increments():
    m = M.adding_machine()
    assert M.apply(m, "q", "00") == ("1", "0")
    assert M.apply(m, "q", "110") == ("0", "0", "1")
    assert M.apply_word(m, GroupWord.parse("q q"), "000") == ("0", "1", "0")
    assert M.is_identity(m, GroupWord.parse("q q^-1"))
    assert not M.is_identity(m, GroupWord.gen("q") ** 64)


def test_adding_machine_wreath_recursion():
    m = M.adding_machine()
    r = M.wreath_recursion(m, GroupWord.gen("q"))
    assert str(r) == "(s, q) [0->1 1->0]"
    assert r.section("1") == GroupWord.gen("q")


# -- properties ------------------------------------------------------------------------------------

@pytest.mark.invariant
@pytest.mark.parametrize("idx", range(12))
def test_basic_lemma(idx):
    """A_q(uv) = A_q(u) A_{q.u}(v), exhaustively for |u|, |v| <= 4."""
    m = corpus_machines()[idx]
    t, _ = oracles.mealy_tables(m)
    ws = words_upto(m.alphabet, 4 if m.k == 2 else 3)
    for q in m.states:
        for u in ws:
            qu = oracles.run(t, q, u)
            left = M.apply(m, q, u)
            for v in ws:
                assert M.apply(m, q, u + v) == left + M.apply(m, qu, v)


@pytest.mark.invariant
@given(mealies(invertible=False), st.lists(st.integers(0, 2), max_size=12))
@settings(max_examples=100, deadline=None)
def test_length_and_prefix_preservation(m, raw):
    w = tuple(m.alphabet[i % m.k] for i in raw)
    for q in m.states:
        out = M.apply(m, q, w)
        assert len(out) == len(w)
        assert out == oracles.transduce(m, q, w)
        for i in range(len(w)):
            assert M.apply(m, q, w[:i]) == out[:i]


@pytest.mark.invariant
@given(mealies(), st.lists(st.integers(0, 2), max_size=10))
@settings(max_examples=100, deadline=None)
def test_inversion_round_trips(m, raw):
    w = tuple(m.alphabet[i % m.k] for i in raw)
    inv = M.invert(m)
    assert M.invert(inv) == m
    for q in m.states:
        assert M.apply(inv, q, M.apply(m, q, w)) == w
        assert M.apply(m, q, M.apply(inv, q, w)) == w
        assert M.apply(inv, q, w) == oracles.inverse_transduce(m, q, w)


def test_invert_refuses_non_invertible():
    m = MealyMachine(make_dfa([[0, 0]]), [[0, 0]])
    with pytest.raises(NotInvertible):
        M.invert(m)


@st.composite
def machine_and_word(draw):
    m = draw(mealies(max_n=3, max_k=2))
    fs = draw(st.lists(st.tuples(st.sampled_from(m.states), st.sampled_from([1, -1])),
                       max_size=4))
    return m, GroupWord(tuple(fs))


@pytest.mark.invariant
@given(machine_and_word())
@settings(max_examples=80, deadline=None)
def test_product_machine_soundness(mg):
    m, g = mg
    P, start = M.product_machine(m, g)
    E = M.element_of(m, g)
    for w in words_upto(m.alphabet, 6):
        ref = oracles.act(m, g.factors, w)
        assert M.apply(P, start, w) == ref
        assert tuple(m.alphabet[b] for b in E.apply(m.dfa.encode(w))) == ref
        assert M.apply_word(m, g, w) == ref


def test_two_machine_compose_matches_sequential():
    rng = random.Random(5)
    for _ in range(20):
        m1, m2 = random_mealy(rng, 3, 2), random_mealy(rng, 3, 2)
        C, start = M.compose(m1, "a", m2, "b")
        for w in words_upto(m1.alphabet, 6):
            assert M.apply(C, start, w) == M.apply(m1, "a", M.apply(m2, "b", w))


def test_product_cap():
    m = M.adding_machine()
    with pytest.raises(ResourceExceeded):
        M.product_machine(m, GroupWord.gen("q") ** 5, cap=2)
    with pytest.raises(ResourceExceeded):
        M.element_of(m, GroupWord.gen("q") ** 7, cap=2)


@pytest.mark.invariant
@given(mealies(max_n=5, invertible=False))
@settings(max_examples=100, deadline=None)
def test_minimization_soundness(m):
    mm = M.minimize(m)
    classes = M.state_classes(m)
    assert mm.n == len(classes) and M.is_reduced(mm)
    ws = words_upto(m.alphabet, 5)
    for block in classes:
        rep = block[0]
        for q in block:
            for w in ws:
                assert M.apply(m, q, w) == M.apply(mm, rep, w)
    for p, q in product(mm.states, repeat=2):
        w = M.distinguishing_word(mm, p, q)
        if p == q:
            assert w is None
        else:
            assert M.apply(mm, p, w) != M.apply(mm, q, w)


def test_distinguishing_word_is_shortlex_least():
    rng = random.Random(9)
    for _ in range(30):
        m = random_mealy(rng, 4, 2)
        for p, q in product(m.states, repeat=2):
            w = M.distinguishing_word(m, p, q)
            ws = [x for x in words_upto(m.alphabet, 4)
                  if oracles.transduce(m, p, x) != oracles.transduce(m, q, x)]
            if w is None:
                assert not ws
            elif ws:
                assert w == min(ws, key=lambda x: (len(x), x))


@pytest.mark.invariant
@given(machine_and_word())
@settings(max_examples=60, deadline=None)
def test_is_identity_agrees_with_exhaustive_check(mg):
    m, g = mg
    brute = all(oracles.act(m, g.factors, w) == w for w in words_upto(m.alphabet, 8))
    assert M.is_identity(m, g) == brute


@given(machine_and_word())
@settings(max_examples=60, deadline=None)
def test_canonical_form_of_g_times_inverse(mg):
    m, g = mg
    assert M.element_of(m, g * g.inverse()) == M.element_of(m, GroupWord())
    assert M.element_of(m, g).inverse() == M.element_of(m, g.inverse())


def test_equal_elements_for_semigroup_words():
    m = M.adding_machine()
    assert M.equal_elements(m, GroupWord.parse("q s"), GroupWord.parse("s q"))
    assert not M.equal_elements(m, GroupWord.parse("q"), GroupWord.parse("q q"))


@pytest.mark.parametrize("idx", range(12))
def test_wreath_recursion_is_consistent(idx):
    m = corpus_machines()[idx]
    for q in m.states:
        for g in (GroupWord.gen(q), GroupWord.gen(q, -1), GroupWord.parse(f"{q} {m.states[0]}")):
            r = M.wreath_recursion(m, g)
            for w in words_upto(m.alphabet, 3):
                if not w:
                    continue
                out = M.apply_word(m, g, w)
                assert out[0] == r.sigma[m.alphabet.index(w[0])]
                assert out[1:] == M.apply_word(m, r.section(w[0]), w[1:])
