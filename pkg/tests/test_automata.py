import random
from itertools import product

import pytest
from hypothesis import given, settings

import oracles
from conftest import corpus, dfas, make_dfa, random_dfa, random_sink_dfa
from mealysync import automata
from mealysync.automata import Dfa, MultipleSinks, parse_dfa, render_dfa
from mealysync.errors import NotSynchronizing, ParseError
from mealysync.families import cerny


# -- construction and text format ----------------------------------------------------

def test_parse_round_trip():
    d = cerny(4)
    assert parse_dfa(render_dfa(d)) == d


@pytest.mark.parametrize("text, line", [
    ("type: dfa\nalphabet: 0\nstates: a\ntrans: a 1 a\n", 4),
    ("type: dfa\nalphabet: 0\nstates: a\ntrans: a 0 b\n", 4),
    ("type: dfa\nalphabet: 0\nstates: a\ntrans: a 0 a\ntrans: a 0 a\n", 5),
    ("type: dfa\nalphabet: 0 0\nstates: a\n", 2),
    ("type: automaton\n", 1),
    ("type: dfa\nalphabet 0\n", 2),
])
def test_parse_errors_carry_line_numbers(text, line):
    with pytest.raises(ParseError) as err:
        parse_dfa(text)
    assert err.value.line == line


def test_parse_rejects_missing_transition():
    with pytest.raises(ParseError, match="missing transition"):
        parse_dfa("type: dfa\nalphabet: 0 1\nstates: a\ntrans: a 0 a\n")


def test_comments_and_blank_lines_are_ignored():
    d = parse_dfa("# header\ntype: dfa\n\nalphabet: x  # one letter\nstates: p\ntrans: p x p\n")
    assert d.states == ("p",) and d.alphabet == ("x",)


@pytest.mark.invariant
@given(dfas())
@settings(max_examples=60, deadline=None)
def test_out_regularity(d):
    back = parse_dfa(render_dfa(d))
    assert back == d
    assert len(back.flat) == d.n * d.k


def test_bad_tokens_rejected():
    with pytest.raises(ValueError):
        Dfa(["a b"], ["0"], [[0]])
    with pytest.raises(ValueError):
        Dfa(["a", "a"], ["0"], [[0], [0]])


# -- synchronization -----------------------------------------------------------------------

@pytest.mark.parametrize("n", [2, 3, 4, 5, 6, 7])
def test_cerny_shortest_reset_length(n):
    w = automata.shortest_reset_word(cerny(n))
    assert len(w) == (n - 1) ** 2
    assert oracles.shortest_reset_length(cerny(n)) == (n - 1) ** 2
    assert oracles.is_reset(cerny(n), w)


def test_cerny_4_word_is_shortlex_least():
    w = automata.shortest_reset_word(cerny(4))
    alphabet = ("0", "1")
    for cand in product(alphabet, repeat=9):
        if oracles.is_reset(cerny(4), cand):
            assert cand == w
            break


def test_one_state_is_synchronized_by_empty_word():
    d = make_dfa([[0]])
    assert automata.is_synchronizing(d) == (True, ())


def test_permutation_automaton_is_not_synchronizing():
    d = make_dfa([[1, 0], [0, 1]])
    assert automata.is_synchronizing(d) == (False, None)


@pytest.mark.invariant
@given(dfas(max_n=6))
@settings(max_examples=150, deadline=None)
def test_synchronizing_agrees_with_subset_bfs(d):
    ok, w = automata.is_synchronizing(d)
    ref = oracles.shortest_reset_length(d)
    assert ok == (ref is not None)
    if ok:
        assert len(w) == ref and oracles.is_reset(d, w)


@pytest.mark.invariant
@pytest.mark.parametrize("seed", range(30))
def test_sink_coaccessible_implies_synchronizing(seed):
    rng = random.Random(seed)
    while True:
        d = random_sink_dfa(rng, rng.randint(2, 7), rng.randint(1, 3), p_back=0.5)
        t = oracles.table(d)
        reach = {d.states[-1]}
        changed = True
        while changed:
            changed = False
            for q in d.states:
                if q not in reach and any(t[q, a] in reach for a in d.alphabet):
                    reach.add(q)
                    changed = True
        if reach == set(d.states):
            break
    assert automata.is_synchronizing(d)[0]


# -- sinks, nilpotency, boundedness ------------------------------------------------------

def test_multiple_sinks_reported():
    d = make_dfa([[0, 0], [1, 1], [0, 1]])
    assert automata.sink_state(d) == MultipleSinks(("a", "b"))
    assert automata.sink_state(make_dfa([[1], [0]])) is None


@pytest.mark.invariant
@given(dfas(max_n=5, max_k=2))
@settings(max_examples=150, deadline=None)
def test_nilpotency_equivalence(d):
    assert automata.is_nilpotent(d) == oracles.nilpotent(d)


@pytest.mark.parametrize("seed", range(25))
def test_nilpotency_index_is_least(seed):
    rng = random.Random(seed)
    d = random_sink_dfa(rng, rng.randint(2, 6), 2, p_back=0.0)
    n = automata.nilpotency_index(d)
    s = d.states[-1]
    t = oracles.table(d)
    assert all(oracles.image(t, d.states, w) == {s} for w in product(d.alphabet, repeat=n))
    if n > 0:
        assert any(oracles.image(t, d.states, w) != {s} for w in product(d.alphabet, repeat=n - 1))


@pytest.mark.parametrize("seed", range(40))
def test_boundedness_matches_path_counts(seed):
    rng = random.Random(seed)
    d = random_sink_dfa(rng, rng.randint(2, 6), rng.randint(1, 3), p_back=0.35)
    assert automata.is_bounded(d) == oracles.bounded(d)


def test_adding_machine_dfa_is_bounded_not_nilpotent():
    d = make_dfa([[1, 0], [1, 1]])
    assert automata.is_bounded(d) and not automata.is_nilpotent(d)


def test_two_loops_at_a_state_is_unbounded():
    d = make_dfa([[0, 0, 1], [1, 1, 1]], "012")
    assert not automata.is_bounded(d)


# -- congruences, simplicity --------------------------------------------------------------------

@pytest.mark.invariant
@given(dfas(max_n=6))
@settings(max_examples=100, deadline=None)
def test_principal_congruence_is_a_congruence(d):
    if d.n < 2:
        return
    c = automata.principal_congruence(d, d.states[0], d.states[-1])
    assert c.is_compatible(d)
    assert c.block_of(d.states[0]) == c.block_of(d.states[-1])


@given(dfas(max_n=5))
@settings(max_examples=100, deadline=None)
def test_simplicity_matches_partition_enumeration(d):
    assert automata.is_simple(d) == oracles.simple(d)


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_cerny_is_simple(n):
    assert automata.is_simple(cerny(n))


@pytest.mark.parametrize("n", [2, 3, 5, 7])
def test_prime_cerny_meets_the_sufficient_condition(n):
    assert automata.lemma_simple_sufficient(cerny(n))


def test_sufficient_condition_needs_a_prime():
    assert not automata.lemma_simple_sufficient(cerny(4))


# -- finitely generated Syn ---------------------------------------------------------------------

@pytest.mark.parametrize("seed", range(40))
def test_finitely_generated_matches_minimal_word_oracle(seed):
    rng = random.Random(seed)
    d = random_dfa(rng, rng.randint(2, 4), 2)
    if not automata.is_synchronizing(d)[0]:
        with pytest.raises(NotSynchronizing):
            automata.is_finitely_generated_syn(d)
        return
    r = automata.is_finitely_generated_syn(d)
    assert r.verdict == ("yes" if oracles.minimal_reset_words_finite(d) else "no")
    if r.verdict == "no":
        # the separator resets exactly one of S and m(word)
        S = r.subset
        img = oracles.image(oracles.table(d), S, r.word)
        assert img == set(S)


@pytest.mark.parametrize("n", [3, 4])
def test_cerny_syn_is_not_finitely_generated(n):
    assert automata.is_finitely_generated_syn(cerny(n)).verdict == "no"
    assert not oracles.minimal_reset_words_finite(cerny(n))


def test_monoid_cap_gives_unknown():
    assert automata.is_finitely_generated_syn(cerny(5), monoid_cap=3).verdict == "unknown"


@pytest.mark.invariant
def test_chain_on_generated_corpus():
    """nilpotent => bounded => finitely generated => synchronizing."""
    seen = {"nilpotent": 0, "bounded": 0, "fg": 0}
    for d in corpus():
        sync = automata.is_synchronizing(d)[0]
        nil = automata.is_nilpotent(d)
        unique = isinstance(automata.sink_state(d), str)
        bnd = automata.is_bounded(d) if unique else False
        fg = automata.is_finitely_generated_syn(d).verdict == "yes" if sync else False
        assert not nil or bnd
        assert not bnd or not sync or fg
        assert not fg or sync
        seen["nilpotent"] += nil
        seen["bounded"] += bnd
        seen["fg"] += fg
    # the corpus exercises every link
    assert all(v > 0 for v in seen.values())


def test_classify_fields():
    c = automata.classify(cerny(4))
    assert c.synchronizing and c.shortest_reset_length == 9
    assert c.sink is None and not c.nilpotent and c.bounded is None
    assert c.simple and c.strongly_connected
