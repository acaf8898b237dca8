"""Reset and weakly reset Mealy machines, modified state functions, freeness.

For a synchronizing machine and a reset word ``u`` the modified state
function is ``lt_q(u)``, the single state of ``Q.(q o u)``.  Everything
here reduces to inclusion or equivalence of regular languages, so every
verdict is exact; the one open-ended search (the maximal ideal) is capped
and says so.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from itertools import product as iproduct

from . import automata, reglang
from .automata import Dfa
from .errors import (AlphabetMismatch, HypothesisFailed, NotInvertible, NotReset,
                     NotSimple, NotSynchronizing, TheoremViolation)
from .mealy import GroupColoring, MealyMachine, apply
from .reglang import IdealLang, LangAcceptor

# largest minimal acceptor allowed while iterating towards I(A)
IDEAL_STATE_CAP = 2000


def _check_alphabet(machine, L):
    if machine.alphabet != L.alphabet:
        raise AlphabetMismatch(f"{machine.alphabet} vs {L.alphabet}")


def image_language(machine: MealyMachine, q, L: LangAcceptor) -> LangAcceptor:
    """``A_q(L)``: product of the machine with ``L``, reading outputs."""
    _check_alphabet(machine, L)
    d = machine.dfa
    k = machine.k
    start = [(d.state_index(q), p) for p in sorted(L.initial)]
    index = {x: i for i, x in enumerate(start)}
    order = list(start)
    trans = []
    for x, p in order:
        row = [[] for _ in range(k)]
        for b in range(k):
            out = machine.lam[x][b]
            for p2 in L.trans[p][b]:
                nxt = (d.delta[x][b], p2)
                j = index.get(nxt)
                if j is None:
                    j = index[nxt] = len(order)
                    order.append(nxt)
                row[out].append(j)
        trans.append(row)
    finals = {i for i, (_, p) in enumerate(order) if p in L.finals}
    return LangAcceptor(L.alphabet, trans, range(len(start)), finals)


def pullback(machine: MealyMachine, q, L: LangAcceptor) -> LangAcceptor:
    """``{u : A_q(u) in L}``; deterministic whenever ``L`` is."""
    _check_alphabet(machine, L)
    table, p0, finals = reglang._dtable(L)
    d = machine.dfa
    start = (d.state_index(q), p0)
    index = {start: 0}
    order = [start]
    rows = []
    for x, p in order:
        row = []
        for a in range(machine.k):
            nxt = (d.delta[x][a], table[p][machine.lam[x][a]])
            j = index.get(nxt)
            if j is None:
                j = index[nxt] = len(order)
                order.append(nxt)
            row.append(j)
        rows.append(row)
    return LangAcceptor.from_table(L.alphabet, rows, 0,
                                   {i for i, (_, p) in enumerate(order) if p in finals})


def preimage_language(machine: MealyMachine, q, L: LangAcceptor) -> LangAcceptor:
    """``A_q^{-1}(L)`` for an invertible machine."""
    if not machine.invertible:
        raise NotInvertible("preimage needs an invertible machine")
    return pullback(machine, q, L)


def _ideal_acceptor(machine, H):
    if isinstance(H, IdealLang):
        if H.alphabet != machine.alphabet:
            raise AlphabetMismatch(f"{machine.alphabet} vs {H.alphabet}")
        return reglang.ideal_language(H), H.describe()
    if isinstance(H, LangAcceptor):
        _check_alphabet(machine, H)
        return H, "given acceptor"
    raise TypeError("ideal must be an IdealLang or a LangAcceptor")


@dataclass(frozen=True)
class ResetVerdict:
    """Outcome of a (weak) reset check.  ``witnesses[q]`` is a shortest ``u`` in
    the ideal whose image under ``A_q`` leaves it, when there is one."""

    holds: bool
    reason: str
    ideal: str
    witnesses: dict = field(default_factory=dict)

    def __bool__(self):
        return self.holds


def _stability(machine, L):
    """Per state, the shortest word of ``L`` that ``A_q`` maps out of ``L``."""
    bad = {}
    for q in machine.states:
        if reglang.includes(image_language(machine, q, L), L):
            continue
        bad[q] = reglang.counterexample(L, pullback(machine, q, L))
    return bad


def is_reset(machine: MealyMachine) -> ResetVerdict:
    """Synchronizing and ``A_q(Syn) <= Syn`` for every state."""
    ok, _ = automata.is_synchronizing(machine.dfa)
    if not ok:
        return ResetVerdict(False, "not synchronizing", "Syn")
    bad = _stability(machine, reglang.syn_language(machine.dfa))
    if bad:
        return ResetVerdict(False, "Syn not stable", "Syn", bad)
    return ResetVerdict(True, "reset", "Syn")


def is_weakly_reset(machine: MealyMachine, H) -> ResetVerdict:
    """Synchronizing, ``H <= Syn`` and ``A_q(H) <= H`` for every state."""
    L, desc = _ideal_acceptor(machine, H)
    ok, _ = automata.is_synchronizing(machine.dfa)
    if not ok:
        return ResetVerdict(False, "not synchronizing", desc)
    if reglang.is_empty(L):
        return ResetVerdict(False, "ideal is empty", desc)
    outside = reglang.counterexample(L, reglang.syn_language(machine.dfa))
    if outside is not None:
        return ResetVerdict(False, "ideal not contained in Syn", desc, {None: outside})
    bad = _stability(machine, L)
    if bad:
        return ResetVerdict(False, "ideal not stable", desc, bad)
    return ResetVerdict(True, "weakly reset", desc)


@dataclass(frozen=True)
class MaximalIdeal:
    """Result of the greatest-fixpoint iteration for ``I(A)``.

    ``status`` is ``"stabilized"`` (``language`` is exact) or ``"unknown"``
    (cap reached; ``language`` is the last iterate, a superset of ``I(A)``).
    """

    status: str
    language: LangAcceptor
    iterations: int

    @property
    def empty(self):
        return self.status == "stabilized" and reglang.is_empty(self.language)

    @property
    def weakly_reset(self):
        """``True``/``False`` when stabilized, ``None`` when unknown."""
        if self.status != "stabilized":
            return None
        return not reglang.is_empty(self.language)


def maximal_ideal(machine: MealyMachine, iteration_cap: int = 50,
                  state_cap: int = IDEAL_STATE_CAP) -> MaximalIdeal:
    """Iterate ``L_{i+1} = L_i & (cap_q A_q^{-1}(L_i))`` from ``Syn``.

    The iterates can grow without bound; once a minimal acceptor passes
    ``state_cap`` states the answer is ``unknown``.
    """
    ok, _ = automata.is_synchronizing(machine.dfa)
    if not ok:
        raise NotSynchronizing("the maximal ideal lives inside Syn, which is empty")
    cur = reglang.minimize(reglang.syn_language(machine.dfa))
    for i in range(iteration_cap + 1):
        nxt = cur
        for q in machine.states:
            nxt = reglang.minimize(reglang.intersect(nxt, pullback(machine, q, cur)))
            if nxt.size > state_cap:
                return MaximalIdeal("unknown", cur, i)
        if reglang.includes(cur, nxt):
            return MaximalIdeal("stabilized", cur, i)
        cur = nxt
    return MaximalIdeal("unknown", cur, iteration_cap)


def stable_words(machine: MealyMachine, length: int) -> list:
    """``I(A)`` restricted to one length, by brute force: the words whose
    whole orbit under the generators stays inside ``Syn``."""
    d = machine.dfa

    def is_reset_word(w):
        return len(d.image(d.states, w)) == 1

    good = []
    for u in iproduct(d.alphabet, repeat=length):
        orbit = {u}
        stack = [u]
        while stack:
            w = stack.pop()
            if not is_reset_word(w):
                break
            for q in machine.states:
                v = apply(machine, q, w)
                if v not in orbit:
                    orbit.add(v)
                    stack.append(v)
        else:
            good.append(u)
    return good


def modified_state_value(machine: MealyMachine, q, u):
    """``lt_q(u)``: the single state of ``Q.(q o u)``."""
    img = machine.dfa.image(machine.states, apply(machine, q, u))
    if len(img) != 1:
        raise NotReset(f"q o u = {''.join(apply(machine, q, u))!r} is not a reset word")
    return next(iter(img))


def _analysis_ideal(machine, H):
    """Acceptor and description of the ideal a certificate works on, or raise."""
    if H is None:
        v = is_reset(machine)
        if not v:
            raise NotReset(v.reason)
        return reglang.syn_language(machine.dfa), "Syn"
    v = is_weakly_reset(machine, H)
    if not v:
        raise NotReset(f"{v.reason} ({v.ideal})")
    L, desc = _ideal_acceptor(machine, H)
    return L, desc


def _shortlex_min(words, alphabet):
    order = {a: i for i, a in enumerate(alphabet)}
    words = [w for w in words if w is not None]
    if not words:
        return None
    return min(words, key=lambda w: (len(w), [order[a] for a in w]))


def _compare(machine, p, q, L0, cache=None):
    """Per target ``s``: ``(s, equal, witness)`` for ``A_p^{-1}(R(s)) & L0`` vs the same for ``q``.

    ``cache`` maps ``(state, target)`` to the minimized language and may be
    shared between calls with the same ``L0``.
    """
    cache = {} if cache is None else cache

    def lang(x, s):
        if (x, s) not in cache:
            R = reglang.r_language(machine.dfa, s)
            cache[(x, s)] = reglang.minimize(reglang.intersect(pullback(machine, x, R), L0))
        return cache[(x, s)]

    rows = []
    for s in machine.states:
        w = reglang.symmetric_witness(lang(p, s), lang(q, s))
        rows.append((s, w is None, w))
    return rows


def modified_state_functions_equal(machine: MealyMachine, p, q, H=None):
    """``(equal, witness)``; the witness is a shortest ``u`` with ``lt_p(u) != lt_q(u)``."""
    L0, _ = _analysis_ideal(machine, H)
    if p == q:
        machine.dfa.state_index(p)
        return True, None
    rows = _compare(machine, p, q, L0)
    w = _shortlex_min([r[2] for r in rows], machine.alphabet)
    return w is None, w


@dataclass(frozen=True)
class FreenessCertificate:
    """``verdict`` is ``"free"``, ``"singular"`` or ``"not-applicable"``.

    ``witnesses`` maps each distinct pair to a separating word; for a
    singular verdict ``transcript`` lists the per-target equivalence checks.
    """

    verdict: str
    ideal: str
    reason: str = ""
    witnesses: dict = field(default_factory=dict)
    transcript: tuple = ()
    equal_pairs: tuple = ()

    def report(self) -> str:
        lines = []
        if self.verdict == "not-applicable":
            lines.append(f"verdict: not-applicable ({self.reason})")
        else:
            lines.append(f"verdict: {self.verdict}")
        lines.append(f"ideal: {self.ideal}")
        for (p, q), w in sorted(self.witnesses.items()):
            lines.append(f"witness: {p} {q} {' '.join(w) if w else '<empty>'}")
        targets = {}
        for p, q, s in self.transcript:
            targets.setdefault((p, q), []).append(s)
        for (p, q), ss in targets.items():
            lines.append(f"equal: {p} {q} (checked on targets {' '.join(ss)})")
        return "\n".join(lines) + "\n"


def freeness_certificate(machine: MealyMachine, H=None, iteration_cap: int = 50,
                         state_cap: int = IDEAL_STATE_CAP) -> FreenessCertificate:
    """Apply the freeness criterion, or certify singularity.

    Without ``H`` the machine must be reset, or else the maximal ideal is
    tried; when it stabilizes nonempty it becomes the analysis ideal.
    """
    if not machine.invertible:
        return FreenessCertificate("not-applicable", "-", "not invertible")
    if H is None:
        v = is_reset(machine)
        if v:
            L0, desc = reglang.syn_language(machine.dfa), "Syn"
        elif v.reason == "not synchronizing":
            return FreenessCertificate("not-applicable", "Syn", "not synchronizing")
        else:
            mi = maximal_ideal(machine, iteration_cap, state_cap)
            if mi.status != "stabilized":
                return FreenessCertificate("not-applicable", "I(A) unknown", "not reset")
            if mi.empty:
                return FreenessCertificate("not-applicable", "Syn", "not reset")
            L0, desc = mi.language, f"I(A), stable after {mi.iterations} iterations"
    else:
        v = is_weakly_reset(machine, H)
        if not v:
            return FreenessCertificate("not-applicable", v.ideal, f"not weakly reset: {v.reason}")
        L0, desc = _ideal_acceptor(machine, H)

    states = machine.states
    L0 = reglang.minimize(L0)
    cache = {}
    witnesses, equal, transcript = {}, [], []
    for p, q in combinations(states, 2):
        rows = _compare(machine, p, q, L0, cache)
        w = _shortlex_min([r[2] for r in rows], machine.alphabet)
        if w is None:
            equal.append((p, q))
            transcript.extend((p, q, s) for s, _, _ in rows)
        else:
            witnesses[(p, q)] = w
    if not equal:
        return FreenessCertificate("free", desc, "distinct modified state functions", witnesses)
    if not witnesses:
        return FreenessCertificate("singular", desc, "all modified state functions equal",
                                   transcript=tuple(transcript), equal_pairs=tuple(equal))
    return FreenessCertificate("not-applicable", desc, "mixed modified state functions",
                               witnesses, tuple(transcript), tuple(equal))


def gap_classify(machine: MealyMachine, H=None, iteration_cap: int = 50,
                 state_cap: int = IDEAL_STATE_CAP) -> FreenessCertificate:
    """Free or singular, for (weakly) reset colourings of simple DFAs."""
    if not automata.is_simple(machine.dfa):
        raise NotSimple("the dichotomy needs a simple DFA")
    cert = freeness_certificate(machine, H, iteration_cap, state_cap)
    if cert.verdict in ("free", "singular"):
        return cert
    if cert.reason == "mixed modified state functions":
        raise TheoremViolation(f"simple DFA with a mixed pattern: {cert.equal_pairs}")
    raise NotReset(cert.reason)


def prop_example_coloring(dfa: Dfa, q, a, b):
    """Swap ``a`` and ``b`` at ``q``, identity elsewhere; ideal ``A*{a,b}A*``."""
    dfa.state_index(q)
    ia, ib = dfa.symbol_index(a), dfa.symbol_index(b)
    if ia == ib:
        raise HypothesisFailed("distinct letters", f"{a!r} given twice")
    if not (dfa.n > 1 and automata._is_prime(dfa.n)):
        raise HypothesisFailed("prime", f"|Q| = {dfa.n} is not a prime")
    if not automata.lemma_simple_sufficient(dfa):
        raise HypothesisFailed("transitive", "no set of permutation letters acts transitively")
    for x in (a, b):
        if len(dfa.image(dfa.states, (x,))) != 1:
            raise HypothesisFailed("synchronizing letters", f"{x!r} is not a reset word")
    if dfa.image(dfa.states, (a,)) == dfa.image(dfa.states, (b,)):
        raise HypothesisFailed("distinct targets", f"Q.{a} = Q.{b}")
    coloring = GroupColoring.from_map(dfa, {q: {a: b, b: a}})
    return coloring, IdealLang(dfa.alphabet, ((a,), (b,)))
