"""Mealy machines as sequential functions, and exact word problems for them.

A word ``A_{q_1}^{e_1} ... A_{q_m}^{e_m}`` acts right to left: the last
factor reads the input first.  Elements are compared through a canonical
transducer (reachable part, minimized, states renumbered breadth-first
from the root in alphabet order), so equality is structural.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import product as iproduct
from typing import Iterable, Mapping

from . import kernels, textformat
from .automata import Dfa
from .errors import (AlphabetMismatch, NotBijective, NotInvertible, ParseError,
                     ResourceExceeded, UnknownState)

DEFAULT_CAP = 10**6


@dataclass(frozen=True)
class MealyMachine:
    """``(Q, A, delta, lambda)``; ``lam[i][a]`` is the index of the output symbol."""

    dfa: Dfa
    lam: tuple

    def __post_init__(self):
        lam = tuple(tuple(row) for row in self.lam)
        if len(lam) != self.dfa.n or any(len(r) != self.dfa.k for r in lam):
            raise ValueError("output table must be |Q| x |A|")
        if any(not 0 <= b < self.dfa.k for r in lam for b in r):
            raise ValueError("output symbol out of range")
        object.__setattr__(self, "lam", lam)

    @classmethod
    def from_map(cls, states, alphabet, trans: Mapping, out: Mapping):
        """Build from ``{(state, symbol): state}`` and ``{(state, symbol): symbol}``."""
        dfa = Dfa.from_map(states, alphabet, trans)
        sx = {a: i for i, a in enumerate(dfa.alphabet)}
        try:
            lam = [[sx[out[(q, a)]] for a in dfa.alphabet] for q in dfa.states]
        except KeyError as exc:
            raise ValueError(f"missing or invalid output for {exc.args[0]!r}") from None
        return cls(dfa, lam)

    @property
    def states(self):
        return self.dfa.states

    @property
    def alphabet(self):
        return self.dfa.alphabet

    @property
    def n(self):
        return self.dfa.n

    @property
    def k(self):
        return self.dfa.k

    @cached_property
    def flat_out(self):
        return [b for row in self.lam for b in row]

    @cached_property
    def invertible(self) -> bool:
        return all(len(set(row)) == self.k for row in self.lam)

    def output(self, state, symbol):
        i, a = self.dfa.state_index(state), self.dfa.symbol_index(symbol)
        return self.alphabet[self.lam[i][a]]

    def __str__(self):
        return render_mealy(self)


@dataclass(frozen=True)
class GroupColoring:
    """Output permutation per state: ``images[i][a]`` is the colour of the ``a``-edge at state ``i``."""

    states: tuple
    alphabet: tuple
    images: tuple

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        images = tuple(tuple(row) for row in self.images)
        object.__setattr__(self, "images", images)
        if len(images) != len(self.states):
            raise ValueError("one permutation per state is required")
        for q, row in zip(self.states, images):
            if sorted(row) != sorted(self.alphabet) or len(row) != len(self.alphabet):
                raise NotBijective(f"colouring at state {q!r} is not a bijection: {row}")

    @classmethod
    def identity(cls, dfa: Dfa):
        return cls(dfa.states, dfa.alphabet, [dfa.alphabet] * dfa.n)

    @classmethod
    def from_map(cls, dfa: Dfa, mapping: Mapping):
        """``mapping[state][symbol] = colour``; unlisted states or symbols keep the identity."""
        rows = []
        for q in dfa.states:
            m = mapping.get(q, {})
            rows.append(tuple(m.get(a, a) for a in dfa.alphabet))
        return cls(dfa.states, dfa.alphabet, rows)

    def as_map(self):
        return {q: dict(zip(self.alphabet, row)) for q, row in zip(self.states, self.images)}


def color(dfa: Dfa, coloring: GroupColoring) -> MealyMachine:
    """``M(A, chi)``: the edge ``q -a-> q.a`` outputs ``chi_q(a)``."""
    if coloring.states != dfa.states or coloring.alphabet != dfa.alphabet:
        raise AlphabetMismatch("colouring does not match the DFA's states and alphabet")
    ix = {a: i for i, a in enumerate(dfa.alphabet)}
    return MealyMachine(dfa, [[ix[b] for b in row] for row in coloring.images])


_FACTOR = re.compile(r"^(?P<q>[^\s^]+)(?:\^(?P<e>[+-]?1))?$")


@dataclass(frozen=True)
class GroupWord:
    """Product of generators; ``factors[-1]`` acts first.  Empty means identity."""

    factors: tuple = ()

    def __post_init__(self):
        fs = tuple((q, int(e)) for q, e in self.factors)
        if any(e not in (1, -1) for _, e in fs):
            raise ValueError("exponents must be +1 or -1")
        object.__setattr__(self, "factors", fs)

    @classmethod
    def parse(cls, text: str):
        """``"q r^-1 q"``; blank text is the identity."""
        fs = []
        for tok in text.split():
            m = _FACTOR.match(tok)
            if not m:
                raise ValueError(f"bad factor {tok!r}")
            fs.append((m["q"], int(m["e"] or 1)))
        return cls(tuple(fs))

    @classmethod
    def gen(cls, q, e=1):
        return cls(((q, e),))

    @classmethod
    def positive(cls, states: Iterable):
        return cls(tuple((q, 1) for q in states))

    def __mul__(self, other):
        return GroupWord(self.factors + other.factors)

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        return GroupWord(self.factors * n)

    def __len__(self):
        return len(self.factors)

    def inverse(self):
        return GroupWord(tuple((q, -e) for q, e in reversed(self.factors)))

    @property
    def is_positive(self):
        return all(e == 1 for _, e in self.factors)

    def __str__(self):
        if not self.factors:
            return "1"
        return " ".join(q if e == 1 else f"{q}^-1" for q, e in self.factors)


@dataclass(frozen=True)
class WreathRecursion:
    """``g = (g_a)_a sigma``: ``sigma[a]`` is ``g o a`` and ``sections[a]`` acts after reading ``a``."""

    sigma: tuple
    sections: tuple
    alphabet: tuple

    def section(self, a):
        return self.sections[self.alphabet.index(a)]

    def __str__(self):
        secs = ", ".join(str(s) for s in self.sections)
        perm = " ".join(f"{a}->{b}" for a, b in zip(self.alphabet, self.sigma))
        return f"({secs}) [{perm}]"


# -- evaluation --------------------------------------------------------------

def _encode(machine, word):
    try:
        return [machine.dfa._symbol_ix[a] for a in word]
    except KeyError as exc:
        raise AlphabetMismatch(f"symbol {exc.args[0]!r} not in alphabet") from None


def _decode(machine, word):
    return tuple(machine.alphabet[b] for b in word)


def apply(machine: MealyMachine, q, w) -> tuple:
    """``A_q(w)``."""
    i = machine.dfa.state_index(q)
    return _decode(machine, kernels.transduce(machine.dfa.flat, machine.flat_out, machine.k, i,
                                              _encode(machine, w)))


def invert(machine: MealyMachine) -> MealyMachine:
    """Same states; ``q`` reads ``lambda_q(a)``, writes ``a`` and moves to ``q.a``."""
    if not machine.invertible:
        raise NotInvertible("some state function is not a permutation of the alphabet")
    k = machine.k
    delta, lam = [], []
    for i in range(machine.n):
        d, o = [0] * k, [0] * k
        for a in range(k):
            b = machine.lam[i][a]
            d[b] = machine.dfa.delta[i][a]
            o[b] = a
        delta.append(d)
        lam.append(o)
    return MealyMachine(Dfa(machine.states, machine.alphabet, delta), lam)


@lru_cache(maxsize=256)
def _inverse_cached(machine):
    return invert(machine)


def apply_word(machine: MealyMachine, g: GroupWord, w) -> tuple:
    """Apply ``g`` to ``w``, last factor first."""
    cur = list(_encode(machine, w))
    k = machine.k
    for q, e in reversed(g.factors):
        m = machine if e == 1 else _inverse_cached(machine)
        cur = kernels.transduce(m.dfa.flat, m.flat_out, k, m.dfa.state_index(q), cur)
    return _decode(machine, cur)


def section_state(machine: MealyMachine, q, w):
    """State reached by ``q`` after reading ``w``."""
    return machine.dfa.step(q, w)


# -- minimization ------------------------------------------------------------

def _classes(machine):
    return kernels.refine(machine.dfa.flat, list(machine.lam), machine.n, machine.k)


def minimize(machine: MealyMachine) -> MealyMachine:
    """Quotient by equality of state functions; each class is named after its first state."""
    cls = _classes(machine)
    reps = {}
    for i, c in enumerate(cls):
        reps.setdefault(c, i)
    order = sorted(reps.values())
    pos = {cls[i]: j for j, i in enumerate(order)}
    delta = [[pos[cls[t]] for t in machine.dfa.delta[i]] for i in order]
    lam = [machine.lam[i] for i in order]
    return MealyMachine(Dfa([machine.states[i] for i in order], machine.alphabet, delta), lam)


def is_reduced(machine: MealyMachine) -> bool:
    """All state functions ``A_q`` distinct."""
    return len(set(_classes(machine))) == machine.n


def state_classes(machine: MealyMachine) -> list:
    """Blocks of states with equal state functions, in declared order."""
    blocks = {}
    for q, c in zip(machine.states, _classes(machine)):
        blocks.setdefault(c, []).append(q)
    return list(blocks.values())


def distinguishing_word(machine: MealyMachine, p, q):
    """Shortlex-least ``w`` with ``A_p(w) != A_q(w)``, or ``None`` if ``A_p = A_q``."""
    i, j = machine.dfa.state_index(p), machine.dfa.state_index(q)
    d, lam, k = machine.dfa.delta, machine.lam, machine.k
    parent = {(i, j): None}
    queue = deque([(i, j)])
    while queue:
        node = queue.popleft()
        x, y = node
        for a in range(k):
            if lam[x][a] != lam[y][a]:
                word = [a]
                while parent[node] is not None:
                    node, b = parent[node]
                    word.append(b)
                return tuple(machine.alphabet[c] for c in reversed(word))
            nxt = (d[x][a], d[y][a])
            if nxt not in parent:
                parent[nxt] = (node, a)
                queue.append(nxt)
    return None


# -- canonical elements ------------------------------------------------------

@dataclass(frozen=True)
class Element:
    """Canonical transducer of a sequential function; state 0 is the root.

    Tables are flat (``state * k + symbol``).  Two elements are equal iff
    they define the same function on every word.
    """

    delta: tuple
    out: tuple
    k: int

    @property
    def n(self):
        return len(self.delta) // self.k

    @classmethod
    def identity(cls, k: int):
        return cls((0,) * k, tuple(range(k)), k)

    @property
    def is_identity(self):
        return self.n == 1 and self.out == tuple(range(self.k))

    @property
    def invertible(self):
        k = self.k
        return all(len(set(self.out[i:i + k])) == k for i in range(0, len(self.out), k))

    def apply(self, word):
        """Act on a word of symbol indices."""
        return kernels.transduce(list(self.delta), list(self.out), self.k, 0, list(word))

    def compose(self, other: "Element", cap: int = DEFAULT_CAP) -> "Element":
        """``self o other``: ``other`` reads first."""
        res = kernels.compose(list(self.delta), list(self.out), list(other.delta),
                              list(other.out), self.k, cap)
        if res is None:
            raise ResourceExceeded(f"product transducer exceeds {cap} states")
        delta, out, _ = res
        return canonical(delta, out, self.k)

    def inverse(self) -> "Element":
        if not self.invertible:
            raise NotInvertible("element is not invertible")
        k = self.k
        delta, out = [0] * len(self.delta), [0] * len(self.out)
        for p in range(0, len(self.delta), k):
            for a in range(k):
                b = self.out[p + a]
                delta[p + b] = self.delta[p + a]
                out[p + b] = a
        return canonical(delta, out, k)

    def to_machine(self, alphabet) -> MealyMachine:
        k = self.k
        rows = [list(self.delta[i:i + k]) for i in range(0, len(self.delta), k)]
        outs = [list(self.out[i:i + k]) for i in range(0, len(self.out), k)]
        return MealyMachine(Dfa([f"e{i}" for i in range(self.n)], alphabet, rows), outs)


def canonical(delta, out, k: int) -> Element:
    """Minimize the part reachable from state 0 and renumber breadth-first."""
    n = len(delta) // k
    # restrict to reachable states first
    seen = {0: 0}
    order = [0]
    for s in order:
        for a in range(k):
            t = delta[s * k + a]
            if t not in seen:
                seen[t] = len(order)
                order.append(t)
    if len(order) != n:
        delta = [seen[delta[s * k + a]] for s in order for a in range(k)]
        out = [out[s * k + a] for s in order for a in range(k)]
        n = len(order)
    labels = [tuple(out[s * k:(s + 1) * k]) for s in range(n)]
    cls = kernels.refine(list(delta), labels, n, k)
    rep = {}
    for s in range(n):
        rep.setdefault(cls[s], s)
    num = {cls[0]: 0}
    queue = [cls[0]]
    nd, no = [], []
    for c in queue:
        s = rep[c]
        for a in range(k):
            tc = cls[delta[s * k + a]]
            if tc not in num:
                num[tc] = len(queue)
                queue.append(tc)
            nd.append(num[tc])
            no.append(out[s * k + a])
    return Element(tuple(nd), tuple(no), k)


@lru_cache(maxsize=4096)
def generator_element(machine: MealyMachine, q, exponent: int = 1) -> Element:
    """Canonical element of ``A_q`` or ``A_q^{-1}``."""
    m = machine if exponent == 1 else _inverse_cached(machine)
    i = m.dfa.state_index(q)
    # root at i by swapping it with 0 before canonicalization
    k = m.k
    perm = list(range(m.n))
    perm[0], perm[i] = i, 0
    back = {old: new for new, old in enumerate(perm)}
    delta = [back[m.dfa.delta[old][a]] for old in perm for a in range(k)]
    out = [m.lam[old][a] for old in perm for a in range(k)]
    return canonical(delta, out, k)


def element_of(machine: MealyMachine, g: GroupWord, cap: int = DEFAULT_CAP) -> Element:
    """Canonical element of ``g``, minimizing after every factor."""
    for q, _ in g.factors:
        if q not in machine.dfa._state_ix:
            raise UnknownState(q)
    if any(e == -1 for _, e in g.factors) and not machine.invertible:
        raise NotInvertible("inverse factor on a non-invertible machine")
    elem = Element.identity(machine.k)
    for q, e in reversed(g.factors):
        elem = generator_element(machine, q, e).compose(elem, cap)
    return elem


def product_machine(machine: MealyMachine, g: GroupWord, cap: int = DEFAULT_CAP):
    """Raw product transducer for ``g`` (no minimization); returns ``(machine, start)``."""
    if any(e == -1 for _, e in g.factors) and not machine.invertible:
        raise NotInvertible("inverse factor on a non-invertible machine")
    k = machine.k
    factors = [(_inverse_cached(machine) if e == -1 else machine, machine.dfa.state_index(q))
               for q, e in reversed(g.factors)]
    start = tuple(i for _, i in factors)
    index = {start: 0}
    order = [start]
    delta, lam = [], []
    for tup in order:
        drow, orow = [], []
        for a in range(k):
            x = a
            nxt = []
            for (m, _), s in zip(factors, tup):
                nxt.append(m.dfa.delta[s][x])
                x = m.lam[s][x]
            nxt = tuple(nxt)
            j = index.get(nxt)
            if j is None:
                if len(order) >= cap:
                    raise ResourceExceeded(f"product machine exceeds {cap} states")
                j = index[nxt] = len(order)
                order.append(nxt)
            drow.append(j)
            orow.append(x)
        delta.append(drow)
        lam.append(orow)
    names = [f"p{i}" for i in range(len(order))]
    return MealyMachine(Dfa(names, machine.alphabet, delta), lam), names[0]


def compose(m1: MealyMachine, q1, m2: MealyMachine, q2, cap: int = DEFAULT_CAP):
    """Product computing ``A_{q1} o B_{q2}`` (``m2`` reads first); returns ``(machine, start)``."""
    if m1.alphabet != m2.alphabet:
        raise AlphabetMismatch(f"{m1.alphabet} vs {m2.alphabet}")
    f = generator_element(m1, q1)
    g = generator_element(m2, q2)
    res = kernels.compose(list(f.delta), list(f.out), list(g.delta), list(g.out), m1.k, cap)
    if res is None:
        raise ResourceExceeded(f"product transducer exceeds {cap} states")
    delta, out, n = res
    k = m1.k
    rows = [delta[i * k:(i + 1) * k] for i in range(n)]
    outs = [out[i * k:(i + 1) * k] for i in range(n)]
    names = [f"p{i}" for i in range(n)]
    return MealyMachine(Dfa(names, m1.alphabet, rows), outs), names[0]


def _probe_words(k, depth=3):
    for length in range(1, depth + 1):
        yield from iproduct(range(k), repeat=length)


def is_identity(machine: MealyMachine, g: GroupWord, cap: int = DEFAULT_CAP) -> bool:
    """``g`` acts trivially on every word."""
    if not g.factors:
        return True
    alpha = machine.alphabet
    for w in _probe_words(machine.k):
        word = tuple(alpha[a] for a in w)
        if apply_word(machine, g, word) != word:
            return False
    return element_of(machine, g, cap).is_identity


def equal_elements(machine: MealyMachine, g1: GroupWord, g2: GroupWord,
                   cap: int = DEFAULT_CAP) -> bool:
    """``g1`` and ``g2`` define the same function (works for semigroup words too)."""
    return element_of(machine, g1, cap) == element_of(machine, g2, cap)


def wreath_recursion(machine: MealyMachine, g: GroupWord) -> WreathRecursion:
    """Root permutation and per-letter sections of ``g``."""
    if any(e == -1 for _, e in g.factors) and not machine.invertible:
        raise NotInvertible("inverse factor on a non-invertible machine")
    d = machine.dfa
    sigma, sections = [], []
    for a in range(machine.k):
        x = a
        sec = [None] * len(g.factors)
        for pos in range(len(g.factors) - 1, -1, -1):
            q, e = g.factors[pos]
            i = d.state_index(q)
            if e == 1:
                sec[pos] = (d.states[d.delta[i][x]], 1)
                x = machine.lam[i][x]
            else:
                y = machine.lam[i].index(x)
                sec[pos] = (d.states[d.delta[i][y]], -1)
                x = y
        sigma.append(machine.alphabet[x])
        sections.append(GroupWord(tuple(sec)))
    return WreathRecursion(tuple(sigma), tuple(sections), machine.alphabet)


# -- text format ---------------------------------------------------------------

def parse_mealy(text: str) -> MealyMachine:
    """Parse ``type: mealy`` text.  Non-invertible machines are accepted; check ``.invertible``."""
    kind, alphabet, states, trans, outputs = textformat.parse(text)
    if kind != "mealy":
        raise ParseError(f"expected 'type: mealy', got {kind!r}", 1)
    return MealyMachine.from_map(states, alphabet, trans, outputs)


def render_mealy(machine: MealyMachine) -> str:
    d = machine.dfa
    rows = ((q, f"{a}|{machine.alphabet[machine.lam[i][j]]}", d.states[d.delta[i][j]])
            for i, q in enumerate(d.states) for j, a in enumerate(d.alphabet))
    return textformat.render("mealy", d.alphabet, d.states, rows)


def adding_machine() -> MealyMachine:
    """Binary odometer on ``{q, s}``: ``q`` adds one, little-endian."""
    return MealyMachine.from_map(
        ["q", "s"], ["0", "1"],
        {("q", "0"): "s", ("q", "1"): "q", ("s", "0"): "s", ("s", "1"): "s"},
        {("q", "0"): "1", ("q", "1"): "0", ("s", "0"): "0", ("s", "1"): "1"})
