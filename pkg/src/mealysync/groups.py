"""Groups and semigroups generated by Mealy machines, explored exactly.

Finiteness is only claimed after closure; infinite order is only claimed
from an orbit that provably outgrows the cap.  Everything else is reported
as inconclusive.
"""

from __future__ import annotations

import math
import random
from collections import deque
from dataclasses import dataclass, field
from itertools import permutations, product as iproduct

from . import automata, kernels
from .automata import Dfa, MultipleSinks
from .errors import (HypothesisFailed, Nilpotent, NoSink, NoUniqueSink, NotInvertible,
                     NotSynchronizing)
from .mealy import (DEFAULT_CAP, Element, GroupColoring, GroupWord, MealyMachine, apply,
                    apply_word, color, element_of, generator_element)


@dataclass(frozen=True)
class Finite:
    order: int

    def __str__(self):
        return f"finite({self.order})"


@dataclass(frozen=True)
class ExceedsCap:
    cap: int
    witness: tuple = field(default=(), compare=False)

    def __str__(self):
        return f"exceeds-cap({self.cap})"


@dataclass
class ElementTable:
    """Elements keyed by canonical form, each with one shortest word."""

    machine: MealyMachine
    elements: dict
    counts: list
    closed: bool
    element_cap: int

    @property
    def status(self):
        return Finite(len(self.elements)) if self.closed else ExceedsCap(self.element_cap)

    @property
    def order(self):
        return len(self.elements) if self.closed else None

    def report(self) -> str:
        lines = [f"status: {'closed' if self.closed else 'cap-exceeded'}"]
        if self.closed:
            lines.append(f"order: {len(self.elements)}")
        else:
            lines.append(f"elements-found: {len(self.elements)} (cap {self.element_cap})")
        lines.extend(f"length {i}: {c}" for i, c in enumerate(self.counts))
        return "\n".join(lines) + "\n"


def _generators(machine, inverses=True):
    gens = []
    for q in machine.states:
        gens.append(((q, 1), generator_element(machine, q, 1)))
        if inverses:
            gens.append(((q, -1), generator_element(machine, q, -1)))
    return gens


def enumerate_group(machine: MealyMachine, element_cap: int = 10_000,
                    cap: int = DEFAULT_CAP) -> ElementTable:
    """Breadth-first closure of ``{A_q, A_q^-1}`` acting on the left."""
    if not machine.invertible:
        raise NotInvertible("group enumeration needs an invertible machine")
    gens = _generators(machine)
    ident = Element.identity(machine.k)
    elements = {ident: GroupWord()}
    frontier = [ident]
    counts = [1]
    while frontier:
        nxt = []
        for x in frontier:
            w = elements[x]
            for f, gx in gens:
                y = gx.compose(x, cap)
                if y not in elements:
                    elements[y] = GroupWord((f,)) * w
                    nxt.append(y)
                    if len(elements) > element_cap:
                        counts.append(len(nxt))
                        return ElementTable(machine, elements, counts, False, element_cap)
        if nxt:
            counts.append(len(nxt))
        frontier = nxt
    return ElementTable(machine, elements, counts, True, element_cap)


def semigroup_counts(machine: MealyMachine, max_len: int, cap: int = DEFAULT_CAP) -> list:
    """Distinct elements defined by positive words of each exact length ``1..max_len``."""
    gens = _generators(machine, inverses=False)
    layer = {Element.identity(machine.k)}
    counts = []
    for _ in range(max_len):
        layer = {g.compose(x, cap) for x in layer for _, g in gens}
        counts.append(len(layer))
    return counts


def _probe_words(k, rng, extra):
    """Level words, periodic words and random long words, as index lists."""
    probes = []
    depth = 1
    while k ** (depth + 1) <= 512:
        depth += 1
    for w in iproduct(range(k), repeat=depth):
        probes.append(list(w))
    for a in range(k):
        probes.append([a] * 128)
        probes.append(([a] + [(a + 1) % k] * 3) * 32)
    for length in (64, 256):
        for _ in range(4):
            probes.append([rng.randrange(k) for _ in range(length)])
    probes.extend(list(w) for w in extra)
    return probes


def _power(x: Element, n: int, cap: int) -> Element:
    result = Element.identity(x.k)
    base = x
    while n:
        if n & 1:
            result = base.compose(result, cap)
        n >>= 1
        if n:
            base = base.compose(base, cap)
    return result


def element_order(machine: MealyMachine, g: GroupWord, cap: int = 64, probes=(),
                  machine_cap: int = DEFAULT_CAP):
    """Least ``n <= cap`` with ``g^n = 1``, else :class:`ExceedsCap`.

    Orbit lengths of probe words divide the order, so an orbit longer than
    ``cap`` (or an lcm above it) settles the question; otherwise the
    multiples of the lcm are tested exactly.
    """
    if any(e == -1 for _, e in g.factors) and not machine.invertible:
        raise NotInvertible("inverse factor on a non-invertible machine")
    x = element_of(machine, g, machine_cap)
    if x.is_identity:
        return Finite(1)
    k = machine.k
    delta, out = list(x.delta), list(x.out)
    sx = {a: i for i, a in enumerate(machine.alphabet)}
    extra = [[sx[a] for a in w] for w in probes]
    lcm = 1
    for w in _probe_words(k, random.Random(0), extra):
        n = kernels.orbit_length(delta, out, k, 0, w, cap)
        if n > cap:
            return ExceedsCap(cap, tuple(machine.alphabet[a] for a in w))
        lcm = lcm * n // math.gcd(lcm, n)
        if lcm > cap:
            return ExceedsCap(cap)
    step = _power(x, lcm, machine_cap)
    y = step
    for m in range(lcm, cap + 1, lcm):
        if y.is_identity:
            return Finite(m)
        y = step.compose(y, machine_cap)
    return ExceedsCap(cap)


def positive_words(states, max_len):
    """Positive generator words of length ``1..max_len`` in shortlex order."""
    for n in range(1, max_len + 1):
        for w in iproduct(states, repeat=n):
            yield w


def relation_search(machine: MealyMachine, max_len: int, cap: int = DEFAULT_CAP) -> list:
    """All pairs of distinct positive words up to ``max_len`` that define the same element."""
    classes = {}
    layer = {(): Element.identity(machine.k)}
    gens = {q: generator_element(machine, q, 1) for q in machine.states}
    for _ in range(max_len):
        nxt = {}
        for w, x in layer.items():
            for q in machine.states:
                # the word q.w acts as A_q after w
                y = gens[q].compose(x, cap)
                nxt[(q,) + w] = y
        for w in sorted(nxt, key=lambda w: [machine.states.index(q) for q in w]):
            classes.setdefault(nxt[w], []).append(w)
        layer = nxt
    pairs = []
    for ws in classes.values():
        for i in range(len(ws)):
            for j in range(i + 1, len(ws)):
                pairs.append((GroupWord.positive(ws[i]), GroupWord.positive(ws[j])))
    order = {q: i for i, q in enumerate(machine.states)}
    key = lambda g: (len(g), [order[q] for q, _ in g.factors])
    pairs.sort(key=lambda p: (key(p[0]), key(p[1])))
    return pairs


class ColoringEnumerator:
    """Every group colouring of a DFA, in lexicographic order of permutations."""

    def __init__(self, dfa: Dfa):
        self.dfa = dfa

    def __len__(self):
        return math.factorial(self.dfa.k) ** self.dfa.n

    def __iter__(self):
        perms = list(permutations(self.dfa.alphabet))
        for rows in iproduct(perms, repeat=self.dfa.n):
            yield GroupColoring(self.dfa.states, self.dfa.alphabet, rows)


# -- infinite-order colourings ---------------------------------------------------

@dataclass(frozen=True)
class AddingMachineColoring:
    """Colouring making ``q0`` act as an odometer on blocks of length ``k``.

    ``cycle`` labels a sink-avoiding cycle at ``q0`` (the block for 0-bar),
    ``sink_path`` labels a path from ``q0`` to the sink.
    """

    coloring: GroupColoring
    q0: str
    k: int
    d: int
    cycle: tuple
    sink_path: tuple
    blocks: tuple  # (0-bar, 1-bar), each a word of length k

    @property
    def case(self):
        return "d<=k" if self.d <= self.k else "d>k"


def _unique_sink(dfa):
    ok, _ = automata.is_synchronizing(dfa)
    if not ok:
        raise NotSynchronizing("the DFA is not synchronizing")
    s = automata.sink_state(dfa)
    if s is None:
        raise NoSink("the DFA has no sink")
    if isinstance(s, MultipleSinks):
        raise NoUniqueSink(f"sinks {s.sinks}")
    return s


def adding_machine_coloring(dfa: Dfa) -> AddingMachineColoring:
    """Colour a non-nilpotent sink DFA so that ``q0`` has infinite order.

    ``q0`` lies on a sink-avoiding cycle of a bottom cyclic component and
    leaves it with the letter that starts its sink path; every later state
    of that path lies on no cycle.  Shortest cycle first, then shortest
    sink path, shortlex ties.
    """
    s = _unique_sink(dfa)
    if dfa.k < 2:
        raise HypothesisFailed("|A| > 1", "alphabet has one letter")
    if automata.is_nilpotent(dfa):
        raise Nilpotent("every colouring of a nilpotent DFA generates a finite group")
    si = dfa.state_index(s)
    comps, comp_of, internal = automata.avoiding_structure(dfa, si)
    cyclic = {c for c in range(len(comps)) if internal[c]}

    def reach(v):
        seen = {v}
        stack = [v]
        while stack:
            u = stack.pop()
            for t in dfa.delta[u]:
                if t != si and t not in seen:
                    seen.add(t)
                    stack.append(t)
        return seen

    bottom = [c for c in sorted(cyclic)
              if not any(comp_of[u] in cyclic and comp_of[u] != c for u in reach(comps[c][0]))]
    best = None
    for c in bottom:
        members = set(comps[c])
        for q0 in sorted(members):
            cyc = _shortest_cycle(dfa, q0, members)
            for y0 in range(dfa.k):
                p1 = dfa.delta[q0][y0]
                if p1 in members:
                    continue
                tail = _shortest_path(dfa, p1, si)
                cand = (len(cyc), 1 + len(tail), q0, cyc, (y0,) + tail)
                if best is None or cand[:2] < best[:2] or (
                        cand[:2] == best[:2] and (cand[3], cand[4]) < (best[3], best[4])):
                    best = cand
    _, d, q0, cyc, path = best
    k = len(cyc)
    m = min(d, k)
    swaps = {}
    q = q0
    for i in range(m):
        swaps.setdefault(q, {})
        swaps[q][cyc[i]], swaps[q][path[i]] = path[i], cyc[i]
        q = dfa.delta[q][cyc[i]]
    p = q0
    for i in range(m):
        swaps.setdefault(p, {})
        swaps[p][path[i]], swaps[p][cyc[i]] = cyc[i], path[i]
        p = dfa.delta[p][path[i]]
    A = dfa.alphabet
    mapping = {dfa.states[v]: {A[a]: A[b] for a, b in sw.items()} for v, sw in swaps.items()}
    coloring = GroupColoring.from_map(dfa, mapping)
    zero = tuple(A[a] for a in cyc)
    one = tuple(A[a] for a in path[:m]) + zero[m:]
    return AddingMachineColoring(coloring, dfa.states[q0], k, d, zero,
                                 tuple(A[a] for a in path), (zero, one))


def _shortest_cycle(dfa, q0, members):
    """Shortlex-least shortest cycle at ``q0`` inside ``members`` (letter indices)."""
    parent = {}
    queue = deque()
    for a in range(dfa.k):
        t = dfa.delta[q0][a]
        if t == q0:
            return (a,)
        if t in members and t not in parent:
            parent[t] = (None, a)
            queue.append(t)
    while queue:
        v = queue.popleft()
        for a in range(dfa.k):
            t = dfa.delta[v][a]
            if t == q0:
                word = [a]
                while v is not None:
                    v, b = parent[v]
                    word.append(b)
                return tuple(reversed(word))
            if t in members and t not in parent:
                parent[t] = (v, a)
                queue.append(t)
    raise AssertionError("state in a cyclic component without a cycle")


def _shortest_path(dfa, src, dst):
    if src == dst:
        return ()
    parent = {src: None}
    queue = deque([src])
    while queue:
        v = queue.popleft()
        for a in range(dfa.k):
            t = dfa.delta[v][a]
            if t not in parent:
                parent[t] = (v, a)
                if t == dst:
                    word = []
                    while parent[t] is not None:
                        t, b = parent[t]
                        word.append(b)
                    return tuple(reversed(word))
                queue.append(t)
    raise AssertionError("sink unreachable in a synchronizing DFA")


def block_view(amc: AddingMachineColoring, machine: MealyMachine):
    """Action of ``q0`` on the two blocks: ``{bar: (output bar or None, next state)}``."""
    zero, one = amc.blocks
    view = {}
    for bar, block in (("0", zero), ("1", one)):
        out = apply(machine, amc.q0, block)
        name = "0" if out == zero else "1" if out == one else None
        view[bar] = (name, machine.dfa.step(amc.q0, block))
    return view


def verify_block_recursion(amc: AddingMachineColoring, machine: MealyMachine) -> bool:
    """``q0 = (q0, s, ...)(0-bar 1-bar)`` on the blocks (the ``d <= k`` case)."""
    s = automata.sink_state(machine.dfa)
    view = block_view(amc, machine)
    return view == {"0": ("1", amc.q0), "1": ("0", s)}


def _bars(amc, text):
    zero, one = amc.blocks
    return tuple(a for c in text for a in (zero if c == "0" else one))


def prefix_law(amc: AddingMachineColoring, machine: MealyMachine, n: int, exponent=None):
    """Compare ``q0^e`` on ``0-bar^(n+2)`` with ``1-bar^n 0-bar 1-bar``.

    ``exponent`` defaults to ``1 + n``.  Returns ``(holds, got, expected)``
    with words written over the bars (``'?'`` for a block that is neither).
    """
    e = 1 + n if exponent is None else exponent
    word = _bars(amc, "0" * (n + 2))
    got = apply_word(machine, GroupWord.gen(amc.q0) ** e, word)
    expected = _bars(amc, "1" * n + "0" + "1")
    k = amc.k
    shown = []
    for i in range(0, len(got), k):
        blk = got[i:i + k]
        shown.append("0" if blk == amc.blocks[0] else "1" if blk == amc.blocks[1] else "?")
    return got == expected, "".join(shown), "1" * n + "01"


def wreath_bound(dfa: Dfa) -> int:
    """``|Sym(A)|^((|A|^n - 1)/(|A| - 1))`` with ``n`` the nilpotency index:
    the order of the ``n``-fold iterated wreath product."""
    n = automata.nilpotency_index(dfa)
    k = dfa.k
    levels = n if k == 1 else (k ** n - 1) // (k - 1)
    return math.factorial(k) ** levels


def pair_bound(dfa: Dfa) -> int:
    """``wreath_bound * |Sym(A)|``.  Past the first ``n`` letters every
    generator acts letterwise by the sink permutation, so each element is
    a pair (wreath element, power of that permutation)."""
    return wreath_bound(dfa) * math.factorial(dfa.k)


@dataclass
class FiniteIffNilpotentReport:
    nilpotent: bool
    colorings_checked: int
    colorings_total: int
    partial: bool
    orders: list = field(default_factory=list)
    all_closed: bool = True
    bound: int | None = None
    pair_bound: int | None = None
    witness: AddingMachineColoring | None = None
    witness_order: object = None

    @property
    def consistent(self):
        """The theorem's prediction: all groups finite, or an infinite-order witness."""
        if self.nilpotent:
            return self.all_closed
        return isinstance(self.witness_order, ExceedsCap)

    @property
    def within_wreath_bound(self):
        return all(o is not None and self.bound % o == 0 for o in self.orders)

    @property
    def within_pair_bound(self):
        return all(o is not None and self.pair_bound % o == 0 for o in self.orders)

    def report(self) -> str:
        yn = lambda b: str(b).lower()
        lines = [f"nilpotent: {yn(self.nilpotent)}"]
        if self.nilpotent:
            flag = " (partial sample)" if self.partial else ""
            lines.append(f"colorings: {self.colorings_checked}/{self.colorings_total}{flag}")
            lines.append(f"all-closed: {yn(self.all_closed)}")
            lines.append(f"orders: {' '.join(map(str, self.orders))}")
            lines.append(f"wreath-bound: {self.bound} divides-all: {yn(self.within_wreath_bound)}")
            lines.append(f"pair-bound: {self.pair_bound} divides-all: {yn(self.within_pair_bound)}")
        else:
            lines.append(f"witness-state: {self.witness.q0}")
            lines.append(f"witness-order: {self.witness_order}")
        lines.append(f"consistent: {yn(self.consistent)}")
        return "\n".join(lines) + "\n"


def finite_iff_nilpotent_experiment(dfa: Dfa, element_cap: int = 10_000, budget: int = 256,
                                    order_cap: int = 64, seed: int = 0):
    """Nilpotent: every colouring closes.  Otherwise: an infinite-order witness."""
    _unique_sink(dfa)
    if dfa.k < 2:
        raise HypothesisFailed("|A| > 1", "alphabet has one letter")
    total = len(ColoringEnumerator(dfa))
    if not automata.is_nilpotent(dfa):
        amc = adding_machine_coloring(dfa)
        machine = color(dfa, amc.coloring)
        order = element_order(machine, GroupWord.gen(amc.q0), order_cap)
        return FiniteIffNilpotentReport(False, 1, total, False, witness=amc, witness_order=order)
    colorings = list(ColoringEnumerator(dfa)) if total <= budget else None
    partial = colorings is None
    if partial:
        rng = random.Random(seed)
        perms = list(permutations(dfa.alphabet))
        colorings = [GroupColoring(dfa.states, dfa.alphabet,
                                   [rng.choice(perms) for _ in dfa.states]) for _ in range(budget)]
    rep = FiniteIffNilpotentReport(True, len(colorings), total, partial,
                                   bound=wreath_bound(dfa), pair_bound=pair_bound(dfa))
    for chi in colorings:
        table = enumerate_group(color(dfa, chi), element_cap)
        rep.orders.append(table.order)
        rep.all_closed &= table.closed
    return rep
