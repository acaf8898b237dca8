"""Deterministic semiautomata and their structural classifications."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from . import kernels
from .errors import NoUniqueSink, NotSynchronizing, UnknownState, UnknownSymbol

Word = tuple  # tuple of symbol tokens


def check_token(token, what="token"):
    if not isinstance(token, str) or not token:
        raise ValueError(f"{what} must be a nonempty string, got {token!r}")
    if any(c.isspace() for c in token) or "|" in token or "#" in token:
        raise ValueError(f"{what} {token!r} contains whitespace, '|' or '#'")
    return token


def _check_distinct(items, what):
    if len(set(items)) != len(items):
        seen = set()
        dup = next(x for x in items if x in seen or seen.add(x))
        raise ValueError(f"duplicate {what} {dup!r}")


def bits(mask):
    q = 0
    while mask:
        if mask & 1:
            yield q
        mask >>= 1
        q += 1


@dataclass(frozen=True)
class Dfa:
    """A total DFA ``(Q, A, delta)`` without initial or final states.

    ``delta[i][a]`` is the index of the image of state ``i`` under the
    ``a``-th symbol.  States and symbols keep their declared order, which
    drives every tie-break in the package.
    """

    states: tuple
    alphabet: tuple
    delta: tuple

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        object.__setattr__(self, "delta", tuple(tuple(row) for row in self.delta))
        if not self.states:
            raise ValueError("a DFA needs at least one state")
        if not self.alphabet:
            raise ValueError("alphabet must be nonempty")
        for s in self.states:
            check_token(s, "state name")
        for a in self.alphabet:
            check_token(a, "symbol")
        _check_distinct(self.states, "state")
        _check_distinct(self.alphabet, "symbol")
        n, k = len(self.states), len(self.alphabet)
        if len(self.delta) != n or any(len(row) != k for row in self.delta):
            raise ValueError("transition table must be |Q| x |A|")
        if any(not 0 <= t < n for row in self.delta for t in row):
            raise ValueError("transition target out of range")

    @classmethod
    def from_map(cls, states: Sequence[str], alphabet: Sequence[str],
                 trans: Mapping) -> "Dfa":
        """Build from ``{(state, symbol): state}``; every pair must be present."""
        index = {s: i for i, s in enumerate(states)}
        delta = []
        for s in states:
            row = []
            for a in alphabet:
                try:
                    t = trans[(s, a)]
                except KeyError:
                    raise ValueError(f"missing transition for ({s}, {a})") from None
                if t not in index:
                    raise UnknownState(t)
                row.append(index[t])
            delta.append(row)
        return cls(tuple(states), tuple(alphabet), delta)

    @property
    def n(self):
        return len(self.states)

    @property
    def k(self):
        return len(self.alphabet)

    @cached_property
    def _state_ix(self):
        return {s: i for i, s in enumerate(self.states)}

    @cached_property
    def _symbol_ix(self):
        return {a: i for i, a in enumerate(self.alphabet)}

    @cached_property
    def flat(self):
        return [t for row in self.delta for t in row]

    @cached_property
    def full_mask(self):
        return (1 << self.n) - 1

    def state_index(self, state):
        try:
            return self._state_ix[state]
        except KeyError:
            raise UnknownState(state) from None

    def symbol_index(self, symbol):
        try:
            return self._symbol_ix[symbol]
        except KeyError:
            raise UnknownSymbol(symbol) from None

    def encode(self, word: Iterable[str]) -> tuple:
        return tuple(self.symbol_index(a) for a in word)

    def decode(self, word: Iterable[int]) -> Word:
        return tuple(self.alphabet[a] for a in word)

    def mask(self, subset: Iterable[str]) -> int:
        m = 0
        for s in subset:
            m |= 1 << self.state_index(s)
        return m

    def unmask(self, mask: int) -> frozenset:
        return frozenset(self.states[q] for q in bits(mask))

    def run(self, q: int, word: Iterable[int]) -> int:
        d = self.delta
        for a in word:
            q = d[q][a]
        return q

    def step(self, state: str, word: Iterable[str]) -> str:
        return self.states[self.run(self.state_index(state), self.encode(word))]

    def image_mask(self, mask: int, word: Iterable[int]) -> int:
        d = self.delta
        for a in word:
            img = 0
            for q in bits(mask):
                img |= 1 << d[q][a]
            mask = img
        return mask

    def image(self, subset: Iterable[str], word: Iterable[str]) -> frozenset:
        return self.unmask(self.image_mask(self.mask(subset), self.encode(word)))

    def successors(self, q: int) -> tuple:
        return self.delta[q]


@dataclass(frozen=True)
class MultipleSinks:
    """Plain result: the DFA has more than one sink (so it is not synchronizing)."""

    sinks: tuple

    def __len__(self):
        return len(self.sinks)


@dataclass(frozen=True)
class Congruence:
    blocks: tuple

    def is_identity(self):
        return all(len(b) == 1 for b in self.blocks)

    def is_universal(self):
        return len(self.blocks) == 1

    def block_of(self, state):
        for b in self.blocks:
            if state in b:
                return b
        raise UnknownState(state)

    def is_compatible(self, dfa: Dfa) -> bool:
        cover = sorted(s for b in self.blocks for s in b)
        if cover != sorted(dfa.states) or any(not b for b in self.blocks):
            return False
        owner = {s: i for i, b in enumerate(self.blocks) for s in b}
        for b in self.blocks:
            for a in dfa.alphabet:
                if len({owner[dfa.step(s, (a,))] for s in b}) > 1:
                    return False
        return True


@dataclass(frozen=True)
class DfaClassification:
    synchronizing: bool
    shortest_reset_length: int | None
    sink: str | None
    nilpotent: bool
    bounded: bool | None
    simple: bool
    strongly_connected: bool
    shortest_reset_word: Word | None = field(default=None, compare=False)


# -- synchronization ---------------------------------------------------------

def _pairs_mergeable(dfa: Dfa) -> bool:
    """Every pair of states can be brought together (pair-graph criterion)."""
    n, d = dfa.n, dfa.delta
    if n == 1:
        return True
    preds = {}
    for p in range(n):
        for q in range(p, n):
            for a in range(dfa.k):
                x, y = d[p][a], d[q][a]
                key = (x, y) if x <= y else (y, x)
                preds.setdefault(key, []).append((p, q))
    good = {(p, p) for p in range(n)}
    queue = deque(good)
    while queue:
        pair = queue.popleft()
        for pre in preds.get(pair, ()):
            if pre not in good:
                good.add(pre)
                queue.append(pre)
    return len(good) == n * (n + 1) // 2


def _power_bfs(dfa: Dfa, start: int):
    masks, table = kernels.subsets(dfa.flat, dfa.n, dfa.k, start)
    return masks, table


def _bfs_parents(table, k, count):
    parent = [None] * count
    seen = [False] * count
    seen[0] = True
    for i in range(count):
        for a in range(k):
            j = table[i * k + a]
            if not seen[j]:
                seen[j] = True
                parent[j] = (i, a)
    return parent


def _path_to(parent, j):
    word = []
    while parent[j] is not None:
        j, a = parent[j]
        word.append(a)
    return tuple(reversed(word))


def shortest_reset_word(dfa: Dfa):
    """Shortlex-least shortest reset word, or ``None``."""
    masks, table = _power_bfs(dfa, dfa.full_mask)
    parent = _bfs_parents(table, dfa.k, len(masks))
    for j, m in enumerate(masks):
        if m & (m - 1) == 0:
            return dfa.decode(_path_to(parent, j))
    return None


def is_synchronizing(dfa: Dfa):
    """Return ``(True, shortest reset word)`` or ``(False, None)``."""
    if not _pairs_mergeable(dfa):
        return False, None
    return True, shortest_reset_word(dfa)


def is_reset_word(dfa: Dfa, word) -> bool:
    m = dfa.image_mask(dfa.full_mask, dfa.encode(word))
    return m & (m - 1) == 0


# -- sinks, nilpotency, boundedness ------------------------------------------

def sinks(dfa: Dfa) -> tuple:
    return tuple(s for i, s in enumerate(dfa.states) if all(t == i for t in dfa.delta[i]))


def sink_state(dfa: Dfa):
    """The unique sink, ``None`` if there is none, or a :class:`MultipleSinks`."""
    found = sinks(dfa)
    if not found:
        return None
    if len(found) == 1:
        return found[0]
    return MultipleSinks(found)


def _unique_sink_index(dfa: Dfa) -> int:
    s = sink_state(dfa)
    if s is None or isinstance(s, MultipleSinks):
        raise NoUniqueSink(f"expected exactly one sink, found {0 if s is None else len(s)}")
    return dfa.state_index(s)


def strongly_connected_components(n: int, succ) -> list:
    """Tarjan's algorithm, iterative.  ``succ(v)`` yields successor vertices.

    Components come out in reverse topological order (sinks of the
    condensation first).
    """
    index = [None] * n
    low = [0] * n
    on_stack = [False] * n
    stack, comps = [], []
    counter = 0
    for root in range(n):
        if index[root] is not None:
            continue
        work = [(root, iter(succ(root)))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if index[w] is None:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, iter(succ(w))))
                    advanced = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                u = work[-1][0]
                low[u] = min(low[u], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                comps.append(sorted(comp))
    return comps


def avoiding_structure(dfa: Dfa, sink: int):
    """SCCs of the digraph with the sink removed.

    Returns ``(comps, comp_of, internal)`` where ``internal[c]`` counts the
    labelled edges that stay inside component ``c``.
    """
    d = dfa.delta

    def succ(v):
        if v == sink:
            return ()
        return [t for t in d[v] if t != sink]

    comps = strongly_connected_components(dfa.n, succ)
    comp_of = [0] * dfa.n
    for c, members in enumerate(comps):
        for v in members:
            comp_of[v] = c
    internal = [0] * len(comps)
    for v in range(dfa.n):
        if v == sink:
            continue
        for t in d[v]:
            if t != sink and comp_of[t] == comp_of[v]:
                internal[comp_of[v]] += 1
    return comps, comp_of, internal


def is_nilpotent(dfa: Dfa) -> bool:
    """Unique sink and no cycle through a non-sink state."""
    try:
        s = _unique_sink_index(dfa)
    except NoUniqueSink:
        return False
    _, _, internal = avoiding_structure(dfa, s)
    return not any(internal)


def nilpotency_index(dfa: Dfa) -> int:
    """Least ``n`` with ``Q.w = {sink}`` for every word of length ``n``."""
    if not is_nilpotent(dfa):
        raise ValueError("DFA is not nilpotent")
    s = _unique_sink_index(dfa)
    d = dfa.delta
    depth = {}

    def longest(v):
        # number of letters that can be read before v is forced into the sink
        if v == s:
            return 0
        if v not in depth:
            depth[v] = 1 + max(longest(t) for t in d[v])
        return depth[v]

    return max(longest(v) for v in range(dfa.n))


def is_bounded(dfa: Dfa) -> bool:
    """Finitely many right-infinite paths avoid the sink.

    Decided on the sink-removed digraph: every nontrivial strongly connected
    component must be a simple cycle and no such component may reach
    another one.
    """
    s = _unique_sink_index(dfa)
    comps, comp_of, internal = avoiding_structure(dfa, s)
    d = dfa.delta
    nontrivial = [internal[c] > 0 for c in range(len(comps))]
    for c, members in enumerate(comps):
        if not nontrivial[c]:
            continue
        for v in members:
            inside = sum(1 for t in d[v] if t != s and comp_of[t] == c)
            if inside != 1:
                return False
    # components are listed sinks-first, so reach[c] only needs later ones
    reaches = [False] * len(comps)
    for c, members in enumerate(comps):
        hit = False
        for v in members:
            for t in d[v]:
                if t == s or comp_of[t] == c:
                    continue
                if nontrivial[comp_of[t]] or reaches[comp_of[t]]:
                    hit = True
        if nontrivial[c] and hit:
            return False
        reaches[c] = hit or nontrivial[c]
    return True


def is_strongly_connected(dfa: Dfa) -> bool:
    return len(strongly_connected_components(dfa.n, lambda v: dfa.delta[v])) == 1


# -- congruences -------------------------------------------------------------

def _principal_classes(dfa: Dfa, p: int, q: int) -> list:
    parent = list(range(dfa.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    d = dfa.delta
    todo = [(p, q)]
    while todo:
        x, y = todo.pop()
        rx, ry = find(x), find(y)
        if rx == ry:
            continue
        parent[ry] = rx
        for a in range(dfa.k):
            todo.append((d[x][a], d[y][a]))
    return [find(x) for x in range(dfa.n)]


def principal_congruence(dfa: Dfa, p: str, q: str) -> Congruence:
    """Smallest congruence identifying ``p`` and ``q``."""
    roots = _principal_classes(dfa, dfa.state_index(p), dfa.state_index(q))
    blocks = {}
    for i, r in enumerate(roots):
        blocks.setdefault(r, []).append(dfa.states[i])
    return Congruence(tuple(frozenset(b) for b in blocks.values()))


def is_simple(dfa: Dfa) -> bool:
    """Only the identity and the universal relation are congruences."""
    for p, q in combinations(range(dfa.n), 2):
        if len(set(_principal_classes(dfa, p, q))) != 1:
            return False
    return True


def _is_prime(m: int) -> bool:
    return m > 1 and all(m % d for d in range(2, int(m ** 0.5) + 1))


def permutation_letters(dfa: Dfa) -> tuple:
    return tuple(a for a in range(dfa.k) if len({row[a] for row in dfa.delta}) == dfa.n)


def lemma_simple_sufficient(dfa: Dfa) -> bool:
    """|Q| prime and the permutation letters generate a transitive group.

    Taking every permutation letter is enough: if some subset acts
    transitively, so does the whole set.
    """
    if not _is_prime(dfa.n):
        return False
    perms = permutation_letters(dfa)
    if not perms:
        return False
    seen = {0}
    queue = [0]
    for v in queue:
        for a in perms:
            t = dfa.delta[v][a]
            if t not in seen:
                seen.add(t)
                queue.append(t)
    return len(seen) == dfa.n


# -- reachable subsets, transition monoid ------------------------------------

def reachable_subsets(dfa: Dfa) -> set:
    masks, _ = _power_bfs(dfa, dfa.full_mask)
    return {dfa.unmask(m) for m in masks}


def transition_monoid(dfa: Dfa, cap: int):
    """Transformations induced by nonempty words, BFS in shortlex order.

    Returns ``{transformation: shortest word}`` or ``None`` past ``cap``.
    """
    d = dfa.delta
    elems = {}
    queue = []
    for a in range(dfa.k):
        f = tuple(d[q][a] for q in range(dfa.n))
        if f not in elems:
            elems[f] = (a,)
            queue.append(f)
    if len(elems) > cap:
        return None
    for f in queue:
        w = elems[f]
        for a in range(dfa.k):
            g = tuple(d[x][a] for x in f)
            if g not in elems:
                elems[g] = w + (a,)
                if len(elems) > cap:
                    return None
                queue.append(g)
    return elems


def stable_image(f: tuple) -> int:
    """Bitmask of ``m(f)``: the image of ``f^j`` once it stops shrinking."""
    img = set(range(len(f)))
    while True:
        nxt = {f[q] for q in img}
        if nxt == img:
            break
        img = nxt
    m = 0
    for q in img:
        m |= 1 << q
    return m


def _syn_from_differs(dfa: Dfa, s1: int, s2: int):
    """Shortest word that resets exactly one of the two subsets, or ``None``."""
    k = dfa.k
    start = (s1, s2)
    parent = {start: None}
    queue = deque([start])
    while queue:
        pair = queue.popleft()
        a1, a2 = pair
        one1 = a1 & (a1 - 1) == 0
        one2 = a2 & (a2 - 1) == 0
        if one1 != one2:
            word = []
            while parent[pair] is not None:
                pair, a = parent[pair]
                word.append(a)
            return tuple(reversed(word))
        for a in range(k):
            nxt = (dfa.image_mask(a1, (a,)), dfa.image_mask(a2, (a,)))
            if nxt not in parent:
                parent[nxt] = (pair, a)
                queue.append(nxt)
    return None


@dataclass(frozen=True)
class FgResult:
    """Verdict of the finitely-generated test: ``yes``, ``no`` or ``unknown``.

    For ``no``, ``subset`` is a reachable S and ``word`` a word fixing S with
    ``Syn(S) != Syn(m(word))``; ``separator`` resets exactly one of them.
    """

    verdict: str
    subset: frozenset | None = None
    word: Word | None = None
    separator: Word | None = None

    def __bool__(self):
        return self.verdict == "yes"


def is_finitely_generated_syn(dfa: Dfa, monoid_cap: int = 100_000) -> FgResult:
    if not _pairs_mergeable(dfa):
        raise NotSynchronizing("the finitely-generated test needs a synchronizing DFA")
    monoid = transition_monoid(dfa, monoid_cap)
    if monoid is None:
        return FgResult("unknown")
    n = dfa.n
    reachable = {dfa.full_mask}
    for f in monoid:
        m = 0
        for q in f:
            m |= 1 << q
        reachable.add(m)
    checked = {}
    for S in sorted(reachable):
        size = bin(S).count("1")
        if not 1 < size < n:
            continue
        members = list(bits(S))
        for f, word in monoid.items():
            img = 0
            for q in members:
                img |= 1 << f[q]
            if img != S:
                continue
            M = stable_image(f)
            if M == S:
                continue
            if (S, M) not in checked:
                checked[(S, M)] = _syn_from_differs(dfa, S, M)
            sep = checked[(S, M)]
            if sep is not None:
                return FgResult("no", dfa.unmask(S), dfa.decode(word), dfa.decode(sep))
    return FgResult("yes")


def classify(dfa: Dfa) -> DfaClassification:
    sync, word = is_synchronizing(dfa)
    s = sink_state(dfa)
    unique = s if isinstance(s, str) else None
    return DfaClassification(
        synchronizing=sync,
        shortest_reset_length=len(word) if sync else None,
        sink=unique,
        nilpotent=is_nilpotent(dfa),
        bounded=is_bounded(dfa) if unique is not None else None,
        simple=is_simple(dfa),
        strongly_connected=is_strongly_connected(dfa),
        shortest_reset_word=word,
    )


# -- text format -------------------------------------------------------------

def parse_dfa(text: str) -> Dfa:
    from . import textformat
    from .errors import ParseError

    kind, alphabet, states, trans, _ = textformat.parse(text)
    if kind != "dfa":
        raise ParseError(f"expected 'type: dfa', got {kind!r}", 1)
    return Dfa.from_map(states, alphabet, trans)


def render_dfa(dfa: Dfa) -> str:
    from . import textformat

    rows = ((s, a, dfa.states[dfa.delta[i][j]])
            for i, s in enumerate(dfa.states) for j, a in enumerate(dfa.alphabet))
    return textformat.render("dfa", dfa.alphabet, dfa.states, rows)
