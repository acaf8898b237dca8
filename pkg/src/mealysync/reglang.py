"""Finite acceptors over a fixed alphabet and the reset-word languages of a DFA.

Acceptors stay nondeterministic until a procedure needs a deterministic
table; :func:`determinize` is memoized per acceptor.  Reported words are
always the shortlex-least candidate (declared symbol order).
"""

from __future__ import annotations

import threading
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Iterator

from . import kernels
from .automata import Dfa
from .errors import AlphabetMismatch, NotAnIdeal

_memo_lock = threading.Lock()


@dataclass(frozen=True, eq=False)
class LangAcceptor:
    """Finite acceptor; ``trans[state][symbol]`` is a sorted tuple of targets."""

    alphabet: tuple
    trans: tuple
    initial: frozenset
    finals: frozenset

    def __post_init__(self):
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        object.__setattr__(self, "trans", tuple(tuple(tuple(sorted(set(t))) for t in row)
                                                for row in self.trans))
        object.__setattr__(self, "initial", frozenset(self.initial))
        object.__setattr__(self, "finals", frozenset(self.finals))
        k = len(self.alphabet)
        if any(len(row) != k for row in self.trans):
            raise ValueError("every state needs one target set per symbol")

    @classmethod
    def from_table(cls, alphabet, table, start, finals):
        """Deterministic acceptor from ``table[state][symbol] -> state``."""
        return cls(alphabet, [[(t,) for t in row] for row in table], {start}, finals)

    @property
    def size(self):
        return len(self.trans)

    @property
    def k(self):
        return len(self.alphabet)

    @property
    def is_deterministic(self):
        return len(self.initial) == 1 and all(len(t) == 1 for row in self.trans for t in row)

    def encode(self, word):
        ix = {a: i for i, a in enumerate(self.alphabet)}
        try:
            return tuple(ix[a] for a in word)
        except KeyError as exc:
            raise AlphabetMismatch(f"symbol {exc.args[0]!r} not in alphabet") from None

    def accepts(self, word: Iterable[str]) -> bool:
        cur = set(self.initial)
        for a in self.encode(word):
            cur = {t for q in cur for t in self.trans[q][a]}
            if not cur:
                return False
        return bool(cur & self.finals)

    def __contains__(self, word):
        return self.accepts(word)


def _same_alphabet(*langs):
    first = langs[0].alphabet
    for L in langs[1:]:
        if L.alphabet != first:
            raise AlphabetMismatch(f"{first} vs {L.alphabet}")


def _dtable(L: LangAcceptor):
    """``(table, start, finals)`` of a deterministic acceptor."""
    D = L if L.is_deterministic else determinize(L)
    table = [[t[0] for t in row] for row in D.trans]
    return table, next(iter(D.initial)), D.finals


# -- constructions -----------------------------------------------------------

def determinize(L: LangAcceptor) -> LangAcceptor:
    """Subset construction over reachable subsets; the result is complete."""
    if L.is_deterministic:
        return L
    cached = L.__dict__.get("_det")
    if cached is not None:
        return cached
    k = L.k
    start = frozenset(L.initial)
    index = {start: 0}
    order = [start]
    table = []
    for cur in order:
        row = []
        for a in range(k):
            nxt = frozenset(t for q in cur for t in L.trans[q][a])
            j = index.get(nxt)
            if j is None:
                j = index[nxt] = len(order)
                order.append(nxt)
            row.append(j)
        table.append(row)
    finals = {i for i, S in enumerate(order) if S & L.finals}
    D = LangAcceptor.from_table(L.alphabet, table, 0, finals)
    with _memo_lock:
        L.__dict__.setdefault("_det", D)
    return L.__dict__["_det"]


def minimize(L: LangAcceptor) -> LangAcceptor:
    """Minimal complete DFA, states numbered in shortlex BFS order."""
    table, start, finals = _dtable(L)
    k = L.k
    # trim to reachable first so the quotient is canonical
    index = {start: 0}
    order = [start]
    for q in order:
        for t in table[q]:
            if t not in index:
                index[t] = len(order)
                order.append(t)
    flat = [index[t] for q in order for t in table[q]]
    labels = [1 if q in finals else 0 for q in order]
    cls = kernels.refine(flat, labels, len(order), k)
    renum = {cls[0]: 0}
    queue = [0]
    rep = {cls[0]: 0}
    for i in range(len(order)):
        rep.setdefault(cls[i], i)
    new_table = []
    for c in queue:
        q = rep[c]
        row = []
        for a in range(k):
            tc = cls[flat[q * k + a]]
            if tc not in renum:
                renum[tc] = len(queue)
                queue.append(tc)
            row.append(renum[tc])
        new_table.append(row)
    new_finals = {renum[c] for c in queue if labels[rep[c]]}
    return LangAcceptor.from_table(L.alphabet, new_table, 0, new_finals)


def complement(L: LangAcceptor) -> LangAcceptor:
    table, start, finals = _dtable(L)
    return LangAcceptor.from_table(L.alphabet, table, start,
                                   set(range(len(table))) - set(finals))


def intersect(L1: LangAcceptor, L2: LangAcceptor) -> LangAcceptor:
    _same_alphabet(L1, L2)
    k = L1.k
    start = [(p, q) for p in sorted(L1.initial) for q in sorted(L2.initial)]
    index = {pq: i for i, pq in enumerate(start)}
    order = list(start)
    trans = []
    for p, q in order:
        row = []
        for a in range(k):
            targets = []
            for p2 in L1.trans[p][a]:
                for q2 in L2.trans[q][a]:
                    j = index.get((p2, q2))
                    if j is None:
                        j = index[(p2, q2)] = len(order)
                        order.append((p2, q2))
                    targets.append(j)
            row.append(targets)
        trans.append(row)
    finals = {i for i, (p, q) in enumerate(order) if p in L1.finals and q in L2.finals}
    return LangAcceptor(L1.alphabet, trans, range(len(start)), finals)


def union(L1: LangAcceptor, L2: LangAcceptor) -> LangAcceptor:
    _same_alphabet(L1, L2)
    off = L1.size
    trans = list(L1.trans) + [[[t + off for t in ts] for ts in row] for row in L2.trans]
    return LangAcceptor(L1.alphabet, trans,
                        set(L1.initial) | {q + off for q in L2.initial},
                        set(L1.finals) | {q + off for q in L2.finals})


def difference(L1: LangAcceptor, L2: LangAcceptor) -> LangAcceptor:
    return intersect(L1, complement(L2))


def universal(alphabet) -> LangAcceptor:
    alphabet = tuple(alphabet)
    return LangAcceptor.from_table(alphabet, [[0] * len(alphabet)], 0, {0})


def empty(alphabet) -> LangAcceptor:
    alphabet = tuple(alphabet)
    return LangAcceptor.from_table(alphabet, [[0] * len(alphabet)], 0, ())


def at_least(alphabet, length: int) -> LangAcceptor:
    """``A^{>=length}``."""
    alphabet = tuple(alphabet)
    table = [[min(i + 1, length)] * len(alphabet) for i in range(length + 1)]
    return LangAcceptor.from_table(alphabet, table, 0, {length})


def from_words(alphabet, words) -> LangAcceptor:
    """Finite language given by its words (trie acceptor)."""
    alphabet = tuple(alphabet)
    ix = {a: i for i, a in enumerate(alphabet)}
    trans = [[[] for _ in alphabet]]
    finals = set()
    for w in words:
        q = 0
        for a in w:
            if a not in ix:
                raise AlphabetMismatch(f"symbol {a!r} not in alphabet")
            row = trans[q][ix[a]]
            if not row:
                row.append(len(trans))
                trans.append([[] for _ in alphabet])
            q = row[0]
        finals.add(q)
    return LangAcceptor(alphabet, trans, {0}, finals)


# -- decision procedures -----------------------------------------------------

def _bfs_word(parent, node):
    word = []
    while parent[node] is not None:
        node, a = parent[node]
        word.append(a)
    return tuple(reversed(word))


def shortest_member(L: LangAcceptor):
    """Shortlex-least accepted word, or ``None`` if the language is empty."""
    parent = {}
    queue = deque()
    for q in sorted(L.initial):
        parent[q] = None
        queue.append(q)
    while queue:
        q = queue.popleft()
        if q in L.finals:
            return tuple(L.alphabet[a] for a in _bfs_word(parent, q))
        for a in range(L.k):
            for t in L.trans[q][a]:
                if t not in parent:
                    parent[t] = (q, a)
                    queue.append(t)
    return None


def is_empty(L: LangAcceptor) -> bool:
    return shortest_member(L) is None


def counterexample(L1: LangAcceptor, L2: LangAcceptor):
    """Shortlex-least word of ``L1 \\ L2``, or ``None`` when ``L1`` is included in ``L2``."""
    _same_alphabet(L1, L2)
    table, start, finals2 = _dtable(L2)
    k = L1.k
    parent = {}
    queue = deque()
    for p in sorted(L1.initial):
        parent[(p, start)] = None
        queue.append((p, start))
    while queue:
        node = queue.popleft()
        p, q = node
        if p in L1.finals and q not in finals2:
            return tuple(L1.alphabet[a] for a in _bfs_word(parent, node))
        for a in range(k):
            q2 = table[q][a]
            for p2 in L1.trans[p][a]:
                nxt = (p2, q2)
                if nxt not in parent:
                    parent[nxt] = (node, a)
                    queue.append(nxt)
    return None


def includes(L1: LangAcceptor, L2: LangAcceptor) -> bool:
    """``L1`` is a subset of ``L2``."""
    return counterexample(L1, L2) is None


def equivalent(L1: LangAcceptor, L2: LangAcceptor) -> bool:
    return includes(L1, L2) and includes(L2, L1)


def symmetric_witness(L1: LangAcceptor, L2: LangAcceptor):
    """Shortlex-least word in exactly one of the two languages, or ``None``."""
    cands = [w for w in (counterexample(L1, L2), counterexample(L2, L1)) if w is not None]
    if not cands:
        return None
    order = {a: i for i, a in enumerate(L1.alphabet)}
    return min(cands, key=lambda w: (len(w), [order[a] for a in w]))


def words(L: LangAcceptor, max_len: int) -> Iterator[tuple]:
    """Accepted words of length at most ``max_len`` in shortlex order."""
    table, start, finals = _dtable(L)
    layer = [((), start)]
    for length in range(max_len + 1):
        for w, q in layer:
            if q in finals:
                yield tuple(L.alphabet[a] for a in w)
        if length == max_len:
            break
        layer = [(w + (a,), table[q][a]) for w, q in layer for a in range(L.k)]


def count_by_length(L: LangAcceptor, max_len: int) -> list:
    """Number of accepted words of each length ``0..max_len``."""
    table, start, finals = _dtable(L)
    dist = {start: 1}
    counts = []
    for length in range(max_len + 1):
        counts.append(sum(c for q, c in dist.items() if q in finals))
        nxt = {}
        for q, c in dist.items():
            for t in table[q]:
                nxt[t] = nxt.get(t, 0) + c
        dist = nxt
    return counts


def is_finite(L: LangAcceptor) -> bool:
    """No cycle through a state that is both reachable and co-reachable."""
    table, start, finals = _dtable(L)
    n = len(table)
    reach = {start}
    stack = [start]
    while stack:
        q = stack.pop()
        for t in table[q]:
            if t not in reach:
                reach.add(t)
                stack.append(t)
    preds = [[] for _ in range(n)]
    for q in range(n):
        for t in table[q]:
            preds[t].append(q)
    coreach = set(finals)
    stack = list(finals)
    while stack:
        q = stack.pop()
        for p in preds[q]:
            if p not in coreach:
                coreach.add(p)
                stack.append(p)
    useful = reach & coreach
    color = {}
    for root in useful:
        if root in color:
            continue
        color[root] = 1
        work = [(root, iter(table[root]))]
        while work:
            q, it = work[-1]
            for t in it:
                if t not in useful:
                    continue
                if color.get(t) == 1:
                    return False
                if t not in color:
                    color[t] = 1
                    work.append((t, iter(table[t])))
                    break
            else:
                color[q] = 2
                work.pop()
    return True


# -- ideals ------------------------------------------------------------------

@dataclass(frozen=True)
class IdealLang:
    """The two-sided ideal ``A* U A*`` generated by finitely many words."""

    alphabet: tuple
    generators: tuple

    def __post_init__(self):
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        gens = tuple(tuple(w) for w in self.generators)
        if not gens:
            raise ValueError("an ideal needs at least one generator")
        for w in gens:
            for a in w:
                if a not in self.alphabet:
                    raise AlphabetMismatch(f"symbol {a!r} not in alphabet")
        object.__setattr__(self, "generators", gens)

    def describe(self):
        sep = "" if all(len(a) == 1 for a in self.alphabet) else "."
        return "ideal(" + ", ".join(sep.join(w) or "<empty>" for w in self.generators) + ")"


def ideal_language(ideal: IdealLang) -> LangAcceptor:
    """Factor-matching acceptor for ``A* U A*``."""
    A = ideal.alphabet
    k = len(A)
    ix = {a: i for i, a in enumerate(A)}
    if any(len(w) == 0 for w in ideal.generators):
        return universal(A)
    # state 0 scans, state 1 accepts (absorbing), trie nodes follow
    trans = [[[0] for _ in A], [[1] for _ in A]]
    children = {}
    for w in ideal.generators:
        node = 0
        for i, a in enumerate(w):
            last = i == len(w) - 1
            key = (node, ix[a])
            if last:
                trans[node][ix[a]].append(1)
                break
            if key not in children:
                children[key] = len(trans)
                trans[node][ix[a]].append(len(trans))
                trans.append([[] for _ in range(k)])
            node = children[key]
    return LangAcceptor(A, trans, {0}, {1})


def two_sided_closure(L: LangAcceptor) -> LangAcceptor:
    """``A* L A*``."""
    k = L.k
    n = L.size
    scan, done = n, n + 1
    trans = [[list(t) for t in row] for row in L.trans]
    for row in trans:
        for a in range(k):
            if any(t in L.finals for t in row[a]):
                row[a].append(done)
    scan_row = [[scan] for _ in range(k)]
    for q in L.initial:
        for a in range(k):
            scan_row[a].extend(L.trans[q][a])
            if any(t in L.finals for t in L.trans[q][a]):
                scan_row[a].append(done)
    trans.append(scan_row)
    trans.append([[done] for _ in range(k)])
    finals = set(L.finals) | {done}
    if L.initial & L.finals:
        finals.add(scan)
    return LangAcceptor(L.alphabet, trans, set(L.initial) | {scan}, finals)


def is_ideal(L: LangAcceptor) -> bool:
    return includes(two_sided_closure(L), L)


def minimal_ideal_words(L: LangAcceptor, max_len: int) -> list:
    """Words of ``L`` up to ``max_len`` with no proper factor in ``L``.

    Because ``L`` is an ideal, it is enough that dropping the first or the
    last letter leaves ``L``.
    """
    if not is_ideal(L):
        raise NotAnIdeal("language is not closed under two-sided extension")
    table, start, finals = _dtable(L)
    k = L.k

    def member(w):
        q = start
        for a in w:
            q = table[q][a]
        return q in finals

    if start in finals:
        return [()]
    found = []
    layer = [((), start)]
    for _ in range(max_len):
        nxt = []
        for w, q in layer:
            for a in range(k):
                u, t = w + (a,), table[q][a]
                if t in finals:
                    if not member(u[1:]):
                        found.append(tuple(L.alphabet[x] for x in u))
                else:
                    nxt.append((u, t))
        layer = nxt
    return found


# -- languages attached to a DFA ----------------------------------------------

def power_acceptor(dfa: Dfa, start_mask: int, final) -> LangAcceptor:
    """Power automaton of ``dfa`` from ``start_mask``; ``final(mask)`` picks finals."""
    masks, table = kernels.subsets(dfa.flat, dfa.n, dfa.k, start_mask)
    k = dfa.k
    rows = [table[i * k:(i + 1) * k] for i in range(len(masks))]
    finals = {i for i, m in enumerate(masks) if final(m)}
    L = LangAcceptor.from_table(dfa.alphabet, rows, 0, finals)
    object.__setattr__(L, "subset_labels", tuple(masks))
    return L


def _singleton(m):
    return m != 0 and m & (m - 1) == 0


def syn_language(dfa: Dfa) -> LangAcceptor:
    """Reset words: ``{u : |Q.u| = 1}``."""
    return power_acceptor(dfa, dfa.full_mask, _singleton)


def r_language(dfa: Dfa, s: str) -> LangAcceptor:
    """``{u : Q.u = {s}}``."""
    target = 1 << dfa.state_index(s)
    return power_acceptor(dfa, dfa.full_mask, lambda m: m == target)


def _subset_mask(dfa: Dfa, subset) -> int:
    m = subset if isinstance(subset, int) else dfa.mask(subset)
    if m == 0:
        raise ValueError("subset must be nonempty")
    return m


def syn_from(dfa: Dfa, subset) -> LangAcceptor:
    """``Syn(S) = {u : |S.u| = 1}``."""
    return power_acceptor(dfa, _subset_mask(dfa, subset), _singleton)


def fix_language(dfa: Dfa, subset) -> LangAcceptor:
    """``Fix(S) = {u nonempty : S.u = S}``."""
    S = _subset_mask(dfa, subset)
    P = power_acceptor(dfa, S, lambda m: m == S)
    # fresh non-final start state so the empty word is rejected
    table = [[t[0] for t in row] for row in P.trans]
    table.append(list(table[0]))
    return LangAcceptor.from_table(dfa.alphabet, table, len(table) - 1, P.finals)
