"""Concrete families: Cerny automata, De Bruijn automata over a finite group,
the trace function zeta, power-series action and lamplighter relations."""

from __future__ import annotations

from dataclasses import dataclass, field
from math import lcm
from itertools import product as iproduct

from . import automata
from .automata import Dfa, is_reset_word
from .errors import InvalidGroupTable, NonAbelian, PrefixTooShort, WrongFamily
from .groups import ExceedsCap, Finite, element_order
from .mealy import (DEFAULT_CAP, GroupColoring, GroupWord, MealyMachine, apply_word, color,
                    element_of)
from .reglang import IdealLang


# -- Cerny -------------------------------------------------------------------

def cerny(n: int) -> Dfa:
    """``C_n``: letter 0 rotates ``i -> i+1``, letter 1 fixes all but ``0 -> 1``."""
    if n < 2:
        raise ValueError("Cerny automata need n >= 2")
    states = [str(i) for i in range(n)]
    return Dfa(states, ("0", "1"), [[(i + 1) % n, 1 if i == 0 else i] for i in range(n)])


def cerny_coloring(n: int) -> GroupColoring:
    """Every edge ``x`` is coloured ``1 - x``."""
    d = cerny(n)
    return GroupColoring(d.states, d.alphabet, [("1", "0")] * n)


def cerny_words(n: int):
    """``(w1, w2, swapped)``; letters are swapped when the literal words are not reset words."""
    if n < 2:
        raise ValueError("Cerny automata need n >= 2")
    m = n - 1
    w1 = "1" * m + ("0" * m + "1" * m) * (n - 2) + "0" * m
    w2 = "0" * m + ("1" * m + "0" * m) * (n - 2) + "1" * m
    d = cerny(n)
    if is_reset_word(d, w1) and is_reset_word(d, w2):
        return tuple(w1), tuple(w2), False
    flip = str.maketrans("01", "10")
    s1, s2 = w1.translate(flip), w2.translate(flip)
    if is_reset_word(d, s1) and is_reset_word(d, s2):
        return tuple(s1), tuple(s2), True
    raise AssertionError(f"neither letter assignment makes w1, w2 reset words of C_{n}")


def cerny_ideal(n: int) -> IdealLang:
    """``A*{w1, w2}A*``."""
    w1, w2, _ = cerny_words(n)
    return IdealLang(("0", "1"), (w1, w2))


def cerny_machine(n: int) -> MealyMachine:
    return color(cerny(n), cerny_coloring(n))


# -- finite groups -------------------------------------------------------------

@dataclass(frozen=True)
class FiniteGroupTable:
    """Multiplication table on ordered tokens; ``table[i][j]`` is the index of ``x_i * x_j``."""

    elements: tuple
    table: tuple
    identity: int = field(init=False)
    inverse: tuple = field(init=False)

    def __post_init__(self):
        els = tuple(self.elements)
        tab = tuple(tuple(r) for r in self.table)
        object.__setattr__(self, "elements", els)
        object.__setattr__(self, "table", tab)
        n = len(els)
        if n == 0 or len(set(els)) != n:
            raise InvalidGroupTable("elements must be distinct and nonempty")
        for x in els:
            automata.check_token(x, "group element")
        if len(tab) != n or any(len(r) != n or not all(0 <= v < n for v in r) for r in tab):
            raise InvalidGroupTable("table must be n x n over element indices")
        ident = [e for e in range(n) if all(tab[e][x] == x and tab[x][e] == x for x in range(n))]
        if not ident:
            raise InvalidGroupTable("no identity element")
        e = ident[0]
        inv = []
        for x in range(n):
            ys = [y for y in range(n) if tab[x][y] == e and tab[y][x] == e]
            if not ys:
                raise InvalidGroupTable(f"{els[x]!r} has no inverse")
            inv.append(ys[0])
        for x, y, z in iproduct(range(n), repeat=3):
            if tab[tab[x][y]][z] != tab[x][tab[y][z]]:
                raise InvalidGroupTable(f"not associative at {els[x]}, {els[y]}, {els[z]}")
        object.__setattr__(self, "identity", e)
        object.__setattr__(self, "inverse", tuple(inv))

    @classmethod
    def cyclic(cls, m: int):
        """``Z_m`` on tokens ``"0" .. "m-1"``."""
        if m < 1:
            raise InvalidGroupTable("cyclic group order must be positive")
        return cls([str(i) for i in range(m)], [[(i + j) % m for j in range(m)] for i in range(m)])

    @classmethod
    def from_cayley(cls, text: str):
        """Header line of element tokens (an optional leading corner token is
        ignored), then one line per element: its token and its row."""
        lines = [ln.split("#", 1)[0].split() for ln in text.splitlines()]
        lines = [ln for ln in lines if ln]
        if not lines:
            raise InvalidGroupTable("empty Cayley table")
        header = lines[0]
        rows = lines[1:]
        if len(header) == len(rows) + 1:
            header = header[1:]
        if len(header) != len(rows):
            raise InvalidGroupTable("header and row count disagree")
        ix = {x: i for i, x in enumerate(header)}
        table = [None] * len(header)
        for r in rows:
            if len(r) != len(header) + 1 or r[0] not in ix:
                raise InvalidGroupTable(f"bad row {' '.join(r)!r}")
            try:
                table[ix[r[0]]] = [ix[v] for v in r[1:]]
            except KeyError as exc:
                raise InvalidGroupTable(f"unknown element {exc.args[0]!r}") from None
        if any(t is None for t in table):
            raise InvalidGroupTable("missing row")
        return cls(header, table)

    @property
    def order(self):
        return len(self.elements)

    @property
    def abelian(self):
        n = self.order
        return all(self.table[x][y] == self.table[y][x] for x in range(n) for y in range(n))

    def index(self, x):
        return self.elements.index(x)

    def mul(self, x, y):
        t = self.table[self.index(x)][self.index(y)]
        return self.elements[t]

    def inv(self, x):
        return self.elements[self.inverse[self.index(x)]]

    @property
    def zero(self):
        return self.elements[self.identity]

    def element_order(self, x):
        i = self.index(x)
        cur, n = i, 1
        while cur != self.identity:
            cur = self.table[cur][i]
            n += 1
        return n


# -- De Bruijn -------------------------------------------------------------------

def _join(tokens, word):
    sep = "" if all(len(t) == 1 for t in tokens) else "."
    return sep.join(word)


def _debruijn_states(k, G):
    return [tuple(w) for w in iproduct(G.elements, repeat=k)]


def debruijn(k: int, G: FiniteGroupTable) -> Dfa:
    """``B_k``: states ``A^k``, and ``ys -x-> sx``."""
    if k < 1:
        raise ValueError("k must be at least 1")
    words = _debruijn_states(k, G)
    index = {w: i for i, w in enumerate(words)}
    names = [_join(G.elements, w) for w in words]
    delta = [[index[w[1:] + (x,)] for x in G.elements] for w in words]
    return Dfa(names, G.elements, delta)


def chi_coloring(k: int, G: FiniteGroupTable) -> GroupColoring:
    """Edge ``ys -x-> sx`` outputs ``x * y^-1``."""
    words = _debruijn_states(k, G)
    rows = [tuple(G.mul(x, G.inv(w[0])) for x in G.elements) for w in words]
    return GroupColoring([_join(G.elements, w) for w in words], G.elements, rows)


@dataclass(frozen=True)
class DeBruijnMachine:
    """``M(B_k, chi_k)`` together with its parameters."""

    k: int
    group: FiniteGroupTable
    machine: MealyMachine

    def state_word(self, q):
        """Tuple of group elements spelled by the state name."""
        i = self.machine.dfa.state_index(q)
        return _debruijn_states(self.k, self.group)[i]

    def state_name(self, word):
        return _join(self.group.elements, tuple(word))

    @property
    def e(self):
        return self.state_name((self.group.zero,) * self.k)


def debruijn_machine(k: int, G: FiniteGroupTable) -> DeBruijnMachine:
    return DeBruijnMachine(k, G, color(debruijn(k, G), chi_coloring(k, G)))


def zeta(dbm, q, v) -> tuple:
    """``zeta(q, v)_i``: first letter of the state reached from ``q`` after ``v[:i]``."""
    if not isinstance(dbm, DeBruijnMachine):
        raise WrongFamily("zeta is defined for De Bruijn machines only")
    v = tuple(v)
    if not v:
        raise ValueError("v must be nonempty")
    d = dbm.machine.dfa
    out = []
    state = q
    for a in v:
        out.append(dbm.state_word(state)[0])
        state = d.step(state, (a,))
    return tuple(out)


def star_inverse(G: FiniteGroupTable, v, z):
    """Coordinatewise ``v * z^-1``."""
    return tuple(G.mul(a, G.inv(b)) for a, b in zip(v, z))


# -- power series ---------------------------------------------------------------------

@dataclass(frozen=True)
class SeriesPrefix:
    """Coefficients ``g_0 .. g_{N-1}`` of a series over an abelian group (written additively)."""

    group: FiniteGroupTable
    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(self.coeffs))

    def __len__(self):
        return len(self.coeffs)


def _add(G, x, y):
    return G.mul(x, y)


def _neg(G, x):
    return G.inv(x)


def _times_one_minus_tk(G, c, k):
    return [c[i] if i < k else _add(G, c[i], _neg(G, c[i - k])) for i in range(len(c))]


def _over_one_minus_tk(G, c, k):
    out = []
    for i, x in enumerate(c):
        out.append(x if i < k else _add(G, x, out[i - k]))
    return out


def _scale(G, c, k, ell):
    """Multiply by ``(1 - t^k)^ell`` for any integer ``ell``."""
    for _ in range(abs(ell)):
        c = _times_one_minus_tk(G, c, k) if ell > 0 else _over_one_minus_tk(G, c, k)
    return c


def _state_series(G, q, n):
    q = list(q)
    return (q + [G.zero] * n)[:n]


def series_apply(kind: str, prefix: SeriesPrefix, k: int, q=None, ell: int = 0) -> SeriesPrefix:
    """Truncated series identities for ``M(B_k, chi_k)`` over an abelian group.

    ``generator``:  ``(1 - t^k) F_g - F_q``
    ``inverse``:    ``(F_g + F_q) / (1 - t^k)`` (``q`` defaults to ``e``)
    ``conjugate``:  ``F_g - (1 - t^k)^ell F_q``
    ``q`` is a tuple of ``k`` group elements.
    """
    G = prefix.group
    if not G.abelian:
        raise NonAbelian("power-series identities need an abelian group")
    N = len(prefix)
    if N < k or N % k:
        raise PrefixTooShort(f"prefix length {N} must be a positive multiple of k={k}")
    if q is None:
        if kind != "inverse":
            raise ValueError(f"{kind} needs a state q")
        q = (G.zero,) * k
    q = tuple(q)
    if len(q) != k:
        raise ValueError("q must have length k")
    g = list(prefix.coeffs)
    fq = _state_series(G, q, N)
    if kind == "generator":
        out = [_add(G, x, _neg(G, y)) for x, y in zip(_times_one_minus_tk(G, g, k), fq)]
    elif kind == "inverse":
        out = _over_one_minus_tk(G, [_add(G, x, y) for x, y in zip(g, fq)], k)
    elif kind == "conjugate":
        out = [_add(G, x, _neg(G, y)) for x, y in zip(g, _scale(G, fq, k, ell))]
    else:
        raise ValueError(f"unknown series kind {kind!r}")
    return SeriesPrefix(G, out)


def translation(dbm: DeBruijnMachine, h) -> GroupWord:
    """``t_h = B_h B_e^-1``: adds ``-F_h``."""
    return GroupWord(((dbm.state_name(h), 1), (dbm.e, -1)))


def series_word(dbm: DeBruijnMachine, kind: str, q=None, ell: int = 0) -> GroupWord:
    """The group word whose action the matching :func:`series_apply` kind predicts.

    ``conjugate`` is ``B_e^ell t_q B_e^-ell``; with ``a = B_e^-1`` this is
    ``a^-ell t_q a^ell``.
    """
    e = GroupWord.gen(dbm.e)
    if kind == "generator":
        return GroupWord.gen(dbm.state_name(q))
    if kind == "inverse":
        return GroupWord.gen(dbm.state_name(q) if q is not None else dbm.e, -1)
    if kind == "conjugate":
        return (e ** ell) * translation(dbm, q) * (e ** -ell)
    raise ValueError(f"unknown series kind {kind!r}")


def series_by_machine(dbm: DeBruijnMachine, kind: str, prefix: SeriesPrefix, q=None,
                      ell: int = 0) -> SeriesPrefix:
    out = apply_word(dbm.machine, series_word(dbm, kind, q, ell), prefix.coeffs)
    return SeriesPrefix(prefix.group, out)


# -- lamplighter -------------------------------------------------------------------

@dataclass
class LamplighterReport:
    k: int
    group_order: int
    orders: dict = field(default_factory=dict)
    noncommuting: list = field(default_factory=list)
    a_order: object = None
    injective: bool = True
    identity_at_e: bool = True

    @property
    def orders_ok(self):
        return all(isinstance(got, Finite) and got.order == want
                   for want, got in self.orders.values())

    @property
    def ok(self):
        return (self.orders_ok and not self.noncommuting and isinstance(self.a_order, ExceedsCap)
                and self.injective and self.identity_at_e)

    def report(self) -> str:
        yn = lambda b: str(b).lower()
        lines = [f"k: {self.k}", f"group-order: {self.group_order}"]
        for h, (want, got) in self.orders.items():
            lines.append(f"t[{h}]: expected {want} got {got}")
        lines.append(f"conjugates-commute: {yn(not self.noncommuting)}")
        lines.append(f"a-order: {self.a_order}")
        lines.append(f"injective: {yn(self.injective)}")
        lines.append(f"ok: {yn(self.ok)}")
        return "\n".join(lines) + "\n"


def lamplighter_suite(k: int, G: FiniteGroupTable, conj_range: int = 3, order_cap: int = 64,
                      cap: int = DEFAULT_CAP) -> LamplighterReport:
    """Check the wreath-product relations of ``<M(B_k, chi_k)>`` exactly."""
    if not G.abelian:
        raise NonAbelian("the lamplighter suite needs an abelian group")
    dbm = debruijn_machine(k, G)
    m = dbm.machine
    rep = LamplighterReport(k, G.order)
    hs = list(iproduct(G.elements, repeat=k))
    elems = {}
    for h in hs:
        name = dbm.state_name(h)
        want = lcm(*(G.element_order(x) for x in h))
        got = element_order(m, translation(dbm, h), order_cap, machine_cap=cap)
        rep.orders[name] = (want, got)
        elems[h] = element_of(m, translation(dbm, h), cap)
    rep.identity_at_e = elems[(G.zero,) * k].is_identity
    rep.injective = len(set(elems.values())) == len(hs)
    a = GroupWord.gen(dbm.e, -1)
    rep.a_order = element_order(m, a, order_cap, machine_cap=cap)
    conj = []
    for i in range(-conj_range, conj_range + 1):
        for h in hs:
            w = (a ** i) * translation(dbm, h) * (a ** -i)
            conj.append(((i, dbm.state_name(h)), element_of(m, w, cap)))
    for x in range(len(conj)):
        for y in range(x + 1, len(conj)):
            (lx, ex), (ly, ey) = conj[x], conj[y]
            if ex.compose(ey, cap) != ey.compose(ex, cap):
                rep.noncommuting.append((lx, ly))
    return rep


# -- a qualifying automaton for the swap colouring ------------------------------------

def prop_example_dfa() -> Dfa:
    """Five states ``a..e``: letter 2 is the cycle ``a b c d e``, letters 0
    and 1 are constant maps onto ``d`` and ``a``."""
    states = "abcde"
    delta = [[3, 0, (i + 1) % 5] for i in range(5)]
    return Dfa(list(states), ("0", "1", "2"), delta)
