"""Command line front end.

Reports are ``key: value`` lines headed by the tool version and the SHA-256
of the input.  ``gen`` and ``color`` print machine text instead, so they
pipe into the other commands.  Exit status: 0 on success (including
``verdict: unknown``), 1 when a resource cap is hit, 2 for unusable input.
"""

from __future__ import annotations

import argparse
import hashlib
import sys

from . import __version__, automata, groups, reset, textformat
from .automata import Dfa
from .errors import AutomataError, InvalidGroupTable, ParseError, ResourceExceeded
from .families import (FiniteGroupTable, cerny, cerny_words, chi_coloring,
                       debruijn)
from .mealy import (DEFAULT_CAP, GroupColoring, GroupWord, MealyMachine, color, is_reduced,
                    parse_mealy, render_mealy)
from .reglang import IdealLang

yn = lambda b: str(b).lower()


class Input:
    """Raw text of the input file plus its digest."""

    def __init__(self, path):
        if path == "-":
            self.text = sys.stdin.read()
        else:
            with open(path, encoding="utf-8") as fh:
                self.text = fh.read()
        self.digest = hashlib.sha256(self.text.encode("utf-8")).hexdigest()

    def kind(self):
        return textformat.sniff(self.text)

    def dfa(self) -> Dfa:
        if self.kind() == "mealy":
            return parse_mealy(self.text).dfa
        return automata.parse_dfa(self.text)

    def mealy(self) -> MealyMachine:
        if self.kind() != "mealy":
            raise ParseError("expected 'type: mealy'", 1)
        return parse_mealy(self.text)


def _header(inp):
    return [f"tool: mealysync {__version__}", f"input-sha256: {inp.digest}"]


def _word(w):
    return " ".join(w) if w else "<empty>"


def _ideal(machine, gens):
    if not gens:
        return None
    words = []
    for g in gens:
        w = tuple(g) if " " not in g else tuple(g.split())
        for a in w:
            machine.dfa.symbol_index(a)
        words.append(w)
    return IdealLang(machine.alphabet, tuple(words))


# -- subcommands ----------------------------------------------------------------

def cmd_analyze(args):
    inp = Input(args.file)
    lines = _header(inp)
    kind = inp.kind()
    dfa = inp.dfa()
    c = automata.classify(dfa)
    lines.append(f"type: {kind}")
    lines.append(f"states: {dfa.n}")
    lines.append(f"alphabet: {' '.join(dfa.alphabet)}")
    lines.append(f"synchronizing: {yn(c.synchronizing)}")
    if c.synchronizing:
        lines.append(f"shortest_reset_length: {c.shortest_reset_length}")
        lines.append(f"shortest_reset_word: {_word(c.shortest_reset_word)}")
    lines.append(f"sink: {c.sink if c.sink is not None else '-'}")
    lines.append(f"nilpotent: {yn(c.nilpotent)}")
    lines.append(f"bounded: {'-' if c.bounded is None else yn(c.bounded)}")
    lines.append(f"simple: {yn(c.simple)}")
    lines.append(f"strongly_connected: {yn(c.strongly_connected)}")
    if c.synchronizing:
        fg = automata.is_finitely_generated_syn(dfa, args.monoid_cap)
        lines.append(f"finitely_generated: {fg.verdict}")
    if kind == "mealy":
        m = inp.mealy()
        lines.append(f"invertible: {yn(m.invertible)}")
        lines.append(f"reduced: {yn(is_reduced(m))}")
        if m.invertible:
            v = reset.is_reset(m)
            lines.append(f"reset: {yn(v.holds)} ({v.reason})")
    return lines


def cmd_check_reset(args):
    inp = Input(args.file)
    m = inp.mealy()
    lines = _header(inp)
    H = _ideal(m, args.ideal)
    v = reset.is_reset(m) if H is None else reset.is_weakly_reset(m, H)
    lines.append(f"property: {'reset' if H is None else 'weakly-reset'}")
    lines.append(f"ideal: {v.ideal}")
    lines.append(f"verdict: {yn(v.holds)}")
    lines.append(f"reason: {v.reason}")
    for key, w in sorted(v.witnesses.items(), key=lambda kv: str(kv[0])):
        if key is None:
            lines.append(f"outside-syn: {_word(w)}")
        else:
            lines.append(f"witness: {key} {_word(w)}")
    return lines


def cmd_certify(args):
    inp = Input(args.file)
    m = inp.mealy()
    cert = reset.freeness_certificate(m, _ideal(m, args.ideal), args.iteration_cap,
                                      args.ideal_state_cap)
    return _header(inp) + cert.report().splitlines()


def cmd_group(args):
    inp = Input(args.file)
    m = inp.mealy()
    lines = _header(inp)
    if args.action == "order":
        table = groups.enumerate_group(m, args.cap, args.state_cap)
        if table.closed:
            lines.append("verdict: finite")
        else:
            lines.append("verdict: unknown")
        lines.extend(table.report().splitlines())
    elif args.action == "relations":
        pairs = groups.relation_search(m, args.maxlen, args.state_cap)
        lines.append(f"max-length: {args.maxlen}")
        lines.append(f"relations: {len(pairs)}")
        lines.extend(f"relation: {u} = {v}" for u, v in pairs)
    else:
        g = GroupWord.parse(args.word)
        for q, _ in g.factors:
            m.dfa.state_index(q)
        r = groups.element_order(m, g, args.cap, machine_cap=args.state_cap)
        lines.append(f"element: {g}")
        if isinstance(r, groups.Finite):
            lines.append(f"order: {r.order}")
        else:
            lines.append(f"order: {r}")
            if r.witness:
                lines.append(f"orbit-witness: {_word(r.witness)}")
    return lines


def _group_table(args):
    if args.cayley:
        with open(args.cayley, encoding="utf-8") as fh:
            return FiniteGroupTable.from_cayley(fh.read())
    g = args.group
    if not (g.startswith("z") and g[1:].isdigit()):
        raise InvalidGroupTable(f"--group expects zM, got {g!r}")
    return FiniteGroupTable.cyclic(int(g[1:]))


def cmd_gen(args):
    lines = [f"# mealysync {__version__}"]
    if args.family == "cerny":
        d = cerny(args.n)
        _, _, swapped = cerny_words(args.n)
        lines.append(f"# cerny {args.n}; letter roles swapped: {yn(swapped)}")
        return lines + automata.render_dfa(d).splitlines()
    G = _group_table(args)
    lines.append(f"# debruijn {args.k} over a group of order {G.order}")
    m = color(debruijn(args.k, G), chi_coloring(args.k, G))
    return lines + render_mealy(m).splitlines()


def cmd_color(args):
    inp = Input(args.file)
    d = inp.dfa()
    lines = [f"# mealysync {__version__}", f"# input-sha256: {inp.digest}"]
    if args.identity:
        chi = GroupColoring.identity(d)
    elif args.flip:
        if d.k != 2:
            raise InvalidGroupTable("--flip needs a two-letter alphabet")
        chi = GroupColoring(d.states, d.alphabet, [tuple(reversed(d.alphabet))] * d.n)
    elif args.adding_machine:
        amc = groups.adding_machine_coloring(d)
        lines.append(f"# q0: {amc.q0} k: {amc.k} d: {amc.d}")
        lines.append(f"# blocks: {''.join(amc.blocks[0])} {''.join(amc.blocks[1])}")
        chi = amc.coloring
    else:
        q, a, b = args.prop_example
        chi, H = reset.prop_example_coloring(d, q, a, b)
        lines.append(f"# ideal: {H.describe()}")
    return lines + render_mealy(color(d, chi)).splitlines()


# -- argument parsing ----------------------------------------------------------------

def build_parser():
    p = argparse.ArgumentParser(prog="mealysync",
                                description="Synchronizing automata and reset Mealy machines.")
    p.add_argument("--version", action="version", version=f"mealysync {__version__}")
    p.add_argument("--state-cap", type=int, default=DEFAULT_CAP,
                   help=f"largest product machine before giving up (default {DEFAULT_CAP})")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="classify a DFA or Mealy machine")
    a.add_argument("file", nargs="?", default="-")
    a.add_argument("--monoid-cap", type=int, default=100_000,
                   help="transition monoid size limit (default 100000)")
    a.set_defaults(func=cmd_analyze)

    for name, func, hlp in (("check-reset", cmd_check_reset, "decide (weakly) reset"),
                            ("certify", cmd_certify, "freeness or singularity certificate")):
        c = sub.add_parser(name, help=hlp)
        c.add_argument("file", nargs="?", default="-")
        c.add_argument("--ideal", nargs="+", metavar="WORD",
                       help="generators of the ideal; letters are characters, or space separated")
        c.set_defaults(func=func)
        if name == "certify":
            c.add_argument("--iteration-cap", type=int, default=50,
                           help="maximal-ideal iterations (default 50)")
            c.add_argument("--ideal-state-cap", type=int, default=reset.IDEAL_STATE_CAP,
                           help="largest maximal-ideal acceptor (default %(default)s)")

    g = sub.add_parser("group", help="group generated by a Mealy machine")
    gs = g.add_subparsers(dest="action", required=True)
    o = gs.add_parser("order")
    o.add_argument("file", nargs="?", default="-")
    o.add_argument("--cap", type=int, default=10_000, help="element limit (default 10000)")
    r = gs.add_parser("relations")
    r.add_argument("file", nargs="?", default="-")
    r.add_argument("--maxlen", type=int, default=4, help="longest positive word (default 4)")
    e = gs.add_parser("element-order")
    e.add_argument("word", help="group word such as 'q r^-1'")
    e.add_argument("file", nargs="?", default="-")
    e.add_argument("--cap", type=int, default=64, help="largest order tried (default 64)")
    g.set_defaults(func=cmd_group)

    gen = sub.add_parser("gen", help="emit a family member")
    fam = gen.add_subparsers(dest="family", required=True)
    c = fam.add_parser("cerny")
    c.add_argument("n", type=int)
    d = fam.add_parser("debruijn")
    d.add_argument("k", type=int)
    src = d.add_mutually_exclusive_group()
    src.add_argument("--group", default="z2", help="cyclic group zM (default z2)")
    src.add_argument("--cayley", metavar="FILE", help="Cayley table file")
    gen.set_defaults(func=cmd_gen)

    col = sub.add_parser("color", help="turn a DFA into a Mealy machine")
    col.add_argument("file", nargs="?", default="-")
    how = col.add_mutually_exclusive_group(required=True)
    how.add_argument("--identity", action="store_true", help="every edge outputs its input")
    how.add_argument("--flip", action="store_true", help="swap the two letters everywhere")
    how.add_argument("--adding-machine", action="store_true",
                     help="colouring with an element of infinite order (non-nilpotent sink DFA)")
    how.add_argument("--prop-example", nargs=3, metavar=("STATE", "A", "B"),
                     help="swap letters A and B at STATE, identity elsewhere")
    col.set_defaults(func=cmd_color)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        lines = args.func(args)
    except ResourceExceeded as exc:
        print(f"error: resource cap exceeded: {exc}", file=sys.stderr)
        return 1
    except (AutomataError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    sys.stdout.write("\n".join(lines) + "\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
