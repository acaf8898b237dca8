"""Line-oriented text format for DFAs and Mealy machines.

::

    type: dfa                 # or: type: mealy
    alphabet: 0 1
    states: q s
    trans: q 0 s              # mealy: trans: q 0|1 s
    ...

``#`` starts a comment.  Every (state, symbol) pair appears exactly once.
"""

from __future__ import annotations

from .errors import ParseError


def _fields(text):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, rest = line.partition(":")
        if not sep:
            raise ParseError(f"expected 'key: value', got {line!r}", lineno)
        yield lineno, key.strip(), rest.split()


def parse(text: str):
    """Parse either kind of file.

    Returns ``(kind, alphabet, states, trans, outputs)`` where ``trans`` maps
    ``(state, symbol)`` to a state and ``outputs`` maps it to an output
    symbol (empty for DFAs).
    """
    kind = alphabet = states = None
    trans, outputs = {}, {}
    for lineno, key, vals in _fields(text):
        if key == "type":
            if kind is not None:
                raise ParseError("duplicate 'type' line", lineno)
            if vals not in (["dfa"], ["mealy"]):
                raise ParseError(f"unknown type {' '.join(vals)!r}", lineno)
            kind = vals[0]
        elif key == "alphabet":
            if alphabet is not None:
                raise ParseError("duplicate 'alphabet' line", lineno)
            if not vals or len(set(vals)) != len(vals) or any("|" in v for v in vals):
                raise ParseError("alphabet must list distinct symbols without '|'", lineno)
            alphabet = vals
        elif key == "states":
            if states is not None:
                raise ParseError("duplicate 'states' line", lineno)
            if not vals or len(set(vals)) != len(vals) or any("|" in v for v in vals):
                raise ParseError("states must list distinct names without '|'", lineno)
            states = vals
        elif key == "trans":
            if kind is None or alphabet is None or states is None:
                raise ParseError("'type', 'alphabet' and 'states' must precede transitions", lineno)
            if len(vals) != 3:
                raise ParseError(f"transition needs 3 fields, got {len(vals)}", lineno)
            src, label, dst = vals
            if kind == "mealy":
                inp, bar, out = label.partition("|")
                if not bar:
                    raise ParseError(f"mealy transition label must be 'in|out', got {label!r}", lineno)
            else:
                inp, out = label, None
                if "|" in label:
                    raise ParseError("dfa transitions take a plain symbol", lineno)
            for name in (src, dst):
                if name not in states:
                    raise ParseError(f"unknown state {name!r}", lineno)
            for sym in (inp,) if out is None else (inp, out):
                if sym not in alphabet:
                    raise ParseError(f"unknown symbol {sym!r}", lineno)
            if (src, inp) in trans:
                raise ParseError(f"duplicate transition for ({src}, {inp})", lineno)
            trans[(src, inp)] = dst
            if out is not None:
                outputs[(src, inp)] = out
        else:
            raise ParseError(f"unknown key {key!r}", lineno)
    if kind is None:
        raise ParseError("missing 'type' line")
    if alphabet is None or states is None:
        raise ParseError("missing 'alphabet' or 'states' line")
    for s in states:
        for a in alphabet:
            if (s, a) not in trans:
                raise ParseError(f"missing transition for ({s}, {a})")
    return kind, alphabet, states, trans, outputs


def render(kind, alphabet, states, rows):
    """``rows`` yields ``(src, label, dst)`` in canonical order."""
    lines = [f"type: {kind}", "alphabet: " + " ".join(alphabet), "states: " + " ".join(states)]
    lines.extend(f"trans: {src} {label} {dst}" for src, label, dst in rows)
    return "\n".join(lines) + "\n"


def sniff(text: str) -> str:
    for lineno, key, vals in _fields(text):
        if key == "type" and vals:
            return vals[0]
        break
    raise ParseError("first line must be 'type: dfa' or 'type: mealy'", 1)
