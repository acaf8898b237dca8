"""Synchronizing automata, reset Mealy machines and the groups they generate."""

__version__ = "0.1.0"

from . import automata, families, groups, kernels, mealy, reglang, reset  # noqa: E402
from .automata import Dfa, classify, parse_dfa, render_dfa, shortest_reset_word  # noqa: E402
from .errors import *  # noqa: E402,F401,F403
from .families import (FiniteGroupTable, cerny, cerny_coloring, cerny_ideal, chi_coloring,  # noqa: E402
                       debruijn, debruijn_machine, lamplighter_suite, series_apply, zeta)
from .groups import (ElementTable, ExceedsCap, Finite, adding_machine_coloring,  # noqa: E402
                     element_order, enumerate_group, relation_search)
from .mealy import (Element, GroupColoring, GroupWord, MealyMachine, apply, color,  # noqa: E402
                    minimize, parse_mealy, render_mealy)
from .reglang import IdealLang, LangAcceptor  # noqa: E402
from .reset import (freeness_certificate, gap_classify, is_reset, is_weakly_reset,  # noqa: E402
                    maximal_ideal)
