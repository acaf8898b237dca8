"""Exception hierarchy.  Everything derives from :class:`AutomataError`."""


class AutomataError(Exception):
    pass


class ParseError(AutomataError, ValueError):
    def __init__(self, message, line=None):
        self.line = line
        self.message = message
        super().__init__(f"line {line}: {message}" if line is not None else message)


class UnknownState(AutomataError, KeyError):
    def __str__(self):
        return f"unknown state {self.args[0]!r}"


class UnknownSymbol(AutomataError, KeyError):
    def __str__(self):
        return f"unknown symbol {self.args[0]!r}"


class AlphabetMismatch(AutomataError, ValueError):
    pass


class NoUniqueSink(AutomataError):
    pass


class NoSink(NoUniqueSink):
    pass


class NotSynchronizing(AutomataError):
    pass


class Nilpotent(AutomataError):
    pass


class NotAnIdeal(AutomataError):
    pass


class NotInvertible(AutomataError):
    pass


class NotBijective(AutomataError, ValueError):
    pass


class ResourceExceeded(AutomataError):
    """A product machine or search grew past its configured cap."""


class NotReset(AutomataError):
    pass


class NotSimple(AutomataError):
    pass


class TheoremViolation(AutomataError):
    """Raised when a proven dichotomy fails; always an implementation bug."""


class HypothesisFailed(AutomataError):
    def __init__(self, hypothesis, detail=""):
        self.hypothesis = hypothesis
        super().__init__(f"{hypothesis}: {detail}" if detail else hypothesis)


class WrongFamily(AutomataError, TypeError):
    pass


class NonAbelian(AutomataError):
    pass


class PrefixTooShort(AutomataError, ValueError):
    pass


class InvalidGroupTable(AutomataError, ValueError):
    pass
