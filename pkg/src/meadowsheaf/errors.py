"""Exception types and the structured counterexample record."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any


def jsonable(obj: Any) -> Any:
    """Convert witness payloads into plain JSON-compatible values."""
    if hasattr(obj, "to_json"):
        return obj.to_json()
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, Fraction):
        return str(obj) if obj.denominator != 1 else str(obj.numerator)
    if isinstance(obj, (int, float, str)):
        return obj
    if isinstance(obj, frozenset):
        return sorted(jsonable(x) for x in obj)
    if isinstance(obj, dict):
        return {str(jsonable_key(k)): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set)):
        return [jsonable(x) for x in obj]
    return repr(obj)


def jsonable_key(k: Any) -> str:
    if isinstance(k, frozenset):
        return "{" + ",".join(sorted(k)) + "}"
    return str(k)


@dataclass(frozen=True)
class Witness:
    """A counterexample produced by a failed check.

    Witnesses are falsy, so every ``verify``-style function can return
    ``True`` on success and a ``Witness`` on failure while still reading
    naturally in an ``if`` statement.
    """

    kind: str
    detail: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return False

    def to_json(self) -> dict:
        return {"kind": self.kind, "detail": jsonable(self.detail)}

    def __str__(self) -> str:
        parts = ", ".join(f"{k}={jsonable(v)}" for k, v in self.detail.items())
        return f"{self.kind}({parts})"


class MeadowSheafError(Exception):
    """Base class for all errors raised by this package."""


class WitnessError(MeadowSheafError):
    """An error that carries a :class:`Witness`."""

    def __init__(self, message: str, witness: Witness | None = None):
        super().__init__(message)
        self.witness = witness


class MixedRings(MeadowSheafError, TypeError):
    pass


class DomainMismatch(MeadowSheafError, TypeError):
    pass


class NotAUnit(MeadowSheafError, ArithmeticError):
    pass


class NotEnumerable(MeadowSheafError):
    pass


class InvalidTopology(WitnessError):
    pass


class UnknownPoint(MeadowSheafError, KeyError):
    pass


class NotInOpen(MeadowSheafError, ValueError):
    pass


class NotNested(MeadowSheafError, ValueError):
    pass


class NotTD(MeadowSheafError):
    pass


class ReconstructionFailure(MeadowSheafError):
    pass


class InvalidPresheaf(WitnessError):
    pass


class IncoherentLattice(WitnessError):
    pass


class InvalidMorphism(WitnessError):
    pass


class MixedMeadows(MeadowSheafError, TypeError):
    pass


class NotComparable(MeadowSheafError, ValueError):
    pass


class NotCommon(WitnessError):
    pass


class NotAnIso(MeadowSheafError, ValueError):
    pass


class TooLarge(MeadowSheafError):
    pass


class Undecided(MeadowSheafError):
    """Raised when a symbolic check cannot be settled without more data."""


class DocumentError(MeadowSheafError, ValueError):
    """Malformed input document; carries an optional line/column."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(message + where)
        self.line = line
        self.column = column


@dataclass
class Report:
    """Named check outcomes, each ``True`` or a :class:`Witness`.

    ``mode`` records how the checks were run (``"exhaustive"`` or
    ``"sample"``) so that a sampled pass is never mistaken for a proof.
    """

    subject: str
    results: dict = field(default_factory=dict)
    mode: str = "exhaustive"
    notes: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(v is True for v in self.results.values())

    def failures(self) -> dict:
        return {k: v for k, v in self.results.items() if v is not True}

    def __bool__(self) -> bool:
        return self.passed

    def to_json(self) -> dict:
        return {
            "type": "report",
            "subject": self.subject,
            "mode": self.mode,
            "passed": self.passed,
            "results": {k: (True if v is True else jsonable(v)) for k, v in self.results.items()},
            "notes": jsonable(self.notes),
        }

    def lines(self) -> list[str]:
        out = [f"{self.subject} [{self.mode}]"]
        for k, v in self.results.items():
            out.append(f"  {k}: {'pass' if v is True else 'FAIL ' + str(v)}")
        return out
