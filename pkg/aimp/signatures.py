"""
Verb signatures: the semantic layer between a sentence fragment and A-IMP.
Each signature lowers deterministically into A-IMP commands.
"""
from dataclasses import dataclass
from typing import Tuple, Union

from aimp.errors import InvalidSignature, TypeCheckError
from aimp.language import (
    AddrRef, Address, Cmd, Expr, Minus, Plus, Print, Seq, Set,
    Type, expr_to_json, typecheck_expr,
)


def _checked_quantity(expr: Expr) -> None:
    try:
        found = typecheck_expr(expr)
    except TypeCheckError as e:
        raise InvalidSignature(f"signature quantity does not typecheck: {e}") from e
    if found is not Type.NUM:
        raise InvalidSignature(f"signature quantity must be num, found {found.value}")


@dataclass(frozen=True)
class Observation:
    """A new variable with an initial value."""
    a: Address
    e: Expr

    def __post_init__(self):
        object.__setattr__(self, "a", Address(self.a))


@dataclass(frozen=True)
class Construct:
    a: Address
    e: Expr

    def __post_init__(self):
        object.__setattr__(self, "a", Address(self.a))


@dataclass(frozen=True)
class Destroy:
    a: Address
    e: Expr

    def __post_init__(self):
        object.__setattr__(self, "a", Address(self.a))


@dataclass(frozen=True)
class PositiveTransfer:
    """The subject-side address `a1` gains `e`, taken from `a2`."""
    a1: Address
    a2: Address
    e: Expr

    def __post_init__(self):
        object.__setattr__(self, "a1", Address(self.a1))
        object.__setattr__(self, "a2", Address(self.a2))


@dataclass(frozen=True)
class NegativeTransfer:
    """The subject-side address `a1` loses `e`, handed to `a2`."""
    a1: Address
    a2: Address
    e: Expr

    def __post_init__(self):
        object.__setattr__(self, "a1", Address(self.a1))
        object.__setattr__(self, "a2", Address(self.a2))


@dataclass(frozen=True)
class Get:
    a: Address

    def __post_init__(self):
        object.__setattr__(self, "a", Address(self.a))


VerbSignature = Union[Observation, Construct, Destroy, PositiveTransfer, NegativeTransfer, Get]

SIGNATURE_NAMES = {
    Observation: "observation",
    Construct: "construct",
    Destroy: "destroy",
    PositiveTransfer: "positive_transfer",
    NegativeTransfer: "negative_transfer",
    Get: "get",
}


def validate(sig: VerbSignature) -> None:
    """Raise InvalidSignature unless the signature invariants hold."""
    if isinstance(sig, (PositiveTransfer, NegativeTransfer)):
        if sig.a1 == sig.a2:
            raise InvalidSignature(f"transfer from {sig.a1} to itself")
        _checked_quantity(sig.e)
    elif isinstance(sig, (Observation, Construct, Destroy)):
        _checked_quantity(sig.e)
    elif not isinstance(sig, Get):
        raise InvalidSignature(f"not a verb signature: {sig!r}")


def lower(sig: VerbSignature) -> Cmd:
    """Transduce a verb signature into A-IMP per the signature semantics table."""
    validate(sig)
    if isinstance(sig, Observation):
        return Set(sig.a, sig.e)
    if isinstance(sig, Construct):
        return Set(sig.a, Plus(AddrRef(sig.a), sig.e))
    if isinstance(sig, Destroy):
        return Set(sig.a, Minus(AddrRef(sig.a), sig.e))
    if isinstance(sig, PositiveTransfer):
        return Seq(lower(Construct(sig.a1, sig.e)), lower(Destroy(sig.a2, sig.e)))
    if isinstance(sig, NegativeTransfer):
        return Seq(lower(Destroy(sig.a1, sig.e)), lower(Construct(sig.a2, sig.e)))
    return Print(AddrRef(sig.a))


def assigned_addresses(sig: VerbSignature) -> Tuple[Address, ...]:
    if isinstance(sig, (Observation, Construct, Destroy)):
        return (sig.a,)
    if isinstance(sig, (PositiveTransfer, NegativeTransfer)):
        return (sig.a1, sig.a2)
    return ()


def read_addresses(sig: VerbSignature) -> Tuple[Address, ...]:
    """Addresses whose current value the lowered command reads."""
    if isinstance(sig, Observation):
        return ()
    if isinstance(sig, (Construct, Destroy, Get)):
        return (sig.a,)
    return (sig.a1, sig.a2)


def signature_to_json(sig: VerbSignature) -> dict:
    data = {"signature": SIGNATURE_NAMES[type(sig)]}
    if isinstance(sig, (PositiveTransfer, NegativeTransfer)):
        data["a1"] = str(sig.a1)
        data["a2"] = str(sig.a2)
    else:
        data["addr"] = str(sig.a)
    if not isinstance(sig, Get):
        data["expr"] = expr_to_json(sig.e)
    return data
