import hypothesis
import hypothesis.strategies as s
import pytest

from aimp.errors import InvalidSignature
from aimp.language import AddrRef, BoolLit, Minus, NumLit, Plus, Print, Seq, Set, Store, exec_cmd
from aimp.signatures import (
    Construct, Destroy, Get, NegativeTransfer, Observation, PositiveTransfer,
    assigned_addresses, lower, read_addresses, signature_to_json,
)

s_amounts = s.integers(min_value=-10**6, max_value=10**6).map(float)


def test_lowering_table():
    assert lower(Observation("a_p", NumLit(3))) == Set("a_p", NumLit(3))
    assert lower(Construct("x", NumLit(2))) == Set("x", Plus(AddrRef("x"), NumLit(2)))
    assert lower(Destroy("a_p", NumLit(1))) == Set("a_p", Minus(AddrRef("a_p"), NumLit(1)))
    assert lower(PositiveTransfer("x", "y", NumLit(2))) == Seq(
        Set("x", Plus(AddrRef("x"), NumLit(2))),
        Set("y", Minus(AddrRef("y"), NumLit(2))),
    )
    assert lower(NegativeTransfer("x", "y", NumLit(2))) == Seq(
        Set("x", Minus(AddrRef("x"), NumLit(2))),
        Set("y", Plus(AddrRef("y"), NumLit(2))),
    )
    assert lower(Get("a_p")) == Print(AddrRef("a_p"))


def test_transfer_to_itself_is_invalid():
    with pytest.raises(InvalidSignature):
        lower(PositiveTransfer("x", "x", NumLit(1)))
    with pytest.raises(InvalidSignature):
        lower(NegativeTransfer("x", "x", NumLit(1)))


def test_boolean_quantity_is_invalid():
    with pytest.raises(InvalidSignature):
        lower(Observation("x", BoolLit(True)))
    with pytest.raises(InvalidSignature):
        lower(Construct("x", Plus(NumLit(1), BoolLit(False))))


def test_signature_addresses_are_validated():
    with pytest.raises(ValueError):
        Observation("Pooja_apple", NumLit(3))


def test_read_and_assigned_addresses():
    transfer = NegativeTransfer("pooja_apple", "john_apple", NumLit(2))
    assert assigned_addresses(transfer) == ("pooja_apple", "john_apple")
    assert read_addresses(transfer) == ("pooja_apple", "john_apple")
    assert read_addresses(Observation("x", NumLit(1))) == ()
    assert assigned_addresses(Get("x")) == ()
    assert read_addresses(Get("x")) == ("x",)


def test_signature_to_json():
    assert signature_to_json(Get("a_p")) == {"signature": "get", "addr": "a_p"}
    assert signature_to_json(PositiveTransfer("x", "y", NumLit(2))) == {
        "signature": "positive_transfer", "a1": "x", "a2": "y",
        "expr": {"expr": "num", "value": 2.0},
    }


s_large = s.integers(min_value=-2**40, max_value=2**40).map(float)
ADDRESSES = ["x", "y", "pooja_apple", "john_apple"]
s_stores = s.dictionaries(s.sampled_from(ADDRESSES), s_large, max_size=len(ADDRESSES))


@hypothesis.given(s_stores, s.permutations(ADDRESSES), s_large, s.booleans())
@hypothesis.settings(max_examples=1000)
def test_transfers_conserve_the_total(bound, order, amount, positive):
    giver, taker = order[:2]
    transfer = PositiveTransfer if positive else NegativeTransfer
    store = Store(bound)
    after = exec_cmd(store, lower(transfer(giver, taker, NumLit(amount)))).store
    assert sum(after.values()) == sum(store.values())


@hypothesis.given(s_amounts, s_amounts)
def test_destroy_undoes_construct(x, amount):
    store = Store({"x": x})
    cmd = Seq(lower(Construct("x", NumLit(amount))), lower(Destroy("x", NumLit(amount))))
    assert exec_cmd(store, cmd).store == store


@hypothesis.given(s_amounts, s_amounts, s_amounts)
def test_positive_transfer_mirrors_negative_transfer(x, y, amount):
    store = Store({"x": x, "y": y})
    positive = exec_cmd(store, lower(PositiveTransfer("x", "y", NumLit(amount))))
    negative = exec_cmd(store, lower(NegativeTransfer("y", "x", NumLit(amount))))
    assert positive.store == negative.store
