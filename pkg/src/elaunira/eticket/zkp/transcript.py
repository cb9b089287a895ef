"""Fiat-Shamir transcript absorbing canonical encodings."""

from __future__ import annotations

import struct

from elaunira.eticket.groups import GElem, Group, GTElem

Absorbable = GElem | GTElem | int | str | bytes

_LENGTH = struct.Struct(">I")


def encode_text(value: str | bytes) -> bytes:
    """Length-prefixed UTF-8, so adjacent strings cannot run together."""
    data = value.encode() if isinstance(value, str) else value
    return _LENGTH.pack(len(data)) + data


class Transcript:
    """Collects the operands of one challenge hash in order.

    Group elements and scalars enter as their canonical encodings, strings
    and raw bytes as length-prefixed byte strings.
    """

    def __init__(self, group: Group) -> None:
        self.group = group
        self._parts: list[bytes] = []

    def absorb(self, *values: Absorbable) -> Transcript:
        for value in values:
            if isinstance(value, GElem | GTElem):
                self._parts.append(value.encode())
            elif isinstance(value, int):
                self._parts.append(self.group.encode(value % self.group.order))
            else:
                self._parts.append(encode_text(value))
        return self

    def data(self) -> bytes:
        return b"".join(self._parts)

    def challenge(self) -> int:
        return self.group.hash_to_scalar(self.data())


def challenge(group: Group, *values: Absorbable) -> int:
    return Transcript(group).absorb(*values).challenge()
