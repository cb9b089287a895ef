"""Length-prefixed field codec shared by every message and record.

A body is a sequence of fields, each a 4-byte big-endian length followed by
its payload. Group elements and scalars use the canonical encoding,
strings are UTF-8, sequences carry a 4-byte count followed by framed items
and nested records are framed bodies. Dataclasses are encoded field by
field in declaration order.
"""

from __future__ import annotations

import dataclasses
import struct
import types
import typing
from functools import cache
from typing import Any, TypeVar

from elaunira.eticket.exceptions import DecodeError, ParseError
from elaunira.eticket.groups import ElementKind, GElem, Group, GTElem
from elaunira.eticket.policy import SatisfiedPolicies, UserAttributes

T = TypeVar("T")

U32 = struct.Struct(">I")

WIRE_VERSION = 1


class Writer:
    def __init__(self, group: Group | None = None) -> None:
        self.group = group
        self._parts: list[bytes] = []

    def raw(self, payload: bytes) -> Writer:
        self._parts.append(U32.pack(len(payload)) + payload)
        return self

    def element(self, value: GElem | GTElem) -> Writer:
        return self.raw(value.encode())

    def scalar(self, value: int) -> Writer:
        group = self._need_group()
        return self.raw(group.encode(value % group.order))

    def integer(self, value: int) -> Writer:
        """Signed integer of any size, for attribute values and policy bounds."""
        return self.raw(str(value).encode())

    def text(self, value: str) -> Writer:
        return self.raw(value.encode())

    def flag(self, value: bool) -> Writer:
        return self.raw(b"\x01" if value else b"\x00")

    def items(self, values: list[bytes]) -> Writer:
        return self.raw(U32.pack(len(values)) + b"".join(U32.pack(len(v)) + v for v in values))

    def getvalue(self) -> bytes:
        return b"".join(self._parts)

    def _need_group(self) -> Group:
        if self.group is None:
            raise ValueError("writer needs a group to encode scalars")
        return self.group


class Reader:
    """Consumes framed fields, reporting the offset and field of any failure."""

    def __init__(self, data: bytes, group: Group | None = None, *, base_offset: int = 0) -> None:
        self.data = data
        self.group = group
        self.offset = 0
        self.base_offset = base_offset

    def fail(self, message: str, field: str) -> ParseError:
        return ParseError(message, offset=self.base_offset + self.offset, field=field)

    def raw(self, field: str) -> bytes:
        if len(self.data) - self.offset < U32.size:
            raise self.fail("truncated field length", field)
        (length,) = U32.unpack_from(self.data, self.offset)
        start = self.offset + U32.size
        if len(self.data) - start < length:
            raise self.fail(f"field needs {length} bytes, {len(self.data) - start} left", field)
        self.offset = start + length
        return self.data[start : self.offset]

    def sub(self, payload: bytes) -> Reader:
        return Reader(payload, self.group, base_offset=self.base_offset + self.offset - len(payload))

    def element(self, field: str, kind: ElementKind = ElementKind.G) -> Any:
        payload = self.raw(field)
        try:
            return self._need_group(field).decode(payload, expect=kind)
        except DecodeError as e:
            raise self.fail(str(e), field) from e

    def scalar(self, field: str) -> int:
        return self.element(field, ElementKind.SCALAR)

    def integer(self, field: str) -> int:
        payload = self.raw(field)
        try:
            text = payload.decode("ascii")
            value = int(text)
        except (UnicodeDecodeError, ValueError):
            raise self.fail("malformed integer", field) from None
        if str(value) != text:
            raise self.fail("non-canonical integer", field)
        return value

    def text(self, field: str) -> str:
        payload = self.raw(field)
        try:
            return payload.decode()
        except UnicodeDecodeError:
            raise self.fail("invalid UTF-8", field) from None

    def flag(self, field: str) -> bool:
        payload = self.raw(field)
        if payload not in (b"\x00", b"\x01"):
            raise self.fail("invalid boolean", field)
        return payload == b"\x01"

    def items(self, field: str) -> list[Reader]:
        payload = self.raw(field)
        inner = self.sub(payload)
        if len(payload) < U32.size:
            raise inner.fail("truncated item count", field)
        (count,) = U32.unpack_from(payload)
        inner.offset = U32.size
        readers = []
        for i in range(count):
            item = inner.raw(f"{field}[{i}]")
            readers.append(inner.sub(item))
        inner.expect_end(field)
        return readers

    def expect_end(self, field: str = "body") -> None:
        if self.offset != len(self.data):
            raise self.fail(f"{len(self.data) - self.offset} trailing bytes", field)

    def _need_group(self, field: str) -> Group:
        if self.group is None:
            raise self.fail("reader needs a group to decode elements", field)
        return self.group


# Dataclass codec ---------------------------------------------------------


@cache
def _hints(cls: type) -> dict[str, Any]:
    return typing.get_type_hints(cls)


def _write_value(w: Writer, hint: Any, value: Any) -> None:
    origin = typing.get_origin(hint)
    if origin in (typing.Union, types.UnionType):
        args = [a for a in typing.get_args(hint) if a is not type(None)]
        if value is None:
            w.raw(b"")
        else:
            inner = Writer(w.group)
            _write_value(inner, args[0], value)
            w.raw(b"\x01" + inner.getvalue())
    elif hint is GElem or hint is GTElem:
        w.element(value)
    elif hint is bool:
        w.flag(value)
    elif hint is int:
        w.scalar(value)
    elif hint is str:
        w.text(value)
    elif hint is SatisfiedPolicies:
        w.items([n.encode() for n in value.names])
    elif hint is UserAttributes:
        inner = Writer(w.group)
        inner.items([Writer().text(k).integer(v).getvalue() for k, v in sorted(value.range_values.items())])
        inner.items([Writer().text(k).text(v).getvalue() for k, v in sorted(value.set_items.items())])
        w.raw(inner.getvalue())
    elif origin is tuple:
        item_hint = typing.get_args(hint)[0]
        w.items([_encode_one(w.group, item_hint, v) for v in value])
    elif dataclasses.is_dataclass(hint):
        w.raw(encode_struct(value, w.group))
    else:
        raise TypeError(f"no wire encoding for {hint!r}")


def _encode_one(group: Group | None, hint: Any, value: Any) -> bytes:
    w = Writer(group)
    _write_value(w, hint, value)
    # Strip the outer frame: items() frames each entry itself.
    return w.getvalue()[U32.size :]


def _read_value(r: Reader, hint: Any, field: str) -> Any:
    origin = typing.get_origin(hint)
    if origin in (typing.Union, types.UnionType):
        args = [a for a in typing.get_args(hint) if a is not type(None)]
        payload = r.raw(field)
        if not payload:
            return None
        if payload[:1] != b"\x01":
            raise r.fail("invalid optional marker", field)
        inner = r.sub(payload[1:])
        value = _read_value(inner, args[0], field)
        inner.expect_end(field)
        return value
    if hint is GElem:
        return r.element(field, ElementKind.G)
    if hint is GTElem:
        return r.element(field, ElementKind.GT)
    if hint is bool:
        return r.flag(field)
    if hint is int:
        return r.scalar(field)
    if hint is str:
        return r.text(field)
    if hint is SatisfiedPolicies:
        try:
            names = [item.data.decode() for item in r.items(field)]
        except UnicodeDecodeError:
            raise r.fail("invalid UTF-8", field) from None
        policies = SatisfiedPolicies(tuple(names))
        if list(policies.names) != names:
            raise r.fail("policy names are not canonical", field)
        return policies
    if hint is UserAttributes:
        inner = r.sub(r.raw(field))
        ranges = {}
        for item in inner.items(f"{field}.ranges"):
            key = item.text(f"{field}.ranges.name")
            ranges[key] = item.integer(f"{field}.ranges.value")
            item.expect_end(field)
        sets = {}
        for item in inner.items(f"{field}.sets"):
            key = item.text(f"{field}.sets.name")
            sets[key] = item.text(f"{field}.sets.item")
            item.expect_end(field)
        inner.expect_end(field)
        return UserAttributes(range_values=ranges, set_items=sets)
    if origin is tuple:
        item_hint = typing.get_args(hint)[0]
        values = []
        for i, item in enumerate(r.items(field)):
            values.append(_read_frameless(item, item_hint, f"{field}[{i}]"))
        return tuple(values)
    if dataclasses.is_dataclass(hint):
        payload = r.raw(field)
        return _decode_fields(hint, r.sub(payload))
    raise TypeError(f"no wire decoding for {hint!r}")


def _read_frameless(item: Reader, hint: Any, field: str) -> Any:
    # Items are stored without their own frame; re-add one to reuse _read_value.
    framed = Reader(U32.pack(len(item.data)) + item.data, item.group, base_offset=item.base_offset - U32.size)
    value = _read_value(framed, hint, field)
    framed.expect_end(field)
    return value


def _decode_fields(cls: type[T], r: Reader) -> T:
    hints = _hints(cls)
    values = {}
    for f in dataclasses.fields(cls):
        if not f.init:
            continue
        values[f.name] = _read_value(r, hints[f.name], f.name)
    r.expect_end(cls.__name__)
    try:
        return cls(**values)
    except (ValueError, TypeError, DecodeError) as e:
        raise r.fail(f"invalid {cls.__name__}: {e}", cls.__name__) from e


def encode_struct(value: Any, group: Group | None) -> bytes:
    """Encode a dataclass instance as a body of framed fields."""
    w = Writer(group)
    hints = _hints(type(value))
    for f in dataclasses.fields(value):
        if f.init:
            _write_value(w, hints[f.name], getattr(value, f.name))
    return w.getvalue()


def decode_struct(cls: type[T], data: bytes, group: Group | None, *, base_offset: int = 0) -> T:
    return _decode_fields(cls, Reader(data, group, base_offset=base_offset))

