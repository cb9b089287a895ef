"""Persistent records: published parameters, actor state and the verifier log.

A record is a version byte, a kind byte and a body. The verifier log is a
file of length-prefixed ``VerifierEntry`` records appended one per accepted
validation.
"""

from __future__ import annotations

import dataclasses
import enum
import logging
import os
from pathlib import Path
from typing import Any

from elaunira.eticket.exceptions import (
    ConfigurationError,
    CorruptRecord,
    DecodeError,
    ParseError,
    PolicyError,
    VersionMismatch,
)
from elaunira.eticket.groups import BackendId, ElementKind, Group, GroupConfig, load_group
from elaunira.eticket.policy import PolicyUniverse, RangePolicy, SetPolicy
from elaunira.eticket.scheme.models import (
    CAState,
    SellerState,
    Ticket,
    UserState,
    VerifierEntry,
    VerifierTable,
)
from elaunira.eticket.scheme.params import Generators, Params
from elaunira.eticket.wire.codec import U32, WIRE_VERSION, Reader, Writer, decode_struct, encode_struct

logger = logging.getLogger(__name__)


class RecordKind(enum.IntEnum):
    PARAMS = 0x40
    CA_STATE = 0x41
    SELLER_STATE = 0x42
    USER_STATE = 0x43
    TICKET = 0x44
    VTABLE_ENTRY = 0x45


RECORD_CLASSES: dict[RecordKind, type] = {
    RecordKind.CA_STATE: CAState,
    RecordKind.SELLER_STATE: SellerState,
    RecordKind.USER_STATE: UserState,
    RecordKind.TICKET: Ticket,
    RecordKind.VTABLE_ENTRY: VerifierEntry,
}


def _header(data: bytes, kind: RecordKind) -> bytes:
    if len(data) < 2:
        raise ParseError("truncated record header", offset=0, field="record")
    if data[0] != WIRE_VERSION:
        raise VersionMismatch(f"record version {data[0]} is not {WIRE_VERSION}")
    if data[1] != kind:
        raise ParseError(f"expected {kind.name} record, got kind 0x{data[1]:02x}", offset=1, field="kind")
    return data[2:]


def encode_record(value: Any, group: Group) -> bytes:
    kind = next(k for k, cls in RECORD_CLASSES.items() if isinstance(value, cls))
    return bytes([WIRE_VERSION, kind]) + encode_struct(value, group)


def decode_record(cls: type, data: bytes, group: Group) -> Any:
    kind = next(k for k, c in RECORD_CLASSES.items() if c is cls)
    return decode_struct(cls, _header(data, kind), group, base_offset=2)


# Params ------------------------------------------------------------------


def encode_params(params: Params) -> bytes:
    config = params.group.config
    universe = params.universe
    gens = params.gens
    w = Writer(params.group)
    w.text(config.backend_id.value)
    w.integer(config.security_bits).integer(config.subgroup_order_bits).integer(config.field_bits)
    w.integer(config.test_prime or 0)
    w.integer(universe.base).integer(universe.width)
    w.items([Writer().text(r.name).integer(r.lower).integer(r.upper).getvalue() for r in universe.ranges])
    w.items(
        [Writer().text(s.name).items([i.encode() for i in s.items]).getvalue() for s in universe.sets]
    )
    for name in Generators.NAMED:
        w.element(getattr(gens, name))
    w.items([e.encode() for e in gens.ghat])
    w.items([e.encode() for e in gens.eta_sets])
    w.element(params.g_tilde).element(params.h_tilde)
    w.items([e.encode() for e in params.range_tags])
    w.items([e.encode() for e in params.power_tags])
    w.items([e.encode() for e in params.set_keys])
    w.items(
        [
            Writer().items([Writer().text(item).element(tag).getvalue() for item, tag in tags.items()]).getvalue()
            for tags in params.item_tags
        ]
    )
    w.items([Writer().text(sid).element(key).getvalue() for sid, key in sorted(params.sellers.items())])
    return bytes([WIRE_VERSION, RecordKind.PARAMS]) + w.getvalue()


def _elements(readers: list[Reader], field: str) -> tuple:
    out = []
    for i, item in enumerate(readers):
        try:
            out.append(item.group.decode(item.data, expect=ElementKind.G))
        except DecodeError as e:
            raise item.fail(str(e), f"{field}[{i}]") from e
    return tuple(out)


def decode_params(data: bytes) -> Params:
    r = Reader(_header(data, RecordKind.PARAMS), base_offset=2)
    try:
        config = GroupConfig(
            backend_id=BackendId(r.text("backend")),
            security_bits=r.integer("security_bits"),
            subgroup_order_bits=r.integer("subgroup_order_bits"),
            field_bits=r.integer("field_bits"),
            test_prime=r.integer("test_prime") or None,
        )
    except (ValueError, ConfigurationError) as e:
        raise r.fail(str(e), "config") from e
    group = load_group(config)
    r.group = group
    base, width = r.integer("base"), r.integer("width")
    ranges = []
    sets = []
    try:
        for item in r.items("ranges"):
            ranges.append(RangePolicy(item.text("name"), item.integer("lower"), item.integer("upper")))
            item.expect_end("ranges")
        for item in r.items("sets"):
            name = item.text("name")
            sets.append(SetPolicy(name, tuple(i.data.decode() for i in item.items("items"))))
            item.expect_end("sets")
        universe = PolicyUniverse(ranges=tuple(ranges), sets=tuple(sets), base=base, width=width)
    except (PolicyError, UnicodeDecodeError) as e:
        raise r.fail(f"invalid policy universe: {e}", "universe") from e
    named = {name: r.element(name) for name in Generators.NAMED}
    gens = Generators(
        **named,
        ghat=_elements(r.items("ghat"), "ghat"),
        eta_sets=_elements(r.items("eta_sets"), "eta_sets"),
    )
    g_tilde, h_tilde = r.element("g_tilde"), r.element("h_tilde")
    range_tags = _elements(r.items("range_tags"), "range_tags")
    power_tags = _elements(r.items("power_tags"), "power_tags")
    set_keys = _elements(r.items("set_keys"), "set_keys")
    item_tags = []
    for per_set in r.items("item_tags"):
        tags = {}
        for entry in per_set.items("item_tags"):
            item = entry.text("item")
            tags[item] = entry.element("tag")
            entry.expect_end("item_tags")
        per_set.expect_end("item_tags")
        item_tags.append(tags)
    sellers = {}
    for entry in r.items("sellers"):
        seller_id = entry.text("seller_id")
        sellers[seller_id] = entry.element("public_key")
        entry.expect_end("sellers")
    r.expect_end("params")
    return Params(
        group=group,
        universe=universe,
        gens=gens,
        g_tilde=g_tilde,
        h_tilde=h_tilde,
        range_tags=range_tags,
        power_tags=power_tags,
        set_keys=set_keys,
        item_tags=tuple(item_tags),
        sellers=sellers,
    )


def save_params(params: Params, path: str | Path) -> None:
    Path(path).write_bytes(encode_params(params))


def load_params(path: str | Path) -> Params:
    return decode_params(Path(path).read_bytes())


# Verifier log ------------------------------------------------------------


#: Longest length prefix a verifier log frame may carry.
MAX_LOG_RECORD = 1 << 16


def _frame(entry: VerifierEntry, group: Group) -> bytes:
    record = encode_record(entry, group)
    return U32.pack(len(record)) + record


def _holds_record(data: bytes) -> bool:
    """True when ``data`` starts with every field frame of one verifier entry."""
    if len(data) < 2:
        return False
    r = Reader(data[2:])
    try:
        for f in dataclasses.fields(VerifierEntry):
            r.raw(f.name)
    except ParseError:
        return False
    return True


def persist_table(table: VerifierTable, path: str | Path, group: Group) -> None:
    """Write the whole table as a fresh log."""
    tmp = Path(f"{path}.tmp")
    tmp.write_bytes(b"".join(_frame(entry, group) for entry in table))
    os.replace(tmp, path)


def append_entry(path: str | Path, entry: VerifierEntry, group: Group) -> None:
    with open(path, "ab") as f:
        f.write(_frame(entry, group))
        f.flush()
        os.fsync(f.fileno())


def load_table(path: str | Path, group: Group, *, repair: bool = True) -> VerifierTable:
    """Rebuild a table from its log.

    A missing file is an empty table. A record cut short at the end of the
    file by an interrupted append is dropped (and truncated away when
    ``repair`` is set). A length prefix that is out of bounds or overruns a
    complete record, and any unreadable record, raise ``CorruptRecord`` and
    leave the file untouched.
    """
    path = Path(path)
    if not path.exists():
        return VerifierTable()
    data = path.read_bytes()
    entries = []
    offset = 0
    while offset < len(data):
        remaining = len(data) - offset
        if remaining < U32.size:
            break
        (length,) = U32.unpack_from(data, offset)
        if length > MAX_LOG_RECORD:
            raise CorruptRecord(f"{path}: record at offset {offset} claims {length} bytes")
        if remaining - U32.size < length:
            if _holds_record(data[offset + U32.size :]):
                raise CorruptRecord(f"{path}: length prefix at offset {offset} overruns its record")
            break
        record = data[offset + U32.size : offset + U32.size + length]
        try:
            entries.append(decode_record(VerifierEntry, record, group))
        except DecodeError as e:
            raise CorruptRecord(f"{path}: record at offset {offset} is unreadable: {e}") from e
        offset += U32.size + length
    if offset < len(data):
        logger.warning(
            "Dropping %d trailing bytes of a partial record in %s", len(data) - offset, path
        )
        if repair:
            with open(path, "r+b") as f:
                f.truncate(offset)
    return VerifierTable(entries)
