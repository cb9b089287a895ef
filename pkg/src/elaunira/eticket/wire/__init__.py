"""Serialization of protocol messages and persistent records."""

from elaunira.eticket.wire.codec import WIRE_VERSION, Reader, Writer, decode_struct, encode_struct
from elaunira.eticket.wire.messages import MESSAGE_CLASSES, Message, MessageType, parse, serialize
from elaunira.eticket.wire.tables import (
    RecordKind,
    append_entry,
    decode_params,
    decode_record,
    encode_params,
    encode_record,
    load_params,
    load_table,
    persist_table,
    save_params,
)

__all__ = [
    "MESSAGE_CLASSES",
    "WIRE_VERSION",
    "Message",
    "MessageType",
    "Reader",
    "RecordKind",
    "Writer",
    "append_entry",
    "decode_params",
    "decode_record",
    "decode_struct",
    "encode_params",
    "encode_record",
    "encode_struct",
    "load_params",
    "load_table",
    "parse",
    "persist_table",
    "save_params",
    "serialize",
]
