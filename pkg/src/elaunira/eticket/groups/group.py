"""Group facade and element wrappers used throughout the scheme."""

from __future__ import annotations

import hashlib
import logging
import random
import struct
from typing import TYPE_CHECKING, Any, ClassVar

import gmpy2

from elaunira.eticket.exceptions import DecodeError
from elaunira.eticket.groups.base import BackendId, ElementKind, GroupConfig

if TYPE_CHECKING:
    from elaunira.eticket.groups.base import Backend

logger = logging.getLogger(__name__)

HEADER = struct.Struct(">BI")
GENERATOR_DOMAIN = b"elaunira.eticket/generator/"


class _Element:
    kind: ClassVar[ElementKind]
    __slots__ = ("group", "raw", "_encoded")

    def __init__(self, group: Group, raw: Any) -> None:
        self.group = group
        self.raw = raw
        self._encoded: bytes | None = None

    def _wrap(self, raw: Any):
        return type(self)(self.group, raw)

    def __mul__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return self._wrap(self.group.backend.mul(self.kind, self.raw, other.raw))

    def __truediv__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        backend = self.group.backend
        return self._wrap(backend.mul(self.kind, self.raw, backend.inv(self.kind, other.raw)))

    def __pow__(self, k: int):
        return self._wrap(self.group.backend.pow(self.kind, self.raw, k % self.group.order))

    def __invert__(self):
        return self._wrap(self.group.backend.inv(self.kind, self.raw))

    def __eq__(self, other: object) -> bool:
        if type(other) is not type(self):
            return NotImplemented
        return self.encode() == other.encode()

    def __hash__(self) -> int:
        return hash(self.encode())

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.encode().hex()[:24]}...)"

    def is_identity(self) -> bool:
        return self.group.backend.is_identity(self.kind, self.raw)

    def encode(self) -> bytes:
        if self._encoded is None:
            self._encoded = self.group.encode(self)
        return self._encoded


class GElem(_Element):
    """Element of the source group G."""

    kind = ElementKind.G
    __slots__ = ()

    def pair(self, other: GElem) -> GTElem:
        return self.group.pair(self, other)


class GTElem(_Element):
    """Element of the target group GT."""

    kind = ElementKind.GT
    __slots__ = ()


class Group:
    """A symmetric bilinear group of prime order with canonical encodings.

    :param config: Backend selection and parameters.
    """

    def __init__(self, config: GroupConfig, backend: Backend) -> None:
        self.config = config
        self.backend = backend
        self.order = backend.order
        self.scalar_width = (self.order.bit_length() + 7) // 8

    def __repr__(self) -> str:
        return f"Group({self.backend.name}, {self.order.bit_length()}-bit order)"

    def pair(self, a: GElem, b: GElem) -> GTElem:
        return GTElem(self, self.backend.pair(a.raw, b.raw))

    def identity(self) -> GElem:
        return GElem(self, self.backend.identity(ElementKind.G))

    def gt_identity(self) -> GTElem:
        return GTElem(self, self.backend.identity(ElementKind.GT))

    def element(self, raw: Any) -> GElem:
        """Wrap a backend value. On the exponent backend ``raw`` is the discrete log."""
        if self.config.backend_id is BackendId.EXPONENT_TEST:
            raw %= self.order
        return GElem(self, raw)

    def gt_element(self, raw: Any) -> GTElem:
        if self.config.backend_id is BackendId.EXPONENT_TEST:
            raw %= self.order
        return GTElem(self, raw)

    def hash_to_scalar(self, data: bytes) -> int:
        """SHA-256 of ``data`` read big-endian and reduced modulo the order."""
        return int.from_bytes(hashlib.sha256(data).digest(), "big") % self.order

    def hash_to_group(self, data: bytes) -> GElem:
        return GElem(self, self.backend.hash_to_g(data))

    def generator(self, label: str) -> GElem:
        """Deterministic generator derived from a public label."""
        return self.hash_to_group(GENERATOR_DOMAIN + label.encode())

    def random_scalar(self, rng: random.Random) -> int:
        return rng.randrange(1, self.order)

    def random_element(self, rng: random.Random) -> GElem:
        return self.generator("random") ** self.random_scalar(rng)

    def inverse(self, k: int) -> int:
        k %= self.order
        if not k:
            raise ZeroDivisionError("zero has no inverse modulo the group order")
        return int(gmpy2.invert(k, self.order))

    def encode(self, value: GElem | GTElem | int) -> bytes:
        """Canonical encoding: tag byte, 4-byte big-endian length, payload."""
        if isinstance(value, _Element):
            payload = self.backend.to_bytes(value.kind, value.raw)
            kind = value.kind
        else:
            if not 0 <= value < self.order:
                raise ValueError("scalar is not reduced modulo the group order")
            payload = value.to_bytes(self.scalar_width, "big")
            kind = ElementKind.SCALAR
        return HEADER.pack(kind, len(payload)) + payload

    def decode(self, data: bytes, expect: ElementKind | None = None) -> GElem | GTElem | int:
        if len(data) < HEADER.size:
            raise DecodeError("truncated element header")
        tag, length = HEADER.unpack_from(data)
        try:
            kind = ElementKind(tag)
        except ValueError:
            raise DecodeError(f"unknown element tag 0x{tag:02x}") from None
        if expect is not None and kind is not expect:
            raise DecodeError(f"expected {expect.name}, got {kind.name}")
        payload = data[HEADER.size :]
        if len(payload) != length:
            raise DecodeError(f"declared length {length} but {len(payload)} payload bytes")
        if kind is ElementKind.SCALAR:
            if length != self.scalar_width:
                raise DecodeError(f"scalar payload must be {self.scalar_width} bytes")
            value = int.from_bytes(payload, "big")
            if value >= self.order:
                raise DecodeError("scalar is not reduced modulo the group order")
            return value
        raw = self.backend.from_bytes(kind, payload)
        return (GElem if kind is ElementKind.G else GTElem)(self, raw)


def load_group(config: GroupConfig) -> Group:
    """Build the group described by ``config``."""
    if config.backend_id is BackendId.EXPONENT_TEST:
        from elaunira.eticket.groups.exponent import ExponentBackend

        return Group(config, ExponentBackend(config.test_prime))

    from elaunira.eticket.groups.pairing import PairingBackend

    backend = PairingBackend(config.curve)
    if backend.order.bit_length() != config.subgroup_order_bits:
        logger.warning(
            "%s has a %d-bit subgroup order, configured %d",
            config.curve,
            backend.order.bit_length(),
            config.subgroup_order_bits,
        )
    return Group(config, backend)
