"""Charm-backed Type-I pairing over a supersingular curve."""

from __future__ import annotations

import logging
from typing import Any

from elaunira.eticket.exceptions import BackendUnavailable, DecodeError
from elaunira.eticket.groups.base import Backend, ElementKind

logger = logging.getLogger(__name__)

# Charm prefixes serialized elements with their type index.
_SERIAL_PREFIX = {ElementKind.G: b"1:", ElementKind.GT: b"3:"}


def charm_available() -> bool:
    try:
        import charm.toolbox.pairinggroup  # noqa: F401
    except ImportError:
        return False
    return True


class PairingBackend(Backend):
    """Symmetric pairing from charm's PBC bindings.

    Charm's own random sampling is never used; every exponent comes from the
    caller's rng so traces stay reproducible.
    """

    name = "pairing"

    def __init__(self, curve: str = "SS512") -> None:
        try:
            from charm.toolbox.pairinggroup import G1, GT, ZR, PairingGroup, pair
        except ImportError as e:
            raise BackendUnavailable(
                "pairing backend needs charm-crypto (pip install 'elaunira-eticket[pairing]')"
            ) from e

        self._group = PairingGroup(curve)
        self._types = {ElementKind.G: G1, ElementKind.GT: GT}
        self._zr = ZR
        self._pair = pair
        self.curve = curve
        self.order = int(self._group.order())
        base = self._group.hash(b"elaunira.eticket/identity", G1)
        self._identity = {
            ElementKind.G: base ** self._exp(0),
            ElementKind.GT: pair(base, base) ** self._exp(0),
        }
        logger.debug("Loaded %s with a %d-bit subgroup order", curve, self.order.bit_length())

    def _exp(self, k: int) -> Any:
        return self._group.init(self._zr, k % self.order)

    def identity(self, kind: ElementKind) -> Any:
        return self._identity[kind]

    def mul(self, kind: ElementKind, a: Any, b: Any) -> Any:
        return a * b

    def inv(self, kind: ElementKind, a: Any) -> Any:
        return a ** self._exp(-1)

    def pow(self, kind: ElementKind, a: Any, k: int) -> Any:
        return a ** self._exp(k)

    def pair(self, a: Any, b: Any) -> Any:
        return self._pair(a, b)

    def hash_to_g(self, data: bytes) -> Any:
        counter = 0
        while True:
            suffix = counter.to_bytes(4, "big") if counter else b""
            elem = self._group.hash(data + suffix, self._types[ElementKind.G])
            if not self.is_identity(ElementKind.G, elem):
                return elem
            counter += 1

    def is_identity(self, kind: ElementKind, a: Any) -> bool:
        return self.to_bytes(kind, a) == self.to_bytes(kind, self._identity[kind])

    def to_bytes(self, kind: ElementKind, a: Any) -> bytes:
        return self._group.serialize(a)

    def from_bytes(self, kind: ElementKind, payload: bytes) -> Any:
        if not payload.startswith(_SERIAL_PREFIX[kind]):
            raise DecodeError(f"payload is not a serialized {kind.name} element")
        try:
            elem = self._group.deserialize(payload)
        except Exception as e:
            raise DecodeError(f"cannot deserialize {kind.name} element: {e}") from e
        if elem is None or self._group.serialize(elem) != payload:
            raise DecodeError(f"non-canonical {kind.name} encoding")
        return elem
