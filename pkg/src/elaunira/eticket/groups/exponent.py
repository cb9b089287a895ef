"""Exponent test backend.

Every element of G and GT is stored as its discrete log with respect to a
nominal generator. The group law becomes addition modulo p, exponentiation
becomes multiplication and the pairing multiplies the two logs. All the
scheme's verification equations hold unchanged, and tests can recompute
them in integers.
"""

from __future__ import annotations

import hashlib

from elaunira.eticket.exceptions import DecodeError
from elaunira.eticket.groups.base import Backend, ElementKind


class ExponentBackend(Backend):
    name = "exponent-test"

    def __init__(self, prime: int) -> None:
        self.order = prime
        self.width = (prime.bit_length() + 7) // 8

    def identity(self, kind: ElementKind) -> int:
        return 0

    def mul(self, kind: ElementKind, a: int, b: int) -> int:
        return (a + b) % self.order

    def inv(self, kind: ElementKind, a: int) -> int:
        return -a % self.order

    def pow(self, kind: ElementKind, a: int, k: int) -> int:
        return a * k % self.order

    def pair(self, a: int, b: int) -> int:
        return a * b % self.order

    def hash_to_g(self, data: bytes) -> int:
        counter = 0
        while True:
            suffix = counter.to_bytes(4, "big") if counter else b""
            value = int.from_bytes(hashlib.sha256(data + suffix).digest(), "big") % self.order
            if value:
                return value
            counter += 1

    def is_identity(self, kind: ElementKind, a: int) -> bool:
        return a == 0

    def to_bytes(self, kind: ElementKind, a: int) -> bytes:
        return a.to_bytes(self.width, "big")

    def from_bytes(self, kind: ElementKind, payload: bytes) -> int:
        if len(payload) != self.width:
            raise DecodeError(f"expected {self.width} payload bytes, got {len(payload)}")
        value = int.from_bytes(payload, "big")
        if value >= self.order:
            raise DecodeError("element is not reduced modulo the group order")
        return value
