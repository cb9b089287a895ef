"""Group configuration and the backend contract."""

from __future__ import annotations

import enum
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any

import gmpy2

from elaunira.eticket.exceptions import ConfigurationError

#: Smallest prime accepted by the exponent test backend.
MIN_TEST_PRIME = 101

#: 2^64 - 59, the largest 64-bit prime.
PRIME_64 = 18446744073709551557

CURVES = {512: "SS512", 1024: "SS1024"}


class BackendId(enum.StrEnum):
    PAIRING = "pairing"
    EXPONENT_TEST = "exponent-test"


class ElementKind(enum.IntEnum):
    """Tag byte of the canonical encoding."""

    G = 0x01
    GT = 0x02
    SCALAR = 0x03


@dataclass(frozen=True)
class GroupConfig:
    """Which backend to build and with which parameters.

    The pairing backend works over the supersingular curve y^2 = x^3 + x,
    named by its field size. The exponent backend is a test double whose
    elements are discrete logs modulo ``test_prime``.
    """

    backend_id: BackendId = BackendId.PAIRING
    security_bits: int = 80
    subgroup_order_bits: int = 160
    field_bits: int = 512
    test_prime: int | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "backend_id", BackendId(self.backend_id))
        if self.backend_id is BackendId.EXPONENT_TEST:
            if self.test_prime is None:
                raise ConfigurationError("exponent-test backend requires test_prime")
            if self.test_prime < MIN_TEST_PRIME:
                raise ConfigurationError(f"test_prime must be >= {MIN_TEST_PRIME}, got {self.test_prime}")
            if not gmpy2.is_prime(self.test_prime):
                raise ConfigurationError(f"test_prime {self.test_prime} is not prime")
        elif self.field_bits not in CURVES:
            raise ConfigurationError(
                f"field_bits must be one of {sorted(CURVES)}, got {self.field_bits}"
            )

    @property
    def curve(self) -> str:
        return CURVES.get(self.field_bits, "")

    @classmethod
    def exponent(cls, prime: int = PRIME_64) -> GroupConfig:
        return cls(backend_id=BackendId.EXPONENT_TEST, test_prime=prime)


class Backend(ABC):
    """Raw operations of a symmetric bilinear group ``e: G x G -> GT``.

    Values handled here are backend-native. Exponents are plain integers
    already reduced modulo :attr:`order`.
    """

    name: str
    order: int

    @abstractmethod
    def identity(self, kind: ElementKind) -> Any: ...

    @abstractmethod
    def mul(self, kind: ElementKind, a: Any, b: Any) -> Any: ...

    @abstractmethod
    def inv(self, kind: ElementKind, a: Any) -> Any: ...

    @abstractmethod
    def pow(self, kind: ElementKind, a: Any, k: int) -> Any: ...

    @abstractmethod
    def pair(self, a: Any, b: Any) -> Any: ...

    @abstractmethod
    def hash_to_g(self, data: bytes) -> Any: ...

    @abstractmethod
    def is_identity(self, kind: ElementKind, a: Any) -> bool: ...

    @abstractmethod
    def to_bytes(self, kind: ElementKind, a: Any) -> bytes: ...

    @abstractmethod
    def from_bytes(self, kind: ElementKind, payload: bytes) -> Any:
        """Decode a payload, raising ``DecodeError`` when it is not canonical."""
