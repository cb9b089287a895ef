"""Boneh-Boyen short signatures, used as membership tags."""

from __future__ import annotations

import random
from dataclasses import dataclass

from elaunira.eticket.exceptions import InvalidMessage
from elaunira.eticket.groups import GElem


@dataclass(frozen=True)
class BBKeyPair:
    """Key ``sk`` with ``pk = g2^sk``. Signatures live on ``g1``."""

    sk: int
    pk: GElem
    g1: GElem
    g2: GElem

    @classmethod
    def from_secret(cls, sk: int, g1: GElem, g2: GElem) -> BBKeyPair:
        return cls(sk=sk % g1.group.order, pk=g2**sk, g1=g1, g2=g2)

    @classmethod
    def generate(cls, g1: GElem, g2: GElem, rng: random.Random) -> BBKeyPair:
        return cls.from_secret(g1.group.random_scalar(rng), g1, g2)


def bb_sign(key: BBKeyPair, m: int) -> GElem:
    """Return ``g1^(1/(sk+m))``."""
    order = key.g1.group.order
    denominator = (key.sk + m) % order
    if denominator == 0:
        raise InvalidMessage(f"message {m % order} is a pole of the signing key")
    return key.g1 ** key.g1.group.inverse(denominator)


def bb_verify(pk: GElem, m: int, sig: GElem, *, g1: GElem, g2: GElem) -> bool:
    """Check ``e(sig, pk * g2^m) == e(g1, g2)``."""
    if sig.is_identity():
        return False
    return sig.pair(pk * g2**m) == g1.pair(g2)
