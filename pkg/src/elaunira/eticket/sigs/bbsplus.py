"""BBS+ block signatures for credentials and tickets."""

from __future__ import annotations

import logging
import random
from collections.abc import Sequence
from dataclasses import dataclass

from elaunira.eticket.exceptions import InvalidMessage, SigningError
from elaunira.eticket.groups import GElem

logger = logging.getLogger(__name__)

MAX_RESAMPLE = 16


@dataclass(frozen=True)
class BBSPlusPublicKey:
    """Public half of a BBS+ key.

    ``generators`` is ``(h, g0, g1, g2, ..., g_{n+1})``: ``h`` carries the
    key, ``g0`` is the constant base, ``g1`` blinds with ``s`` and the rest
    take one message each.
    """

    pk: GElem
    generators: tuple[GElem, ...]

    def __post_init__(self) -> None:
        if len(self.generators) < 3:
            raise ValueError("BBS+ needs at least h, g0 and the blinding base")

    @property
    def h(self) -> GElem:
        return self.generators[0]

    @property
    def message_bases(self) -> tuple[GElem, ...]:
        return self.generators[3:]

    def block(self, messages: Sequence[int], s: int, commitment: GElem | None = None) -> GElem:
        """``g0 * g1^s * prod(g_{i+1}^{m_i}) * commitment``."""
        if len(messages) != len(self.message_bases):
            raise ValueError(
                f"expected {len(self.message_bases)} messages, got {len(messages)}"
            )
        acc = self.generators[1] * self.generators[2] ** s
        for base, m in zip(self.message_bases, messages, strict=True):
            acc = acc * base**m
        if commitment is not None:
            acc = acc * commitment
        return acc


@dataclass(frozen=True)
class BBSPlusKeyPair:
    sk: int
    public: BBSPlusPublicKey

    @property
    def pk(self) -> GElem:
        return self.public.pk

    @classmethod
    def from_secret(cls, sk: int, generators: Sequence[GElem]) -> BBSPlusKeyPair:
        generators = tuple(generators)
        return cls(sk=sk, public=BBSPlusPublicKey(pk=generators[0] ** sk, generators=generators))

    @classmethod
    def generate(cls, generators: Sequence[GElem], rng: random.Random) -> BBSPlusKeyPair:
        return cls.from_secret(generators[0].group.random_scalar(rng), generators)


@dataclass(frozen=True)
class BBSPlusSig:
    w: int
    s: int
    sigma: GElem


def bbsplus_sign(
    key: BBSPlusKeyPair,
    messages: Sequence[int],
    rng: random.Random,
    *,
    commitment: GElem | None = None,
    w: int | None = None,
    s: int | None = None,
) -> BBSPlusSig:
    """Sign a message block, optionally folding in a signer-unknown ``commitment``.

    Fresh ``w`` and ``s`` are drawn unless given. A drawn ``w`` that hits
    ``sk + w = 0`` is resampled.
    """
    group = key.pk.group
    order = group.order
    if s is None:
        s = group.random_scalar(rng)
    if w is not None:
        if (key.sk + w) % order == 0:
            raise InvalidMessage("w is a pole of the signing key")
    else:
        for _ in range(MAX_RESAMPLE):
            w = group.random_scalar(rng)
            if (key.sk + w) % order:
                break
            logger.debug("Resampling BBS+ exponent after a pole collision")
        else:
            raise SigningError(f"no usable w after {MAX_RESAMPLE} attempts")
    base = key.public.block(messages, s, commitment)
    sigma = base ** group.inverse(key.sk + w)
    return BBSPlusSig(w=w % order, s=s % order, sigma=sigma)


def bbsplus_verify(
    public: BBSPlusPublicKey,
    messages: Sequence[int],
    sig: BBSPlusSig,
    *,
    commitment: GElem | None = None,
) -> bool:
    """Check ``e(sigma, pk * h^w) == e(block, h)``."""
    if len(messages) != len(public.message_bases) or sig.sigma.is_identity():
        return False
    base = public.block(messages, sig.s, commitment)
    return sig.sigma.pair(public.pk * public.h**sig.w) == base.pair(public.h)
