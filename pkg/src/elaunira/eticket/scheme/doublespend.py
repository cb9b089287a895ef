"""Double-spend detection over a verifier table and key recovery."""

from __future__ import annotations

import logging
from collections.abc import Iterable
from dataclasses import dataclass
from itertools import combinations

from elaunira.eticket.exceptions import DeanonymizationRefused, DegenerateNonces
from elaunira.eticket.groups import GElem
from elaunira.eticket.scheme.models import VerifierEntry, VerifierTable

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DoubleSpendHit:
    serial: GElem
    first: VerifierEntry
    second: VerifierEntry

    @property
    def same_verifier(self) -> bool:
        return self.first.verifier_id == self.second.verifier_id


def detect_double_spend(table: VerifierTable | Iterable[VerifierEntry]) -> list[DoubleSpendHit]:
    """All entry pairs sharing a serial commitment ``D`` with different tags ``E``.

    Pairs from different verifier ids are reported too, but only same-verifier
    pairs can be deanonymized.
    """
    if not isinstance(table, VerifierTable):
        table = VerifierTable(list(table))
    hits = []
    for serial in table.serials():
        for first, second in combinations(table.with_serial(serial), 2):
            if first.E != second.E:
                hits.append(DoubleSpendHit(serial=serial, first=first, second=second))
    if hits:
        logger.warning("Found %d double-spent ticket transcript pair(s)", len(hits))
    return hits


def recover_public_key(E: GElem, E_other: GElem, nonce: int, nonce_other: int) -> GElem:
    """``(E^r' / E'^r)^(1/(r'-r))``, the spender's ``Y_U``."""
    order = E.group.order
    if (nonce - nonce_other) % order == 0:
        raise DegenerateNonces("both transcripts use the same nonce")
    return (E**nonce_other / E_other**nonce) ** E.group.inverse(nonce_other - nonce)


def deanonymize(
    first: VerifierEntry | DoubleSpendHit,
    second: VerifierEntry | None = None,
    verifier_id: str | None = None,
) -> GElem:
    """Recover ``Y_U`` from two validations of one ticket at the same verifier id."""
    if isinstance(first, DoubleSpendHit):
        first, second = first.first, first.second
    if second is None:
        raise TypeError("deanonymize needs two entries")
    if first.D != second.D:
        raise DeanonymizationRefused("entries carry different serial commitments")
    if first.verifier_id != second.verifier_id:
        raise DeanonymizationRefused(
            f"entries come from different verifiers ({first.verifier_id!r}, {second.verifier_id!r})"
        )
    if verifier_id is not None and first.verifier_id != verifier_id:
        raise DeanonymizationRefused(f"entries were not produced for verifier {verifier_id!r}")
    return recover_public_key(first.E, second.E, first.nonce, second.nonce)
