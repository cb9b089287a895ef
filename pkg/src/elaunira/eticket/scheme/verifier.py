"""The ticket verifier (a gate)."""

from __future__ import annotations

import random
from collections.abc import Callable
from datetime import UTC, datetime, timedelta
from pathlib import Path

from elaunira.eticket.exceptions import ETicketError, ExpiredTicket, ProofFailed, ProtocolError
from elaunira.eticket.log import LoggingMixin
from elaunira.eticket.scheme.models import TicketTranscript, VerifierEntry, VerifierTable
from elaunira.eticket.scheme.params import Params
from elaunira.eticket.scheme.validity import expired
from elaunira.eticket.wire import messages, tables
from elaunira.eticket.zkp import verify_u3


#: How long a challenge stays open for an answer.
CHALLENGE_TTL = timedelta(minutes=2)

#: Open challenges kept per verifier; the oldest are dropped beyond this.
MAX_PENDING = 4096


def _utcnow() -> datetime:
    return datetime.now(UTC)


class Verifier(LoggingMixin):
    """Challenges users with a fresh nonce and records every accepted transcript.

    Gates of one station share a ``verifier_id`` and a ``table``; nonces are
    unique across the table.

    :param params: Published parameters, including the seller directory.
    :param verifier_id: Public identity ``ID_V``.
    :param rng: Randomness for nonces.
    :param table: Shared validation table; a fresh one when omitted.
    :param log_path: Append every accepted entry to this ``.vtable`` file.
    :param clock: Current time, for expiry checks.
    :param challenge_ttl: Time a challenge may wait for its answer.
    """

    def __init__(
        self,
        params: Params,
        verifier_id: str,
        rng: random.Random,
        *,
        table: VerifierTable | None = None,
        log_path: str | Path | None = None,
        clock: Callable[[], datetime] = _utcnow,
        challenge_ttl: timedelta = CHALLENGE_TTL,
    ) -> None:
        self.params = params
        self.verifier_id = verifier_id
        self.rng = rng
        self.table = table if table is not None else VerifierTable()
        self.log_path = log_path
        self.clock = clock
        self.challenge_ttl = challenge_ttl
        self._pending: dict[int, datetime] = {}

    def challenge(self) -> messages.ValidationChallenge:
        """Open a session with a nonce never used against this table."""
        group = self.params.group
        now = self.clock()
        self._prune(now)
        while True:
            nonce = group.random_scalar(self.rng)
            if self.table.reserve_nonce(nonce):
                break
        self._pending[nonce] = now
        return messages.ValidationChallenge(verifier_id=self.verifier_id, nonce=nonce)

    def _prune(self, now: datetime) -> None:
        """Close expired challenges and keep at most ``MAX_PENDING - 1`` open."""
        cutoff = now - self.challenge_ttl
        for nonce, issued in list(self._pending.items()):
            if issued >= cutoff and len(self._pending) < MAX_PENDING:
                break
            del self._pending[nonce]

    @property
    def open_challenges(self) -> int:
        return len(self._pending)

    def verify(self, transcript: TicketTranscript) -> VerifierEntry:
        """Check a transcript against an open session and record it."""
        issued = self._pending.pop(transcript.nonce, None)
        if issued is None:
            raise ProofFailed("transcript answers no open challenge of this verifier")
        if self.clock() - issued > self.challenge_ttl:
            raise ProofFailed("challenge expired before it was answered")
        params = self.params
        psi = params.ticket_digest(
            transcript.policies.encode(), transcript.price, transcript.service, transcript.validity
        )
        if psi != transcript.psi:
            raise ProofFailed("ticket digest does not match the shown ticket details")
        if expired(transcript.validity, self.clock()):
            raise ExpiredTicket(f"ticket expired at {transcript.validity}")
        for seller_id, seller_key in params.sellers.items():
            if verify_u3(params, transcript.proof, seller_key, transcript.nonce, self.verifier_id, psi):
                break
        else:
            raise ProofFailed("ticket proof does not verify under any published seller key")
        entry = VerifierEntry.from_transcript(self.verifier_id, transcript)
        self.table.append(entry)
        if self.log_path is not None:
            tables.append_entry(self.log_path, entry, params.group)
        self.log.info("Accepted a %s ticket from seller %s at %s", transcript.service, seller_id, self.verifier_id)
        return entry

    def handle(self, data: bytes) -> bytes:
        """Check a ticket transcript; the answer is always ``VALIDATION_RESULT``."""
        group = self.params.group
        try:
            request = messages.parse(data, group)
            if not isinstance(request, messages.TicketShow):
                raise ProtocolError(f"verifier does not accept {type(request).__name__}", step="validate")
            self.verify(request.transcript)
        except ETicketError as e:
            self.log.error("Denied ticket at %s: %s", self.verifier_id, e)
            reply = messages.ValidationResult(accepted=False, error=type(e).__name__, reason=str(e))
        else:
            reply = messages.ValidationResult(accepted=True, error="", reason="")
        return messages.serialize(reply, group)
