"""Credentials, tickets, transcripts and the validation tables."""

from __future__ import annotations

import threading
from collections.abc import Iterator
from dataclasses import dataclass, field

from elaunira.eticket.groups import GElem
from elaunira.eticket.policy import SatisfiedPolicies, UserAttributes
from elaunira.eticket.zkp import ProofU3


@dataclass(frozen=True)
class SellerCredential:
    """BBS+ credential ``(c, r, sigma)`` over the seller key and validity period."""

    c: int
    r: int
    sigma: GElem
    validity: str


@dataclass(frozen=True)
class UserCredential:
    """BBS+ credential over the user key, validity period and certified attributes."""

    c: int
    r: int
    sigma: GElem
    validity: str
    attributes: UserAttributes


@dataclass(frozen=True)
class Ticket:
    """A ticket as kept by the user.

    ``T`` is the seller's BBS+ signature, ``s`` the serial number and
    ``pseudonym`` is ``xi^x_u g1^d``.
    """

    d: int
    s: int
    psi: int
    omega: int
    T: GElem
    policies: SatisfiedPolicies
    price: str
    service: str
    validity: str
    pseudonym: GElem
    seller_id: str


@dataclass(frozen=True)
class TicketTranscript:
    """What the user shows a verifier for one validation."""

    nonce: int
    psi: int
    policies: SatisfiedPolicies
    price: str
    service: str
    validity: str
    proof: ProofU3

    @property
    def D(self) -> GElem:
        return self.proof.D

    @property
    def E(self) -> GElem:
        return self.proof.E

    @property
    def pseudonym(self) -> GElem:
        return self.proof.Ps


@dataclass(frozen=True)
class VerifierEntry:
    """One accepted validation: ``((r, D, E), F, J, psi)`` plus the verifier id."""

    verifier_id: str
    nonce: int
    D: GElem
    E: GElem
    F: GElem
    J: GElem
    psi: int

    @classmethod
    def from_transcript(cls, verifier_id: str, transcript: TicketTranscript) -> VerifierEntry:
        proof = transcript.proof
        return cls(
            verifier_id=verifier_id,
            nonce=transcript.nonce,
            D=proof.D,
            E=proof.E,
            F=proof.F,
            J=proof.J,
            psi=transcript.psi,
        )


@dataclass
class UserTable:
    """``H(ID_V) -> r`` for every verifier the user has shown a ticket to."""

    entries: dict[int, int] = field(default_factory=dict)

    def __contains__(self, key: object) -> bool:
        return key in self.entries

    def __len__(self) -> int:
        return len(self.entries)

    def record(self, key: int, nonce: int) -> None:
        self.entries[key] = nonce


class VerifierTable:
    """Append-only log of accepted validations, indexed by serial commitment.

    Appends and scans hold a lock, so gates sharing one table can run on
    separate threads.
    """

    def __init__(self, entries: list[VerifierEntry] | None = None) -> None:
        self._lock = threading.RLock()
        self._entries: list[VerifierEntry] = []
        self._by_serial: dict[GElem, list[int]] = {}
        self._nonces: set[int] = set()
        for entry in entries or ():
            self.append(entry)

    def __len__(self) -> int:
        return len(self._entries)

    def __iter__(self) -> Iterator[VerifierEntry]:
        with self._lock:
            return iter(list(self._entries))

    def append(self, entry: VerifierEntry) -> None:
        with self._lock:
            self._by_serial.setdefault(entry.D, []).append(len(self._entries))
            self._entries.append(entry)
            self._nonces.add(entry.nonce)

    def with_serial(self, D: GElem) -> list[VerifierEntry]:
        with self._lock:
            return [self._entries[i] for i in self._by_serial.get(D, ())]

    def serials(self) -> list[GElem]:
        with self._lock:
            return list(self._by_serial)

    def reserve_nonce(self, nonce: int) -> bool:
        """Claim ``nonce`` for a new session; False if it was ever used here."""
        with self._lock:
            if nonce in self._nonces:
                return False
            self._nonces.add(nonce)
            return True


@dataclass(frozen=True)
class SellerRecord:
    seller_id: str
    public_key: GElem
    validity: str


@dataclass(frozen=True)
class UserRecord:
    user_id: str
    attributes: UserAttributes
    public_key: GElem
    sigma: GElem
    validity: str


@dataclass(frozen=True)
class TableRow:
    key: int
    nonce: int


@dataclass(frozen=True)
class CAState:
    x: int
    y: int
    mu: tuple[int, ...]
    sellers: tuple[SellerRecord, ...]
    users: tuple[UserRecord, ...]


@dataclass(frozen=True)
class SellerState:
    seller_id: str
    x_s: int
    credential: SellerCredential | None


@dataclass(frozen=True)
class UserState:
    user_id: str
    x_u: int
    credential: UserCredential | None
    tickets: tuple[Ticket, ...]
    table: tuple[TableRow, ...]
