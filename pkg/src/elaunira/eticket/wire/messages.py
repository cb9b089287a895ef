"""Protocol messages and their envelope.

Envelope layout: version (u8), message type (u8), then the message fields
in declaration order.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import ClassVar

from elaunira.eticket.exceptions import ParseError, VersionMismatch
from elaunira.eticket.groups import GElem, Group
from elaunira.eticket.policy import UserAttributes
from elaunira.eticket.scheme.models import SellerCredential, TicketTranscript
from elaunira.eticket.wire.codec import WIRE_VERSION, decode_struct, encode_struct
from elaunira.eticket.zkp import ProofS1, ProofS2, ProofU1, ProofU2


class MessageType(enum.IntEnum):
    SELLER_REGISTER = 1
    SELLER_CREDENTIAL = 2
    USER_REGISTER = 3
    USER_CREDENTIAL = 4
    REGISTRATION_REJECTED = 5
    PURCHASE_REQUEST = 6
    SELLER_PROOF = 7
    TICKET_REQUEST = 8
    TICKET_GRANT = 9
    TICKET_REFUSED = 10
    VALIDATION_CHALLENGE = 11
    TICKET_TRANSCRIPT = 12
    VALIDATION_RESULT = 13


@dataclass(frozen=True)
class SellerRegister:
    msg_type: ClassVar[MessageType] = MessageType.SELLER_REGISTER
    seller_id: str
    validity: str
    proof: ProofS1


@dataclass(frozen=True)
class SellerCredentialGrant:
    msg_type: ClassVar[MessageType] = MessageType.SELLER_CREDENTIAL
    credential: SellerCredential


@dataclass(frozen=True)
class UserRegister:
    msg_type: ClassVar[MessageType] = MessageType.USER_REGISTER
    user_id: str
    validity: str
    attributes: UserAttributes
    proof: ProofU1


@dataclass(frozen=True)
class UserCredentialGrant:
    """The authority's half of a user credential; ``r`` is its share of the blinding."""

    msg_type: ClassVar[MessageType] = MessageType.USER_CREDENTIAL
    c: int
    r: int
    sigma: GElem
    validity: str


@dataclass(frozen=True)
class RegistrationRejected:
    msg_type: ClassVar[MessageType] = MessageType.REGISTRATION_REJECTED
    error: str
    reason: str


@dataclass(frozen=True)
class PurchaseRequest:
    msg_type: ClassVar[MessageType] = MessageType.PURCHASE_REQUEST
    service: str
    price: str
    validity: str


@dataclass(frozen=True)
class SellerProof:
    msg_type: ClassVar[MessageType] = MessageType.SELLER_PROOF
    seller_id: str
    proof: ProofS2


@dataclass(frozen=True)
class TicketRequest:
    msg_type: ClassVar[MessageType] = MessageType.TICKET_REQUEST
    proof: ProofU2
    service: str
    price: str
    validity: str


@dataclass(frozen=True)
class TicketGrant:
    msg_type: ClassVar[MessageType] = MessageType.TICKET_GRANT
    T: GElem
    d: int
    s: int
    omega: int
    psi: int
    service: str
    price: str
    validity: str


@dataclass(frozen=True)
class TicketRefused:
    """``error`` names the exception class the seller raised."""

    msg_type: ClassVar[MessageType] = MessageType.TICKET_REFUSED
    error: str
    reason: str


@dataclass(frozen=True)
class ValidationChallenge:
    msg_type: ClassVar[MessageType] = MessageType.VALIDATION_CHALLENGE
    verifier_id: str
    nonce: int


@dataclass(frozen=True)
class TicketShow:
    msg_type: ClassVar[MessageType] = MessageType.TICKET_TRANSCRIPT
    transcript: TicketTranscript


@dataclass(frozen=True)
class ValidationResult:
    msg_type: ClassVar[MessageType] = MessageType.VALIDATION_RESULT
    accepted: bool
    error: str
    reason: str


Message = (
    SellerRegister
    | SellerCredentialGrant
    | UserRegister
    | UserCredentialGrant
    | RegistrationRejected
    | PurchaseRequest
    | SellerProof
    | TicketRequest
    | TicketGrant
    | TicketRefused
    | ValidationChallenge
    | TicketShow
    | ValidationResult
)

MESSAGE_CLASSES: dict[MessageType, type] = {
    cls.msg_type: cls
    for cls in (
        SellerRegister,
        SellerCredentialGrant,
        UserRegister,
        UserCredentialGrant,
        RegistrationRejected,
        PurchaseRequest,
        SellerProof,
        TicketRequest,
        TicketGrant,
        TicketRefused,
        ValidationChallenge,
        TicketShow,
        ValidationResult,
    )
}


def serialize(message: Message, group: Group) -> bytes:
    return bytes([WIRE_VERSION, message.msg_type]) + encode_struct(message, group)


def parse(data: bytes, group: Group) -> Message:
    if len(data) < 2:
        raise ParseError("truncated envelope", offset=0, field="envelope")
    if data[0] != WIRE_VERSION:
        raise VersionMismatch(f"wire version {data[0]} is not {WIRE_VERSION}")
    try:
        msg_type = MessageType(data[1])
    except ValueError:
        raise ParseError(f"unknown message type {data[1]}", offset=1, field="msg_type") from None
    if len(data) == 2:
        raise ParseError("empty message body", offset=2, field=msg_type.name)
    return decode_struct(MESSAGE_CLASSES[msg_type], data[2:], group, base_offset=2)
