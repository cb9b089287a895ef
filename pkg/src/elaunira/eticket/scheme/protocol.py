"""Run each protocol between in-process actors over serialized messages.

Every message crosses a :class:`Channel` as bytes, so the drivers exercise
the same path a networked deployment would and the channel's trace gives a
reproducible fingerprint of a run.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

from elaunira.eticket.exceptions import ProtocolError, SellerProofFailed, error_from_name
from elaunira.eticket.groups import Group
from elaunira.eticket.policy import SatisfiedPolicies
from elaunira.eticket.scheme.authority import CentralAuthority
from elaunira.eticket.scheme.doublespend import deanonymize, detect_double_spend
from elaunira.eticket.scheme.models import (
    SellerCredential,
    Ticket,
    UserCredential,
    VerifierEntry,
)
from elaunira.eticket.scheme.seller import Seller
from elaunira.eticket.scheme.user import User, user_verify_ticket
from elaunira.eticket.scheme.verifier import Verifier
from elaunira.eticket.wire import messages


@dataclass
class Channel:
    """Carries messages between actors and records a digest of each one."""

    group: Group
    trace: list[tuple[str, str]] = field(default_factory=list)

    def send(self, message: messages.Message) -> bytes:
        data = messages.serialize(message, self.group)
        self.trace.append((type(message).__name__, hashlib.sha256(data).hexdigest()))
        return data

    def receive(self, data: bytes) -> messages.Message:
        message = messages.parse(data, self.group)
        self.trace.append((type(message).__name__, hashlib.sha256(data).hexdigest()))
        return message

    def digest(self) -> str:
        h = hashlib.sha256()
        for name, digest in self.trace:
            h.update(f"{name}:{digest}\n".encode())
        return h.hexdigest()


def _channel(group: Group, channel: Channel | None) -> Channel:
    return channel if channel is not None else Channel(group)

def publish(ca: CentralAuthority, *actors: Seller | User | Verifier) -> None:
    """Hand the authority's current parameters to ``actors``."""
    for actor in actors:
        actor.params = ca.params


def register_seller(
    ca: CentralAuthority, seller: Seller, validity: str, channel: Channel | None = None
) -> SellerCredential:
    channel = _channel(ca.group, channel)
    reply = channel.receive(ca.handle(channel.send(seller.registration_request(validity))))
    if isinstance(reply, messages.RegistrationRejected):
        raise error_from_name(reply.error, reply.reason)
    if not isinstance(reply, messages.SellerCredentialGrant):
        raise ProtocolError(f"unexpected {type(reply).__name__}", step="registration")
    seller.params = ca.params
    return seller.accept_credential(reply.credential)


def register_user(
    ca: CentralAuthority, user: User, validity: str, channel: Channel | None = None
) -> UserCredential:
    channel = _channel(ca.group, channel)
    reply = channel.receive(ca.handle(channel.send(user.registration_request(validity))))
    if isinstance(reply, messages.RegistrationRejected):
        raise error_from_name(reply.error, reply.reason)
    if not isinstance(reply, messages.UserCredentialGrant):
        raise ProtocolError(f"unexpected {type(reply).__name__}", step="registration")
    return user.accept_credential(reply)


def issue_ticket(
    user: User,
    seller: Seller,
    requested: SatisfiedPolicies,
    *,
    service: str,
    price: str,
    validity: str,
    channel: Channel | None = None,
) -> Ticket:
    """The four-message issuing flow; the user stops before proving anything to an uncertified seller."""
    channel = _channel(seller.params.group, channel)
    purchase = messages.PurchaseRequest(service=service, price=price, validity=validity)
    offer = channel.receive(seller.handle(channel.send(purchase)))
    if isinstance(offer, messages.TicketRefused):
        raise SellerProofFailed(offer.reason)
    if not isinstance(offer, messages.SellerProof):
        raise ProtocolError(f"unexpected {type(offer).__name__}", step="issue")
    request = user.request_ticket(offer, requested, service=service, price=price, validity=validity)
    grant = channel.receive(seller.handle(channel.send(request)))
    if isinstance(grant, messages.TicketRefused):
        raise error_from_name(grant.error, grant.reason)
    if not isinstance(grant, messages.TicketGrant):
        raise ProtocolError(f"unexpected {type(grant).__name__}", step="issue")
    return user.accept_ticket(grant)


def validate_ticket(
    user: User,
    verifier: Verifier,
    ticket: Ticket | None = None,
    channel: Channel | None = None,
) -> VerifierEntry:
    """Challenge, show and check; returns the entry the verifier recorded."""
    channel = _channel(verifier.params.group, channel)
    challenge = channel.receive(channel.send(verifier.challenge()))
    show = user.show_ticket(challenge, ticket)
    result = channel.receive(verifier.handle(channel.send(show)))
    if not isinstance(result, messages.ValidationResult):
        raise ProtocolError(f"unexpected {type(result).__name__}", step="validate")
    if not result.accepted:
        raise error_from_name(result.error, result.reason)
    return verifier.table.with_serial(show.transcript.D)[-1]


__all__ = [
    "Channel",
    "deanonymize",
    "detect_double_spend",
    "issue_ticket",
    "publish",
    "register_seller",
    "register_user",
    "user_verify_ticket",
    "validate_ticket",
]
