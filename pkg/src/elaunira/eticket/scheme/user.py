"""The ticket holder."""

from __future__ import annotations

import random
from dataclasses import dataclass

from elaunira.eticket.exceptions import (
    BadCredential,
    ProtocolError,
    RepeatVerifier,
    SellerProofFailed,
    TicketCheckFailed,
)
from elaunira.eticket.groups import GElem
from elaunira.eticket.log import LoggingMixin
from elaunira.eticket.policy import SatisfiedPolicies, UserAttributes
from elaunira.eticket.scheme.models import (
    TableRow,
    Ticket,
    TicketTranscript,
    UserCredential,
    UserState,
    UserTable,
)
from elaunira.eticket.scheme.params import Params
from elaunira.eticket.sigs import BBSPlusSig, bbsplus_verify
from elaunira.eticket.wire import messages
from elaunira.eticket.zkp import prove_u1, prove_u2, prove_u3, verify_s2


def user_verify_ticket(params: Params, ticket: Ticket, seller_key: GElem) -> bool:
    """``e(T, Y_S rho^omega) == e(g0 Ps g2^s g3^psi, rho)`` with ``psi`` recomputed."""
    psi = params.ticket_digest(ticket.policies.encode(), ticket.price, ticket.service, ticket.validity)
    if psi != ticket.psi:
        return False
    if ticket.T.is_identity():
        return False
    gens = params.gens
    rho = gens.rho
    block = gens.g0 * ticket.pseudonym * gens.g2**ticket.s * gens.g3**ticket.psi
    return ticket.T.pair(seller_key * rho**ticket.omega) == block.pair(rho)


@dataclass(frozen=True)
class _PendingTicket:
    seller_id: str
    d: int
    policies: SatisfiedPolicies


class User(LoggingMixin):
    """Registers attributes, buys tickets and shows them at verifiers.

    :param params: Published parameters, including the seller directory.
    :param user_id: Identity registered with the authority.
    :param attributes: Attribute values the authority certifies.
    :param rng: Randomness for proofs.
    :param x_u: Secret key; drawn when omitted.
    """

    def __init__(
        self,
        params: Params,
        user_id: str,
        attributes: UserAttributes,
        rng: random.Random,
        *,
        x_u: int | None = None,
        credential: UserCredential | None = None,
        tickets: list[Ticket] | None = None,
        table: UserTable | None = None,
    ) -> None:
        self.params = params
        self.user_id = user_id
        self.attributes = attributes
        self.rng = rng
        self.x_u = params.group.random_scalar(rng) if x_u is None else x_u
        self.credential = credential
        self.tickets: list[Ticket] = list(tickets or [])
        self.table = table if table is not None else UserTable()
        self._registration_r: int | None = None
        self._pending: _PendingTicket | None = None

    @property
    def public_key(self) -> GElem:
        """``Y_U = xi^x_u``."""
        return self.params.gens.xi**self.x_u

    # Registration

    def registration_request(self, validity: str) -> messages.UserRegister:
        self._registration_r = self.params.group.random_scalar(self.rng)
        proof = prove_u1(self.params, self.x_u, self._registration_r, self.rng)
        return messages.UserRegister(
            user_id=self.user_id, validity=validity, attributes=self.attributes, proof=proof
        )

    def check_credential(self, credential: UserCredential) -> bool:
        params = self.params
        ranges, sets = params.attribute_messages(credential.attributes)
        sig = BBSPlusSig(w=credential.c, s=credential.r, sigma=credential.sigma)
        return bbsplus_verify(
            params.user_credential_key,
            [params.hash_text(credential.validity), *ranges, *sets],
            sig,
            commitment=self.public_key,
        )

    def accept_credential(self, grant: messages.UserCredentialGrant) -> UserCredential:
        """Combine the authority's blinding share with ours and verify the credential."""
        if self._registration_r is None:
            raise BadCredential("no registration in progress")
        credential = UserCredential(
            c=grant.c,
            r=(self._registration_r + grant.r) % self.params.group.order,
            sigma=grant.sigma,
            validity=grant.validity,
            attributes=self.attributes,
        )
        if not self.check_credential(credential):
            raise BadCredential(f"credential for user {self.user_id!r} does not verify")
        self._registration_r = None
        self.credential = credential
        self.log.info("User %s holds a credential valid until %s", self.user_id, credential.validity)
        return credential

    # Issuing

    def verify_seller(self, offer: messages.SellerProof) -> None:
        if not verify_s2(self.params, offer.proof):
            raise SellerProofFailed(f"seller {offer.seller_id!r} could not prove its credential")

    def request_ticket(
        self,
        offer: messages.SellerProof,
        requested: SatisfiedPolicies,
        *,
        service: str,
        price: str,
        validity: str,
    ) -> messages.TicketRequest:
        """Check the seller's proof, then prove the requested policies.

        Nothing is produced when the seller's proof fails.
        """
        if self.credential is None:
            raise ProtocolError(f"user {self.user_id!r} is not registered", step="issue")
        self.verify_seller(offer)
        proof, d = prove_u2(self.params, self.credential, self.x_u, requested, self.rng)
        self._pending = _PendingTicket(seller_id=offer.seller_id, d=d, policies=requested)
        return messages.TicketRequest(proof=proof, service=service, price=price, validity=validity)

    def accept_ticket(self, grant: messages.TicketGrant) -> Ticket:
        pending = self._pending
        if pending is None:
            raise TicketCheckFailed("no ticket request in progress")
        params = self.params
        seller_key = params.sellers.get(pending.seller_id)
        if seller_key is None:
            raise TicketCheckFailed(f"seller {pending.seller_id!r} is not in the published directory")
        d_u = (pending.d + grant.d) % params.group.order
        ticket = Ticket(
            d=d_u,
            s=grant.s,
            psi=grant.psi,
            omega=grant.omega,
            T=grant.T,
            policies=pending.policies,
            price=grant.price,
            service=grant.service,
            validity=grant.validity,
            pseudonym=params.gens.xi**self.x_u * params.gens.g1**d_u,
            seller_id=pending.seller_id,
        )
        if not user_verify_ticket(params, ticket, seller_key):
            raise TicketCheckFailed("ticket signature does not verify")
        self._pending = None
        self.tickets.append(ticket)
        self.log.info("Received a %s ticket from seller %s", ticket.service, ticket.seller_id)
        return ticket

    # Validation

    def show_ticket(self, challenge: messages.ValidationChallenge, ticket: Ticket | None = None) -> messages.TicketShow:
        """Prove possession of ``ticket`` (the newest by default) to a verifier.

        Raises ``RepeatVerifier`` before building anything if this verifier id
        was already answered.
        """
        key = self.params.hash_text(challenge.verifier_id)
        if key in self.table:
            raise RepeatVerifier(f"already validated at verifier {challenge.verifier_id!r}")
        if ticket is None:
            if not self.tickets:
                raise ProtocolError("user holds no ticket", step="validate")
            ticket = self.tickets[-1]
        proof = prove_u3(self.params, ticket, self.x_u, challenge.verifier_id, challenge.nonce, self.rng)
        self.table.record(key, challenge.nonce)
        self.log.info("Showing a %s ticket at verifier %s", ticket.service, challenge.verifier_id)
        return messages.TicketShow(
            TicketTranscript(
                nonce=challenge.nonce,
                psi=ticket.psi,
                policies=ticket.policies,
                price=ticket.price,
                service=ticket.service,
                validity=ticket.validity,
                proof=proof,
            )
        )

    def clone_wallet(self, rng: random.Random | None = None) -> User:
        """A second device holding the same keys and tickets with an empty verifier table."""
        return User(
            self.params,
            self.user_id,
            self.attributes,
            rng or self.rng,
            x_u=self.x_u,
            credential=self.credential,
            tickets=self.tickets,
        )

    def state(self) -> UserState:
        return UserState(
            user_id=self.user_id,
            x_u=self.x_u,
            credential=self.credential,
            tickets=tuple(self.tickets),
            table=tuple(TableRow(key, nonce) for key, nonce in self.table.entries.items()),
        )

    @classmethod
    def from_state(
        cls, params: Params, state: UserState, attributes: UserAttributes, rng: random.Random
    ) -> User:
        if state.credential is not None:
            attributes = state.credential.attributes
        return cls(
            params,
            state.user_id,
            attributes,
            rng,
            x_u=state.x_u,
            credential=state.credential,
            tickets=list(state.tickets),
            table=UserTable({row.key: row.nonce for row in state.table}),
        )

    def handle(self, data: bytes) -> bytes:
        """Answer a validation challenge with a transcript.

        The user aborts by raising, so a refused challenge sends nothing.
        """
        group = self.params.group
        request = messages.parse(data, group)
        if not isinstance(request, messages.ValidationChallenge):
            raise ProtocolError(f"user does not accept {type(request).__name__}", step="validate")
        return messages.serialize(self.show_ticket(request), group)
