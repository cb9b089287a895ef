"""The ticket seller."""

from __future__ import annotations

import random

from elaunira.eticket.exceptions import (
    BadCredential,
    ETicketError,
    ProtocolError,
    SellerProofFailed,
    UserProofFailed,
    VPWindowViolation,
)
from elaunira.eticket.groups import GElem
from elaunira.eticket.log import LoggingMixin
from elaunira.eticket.scheme.models import SellerCredential, SellerState
from elaunira.eticket.scheme.params import Params
from elaunira.eticket.scheme.validity import ends_after
from elaunira.eticket.sigs import BBSPlusKeyPair, BBSPlusSig, bbsplus_sign, bbsplus_verify
from elaunira.eticket.wire import messages
from elaunira.eticket.zkp import ProofU2, prove_s1, prove_s2, verify_u2


class Seller(LoggingMixin):
    """Proves its authority credential to users and signs tickets.

    :param params: Published parameters.
    :param seller_id: Identity registered with the authority.
    :param rng: Randomness for proofs and ticket exponents.
    :param x_s: Secret key; drawn when omitted.
    """

    def __init__(
        self,
        params: Params,
        seller_id: str,
        rng: random.Random,
        *,
        x_s: int | None = None,
        credential: SellerCredential | None = None,
    ) -> None:
        self.params = params
        self.seller_id = seller_id
        self.rng = rng
        self.x_s = params.group.random_scalar(rng) if x_s is None else x_s
        self.credential = credential

    @property
    def public_key(self) -> GElem:
        """``Y_S = rho^x_s``."""
        return self.params.gens.rho**self.x_s

    def registration_request(self, validity: str) -> messages.SellerRegister:
        proof = prove_s1(self.params, self.x_s, self.rng)
        return messages.SellerRegister(seller_id=self.seller_id, validity=validity, proof=proof)

    def check_credential(self, credential: SellerCredential) -> bool:
        sig = BBSPlusSig(w=credential.c, s=credential.r, sigma=credential.sigma)
        return bbsplus_verify(
            self.params.seller_credential_key,
            [self.params.hash_text(credential.validity)],
            sig,
            commitment=self.public_key,
        )

    def accept_credential(self, credential: SellerCredential) -> SellerCredential:
        if not self.check_credential(credential):
            raise BadCredential(f"credential for seller {self.seller_id!r} does not verify")
        self.credential = credential
        self.log.info("Seller %s holds a credential valid until %s", self.seller_id, credential.validity)
        return credential

    def _require_credential(self) -> SellerCredential:
        if self.credential is None:
            raise SellerProofFailed(f"seller {self.seller_id!r} is not registered")
        return self.credential

    def offer(self) -> messages.SellerProof:
        """First issuing message: prove the seller is certified."""
        proof = prove_s2(self.params, self._require_credential(), self.x_s, self.rng)
        return messages.SellerProof(seller_id=self.seller_id, proof=proof)

    def issue(self, request: messages.TicketRequest) -> messages.TicketGrant:
        """Check the user's request proof and sign the ticket."""
        self._require_credential()
        proof = request.proof
        if not verify_u2(self.params, proof):
            raise UserProofFailed("ticket request proof does not verify")
        if ends_after(request.validity, proof.validity):
            raise VPWindowViolation(
                f"ticket validity {request.validity} ends after the user's credential ({proof.validity})"
            )
        return self.sign_ticket(proof, service=request.service, price=request.price, validity=request.validity)

    def sign_ticket(self, proof: ProofU2, *, service: str, price: str, validity: str) -> messages.TicketGrant:
        """Sign a ticket for an already verified request."""
        params = self.params
        psi = params.ticket_digest(proof.policies.encode(), price, service, validity)
        d_share = params.group.random_scalar(self.rng)
        key = BBSPlusKeyPair(sk=self.x_s, public=params.ticket_key(self.public_key))
        sig = bbsplus_sign(key, [d_share, psi], self.rng, commitment=proof.Y)
        self.log.info("Issued a %s ticket for %s (%d policies)", service, price, len(proof.policies))
        return messages.TicketGrant(
            T=sig.sigma,
            d=d_share,
            s=sig.s,
            omega=sig.w,
            psi=psi,
            service=service,
            price=price,
            validity=validity,
        )

    def state(self) -> SellerState:
        return SellerState(seller_id=self.seller_id, x_s=self.x_s, credential=self.credential)

    @classmethod
    def from_state(cls, params: Params, state: SellerState, rng: random.Random) -> Seller:
        return cls(params, state.seller_id, rng, x_s=state.x_s, credential=state.credential)

    def handle(self, data: bytes) -> bytes:
        """Answer a purchase or ticket request; failures become ``TICKET_REFUSED``."""
        group = self.params.group
        try:
            request = messages.parse(data, group)
            match request:
                case messages.PurchaseRequest():
                    reply = self.offer()
                case messages.TicketRequest():
                    reply = self.issue(request)
                case _:
                    raise ProtocolError(f"seller does not accept {type(request).__name__}", step="issue")
        except ETicketError as e:
            self.log.error("Refusing ticket: %s", e)
            reply = messages.TicketRefused(error=type(e).__name__, reason=str(e))
        return messages.serialize(reply, group)
