"""Actors and protocol drivers of the e-ticket scheme."""

from elaunira.eticket.scheme.params import Generators, MasterSecret, Params
from elaunira.eticket.scheme.models import (
    CAState,
    SellerCredential,
    SellerRecord,
    SellerState,
    TableRow,
    Ticket,
    TicketTranscript,
    UserCredential,
    UserRecord,
    UserState,
    UserTable,
    VerifierEntry,
    VerifierTable,
)
from elaunira.eticket.scheme.doublespend import (
    DoubleSpendHit,
    deanonymize,
    detect_double_spend,
    recover_public_key,
)
from elaunira.eticket.scheme.authority import CentralAuthority, accept_all, derive_params, setup
from elaunira.eticket.scheme.seller import Seller
from elaunira.eticket.scheme.user import User, user_verify_ticket
from elaunira.eticket.scheme.verifier import Verifier
from elaunira.eticket.scheme.protocol import (
    Channel,
    issue_ticket,
    publish,
    register_seller,
    register_user,
    validate_ticket,
)

__all__ = [
    "CAState",
    "CentralAuthority",
    "Channel",
    "DoubleSpendHit",
    "Generators",
    "MasterSecret",
    "Params",
    "Seller",
    "SellerCredential",
    "SellerRecord",
    "SellerState",
    "TableRow",
    "Ticket",
    "TicketTranscript",
    "User",
    "UserCredential",
    "UserRecord",
    "UserState",
    "UserTable",
    "Verifier",
    "VerifierEntry",
    "VerifierTable",
    "accept_all",
    "deanonymize",
    "derive_params",
    "detect_double_spend",
    "issue_ticket",
    "publish",
    "recover_public_key",
    "register_seller",
    "register_user",
    "setup",
    "user_verify_ticket",
    "validate_ticket",
]
