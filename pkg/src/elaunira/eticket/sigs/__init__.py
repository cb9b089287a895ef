"""BB and BBS+ signatures."""

from elaunira.eticket.sigs.bb import BBKeyPair, bb_sign, bb_verify
from elaunira.eticket.sigs.bbsplus import (
    BBSPlusKeyPair,
    BBSPlusPublicKey,
    BBSPlusSig,
    bbsplus_sign,
    bbsplus_verify,
)

__all__ = [
    "BBKeyPair",
    "BBSPlusKeyPair",
    "BBSPlusPublicKey",
    "BBSPlusSig",
    "bb_sign",
    "bb_verify",
    "bbsplus_sign",
    "bbsplus_verify",
]
