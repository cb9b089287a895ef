"""Fiat-Shamir proofs for registration, issuing and validation."""

from elaunira.eticket.zkp.issuing import (
    DigitProof,
    ProofS2,
    ProofU2,
    RangeProof,
    SetProof,
    prove_s2,
    prove_u2,
    verify_s2,
    verify_u2,
)
from elaunira.eticket.zkp.registration import ProofS1, ProofU1, prove_s1, prove_u1, verify_s1, verify_u1
from elaunira.eticket.zkp.transcript import Transcript, challenge, encode_text
from elaunira.eticket.zkp.validation import ProofU3, prove_u3, verify_u3

__all__ = [
    "DigitProof",
    "ProofS1",
    "ProofS2",
    "ProofU1",
    "ProofU2",
    "ProofU3",
    "RangeProof",
    "SetProof",
    "Transcript",
    "challenge",
    "encode_text",
    "prove_s1",
    "prove_s2",
    "prove_u1",
    "prove_u2",
    "prove_u3",
    "verify_s1",
    "verify_s2",
    "verify_u1",
    "verify_u2",
    "verify_u3",
]
