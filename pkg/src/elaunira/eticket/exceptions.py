"""Exceptions raised by the e-ticket library."""

from __future__ import annotations


class ETicketError(Exception):
    """Base class for every error raised by this package."""


class ConfigurationError(ETicketError):
    """Settings or group parameters are invalid."""


class BackendUnavailable(ConfigurationError):
    """The requested group backend cannot be loaded."""


class DecodeError(ETicketError):
    """Bytes could not be decoded into an element, message or record."""


class ParseError(DecodeError):
    """A message body is malformed."""

    def __init__(self, message: str, *, offset: int = 0, field: str = "") -> None:
        super().__init__(f"{message} (field={field or '?'}, offset={offset})")
        self.offset = offset
        self.field = field


class VersionMismatch(DecodeError):
    """The envelope carries an unsupported wire version."""


class CorruptRecord(DecodeError):
    """A persisted log contains an unreadable record before its tail."""


class PolicyError(ETicketError):
    """The policy universe or a policy request is inconsistent."""


class RangeTooWide(PolicyError):
    """The range width q^k does not fit the group order."""


class OutOfRange(PolicyError):
    """A value cannot be decomposed into k base-q digits."""


class SignatureError(ETicketError):
    """Base class for signing failures."""


class InvalidMessage(SignatureError):
    """The message hits a pole of the signing key (sk + m = 0)."""


class SigningError(SignatureError):
    """Signing could not find usable randomness."""


class PoleCollision(SignatureError):
    """Setup secrets collide with a tag denominator after every retry."""


class ProtocolError(ETicketError):
    """A protocol step was refused.

    :param step: Name of the protocol step that failed.
    """

    step = "protocol"

    def __init__(self, message: str = "", *, step: str | None = None) -> None:
        if step is not None:
            self.step = step
        super().__init__(message or self.__class__.__doc__ or self.step)


class BadProof(ProtocolError):
    """A registration proof of key knowledge did not verify."""

    step = "registration"


class BadCredential(ProtocolError):
    """A credential returned by the authority did not verify."""

    step = "registration"


class ProverPreconditionFailed(ProtocolError):
    """The user's attributes do not satisfy the requested policies."""

    step = "issue"


class SellerProofFailed(ProtocolError):
    """The seller could not prove it holds an authority credential."""

    step = "issue"


class UserProofFailed(ProtocolError):
    """The user's ticket request proof did not verify."""

    step = "issue"


class TicketCheckFailed(ProtocolError):
    """The ticket returned by the seller does not verify."""

    step = "issue"


class VPWindowViolation(ProtocolError):
    """The ticket validity period ends after the user credential's."""

    step = "issue"


class RepeatVerifier(ProtocolError):
    """The verifier already asked this user for a ticket."""

    step = "validate"


class ProofFailed(ProtocolError):
    """The verifier rejected the ticket transcript."""

    step = "validate"


class ExpiredTicket(ProtocolError):
    """The ticket validity period is over."""

    step = "validate"


class DegenerateNonces(ProtocolError):
    """Both transcripts were produced under the same verifier nonce."""

    step = "detect"


class DeanonymizationRefused(ProtocolError):
    """The two transcripts do not share a verifier identity."""

    step = "detect"


def _subclasses(cls: type[ETicketError]) -> dict[str, type[ETicketError]]:
    found = {cls.__name__: cls}
    for sub in cls.__subclasses__():
        found.update(_subclasses(sub))
    return found


def error_from_name(name: str, message: str) -> ETicketError:
    """Rebuild the error a peer reported by class name, ``ProtocolError`` if unknown."""
    return _subclasses(ETicketError).get(name, ProtocolError)(message)
