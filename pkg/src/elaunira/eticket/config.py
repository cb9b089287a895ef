"""Runtime settings.

Every setting resolves in the same order: an explicit argument (usually a
command-line flag), then its environment variable, then the default.

Environment variables:
    - ETICKET_BACKEND: ``pairing`` or ``exponent-test``
    - ETICKET_TEST_PRIME: modulus of the exponent backend
    - ETICKET_FIELD_BITS: 512 or 1024
    - ETICKET_SEED: integer seed for reproducible runs
    - ETICKET_STATE_DIR: directory of the command-line state files
    - ETICKET_CREDENTIAL_VALIDITY: validity period written into credentials
    - ETICKET_LOG_LEVEL: logging level name
"""

from __future__ import annotations

import logging
import os
import random
import secrets
from dataclasses import dataclass
from pathlib import Path

from elaunira.eticket.exceptions import BackendUnavailable, ConfigurationError
from elaunira.eticket.groups import PRIME_64, BackendId, GroupConfig, charm_available

logger = logging.getLogger(__name__)

DEFAULT_STATE_DIR = ".eticket"
DEFAULT_VALIDITY = "2099-12-31"


def _env_int(name: str) -> int | None:
    value = os.environ.get(name)
    if value is None or value == "":
        return None
    try:
        return int(value, 0)
    except ValueError:
        raise ConfigurationError(f"{name} must be an integer, got {value!r}") from None


@dataclass(frozen=True)
class Settings:
    backend: BackendId
    test_prime: int | None
    field_bits: int
    seed: int | None
    state_dir: Path
    credential_validity: str
    log_level: str

    @classmethod
    def resolve(
        cls,
        *,
        backend: str | None = None,
        test_prime: int | None = None,
        field_bits: int | None = None,
        seed: int | None = None,
        state_dir: str | Path | None = None,
        credential_validity: str | None = None,
        log_level: str | None = None,
    ) -> Settings:
        backend = backend or os.environ.get("ETICKET_BACKEND") or None
        if test_prime is None:
            test_prime = _env_int("ETICKET_TEST_PRIME")
        if field_bits is None:
            field_bits = _env_int("ETICKET_FIELD_BITS") or 512
        if seed is None:
            seed = _env_int("ETICKET_SEED")

        if backend is None:
            if charm_available():
                backend_id = BackendId.PAIRING
            else:
                logger.warning(
                    "charm-crypto is not installed, falling back to the exponent test backend (p = 2^64 - 59)"
                )
                backend_id = BackendId.EXPONENT_TEST
        else:
            try:
                backend_id = BackendId(backend)
            except ValueError:
                raise ConfigurationError(f"unknown backend {backend!r}") from None
            if backend_id is BackendId.PAIRING and not charm_available():
                raise BackendUnavailable("pairing backend requested but charm-crypto is not installed")
        if backend_id is BackendId.EXPONENT_TEST and test_prime is None:
            test_prime = PRIME_64

        return cls(
            backend=backend_id,
            test_prime=test_prime if backend_id is BackendId.EXPONENT_TEST else None,
            field_bits=field_bits,
            seed=seed,
            state_dir=Path(state_dir or os.environ.get("ETICKET_STATE_DIR") or DEFAULT_STATE_DIR),
            credential_validity=credential_validity
            or os.environ.get("ETICKET_CREDENTIAL_VALIDITY")
            or DEFAULT_VALIDITY,
            log_level=(log_level or os.environ.get("ETICKET_LOG_LEVEL") or "INFO").upper(),
        )

    def group_config(self) -> GroupConfig:
        return GroupConfig(backend_id=self.backend, field_bits=self.field_bits, test_prime=self.test_prime)

    def rng(self, offset: int = 0) -> random.Random:
        """Seeded generator when a seed is set, the system CSPRNG otherwise.

        ``offset`` separates the streams of actors sharing one seed.
        """
        if self.seed is None:
            return secrets.SystemRandom()
        return random.Random(self.seed + offset)
