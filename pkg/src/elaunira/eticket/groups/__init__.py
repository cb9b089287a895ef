"""Symmetric bilinear groups with a pairing backend and an exponent test backend."""

from elaunira.eticket.groups.base import (
    MIN_TEST_PRIME,
    PRIME_64,
    Backend,
    BackendId,
    ElementKind,
    GroupConfig,
)
from elaunira.eticket.groups.group import GElem, Group, GTElem, load_group
from elaunira.eticket.groups.pairing import charm_available

__all__ = [
    "MIN_TEST_PRIME",
    "PRIME_64",
    "Backend",
    "BackendId",
    "ElementKind",
    "GElem",
    "GTElem",
    "Group",
    "GroupConfig",
    "charm_available",
    "load_group",
]
