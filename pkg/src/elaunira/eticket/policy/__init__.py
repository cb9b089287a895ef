"""Range and set ticket policies."""

from elaunira.eticket.policy.loader import (
    load_attributes,
    load_universe,
    parse_attributes,
    parse_universe,
)
from elaunira.eticket.policy.universe import (
    NAME_SEPARATOR,
    PolicyUniverse,
    RangePolicy,
    SatisfactionResult,
    SatisfiedPolicies,
    SetPolicy,
    UserAttributes,
    choose_base_params,
    digit_decompose,
    recompose,
    satisfies,
)

__all__ = [
    "NAME_SEPARATOR",
    "PolicyUniverse",
    "RangePolicy",
    "SatisfactionResult",
    "SatisfiedPolicies",
    "SetPolicy",
    "UserAttributes",
    "choose_base_params",
    "digit_decompose",
    "load_attributes",
    "load_universe",
    "parse_attributes",
    "parse_universe",
    "recompose",
    "satisfies",
]
