"""Read policy universes and user attributes from TOML documents.

Grammar::

    [universe]
    base = 2            # optional, digit base q
    width = 4           # optional, digit count k

    [[range]]
    name = "age"
    lower = 12          # inclusive
    upper = 18          # exclusive

    [[set]]
    name = "profession"
    items = ["student", "senior"]

Attributes use ``[ranges]`` (name = integer) and ``[sets]`` (name = item).
"""

from __future__ import annotations

import tomllib
from collections.abc import Mapping
from pathlib import Path
from typing import Any

from elaunira.eticket.exceptions import PolicyError
from elaunira.eticket.policy.universe import (
    DEFAULT_BASE,
    PolicyUniverse,
    RangePolicy,
    SetPolicy,
    UserAttributes,
)


def parse_universe(document: Mapping[str, Any]) -> PolicyUniverse:
    header = document.get("universe", {})
    try:
        ranges = [
            RangePolicy(name=str(r["name"]), lower=int(r["lower"]), upper=int(r["upper"]))
            for r in document.get("range", [])
        ]
        sets = [SetPolicy(name=str(s["name"]), items=tuple(map(str, s["items"]))) for s in document.get("set", [])]
    except KeyError as e:
        raise PolicyError(f"policy entry is missing {e.args[0]!r}") from e
    return PolicyUniverse(
        ranges=tuple(ranges),
        sets=tuple(sets),
        base=int(header.get("base", DEFAULT_BASE)),
        width=header.get("width"),
    )


def load_universe(path: str | Path) -> PolicyUniverse:
    with open(path, "rb") as f:
        return parse_universe(tomllib.load(f))


def parse_attributes(document: Mapping[str, Any]) -> UserAttributes:
    return UserAttributes(
        range_values={str(k): int(v) for k, v in document.get("ranges", {}).items()},
        set_items={str(k): str(v) for k, v in document.get("sets", {}).items()},
    )


def load_attributes(path: str | Path) -> UserAttributes:
    with open(path, "rb") as f:
        return parse_attributes(tomllib.load(f))
