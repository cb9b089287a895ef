"""Ticket policy universe, attribute satisfaction and digit decomposition."""

from __future__ import annotations

from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field

from elaunira.eticket.exceptions import OutOfRange, PolicyError, RangeTooWide

#: Separator between policy names in the hashed form of a request.
NAME_SEPARATOR = b"\x1f"

DEFAULT_BASE = 2


@dataclass(frozen=True)
class RangePolicy:
    """Half-open interval ``[lower, upper)`` on an integer attribute."""

    name: str
    lower: int
    upper: int

    def __post_init__(self) -> None:
        if not self.name:
            raise PolicyError("range policy needs a name")
        if self.lower >= self.upper:
            raise PolicyError(f"range {self.name!r} is empty: [{self.lower}, {self.upper})")

    @property
    def length(self) -> int:
        return self.upper - self.lower

    def contains(self, value: int) -> bool:
        return self.lower <= value < self.upper


@dataclass(frozen=True)
class SetPolicy:
    """Finite set of accepted item strings."""

    name: str
    items: tuple[str, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "items", tuple(self.items))
        if not self.name:
            raise PolicyError("set policy needs a name")
        if not self.items:
            raise PolicyError(f"set {self.name!r} has no items")
        if len(set(self.items)) != len(self.items):
            raise PolicyError(f"set {self.name!r} has duplicate items")


def choose_base_params(
    ranges: Sequence[RangePolicy],
    base: int = DEFAULT_BASE,
    order: int | None = None,
) -> tuple[int, int]:
    """Smallest ``k`` with ``base^k`` covering the longest interval.

    With ``order`` given, the result must also satisfy ``order > 2*base^k + 1``.
    """
    if base < 2:
        raise PolicyError(f"base must be >= 2, got {base}")
    if not ranges:
        return DEFAULT_BASE, 1
    longest = max(r.length for r in ranges)
    width = 1
    while base**width < longest:
        width += 1
    if order is not None and order <= 2 * base**width + 1:
        raise RangeTooWide(f"group order {order} <= 2*{base}^{width}+1")
    return base, width


def digit_decompose(value: int, base: int, width: int) -> list[int]:
    """Little-endian base-``base`` digits of ``value``, exactly ``width`` of them."""
    if not 0 <= value < base**width:
        raise OutOfRange(f"{value} is outside [0, {base}^{width})")
    digits = []
    for _ in range(width):
        value, digit = divmod(value, base)
        digits.append(digit)
    return digits


def recompose(digits: Iterable[int], base: int) -> int:
    return sum(d * base**i for i, d in enumerate(digits))


@dataclass(frozen=True)
class SatisfiedPolicies:
    """Names of the policies a user proves, in sorted order."""

    names: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "names", tuple(sorted(set(self.names))))

    def __iter__(self):
        return iter(self.names)

    def __contains__(self, name: object) -> bool:
        return name in self.names

    def __len__(self) -> int:
        return len(self.names)

    def encode(self) -> bytes:
        return NAME_SEPARATOR.join(n.encode() for n in self.names)


@dataclass(frozen=True)
class UserAttributes:
    range_values: Mapping[str, int] = field(default_factory=dict)
    set_items: Mapping[str, str] = field(default_factory=dict)


@dataclass(frozen=True)
class SatisfactionResult:
    """Outcome of :func:`satisfies`.

    ``digits`` maps each requested range to the digits of ``a - c`` and of
    ``a - d + q^k``.
    """

    ok: bool
    failed: str | None = None
    digits: Mapping[str, tuple[list[int], list[int]]] = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class PolicyUniverse:
    """Every range and set policy the authority publishes.

    ``width`` defaults to the smallest value covering the longest range.
    """

    ranges: tuple[RangePolicy, ...] = ()
    sets: tuple[SetPolicy, ...] = ()
    base: int = DEFAULT_BASE
    width: int | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "ranges", tuple(self.ranges))
        object.__setattr__(self, "sets", tuple(self.sets))
        names = [p.name for p in (*self.ranges, *self.sets)]
        if len(set(names)) != len(names):
            raise PolicyError("policy names must be unique across ranges and sets")
        if self.width is None:
            width = choose_base_params(self.ranges, self.base)[1] if self.ranges else 1
            object.__setattr__(self, "width", width)
        elif self.base**self.width < max((r.length for r in self.ranges), default=0):
            raise PolicyError(f"{self.base}^{self.width} does not cover the longest range")

    @property
    def span(self) -> int:
        """``q^k``."""
        return self.base**self.width

    def check_order(self, order: int) -> None:
        if order <= 2 * self.span + 1:
            raise RangeTooWide(f"group order {order} <= 2*{self.base}^{self.width}+1")

    def range_index(self, name: str) -> int:
        for i, policy in enumerate(self.ranges):
            if policy.name == name:
                return i
        raise PolicyError(f"unknown range policy {name!r}")

    def set_index(self, name: str) -> int:
        for i, policy in enumerate(self.sets):
            if policy.name == name:
                return i
        raise PolicyError(f"unknown set policy {name!r}")

    def requested_ranges(self, requested: SatisfiedPolicies) -> list[int]:
        return [i for i, r in enumerate(self.ranges) if r.name in requested]

    def requested_sets(self, requested: SatisfiedPolicies) -> list[int]:
        return [i for i, s in enumerate(self.sets) if s.name in requested]

    def validate_request(self, requested: SatisfiedPolicies) -> None:
        known = {p.name for p in (*self.ranges, *self.sets)}
        unknown = [n for n in requested if n not in known]
        if unknown:
            raise PolicyError(f"unknown policies requested: {unknown}")

    def validate_attributes(self, attrs: UserAttributes) -> None:
        for name in attrs.range_values:
            self.range_index(name)
        for name in attrs.set_items:
            self.set_index(name)


def satisfies(
    attrs: UserAttributes,
    universe: PolicyUniverse,
    requested: SatisfiedPolicies,
) -> SatisfactionResult:
    """Check ``attrs`` against every requested policy and collect range witnesses."""
    universe.validate_request(requested)
    digits: dict[str, tuple[list[int], list[int]]] = {}
    for i in universe.requested_ranges(requested):
        policy = universe.ranges[i]
        value = attrs.range_values.get(policy.name)
        if value is None or not policy.contains(value):
            return SatisfactionResult(ok=False, failed=policy.name)
        digits[policy.name] = (
            digit_decompose(value - policy.lower, universe.base, universe.width),
            digit_decompose(value - policy.upper + universe.span, universe.base, universe.width),
        )
    for i in universe.requested_sets(requested):
        policy = universe.sets[i]
        if attrs.set_items.get(policy.name) not in policy.items:
            return SatisfactionResult(ok=False, failed=policy.name)
    return SatisfactionResult(ok=True, digits=digits)
