from __future__ import annotations

import dataclasses
import logging
import random
from dataclasses import dataclass

import pytest

from elaunira.eticket.groups import PRIME_64, GElem, Group, GroupConfig, GTElem, load_group
from elaunira.eticket.policy import PolicyUniverse, RangePolicy, SatisfiedPolicies, SetPolicy, UserAttributes
from elaunira.eticket.scheme import (
    CentralAuthority,
    Seller,
    User,
    publish,
    register_seller,
    register_user,
)

CREDENTIAL_VALIDITY = "2099-12-31"


@pytest.fixture(autouse=True)
def reset_package_logger():
    """Undo ``configure_logging`` so handlers never outlive a captured stream."""
    logger = logging.getLogger("elaunira")
    handlers, level = list(logger.handlers), logger.level
    yield
    logger.handlers[:] = handlers
    logger.setLevel(level)


@pytest.fixture
def group101() -> Group:
    return load_group(GroupConfig.exponent(101))


@pytest.fixture
def group64() -> Group:
    return load_group(GroupConfig.exponent(PRIME_64))


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240601)


@pytest.fixture
def small_universe() -> PolicyUniverse:
    """One range and one set, small enough for p = 101."""
    return PolicyUniverse(
        ranges=(RangePolicy("age", 12, 18),),
        sets=(SetPolicy("profession", ("student", "senior", "apprentice")),),
        base=2,
    )


@pytest.fixture
def wide_universe() -> PolicyUniverse:
    """Two ranges and four sets."""
    return PolicyUniverse(
        ranges=(RangePolicy("age", 16, 26), RangePolicy("distance_km", 0, 50)),
        sets=(
            SetPolicy("profession", ("student", "apprentice", "senior")),
            SetPolicy("region", ("north", "south", "east", "west")),
            SetPolicy("accessibility", ("none", "wheelchair", "visual")),
            SetPolicy("membership", ("basic", "gold")),
        ),
    )


@dataclass
class World:
    ca: CentralAuthority
    seller: Seller
    user: User
    seed: int

    @property
    def params(self):
        return self.ca.params

    @property
    def group(self) -> Group:
        return self.ca.group

    def everything(self) -> SatisfiedPolicies:
        universe = self.params.universe
        return SatisfiedPolicies(tuple(p.name for p in (*universe.ranges, *universe.sets)))

    def rng(self, offset: int) -> random.Random:
        return random.Random(self.seed * 1000 + offset)


def _attributes_for(universe: PolicyUniverse) -> UserAttributes:
    return UserAttributes(
        range_values={r.name: r.lower + r.length // 2 for r in universe.ranges},
        set_items={s.name: s.items[0] for s in universe.sets},
    )


@pytest.fixture
def make_world():
    """Factory for an authority with one registered seller and user, parameters published."""

    def build(
        group: Group,
        universe: PolicyUniverse,
        *,
        attributes: UserAttributes | None = None,
        seed: int = 1,
    ) -> World:
        world_rng = random.Random(seed)
        ca = CentralAuthority.setup(universe, group, world_rng)
        seller = Seller(ca.params, "kiosk-1", random.Random(seed + 1))
        register_seller(ca, seller, CREDENTIAL_VALIDITY)
        user = User(
            ca.params,
            "rider-1",
            attributes if attributes is not None else _attributes_for(universe),
            random.Random(seed + 2),
        )
        register_user(ca, user, CREDENTIAL_VALIDITY)
        publish(ca, seller, user)
        return World(ca=ca, seller=seller, user=user, seed=seed)

    return build


def perturb(value, group: Group):
    """A different value of the same kind, for mutation tests."""
    if isinstance(value, bool):
        return not value
    if isinstance(value, int):
        return (value + 1) % group.order
    if isinstance(value, GElem):
        return value * group.generator("perturb")
    if isinstance(value, GTElem):
        return value * group.generator("perturb").pair(group.generator("g"))
    if isinstance(value, str):
        return value + "x"
    if isinstance(value, tuple) and value and isinstance(value[0], int):
        return (perturb(value[0], group), *value[1:])
    raise TypeError(f"cannot perturb {type(value).__name__}")


def mutations(proof, group: Group, *, skip: tuple[str, ...] = ()):
    """Yield ``(field name, proof with that field perturbed)`` for every mutable field."""
    for f in dataclasses.fields(proof):
        if f.name in skip:
            continue
        value = getattr(proof, f.name)
        try:
            changed = perturb(value, group)
        except TypeError:
            continue
        yield f.name, dataclasses.replace(proof, **{f.name: changed})


@pytest.fixture
def mutate():
    return mutations


@pytest.fixture
def tweak():
    return perturb
