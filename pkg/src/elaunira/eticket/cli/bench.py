"""Timing harness for the per-phase cost of the scheme.

Each phase is run ``iters`` times on one prepared fixture and reported as
the mean in milliseconds. Sweeps time request proofs for growing digit
counts and set sizes.
"""

from __future__ import annotations

import csv
import logging
import statistics
import time
from collections.abc import Callable, Iterable
from dataclasses import astuple, dataclass, fields
from typing import TextIO

from elaunira.eticket.config import Settings
from elaunira.eticket.groups import Group, load_group
from elaunira.eticket.policy import PolicyUniverse, RangePolicy, SatisfiedPolicies, SetPolicy, UserAttributes
from elaunira.eticket.scheme import (
    CentralAuthority,
    Seller,
    User,
    publish,
    register_seller,
    register_user,
    setup,
    user_verify_ticket,
)
from elaunira.eticket.zkp import prove_u2, prove_u3, verify_s2, verify_u2, verify_u3

logger = logging.getLogger(__name__)

#: Iterations below which timings are reported with a warning.
MIN_ITERS = 20

RANGE_SWEEP = (5, 10, 20)
SET_SWEEP = (10, 100)

PHASES = (
    ("initialise the system", "CA"),
    ("generate PoK Π_S^2", "Seller"),
    ("verify Π_S^2", "User"),
    ("generate ticket request", "User"),
    ("verify Π_U^2", "Seller"),
    ("generate ticket", "Seller"),
    ("verify ticket", "User"),
    ("generate ticket transcript", "User"),
    ("verify transcript", "Verifier"),
)


@dataclass(frozen=True)
class BenchRow:
    phase: str
    entity: str
    backend: str
    N1: int
    N2: int
    k: int
    set_size: int
    iters: int
    mean_ms: float


def bench_universe(n_ranges: int, n_sets: int, k: int, set_size: int) -> PolicyUniverse:
    """Ranges of width exactly ``2^k`` and sets of ``set_size`` items."""
    return PolicyUniverse(
        ranges=tuple(RangePolicy(f"range-{i}", 0, 2**k) for i in range(n_ranges)),
        sets=tuple(SetPolicy(f"set-{i}", tuple(f"item-{j}" for j in range(set_size))) for i in range(n_sets)),
        base=2,
        width=k,
    )


def bench_attributes(universe: PolicyUniverse) -> UserAttributes:
    return UserAttributes(
        range_values={r.name: (r.lower + r.upper) // 2 for r in universe.ranges},
        set_items={s.name: s.items[-1] for s in universe.sets},
    )


def mean_ms(fn: Callable[[], object], iters: int) -> float:
    samples = []
    for _ in range(iters):
        start = time.perf_counter()
        fn()
        samples.append((time.perf_counter() - start) * 1000)
    return statistics.mean(samples)


@dataclass
class _Fixture:
    ca: CentralAuthority
    seller: Seller
    user: User
    requested: SatisfiedPolicies


def _fixture(universe: PolicyUniverse, group: Group, settings: Settings) -> _Fixture:
    ca = CentralAuthority.setup(universe, group, settings.rng(0))
    seller = Seller(ca.params, "bench-seller", settings.rng(1))
    register_seller(ca, seller, "2099-12-31")
    user = User(ca.params, "bench-user", bench_attributes(universe), settings.rng(2))
    register_user(ca, user, "2099-12-31")
    publish(ca, seller, user)
    requested = SatisfiedPolicies(tuple(p.name for p in (*universe.ranges, *universe.sets)))
    return _Fixture(ca, seller, user, requested)


def bench_phases(
    settings: Settings,
    *,
    n_ranges: int = 2,
    n_sets: int = 4,
    k: int = 10,
    set_size: int = 10,
    iters: int = MIN_ITERS,
) -> list[BenchRow]:
    """Time each issuing and validation phase once per iteration."""
    group = load_group(settings.group_config())
    universe = bench_universe(n_ranges, n_sets, k, set_size)
    fx = _fixture(universe, group, settings)
    params, rng = fx.ca.params, settings.rng(6)
    seller, user = fx.seller, fx.user
    seller_key = seller.public_key

    offer = seller.offer()
    request = user.request_ticket(offer, fx.requested, service="bench", price="0", validity="2099-06-30").proof
    grant = seller.sign_ticket(request, service="bench", price="0", validity="2099-06-30")
    ticket = user.accept_ticket(grant)
    nonce = group.random_scalar(rng)
    shown = prove_u3(params, ticket, user.x_u, "bench-gate", nonce, rng)

    runs: dict[str, Callable[[], object]] = {
        "initialise the system": lambda: setup(universe, group, rng),
        "generate PoK Π_S^2": seller.offer,
        "verify Π_S^2": lambda: verify_s2(params, offer.proof),
        "generate ticket request": lambda: prove_u2(params, user.credential, user.x_u, fx.requested, rng),
        "verify Π_U^2": lambda: verify_u2(params, request),
        "generate ticket": lambda: seller.sign_ticket(request, service="bench", price="0", validity="2099-06-30"),
        "verify ticket": lambda: user_verify_ticket(params, ticket, seller_key),
        "generate ticket transcript": lambda: prove_u3(params, ticket, user.x_u, "bench-gate", nonce, rng),
        "verify transcript": lambda: verify_u3(params, shown, seller_key, nonce, "bench-gate", ticket.psi),
    }
    rows = []
    for phase, entity in PHASES:
        mean = mean_ms(runs[phase], iters)
        logger.info("%s (%s): %.2f ms", phase, entity, mean)
        rows.append(BenchRow(phase, entity, settings.backend.value, n_ranges, n_sets, k, set_size, iters, mean))
    return rows


def _request_time(settings: Settings, group: Group, universe: PolicyUniverse, iters: int) -> float:
    fx = _fixture(universe, group, settings)
    rng = settings.rng(7)
    return mean_ms(lambda: prove_u2(fx.ca.params, fx.user.credential, fx.user.x_u, fx.requested, rng), iters)


def bench_sweeps(
    settings: Settings,
    *,
    ks: Iterable[int] = RANGE_SWEEP,
    set_sizes: Iterable[int] = SET_SWEEP,
    k: int = 10,
    iters: int = MIN_ITERS,
) -> list[BenchRow]:
    """Request proof cost for one range at each ``k`` and one set at each size."""
    group = load_group(settings.group_config())
    backend = settings.backend.value
    rows = []
    for width in ks:
        mean = _request_time(settings, group, bench_universe(1, 0, width, 1), iters)
        logger.info("range proof creation, k=%d: %.2f ms", width, mean)
        rows.append(BenchRow("range proof creation", "User", backend, 1, 0, width, 0, iters, mean))
    for size in set_sizes:
        mean = _request_time(settings, group, bench_universe(0, 1, k, size), iters)
        logger.info("set membership proof creation, %d items: %.2f ms", size, mean)
        rows.append(BenchRow("set membership proof creation", "User", backend, 0, 1, k, size, iters, mean))
    return rows


def run_bench(
    settings: Settings,
    *,
    n_ranges: int = 2,
    n_sets: int = 4,
    k: int = 10,
    set_size: int = 10,
    iters: int = MIN_ITERS,
    sweeps: bool = True,
) -> list[BenchRow]:
    if iters < 1:
        raise ValueError("iters must be at least 1")
    if iters < MIN_ITERS:
        logger.warning("Averaging over %d iterations, fewer than %d", iters, MIN_ITERS)
    rows = bench_phases(settings, n_ranges=n_ranges, n_sets=n_sets, k=k, set_size=set_size, iters=iters)
    if sweeps:
        rows += bench_sweeps(settings, k=k, iters=iters)
    return rows


def write_csv(rows: Iterable[BenchRow], out: TextIO) -> None:
    writer = csv.writer(out)
    writer.writerow([f.name for f in fields(BenchRow)])
    for row in rows:
        values = list(astuple(row))
        values[-1] = f"{row.mean_ms:.3f}"
        writer.writerow(values)
