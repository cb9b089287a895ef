"""End-to-end scenario: every protocol once, then a double spend and its deanonymisation."""

from __future__ import annotations

import logging
import tomllib
from collections.abc import Callable, Mapping
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any

from elaunira.eticket.config import Settings
from elaunira.eticket.exceptions import PolicyError, ProtocolError, RepeatVerifier
from elaunira.eticket.policy import PolicyUniverse, SatisfiedPolicies, UserAttributes, parse_attributes, parse_universe
from elaunira.eticket.scheme import (
    CentralAuthority,
    Channel,
    Seller,
    User,
    Verifier,
    deanonymize,
    detect_double_spend,
    issue_ticket,
    publish,
    register_seller,
    register_user,
    validate_ticket,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Scenario:
    universe: PolicyUniverse
    seller_id: str
    seller_validity: str
    user_id: str
    user_validity: str
    attributes: UserAttributes
    service: str
    price: str
    ticket_validity: str
    requested: SatisfiedPolicies
    verifier_id: str


SCENARIO_TABLES = ("seller", "user", "ticket", "verifier")


def parse_scenario(document: Mapping[str, Any]) -> Scenario:
    missing = [name for name in SCENARIO_TABLES if name not in document]
    if missing:
        raise PolicyError(f"scenario is missing the {', '.join(missing)} table(s)")
    try:
        seller, user, ticket = document["seller"], document["user"], document["ticket"]
        return Scenario(
            universe=parse_universe(document),
            seller_id=str(seller["id"]),
            seller_validity=str(seller["validity"]),
            user_id=str(user["id"]),
            user_validity=str(user["validity"]),
            attributes=parse_attributes(user),
            service=str(ticket["service"]),
            price=str(ticket["price"]),
            ticket_validity=str(ticket["validity"]),
            requested=SatisfiedPolicies(tuple(map(str, ticket.get("policies", ())))),
            verifier_id=str(document["verifier"]["id"]),
        )
    except KeyError as e:
        raise PolicyError(f"scenario is missing {e.args[0]!r}") from e


def load_scenario(path: str | Path | None = None) -> Scenario:
    """Read a scenario file, the bundled (2,4) scenario when ``path`` is None."""
    if path is None:
        source = resources.files("elaunira.eticket").joinpath("data", "default.toml")
        return parse_scenario(tomllib.loads(source.read_text(encoding="utf-8")))
    with open(path, "rb") as f:
        return parse_scenario(tomllib.load(f))


@dataclass
class DemoReport:
    echo: Callable[[str], None] | None = None
    steps: list[str] = field(default_factory=list)
    digest: str = ""

    def step(self, text: str) -> None:
        logger.info("%s", text)
        self.steps.append(text)
        if self.echo is not None:
            self.echo(text)


def run_demo(
    scenario: Scenario,
    settings: Settings,
    echo: Callable[[str], None] | None = None,
) -> DemoReport:
    """Run the scenario, raising the failing step's error.

    Two gates share the verifier id and table; the second is shown a copy
    of the ticket from a cloned wallet, which must be caught and traced back
    to the registered user.
    """
    report = DemoReport(echo=echo)
    say = report.step

    ca = CentralAuthority.setup(scenario.universe, settings.group_config(), settings.rng(0))
    channel = Channel(ca.group)
    say(f"setup: {ca.group}, {len(scenario.universe.ranges)} ranges, {len(scenario.universe.sets)} sets")

    seller = Seller(ca.params, scenario.seller_id, settings.rng(1))
    register_seller(ca, seller, scenario.seller_validity, channel)
    say(f"register-seller: {scenario.seller_id} certified")

    user = User(ca.params, scenario.user_id, scenario.attributes, settings.rng(2))
    register_user(ca, user, scenario.user_validity, channel)
    say(f"register-user: {scenario.user_id} certified")

    publish(ca, seller, user)
    ticket = issue_ticket(
        user,
        seller,
        scenario.requested,
        service=scenario.service,
        price=scenario.price,
        validity=scenario.ticket_validity,
        channel=channel,
    )
    say(f"issue: {ticket.service} ticket for {ticket.price}, policies {', '.join(ticket.policies) or '-'}")

    gate = Verifier(ca.params, scenario.verifier_id, settings.rng(3))
    validate_ticket(user, gate, channel=channel)
    say(f"validate: accepted at {scenario.verifier_id}")

    try:
        validate_ticket(user, gate, channel=channel)
    except RepeatVerifier:
        say(f"revalidate: user refused a second show at {scenario.verifier_id}")
    else:
        raise ProtocolError("second show at the same verifier was not refused", step="validate")

    clone = user.clone_wallet(settings.rng(4))
    second_gate = Verifier(ca.params, scenario.verifier_id, settings.rng(5), table=gate.table)
    validate_ticket(clone, second_gate, channel=channel)
    say(f"validate: copied ticket accepted at a second {scenario.verifier_id} gate")

    hits = detect_double_spend(gate.table)
    if len(hits) != 1:
        raise ProtocolError(f"expected one double-spend hit, found {len(hits)}", step="detect")
    say("detect: one double-spent ticket")

    recovered = deanonymize(hits[0], verifier_id=scenario.verifier_id)
    if recovered.encode() != user.public_key.encode() or ca.lookup_user(recovered) != scenario.user_id:
        raise ProtocolError("recovered key does not match the registered user", step="detect")
    say(f"deanonymize: double spender is {scenario.user_id}")

    report.digest = channel.digest()
    say(f"trace: {report.digest}")
    return report


__all__ = ["DemoReport", "Scenario", "load_scenario", "parse_scenario", "run_demo"]
