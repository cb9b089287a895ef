"""Public system parameters and the authority's master secret."""

from __future__ import annotations

import dataclasses
from collections.abc import Mapping
from dataclasses import dataclass, field
from functools import cached_property

from elaunira.eticket.groups import GElem, Group, GTElem
from elaunira.eticket.policy import PolicyUniverse, UserAttributes
from elaunira.eticket.sigs import BBSPlusPublicKey, bb_verify
from elaunira.eticket.zkp.transcript import Transcript


@dataclass(frozen=True)
class Generators:
    """Independent generators of G, derived from public labels."""

    g: GElem
    g0: GElem
    g1: GElem
    g2: GElem
    g3: GElem
    h: GElem
    frak_g: GElem
    eta: GElem
    xi: GElem
    rho: GElem
    vartheta: GElem
    ghat: tuple[GElem, ...]
    eta_sets: tuple[GElem, ...]

    NAMED = ("g", "g0", "g1", "g2", "g3", "h", "frak_g", "eta", "xi", "rho", "vartheta")

    @classmethod
    def derive(cls, group: Group, n_ranges: int, n_sets: int) -> Generators:
        named = {name: group.generator(name) for name in cls.NAMED}
        return cls(
            **named,
            ghat=tuple(group.generator(f"ghat/{i}") for i in range(n_ranges)),
            eta_sets=tuple(group.generator(f"eta/{i}") for i in range(n_sets)),
        )

    def extend(self, group: Group, n_ranges: int, n_sets: int) -> Generators:
        """Append generators for policies added after setup."""
        ghat = self.ghat + tuple(group.generator(f"ghat/{i}") for i in range(len(self.ghat), n_ranges))
        eta_sets = self.eta_sets + tuple(
            group.generator(f"eta/{i}") for i in range(len(self.eta_sets), n_sets)
        )
        return dataclasses.replace(self, ghat=ghat, eta_sets=eta_sets)


@dataclass(frozen=True)
class MasterSecret:
    x: int
    y: int
    mu: tuple[int, ...]


@dataclass(frozen=True)
class Params:
    """Everything the authority publishes.

    ``range_tags[i]`` is ``h^(1/(y+i))`` for each digit value, ``power_tags[i]``
    is ``h^(q^i)``, ``set_keys[i]`` is ``eta_i^mu_i`` and ``item_tags[i]`` maps
    each item of set ``i`` to ``eta^(1/(mu_i + H(item)))``. ``sellers`` is the
    directory of registered seller keys.
    """

    group: Group
    universe: PolicyUniverse
    gens: Generators
    g_tilde: GElem
    h_tilde: GElem
    range_tags: tuple[GElem, ...]
    power_tags: tuple[GElem, ...]
    set_keys: tuple[GElem, ...]
    item_tags: tuple[Mapping[str, GElem], ...]
    sellers: Mapping[str, GElem] = field(default_factory=dict)

    def with_seller(self, seller_id: str, public_key: GElem) -> Params:
        return dataclasses.replace(self, sellers={**self.sellers, seller_id: public_key})

    def hash_text(self, text: str) -> int:
        return self.group.hash_to_scalar(text.encode())

    def item_scalar(self, item: str | None) -> int:
        return 0 if item is None else self.hash_text(item)

    def verifier_base(self, verifier_id: str) -> GElem:
        return self.group.hash_to_group(verifier_id.encode())

    def ticket_digest(self, policies: bytes, price: str, service: str, validity: str) -> int:
        """``H(P_U || Price || Serv || VP_T)``."""
        return Transcript(self.group).absorb(policies, price, service, validity).challenge()

    def attribute_messages(self, attributes: UserAttributes) -> tuple[list[int], list[int]]:
        """Credential slots for every range and set, zero where the user has no value."""
        order = self.group.order
        ranges = [attributes.range_values.get(r.name, 0) % order for r in self.universe.ranges]
        sets = [self.item_scalar(attributes.set_items.get(s.name)) for s in self.universe.sets]
        return ranges, sets

    @cached_property
    def seller_credential_key(self) -> BBSPlusPublicKey:
        gens = self.gens
        return BBSPlusPublicKey(pk=self.g_tilde, generators=(gens.g, gens.g0, gens.frak_g, gens.g1))

    @cached_property
    def user_credential_key(self) -> BBSPlusPublicKey:
        gens = self.gens
        return BBSPlusPublicKey(
            pk=self.g_tilde,
            generators=(gens.g, gens.g0, gens.frak_g, gens.g1, *gens.ghat, *gens.eta_sets),
        )

    def ticket_key(self, seller_key: GElem) -> BBSPlusPublicKey:
        gens = self.gens
        return BBSPlusPublicKey(pk=seller_key, generators=(gens.rho, gens.g0, gens.g2, gens.g1, gens.g3))

    @cached_property
    def credential_base(self) -> GTElem:
        """``e(g0, g)``, the constant factor stripped from credential proofs."""
        return self.gens.g0.pair(self.gens.g)

    def credential_denominator(self, validity: str) -> GTElem:
        """``e(g0, g) * e(g1, g)^H(VP)``."""
        return self.credential_base * self.gens.g1.pair(self.gens.g) ** self.hash_text(validity)

    def check_tags(self) -> bool:
        """Verify every published range and item tag against its public key."""
        h = self.gens.h
        for i, tag in enumerate(self.range_tags):
            if not bb_verify(self.h_tilde, i, tag, g1=h, g2=h):
                return False
        for i, policy in enumerate(self.universe.sets):
            eta_i = self.gens.eta_sets[i]
            for item in policy.items:
                tag = self.item_tags[i][item]
                if not bb_verify(self.set_keys[i], self.hash_text(item), tag, g1=self.gens.eta, g2=eta_i):
                    return False
        return all(
            tag == h ** (self.universe.base**i) for i, tag in enumerate(self.power_tags)
        ) and len(self.power_tags) == self.universe.width
