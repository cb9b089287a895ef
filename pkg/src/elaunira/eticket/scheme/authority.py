"""The central authority: system setup, registration and policy updates."""

from __future__ import annotations

import random
from collections.abc import Callable
from dataclasses import replace

from elaunira.eticket.exceptions import BadProof, ETicketError, PoleCollision, PolicyError
from elaunira.eticket.groups import GElem, Group, GroupConfig, load_group
from elaunira.eticket.log import LoggingMixin
from elaunira.eticket.policy import PolicyUniverse, UserAttributes
from elaunira.eticket.scheme.models import (
    CAState,
    SellerCredential,
    SellerRecord,
    UserRecord,
)
from elaunira.eticket.scheme.params import Generators, MasterSecret, Params
from elaunira.eticket.sigs import BBKeyPair, BBSPlusKeyPair, bb_sign, bbsplus_sign
from elaunira.eticket.sigs.bbsplus import MAX_RESAMPLE
from elaunira.eticket.wire import messages
from elaunira.eticket.zkp import verify_s1, verify_u1

#: Out-of-band check of a registrant: ``(identity, attributes or None) -> accepted``.
Authenticator = Callable[[str, UserAttributes | None], bool]


def accept_all(identity: str, attributes: UserAttributes | None) -> bool:
    return True


def _collides_range(y: int, base: int, order: int) -> bool:
    return any((y + i) % order == 0 for i in range(base))


def _collides_set(mu: int, hashed_items: list[int], order: int) -> bool:
    return any((mu + m) % order == 0 for m in hashed_items)


def _draw(rng: random.Random, group: Group, collides: Callable[[int], bool], what: str) -> int:
    for _ in range(MAX_RESAMPLE):
        value = group.random_scalar(rng)
        if not collides(value):
            return value
    raise PoleCollision(f"{what} collides with a tag denominator after {MAX_RESAMPLE} draws")


def derive_params(
    group: Group,
    universe: PolicyUniverse,
    secret: MasterSecret,
    *,
    gens: Generators | None = None,
    sellers: dict[str, GElem] | None = None,
) -> Params:
    """Compute every published tag from the master secret."""
    if gens is None:
        gens = Generators.derive(group, len(universe.ranges), len(universe.sets))
    else:
        gens = gens.extend(group, len(universe.ranges), len(universe.sets))
    h, eta = gens.h, gens.eta
    range_key = BBKeyPair.from_secret(secret.y, h, h)
    range_tags = tuple(bb_sign(range_key, i) for i in range(universe.base))
    power_tags = tuple(h ** (universe.base**i) for i in range(universe.width))
    set_keys = []
    item_tags = []
    for i, policy in enumerate(universe.sets):
        key = BBKeyPair.from_secret(secret.mu[i], eta, gens.eta_sets[i])
        set_keys.append(key.pk)
        item_tags.append({item: bb_sign(key, group.hash_to_scalar(item.encode())) for item in policy.items})
    return Params(
        group=group,
        universe=universe,
        gens=gens,
        g_tilde=gens.g**secret.x,
        h_tilde=range_key.pk,
        range_tags=range_tags,
        power_tags=power_tags,
        set_keys=tuple(set_keys),
        item_tags=tuple(item_tags),
        sellers=dict(sellers or {}),
    )


def setup(
    universe: PolicyUniverse,
    group: Group | GroupConfig,
    rng: random.Random,
) -> tuple[MasterSecret, Params]:
    """Draw the master secret and publish the parameters for ``universe``."""
    if isinstance(group, GroupConfig):
        group = load_group(group)
    order = group.order
    universe.check_order(order)
    x = group.random_scalar(rng)
    y = _draw(rng, group, lambda v: _collides_range(v, universe.base, order), "y")
    mu = tuple(
        _draw(rng, group, lambda v, p=policy: _collides_set(v, _hashed(group, p.items), order), f"mu[{policy.name}]")
        for policy in universe.sets
    )
    secret = MasterSecret(x=x, y=y, mu=mu)
    return secret, derive_params(group, universe, secret)


def _hashed(group: Group, items) -> list[int]:
    return [group.hash_to_scalar(item.encode()) for item in items]


class CentralAuthority(LoggingMixin):
    """Holds the master secret, certifies sellers and users and publishes ``params``.

    :param params: The published parameters.
    :param secret: The master secret matching ``params``.
    :param rng: Randomness for credential exponents.
    :param authenticate: Out-of-band vetting of identities and attributes.
    """

    def __init__(
        self,
        params: Params,
        secret: MasterSecret,
        rng: random.Random,
        *,
        authenticate: Authenticator = accept_all,
        sellers: dict[str, SellerRecord] | None = None,
        users: dict[str, UserRecord] | None = None,
    ) -> None:
        self.params = params
        self.secret = secret
        self.rng = rng
        self.authenticate = authenticate
        self.sellers: dict[str, SellerRecord] = dict(sellers or {})
        self.users: dict[str, UserRecord] = dict(users or {})

    @classmethod
    def setup(
        cls,
        universe: PolicyUniverse,
        group: Group | GroupConfig,
        rng: random.Random,
        *,
        authenticate: Authenticator = accept_all,
    ) -> CentralAuthority:
        secret, params = setup(universe, group, rng)
        ca = cls(params, secret, rng, authenticate=authenticate)
        ca.log.info(
            "Initialised %s with %d range and %d set policies (q=%d, k=%d)",
            params.group,
            len(universe.ranges),
            len(universe.sets),
            universe.base,
            universe.width,
        )
        return ca

    @property
    def group(self) -> Group:
        return self.params.group

    def _signing_key(self, public) -> BBSPlusKeyPair:
        return BBSPlusKeyPair(sk=self.secret.x, public=public)

    def _admit(self, identity: str, attributes: UserAttributes | None) -> None:
        if not self.authenticate(identity, attributes):
            raise BadProof(f"{identity!r} was refused by out-of-band authentication")

    def register_seller(self, request: messages.SellerRegister) -> SellerCredential:
        """Check the seller's key proof and sign its credential.

        A second registration under the same id replaces the first.
        """
        self._admit(request.seller_id, None)
        if not verify_s1(self.params, request.proof):
            raise BadProof(f"key proof of seller {request.seller_id!r} does not verify")
        Y_S = request.proof.Y_S
        sig = bbsplus_sign(
            self._signing_key(self.params.seller_credential_key),
            [self.params.hash_text(request.validity)],
            self.rng,
            commitment=Y_S,
        )
        if request.seller_id in self.sellers:
            self.log.info("Replacing the registration of seller %s", request.seller_id)
        self.sellers[request.seller_id] = SellerRecord(request.seller_id, Y_S, request.validity)
        self.params = self.params.with_seller(request.seller_id, Y_S)
        self.log.info("Registered seller %s valid until %s", request.seller_id, request.validity)
        return SellerCredential(c=sig.w, r=sig.s, sigma=sig.sigma, validity=request.validity)

    def register_user(self, request: messages.UserRegister) -> messages.UserCredentialGrant:
        """Check the user's key proof and sign its credential over the certified attributes.

        The returned ``r`` is the authority's share of the blinding; the user
        adds its own ``r`` to it.
        """
        self._admit(request.user_id, request.attributes)
        self.params.universe.validate_attributes(request.attributes)
        if not verify_u1(self.params, request.proof):
            raise BadProof(f"key proof of user {request.user_id!r} does not verify")
        ranges, sets = self.params.attribute_messages(request.attributes)
        sig = bbsplus_sign(
            self._signing_key(self.params.user_credential_key),
            [self.params.hash_text(request.validity), *ranges, *sets],
            self.rng,
            commitment=request.proof.Y_U * request.proof.R,
        )
        if request.user_id in self.users:
            self.log.info("Replacing the registration of user %s", request.user_id)
        self.users[request.user_id] = UserRecord(
            user_id=request.user_id,
            attributes=request.attributes,
            public_key=request.proof.Y_U,
            sigma=sig.sigma,
            validity=request.validity,
        )
        self.log.info("Registered user %s valid until %s", request.user_id, request.validity)
        return messages.UserCredentialGrant(c=sig.w, r=sig.s, sigma=sig.sigma, validity=request.validity)

    def lookup_user(self, public_key: GElem) -> str | None:
        """The registered id behind ``Y_U``, used after deanonymisation."""
        for record in self.users.values():
            if record.public_key == public_key:
                return record.user_id
        return None

    def update_policies(self, universe: PolicyUniverse) -> Params:
        """Publish a changed universe without reissuing credentials.

        Existing policies keep their position and name; intervals may change
        and new policies may be appended. ``y`` and existing ``mu`` are kept
        unless they hit a pole of the new tags.
        """
        old = self.params.universe
        for kind, before, after in (("range", old.ranges, universe.ranges), ("set", old.sets, universe.sets)):
            if len(after) < len(before) or any(a.name != b.name for a, b in zip(before, after)):
                raise PolicyError(f"{kind} policies can only be appended, not removed or reordered")
        group = self.group
        order = group.order
        universe.check_order(order)
        y = self.secret.y
        if _collides_range(y, universe.base, order):
            self.log.warning("Range key collides with the new base, drawing a fresh one")
            y = _draw(self.rng, group, lambda v: _collides_range(v, universe.base, order), "y")
        mu = []
        for i, policy in enumerate(universe.sets):
            hashed = _hashed(group, policy.items)
            if i < len(self.secret.mu) and not _collides_set(self.secret.mu[i], hashed, order):
                mu.append(self.secret.mu[i])
            else:
                mu.append(_draw(self.rng, group, lambda v, h=hashed: _collides_set(v, h, order), f"mu[{policy.name}]"))
        self.secret = replace(self.secret, y=y, mu=tuple(mu))
        self.params = derive_params(
            group, universe, self.secret, gens=self.params.gens, sellers=dict(self.params.sellers)
        )
        self.log.info(
            "Updated policies: %d ranges, %d sets (q=%d, k=%d)",
            len(universe.ranges),
            len(universe.sets),
            universe.base,
            universe.width,
        )
        return self.params

    def state(self) -> CAState:
        return CAState(
            x=self.secret.x,
            y=self.secret.y,
            mu=self.secret.mu,
            sellers=tuple(self.sellers.values()),
            users=tuple(self.users.values()),
        )

    @classmethod
    def from_state(
        cls,
        params: Params,
        state: CAState,
        rng: random.Random,
        *,
        authenticate: Authenticator = accept_all,
    ) -> CentralAuthority:
        return cls(
            params,
            MasterSecret(x=state.x, y=state.y, mu=state.mu),
            rng,
            authenticate=authenticate,
            sellers={r.seller_id: r for r in state.sellers},
            users={r.user_id: r for r in state.users},
        )

    def handle(self, data: bytes) -> bytes:
        """Answer one registration message; failures become ``REGISTRATION_REJECTED``."""
        try:
            request = messages.parse(data, self.group)
            match request:
                case messages.SellerRegister():
                    reply = messages.SellerCredentialGrant(self.register_seller(request))
                case messages.UserRegister():
                    reply = self.register_user(request)
                case _:
                    raise BadProof(f"authority does not accept {type(request).__name__}")
        except ETicketError as e:
            self.log.error("Registration rejected: %s", e)
            reply = messages.RegistrationRejected(error=type(e).__name__, reason=str(e))
        return messages.serialize(reply, self.group)
