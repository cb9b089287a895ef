"""Proofs exchanged while a ticket is bought.

The seller first proves it holds an authority credential. The user then
proves its credential, a fresh pseudonym and, for each requested policy,
that the certified attribute lies in the range (two base-q digit
decompositions tagged by the range tags) or in the set (a blinded item tag).

Every nonce is used under a single challenge.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import partial
from typing import TYPE_CHECKING

from elaunira.eticket.exceptions import PolicyError, ProverPreconditionFailed
from elaunira.eticket.groups import GElem, GTElem
from elaunira.eticket.policy import SatisfiedPolicies, satisfies
from elaunira.eticket.zkp.transcript import challenge

if TYPE_CHECKING:
    from elaunira.eticket.scheme.models import SellerCredential, UserCredential
    from elaunira.eticket.scheme.params import Params


@dataclass(frozen=True)
class ProofS2:
    """Blinded seller credential ``Q = sigma_S * vartheta^z`` and three Schnorr legs."""

    M: GElem
    Q: GElem
    Z: GElem
    Gamma: GElem
    Omega: GTElem
    c1: int
    s1: int
    s2: int
    c2: int
    s1_hat: int
    s2_hat: int
    c3: int
    r1: int
    r2: int
    r3: int
    r4: int
    r5: int
    validity: str


@dataclass(frozen=True)
class DigitProof:
    """One digit of each decomposition: tags ``A``/``A_shift`` and their pairing relations."""

    A: GElem
    A_shift: GElem
    V: GTElem
    V_tilde: GTElem
    V_shift: GTElem
    V_shift_tilde: GTElem
    challenge: int
    t_bar: int
    t_shift_bar: int
    w_hat: int
    w_shift_hat: int


@dataclass(frozen=True)
class RangeProof:
    """Commitment ``Z = g^gamma h^a`` and the proof that ``a`` is in the interval."""

    name: str
    Z: GElem
    gamma_bar: int
    challenge: int
    gamma_check: int
    a_check: int
    a_shift_check: int
    w_bar: tuple[int, ...]
    w_shift_bar: tuple[int, ...]
    digits: tuple[DigitProof, ...]


@dataclass(frozen=True)
class SetProof:
    """Blinded item tag ``B = eta_ij^e`` with ``W = e(B, eta_tilde_i)``."""

    name: str
    B: GElem
    W: GTElem
    e_hat: int


@dataclass(frozen=True)
class ProofU2:
    M: GElem
    C: GElem
    D: GElem
    Phi: GElem
    Y: GElem
    R: GTElem
    c_bar: int
    x_bar: int
    d_bar: int
    r_bar: int
    c_u_bar: int
    alpha_bar: int
    beta_bar: int
    alpha_shift_bar: int
    beta_shift_bar: int
    a_bar: tuple[int, ...]
    item_bar: tuple[int, ...]
    ranges: tuple[RangeProof, ...]
    sets: tuple[SetProof, ...]
    validity: str
    policies: SatisfiedPolicies


def _omega(params: Params, Q: GElem, validity: str) -> GTElem:
    return Q.pair(params.g_tilde) / params.credential_denominator(validity)


def prove_s2(params: Params, credential: SellerCredential, x_s: int, rng: random.Random) -> ProofS2:
    group = params.group
    order = group.order
    gens = params.gens
    g, vartheta = gens.g, gens.vartheta
    rand = partial(group.random_scalar, rng)

    z, v = rand(), rand()
    z_c, v_c = z * credential.c % order, v * credential.c % order
    Q = credential.sigma * vartheta**z
    Z = g**z * vartheta**v
    Gamma = g**z_c * vartheta**v_c
    Omega = _omega(params, Q, credential.validity)
    M = group.random_element(rng)

    z_n, v_n = rand(), rand()
    c1 = challenge(group, M, Z, g**z_n * vartheta**v_n)
    zc_n, vc_n = rand(), rand()
    c2 = challenge(group, M, Gamma, g**zc_n * vartheta**vc_n)

    x_n, r_n, c_n, zc_n3, z_n3 = rand(), rand(), rand(), rand(), rand()
    Omega_prime = (
        gens.rho.pair(g) ** x_n
        * gens.frak_g.pair(g) ** r_n
        * Q.pair(g) ** -c_n
        * vartheta.pair(g) ** zc_n3
        * vartheta.pair(params.g_tilde) ** z_n3
    )
    c3 = challenge(group, M, Omega, Omega_prime)

    return ProofS2(
        M=M,
        Q=Q,
        Z=Z,
        Gamma=Gamma,
        Omega=Omega,
        c1=c1,
        s1=(z_n - c1 * z) % order,
        s2=(v_n - c1 * v) % order,
        c2=c2,
        s1_hat=(zc_n - c2 * z_c) % order,
        s2_hat=(vc_n - c2 * v_c) % order,
        c3=c3,
        r1=(x_n - c3 * x_s) % order,
        r2=(r_n - c3 * credential.r) % order,
        r3=(c_n - c3 * credential.c) % order,
        r4=(zc_n3 - c3 * z_c) % order,
        r5=(z_n3 - c3 * z) % order,
        validity=credential.validity,
    )


def verify_s2(params: Params, proof: ProofS2) -> bool:
    group = params.group
    gens = params.gens
    g, vartheta = gens.g, gens.vartheta
    if proof.Omega != _omega(params, proof.Q, proof.validity):
        return False
    Z_prime = g**proof.s1 * vartheta**proof.s2 * proof.Z**proof.c1
    if proof.c1 != challenge(group, proof.M, proof.Z, Z_prime):
        return False
    Gamma_prime = g**proof.s1_hat * vartheta**proof.s2_hat * proof.Gamma**proof.c2
    if proof.c2 != challenge(group, proof.M, proof.Gamma, Gamma_prime):
        return False
    Omega_prime = (
        gens.rho.pair(g) ** proof.r1
        * gens.frak_g.pair(g) ** proof.r2
        * proof.Q.pair(g) ** -proof.r3
        * vartheta.pair(g) ** proof.r4
        * vartheta.pair(params.g_tilde) ** proof.r5
        * proof.Omega**proof.c3
    )
    return proof.c3 == challenge(group, proof.M, proof.Omega, Omega_prime)


def _power_product(params: Params, exponents) -> GElem:
    acc = params.group.identity()
    for tag, e in zip(params.power_tags, exponents, strict=True):
        acc = acc * tag**e
    return acc


def prove_u2(
    params: Params,
    credential: UserCredential,
    x_u: int,
    requested: SatisfiedPolicies,
    rng: random.Random,
) -> tuple[ProofU2, int]:
    """Build the ticket request proof.

    Returns the proof and the pseudonym exponent ``d`` with ``Y = xi^x_u g1^d``.
    """
    universe = params.universe
    result = satisfies(credential.attributes, universe, requested)
    if not result:
        raise ProverPreconditionFailed(f"attributes do not satisfy policy {result.failed!r}")

    group = params.group
    order = group.order
    gens = params.gens
    g, h, vartheta = gens.g, gens.h, gens.vartheta
    e_hh = h.pair(h)
    rand = partial(group.random_scalar, rng)
    a_values, item_values = params.attribute_messages(credential.attributes)
    c_u, r_u = credential.c, credential.r

    d, alpha, beta = rand(), rand(), rand()
    alpha_s, beta_s = alpha * c_u % order, beta * c_u % order
    C = credential.sigma * vartheta**alpha
    D = g**alpha * vartheta**beta
    Phi = g**alpha_s * vartheta**beta_s
    Y = gens.xi**x_u * gens.g1**d
    R = C.pair(params.g_tilde) / params.credential_denominator(credential.validity)
    M = group.random_element(rng)

    x_n, d_n, r_n, c_n = rand(), rand(), rand(), rand()
    alpha_n, beta_n, alpha_s_n, beta_s_n = rand(), rand(), rand(), rand()
    a_n = [rand() for _ in a_values]
    item_n = [rand() for _ in item_values]
    Y_tilde = gens.xi**x_n * gens.g1**d_n
    D_tilde = g**alpha_n * vartheta**beta_n
    Phi_tilde = g**alpha_s_n * vartheta**beta_s_n
    R_prime = gens.xi.pair(g) ** x_n * gens.frak_g.pair(g) ** r_n
    for ghat, n in zip(gens.ghat, a_n, strict=True):
        R_prime = R_prime * ghat.pair(g) ** n
    for eta_i, n in zip(gens.eta_sets, item_n, strict=True):
        R_prime = R_prime * eta_i.pair(g) ** n
    R_prime = R_prime * C.pair(g) ** -c_n * vartheta.pair(g) ** alpha_s_n * vartheta.pair(params.g_tilde) ** alpha_n

    range_idx = universe.requested_ranges(requested)
    set_idx = universe.requested_sets(requested)

    gammas = {l: rand() for l in range_idx}
    gamma_n = {l: rand() for l in range_idx}
    Zs = {l: g ** gammas[l] * h ** a_values[l] for l in range_idx}
    Z_primes = [g ** gamma_n[l] * h ** a_n[l] for l in range_idx]

    es = {i: rand() for i in set_idx}
    e_n = {i: rand() for i in set_idx}
    Bs, Ws, W_tildes = {}, {}, []
    for i in set_idx:
        policy = universe.sets[i]
        eta_i = gens.eta_sets[i]
        Bs[i] = params.item_tags[i][credential.attributes.set_items[policy.name]] ** es[i]
        Ws[i] = Bs[i].pair(params.set_keys[i])
        W_tildes.append(gens.eta.pair(eta_i) ** e_n[i] * Bs[i].pair(eta_i) ** -item_n[i])

    # verify_u2 hashes the same terms in the same order.
    c_bar = challenge(
        group,
        M, Y, Y_tilde, D, D_tilde, Phi, Phi_tilde, C, R, R_prime,
        *(Zs[l] for l in range_idx),
        *Z_primes,
        *(Bs[i] for i in set_idx),
        *(Ws[i] for i in set_idx),
        *W_tildes,
    )  # fmt: skip

    span = universe.span
    ranges = []
    for l in range_idx:
        policy = universe.ranges[l]
        a = credential.attributes.range_values[policy.name]
        w, w_s = result.digits[policy.name]
        gamma_c, a_c = rand(), rand()
        w_n = [rand() for _ in w]
        w_s_n = [rand() for _ in w_s]
        Z_check = g**gamma_c * h**a_c
        Z_tilde = g**gamma_c * _power_product(params, w_n)
        Z_tilde_s = g**gamma_c * _power_product(params, w_s_n)
        e_l = challenge(group, M, Zs[l], Z_check, Z_tilde, Z_tilde_s)

        digits = []
        for wi, wi_s in zip(w, w_s, strict=True):
            t, t_s = rand(), rand()
            A = params.range_tags[wi] ** t
            A_s = params.range_tags[wi_s] ** t_s
            V = e_hh**t * A.pair(h) ** -wi
            V_s = e_hh**t_s * A_s.pair(h) ** -wi_s
            t_n, t_s_n, wd_n, wd_s_n = rand(), rand(), rand(), rand()
            V_tilde = e_hh**t_n * A.pair(h) ** -wd_n
            V_s_tilde = e_hh**t_s_n * A_s.pair(h) ** -wd_s_n
            d_li = challenge(group, M, A, A_s, V, V_s, V_tilde, V_s_tilde)
            digits.append(
                DigitProof(
                    A=A,
                    A_shift=A_s,
                    V=V,
                    V_tilde=V_tilde,
                    V_shift=V_s,
                    V_shift_tilde=V_s_tilde,
                    challenge=d_li,
                    t_bar=(t_n - d_li * t) % order,
                    t_shift_bar=(t_s_n - d_li * t_s) % order,
                    w_hat=(wd_n - d_li * wi) % order,
                    w_shift_hat=(wd_s_n - d_li * wi_s) % order,
                )
            )

        ranges.append(
            RangeProof(
                name=policy.name,
                Z=Zs[l],
                gamma_bar=(gamma_n[l] - c_bar * gammas[l]) % order,
                challenge=e_l,
                gamma_check=(gamma_c - e_l * gammas[l]) % order,
                a_check=(a_c - e_l * (a - policy.lower)) % order,
                a_shift_check=(a_c - e_l * (a - policy.upper + span)) % order,
                w_bar=tuple((n - e_l * wi) % order for n, wi in zip(w_n, w, strict=True)),
                w_shift_bar=tuple((n - e_l * wi) % order for n, wi in zip(w_s_n, w_s, strict=True)),
                digits=tuple(digits),
            )
        )

    sets = [
        SetProof(
            name=universe.sets[i].name,
            B=Bs[i],
            W=Ws[i],
            e_hat=(e_n[i] - c_bar * es[i]) % order,
        )
        for i in set_idx
    ]

    proof = ProofU2(
        M=M,
        C=C,
        D=D,
        Phi=Phi,
        Y=Y,
        R=R,
        c_bar=c_bar,
        x_bar=(x_n - c_bar * x_u) % order,
        d_bar=(d_n - c_bar * d) % order,
        r_bar=(r_n - c_bar * r_u) % order,
        c_u_bar=(c_n - c_bar * c_u) % order,
        alpha_bar=(alpha_n - c_bar * alpha) % order,
        beta_bar=(beta_n - c_bar * beta) % order,
        alpha_shift_bar=(alpha_s_n - c_bar * alpha_s) % order,
        beta_shift_bar=(beta_s_n - c_bar * beta_s) % order,
        a_bar=tuple((n - c_bar * a) % order for n, a in zip(a_n, a_values, strict=True)),
        item_bar=tuple((n - c_bar * m) % order for n, m in zip(item_n, item_values, strict=True)),
        ranges=tuple(ranges),
        sets=tuple(sets),
        validity=credential.validity,
        policies=requested,
    )
    return proof, d


def verify_u2(params: Params, proof: ProofU2) -> bool:
    """Check a ticket request proof.

    Each range runs two sub-proofs: the digit recomposition of ``Z`` under
    its range challenge, and one tag proof per digit under the digit's own
    challenge. The two use independent responses, so nothing here checks
    that the digit behind a tag is the digit in the recomposition.
    """
    universe = params.universe
    group = params.group
    gens = params.gens
    g, h, vartheta = gens.g, gens.h, gens.vartheta
    e_hh = h.pair(h)

    try:
        universe.validate_request(proof.policies)
    except PolicyError:
        return False
    range_idx = universe.requested_ranges(proof.policies)
    set_idx = universe.requested_sets(proof.policies)
    if (
        [universe.ranges[l].name for l in range_idx] != [r.name for r in proof.ranges]
        or [universe.sets[i].name for i in set_idx] != [s.name for s in proof.sets]
        or len(proof.a_bar) != len(gens.ghat)
        or len(proof.item_bar) != len(gens.eta_sets)
    ):
        return False

    if proof.R != proof.C.pair(params.g_tilde) / params.credential_denominator(proof.validity):
        return False

    c = proof.c_bar
    Y_tilde = gens.xi**proof.x_bar * gens.g1**proof.d_bar * proof.Y**c
    D_tilde = g**proof.alpha_bar * vartheta**proof.beta_bar * proof.D**c
    Phi_tilde = g**proof.alpha_shift_bar * vartheta**proof.beta_shift_bar * proof.Phi**c
    R_prime = gens.xi.pair(g) ** proof.x_bar * gens.frak_g.pair(g) ** proof.r_bar
    for ghat, a in zip(gens.ghat, proof.a_bar, strict=True):
        R_prime = R_prime * ghat.pair(g) ** a
    for eta_i, e in zip(gens.eta_sets, proof.item_bar, strict=True):
        R_prime = R_prime * eta_i.pair(g) ** e
    R_prime = (
        R_prime
        * proof.C.pair(g) ** -proof.c_u_bar
        * vartheta.pair(g) ** proof.alpha_shift_bar
        * vartheta.pair(params.g_tilde) ** proof.alpha_bar
        * proof.R**c
    )
    Z_primes = [
        g**rp.gamma_bar * h ** proof.a_bar[l] * rp.Z**c
        for l, rp in zip(range_idx, proof.ranges, strict=True)
    ]
    W_tildes = []
    for i, sp in zip(set_idx, proof.sets, strict=True):
        eta_i = gens.eta_sets[i]
        if sp.W != sp.B.pair(params.set_keys[i]):
            return False
        W_tildes.append(gens.eta.pair(eta_i) ** sp.e_hat * sp.B.pair(eta_i) ** -proof.item_bar[i] * sp.W**c)

    expected = challenge(
        group,
        proof.M, proof.Y, Y_tilde, proof.D, D_tilde, proof.Phi, Phi_tilde, proof.C, proof.R, R_prime,
        *(rp.Z for rp in proof.ranges),
        *Z_primes,
        *(sp.B for sp in proof.sets),
        *(sp.W for sp in proof.sets),
        *W_tildes,
    )  # fmt: skip
    if c != expected:
        return False

    span = universe.span
    width = universe.width
    for l, rp in zip(range_idx, proof.ranges, strict=True):
        policy = universe.ranges[l]
        if len(rp.digits) != width or len(rp.w_bar) != width or len(rp.w_shift_bar) != width:
            return False
        e_l = rp.challenge
        low = rp.Z * h ** -policy.lower
        high = rp.Z * h ** (span - policy.upper)
        Z_check = g**rp.gamma_check * h**rp.a_check * low**e_l
        if Z_check != g**rp.gamma_check * h**rp.a_shift_check * high**e_l:
            return False
        Z_tilde = g**rp.gamma_check * _power_product(params, rp.w_bar) * low**e_l
        Z_tilde_s = g**rp.gamma_check * _power_product(params, rp.w_shift_bar) * high**e_l
        if e_l != challenge(group, proof.M, rp.Z, Z_check, Z_tilde, Z_tilde_s):
            return False

        for dp in rp.digits:
            if dp.V != dp.A.pair(params.h_tilde) or dp.V_shift != dp.A_shift.pair(params.h_tilde):
                return False
            V_tilde = e_hh**dp.t_bar * dp.A.pair(h) ** -dp.w_hat * dp.V**dp.challenge
            V_s_tilde = e_hh**dp.t_shift_bar * dp.A_shift.pair(h) ** -dp.w_shift_hat * dp.V_shift**dp.challenge
            if V_tilde != dp.V_tilde or V_s_tilde != dp.V_shift_tilde:
                return False
            if dp.challenge != challenge(group, proof.M, dp.A, dp.A_shift, dp.V, dp.V_shift, V_tilde, V_s_tilde):
                return False
    return True
