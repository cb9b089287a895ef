"""Proofs of key knowledge sent to the authority at registration."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import TYPE_CHECKING

from elaunira.eticket.groups import GElem
from elaunira.eticket.zkp.transcript import challenge

if TYPE_CHECKING:
    from elaunira.eticket.scheme.params import Params


@dataclass(frozen=True)
class ProofS1:
    """Schnorr proof of ``x_s`` with ``Y_S = rho^x_s``."""

    c: int
    s: int
    M: GElem
    Y_S: GElem


@dataclass(frozen=True)
class ProofU1:
    """Schnorr proofs of ``x_u`` with ``Y_U = xi^x_u`` and ``r`` with ``R = frak_g^r``."""

    M: GElem
    Y_U: GElem
    R: GElem
    c1: int
    c2: int
    s1: int
    s2: int


def prove_s1(params: Params, x_s: int, rng: random.Random) -> ProofS1:
    group = params.group
    rho = params.gens.rho
    Y_S = rho**x_s
    M = group.random_element(rng)
    t_s = group.random_scalar(rng)
    c = challenge(group, M, Y_S, rho**t_s)
    return ProofS1(c=c, s=(t_s - c * x_s) % group.order, M=M, Y_S=Y_S)


def verify_s1(params: Params, proof: ProofS1) -> bool:
    rho = params.gens.rho
    T_S = rho**proof.s * proof.Y_S**proof.c
    return proof.c == challenge(params.group, proof.M, proof.Y_S, T_S)


def prove_u1(params: Params, x_u: int, r: int, rng: random.Random) -> ProofU1:
    group = params.group
    order = group.order
    xi, frak_g = params.gens.xi, params.gens.frak_g
    Y_U, R = xi**x_u, frak_g**r
    M = group.random_element(rng)
    x_nonce, r_nonce = group.random_scalar(rng), group.random_scalar(rng)
    c1 = challenge(group, M, Y_U, xi**x_nonce)
    c2 = challenge(group, M, R, frak_g**r_nonce)
    return ProofU1(
        M=M,
        Y_U=Y_U,
        R=R,
        c1=c1,
        c2=c2,
        s1=(x_nonce - c1 * x_u) % order,
        s2=(r_nonce - c2 * r) % order,
    )


def verify_u1(params: Params, proof: ProofU1) -> bool:
    group = params.group
    xi, frak_g = params.gens.xi, params.gens.frak_g
    Y_prime = xi**proof.s1 * proof.Y_U**proof.c1
    R_prime = frak_g**proof.s2 * proof.R**proof.c2
    return proof.c1 == challenge(group, proof.M, proof.Y_U, Y_prime) and proof.c2 == challenge(
        group, proof.M, proof.R, R_prime
    )
