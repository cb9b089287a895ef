"""Proof shown to a verifier when a ticket is spent."""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import partial
from typing import TYPE_CHECKING

from elaunira.eticket.groups import GElem, GTElem
from elaunira.eticket.zkp.transcript import challenge

if TYPE_CHECKING:
    from elaunira.eticket.scheme.models import Ticket
    from elaunira.eticket.scheme.params import Params


@dataclass(frozen=True)
class ProofU3:
    """Serial commitment ``D``, double-spend tag ``E``, blinded ticket ``F`` and their proof.

    ``W`` is ``J^omega_u``.
    """

    M: GElem
    D: GElem
    Ps: GElem
    E: GElem
    F: GElem
    J: GElem
    W: GElem
    R: GTElem
    c: int
    s_bar: int
    x_bar: int
    s_hat: int
    pi_bar: int
    lambda_bar: int
    omega_bar: int
    pi_shift_bar: int
    d_bar: int


def _ticket_relation(params: Params, F: GElem, Ps: GElem, seller_key: GElem, psi: int) -> GTElem:
    rho = params.gens.rho
    denominator = params.gens.g0.pair(rho) * Ps.pair(rho) * params.gens.g3.pair(rho) ** psi
    return F.pair(seller_key) / denominator


def prove_u3(
    params: Params,
    ticket: Ticket,
    x_u: int,
    verifier_id: str,
    nonce: int,
    rng: random.Random,
    *,
    seller_key: GElem | None = None,
    pi: int | None = None,
) -> ProofU3:
    """Prove possession of ``ticket`` to the verifier that sent ``nonce``.

    ``pi`` overrides the blinding exponent of ``F``.
    """
    group = params.group
    order = group.order
    gens = params.gens
    g, rho, vartheta, xi = gens.g, gens.rho, gens.vartheta, gens.xi
    rand = partial(group.random_scalar, rng)
    if seller_key is None:
        seller_key = params.sellers[ticket.seller_id]
    base_v = params.verifier_base(verifier_id)
    s_u, d_u, omega = ticket.s, ticket.d, ticket.omega

    if pi is None:
        pi = rand()
    lam = rand()
    D = g**s_u
    Ps = xi**x_u * gens.g1**d_u
    E = xi**x_u * base_v ** (nonce * s_u)
    F = ticket.T * vartheta**pi
    J = g**pi * vartheta**lam
    W = J**omega
    R = _ticket_relation(params, F, Ps, seller_key, ticket.psi)
    M = group.random_element(rng)

    x_n, s_n, pi_n, pi_s_n, lam_n, omega_n, d_n = (rand() for _ in range(7))
    D_tilde = g**s_n
    Ps_tilde = xi**x_n * gens.g1**d_n
    E_tilde = xi**x_n * base_v ** (nonce * s_n)
    J_tilde = g**pi_n * vartheta**lam_n
    W_tilde = J**omega_n
    R_tilde = (
        gens.g2.pair(rho) ** s_n
        * F.pair(rho) ** -omega_n
        * vartheta.pair(rho) ** pi_s_n
        * vartheta.pair(seller_key) ** pi_n
    )
    c = challenge(group, M, D, Ps, E, J, W, R, D_tilde, Ps_tilde, E_tilde, J_tilde, W_tilde, R_tilde)

    s_bar = (s_n - c * s_u) % order
    return ProofU3(
        M=M,
        D=D,
        Ps=Ps,
        E=E,
        F=F,
        J=J,
        W=W,
        R=R,
        c=c,
        s_bar=s_bar,
        x_bar=(x_n - c * x_u) % order,
        s_hat=nonce * s_bar % order,
        pi_bar=(pi_n - c * pi) % order,
        lambda_bar=(lam_n - c * lam) % order,
        omega_bar=(omega_n - c * omega) % order,
        pi_shift_bar=(pi_s_n - c * pi * omega) % order,
        d_bar=(d_n - c * d_u) % order,
    )


def verify_u3(
    params: Params,
    proof: ProofU3,
    seller_key: GElem,
    nonce: int,
    verifier_id: str,
    psi: int,
) -> bool:
    group = params.group
    gens = params.gens
    g, rho, vartheta, xi = gens.g, gens.rho, gens.vartheta, gens.xi
    c = proof.c

    if proof.R != _ticket_relation(params, proof.F, proof.Ps, seller_key, psi):
        return False
    if proof.s_hat != nonce * proof.s_bar % group.order:
        return False
    D_tilde = g**proof.s_bar * proof.D**c
    Ps_tilde = xi**proof.x_bar * gens.g1**proof.d_bar * proof.Ps**c
    E_tilde = xi**proof.x_bar * params.verifier_base(verifier_id) ** proof.s_hat * proof.E**c
    J_tilde = g**proof.pi_bar * vartheta**proof.lambda_bar * proof.J**c
    W_tilde = proof.J**proof.omega_bar * proof.W**c
    R_tilde = (
        gens.g2.pair(rho) ** proof.s_bar
        * proof.F.pair(rho) ** -proof.omega_bar
        * vartheta.pair(rho) ** proof.pi_shift_bar
        * vartheta.pair(seller_key) ** proof.pi_bar
        * proof.R**c
    )
    expected = challenge(
        group, proof.M, proof.D, proof.Ps, proof.E, proof.J, proof.W, proof.R,
        D_tilde, Ps_tilde, E_tilde, J_tilde, W_tilde, R_tilde,
    )  # fmt: skip
    return c == expected
