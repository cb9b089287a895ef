from __future__ import annotations

import dataclasses

import pytest

from elaunira.eticket.exceptions import InvalidMessage
from elaunira.eticket.sigs import (
    BBKeyPair,
    BBSPlusKeyPair,
    BBSPlusPublicKey,
    bb_sign,
    bb_verify,
    bbsplus_sign,
    bbsplus_verify,
)


class TestBB:
    def test_known_signature(self, group101):
        g1 = group101.element(1)
        key = BBKeyPair.from_secret(5, g1, g1)
        assert bb_sign(key, 7).raw == 59

    def test_pole(self, group101):
        g1 = group101.element(1)
        with pytest.raises(InvalidMessage):
            bb_sign(BBKeyPair.from_secret(5, g1, g1), 96)

    def test_completeness(self, group64, rng):
        g1, g2 = group64.generator("g1"), group64.generator("g2")
        for _ in range(100):
            key = BBKeyPair.generate(g1, g2, rng)
            m = group64.random_scalar(rng)
            assert bb_verify(key.pk, m, bb_sign(key, m), g1=g1, g2=g2)

    def test_mutations(self, group64, rng):
        g1, g2 = group64.generator("g1"), group64.generator("g2")
        key = BBKeyPair.generate(g1, g2, rng)
        sig = bb_sign(key, 42)
        assert not bb_verify(key.pk, 42, sig * g1, g1=g1, g2=g2)
        assert not bb_verify(key.pk, 43, sig, g1=g1, g2=g2)
        assert not bb_verify(key.pk * g2, 42, sig, g1=g1, g2=g2)
        assert not bb_verify(key.pk, 42, group64.identity(), g1=g1, g2=g2)

    def test_exponent_oracle(self, group101):
        h = group101.element(7)
        key = BBKeyPair.from_secret(10, h, h)
        tag = bb_sign(key, 1)
        assert (10 + 1) * tag.raw % 101 == h.raw


@pytest.fixture
def bbs_key(group64, rng):
    generators = tuple(group64.generator(f"bbs/{i}") for i in range(6))
    return BBSPlusKeyPair.generate(generators, rng)


class TestBBSPlus:
    def test_known_signature(self, group101, rng):
        one = group101.element(1)
        key = BBSPlusKeyPair.from_secret(5, (one, one, one, one))
        sig = bbsplus_sign(key, [4], rng, w=3, s=2)
        assert sig.sigma.raw == 64
        assert bbsplus_verify(key.public, [4], sig)

    def test_completeness(self, group64, rng, bbs_key):
        for _ in range(100):
            messages = [group64.random_scalar(rng) for _ in range(3)]
            sig = bbsplus_sign(bbs_key, messages, rng)
            assert bbsplus_verify(bbs_key.public, messages, sig)

    def test_commitment(self, group64, rng, bbs_key):
        commitment = group64.generator("Y") ** 77
        sig = bbsplus_sign(bbs_key, [1, 2, 3], rng, commitment=commitment)
        assert bbsplus_verify(bbs_key.public, [1, 2, 3], sig, commitment=commitment)
        assert not bbsplus_verify(bbs_key.public, [1, 2, 3], sig)

    def test_fresh_randomness(self, rng, bbs_key):
        a = bbsplus_sign(bbs_key, [1, 2, 3], rng)
        b = bbsplus_sign(bbs_key, [1, 2, 3], rng)
        assert a.w != b.w and a.s != b.s and a.sigma != b.sigma

    def test_message_mutations(self, rng, bbs_key):
        sig = bbsplus_sign(bbs_key, [1, 2, 3], rng)
        assert not bbsplus_verify(bbs_key.public, [2, 1, 3], sig)
        for i in range(3):
            messages = [1, 2, 3]
            messages[i] += 1
            assert not bbsplus_verify(bbs_key.public, messages, sig)
        assert not bbsplus_verify(bbs_key.public, [1, 2], sig)

    def test_signature_mutations(self, group64, rng, bbs_key, tweak):
        sig = bbsplus_sign(bbs_key, [1, 2, 3], rng)
        for f in dataclasses.fields(sig):
            changed = dataclasses.replace(sig, **{f.name: tweak(getattr(sig, f.name), group64)})
            assert not bbsplus_verify(bbs_key.public, [1, 2, 3], changed), f.name

    def test_explicit_pole(self, group101, rng):
        one = group101.element(1)
        key = BBSPlusKeyPair.from_secret(5, (one, one, one, one))
        with pytest.raises(InvalidMessage):
            bbsplus_sign(key, [4], rng, w=96)

    def test_public_key_shape(self, group64):
        g = group64.generator("g")
        with pytest.raises(ValueError):
            BBSPlusPublicKey(pk=g, generators=(g, g))
        key = BBSPlusPublicKey(pk=g, generators=(g, g, g))
        with pytest.raises(ValueError):
            key.block([1], 1)
