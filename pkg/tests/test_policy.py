from __future__ import annotations

import pytest

from elaunira.eticket.exceptions import OutOfRange, PolicyError, RangeTooWide
from elaunira.eticket.policy import (
    PolicyUniverse,
    RangePolicy,
    SatisfiedPolicies,
    SetPolicy,
    UserAttributes,
    choose_base_params,
    digit_decompose,
    load_attributes,
    load_universe,
    parse_universe,
    recompose,
    satisfies,
)

TEEN = RangePolicy("age", 12, 18)


class TestRangePolicy:
    def test_half_open(self):
        assert TEEN.contains(12)
        assert TEEN.contains(17)
        assert not TEEN.contains(18)
        assert TEEN.length == 6

    def test_empty_interval(self):
        with pytest.raises(PolicyError):
            RangePolicy("age", 18, 18)


class TestSetPolicy:
    def test_rejects_duplicates_and_empty(self):
        with pytest.raises(PolicyError):
            SetPolicy("profession", ("student", "student"))
        with pytest.raises(PolicyError):
            SetPolicy("profession", ())


class TestBaseParams:
    def test_minimal_width(self):
        assert choose_base_params([TEEN], 2) == (2, 3)
        assert choose_base_params([RangePolicy("age", 0, 8)], 2) == (2, 3)
        assert choose_base_params([RangePolicy("age", 0, 9)], 3) == (3, 2)

    def test_order_bound(self):
        with pytest.raises(RangeTooWide):
            choose_base_params([RangePolicy("km", 0, 50)], 2, order=101)
        assert choose_base_params([TEEN], 2, order=101) == (2, 3)

    def test_base_too_small(self):
        with pytest.raises(PolicyError):
            choose_base_params([TEEN], 1)


class TestDigits:
    def test_decompose(self):
        assert digit_decompose(4, 2, 3) == [0, 0, 1]
        assert digit_decompose(6, 2, 3) == [0, 1, 1]
        assert digit_decompose(0, 3, 2) == [0, 0]
        assert digit_decompose(5, 2, 3) == [1, 0, 1]

    def test_out_of_range(self):
        with pytest.raises(OutOfRange):
            digit_decompose(8, 2, 3)
        with pytest.raises(OutOfRange):
            digit_decompose(-1, 2, 3)

    @pytest.mark.parametrize("base,width", [(2, 5), (3, 4), (10, 2)])
    def test_recompose_inverts(self, base, width):
        for value in range(base**width):
            digits = digit_decompose(value, base, width)
            assert all(0 <= d < base for d in digits)
            assert recompose(digits, base) == value


class TestSatisfies:
    universe = PolicyUniverse(ranges=(TEEN,), sets=(SetPolicy("profession", ("student", "senior")),))

    def test_range_witnesses(self):
        result = satisfies(UserAttributes({"age": 16}), self.universe, SatisfiedPolicies(("age",)))
        assert result
        assert result.digits["age"] == ([0, 0, 1], [0, 1, 1])

    def test_upper_bound_exclusive(self):
        result = satisfies(UserAttributes({"age": 18}), self.universe, SatisfiedPolicies(("age",)))
        assert not result
        assert result.failed == "age"

    def test_set_membership(self):
        attrs = UserAttributes(set_items={"profession": "senior"})
        assert satisfies(attrs, self.universe, SatisfiedPolicies(("profession",)))
        attrs = UserAttributes(set_items={"profession": "pilot"})
        assert not satisfies(attrs, self.universe, SatisfiedPolicies(("profession",)))

    def test_missing_attribute_fails_only_its_policy(self):
        attrs = UserAttributes(set_items={"profession": "student"})
        assert not satisfies(attrs, self.universe, SatisfiedPolicies(("age",)))
        assert satisfies(attrs, self.universe, SatisfiedPolicies(("profession",)))

    def test_nothing_requested(self):
        assert satisfies(UserAttributes(), self.universe, SatisfiedPolicies())

    def test_unknown_policy(self):
        with pytest.raises(PolicyError):
            satisfies(UserAttributes(), self.universe, SatisfiedPolicies(("height",)))


class TestUniverse:
    def test_default_width(self):
        universe = PolicyUniverse(ranges=(TEEN, RangePolicy("km", 0, 50)))
        assert universe.width == 6
        assert universe.span == 64

    def test_unique_names(self):
        with pytest.raises(PolicyError):
            PolicyUniverse(ranges=(TEEN,), sets=(SetPolicy("age", ("x",)),))

    def test_width_must_cover(self):
        with pytest.raises(PolicyError):
            PolicyUniverse(ranges=(TEEN,), width=2)

    def test_empty_sets(self):
        universe = PolicyUniverse(ranges=(TEEN,))
        assert universe.sets == ()
        assert universe.requested_sets(SatisfiedPolicies(("age",))) == []

    def test_check_order(self):
        universe = PolicyUniverse(ranges=(RangePolicy("km", 0, 50),))
        with pytest.raises(RangeTooWide):
            universe.check_order(101)
        universe.check_order(131)

    def test_validate_attributes(self):
        universe = PolicyUniverse(ranges=(TEEN,))
        universe.validate_attributes(UserAttributes({"age": 3}))
        with pytest.raises(PolicyError):
            universe.validate_attributes(UserAttributes({"height": 3}))


def test_satisfied_policies_sorted_and_encoded():
    policies = SatisfiedPolicies(("region", "age", "region"))
    assert policies.names == ("age", "region")
    assert policies.encode() == b"age\x1fregion"
    assert "age" in policies
    assert len(policies) == 2


class TestLoader:
    def test_parse_universe(self):
        universe = parse_universe(
            {
                "universe": {"base": 3},
                "range": [{"name": "age", "lower": 12, "upper": 18}],
                "set": [{"name": "profession", "items": ["student", "senior"]}],
            }
        )
        assert universe.base == 3
        assert universe.width == 2
        assert universe.ranges[0] == TEEN
        assert universe.sets[0].items == ("student", "senior")

    def test_missing_key(self):
        with pytest.raises(PolicyError):
            parse_universe({"range": [{"name": "age", "lower": 1}]})

    def test_load_files(self, tmp_path):
        policies = tmp_path / "policies.toml"
        policies.write_text(
            '[[range]]\nname = "age"\nlower = 12\nupper = 18\n\n[[set]]\nname = "region"\nitems = ["north"]\n'
        )
        attributes = tmp_path / "rider.toml"
        attributes.write_text('[ranges]\nage = 16\n\n[sets]\nregion = "north"\n')
        universe = load_universe(policies)
        attrs = load_attributes(attributes)
        assert satisfies(attrs, universe, SatisfiedPolicies(("age", "region")))
