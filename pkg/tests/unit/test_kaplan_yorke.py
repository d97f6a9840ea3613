"""Tests for the Kaplan-Yorke formula and the entropy bound."""

import math

import numpy as np
import pytest
from pydantic import ValidationError

from chua_lyapunov.linalg3 import SymmetricSpectrum
from chua_lyapunov.lyapunov import OrderedExponents, entropy_upper_bound, kaplan_yorke


@pytest.mark.unit
class TestKaplanYorke:
    """Tests for kaplan_yorke."""

    @pytest.mark.parametrize(
        ("exponents", "expected"),
        [
            ((-1.0, -2.0, -3.0), 0.0),
            ((1.0, 2.0, 3.0), 3.0),
            ((1.0, 0.0, -1.0), 3.0),
            ((0.0, 0.0, 0.0), 3.0),
            ((1.0, -0.5, -1.0), 2.5),
            ((0.5, -1.0, -2.0), 1.5),
            ((0.0, -1.0, -2.0), 1.0),
            ((0.9, 0.0, -15.0), 2.06),
        ],
    )
    def test_should_match_known_values(
        self, exponents: tuple[float, float, float], expected: float
    ) -> None:
        """Verify boundary and interior cases, including the >= 0 partial-sum rule."""
        assert kaplan_yorke(exponents) == pytest.approx(expected, abs=1e-12)

    def test_should_sort_unordered_input(self) -> None:
        """Verify the input is re-sorted descending before use."""
        assert kaplan_yorke((-1.0, 1.0, -0.5)) == pytest.approx(2.5)

    def test_should_accept_ordered_exponents(self) -> None:
        """Verify the OrderedExponents model is accepted."""
        assert kaplan_yorke(OrderedExponents(values=(1.0, -0.5, -1.0))) == pytest.approx(2.5)

    def test_should_reject_non_finite_values(self) -> None:
        """Verify NaN exponents raise ValueError."""
        with pytest.raises(ValueError, match="finite"):
            kaplan_yorke((math.nan, 0.0, -1.0))

    def test_should_reject_wrong_length(self) -> None:
        """Verify exactly three exponents are required."""
        with pytest.raises(ValueError, match="three"):
            kaplan_yorke((1.0, -1.0))

    def test_should_stay_in_range_for_random_triples(self, rng: np.random.Generator) -> None:
        """Verify 0 <= d <= 3 and the integer part matches the partial sums."""
        for triple in rng.normal(scale=5.0, size=(1000, 3)):
            d = kaplan_yorke(triple)
            values = sorted(triple, reverse=True)
            j = max((m for m in range(1, 4) if math.fsum(values[:m]) >= 0.0), default=0)

            assert 0.0 <= d <= 3.0
            if j in (0, 3):
                assert d == float(j)
            else:
                assert j <= d <= j + 1

    def test_should_be_scale_invariant(self, rng: np.random.Generator) -> None:
        """Verify d(c * lambda) = d(lambda) for c > 0."""
        for triple in rng.normal(size=(200, 3)):
            c = float(rng.uniform(0.01, 100.0))
            assert kaplan_yorke(c * triple) == pytest.approx(kaplan_yorke(triple), rel=1e-12)

    def test_should_be_monotone_in_each_exponent(self, rng: np.random.Generator) -> None:
        """Verify raising one exponent never lowers the dimension."""
        for triple in rng.normal(size=(300, 3)):
            k = int(rng.integers(0, 3))
            raised = triple.copy()
            raised[k] += float(rng.uniform(0.0, 1.0))
            assert kaplan_yorke(raised) >= kaplan_yorke(triple) - 1e-12


@pytest.mark.unit
class TestOrderedExponents:
    """Tests for the OrderedExponents model."""

    def test_should_sort_from_unsorted(self) -> None:
        """Verify from_unsorted orders values descending."""
        exps = OrderedExponents.from_unsorted([-1.0, 2.0, 0.5])

        assert exps.values == (2.0, 0.5, -1.0)

    def test_should_reject_ascending_values(self) -> None:
        """Verify direct construction requires descending order."""
        with pytest.raises(ValidationError):
            OrderedExponents(values=(-1.0, 0.0, 1.0))


@pytest.mark.unit
class TestEntropyUpperBound:
    """Tests for the entropy bound."""

    def test_should_sum_positive_entries(self) -> None:
        """Verify only positive values contribute."""
        assert entropy_upper_bound([2.0, 0.5, -3.0]) == pytest.approx(2.5)

    def test_should_be_zero_without_positive_entries(self) -> None:
        """Verify an all-negative spectrum bounds the entropy by 0."""
        assert entropy_upper_bound(SymmetricSpectrum(-0.1, -1.0, -2.0)) == 0.0
