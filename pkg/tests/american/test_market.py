"""Tests for markets"""

# Copyright (c) nlrepr Development Team.
# Distributed under the terms of the Modified BSD License.

import numpy as np
import pytest

from nlrepr.american import MarketSpec, build_crr, crr_put_value
from nlrepr.tree import AdaptedProcess, build_chain
from nlrepr.utils.exceptions import ParameterError


def test_crr_prices():
    market = build_crr(2, 100.0, 1.1, 0.9, 0.02)
    np.testing.assert_allclose(market.prices.values, [100, 110, 90, 121, 99, 99, 81])
    assert market.crr.q == pytest.approx(0.6)
    np.testing.assert_allclose(market.tree.prob[1:3], [0.6, 0.4])


def test_crr_arbitrage():
    with pytest.raises(ParameterError):
        build_crr(2, 100.0, 1.1, 0.9, 0.2)
    with pytest.raises(ParameterError):
        build_crr(2, 100.0, 0.9, 1.1, 0.02)


def test_crr_put_value_one_step():
    params = build_crr(1, 100.0, 1.1, 0.9, 0.02).crr
    # exercise now pays 5, waiting pays 0.4 * 15 / 1.02
    assert crr_put_value(params, 105.0) == pytest.approx(max(5.0, 0.4 * 15 / 1.02))
    assert crr_put_value(params, 80.0) == 0.0


def test_discount():
    tree = build_chain(2)
    market = MarketSpec(AdaptedProcess(tree, [100.0, 100.0, 100.0]), 0.25)
    np.testing.assert_allclose(market.discount, [1.0, 0.8, 0.64])
    np.testing.assert_allclose(market.payoff(90.0), [-10.0, -8.0, -6.4])
    np.testing.assert_allclose(market.payoff(90.0, positive_part=True), [0.0, 0.0, 0.0])


def test_market_checks():
    tree = build_chain(1)
    with pytest.raises(ParameterError):
        MarketSpec(AdaptedProcess(tree, [1.0, 1.0]), 0.0)
    with pytest.raises(ParameterError):
        MarketSpec(AdaptedProcess(tree, [1.0, -1.0]), 0.1)
