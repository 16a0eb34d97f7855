import math

import numpy as np
import pytest

from qmg.errors import (
    ContractViolationError,
    DegenerateStateError,
    ImproperStateError,
    ParameterRangeError,
    RepresentationError,
)
from qmg.numerics import Grid, RandomSource, integrate
from qmg.strategy import (
    Representation,
    RiskParams,
    Strategy,
    UNIT_RISK,
    buy_probability,
    hermite_function,
    moments,
    norm,
    normalize,
    parse_strategy,
    sample,
    sell_probability,
    to_demand_rep,
    to_supply_rep,
)

PHI_1 = 0.8413447460685429  # standard normal CDF at 1


def test_risk_params_derived_quantities():
    rp = RiskParams(hbar_e=1.0, theta=2.0)
    assert rp.omega == pytest.approx(math.pi)
    assert rp.h_e == pytest.approx(2 * math.pi)
    assert rp.hbar_eff == 1.0
    rp2 = RiskParams(hbar_e=1.0, theta=1.0, theta_nc=0.75)
    assert rp2.hbar_eff == 1.25


def test_risk_params_validation():
    with pytest.raises(ParameterRangeError):
        RiskParams(hbar_e=0.0, theta=1.0)
    with pytest.raises(ParameterRangeError):
        RiskParams(hbar_e=1.0, theta=-1.0)
    with pytest.raises(ParameterRangeError):
        RiskParams(hbar_e=1.0, theta=1.0, theta_nc=-0.1)


def test_gaussian_is_normalized_with_width_as_std():
    s = Strategy.gaussian(0.7, 0.4)
    g = s.default_grid()
    assert norm(s, g) == pytest.approx(1.0, abs=1e-12)
    mean, std = moments(s)
    assert mean == pytest.approx(0.7, abs=1e-12)
    assert std == pytest.approx(0.4, abs=1e-10)


def test_hermite_levels_orthonormal():
    g = Grid(-10.0, 10.0, 2001)
    for m in range(4):
        for n in range(4):
            hm = hermite_function(m, g.points)
            hn = hermite_function(n, g.points)
            val = integrate(hm * hn, g)
            assert val == pytest.approx(1.0 if m == n else 0.0, abs=1e-10)


def test_hermite_length_scale():
    rp = RiskParams.from_omega(1.0, 4.0)
    s = Strategy.hermite(0, rp)
    _, std = moments(s)
    # ground state std = sqrt(hbar / (2 m omega))
    assert std == pytest.approx(math.sqrt(1.0 / 8.0), abs=1e-9)


def test_buy_probability_matches_normal_cdf():
    # P(q <= ln c) for a unit gaussian demand strategy
    s = Strategy.gaussian(0.0, 1.0)
    assert buy_probability(s, 1.0) == pytest.approx(PHI_1, abs=1e-6)
    assert buy_probability(s, 0.0) == pytest.approx(0.5, abs=1e-9)


def test_buy_probability_requires_demand_rep():
    sup = Strategy.gaussian(0.0, 1.0, rep=Representation.SUPPLY)
    with pytest.raises(RepresentationError):
        buy_probability(sup, 0.0)


def test_sell_probability_of_self_dual_state():
    # width 1/sqrt(2) demand gaussian has the same supply density;
    # P(sell at log price ln c) = P(p <= -ln c)
    s = Strategy.gaussian(0.0, 1.0 / math.sqrt(2.0))
    assert sell_probability(s, 0.0) == pytest.approx(0.5, abs=1e-8)
    p = sell_probability(s, 1.0)  # z = -1 / (1/sqrt 2)
    from scipy.special import ndtr

    assert p == pytest.approx(float(ndtr(-math.sqrt(2.0))), abs=1e-8)


def test_supply_rep_of_displaced_gaussian():
    # demand gaussian(c, w, slope s) -> supply density normal(hbar s, hbar / 2w)
    s = Strategy.gaussian(1.5, 0.5, slope=-0.8)
    sup = to_supply_rep(s)
    mean, std = moments(sup)
    assert mean == pytest.approx(-0.8, abs=1e-9)
    assert std == pytest.approx(1.0, abs=1e-8)


def test_round_trip_through_representations():
    s = Strategy.gaussian(0.3, 0.9, slope=0.4)
    back = to_demand_rep(to_supply_rep(s))
    g = back.default_grid()  # native grid: no interpolation in the comparison
    a = s.amplitudes_on(g)
    b = back.amplitudes_on(g)
    assert np.max(np.abs(a - b)) < 1e-10


def test_rep_conversion_rejects_existing_rep():
    s = Strategy.gaussian(0.0, 1.0)
    with pytest.raises(RepresentationError):
        to_demand_rep(s)


def test_improper_strategies():
    d = Strategy.delta(0.25)
    assert d.is_improper
    assert buy_probability(d, 0.3) == 1.0
    assert buy_probability(d, 0.2) == 0.0
    with pytest.raises(ImproperStateError):
        to_supply_rep(d)


def test_discrete_strategy_probabilities():
    s = Strategy.discrete([-0.5, 0.5], [1.0, 3.0])
    assert s.is_improper
    assert buy_probability(s, 0.0) == pytest.approx(0.25)
    assert buy_probability(s, 1.0) == pytest.approx(1.0)


def test_superpose_requires_matching_rep():
    a = Strategy.hermite(0)
    b = to_supply_rep(Strategy.hermite(1))
    with pytest.raises(RepresentationError):
        Strategy.superpose([a, b], [1.0, 1.0])


def test_superpose_rejects_improper_parts():
    with pytest.raises(ImproperStateError):
        Strategy.superpose([Strategy.hermite(0), Strategy.delta(0.0)], [1.0, 1.0])


def test_normalize_superposition():
    s = Strategy.superpose([Strategy.hermite(0), Strategy.hermite(1)], [3.0, 4.0])
    assert norm(s) == pytest.approx(5.0, abs=1e-9)  # orthonormal parts
    assert norm(normalize(s)) == pytest.approx(1.0, abs=1e-9)


def test_normalize_zero_state_fails():
    g = Grid(-1.0, 1.0, 64)
    s = Strategy.sampled(np.zeros(64), g)
    with pytest.raises(DegenerateStateError):
        normalize(s)


def test_sampling_matches_density():
    s = Strategy.gaussian(0.2, 0.7)
    draws = sample(s, RandomSource(5), 200_000)
    assert draws.mean() == pytest.approx(0.2, abs=0.01)
    assert draws.std() == pytest.approx(0.7, abs=0.01)


def test_sampling_hermite_inverse_cdf():
    s = Strategy.hermite(1)
    draws = sample(s, RandomSource(9), 100_000)
    # level 1 densities are symmetric with variance 3/2
    assert draws.mean() == pytest.approx(0.0, abs=0.02)
    assert draws.var() == pytest.approx(1.5, abs=0.03)


def test_sampling_delta_and_discrete():
    assert np.all(sample(Strategy.delta(0.4), RandomSource(1), 10) == 0.4)
    draws = sample(Strategy.discrete([0.0, 1.0], [1.0, 1.0]), RandomSource(2), 40_000)
    assert draws.mean() == pytest.approx(0.5, abs=0.02)


def test_parse_strategy_literals():
    s = parse_strategy("gaussian(0.5, 1.5, -0.2)")
    mean, std = moments(s)
    assert mean == pytest.approx(0.5, abs=1e-9)
    assert std == pytest.approx(1.5, abs=1e-9)
    h = parse_strategy("hermite(3)")
    assert norm(h) == pytest.approx(1.0, abs=1e-9)
    d = parse_strategy("delta(-0.1)")
    assert d.is_improper
    disc = parse_strategy("discrete(-0.5: 1, 0.5: 3)")
    assert buy_probability(disc, 0.0) == pytest.approx(0.25)


def test_parse_strategy_sampled_csv(tmp_path):
    g = Grid(-8.0, 8.0, 64)
    amp = np.exp(-0.5 * g.points**2)
    path = tmp_path / "amp.csv"
    lines = ["x,re,im"] + [
        f"{float(x)!r},{float(a)!r},0.0" for x, a in zip(g.points, amp)
    ]
    path.write_text("\n".join(lines) + "\n")
    s = parse_strategy(f"sampled(@{path.name})", base_dir=tmp_path)
    mean, _ = moments(normalize(s))
    assert mean == pytest.approx(0.0, abs=1e-6)


def test_parse_strategy_rejects_garbage():
    for bad in ("gauss(1,2)", "gaussian(1)", "hermite(-1)", "discrete()", "delta(a)"):
        with pytest.raises((ContractViolationError, ParameterRangeError)):
            parse_strategy(bad)
