"""Measurement-interleaved evolution: survival probabilities and freezing."""

import math

import numpy as np
import pytest

from qmg import (
    ContractViolationError,
    FreezeRow,
    ParameterRangeError,
    RandomSource,
    RiskParams,
    Strategy,
    TruncationError,
    UNIT_RISK,
    ZenoRun,
    freeze_experiment,
    freeze_table_to_csv,
    hermite_coefficients,
    survival_probability,
)

# closed form for the equal |0>,|1> superposition: S(n) = cos(wT/2n)^(2n),
# evaluated at 50 digits and rounded to float
S_PI = {
    10: 0.78054606978114017,
    100: 0.97562691414390028,
    1000: 0.99753563941957021,
}
# coherent state, |alpha|^2 = 1.125 (displacement 1.5 at unit scale), wT = 2:
# S(n) = exp(-2 |alpha|^2 n (1 - cos(wT/n)))
S_COHERENT = {1: 0.041323233519798519, 3: 0.23568455727325979, 25: 0.83535038409459482}


def two_level() -> Strategy:
    h0 = Strategy.hermite(0)
    h1 = Strategy.hermite(1)
    return Strategy.superpose([h0, h1], [math.sqrt(0.5), math.sqrt(0.5)])


def test_two_level_sparse_measurements():
    # wT = pi: a single observation lands on the orthogonal state,
    # two observations keep a quarter of the amplitude
    s = two_level()
    assert survival_probability(ZenoRun(s, 0.5, 1)) == pytest.approx(0.0, abs=1e-12)
    assert survival_probability(ZenoRun(s, 0.5, 2)) == pytest.approx(0.25, abs=1e-12)


def test_two_level_frozen_values():
    s = two_level()
    for n, expect in S_PI.items():
        got = survival_probability(ZenoRun(s, 0.5, n))
        # |amp|^(2n) amplifies roundoff by ~2n ulps, hence the looser bound
        assert got == pytest.approx(expect, abs=5e-12)


def test_survival_increases_toward_freeze():
    rows = freeze_experiment(ZenoRun(two_level(), 0.5, 1), [1, 10, 100, 1000])
    values = [r.survival for r in rows]
    assert all(b > a for a, b in zip(values, values[1:]))
    assert values[-1] > 0.99


def test_eigenstates_never_move():
    for level in (0, 3, 7):
        s = Strategy.hermite(level)
        for n in (1, 2, 17, 400):
            assert survival_probability(ZenoRun(s, 0.8, n)) == 1.0


def test_full_revival_at_oscillator_period():
    # wT = 2 pi realigns every phase up to a global factor
    s = two_level()
    assert survival_probability(ZenoRun(s, 1.0, 1)) == pytest.approx(1.0, abs=1e-12)


def test_quarter_turn_freeze_table():
    rows = freeze_experiment(ZenoRun(two_level(), 0.25, 1), [1, 10, 100, 1000])
    values = [r.survival for r in rows]
    assert all(isinstance(r, FreezeRow) for r in rows)
    assert [r.n for r in rows] == [1, 10, 100, 1000]
    assert all(b > a for a, b in zip(values, values[1:]))
    assert values[0] == pytest.approx(0.5, abs=1e-12)


def test_decay_rate_halves_with_doubled_measurements():
    # 1 - S(n) ~ C/n in the Zeno limit
    s = two_level()
    loss_n = 1.0 - survival_probability(ZenoRun(s, 0.5, 100))
    loss_2n = 1.0 - survival_probability(ZenoRun(s, 0.5, 200))
    assert loss_2n <= 0.55 * loss_n


def test_quadrature_projection_of_ground_state():
    # gaussian with the oscillator's own width is |0> up to quadrature error
    s = Strategy.gaussian(0.0, math.sqrt(0.5))
    coeffs = hermite_coefficients(s, UNIT_RISK, 32)
    assert abs(coeffs[0]) == pytest.approx(1.0, abs=1e-9)
    assert float(np.sum(np.abs(coeffs[1:]) ** 2)) < 1e-12
    assert survival_probability(ZenoRun(s, 0.37, 5)) == pytest.approx(1.0, abs=1e-9)


def test_coherent_state_closed_form():
    # displaced ground state: S(n) = exp(-2 |alpha|^2 n (1 - cos(wT/n)))
    s = Strategy.gaussian(1.5, math.sqrt(0.5))
    for n, expect in S_COHERENT.items():
        got = survival_probability(ZenoRun(s, 1.0 / math.pi, n))
        assert got == pytest.approx(expect, abs=1e-6)


def test_off_scale_eigenfunction_goes_through_quadrature():
    # hermite(2) built for a different omega is not an eigenstate here
    tight = RiskParams.from_omega(1.0, 4.0)
    s = Strategy.hermite(2, tight)
    coeffs = hermite_coefficients(s, UNIT_RISK, 64)
    weights = np.abs(coeffs) ** 2
    assert float(np.sum(weights)) == pytest.approx(1.0, abs=1e-8)
    # parity is preserved: odd levels stay empty
    assert float(np.sum(weights[1::2])) < 1e-12
    assert weights[2] < 0.9  # genuinely spread over several levels
    got = survival_probability(ZenoRun(s, 0.5, 1, risk=UNIT_RISK, basis_size=64))
    weights = weights / np.sum(weights)
    expect = abs(np.dot(weights, np.exp(-1j * (np.arange(64) + 0.5) * math.pi))) ** 2
    assert got == pytest.approx(float(expect), abs=1e-12)


def test_wide_strategy_exceeds_basis():
    s = Strategy.gaussian(0.0, 40.0)
    with pytest.raises(TruncationError):
        survival_probability(ZenoRun(s, 0.5, 1))


def test_basis_doubles_until_captured():
    # width 4 needs more than the default 128 levels but fits within 2048
    s = Strategy.gaussian(0.0, 4.0)
    run = ZenoRun(s, 0.5, 3)
    got = survival_probability(run)
    assert 0.0 <= got <= 1.0
    coeffs = hermite_coefficients(s, UNIT_RISK, 512)
    assert float(np.sum(np.abs(coeffs) ** 2)) >= 1.0 - 1e-8


def test_run_validation():
    s = two_level()
    with pytest.raises(ContractViolationError):
        ZenoRun(Strategy.delta(0.0), 0.5, 1)
    with pytest.raises(ParameterRangeError):
        ZenoRun(s, -0.1, 1)
    with pytest.raises(ParameterRangeError):
        ZenoRun(s, 0.5, 0)
    with pytest.raises(ParameterRangeError):
        ZenoRun(s, 0.5, 1, basis_size=256, max_basis_size=128)


def test_sweep_validation():
    run = ZenoRun(two_level(), 0.5, 1)
    with pytest.raises(ContractViolationError):
        freeze_experiment(run, [])
    with pytest.raises(ContractViolationError):
        freeze_experiment(run, [1, 10, 10])
    with pytest.raises(ParameterRangeError):
        freeze_experiment(run, [0, 5])


def test_survival_bounded_for_random_superpositions():
    gen = RandomSource(99).rng
    parts = [Strategy.hermite(k) for k in range(6)]
    for _ in range(10):
        raw = gen.normal(size=6) + 1j * gen.normal(size=6)
        s = Strategy.superpose(parts, raw)
        n = int(gen.integers(1, 50))
        t = float(gen.uniform(0.0, 3.0))
        got = survival_probability(ZenoRun(s, t, n))
        assert 0.0 <= got <= 1.0


def test_freeze_table_csv(tmp_path):
    rows = freeze_experiment(ZenoRun(two_level(), 0.5, 1), [1, 2, 10])
    path = tmp_path / "zeno.csv"
    freeze_table_to_csv(rows, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "n,survival"
    assert len(lines) == 4
    first = lines[1].split(",")
    assert first[0] == "1"
    assert float(first[1]) == rows[0].survival
