"""Clearing rounds: divide traders into sides, quote, cross, settle.

Each round flips every normalizable trader onto the buying or selling
side, draws one quote per trader from the matching density, pairs the
strongest bid with the cheapest ask, and executes while q + p <= 0.
Capital flows are zero-sum by construction.
"""

import math

from qmg import (
    MarketState,
    RandomSource,
    Representation,
    Strategy,
    clear_round,
    pair_execution_frequency,
)


def main() -> None:
    market = MarketState(
        (
            Strategy.gaussian(-0.4, 0.8),
            Strategy.gaussian(0.1, 1.0),
            Strategy.gaussian(0.5, 0.6),
            Strategy.delta(-0.3),
            Strategy.delta(0.4, rep=Representation.SUPPLY),
        )
    )
    gen = RandomSource(11).rng
    total_flow = []
    for rnd in range(4):
        out = clear_round(market, gen)
        executed = out.executed_pairs()
        flows = ", ".join(f"{i}:{f:+.4f}" for i, f in sorted(out.flows.items()))
        print(f"round {rnd}: buyers {out.division.buyers} sellers {out.division.sellers}")
        print(f"  executed pairs {executed}")
        print(f"  flows {flows}")
        total_flow.extend(out.flows.values())
    print(f"sum of all flows across rounds: {math.fsum(total_flow):+.1e} (zero-sum)")

    freq = pair_execution_frequency(
        Strategy.delta(-0.2),
        Strategy.delta(0.1, rep=Representation.SUPPLY),
        rounds=10_000,
        rng=RandomSource(3),
    )
    print(f"pinned pair with q+p = -0.1 < 0 executes always: frequency {freq}")

    freq2 = pair_execution_frequency(
        Strategy.gaussian(0.0, 1.0),
        Strategy.gaussian(0.0, 1.0, rep=Representation.SUPPLY),
        rounds=200_000,
        rng=RandomSource(4),
    )
    print(f"two standard gaussians cross half the time: frequency {freq2:.4f}")


if __name__ == "__main__":
    main()
