"""Sealed-bid auctions over wavefunction bidders.

The winner is the buyer with the minimal sampled log-price q (the
highest bid e^{-q}); the seller's supply draw p acts as a reserve and
the deal needs q + p <= 0.  First price pays the winner's own quote,
second price the runner-up's, with the reserve as a pseudo-bid.
"""

import math

from qmg import (
    AuctionInstance,
    RandomSource,
    Representation,
    Strategy,
    run_auction,
    transaction_probabilities,
    vickrey_truthfulness_check,
)


def main() -> None:
    deltas = dict(
        buyers=(Strategy.delta(0.1), Strategy.delta(0.3)),
        seller=Strategy.delta(-0.5, rep=Representation.SUPPLY),
        mc_samples=1000,
        rng=RandomSource(1),
    )
    first = run_auction(AuctionInstance(pricing="first", **deltas))
    second = run_auction(AuctionInstance(pricing="second", **deltas))
    print("deterministic fixture, bids e^{-0.1} and e^{-0.3}, reserve e^{0.5}:")
    print(f"  first price  {first.revenue_mean:.12f} = e^-0.1 {math.exp(-0.1):.12f}")
    print(f"  second price {second.revenue_mean:.12f} = e^-0.3 {math.exp(-0.3):.12f}")

    inst = AuctionInstance(
        buyers=(Strategy.gaussian(0.0, 1.0), Strategy.gaussian(0.0, 1.0)),
        seller=Strategy.gaussian(0.0, 1.0, rep=Representation.SUPPLY),
        pricing="first",
        mc_samples=200_000,
        rng=RandomSource(8),
    )
    quad = transaction_probabilities(inst)
    out = run_auction(inst)
    print("two standard-gaussian buyers vs gaussian seller:")
    print(f"  quadrature trade probability {quad.total:.6f} (exact value 2/3)")
    print(f"  sampled                      {1 - out.p_no_trade:.6f}"
          f"  (winner split {out.winner_freq[0]:.3f}/{out.winner_freq[1]:.3f})")
    print(f"  mean first-price revenue     {out.revenue_mean:.6f}"
          f" +- {out.revenue_se:.6f}")

    report = vickrey_truthfulness_check(
        valuation=0.5,
        bid_grid=(0.3, 0.4, 0.5, 0.6, 0.7),
        opponents=(Strategy.discrete([math.log(1 / 0.4)], [1.0]),),
        seller=Strategy.delta(math.log(0.2), rep=Representation.SUPPLY),
    )
    print("second-price truthfulness on an enumerable fixture:")
    table = {b: round(p, 6) for b, p in zip(report.bids, report.payoffs)}
    print(f"  payoffs by bid {table}")
    print(f"  truthful bid {report.truthful_bid} optimal: {report.truthful_optimal}")


if __name__ == "__main__":
    main()
