"""Quantum auctions: polarization states, the transaction-probability
density, first/second price rules, and the truthfulness check.

Sign convention (differs from the clearing module on purpose): a buyer
with variable q bids the price c = e^{-q}, so the winner holds the
minimal sampled q; the seller's withdrawal price is e^{-(-p)} = e^{p}
and enters the second-price order as the pseudo-bid -p.  A transaction
needs opposite polarizations and the rationality condition q + p <= 0.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    ContractViolationError,
    ImproperStateError,
    NotApplicableError,
    ParameterRangeError,
    RepresentationError,
)
from .numerics import Grid, RandomSource, cumulative_integral, integrate
from .strategy import (
    DeltaForm,
    DiscreteForm,
    GaussianForm,
    Representation,
    RiskParams,
    Strategy,
    UNIT_RISK,
    sample as sample_strategy,
)

PRICINGS = ("first", "second", "mixed")


def rationality(q: float, p: float) -> bool:
    """Iverson bracket [q + p <= 0]: the pair can trade at all."""
    return q + p <= 0.0


@dataclass(frozen=True)
class Polarization:
    """Amplitudes over the two role assignments of a pair.

    alpha weighs the assignment where buyers propose prices (first
    price); beta the reversed one where the seller reveals the
    withdrawal price (second price).  |alpha|^2 + |beta|^2 must be 1.
    """

    alpha: complex = 1.0 + 0.0j
    beta: complex = 0.0 + 0.0j

    def __post_init__(self) -> None:
        n = abs(self.alpha) ** 2 + abs(self.beta) ** 2
        if abs(n - 1.0) > 1e-12:
            raise ContractViolationError(
                f"polarization amplitudes must have unit norm, got {n!r}"
            )

    @property
    def weight(self) -> float:
        """Probability of the buyers-propose (first price) assignment."""
        return abs(self.alpha) ** 2


@dataclass(frozen=True)
class AuctionInstance:
    """One auction: N buyers against a seller, a pricing rule, a seed."""

    buyers: tuple[Strategy, ...]
    seller: Strategy
    pricing: str = "first"
    weight: float = 1.0
    mc_samples: int = 100_000
    rng: RandomSource = RandomSource(0)
    risk: RiskParams = UNIT_RISK

    def __post_init__(self) -> None:
        if len(self.buyers) < 1:
            raise ContractViolationError("auction needs at least one buyer")
        for b in self.buyers:
            if not isinstance(b, Strategy):
                raise ContractViolationError("buyers must be Strategy instances")
            if b.rep is not Representation.DEMAND:
                raise RepresentationError("buyers must be in the demand representation")
        if not isinstance(self.seller, Strategy):
            raise ContractViolationError("seller must be a Strategy")
        if self.seller.rep is not Representation.SUPPLY:
            raise RepresentationError("seller must be in the supply representation")
        if self.pricing not in PRICINGS:
            raise ParameterRangeError(
                f"pricing must be one of {PRICINGS}, got {self.pricing!r}"
            )
        if not (0.0 <= self.weight <= 1.0):
            raise ParameterRangeError(f"weight must lie in [0,1], got {self.weight}")
        if self.mc_samples < 1:
            raise ParameterRangeError(
                f"mc_samples must be >= 1, got {self.mc_samples}"
            )
        if not isinstance(self.rng, RandomSource):
            raise ContractViolationError("rng must be a RandomSource")


# ---------------------------------------------------------------------------
# CDF helpers (vectorized over the evaluation points)


def _cdf_on(s: Strategy, xs: np.ndarray, inclusive: bool = True) -> np.ndarray:
    """P(variable <= x) of the strategy's own representation, vectorized.

    inclusive=False gives P(variable < x); the two differ only on atoms.
    """
    form = s.form
    if isinstance(form, DeltaForm):
        hit = xs >= form.location if inclusive else xs > form.location
        return hit.astype(float)
    if isinstance(form, DiscreteForm):
        out = np.zeros_like(xs, dtype=float)
        for a, w in zip(form.atoms, form.weights):
            out += w * ((xs >= a) if inclusive else (xs > a))
        return out
    g = s.default_grid(8192)
    dens = np.abs(s.amplitudes_on(g)) ** 2
    cum = cumulative_integral(dens, g)
    if cum[-1] <= 0:
        raise ImproperStateError("strategy has zero norm")
    cum /= cum[-1]
    return np.interp(xs, g.points, cum, left=0.0, right=1.0)


def _survival_product(
    inst: AuctionInstance, k: int, xs: np.ndarray
) -> np.ndarray:
    """Product over opponents of P(q_m > x), times the seller factor P(p <= -x).

    Ties go to the lowest buyer index, so lower-index opponents must beat x
    strictly while higher-index ones only weakly; on atomless strategies the
    distinction vanishes.
    """
    out = np.ones_like(xs, dtype=float)
    for m, b in enumerate(inst.buyers):
        if m == k:
            continue
        out *= 1.0 - _cdf_on(b, xs, inclusive=m < k)
    out *= _cdf_on(inst.seller, -xs)
    return out


def transaction_density(
    inst: AuctionInstance, k: int, q: float | np.ndarray
) -> float | np.ndarray:
    """Probability density that buyer k wins and trades at log-price q.

    f_k(q) = |<q|psi_k>|^2 x Prod_{m != k} P(q_m > q) x P(p <= -q);
    loser wave functions enter through their survival factors, so
    removing an outbid buyer changes the winner's density.
    """
    if not (0 <= k < len(inst.buyers)):
        raise ContractViolationError(
            f"buyer index {k} out of range for {len(inst.buyers)} buyers"
        )
    buyer = inst.buyers[k]
    if buyer.is_improper:
        raise ImproperStateError(
            "buyer k is a point measure; its transaction law is an atom, "
            "use transaction_probabilities for the degenerate shortcut"
        )
    xs = np.asarray(q, dtype=float)
    scalar = xs.ndim == 0
    xs = np.atleast_1d(xs)
    g = buyer.default_grid(8192)
    dens = np.abs(buyer.amplitudes_on(g)) ** 2
    total = float(integrate(dens, g))
    own = np.interp(xs, g.points, dens / total, left=0.0, right=0.0)
    vals = own * _survival_product(inst, k, xs)
    return float(vals[0]) if scalar else vals


@dataclass(frozen=True)
class TransactionReport:
    """Integrated transaction probabilities per buyer."""

    per_buyer: tuple[float, ...]
    total: float
    p_no_trade: float


def transaction_probabilities(
    inst: AuctionInstance, grid_n: int = 4096
) -> TransactionReport:
    """Integrate the transaction density per buyer; atoms handled exactly.

    Sums to the total transaction probability; its complement is the
    chance no trade happens at all.
    """
    per: list[float] = []
    for k, buyer in enumerate(inst.buyers):
        form = buyer.form
        if isinstance(form, DeltaForm):
            mass = float(_survival_product(inst, k, np.array([form.location]))[0])
            per.append(mass)
        elif isinstance(form, DiscreteForm):
            surv = _survival_product(inst, k, np.asarray(form.atoms))
            per.append(float(np.dot(form.weights, surv)))
        else:
            lo, hi = buyer.support_bounds()
            g = Grid(lo, hi, grid_n)
            per.append(float(integrate(transaction_density(inst, k, g.points), g)))
    total = math.fsum(per)
    return TransactionReport(tuple(per), total, 1.0 - total)


# ---------------------------------------------------------------------------
# Monte Carlo auctions


@dataclass(frozen=True, eq=False)
class AuctionOutcome:
    """Sampled distribution summary of one auction run."""

    pricing: str
    weight: float
    n_samples: int
    winner_freq: tuple[float, ...]
    revenue_mean: float
    revenue_se: float
    p_no_trade: float
    price_bin_edges: np.ndarray
    price_counts: np.ndarray


def _draws(inst: AuctionInstance) -> tuple[np.ndarray, np.ndarray]:
    # fresh generator per call: run_auction(inst) is idempotent for a seed
    gen = RandomSource(inst.rng.seed, inst.rng.stream).rng
    m = inst.mc_samples
    q_cols = [
        sample_strategy(b, gen, m, rep=Representation.DEMAND, risk=inst.risk)
        for b in inst.buyers
    ]
    q = np.column_stack(q_cols)
    p = sample_strategy(
        inst.seller, gen, m, rep=Representation.SUPPLY, risk=inst.risk
    )
    return q, p


def _prices(q: np.ndarray, p: np.ndarray, pricing: str) -> np.ndarray:
    q_min = np.min(q, axis=1)
    if pricing == "first":
        return np.exp(-q_min)
    # second in decreasing price order among bids and the seller reserve
    pool = np.concatenate([q, -p[:, None]], axis=1)
    second = np.partition(pool, 1, axis=1)[:, 1]
    return np.exp(-second)


def _histogram(prices: np.ndarray, bins: int = 50) -> tuple[np.ndarray, np.ndarray]:
    if prices.size == 0:
        return np.linspace(0.0, 1.0, bins + 1), np.zeros(bins)
    lo, hi = float(np.min(prices)), float(np.max(prices))
    if lo == hi:
        hi = lo + max(abs(lo), 1.0) * 1e-9
    counts, edges = np.histogram(prices, bins=bins, range=(lo, hi))
    return edges, counts.astype(float)


def _mean_se(values: np.ndarray) -> tuple[float, float]:
    m = len(values)
    mean = math.fsum(values) / m
    if m < 2:
        return mean, 0.0
    var = math.fsum((values - mean) ** 2) / (m - 1)
    return mean, math.sqrt(var / m)


def run_auction(inst: AuctionInstance) -> AuctionOutcome:
    """Monte Carlo the auction: winners, revenue, and price histogram.

    Winner is argmin q (ties to the lowest buyer index); the trade
    executes iff q_min + p <= 0; the clearing price follows the pricing
    rule.  Revenue means use compensated summation.  Mixed pricing
    delegates to :func:`mixed_polarization_auction`.
    """
    if inst.pricing == "mixed":
        return mixed_polarization_auction(inst, inst.weight)
    q, p = _draws(inst)
    winner = np.argmin(q, axis=1)
    executed = q[np.arange(len(p)), winner] + p <= 0.0
    prices = np.where(executed, _prices(q, p, inst.pricing), 0.0)
    mean, se = _mean_se(prices)
    counts = np.bincount(winner[executed], minlength=len(inst.buyers))
    edges, hist = _histogram(prices[executed])
    return AuctionOutcome(
        pricing=inst.pricing,
        weight=1.0 if inst.pricing == "first" else 0.0,
        n_samples=inst.mc_samples,
        winner_freq=tuple(float(c) / inst.mc_samples for c in counts),
        revenue_mean=mean,
        revenue_se=se,
        p_no_trade=1.0 - float(np.count_nonzero(executed)) / inst.mc_samples,
        price_bin_edges=edges,
        price_counts=hist,
    )


def mixed_polarization_auction(
    inst: AuctionInstance, weight: float
) -> AuctionOutcome:
    """Blend of the two polarization branches on common draws.

    With probability ``weight`` the buyers propose (first price), else
    the seller reveals the withdrawal price (second price).  Both
    branches share the same sampled q and p, so the blend is exactly
    convex: weight 1 or 0 reproduces the pure branches bit for bit.
    """
    if not (0.0 <= weight <= 1.0):
        raise ParameterRangeError(f"weight must lie in [0,1], got {weight}")
    q, p = _draws(inst)
    winner = np.argmin(q, axis=1)
    executed = q[np.arange(len(p)), winner] + p <= 0.0
    first = np.where(executed, _prices(q, p, "first"), 0.0)
    second = np.where(executed, _prices(q, p, "second"), 0.0)
    blended = weight * first + (1.0 - weight) * second
    mean, se = _mean_se(blended)
    counts = np.bincount(winner[executed], minlength=len(inst.buyers))
    # histogram of the mixture distribution: convex blend of branch histograms
    both = np.concatenate([first[executed], second[executed]])
    if both.size:
        lo, hi = float(np.min(both)), float(np.max(both))
        if lo == hi:
            hi = lo + max(abs(lo), 1.0) * 1e-9
        edges = np.linspace(lo, hi, 51)
        h_first, _ = np.histogram(first[executed], bins=edges)
        h_second, _ = np.histogram(second[executed], bins=edges)
        hist = weight * h_first + (1.0 - weight) * h_second
    else:
        edges, hist = _histogram(both)
    return AuctionOutcome(
        pricing="mixed",
        weight=weight,
        n_samples=inst.mc_samples,
        winner_freq=tuple(float(c) / inst.mc_samples for c in counts),
        revenue_mean=mean,
        revenue_se=se,
        p_no_trade=1.0 - float(np.count_nonzero(executed)) / inst.mc_samples,
        price_bin_edges=edges,
        price_counts=hist,
    )


# ---------------------------------------------------------------------------
# Vickrey truthfulness


@dataclass(frozen=True)
class TruthfulnessReport:
    """Expected payoff per grid bid, with the argmax set."""

    bids: tuple[float, ...]
    payoffs: tuple[float, ...]
    diff_se: tuple[float, ...]
    truthful_bid: float
    argmax_bids: tuple[float, ...]
    truthful_optimal: bool
    exact: bool


def _positive_definite(s: Strategy) -> bool:
    if isinstance(s.form, (DeltaForm, DiscreteForm, GaussianForm)):
        return True
    from .wigner import HudsonClass, hudson_check

    return hudson_check(s).classification is HudsonClass.GAUSSIAN_POSITIVE


def _atoms_of(s: Strategy) -> list[tuple[float, float]] | None:
    if isinstance(s.form, DeltaForm):
        return [(s.form.location, 1.0)]
    if isinstance(s.form, DiscreteForm):
        return list(zip(s.form.atoms, s.form.weights))
    return None


def vickrey_truthfulness_check(
    valuation: float,
    bid_grid: Sequence[float],
    opponents: Sequence[Strategy],
    seller: Strategy,
    rng: RandomSource | None = None,
    mc_samples: int = 200_000,
    risk: RiskParams = UNIT_RISK,
) -> TruthfulnessReport:
    """Check that truthful bidding maximizes second-price payoff.

    The bidder values the good at ``valuation`` (price units) and bids
    b by playing the demand point q = -ln b.  Payoff is valuation minus
    the second price when winning and trading, zero otherwise.  When
    every opponent and the seller carry finite point measures the table
    is enumerated exactly; otherwise a common-random-numbers Monte
    Carlo estimates it, and diff_se reports the paired standard error
    against the truthful bid.  Giffen opponents (negative phase-space
    density) are refused: the property is only claimed for positive
    measures.
    """
    if valuation <= 0:
        raise ParameterRangeError(f"valuation must be positive, got {valuation}")
    bids = tuple(float(b) for b in bid_grid)
    if len(bids) < 1 or any(b <= 0 for b in bids):
        raise ParameterRangeError("bid grid must contain positive prices")
    if not any(math.isclose(b, valuation, rel_tol=0, abs_tol=1e-12) for b in bids):
        raise ContractViolationError("bid grid must contain the valuation")
    if seller.rep is not Representation.SUPPLY:
        raise RepresentationError("seller must be in the supply representation")
    for s in list(opponents) + [seller]:
        if not _positive_definite(s):
            raise NotApplicableError(
                "giffen strategy present: truthfulness is only claimed for "
                "positive-definite measures"
            )

    opp_atoms = [_atoms_of(s) for s in opponents]
    seller_atoms = _atoms_of(seller)
    exact = seller_atoms is not None and all(a is not None for a in opp_atoms)

    if exact:
        payoffs = _enumerate_payoffs(valuation, bids, opp_atoms, seller_atoms)
        ses = tuple(0.0 for _ in bids)
    else:
        payoffs, ses = _sample_payoffs(
            valuation, bids, opponents, seller, rng or RandomSource(0),
            mc_samples, risk,
        )

    best = max(payoffs)
    t_idx = min(
        range(len(bids)), key=lambda i: abs(bids[i] - valuation)
    )
    slack = [3.0 * ses[i] + 1e-12 for i in range(len(bids))]
    argmax = tuple(
        bids[i] for i in range(len(bids)) if payoffs[i] >= best - slack[i]
    )
    truthful_optimal = payoffs[t_idx] >= best - slack[t_idx]
    return TruthfulnessReport(
        bids=bids,
        payoffs=tuple(payoffs),
        diff_se=tuple(ses),
        truthful_bid=bids[t_idx],
        argmax_bids=argmax,
        truthful_optimal=truthful_optimal,
        exact=exact,
    )


def _enumerate_payoffs(valuation, bids, opp_atoms, seller_atoms):
    payoffs = []
    for b in bids:
        q_me = -math.log(b)
        total = 0.0
        for combo in itertools.product(*opp_atoms, seller_atoms):
            opp = combo[:-1]
            p_at, p_w = combo[-1]
            weight = p_w
            for _, w in opp:
                weight *= w
            qs = [a for a, _ in opp]
            if qs and min(qs) < q_me:
                continue  # an opponent outbids us (ties go to us, index 0)
            if q_me + p_at > 0:
                continue  # seller walks away
            price = math.exp(-min(qs + [-p_at])) if qs else math.exp(p_at)
            total += weight * (valuation - price)
        payoffs.append(total)
    return payoffs


def _sample_payoffs(valuation, bids, opponents, seller, rng, mc_samples, risk):
    gen = RandomSource(rng.seed, rng.stream).rng
    cols = [
        sample_strategy(o, gen, mc_samples, rep=Representation.DEMAND, risk=risk)
        for o in opponents
    ]
    p = sample_strategy(
        seller, gen, mc_samples, rep=Representation.SUPPLY, risk=risk
    )
    min_opp = np.min(np.column_stack(cols), axis=1) if cols else None
    matrix = np.empty((mc_samples, len(bids)))
    for j, b in enumerate(bids):
        q_me = -math.log(b)
        if min_opp is not None:
            win = q_me <= min_opp
            rest = np.minimum(min_opp, -p)
        else:
            win = np.ones(mc_samples, dtype=bool)
            rest = -p
        ok = win & (q_me + p <= 0.0)
        matrix[:, j] = np.where(ok, valuation - np.exp(-rest), 0.0)
    means = [math.fsum(matrix[:, j]) / mc_samples for j in range(len(bids))]
    t_idx = min(range(len(bids)), key=lambda i: abs(bids[i] - valuation))
    ses = []
    for j in range(len(bids)):
        diff = matrix[:, t_idx] - matrix[:, j]
        var = float(np.var(diff, ddof=1)) if mc_samples > 1 else 0.0
        ses.append(math.sqrt(var / mc_samples))
    return means, ses


# ---------------------------------------------------------------------------
# JSON interface


def auction_from_spec(
    doc: dict, base_dir=None, default_seed: int | None = None
) -> AuctionInstance:
    """Build an instance from the JSON auction document.

    Expected fields: buyers (list of strategy literals), seller
    (literal), pricing, weight (mixed only), samples, seed.  Validation
    errors carry the offending field name.
    """
    from .strategy import parse_strategy

    if not isinstance(doc, dict):
        raise ContractViolationError("auction: document must be an object")
    for key in ("buyers", "seller", "pricing"):
        if key not in doc:
            raise ContractViolationError(f"auction.{key}: required field missing")
    raw_buyers = doc["buyers"]
    if not isinstance(raw_buyers, list) or not raw_buyers:
        raise ContractViolationError("auction.buyers: must be a nonempty list")
    buyers = []
    for i, lit in enumerate(raw_buyers):
        if not isinstance(lit, str):
            raise ContractViolationError(f"auction.buyers[{i}]: must be a string literal")
        buyers.append(parse_strategy(lit, Representation.DEMAND, base_dir))
    if not isinstance(doc["seller"], str):
        raise ContractViolationError("auction.seller: must be a string literal")
    seller = parse_strategy(doc["seller"], Representation.SUPPLY, base_dir)
    pricing = doc["pricing"]
    if pricing not in PRICINGS:
        raise ContractViolationError(
            f"auction.pricing: must be one of {PRICINGS}, got {pricing!r}"
        )
    weight = doc.get("weight", 1.0)
    if not isinstance(weight, (int, float)) or isinstance(weight, bool):
        raise ContractViolationError("auction.weight: must be a number")
    samples = doc.get("samples", 100_000)
    if not isinstance(samples, int) or isinstance(samples, bool) or samples < 1:
        raise ContractViolationError("auction.samples: must be a positive integer")
    seed = doc.get("seed", default_seed if default_seed is not None else 0)
    if not isinstance(seed, int) or isinstance(seed, bool) or seed < 0:
        raise ContractViolationError("auction.seed: must be a non-negative integer")
    return AuctionInstance(
        buyers=tuple(buyers),
        seller=seller,
        pricing=pricing,
        weight=float(weight),
        mc_samples=samples,
        rng=RandomSource(seed),
    )


def outcome_to_dict(outcome: AuctionOutcome) -> dict:
    """Result JSON payload with the documented field names."""
    return {
        "pricing": outcome.pricing,
        "weight": outcome.weight,
        "samples": outcome.n_samples,
        "winner_freq": list(outcome.winner_freq),
        "revenue_mean": outcome.revenue_mean,
        "revenue_se": outcome.revenue_se,
        "p_no_trade": outcome.p_no_trade,
    }
