"""Measurement-interleaved evolution of a strategy under the risk
Hamiltonian: the market Zeno effect.

A trader keeps quoting (is repeatedly observed on) one side of the
market.  Between observations the strategy evolves freely under H; each
observation projects back onto the initial strategy.  The survival
probability after n equally spaced measurements over total time T is

    S(n) = |<psi0| exp(-i H T / (n hbar)) |psi0>|^(2n),

which tends to 1 as n grows: sufficiently frequent observation freezes
the quoted side.  Sparse observation (small n) lets the strategy drift
toward its Fourier dual, the mechanism behind the crash narrative.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import (
    ContractViolationError,
    ParameterRangeError,
    TruncationError,
)
from .numerics import Grid, integrate
from .strategy import (
    HermiteForm,
    RiskParams,
    Strategy,
    SuperposedForm,
    UNIT_RISK,
    normalize,
)

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class ZenoRun:
    """One freezing experiment: initial strategy, horizon, measurement count.

    ``total_time`` is measured in units of the transaction time theta,
    so omega * T = 2 pi * total_time.
    """

    initial: Strategy
    total_time: float
    n_measurements: int
    risk: RiskParams = UNIT_RISK
    basis_size: int = 128
    max_basis_size: int = 2048

    def __post_init__(self) -> None:
        if not isinstance(self.initial, Strategy):
            raise ContractViolationError("initial must be a Strategy")
        if self.initial.is_improper:
            raise ContractViolationError(
                "point strategies cannot be expanded in the oscillator basis"
            )
        if not math.isfinite(self.total_time) or self.total_time < 0:
            raise ParameterRangeError(
                f"total_time must be finite and >= 0, got {self.total_time}"
            )
        if self.n_measurements < 1:
            raise ParameterRangeError(
                f"n_measurements must be >= 1, got {self.n_measurements}"
            )
        if self.basis_size < 1 or self.max_basis_size < self.basis_size:
            raise ParameterRangeError("need 1 <= basis_size <= max_basis_size")


def _exact_level_vector(s: Strategy, risk: RiskParams) -> np.ndarray | None:
    """Kronecker coefficients for eigenfunctions and their superpositions.

    Returns None when the strategy is not an exact finite combination
    of this risk operator's eigenfunctions.
    """
    scale = math.sqrt(risk.hbar_eff / (risk.m * risk.omega))

    def matches(form: HermiteForm) -> bool:
        return math.isclose(form.length_scale, scale, rel_tol=1e-9, abs_tol=0.0)

    form = s.form
    if isinstance(form, HermiteForm):
        if not matches(form):
            return None
        vec = np.zeros(form.n + 1, dtype=complex)
        vec[form.n] = 1.0
        return vec
    if isinstance(form, SuperposedForm):
        parts = []
        for c, part in zip(form.coefficients, form.parts):
            sub = _exact_level_vector(part, risk)
            if sub is None:
                return None
            parts.append((c, sub))
        size = max(len(v) for _, v in parts)
        vec = np.zeros(size, dtype=complex)
        for c, v in parts:
            vec[: len(v)] += c * v
        return vec
    return None


def hermite_coefficients(
    s: Strategy, risk: RiskParams = UNIT_RISK, size: int = 128
) -> np.ndarray:
    """Expansion coefficients of a normalizable strategy in the risk basis.

    Exact (Kronecker) for eigenfunction combinations whose length scale
    matches the risk parameters; quadrature projection otherwise.  The
    quadrature domain is clamped to the top level's classical turning
    point: strategy mass beyond it cannot be represented at this basis
    size and shows up as a norm deficit, which is the point.
    """
    s = normalize(s)
    exact = _exact_level_vector(s, risk)
    if exact is not None:
        out = np.zeros(max(size, len(exact)), dtype=complex)
        out[: len(exact)] = exact
        nrm = math.sqrt(float(np.sum(np.abs(out) ** 2)))
        return out / nrm
    scale = math.sqrt(risk.hbar_eff / (risk.m * risk.omega))
    lo, hi = s.support_bounds()
    turning = math.sqrt(2.0 * size + 1.0) * scale * 1.25
    half = min(max(abs(lo), abs(hi)), turning)
    # >= 8 samples per top-level oscillation, lower-bounded for narrow states
    waves = half * math.sqrt(2.0 * size + 1.0) / (math.pi * scale)
    grid = Grid(-half, half, max(4096, 8 * math.ceil(waves)))
    amps = s.amplitudes_on(grid)
    coeffs = np.empty(size, dtype=complex)
    u = grid.points / scale
    prev = np.zeros_like(u)
    cur = np.pi ** -0.25 * np.exp(-0.5 * u * u) / math.sqrt(scale)
    for k in range(size):
        coeffs[k] = complex(integrate(cur * amps, grid))
        prev, cur = cur, (
            math.sqrt(2.0 / (k + 1)) * u * cur - math.sqrt(k / (k + 1)) * prev
        )
    return coeffs


def _captured_coefficients(run: ZenoRun) -> np.ndarray:
    """Coefficients with guaranteed norm capture, doubling the basis as needed."""
    size = run.basis_size
    while True:
        coeffs = hermite_coefficients(run.initial, run.risk, size)
        captured = float(np.sum(np.abs(coeffs) ** 2))
        if captured >= 1.0 - 1e-8:
            return coeffs / math.sqrt(captured)
        if size >= run.max_basis_size:
            raise TruncationError(
                f"oscillator basis of size {size} captures only {captured:.12f} "
                "of the initial norm; the strategy reaches beyond max_basis_size"
            )
        size = min(2 * size, run.max_basis_size)


def survival_probability(run: ZenoRun) -> float:
    """S(n) after n projective observations spread over the horizon.

    The evolved overlap is a pure phase sum over level weights,
    amp = sum_k |c_k|^2 exp(-i (k + 1/2) omega T / n), and
    S = |amp|^(2n).  Unitarity keeps every weight fixed, so the result
    is deterministic and lies in [0, 1].
    """
    coeffs = _captured_coefficients(run)
    weights = np.abs(coeffs) ** 2
    omega_t = TWO_PI * run.total_time
    n = run.n_measurements
    phases = np.exp(-1j * (np.arange(len(weights)) + 0.5) * omega_t / n)
    amp = complex(np.dot(weights, phases))
    overlap_sq = min(abs(amp) ** 2, 1.0)
    return float(overlap_sq**n)


@dataclass(frozen=True)
class FreezeRow:
    n: int
    survival: float


def freeze_experiment(run: ZenoRun, n_values: Sequence[int]) -> list[FreezeRow]:
    """Survival table over a sweep of measurement counts.

    Each row reruns the same horizon with a different n: the market
    reading is a monopolist quoting the demand side n times, blocking
    the drift into the supply representation.  Eigenstates freeze
    trivially (all ones); superpositions freeze only when watched
    often enough.
    """
    values = [int(n) for n in n_values]
    if len(values) == 0:
        raise ContractViolationError("n_values must be nonempty")
    if any(b <= a for a, b in zip(values, values[1:])):
        raise ContractViolationError("n_values must be strictly ascending")
    if values[0] < 1:
        raise ParameterRangeError("measurement counts must be >= 1")
    rows = []
    for n in values:
        sub = ZenoRun(
            initial=run.initial,
            total_time=run.total_time,
            n_measurements=n,
            risk=run.risk,
            basis_size=run.basis_size,
            max_basis_size=run.max_basis_size,
        )
        rows.append(FreezeRow(n, survival_probability(sub)))
    return rows


def freeze_table_to_csv(rows: Sequence[FreezeRow], path: str | Path) -> None:
    """Write the survival sweep as CSV ``n,survival``."""
    with open(path, "w", newline="\n") as fh:
        fh.write("n,survival\n")
        for row in rows:
            fh.write(f"{row.n},{row.survival!r}\n")
