"""Phase-space view of a strategy: Wigner density, marginals, giffen test.

The Wigner quasi-density W(p, q) carries both market sides at once.
Its q-marginal is the demand density, its p-marginal the supply
density, and any negative patch marks behavior no classical mixture of
quotes can produce.
"""

import math

import numpy as np

from qmg import (
    CoherentParams,
    Strategy,
    coherent_wigner,
    dominant_curves,
    hudson_check,
    is_giffen,
    normalize,
    wigner_transform,
)


def main() -> None:
    ground = Strategy.gaussian(0.0, math.sqrt(0.5))
    d = wigner_transform(ground)
    print(f"ground-state gaussian: mass {d.mass():.9f}, min {np.min(d.values):+.2e}")
    report = hudson_check(ground)
    print(f"  hudson: {report.classification.name}")

    excited = Strategy.hermite(1)
    d1 = wigner_transform(excited)
    print(f"first excited level: min {np.min(d1.values):+.6f} (-1/pi = {-1/math.pi:.6f})")
    g = is_giffen(d1)
    wp, wq = g.witness
    print(f"  giffen: {g.negative}, deepest point W({wp:+.3f}, {wq:+.3f}) = {g.min_value:+.4f}")

    rho = 0.8
    corr = coherent_wigner(CoherentParams(r=rho, eta=0.9))
    m = corr.moments()
    print(f"correlated coherent state r={rho}:")
    print(f"  dp*dq*sqrt(1-r^2) = {m.p_std * m.q_std * math.sqrt(1 - rho**2):.8f} (bound 0.5)")
    print(f"  measured p-q correlation {m.correlation:+.4f}")

    cat = normalize(
        Strategy.superpose(
            [Strategy.gaussian(-1.3, 0.7), Strategy.gaussian(1.3, 0.7)], [1.0, 1.0]
        )
    )
    dcat = wigner_transform(cat)
    print(f"two-gaussian cat: min {np.min(dcat.values):+.4f}, interference is not classical")

    curves = dominant_curves(d)
    mid = len(curves.lnc) // 2
    print("dominant curves of the ground state at ln c = "
          f"{curves.lnc[mid]:+.3f}: F_d = {curves.demand[mid]:.4f}, "
          f"F_s = {curves.supply[mid]:.4f}")


if __name__ == "__main__":
    main()
