"""Profit intensity and its self-consistent fixed point.

A trader quoting against a gaussian Rest-of-World maximizes the rate of
profit per unit time at the withdrawal level a* where the intensity
curve crosses the diagonal.  The location is universal: it scales
linearly with the RW spread sigma.
"""

from qmg import (
    UNIT_RISK,
    cooling_experiment,
    fixed_point,
    market_temperature,
    profit_intensity,
)


def main() -> None:
    star = fixed_point(1.0)
    print(f"fixed point at sigma=1: a* = {star:.12f}")
    print(f"  intensity there      = {profit_intensity(star, 1.0):.12f} (equals a*)")
    print(f"  intensity at 0       = {profit_intensity(0.0, 1.0):.12f}")

    print("scaling across market widths:")
    for row in cooling_experiment([0.25, 0.5, 1.0, 2.0, 4.0]):
        print(f"  sigma {row.sigma:5.2f}: a* = {row.fixed_point:.8f}"
              f"  (a*/sigma = {row.fixed_point / row.sigma:.8f})")

    temp, energy = market_temperature(2.0, UNIT_RISK)
    print(f"temperature parameterization at beta=2: T = {temp}, mean risk {energy:.8f}")


if __name__ == "__main__":
    main()
