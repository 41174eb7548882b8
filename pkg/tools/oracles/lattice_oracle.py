"""Independent reference values for lattice geometry.

mpmath at 40 digits; frozen into tests/test_lattice.py.

Run:  python3 tools/oracles/lattice_oracle.py
"""

import mpmath as mp

mp.mp.dps = 40


def main():
    d = mp.mpf("0.5")
    d2 = d * d
    lo = mp.log((1 + d2 / 20) / (1 - d2 / 20)) / (4 * mp.log(2))
    hi = mp.log((1 + d2 / 4) / (1 - d2 / 4)) / (4 * mp.log(2))
    print(f"gamma_lo(0.5) = {mp.nstr(lo, 20)}")
    print(f"gamma_hi(0.5) = {mp.nstr(hi, 20)}")
    print(f"s_delta(0.5) = {mp.nstr(-1 + (1 + d2 / 20) ** mp.mpf('0.25'), 20)}")

    print("# disjointness margins at the midpoint gamma, delta=0.5")
    g = (lo + hi) / 2
    sd = -1 + (1 + d2 / 20) ** mp.mpf("0.25")
    # same row, adjacent columns: centers d2/8 apart, radii s_d each
    same_row = d2 / 8 - 2 * sd
    print(f"same_row_gap = {mp.nstr(same_row, 20)}   (positive = disjoint)")
    # same column, adjacent rows: vertical spacing (2^g - 1)
    r = mp.mpf(2) ** g
    cross_row = (r - 1) - sd * (r + 1)
    print(f"cross_row_gap = {mp.nstr(cross_row, 20)}   (positive = disjoint)")

    print("# small vertical bands: top of J'_j vs bottom of J'_{j+1}")
    top = (1 + d2 / 20) ** mp.mpf("0.25")
    bot = (1 - d2 / 20) ** mp.mpf("0.25") * r
    print(f"jprime_gap = {mp.nstr(bot - top, 20)}   (positive = disjoint)")


if __name__ == "__main__":
    main()
