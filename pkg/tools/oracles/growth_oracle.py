"""Independent reference values for the growth-function calculus.

Every number printed here is computed with mpmath at 50 digits through a
route that shares no code with the package: conjugates by dense scan plus
golden-section refinement, indices by symbolic derivative ratios, doubling
constants by direct evaluation.  The printed values are frozen into
tests/test_growth.py by hand.

Run:  python3 tools/oracles/growth_oracle.py
"""

import mpmath as mp

mp.mp.dps = 50


def conj_by_scan(phi, s, lo=mp.mpf("1e-12"), hi=mp.mpf("1e12")):
    """sup_{t>0} (s*t - phi(t)) by log-grid scan then golden-section."""
    best_t, best_v = lo, s * lo - phi(lo)
    t = lo
    while t <= hi:
        v = s * t - phi(t)
        if v > best_v:
            best_v, best_t = v, t
        t *= mp.mpf("1.02")
    a, b = best_t / mp.mpf("1.05"), best_t * mp.mpf("1.05")
    g = (mp.sqrt(5) - 1) / 2
    for _ in range(200):
        c = b - g * (b - a)
        d = a + g * (b - a)
        if s * c - phi(c) < s * d - phi(d):
            a = c
        else:
            b = d
    t = (a + b) / 2
    return max(s * t - phi(t), mp.mpf(0))


def powerlog(p, a, c):
    return lambda t: t ** p * mp.log(c + t) ** a


def main():
    pl = powerlog(2, 1, 1)

    print("# conjugate of t^2 (expect s^2/4)")
    for s in ["0.5", "1", "2", "5"]:
        s = mp.mpf(s)
        v = conj_by_scan(lambda t: t ** 2, s)
        print(f"conj_t2({s}) = {mp.nstr(v, 20)}   closed {mp.nstr(s**2/4, 20)}")

    print("# conjugate of t^1.7 with coef 1 (closed form check)")
    p = mp.mpf("1.7")
    e = p / (p - 1)
    coef = (p - 1) * p ** (-e)
    for s in ["0.5", "2", "10"]:
        s = mp.mpf(s)
        v = conj_by_scan(lambda t: t ** p, s)
        print(f"conj_t17({s}) = {mp.nstr(v, 20)}   closed {mp.nstr(coef * s**e, 20)}")

    print("# conjugate of t^2*log(1+t) at sample points (freeze)")
    for s in ["0.3", "1", "4", "50"]:
        s = mp.mpf(s)
        print(f"conj_powerlog211({s}) = {mp.nstr(conj_by_scan(pl, s), 20)}")

    print("# index ratio t*phi'/phi of t^2*log(1+t) at grid endpoints (freeze)")
    for t in ["1e-8", "1e8"]:
        t = mp.mpf(t)
        r = 2 + t / ((1 + t) * mp.log(1 + t))
        print(f"idxratio_powerlog211({t}) = {mp.nstr(r, 20)}")

    print("# doubling sup of t^2*log(1+t) on [1e-8, 1e8] (attained at t=1e-8)")
    t = mp.mpf("1e-8")
    print(f"doubling_powerlog211 = {mp.nstr(4 * mp.log(1 + 2 * t) / mp.log(1 + t), 20)}")

    print("# dini constant for t^3: integral_0^t s ds / (t^2) (exact 1/2)")
    t = mp.mpf("7.3")
    dini = mp.quad(lambda s: s ** 3 / s ** 2, [0, t])
    print(f"dini_t3 = {mp.nstr(dini / (t**3 / t), 20)}")

    print("# equivalence constant t^2 vs 3t^2 (exact sqrt(3))")
    print(f"equiv_t2_3t2 = {mp.nstr(mp.sqrt(3), 20)}")

    print("# young equality point for t^1.7 at t=2: s=phi'(t), gap should vanish")
    t = mp.mpf(2)
    s = p * t ** (p - 1)
    lhs = t ** p + conj_by_scan(lambda u: u ** p, s)
    print(f"young_gap_t17 = {mp.nstr(abs(lhs - s * t), 5)}")


if __name__ == "__main__":
    main()
