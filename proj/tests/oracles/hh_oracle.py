"""Independent high-precision oracle for the frozen values in the unit tests.

Evaluates the closed-form rate functions, drift, diffusion and a single
explicit Euler step with mpmath at 50 digits. Run with `python3 hh_oracle.py`.
"""
from mpmath import mp, mpf, exp

mp.dps = 50

E_NA, E_K, E_L = mpf(115), mpf(-12), mpf("10.6")
G_NA, G_K, G_L = mpf(120), mpf(36), mpf("0.3")
C = mpf(1)


def alpha_n(v):
    return mpf("0.01") * (10 - v) / (exp((10 - v) / 10) - 1)


def beta_n(v):
    return mpf("0.125") * exp(-v / 80)


def alpha_m(v):
    return mpf("0.1") * (25 - v) / (exp((25 - v) / 10) - 1)


def beta_m(v):
    return 4 * exp(-v / 18)


def alpha_h(v):
    return mpf("0.07") * exp(-v / 20)


def beta_h(v):
    return 1 / (exp((30 - v) / 10) + 1)


def equilibrium(v):
    m = alpha_m(v) / (alpha_m(v) + beta_m(v))
    h = alpha_h(v) / (alpha_h(v) + beta_h(v))
    n = alpha_n(v) / (alpha_n(v) + beta_n(v))
    return m, h, n


def drift(m, h, n, v, current):
    return (
        alpha_m(v) * (1 - m) - beta_m(v) * m,
        alpha_h(v) * (1 - h) - beta_h(v) * h,
        alpha_n(v) * (1 - n) - beta_n(v) * n,
        (current - G_NA * m**3 * h * (v - E_NA) - G_K * n**4 * (v - E_K)
         - G_L * (v - E_L)) / C,
    )


def main():
    v = mpf(0)
    print("alpha_n(0) =", mp.nstr(alpha_n(v), 20))
    print("alpha_m(0) =", mp.nstr(alpha_m(v), 20))
    print("beta_h(0)  =", mp.nstr(beta_h(v), 20))
    print("alpha_n(10.00005) =", mp.nstr(alpha_n(mpf("10.00005")), 20))
    print("alpha_m(24.99995) =", mp.nstr(alpha_m(mpf("24.99995")), 20))
    m, h, n = equilibrium(v)
    print("equilibrium(0) =", mp.nstr(m, 20), mp.nstr(h, 20), mp.nstr(n, 20))
    sig = mpf("0.25")
    print("diffusion diag =", *(mp.nstr(sig * p * (1 - p), 20) for p in (m, h, n)))
    b = drift(m, h, n, v, mpf(10))
    print("b_V(eq, I=10) =", mp.nstr(b[3], 20))
    i_rest = G_NA * m**3 * h * (0 - E_NA) + G_K * n**4 * (0 - E_K) + G_L * (0 - E_L)
    print("I_rest =", mp.nstr(i_rest, 20))
    dt = mpf("0.01")
    db = (mpf("0.1"), mpf("-0.1"), mpf("0.05"))
    x = (m, h, n, v)
    step = [x[k] + b[k] * dt for k in range(4)]
    for k in range(3):
        step[k] += sig * x[k] * (1 - x[k]) * db[k]
    print("euler step =", *(mp.nstr(s, 20) for s in step))
    hh = mpf("0.75")
    print("cov(1,2,0.75) =", mp.nstr((1 + mpf(2) ** (2 * hh) - 1) / 2, 20))


if __name__ == "__main__":
    main()
