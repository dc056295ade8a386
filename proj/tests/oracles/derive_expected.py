"""Reference values frozen into the unit tests, recomputed at 30 digits."""

from mpmath import mp, mpf, exp, log, sqrt

mp.dps = 30


def width(m, n, alpha):
    return sqrt(2 * log(2 / mpf(alpha)) / min(m, n))


def complexity(kl, n, delta, factor=2):
    return sqrt((kl + log(factor * sqrt(n) / mpf(delta))) / (2 * n))


def kl_1d(mu_p, var_p, mu_q, var_q):
    mu_p, var_p, mu_q, var_q = map(mpf, (mu_p, var_p, mu_q, var_q))
    return (log(var_q / var_p) + (var_p + (mu_p - mu_q) ** 2) / var_q - 1) / 2


rows = {
    "rbf([0],[1],1)": exp(-1),
    "rbf([0,0],[3,4],0.01)": exp(mpf("-0.25")),
    "two-point mmd2": 2 - 2 * exp(-1),
    "width(200,200,0.05)": width(200, 200, "0.05"),
    "width(50,100,0.1)": width(50, 100, "0.1"),
    "width(8,8,0.2)": width(8, 8, "0.2"),
    "kl N(0,4)||N(0,1)": kl_1d(0, 4, 0, 1),
    "complexity(0,100,0.05)": complexity(0, 100, "0.05"),
    "complexity(10,100,0.05)": complexity(10, 100, "0.05"),
    "population upper (0.1, L=2, mmd=0.05)": mpf("0.1") + complexity(0, 100, "0.05") + mpf("0.1"),
    "finite complexity(0,100,0.05)": complexity(0, 100, "0.05", factor=4),
    "width(200,200,0.025)": width(200, 200, "0.025"),
    "finite upper (0.1, L=1, mmd=0.2)": mpf("0.1") + complexity(0, 100, "0.05", factor=4)
    + mpf("0.2") + width(200, 200, "0.025"),
    "pac lower (0.5)": mpf("0.5") - complexity(0, 100, "0.05"),
    "worst case (0.1, L=2, eps=0.1)": mpf("0.1") + complexity(0, 100, "0.05") + mpf("0.2"),
    "interval lower (0.3, L=1, eps=0.05)": mpf("0.3") - complexity(0, 100, "0.05") - mpf("0.05"),
    "interval upper (0.3, L=1, eps=0.05)": mpf("0.3") + complexity(0, 100, "0.05") + mpf("0.05"),
    "interval width": 2 * complexity(0, 100, "0.05") + mpf("0.1"),
    "geometry lhs": sqrt(2) * mpf("0.1"),
    "kl from fixture posterior.csv/prior.csv": sum(
        kl_1d(m, v, 0, 1) for m, v in [("0.5", "0.25"), ("-0.2", "0.5"), ("1.0", "1.0")]
    ),
}

if __name__ == "__main__":
    for name, value in rows.items():
        print(f"{name:42s} {mp.nstr(value, 15)}")
