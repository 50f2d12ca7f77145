# Normalization integrals N = ∬ |g(p,q)|² d³p/(2E_p) d³q/(2E_q) of the
# unnormalized entangled Gaussian, m = 1. x = 0 factorizes into a 1D radial
# integral done with scipy; x > 0 uses plain Monte Carlo sampling p and q
# from the Gaussian itself.
import numpy as np
from scipy import integrate

def radial_x0(sigma):
    f = lambda p: 4 * np.pi * p**2 * np.exp(-p**2 / (2 * sigma**2)) / (2 * np.sqrt(p**2 + 1))
    v, e = integrate.quad(f, 0, np.inf, epsabs=1e-15, epsrel=1e-13)
    return v * v

def mc(sigma, x, n, seed=7):
    rng = np.random.default_rng(seed)
    # |g|² = exp(-a (p²+q²) + b p·q) is a 6D Gaussian with covariance C
    a = 1 / (4 * sigma**2) + 1 / (4 * sigma**2 * (1 - x * x))
    b = 2 * x / (4 * sigma**2 * (1 - x * x))
    prec = np.array([[2 * a, -b], [-b, 2 * a]])
    cov = np.linalg.inv(prec)
    vol = (2 * np.pi) ** 3 / np.linalg.det(prec) ** 1.5
    vals = []
    for _ in range(20):
        z = rng.multivariate_normal([0, 0], cov, size=(n // 20, 3))
        p, q = z[..., 0], z[..., 1]
        ep = np.sqrt((p**2).sum(1) + 1)
        eq = np.sqrt((q**2).sum(1) + 1)
        vals.append(np.mean(vol / (4 * ep * eq)))
    vals = np.array(vals)
    return vals.mean(), vals.std(ddof=1) / np.sqrt(len(vals))

for s in (1.0, 4.0):
    print(f"x=0 sigma={s}: {radial_x0(s):.15e}")
for s, x in ((1.0, 0.0), (1.0, 0.5), (1.0, 0.8), (4.0, 0.8)):
    m, e = mc(s, x, 10_000_000)
    print(f"mc sigma={s} x={x}: {m:.10e} +- {e:.3e}")
