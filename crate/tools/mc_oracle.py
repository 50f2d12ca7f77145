# Brute-force Monte Carlo oracle for the boosted singlet with a product
# Gaussian momentum amplitude (x = 0). Samples p and q directly, evaluates the
# closed-form boosted amplitude vector and reports the spin concurrence with a
# batch-means standard error.
import sys
import numpy as np

sigma, xi, n_total, batches = float(sys.argv[1]), float(sys.argv[2]), int(sys.argv[3]), 20
rng = np.random.default_rng(20020723)
m = 1.0


def coeffs(v):
    p = np.linalg.norm(v, axis=1)
    E = np.sqrt(p**2 + m**2)
    pz = v[:, 2]
    Ep = E * np.cosh(xi) + pz * np.sinh(xi)
    a = np.sqrt((E + m) / (Ep + m)) * (np.cosh(xi / 2) + pz / (E + m) * np.sinh(xi / 2))
    pt = np.hypot(v[:, 0], v[:, 1])
    b = pt / np.sqrt((E + m) * (Ep + m)) * np.sinh(xi / 2)
    phi = np.arctan2(v[:, 1], v[:, 0])
    return a, b, phi, E


def concurrence(rho):
    sy = np.array([[0, -1j], [1j, 0]])
    yy = np.kron(sy, sy)
    rt = yy @ rho.conj() @ yy
    ev = np.sort(np.sqrt(np.abs(np.linalg.eigvals(rho @ rt))))[::-1]
    return max(0.0, ev[0] - ev[1] - ev[2] - ev[3])


rhos = []
per = n_total // batches
for _ in range(batches):
    p = rng.normal(0, sigma, (per, 3))
    q = rng.normal(0, sigma, (per, 3))
    ap, bp, fp, Ep = coeffs(p)
    aq, bq, fq, Eq = coeffs(q)
    w = 1.0 / (4 * Ep * Eq)
    s = 1 / np.sqrt(2)
    v = np.stack([
        s * (ap * bq * np.exp(-1j * fq) - aq * bp * np.exp(-1j * fp)),
        s * (ap * aq + bp * bq * np.exp(-1j * (fp - fq))),
        s * (-ap * aq - bp * bq * np.exp(1j * (fp - fq))),
        s * (ap * bq * np.exp(1j * fq) - aq * bp * np.exp(1j * fp)),
    ], axis=1)
    rho = np.einsum("n,ni,nj->ij", w, v, v.conj()) / w.sum()
    rhos.append(rho)
rhos = np.array(rhos)
cs = np.array([concurrence(r) for r in rhos])
rho = rhos.mean(axis=0)
c = concurrence(rho)
se = cs.std(ddof=1) / np.sqrt(batches)
np.set_printoptions(precision=8, suppress=True, linewidth=150)
print("rho", rho.real)
print(f"concurrence {c:.8f} se {se:.2e}")
