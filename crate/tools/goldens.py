# Independent high-precision evaluation of the Wigner coefficients and the
# boosted singlet amplitudes, used to freeze golden values in the Rust tests.
from mpmath import mp, mpf, sqrt, cosh, sinh, cos, sin, exp, pi, mpc

mp.dps = 40


def wigner(p, theta, phi, m, xi):
    E = sqrt(p**2 + m**2)
    Ep = E * cosh(xi) + p * cos(theta) * sinh(xi)
    a = sqrt((E + m) / (Ep + m)) * (cosh(xi / 2) + p * cos(theta) / (E + m) * sinh(xi / 2))
    b = p * sin(theta) / sqrt((E + m) * (Ep + m)) * sinh(xi / 2)
    return a, b


def singlet_boosted(pp, qq, m, xi):
    ap, bp = wigner(*pp, m, xi)
    aq, bq = wigner(*qq, m, xi)
    fp, fq = pp[2], qq[2]
    j = mpc(0, 1)
    e = lambda t: exp(j * t)
    s = 1 / sqrt(2)
    return [
        s * (ap * bq * e(-fq) - aq * bp * e(-fp)),
        s * (ap * aq + bp * bq * e(-(fp - fq))),
        s * (-ap * aq - bp * bq * e(fp - fq)),
        s * (ap * bq * e(fq) - aq * bp * e(fp)),
    ]


a, b = wigner(mpf(2), pi / 3, mpf("1.2"), mpf(1), mpf("1.5"))
print("wigner alpha", mp.nstr(a, 20), "beta", mp.nstr(b, 20), "a2+b2", mp.nstr(a * a + b * b, 20))
amps = singlet_boosted((mpf(1), pi / 2, mpf(0)), (mpf(1), pi / 2, pi), mpf(1), mpf(1))
for c in amps:
    print("amp", mp.nstr(c.real, 20), mp.nstr(c.imag, 20))
x, sig = mpf("0.5"), mpf(1)
pp = mpf(1)
lg = -(2 * pp**2) / (4 * sig**2) - (2 * pp**2 - 2 * x * pp**2) / (4 * sig**2 * (1 - x**2))
print("gaussian p=q=1 (unnormalised)", mp.nstr(sqrt(exp(lg)), 20))
print("measure weight", mp.nstr(1 / (2 * sqrt(2)), 20))
