"""High-precision reference values for the measurement model, the exact
Fokker-Planck density and the reduced-problem closed forms (mpmath, 40 digits).

Run: python3 tests/oracles/measurement.py
"""
from mpmath import mp, mpf, atanh, tanh, cos, sin, cosh, exp, log, sqrt, pi, quad, findroot

mp.dps = 40


def Pi(x):
    return (1 + tanh(x)) / 2


def probs(x, a, d):
    # p0 = (1 - Pi) cos^2 a + Pi cos^2 (a + d) in the qubit basis of the ancilla rotation
    P = Pi(x)
    p0 = (1 - P) * cos(a) ** 2 + P * cos(a + d) ** 2
    return p0, 1 - p0


def eps_update(x, a, d, outcome):
    # position update from the amplitudes, independent of the closed-form steps
    P = Pi(x)
    p0, p1 = probs(x, a, d)
    if outcome == 0:
        Pn = P * cos(a + d) ** 2 / p0
    else:
        Pn = P * sin(a + d) ** 2 / p1
    return atanh(2 * Pn - 1) - x


def mean_step(x, a, d):
    p0, p1 = probs(x, a, d)
    return p0 * eps_update(x, a, d, 0) + p1 * eps_update(x, a, d, 1)


def diffusion(x, a, d):
    p0, p1 = probs(x, a, d)
    return (p0 * eps_update(x, a, d, 0) ** 2 + p1 * eps_update(x, a, d, 1) ** 2) / 2


def analytic(t, x, X):
    return cosh(x) / cosh(X) * exp(-(t * t + (x - X) ** 2) / (2 * t)) / sqrt(2 * pi * t)


def show(name, v):
    print(f"{name} = {mp.nstr(v, 20)}")


if __name__ == "__main__":
    show("Pi(3)", Pi(3))
    show("Pi(-20)", Pi(-20))
    show("x_of_pi(0.3)", atanh(2 * mpf("0.3") - 1))
    for a, d in [(pi / 4, mpf("0.1")), (mpf("0.5"), mpf("0.05")), (mpf("1.2"), mpf("-0.3"))]:
        show(f"eps0(a={mp.nstr(a, 6)}, d={d})", eps_update(mpf("0.37"), a, d, 0))
        show(f"eps1(a={mp.nstr(a, 6)}, d={d})", eps_update(mpf("0.37"), a, d, 1))
    x, a, d = mpf("0.8"), mpf("0.5"), mpf("0.05")
    p0, p1 = probs(x, a, d)
    show("p0(x=0.8,a=0.5,d=0.05)", p0)
    show("mu(x=0.8,a=0.5,d=0.05)", mean_step(x, a, d))
    show("D(x=0.8,a=0.5,d=0.05)", diffusion(x, a, d))
    for dd in [mpf("0.02"), mpf("0.01"), mpf("0.005")]:
        r_mu = mean_step(x, a, dd) - dd ** 2 * tanh(x)
        r_d = diffusion(x, a, dd) - dd ** 2 / 2
        show(f"mu residual d={dd}", r_mu)
        show(f"D residual d={dd}", r_d)
    show("analytic(t=1,x=-11,X=-10)", analytic(1, -11, -10))
    show("analytic mass t=1 X=-10", quad(lambda s: analytic(1, s, -10), [-40, -11, -10, 10]))
    show("analytic mean t=1 X=-10", quad(lambda s: s * analytic(1, s, -10), [-40, -11, -10, 10]))

    # Seebeck: g = C (1 + a sin x), C^2 = 1 / (1 + a^2 / 2)
    a = mpf("-0.8")
    C2 = 1 / (1 + a * a / 2)
    inv2 = quad(lambda s: 1 / (C2 * (1 + a * sin(s)) ** 2), [0, 2 * pi]) / (2 * pi)
    show("seebeck current a=-0.8", -1 / inv2)
    show("seebeck closed (1-a^2)^1.5/(1+a^2/2)", -(1 - a * a) ** mpf(1.5) / (1 + a * a / 2))
    # space-time normalizer in the 'on' phase: F = a (sin x + b sin 2x)
    a, b = mpf("-0.6"), mpf("-0.5")
    show("spacetime C_on", 1 / sqrt(1 + (a * a + (a * b) ** 2) / 2))
    g_min = findroot(lambda s: a * cos(s) + 2 * a * b * cos(2 * s), 1.9)
    show("spacetime argmin", g_min)
    show("spacetime min g", (1 + a * (sin(g_min) + b * sin(2 * g_min))) / sqrt(1 + (a * a + (a * b) ** 2) / 2))
    show("localization g(0.35; 0.7)", (mpf("0.7") - mpf("0.35")) / (1 - mpf("0.35")))
    show("potential(y=2) g=1", -log(cosh(2)))
