"""Explicit soliton formulas for C_2 (two N-wave solutions) and the sl(2)-type NLS soliton.

These evaluators are written out component by component and serve as an
independent reference for the dressing pipeline.  Exponentials are shifted by
a common pointwise factor before the ratio is formed, so the components stay
finite far from the soliton core.

Component keys follow ``nlee.C2_COMPONENTS``: ``Q12b`` is the coefficient of
E_{e1-e2}, ``Q1b1b`` that of E_{-2e1}, and so on.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .spectral import SpectralPair

SQRT2 = np.sqrt(2.0)


def _z(J, I, x, t):
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    return J[0] * x + I[0] * t, J[1] * x + I[1] * t


@dataclass(frozen=True)
class Example2Params:
    """Rank-one C_2 N-wave soliton; seeds ordered (1, 2, 2b, 1b) like the basis."""

    pair: SpectralPair
    J: tuple
    I: tuple
    n0: tuple
    m0: tuple

    def __post_init__(self):
        object.__setattr__(self, "n0", tuple(complex(v) for v in self.n0))
        object.__setattr__(self, "m0", tuple(complex(v) for v in self.m0))
        if len(self.n0) != 4 or len(self.m0) != 4:
            raise ValueError("C_2 seeds have four components")
        if not self.J[0] > self.J[1] > 0:
            raise ValueError("J must satisfy J1 > J2 > 0")

    @classmethod
    def involution(cls, lambda_plus, J, I, n0) -> "Example2Params":
        n0 = tuple(complex(v) for v in n0)
        return cls(SpectralPair.conjugate_pair(lambda_plus), tuple(J), tuple(I), n0, tuple(v.conjugate() for v in n0))


def example2_eval(p: Example2Params, x, t):
    """Return (components, {"rho", "A", "B", "Delta"})."""
    lp, lm = p.pair.lambda_plus, p.pair.lambda_minus
    l = lm - lp
    z1, z2 = _z(p.J, p.I, x, t)
    n1, n2, n2b, n1b = p.n0
    m1, m2, m2b, m1b = p.m0
    i = 1j
    A = 2 * i * l * (m1 * m1b * z1 - m2 * m2b * z2)
    B = 2 * i * l * (n1 * n1b * z1 - n2 * n2b * z2)
    M = np.maximum(np.abs((i * l * z1).real), np.abs((i * l * z2).real))

    def e1(arg):
        return np.exp(arg - M)

    def e2(arg):
        return np.exp(arg - 2 * M)

    rho = (n1 * m1 * e1(i * l * z1) + n2 * m2 * e1(i * l * z2)
           + n2b * m2b * e1(-i * l * z2) + n1b * m1b * e1(-i * l * z1))
    delta = rho**2 + A * B * np.exp(-2 * M)
    f = l / delta
    q = {
        "Q12b": f * (n1 * m2 * rho * e1(i * lm * z2 - i * lp * z1) + n2b * m1b * rho * e1(-i * lm * z1 + i * lp * z2)
                     - n1 * n2b * A * e2(-i * lp * (z1 - z2)) + m2 * m1b * B * e2(-i * lm * (z1 - z2))),
        "Q12": f * (n1 * m2b * rho * e1(-i * lm * z2 - i * lp * z1) - n2 * m1b * rho * e1(-i * lm * z1 - i * lp * z2)
                    + n1 * n2 * A * e2(-i * lp * (z1 + z2)) + m2b * m1b * B * e2(-i * lm * (z1 + z2))),
        "Q11": f / SQRT2 * (2 * n1 * m1b * rho * e1(-i * (lm + lp) * z1) - n1**2 * A * e2(-2 * i * lp * z1)
                            + m1b**2 * B * e2(-2 * i * lm * z1)),
        "Q22": f / SQRT2 * (2 * n2 * m2b * rho * e1(-i * (lm + lp) * z2) + n2**2 * A * e2(-2 * i * lp * z2)
                            - m2b**2 * B * e2(-2 * i * lm * z2)),
        "Q1b2": f * (n2 * m1 * rho * e1(i * lm * z1 - i * lp * z2) + n1b * m2b * rho * e1(-i * lm * z2 + i * lp * z1)
                     + n2 * n1b * A * e2(i * lp * (z1 - z2)) - m1 * m2b * B * e2(i * lm * (z1 - z2))),
        "Q1b2b": f * (n2b * m1 * rho * e1(i * lm * z1 + i * lp * z2) - n1b * m2 * rho * e1(i * lm * z2 + i * lp * z1)
                      + n1b * n2b * A * e2(i * lp * (z1 + z2)) + m1 * m2 * B * e2(i * lm * (z1 + z2))),
        "Q2b2b": f / SQRT2 * (2 * n2b * m2 * rho * e1(i * (lm + lp) * z2) - n2b**2 * A * e2(2 * i * lp * z2)
                              + m2**2 * B * e2(2 * i * lm * z2)),
        "Q1b1b": f / SQRT2 * (2 * n1b * m1 * rho * e1(i * (lm + lp) * z1) + n1b**2 * A * e2(2 * i * lp * z1)
                              - m1**2 * B * e2(2 * i * lm * z1)),
    }
    with np.errstate(over="ignore"):
        growth = np.exp(M)
        aux = {"rho": rho * growth, "A": A, "B": B, "Delta": delta * growth * growth}
    return q, aux


@dataclass(frozen=True)
class Example3Params:
    """Rank-two C_2 N-wave soliton with real positive seed parameters a, b, c."""

    a: float
    b: float
    c: float
    pair: SpectralPair
    J: tuple = (2.0, 1.0)
    I: tuple = (1.0, -1.0)

    def __post_init__(self):
        if min(self.a, self.b, self.c) <= 0:
            raise ValueError("a, b, c must be positive")
        if self.pair.lambda_minus != self.pair.lambda_plus.conjugate():
            raise ValueError("this solution assumes lambda_- = conj(lambda_+)")

    @property
    def nu1(self) -> float:
        return self.pair.lambda_plus.imag

    @property
    def mu1(self) -> float:
        return self.pair.lambda_plus.real

    def seed_vectors(self):
        """(n^1, n^2), with m^1 = n^2 and m^2 = n^1."""
        a, b, c = self.a, self.b, self.c
        return (1.0, a, b, -a * b), (1.0, -a, c, a * c)


def example3_eval(p: Example3Params, x, t, printed: bool = False):
    """Return (components, Delta).

    The default evaluates the expressions that agree with the rank-two
    projector construction.  ``printed=True`` reproduces the widely quoted
    display instead: twice the amplitude, no bc factor in the last term of
    Delta, cosh in place of sinh for Q2b2b and Q1b1b, and no sqrt(bc) in Q2b2b.
    """
    a, b, c = p.a, p.b, p.c
    nu, mu = p.nu1, p.mu1
    z1, z2 = _z(p.J, p.I, x, t)
    sq = np.sqrt(b * c)
    i = 1j
    u1 = 2 * nu * (z1 - z2) - np.log(a * a)
    u2 = 2 * nu * (z1 + z2) - np.log(b * c)
    M = np.maximum(np.abs(u1), np.abs(u2))

    def ch(u):
        return 0.5 * (np.exp(u - M) + np.exp(-u - M))

    def sh(u):
        return 0.5 * (np.exp(u - M) - np.exp(-u - M))

    last = 4 * a * a * (1.0 if printed else b * c)
    delta = a * a * (b + c) ** 2 * np.exp(-M) + a * a * (b - c) ** 2 * ch(u1) + last * ch(u2)
    amp = i * nu * a * a / delta * (1.0 if printed else 0.5)
    w_diff = ch(u1 / 2)          # cosh[nu(z1 - z2) - ln a]
    w_sum = ch(u2 / 2)           # cosh[nu(z1 + z2) - ln sqrt(bc)]
    arg2 = 2 * nu * z2 + np.log(a / sq)
    arg1 = 2 * nu * z1 - np.log(a * sq)
    q = {
        "Q12b": 4 * amp * (b - c) * (b + c) * np.exp(-i * mu * (z1 - z2)) * w_diff,
        "Q12": -8 * amp * sq * (b + c) * np.exp(-i * mu * (z1 + z2)) * w_sum,
        "Q11": 4 * SQRT2 * amp * sq * (b - c) * np.exp(-2 * i * mu * z1) * sh(arg2),
        "Q22": -4 * SQRT2 * amp * sq * (b - c) * np.exp(-2 * i * mu * z2) * sh(arg1),
        "Q1b2": 4 * amp * (b - c) * (b + c) * np.exp(i * mu * (z1 - z2)) * w_diff,
        "Q1b2b": -8 * amp * sq * (b + c) * np.exp(i * mu * (z1 + z2)) * w_sum,
    }
    if printed:
        q["Q2b2b"] = -4 * SQRT2 * amp * (b - c) * np.exp(2 * i * mu * z2) * ch(arg1)
        q["Q1b1b"] = 4 * SQRT2 * amp * sq * (b - c) * np.exp(2 * i * mu * z1) * ch(arg2)
    else:
        q["Q2b2b"] = -4 * SQRT2 * amp * sq * (b - c) * np.exp(2 * i * mu * z2) * sh(arg1)
        q["Q1b1b"] = 4 * SQRT2 * amp * sq * (b - c) * np.exp(2 * i * mu * z1) * sh(arg2)
    with np.errstate(over="ignore"):
        return q, delta * np.exp(M)


@dataclass(frozen=True)
class Example4Params:
    """sl(2)-type NLS soliton inside C_r; eta = m0_1b/m0_1, nu = n0_1b/n0_1."""

    J1: float
    pair: SpectralPair
    eta: complex
    nu: complex

    def __post_init__(self):
        if not self.J1 > 0:
            raise ValueError("J1 must be positive")
        object.__setattr__(self, "eta", complex(self.eta))
        object.__setattr__(self, "nu", complex(self.nu))

    @classmethod
    def from_seeds(cls, J1, pair, n0, m0) -> "Example4Params":
        """Seeds as (first, last) components or full vectors in basis order."""
        n0, m0 = np.ravel(n0), np.ravel(m0)
        return cls(J1, pair, m0[-1] / m0[0], n0[-1] / n0[0])

    @property
    def involution(self) -> bool:
        return self.pair.involution and np.isclose(self.nu, self.eta.conjugate())


def example4_eval(p: Example4Params, x, t, printed: bool = False) -> dict:
    """q, qtilde and the intermediates Delta, Z^pm, f^pm.

    The default amplitude 2 sqrt(2) eta J1 l / Delta matches the rank-one
    symplectic dressing; ``printed=True`` uses eta J1 l / (sqrt(2) Delta),
    which is a quarter of it.
    """
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    lp, lm = p.pair.lambda_plus, p.pair.lambda_minus
    l = lm - lp
    J1, eta, nu = p.J1, p.eta, p.nu
    Zp = 1j * J1 * lp * (x + lp * t)
    Zm = 1j * J1 * lm * (x + lm * t)
    fp = 1j * J1 * l * (x + 2 * lp * t)
    fm = 1j * J1 * l * (x + 2 * lm * t)
    w = Zm - Zp
    M = np.maximum.reduce([2 * np.abs(w.real), np.abs(2 * Zp.real), np.abs(2 * Zm.real)])
    en = eta * nu
    delta_s = (np.exp(2 * w - M) + 2 * en * np.exp(-M) + en * en * np.exp(-2 * w - M)
               + 4 * en * fp * fm * np.exp(-M))
    pref = (1 / SQRT2) if printed else 2 * SQRT2
    q = pref * eta * J1 * l / delta_s * ((1 - fm) * np.exp(-2 * Zp - M) + en * (1 + fp) * np.exp(-2 * Zm - M))
    qt = -pref * nu * J1 * l / delta_s * ((1 - fp) * np.exp(2 * Zm - M) + en * (1 + fm) * np.exp(2 * Zp - M))
    with np.errstate(over="ignore"):
        delta = delta_s * np.exp(M)
    return {"q": q, "qtilde": qt, "Delta": delta, "Zp": Zp, "Zm": Zm, "fp": fp, "fm": fm}


def example4_delta_involution(p: Example4Params, x, t):
    """Delta written as 4|eta|^2 {cosh^2[...] + 4 J1^2 nu1^2 [...]} (involution only)."""
    if not p.involution:
        raise ValueError("the cosh^2 form needs lambda_- = conj(lambda_+) and nu = conj(eta)")
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    nu1, mu1 = p.pair.lambda_plus.imag, p.pair.lambda_plus.real
    J1, ae = p.J1, abs(p.eta)
    s = x + 2 * mu1 * t
    return 4 * ae**2 * (np.cosh(2 * J1 * nu1 * s - np.log(ae)) ** 2 + 4 * J1**2 * nu1**2 * (s**2 + 4 * nu1**2 * t**2))
