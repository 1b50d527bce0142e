"""Seed fundamental solutions for the zero potential and the scalar kernel c_mu.

For q = 0 the fundamental analytic solutions are diagonal exponentials, so
everything here is evaluated in closed form.  Keep |Im lambda| * |x| below
about 700 when calling ``seed_fas`` directly; the dressing code works with
rescaled exponents and does not have this limit.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .lie_algebra import AlgebraBasis, CartanElement, cartan_element

FLAVORS = ("NWave", "NLS")


@dataclass(frozen=True)
class SpectralPair:
    lambda_plus: complex
    lambda_minus: complex
    involution: bool = False

    def __post_init__(self):
        lp, lm = complex(self.lambda_plus), complex(self.lambda_minus)
        object.__setattr__(self, "lambda_plus", lp)
        object.__setattr__(self, "lambda_minus", lm)
        if not lp.imag > 0:
            raise ValueError(f"lambda_plus must lie in the upper half-plane, got {lp}")
        if not lm.imag < 0:
            raise ValueError(f"lambda_minus must lie in the lower half-plane, got {lm}")
        if self.involution and lm != lp.conjugate():
            raise ValueError("involution requires lambda_minus == conj(lambda_plus)")

    @classmethod
    def conjugate_pair(cls, lambda_plus) -> "SpectralPair":
        lp = complex(lambda_plus)
        return cls(lp, lp.conjugate(), True)

    @property
    def l(self) -> complex:
        """lambda_minus - lambda_plus."""
        return self.lambda_minus - self.lambda_plus

    def shifted(self, eps) -> "SpectralPair":
        return SpectralPair(self.lambda_plus + eps, self.lambda_minus + eps)

    def to_dict(self) -> dict:
        return {
            "lambda_plus": [self.lambda_plus.real, self.lambda_plus.imag],
            "lambda_minus": [self.lambda_minus.real, self.lambda_minus.imag],
            "involution": self.involution,
        }


@dataclass(frozen=True)
class DispersionData:
    J: CartanElement
    I: CartanElement | None
    flavor: str

    def __post_init__(self):
        if self.flavor not in FLAVORS:
            raise ValueError(f"unknown flavor {self.flavor!r}")
        if self.flavor == "NWave" and self.I is None:
            raise ValueError("NWave dispersion needs both J and I")
        for name, el in (("J", self.J), ("I", self.I)):
            if el is not None and not np.all(np.isreal(el.coords)):
                raise ValueError(f"{name} must have real coordinates")

    @property
    def j_diag(self) -> np.ndarray:
        return np.diag(self.J.matrix).real.copy()

    @property
    def i_diag(self) -> np.ndarray:
        if self.I is None:
            return np.zeros(self.J.matrix.shape[0])
        return np.diag(self.I.matrix).real.copy()


def nwave_dispersion(basis: AlgebraBasis, J, I) -> DispersionData:
    return DispersionData(cartan_element(basis, J), cartan_element(basis, I, require_regular=False), "NWave")


def nls_dispersion(basis: AlgebraBasis, J) -> DispersionData:
    return DispersionData(cartan_element(basis, J), None, "NLS")


def c_factor(lam, pair: SpectralPair, mu=1):
    """c_mu(lambda) = ((lambda - lambda_+)/(lambda - lambda_-))^mu.

    Integer mu is evaluated by plain powers.  Fractional mu uses the
    principal logarithm; on the cut (negative real ratio) the argument is
    taken as +pi.

    >>> complex(c_factor(3, SpectralPair(1j, -1j), 1))
    (0.8-0.6j)
    """
    mu = Fraction(mu)
    lam = np.asarray(lam, dtype=complex)
    den = lam - pair.lambda_minus
    num = lam - pair.lambda_plus
    if mu > 0 and np.any(den == 0):
        raise ZeroDivisionError("c_mu evaluated at its pole lambda = lambda_minus")
    if mu < 0 and np.any(num == 0):
        raise ZeroDivisionError("c_mu evaluated at its pole lambda = lambda_plus")
    with np.errstate(divide="ignore", invalid="ignore"):
        w = num / den
    if mu.denominator == 1:
        out = w ** int(mu)
    else:
        w = w.real + 1j * np.where(w.imag == 0, 0.0, w.imag)
        with np.errstate(divide="ignore"):
            out = np.exp(float(mu) * (np.log(np.abs(w)) + 1j * np.angle(w)))
    return out[()] if out.ndim == 0 else out


def fas_exponent(disp: DispersionData, x, t, lam) -> np.ndarray:
    """Diagonal exponent of the seed solution, shape (..., N)."""
    x = np.asarray(x, dtype=float)[..., None]
    t = np.asarray(t, dtype=float)[..., None]
    lam = np.asarray(lam, dtype=complex)
    if lam.ndim:
        lam = lam[..., None]
    Jd = disp.j_diag
    if disp.flavor == "NWave":
        return -1j * lam * (Jd * x + disp.i_diag * t)
    return -1j * lam * Jd * (x + lam * t)


def fas_log_derivative(disp: DispersionData, x, t, lam) -> np.ndarray:
    """Diagonal of chi^{-1} d chi / d lambda, shape (..., N)."""
    x = np.asarray(x, dtype=float)[..., None]
    t = np.asarray(t, dtype=float)[..., None]
    lam = np.asarray(lam, dtype=complex)
    if lam.ndim:
        lam = lam[..., None]
    Jd = disp.j_diag
    if disp.flavor == "NWave":
        return -1j * (Jd * x + disp.i_diag * t) + 0 * lam
    return -1j * Jd * (x + 2 * lam * t)


def _check_dims(basis, disp):
    if disp.J.matrix.shape[0] != basis.rep_dim:
        raise ValueError("dispersion data does not match the algebra dimension")


def _diag_embed(d):
    out = np.zeros(d.shape + d.shape[-1:], dtype=complex)
    idx = np.arange(d.shape[-1])
    out[..., idx, idx] = d
    return out


def seed_fas(basis: AlgebraBasis, disp: DispersionData, x, t, lam) -> np.ndarray:
    """chi_0(x, t, lambda) for q = 0, broadcast over array inputs."""
    _check_dims(basis, disp)
    return _diag_embed(np.exp(fas_exponent(disp, x, t, lam)))


def seed_fas_lambda_derivative(basis: AlgebraBasis, disp: DispersionData, x, t, lam) -> np.ndarray:
    _check_dims(basis, disp)
    ex = fas_exponent(disp, x, t, lam)
    return _diag_embed(fas_log_derivative(disp, x, t, lam) * np.exp(ex))
