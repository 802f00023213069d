"""kappa-mu shadowed fading with integer mu and m.

For integer ``mu`` and ``m`` the MGF of the SNR is rational::

    M(s) = (1 - s W1)^(m - mu) / (1 - s W2)^m,
    W1 = gbar / (mu (1 + kappa)),   W2 = (mu kappa + m) gbar / (mu (1 + kappa) m)

so a partial-fraction expansion in ``(1 - s W)^-j`` terms gives the exact
finite Gamma mixture ``sum_i C_i Gamma(m_i, W_i)`` of the SNR density.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath
import numpy as np
from scipy import special

from .modulation import ModulationSpec

__all__ = [
    "RfParams",
    "GammaMixture",
    "rf_mixture",
    "rf_pdf_hypergeometric",
    "rf_pdf",
    "rf_cdf",
    "rf_mgf",
    "rf_outage",
    "rf_avg_ber",
    "rf_sample_snr",
]


@dataclass(frozen=True)
class RfParams:
    kappa: float
    mu: int
    m: int
    gamma_bar: float

    def __post_init__(self):
        for name in ("mu", "m"):
            v = getattr(self, name)
            if isinstance(v, float) and not v.is_integer():
                raise ValueError(f"RfParams.{name} must be an integer, got {v}")
            if int(v) < 1:
                raise ValueError(f"RfParams.{name} must be >= 1")
            object.__setattr__(self, name, int(v))
        if not self.kappa >= 0:
            raise ValueError("RfParams.kappa must be non-negative")
        if not self.gamma_bar > 0:
            raise ValueError("RfParams.gamma_bar must be positive")

    def with_snr(self, gamma_bar: float) -> "RfParams":
        return RfParams(self.kappa, self.mu, self.m, gamma_bar)


@dataclass(frozen=True)
class GammaMixture:
    """Components ``(C_i, m_i, Omega_i)``: weight, integer shape, scale."""

    components: tuple[tuple[float, int, float], ...]

    @property
    def weights(self) -> np.ndarray:
        return np.array([c for c, _, _ in self.components])

    def pdf(self, gamma):
        g = np.asarray(gamma, dtype=float)
        out = sum(c * g ** (k - 1) * np.exp(-g / w) / (math.factorial(k - 1) * w ** k)
                  for c, k, w in self.components)
        out = np.asarray(out, dtype=float)
        return float(out) if out.ndim == 0 else out


def rf_mixture(params: RfParams) -> GammaMixture:
    """Exact Gamma-mixture representation of the kappa-mu shadowed SNR."""
    kappa, mu, m, gbar = params.kappa, params.mu, params.m, params.gamma_bar
    w1 = gbar / (mu * (1 + kappa))
    w2 = (mu * kappa + m) * gbar / (mu * (1 + kappa) * m)
    if kappa == 0:
        return GammaMixture(((1.0, mu, gbar / mu),))
    if m == mu:
        return GammaMixture(((1.0, m, w2),))
    if m > mu:
        # (1 + W1 x)^(m-mu) = sum_j binom(m-mu, j) rho^j (1-rho)^(m-mu-j) (1 + W2 x)^j
        rho = w1 / w2
        d = m - mu
        comps = tuple(
            (math.comb(d, j) * rho ** j * (1 - rho) ** (d - j), m - j, w2)
            for j in range(d + 1)
        )
        return GammaMixture(comps)
    # m < mu: 1 / ((1 + W1 x)^n1 (1 + W2 x)^n2) with poles P1 = -1/W1, P2 = -1/W2
    n1, n2 = mu - m, m
    P1, P2 = -1.0 / w1, -1.0 / w2
    comps = []
    for (na, wa, Pa), (nb, wb, Pb) in (((n1, w1, P1), (n2, w2, P2)), ((n2, w2, P2), (n1, w1, P1))):
        for k in range(na):
            j = na - k
            coef = (wa ** (j - na) * wb ** (-nb) * (-1) ** k * math.comb(nb + k - 1, k)
                    * (Pa - Pb) ** (-nb - k))
            comps.append((coef, j, wa))
    return GammaMixture(tuple(comps))


def rf_pdf_hypergeometric(params: RfParams, gamma: float) -> float:
    """Direct evaluation of the confluent-hypergeometric form of the SNR PDF."""
    if not gamma > 0:
        raise ValueError("rf_pdf_hypergeometric requires gamma > 0")
    kappa, mu, m, gbar = params.kappa, params.mu, params.m, params.gamma_bar
    x = gamma / gbar
    arg = mu * mu * kappa * (1 + kappa) / (mu * kappa + m) * x
    log_pref = (mu * math.log(mu) + m * math.log(m) + mu * math.log1p(kappa)
                - math.lgamma(mu) - math.log(gbar) - m * math.log(mu * kappa + m)
                + (mu - 1) * math.log(x) - mu * (1 + kappa) * x)
    if m >= mu:
        # Kummer: 1F1(m; mu; z) = e^z 1F1(mu - m; mu; -z), a terminating series
        a = mu - m
        term, total = 1.0, 1.0
        for k in range(-a):
            term *= (a + k) / (mu + k) * (-arg) / (k + 1)
            total += term
        return math.exp(log_pref + arg) * total
    return float(mpmath.exp(log_pref + mpmath.log(mpmath.hyp1f1(m, mu, arg))))


def rf_pdf(mix: GammaMixture, gamma):
    return mix.pdf(gamma)


def rf_cdf(mix: GammaMixture, gamma):
    """``1 - sum_i C_i exp(-g/W_i) sum_{r<m_i} (g/W_i)^r / r!``."""
    g = np.asarray(gamma, dtype=float)
    if np.any(g < 0):
        raise ValueError("rf_cdf requires gamma >= 0")
    # gammaincc(k, x) = exp(-x) sum_{r<k} x^r / r! for integer k
    surv = sum(c * special.gammaincc(k, g / w) for c, k, w in mix.components)
    out = np.clip(1.0 - surv, 0.0, 1.0)
    return float(out) if out.ndim == 0 else out


def rf_outage(mix: GammaMixture, gamma_th: float) -> float:
    if not gamma_th > 0:
        raise ValueError("rf_outage requires gamma_th > 0")
    return rf_cdf(mix, gamma_th)


def rf_mgf(mix: GammaMixture, s: float) -> float:
    """``sum_i C_i (1 - s W_i)^(-m_i)`` for ``s < 0``."""
    if not s < 0:
        raise ValueError("rf_mgf is defined here for s < 0")
    return float(sum(c * (1 - s * w) ** (-k) for c, k, w in mix.components))


def rf_surv_weighted(mix: GammaMixture, p: float, qk: float) -> float:
    """``q^p / Gamma(p) * int g^(p-1) exp(-q g) (1 - F(g)) dg`` in closed form."""
    acc = 0.0
    for c, k, w in mix.components:
        rate = qk + 1.0 / w
        for r in range(k):
            acc += c * math.exp(math.lgamma(p + r) - math.lgamma(r + 1) - math.lgamma(p)
                                - r * math.log(w) - (p + r) * math.log(rate))
    return qk ** p * acc


def rf_avg_ber(mix: GammaMixture, mod: ModulationSpec) -> float:
    """Closed-form average BER of the RF branch (any modulation)."""
    return mod.ceiling - 0.5 * mod.delta * sum(rf_surv_weighted(mix, mod.p, qk) for qk in mod.q)


def rf_sample_snr(params: RfParams, rng: np.random.Generator, size=None):
    """Draw SNRs from the physical cluster model with Gamma shadowing.

    ``W = sum_i (X_i + rho p_i)^2 + (Y_i + rho q_i)^2`` with Gaussian
    scattering of variance ``1/(2 mu (1+kappa))`` per component, equal
    dominant amplitudes ``p_i`` (``q_i = 0``) carrying ``kappa/(1+kappa)`` of
    the power and ``rho^2 ~ Gamma(m, 1/m)``; ``E[W] = 1``.
    """
    n = 1 if size is None else size
    mu, kappa = params.mu, params.kappa
    sigma = math.sqrt(1.0 / (2 * mu * (1 + kappa)))
    p_i = math.sqrt(kappa / ((1 + kappa) * mu))
    rho = np.sqrt(rng.gamma(params.m, 1.0 / params.m, n))
    xy = rng.normal(0.0, sigma, (n, 2 * mu))
    xy[:, :mu] += rho[:, None] * p_i
    g = params.gamma_bar * np.einsum("ij,ij->i", xy, xy)
    return float(g[0]) if size is None else g
