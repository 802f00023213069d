"""Selection (SC) and maximal-ratio (MRC) combining of one FSO and one RF branch.

SC output SNR is ``max(g_fso, g_rf)`` and MRC output SNR is ``g_fso + g_rf``
with independent branches.  The MRC CDF and BER are bivariate Fox-H functions
obtained by inverting ``M_fso(-s) M_rf(-s) / s`` term by term over the RF Gamma
mixture; the convolution integrals in this module are their independent
quadrature references.
"""

from __future__ import annotations

import enum
import functools
import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special

from .fso import FsoParams, fso_avg_ber, fso_ccdf, fso_cdf, fso_mgf, fso_weighted_ccdf
from .modulation import ModulationSpec
from .rf import GammaMixture, RfParams, rf_cdf, rf_mgf, rf_mixture, rf_surv_weighted
from .special import BivariateFoxHParams, FoxHParams, fox_h_bivariate

__all__ = [
    "Combiner",
    "HybridLink",
    "sc_cdf",
    "sc_cdf_expanded",
    "sc_outage",
    "sc_avg_ber",
    "mrc_mgf",
    "mrc_cdf",
    "mrc_cdf_oracle",
    "mrc_outage",
    "mrc_avg_ber",
    "mrc_avg_ber_oracle",
]


class Combiner(enum.Enum):
    SC = "sc"
    MRC = "mrc"


@dataclass(frozen=True)
class HybridLink:
    fso: FsoParams
    rf: RfParams
    combiner: Combiner = Combiner.MRC

    def __post_init__(self):
        if isinstance(self.combiner, str):
            object.__setattr__(self, "combiner", Combiner(self.combiner.lower()))

    @property
    def mixture(self) -> GammaMixture:
        return _mixture(self.rf)

    def combine(self, g_fso, g_rf):
        if self.combiner is Combiner.SC:
            return np.maximum(g_fso, g_rf)
        return g_fso + g_rf


@functools.lru_cache(maxsize=256)
def _mixture(rf: RfParams) -> GammaMixture:
    return rf_mixture(rf)


# ---------------------------------------------------------------------------
# Selection combining
# ---------------------------------------------------------------------------


def sc_cdf(link: HybridLink, gamma: float) -> float:
    if gamma < 0:
        raise ValueError("sc_cdf requires gamma >= 0")
    if gamma == 0:
        return 0.0
    return fso_cdf(link.fso, gamma) * rf_cdf(link.mixture, gamma)


def sc_cdf_expanded(link: HybridLink, gamma: float) -> float:
    """The expanded three-term form of the SC CDF (cross-check of :func:`sc_cdf`).

    ``F_fso - sum_i sum_r C_i e^{-g/W_i} (g/W_i)^r / r! + ccdf_fso * (same sum)``.
    """
    if gamma <= 0:
        return 0.0
    surv_rf = sum(c * special.gammaincc(k, gamma / w) for c, k, w in link.mixture.components)
    return fso_cdf(link.fso, gamma) - surv_rf + fso_ccdf(link.fso, gamma) * surv_rf


def sc_outage(link: HybridLink, gamma_th: float) -> float:
    if not gamma_th > 0:
        raise ValueError("sc_outage requires gamma_th > 0")
    return sc_cdf(link, gamma_th)


def sc_avg_ber(link: HybridLink, mod: ModulationSpec, *, enforce_detection: bool = True) -> float:
    """Closed-form SC average BER as ``P1 - P2 + P3``.

    ``P1`` is the FSO-only BER, ``P2`` the RF survival-weighted term and
    ``P3`` a sum of H^{4,1}_{3,4} functions with shifted order ``p + r``.
    """
    if enforce_detection:
        mod.check_detection(link.fso.r)
    mix = link.mixture
    p1 = fso_avg_ber(link.fso, mod, enforce_detection=False)
    p2 = 0.5 * mod.delta * sum(rf_surv_weighted(mix, mod.p, qk) for qk in mod.q)
    p3 = 0.0
    for qk in mod.q:
        for c, k, w in mix.components:
            rate = qk + 1.0 / w
            for r in range(k):
                coef = c * math.exp(mod.p * math.log(qk) + math.lgamma(mod.p + r)
                                    - math.lgamma(mod.p) - math.lgamma(r + 1)
                                    - r * math.log(w) - (mod.p + r) * math.log(rate))
                p3 += coef * fso_weighted_ccdf(link.fso, mod.p + r, rate)
    return p1 - p2 + 0.5 * mod.delta * p3


# ---------------------------------------------------------------------------
# Maximal-ratio combining
# ---------------------------------------------------------------------------


def mrc_mgf(link: HybridLink, s: float) -> float:
    return fso_mgf(link.fso, s) * rf_mgf(link.mixture, s)


def _fso_block(fso: FsoParams) -> FoxHParams:
    x2 = fso.xi ** 2
    return FoxHParams(3, 1, [(1.0, 1.0 / fso.r), (x2 + 1, 1.0)],
                      [(x2, 1.0), (fso.alpha, 1.0), (fso.beta, 1.0)])


@functools.lru_cache(maxsize=4096)
def mrc_kernel(fso: FsoParams, shape: int, p: float | None = None) -> BivariateFoxHParams:
    """Bivariate Fox-H layout for one mixture component of shape ``m_i``.

    With ``p`` given the extra joint numerator ``G(p - s - t/r)`` of the BER
    integral is included.
    """
    first = FoxHParams(1, 1, [(1.0, 1.0)], [(float(shape), 1.0)])
    upper = () if p is None else ((1.0 - p, 1.0, 1.0 / fso.r),)
    return BivariateFoxHParams(
        n0=len(upper),
        joint_upper=upper,
        joint_lower=((0.0, 1.0, 1.0 / fso.r),),
        first=first,
        second=_fso_block(fso),
    )


@functools.lru_cache(maxsize=65536)
def _bivariate(kernel: BivariateFoxHParams, x: float, y: float) -> float:
    return fox_h_bivariate(kernel, x, y)


def mrc_cdf(link: HybridLink, gamma: float) -> float:
    """MRC output-SNR CDF as a Gamma-mixture sum of bivariate Fox-H functions."""
    if gamma < 0:
        raise ValueError("mrc_cdf requires gamma >= 0")
    if gamma == 0:
        return 0.0
    fso = link.fso
    y = fso.argument(gamma)
    acc = 0.0
    for c, k, w in link.mixture.components:
        acc += c / math.factorial(k - 1) * _bivariate(mrc_kernel(fso, k), gamma / w, y)
    return min(max(fso.norm / fso.r * acc, 0.0), 1.0)


def mrc_outage(link: HybridLink, gamma_th: float) -> float:
    if not gamma_th > 0:
        raise ValueError("mrc_outage requires gamma_th > 0")
    return mrc_cdf(link, gamma_th)


def mrc_avg_ber(link: HybridLink, mod: ModulationSpec, *, enforce_detection: bool = True) -> float:
    """Closed-form MRC average BER: one bivariate Fox-H per ``(q_k, component)`` pair."""
    if enforce_detection:
        mod.check_detection(link.fso.r)
    fso = link.fso
    acc = 0.0
    for qk in mod.q:
        y = fso.alpha * fso.beta * fso.h * (fso.mu_r * qk) ** (-1.0 / fso.r)
        for c, k, w in link.mixture.components:
            kern = mrc_kernel(fso, k, mod.p)
            acc += c / math.factorial(k - 1) * _bivariate(kern, 1.0 / (qk * w), y)
    return mod.delta * fso.norm / (2 * fso.r * math.gamma(mod.p)) * acc


# ---------------------------------------------------------------------------
# Quadrature references
# ---------------------------------------------------------------------------


def mrc_cdf_oracle(link: HybridLink, gamma: float, *, epsrel: float = 1e-10) -> float:
    """``int_0^g F_fso(g - t) f_rf(t) dt`` by adaptive quadrature."""
    if gamma < 0:
        raise ValueError("mrc_cdf_oracle requires gamma >= 0")
    if gamma == 0:
        return 0.0
    mix = link.mixture

    def integrand(t):
        return fso_cdf(link.fso, gamma - t) * mix.pdf(t)

    val, _ = integrate.quad(integrand, 0.0, gamma, epsabs=0.0, epsrel=epsrel, limit=200)
    return val


def _rf_weighted_shift(mix: GammaMixture, p: float, qk: float, x: float) -> float:
    """``int_0^inf (x+t)^(p-1) exp(-q (x+t)) f_rf(t) dt``."""

    def integrand(t):
        return (x + t) ** (p - 1) * math.exp(-qk * (x + t)) * mix.pdf(t)

    scale = max(w for _, _, w in mix.components)
    hi = 60.0 / qk + 40.0 * scale * max(k for _, k, _ in mix.components)
    val, _ = integrate.quad(integrand, 0.0, hi, epsabs=0.0, epsrel=1e-12, limit=200)
    return val


def mrc_avg_ber_oracle(link: HybridLink, mod: ModulationSpec, *, epsrel: float = 1e-9) -> float:
    """Average BER of the convolution CDF by quadrature.

    ``delta/(2 Gamma(p)) sum_k q^p int_0^inf F_fso(x) int_0^inf (x+t)^(p-1)
    e^{-q(x+t)} f_rf(t) dt dx`` -- the CDF functional applied to the
    convolution ``F_mrc = F_fso * f_rf`` with the two integrations swapped so
    each FSO CDF value is computed once.
    """
    mix = link.mixture
    acc = 0.0
    for qk in mod.q:
        def outer(u):
            # x = u^2 tames the x^(p-1)-type behaviour near the origin
            x = u * u
            return 2.0 * u * fso_cdf(link.fso, x) * _rf_weighted_shift(mix, mod.p, qk, x)

        total, lo, hi = 0.0, 0.0, math.sqrt(4.0 / qk)
        while True:
            part, _ = integrate.quad(outer, lo, hi, epsabs=0.0, epsrel=epsrel, limit=200)
            total += part
            # F <= 1 bounds the remaining tail by the RF-free Gamma tail
            tail = math.gamma(mod.p) * special.gammaincc(mod.p, qk * hi * hi) / qk ** mod.p
            if tail < 1e-14 * total or tail < 1e-300:
                break
            lo, hi = hi, hi * 1.6
        acc += qk ** mod.p * total
    return mod.delta / (2 * math.gamma(mod.p)) * acc
