"""Gamma-Gamma turbulence with pointing errors (HD and IM/DD detection)."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .modulation import ModulationSpec
from .special import FoxHParams, MeijerGParams, fox_h, meijer_g

__all__ = [
    "TURBULENCE",
    "FsoParams",
    "fso_pdf",
    "fso_cdf",
    "fso_ccdf",
    "fso_mgf",
    "fso_outage",
    "fso_avg_ber",
    "fso_mean_snr",
    "fso_sample_snr",
]

# (alpha, beta) presets
TURBULENCE = {
    "weak": (2.902, 2.51),
    "moderate": (2.296, 1.822),
    "strong": (2.064, 1.342),
}


@dataclass(frozen=True)
class FsoParams:
    """FSO branch: scintillation ``alpha``/``beta``, pointing ratio ``xi``,
    detection order ``r`` (1 = HD, 2 = IM/DD) and average electrical SNR
    ``mu_r`` in linear units."""

    alpha: float
    beta: float
    xi: float
    r: int
    mu_r: float

    def __post_init__(self):
        if not (self.alpha > 0 and self.beta > 0 and self.xi > 0 and self.mu_r > 0):
            raise ValueError("FsoParams: alpha, beta, xi and mu_r must be positive")
        if self.r not in (1, 2):
            raise ValueError("FsoParams: detection order r must be 1 (HD) or 2 (IM/DD)")

    @classmethod
    def preset(cls, turbulence: str, *, xi: float = 1.0, r: int = 1, mu_r: float = 1.0):
        alpha, beta = TURBULENCE[turbulence]
        return cls(alpha, beta, xi, r, mu_r)

    @property
    def h(self) -> float:
        return self.xi ** 2 / (self.xi ** 2 + 1)

    @property
    def norm(self) -> float:
        """``xi^2 / (Gamma(alpha) Gamma(beta))``."""
        return self.xi ** 2 / (math.gamma(self.alpha) * math.gamma(self.beta))

    def with_snr(self, mu_r: float) -> "FsoParams":
        return FsoParams(self.alpha, self.beta, self.xi, self.r, mu_r)

    def argument(self, gamma: float) -> float:
        """``alpha beta h (gamma / mu_r)^(1/r)``."""
        return self.alpha * self.beta * self.h * (gamma / self.mu_r) ** (1.0 / self.r)


def fso_pdf(params: FsoParams, gamma: float) -> float:
    if not gamma > 0:
        raise ValueError("fso_pdf requires gamma > 0")
    x2 = params.xi ** 2
    g = meijer_g(MeijerGParams(3, 0, (x2 + 1,), (x2, params.alpha, params.beta)),
                 params.argument(gamma))
    return params.norm * g / (params.r * gamma)


def fso_ccdf(params: FsoParams, gamma: float) -> float:
    """``1 - F(gamma)`` as the G^{4,0}_{2,4} term of the closed-form CDF."""
    if gamma <= 0:
        return 1.0
    x2 = params.xi ** 2
    g = meijer_g(MeijerGParams(4, 0, (1.0, x2 + 1), (0.0, x2, params.alpha, params.beta)),
                 params.argument(gamma))
    return params.norm * g


def fso_cdf(params: FsoParams, gamma: float) -> float:
    """SNR CDF.

    Evaluated as ``norm * G^{3,1}_{2,4}[z | 1, xi^2+1; xi^2, alpha, beta, 0]``,
    which is ``1 - norm * G^{4,0}_{2,4}[...]`` with the contour moved across
    the pole at the origin; this keeps full relative accuracy in the lower
    tail where the outage probabilities live.  Above one half the complement
    form is used so the upper tail is accurate too.
    """
    if gamma < 0:
        raise ValueError("fso_cdf requires gamma >= 0")
    if gamma == 0:
        return 0.0
    x2 = params.xi ** 2
    g = meijer_g(MeijerGParams(3, 1, (1.0, x2 + 1), (x2, params.alpha, params.beta, 0.0)),
                 params.argument(gamma))
    F = params.norm * g
    if F > 0.5:
        F = 1.0 - fso_ccdf(params, gamma)
    return min(max(F, 0.0), 1.0)


def fso_outage(params: FsoParams, gamma_th: float) -> float:
    if not gamma_th > 0:
        raise ValueError("fso_outage requires gamma_th > 0")
    return fso_cdf(params, gamma_th)


def fso_mgf(params: FsoParams, s: float) -> float:
    """``E[exp(s gamma)]`` for ``s < 0``."""
    if not s < 0:
        raise ValueError("fso_mgf is defined here for s < 0")
    x2 = params.xi ** 2
    z = params.alpha * params.beta * params.h * (-1.0 / (params.mu_r * s)) ** (1.0 / params.r)
    H = fox_h(FoxHParams(3, 1, [(1.0, 1.0 / params.r), (x2 + 1, 1.0)],
                         [(x2, 1.0), (params.alpha, 1.0), (params.beta, 1.0)]), z)
    return params.norm * H / params.r


def _ber_kernel(params: FsoParams, p: float) -> FoxHParams:
    x2 = params.xi ** 2
    return FoxHParams(
        4, 1,
        [(1.0 - p, 1.0 / params.r), (1.0, 1.0), (x2 + 1, 1.0)],
        [(0.0, 1.0), (x2, 1.0), (params.alpha, 1.0), (params.beta, 1.0)],
    )


def fso_weighted_ccdf(params: FsoParams, p: float, rate: float) -> float:
    """``rate^p / Gamma(p) * int g^(p-1) exp(-rate g) (1 - F(g)) dg`` via H^{4,1}_{3,4}.

    ``p`` may be any positive number; the SC hybrid BER calls this with
    ``p + r`` and ``rate = q_k + 1/Omega_i``.
    """
    z = params.alpha * params.beta * params.h * (rate * params.mu_r) ** (-1.0 / params.r)
    return params.norm * fox_h(_ber_kernel(params, p), z) / math.gamma(p)


def fso_avg_ber(params: FsoParams, mod: ModulationSpec, *, enforce_detection: bool = True) -> float:
    """Closed-form average BER: ``n delta/2`` minus one H^{4,1}_{3,4} term per ``q_k``."""
    if enforce_detection:
        mod.check_detection(params.r)
    acc = sum(fso_weighted_ccdf(params, mod.p, qk) for qk in mod.q)
    return mod.ceiling - 0.5 * mod.delta * acc


def fso_mean_snr(params: FsoParams) -> float:
    """``E[gamma]``; equals ``mu_r`` under HD."""
    if params.r == 1:
        return params.mu_r
    x2 = params.xi ** 2
    a, b = params.alpha, params.beta
    return params.mu_r * (x2 + 1) ** 2 * (a + 1) * (b + 1) / (x2 * (x2 + 2) * a * b)


def fso_sample_snr(params: FsoParams, rng: np.random.Generator, size=None):
    """Draw instantaneous SNRs ``mu_r (h_p h_a / h)^r``.

    ``h_a`` is the product of two unit-mean Gamma variates and ``h_p`` the
    normalized pointing loss ``U^(1/xi^2)``, so ``E[h_p h_a] = h``.
    """
    n = 1 if size is None else size
    x = rng.gamma(params.alpha, 1.0 / params.alpha, n)
    y = rng.gamma(params.beta, 1.0 / params.beta, n)
    hp = rng.random(n) ** (1.0 / params.xi ** 2)
    g = params.mu_r * (hp * x * y / params.h) ** params.r
    return float(g[0]) if size is None else g
