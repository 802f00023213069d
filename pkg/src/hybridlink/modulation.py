"""Unified modulation parameters and the CDF-based average-BER functional.

Every scheme is described by a tuple ``(delta, p, q_1..q_n)`` such that the
conditional bit-error probability is

    P_e(g) = delta/2 * sum_k Q(p, q_k g)

with ``Q`` the regularized upper incomplete gamma function.  Averaging over a
fading SNR with CDF ``F`` and integrating by parts gives

    P_e = delta / (2 Gamma(p)) * sum_k q_k^p int_0^inf g^(p-1) exp(-q_k g) F(g) dg
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import integrate, special

from .special import upper_incomplete_gamma_reg

__all__ = [
    "Scheme",
    "Detection",
    "ModulationError",
    "ModulationSpec",
    "make_modspec",
    "avg_ber_from_cdf",
    "conditional_ber",
]


class ModulationError(ValueError):
    """Unsupported modulation order or modulation/detection pairing."""


class Scheme(enum.Enum):
    OOK = "ook"
    MPSK = "mpsk"
    MQAM = "mqam"


class Detection(enum.IntEnum):
    """FSO detection technique; the value is the detection order ``r``."""

    HD = 1
    IMDD = 2

    @classmethod
    def from_r(cls, r: int) -> "Detection":
        return cls(int(r))


@dataclass(frozen=True)
class ModulationSpec:
    scheme: Scheme
    M: int
    delta: float
    p: float
    q: tuple[float, ...]
    detection: frozenset

    @property
    def n(self) -> int:
        return len(self.q)

    @property
    def ceiling(self) -> float:
        """``delta * n / 2``: the BER of a link whose SNR is identically zero."""
        return self.delta * self.n / 2

    @property
    def label(self) -> str:
        if self.scheme is Scheme.OOK:
            return "OOK"
        if self.scheme is Scheme.MPSK:
            return {2: "BPSK", 4: "QPSK"}.get(self.M, f"{self.M}-PSK")
        return f"{self.M}-QAM"

    def check_detection(self, r: int) -> None:
        det = Detection.from_r(r)
        if det not in self.detection:
            allowed = "/".join(d.name for d in sorted(self.detection))
            raise ModulationError(
                f"{self.label} is not defined for FSO {det.name} detection (allowed: {allowed})"
            )


def _is_pow2(M: int) -> bool:
    return M >= 2 and (M & (M - 1)) == 0


def make_modspec(scheme, M: int = 2) -> ModulationSpec:
    """Build the parameter tuple for OOK, M-PSK or square M-QAM.

    >>> make_modspec("mqam", 16).q
    (0.1, 0.9)
    """
    scheme = Scheme(scheme.lower()) if isinstance(scheme, str) else Scheme(scheme)
    M = int(M)
    if scheme is Scheme.OOK:
        return ModulationSpec(scheme, 2, 1.0, 0.5, (0.5,), frozenset({Detection.IMDD}))
    if scheme is Scheme.MPSK:
        if not _is_pow2(M):
            raise ModulationError(f"M-PSK order must be a power of two >= 2, got {M}")
        k = math.log2(M)
        n = max(M // 4, 1)
        q = tuple(math.sin((2 * i - 1) * math.pi / M) ** 2 for i in range(1, n + 1))
        return ModulationSpec(scheme, M, 2.0 / max(k, 2.0), 0.5, q, frozenset({Detection.HD}))
    root = math.isqrt(M)
    if not (_is_pow2(M) and root * root == M and M >= 4):
        raise ModulationError(f"M-QAM order must be a square power of two (4, 16, 64...), got {M}")
    n = root // 2
    q = tuple(3 * (2 * i - 1) ** 2 / (2 * (M - 1)) for i in range(1, n + 1))
    delta = 4.0 / math.log2(M) * (1 - 1 / root)
    return ModulationSpec(scheme, M, delta, 0.5, q, frozenset({Detection.HD}))


def conditional_ber(mod: ModulationSpec, gamma):
    """Instantaneous BER at SNR ``gamma`` (scalar or array)."""
    g = np.asarray(gamma, dtype=float)
    if np.any(g < 0):
        raise ValueError("conditional_ber requires gamma >= 0")
    out = sum(upper_incomplete_gamma_reg(mod.p, qk * g) for qk in mod.q)
    out = 0.5 * mod.delta * np.asarray(out)
    return float(out) if out.ndim == 0 else out


def _weighted_cdf_integral(p: float, qk: float, cdf: Callable[[float], float],
                           epsrel: float) -> float:
    # g = u^2 removes the g^(p-1) endpoint singularity
    def integrand(u):
        return 2.0 * u ** (2 * p - 1) * math.exp(-qk * u * u) * cdf(u * u)

    # tail bound: int_U^inf 2 u^(2p-1) e^(-q u^2) du = Gamma(p) Q(p, q U^2) / q^p
    full = math.gamma(p) / qk ** p
    total = 0.0
    lo = 0.0
    hi = math.sqrt(1.0 / qk)
    while True:
        part, _ = integrate.quad(integrand, lo, hi, epsabs=0.0, epsrel=epsrel, limit=400)
        total += part
        tail = full * special.gammaincc(p, qk * hi * hi)
        if tail < 1e-16 * max(abs(total), 1e-300) or tail < 1e-300:
            return total
        lo, hi = hi, hi * 2.0


def avg_ber_from_cdf(mod: ModulationSpec, cdf: Callable[[float], float], *,
                     epsrel: float = 1e-11) -> float:
    """Average BER of a fading link from its SNR CDF by adaptive quadrature.

    This is the reference against which every closed-form BER is checked.
    """
    acc = 0.0
    for qk in mod.q:
        acc += qk ** mod.p * _weighted_cdf_integral(mod.p, qk, cdf, epsrel)
    return mod.delta / (2 * math.gamma(mod.p)) * acc
