"""Self-check suites run by ``hybridlink validate``.

Each check compares a computed value with an independent reference and
reports ``(name, expected, got, tol, status)``.  Tolerances are relative.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath
import numpy as np

from .combining import (HybridLink, mrc_avg_ber, mrc_avg_ber_oracle, mrc_cdf,
                        mrc_cdf_oracle, sc_avg_ber, sc_cdf)
from .fso import FsoParams, fso_avg_ber, fso_cdf
from .modulation import avg_ber_from_cdf, make_modspec
from .rf import RfParams, rf_avg_ber, rf_cdf, rf_mixture, rf_pdf, rf_pdf_hypergeometric
from .special import FoxHParams, MeijerGParams, fox_h, fox_h_contour, meijer_g

__all__ = ["Check", "SUITES", "run_suite"]

MODULATIONS = (("ook", 2), ("mpsk", 2), ("mpsk", 4), ("mqam", 16))


@dataclass(frozen=True)
class Check:
    name: str
    expected: float
    got: float
    tol: float

    @property
    def error(self) -> float:
        if self.expected == 0:
            return abs(self.got)
        return abs(self.got - self.expected) / abs(self.expected)

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.got)) and self.error <= self.tol

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{self.name},{self.expected:.10e},{self.got:.10e},{self.tol:.1e},{status}"


def _r(mod: str) -> int:
    return 2 if mod == "ook" else 1


def identities() -> list[Check]:
    out = []
    for z in (0.1, 1.0, 5.0, 20.0):
        out.append(Check(f"G10_01 exp z={z:g}", math.exp(-z),
                         meijer_g(MeijerGParams(1, 0, (), (0.0,)), z), 1e-9))
    for a in (0.5, 2.5):
        for z in (0.3, 3.0):
            out.append(Check(f"G11_11 binomial a={a:g} z={z:g}", math.gamma(a) * (1 + z) ** -a,
                             meijer_g(MeijerGParams(1, 1, (1 - a,), (0.0,)), z), 1e-9))
    for b, B in ((0.5, 2.0), (1.0, 0.5)):
        z = 1.7
        ref = z ** (b / B) * math.exp(-z ** (1 / B)) / B
        out.append(Check(f"H10_01 b={b:g} B={B:g}", ref,
                         fox_h(FoxHParams(1, 0, (), ((b, B),)), z), 1e-9))
    # unit-coefficient Fox-H against an independent Meijer-G implementation
    for z in (0.2, 2.0, 15.0):
        a, b = (3.1,), (2.0, 2.3, 1.4)
        ref = float(mpmath.meijerg([[], list(a)], [list(b), []], z))
        got = fox_h(FoxHParams(3, 0, [(v, 1.0) for v in a], [(v, 1.0) for v in b]), z)
        out.append(Check(f"H30_13 vs mpmath z={z:g}", ref, got, 1e-9))
    for z in (0.05, 3.0):
        a, b = (1.0, 2.0), (1.0, 2.064, 1.342, 0.0)
        ref = float(mpmath.meijerg([list(a[:1]), list(a[1:])], [list(b[:3]), list(b[3:])], z))
        got = meijer_g(MeijerGParams(3, 1, a, b), z)
        out.append(Check(f"G31_24 vs mpmath z={z:g}", ref, got, 1e-9))
    # contour-shift invariance inside the strip
    prm = FoxHParams(3, 1, [(1.0, 0.5), (2.0, 1.0)], [(1.0, 1.0), (2.296, 1.0), (1.822, 1.0)])
    left, right = prm.strip
    for z in (0.3, 4.0):
        v1 = fox_h_contour(prm, z, abscissa=left + 0.25 * (right - left)).value
        v2 = fox_h_contour(prm, z, abscissa=left + 0.75 * (right - left)).value
        out.append(Check(f"contour shift z={z:g}", v1, v2, 1e-9))
    return out


def mixtures() -> list[Check]:
    out = []
    for kappa, mu, m in ((5, 1, 2), (10, 2, 1)):
        prm = RfParams(kappa, mu, m, 10.0)
        mix = rf_mixture(prm)
        out.append(Check(f"sum C ({kappa},{mu},{m})", 1.0, float(np.sum(mix.weights)), 1e-12))
        worst, at = 0.0, 0.0
        for x in np.geomspace(1e-3, 20.0, 40):
            g = x * prm.gamma_bar
            ref = rf_pdf_hypergeometric(prm, g)
            e = abs(rf_pdf(mix, g) - ref) / ref
            if e >= worst:
                worst, at = e, x
        ref = rf_pdf_hypergeometric(prm, at * prm.gamma_bar)
        out.append(Check(f"mixture pdf ({kappa},{mu},{m}) worst x={at:.3g}", ref,
                         rf_pdf(mix, at * prm.gamma_bar), 1e-10))
    return out


def oracles() -> list[Check]:
    out = []
    for turb in ("weak", "strong"):
        for scheme, M in MODULATIONS:
            mod = make_modspec(scheme, M)
            f = FsoParams.preset(turb, r=_r(scheme), mu_r=100.0)
            out.append(Check(f"fso ber {turb} {mod.label}",
                             avg_ber_from_cdf(mod, lambda g: fso_cdf(f, g)),
                             fso_avg_ber(f, mod), 1e-6))
    mix = rf_mixture(RfParams(10, 2, 1, 100.0))
    for scheme, M in MODULATIONS:
        mod = make_modspec(scheme, M)
        out.append(Check(f"rf ber {mod.label}", avg_ber_from_cdf(mod, lambda g: rf_cdf(mix, g)),
                         rf_avg_ber(mix, mod), 1e-6))
    rf = RfParams(5, 1, 2, 10.0)
    for scheme, M in (("ook", 2), ("mqam", 16)):
        mod = make_modspec(scheme, M)
        link = HybridLink(FsoParams.preset("moderate", r=_r(scheme), mu_r=100.0), rf, "sc")
        out.append(Check(f"sc ber {mod.label}", avg_ber_from_cdf(mod, lambda g: sc_cdf(link, g)),
                         sc_avg_ber(link, mod), 1e-6))
    link = HybridLink(FsoParams.preset("moderate", r=1, mu_r=10.0), rf, "mrc")
    for g in (0.5, 8.0, 40.0):
        out.append(Check(f"mrc cdf g={g:g}", mrc_cdf_oracle(link, g), mrc_cdf(link, g), 1e-5))
    mod = make_modspec("mpsk", 2)
    out.append(Check("mrc ber BPSK", mrc_avg_ber_oracle(link, mod), mrc_avg_ber(link, mod), 1e-4))
    return out


# (label, fso preset, mu_r dB, rf (kappa, mu, m, dB), combiner, expected per modulation, tol)
PUBLISHED_BER = (
    ("fso strong 20dB", "strong", 20, None, None, (7.48e-2, 7.05e-3, 1.29e-2, 4.09e-2), 0.02),
    ("rf (10,2,1) 20dB", None, None, (10, 2, 1, 20), None, (1.25e-3, 3.63e-4, 1.25e-3, 1.12e-2), 0.02),
    ("mrc strong 20dB rf 15dB", "strong", 20, (5, 1, 2, 15), "mrc",
     (5.60e-3, 2.92e-4, 1.12e-3, 1.29e-2), 0.05),
    ("sc weak 30dB rf 15dB", "weak", 30, (5, 1, 2, 15), "sc",
     (1.85e-3, 2.78e-5, 1.15e-4, 1.46e-3), 0.03),
)


def published_ber_value(turb, fso_db, rf_spec, combiner, scheme, M) -> float:
    """Analytical BER for one row of :data:`PUBLISHED_BER`."""
    mod = make_modspec(scheme, M)
    fso = None if turb is None else FsoParams.preset(turb, r=_r(scheme), mu_r=10 ** (fso_db / 10))
    rf = None if rf_spec is None else RfParams(*rf_spec[:3], 10 ** (rf_spec[3] / 10))
    if rf is None:
        return fso_avg_ber(fso, mod)
    if fso is None:
        return rf_avg_ber(rf_mixture(rf), mod)
    link = HybridLink(fso, rf, combiner)
    return sc_avg_ber(link, mod) if combiner == "sc" else mrc_avg_ber(link, mod)


def published_values() -> list[Check]:
    out = []
    for label, turb, fso_db, rf_spec, comb, expected, tol in PUBLISHED_BER:
        for (scheme, M), ref in zip(MODULATIONS, expected):
            got = published_ber_value(turb, fso_db, rf_spec, comb, scheme, M)
            out.append(Check(f"{label} {make_modspec(scheme, M).label}", ref, got, tol))
    return out


SUITES = {
    "identities": identities,
    "mixtures": mixtures,
    "oracles": oracles,
    "paper-values": published_values,
}


def run_suite(name: str) -> list[Check]:
    if name == "all":
        return [c for fn in SUITES.values() for c in fn()]
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join([*SUITES, 'all'])}")
    return SUITES[name]()
