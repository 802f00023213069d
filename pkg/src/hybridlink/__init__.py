"""Outage probability and average BER of FSO, RF and hybrid FSO/RF links.

The FSO branch follows Gamma-Gamma turbulence with pointing errors under
heterodyne or intensity-modulation/direct detection; the RF branch follows
kappa-mu shadowed fading with integer mu and m.  Hybrid links combine the two
branches by selection (SC) or maximal-ratio (MRC) combining.  Closed forms are
Meijer-G / Fox-H functions evaluated on Mellin-Barnes contours, and every one
of them has a quadrature or Monte Carlo reference in this package.
"""

from .combining import (Combiner, HybridLink, mrc_avg_ber, mrc_avg_ber_oracle, mrc_cdf,
                        mrc_cdf_oracle, mrc_mgf, mrc_outage, sc_avg_ber, sc_cdf,
                        sc_cdf_expanded, sc_outage)
from .fso import (TURBULENCE, FsoParams, fso_avg_ber, fso_ccdf, fso_cdf, fso_mean_snr,
                  fso_mgf, fso_outage, fso_pdf, fso_sample_snr)
from .modulation import (Detection, ModulationError, ModulationSpec, Scheme, avg_ber_from_cdf,
                         conditional_ber, make_modspec)
from .montecarlo import (McConfig, McEstimate, estimate_ber, estimate_outage,
                         estimate_outage_sweep, spawn_streams)
from .rf import (GammaMixture, RfParams, rf_avg_ber, rf_cdf, rf_mgf, rf_mixture, rf_outage,
                 rf_pdf, rf_pdf_hypergeometric, rf_sample_snr)
from .special import (BivariateFoxHParams, ConvergenceError, FoxHParams, MeijerGParams,
                      ParameterError, fox_h, fox_h_bivariate, fox_h_bivariate_contour,
                      fox_h_contour, log_gamma_complex, meijer_g, upper_incomplete_gamma_reg)

__all__ = [
    "Combiner",
    "HybridLink",
    "mrc_avg_ber",
    "mrc_avg_ber_oracle",
    "mrc_cdf",
    "mrc_cdf_oracle",
    "mrc_mgf",
    "mrc_outage",
    "sc_avg_ber",
    "sc_cdf",
    "sc_cdf_expanded",
    "sc_outage",
    "TURBULENCE",
    "FsoParams",
    "fso_avg_ber",
    "fso_ccdf",
    "fso_cdf",
    "fso_mean_snr",
    "fso_mgf",
    "fso_outage",
    "fso_pdf",
    "fso_sample_snr",
    "Detection",
    "ModulationError",
    "ModulationSpec",
    "Scheme",
    "avg_ber_from_cdf",
    "conditional_ber",
    "make_modspec",
    "McConfig",
    "McEstimate",
    "estimate_ber",
    "estimate_outage",
    "estimate_outage_sweep",
    "spawn_streams",
    "GammaMixture",
    "RfParams",
    "rf_avg_ber",
    "rf_cdf",
    "rf_mgf",
    "rf_mixture",
    "rf_outage",
    "rf_pdf",
    "rf_pdf_hypergeometric",
    "rf_sample_snr",
    "BivariateFoxHParams",
    "ConvergenceError",
    "FoxHParams",
    "MeijerGParams",
    "ParameterError",
    "fox_h",
    "fox_h_bivariate",
    "fox_h_bivariate_contour",
    "fox_h_contour",
    "log_gamma_complex",
    "meijer_g",
    "upper_incomplete_gamma_reg",
]

__version__ = "0.1.0"
