"""Published text values for the hybrid links under their consistent reading.

The outage values are reproduced with a 3 dB threshold.  The hybrid BER values
quoted for the four-modulation comparison are reproduced with the RF branch
at 10 dB average SNR (the curves they are read from use that RF level).
"""

import pytest

from hybridlink.combining import HybridLink, mrc_avg_ber, mrc_outage, sc_avg_ber, sc_outage
from hybridlink.fso import FsoParams, fso_outage
from hybridlink.modulation import make_modspec
from hybridlink.rf import RfParams, rf_mixture, rf_outage


def db(x):
    return 10 ** (x / 10)


GAMMA_TH = db(3.0)
RICIAN_SHADOWED = (5, 1, 2)
KMU_SHADOWED = (10, 2, 1)
MODS = {"ook": ("ook", 2), "bpsk": ("mpsk", 2), "qpsk": ("mpsk", 4), "16qam": ("mqam", 16)}

# (turbulence, r, fso dB, rf shape, rf dB) -> {link: reported OP}
OUTAGE = [
    (("weak", 1, 20, RICIAN_SHADOWED, 10), {"fso": 2.51e-2, "sc": 2.91e-3, "mrc": 1.40e-3}),
    (("weak", 2, 20, RICIAN_SHADOWED, 10), {"fso": 1.63e-1, "sc": 1.89e-2, "mrc": 1.26e-2}),
    (("weak", 1, 30, RICIAN_SHADOWED, 10), {"fso": 2.53e-3, "sc": 2.90e-4, "mrc": 1.42e-4}),
    (("moderate", 1, 20, RICIAN_SHADOWED, 10), {"fso": 3.63e-2, "sc": 4.30e-3}),
    (("strong", 1, 20, RICIAN_SHADOWED, 10), {"fso": 5.26e-2, "sc": 6.09e-3}),
    (("moderate", 1, 5, KMU_SHADOWED, 20), {"rf": 3.96e-3, "mrc": 1.03e-3}),
    (("moderate", 1, 15, KMU_SHADOWED, 20), {"mrc": 1.53e-4}),
]

# (turbulence, fso dB, rf shape, rf dB, combiner) -> {modulation: reported BER}
BER = [
    (("strong", 20, RICIAN_SHADOWED, 10, "mrc"),
     {"ook": 5.60e-3, "bpsk": 2.92e-4, "qpsk": 1.12e-3, "16qam": 1.29e-2}),
    (("weak", 30, RICIAN_SHADOWED, 10, "sc"),
     {"ook": 1.85e-3, "bpsk": 2.78e-5, "qpsk": 1.15e-4, "16qam": 1.46e-3}),
    (("weak", 30, RICIAN_SHADOWED, 10, "mrc"),
     {"ook": 1.24e-3, "bpsk": 1.30e-5, "qpsk": 5.65e-5, "16qam": 8.95e-4}),
    # the BPSK entries of this pair disagree with every other BPSK value and are left out
    (("strong", 20, RICIAN_SHADOWED, 10, "sc"), {"ook": 7.73e-3, "qpsk": 2.11e-3, "16qam": 1.97e-2}),
    (("weak", 20, RICIAN_SHADOWED, 10, "sc"), {"ook": 5.31e-3, "qpsk": 1.12e-3, "16qam": 1.32e-2}),
    # OOK at 15 dB FSO is quoted as 3.66e-4 which is not consistent with the other
    # three entries of the same set; the 5 dB OOK value is consistent
    (("moderate", 15, KMU_SHADOWED, 20, "mrc"), {"bpsk": 1.61e-5, "qpsk": 1.01e-4, "16qam": 2.86e-3}),
    (("moderate", 5, KMU_SHADOWED, 20, "mrc"), {"ook": 6.46e-4}),
]


def _outage(link, turb, r, fso_db, rf_shape, rf_db):
    fso = FsoParams.preset(turb, r=r, mu_r=db(fso_db))
    rf = RfParams(*rf_shape, db(rf_db))
    if link == "fso":
        return fso_outage(fso, GAMMA_TH)
    if link == "rf":
        return rf_outage(rf_mixture(rf), GAMMA_TH)
    fn = sc_outage if link == "sc" else mrc_outage
    return fn(HybridLink(fso, rf, link), GAMMA_TH)


@pytest.mark.parametrize("case, link", [(c, k) for c, vals in OUTAGE for k in vals],
                         ids=lambda v: "-".join(map(str, v)) if isinstance(v, tuple) else v)
def test_reported_outage(case, link):
    expected = dict(OUTAGE)[case][link]
    assert _outage(link, *case) == pytest.approx(expected, rel=0.03)


@pytest.mark.parametrize("case, name", [(c, k) for c, vals in BER for k in vals],
                         ids=lambda v: "-".join(map(str, v)) if isinstance(v, tuple) else v)
def test_reported_hybrid_ber(case, name):
    turb, fso_db, rf_shape, rf_db, comb = case
    expected = dict(BER)[case][name]
    mod = make_modspec(*MODS[name])
    fso = FsoParams.preset(turb, r=2 if name == "ook" else 1, mu_r=db(fso_db))
    link = HybridLink(fso, RfParams(*rf_shape, db(rf_db)), comb)
    fn = sc_avg_ber if comb == "sc" else mrc_avg_ber
    assert fn(link, mod) == pytest.approx(expected, rel=0.03)


def test_rf_level_15db_does_not_reproduce_the_hybrid_values():
    # the same hybrid values evaluated at the stated 15 dB RF level sit far below
    fso = FsoParams.preset("strong", r=1, mu_r=db(20))
    link = HybridLink(fso, RfParams(*RICIAN_SHADOWED, db(15)), "mrc")
    assert mrc_avg_ber(link, make_modspec("mpsk", 2)) < 0.5 * 2.92e-4
