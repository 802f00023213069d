import math

import numpy as np
import pytest

from hybridlink.combining import HybridLink, mrc_outage, sc_outage
from hybridlink.fso import FsoParams, fso_avg_ber, fso_outage
from hybridlink.modulation import make_modspec
from hybridlink.montecarlo import (CHUNK, McConfig, McEstimate, estimate_ber, estimate_outage,
                                   estimate_outage_sweep, spawn_streams)
from hybridlink.rf import RfParams

RAYLEIGH = RfParams(0.0, 1, 1, 2.0)


def test_config_validation():
    with pytest.raises(ValueError):
        McConfig(samples=0)
    with pytest.raises(ValueError):
        McConfig(master_seed=-1)
    with pytest.raises(ValueError):
        McConfig(master_seed=2 ** 64)
    with pytest.raises(ValueError):
        McConfig(workers=0)
    with pytest.raises(ValueError):
        McConfig(ci_level=1.0)
    assert McConfig().z == pytest.approx(3.0, abs=2e-3)


def test_streams_are_reproducible_and_partition_free():
    a = spawn_streams(42, 1)[0].random(3)
    b = spawn_streams(42, 1)[0].random(3)
    assert np.array_equal(a, b)
    s4 = spawn_streams(42, 4)[2].random(1000)
    s8 = spawn_streams(42, 8)[2].random(1000)
    assert np.array_equal(s4, s8)
    with pytest.raises(ValueError):
        spawn_streams(1, 0)


def test_streams_uncorrelated():
    n = 1_000_000
    streams = spawn_streams(7, 3)
    u = [s.random(n) for s in streams]
    for i in range(3):
        for j in range(i + 1, 3):
            assert abs(np.corrcoef(u[i], u[j])[0, 1]) < 3 / math.sqrt(n)


def test_rayleigh_outage_covered():
    est = estimate_outage(RAYLEIGH, 2.0, McConfig(samples=500_000, master_seed=3))
    assert est.covers(1 - math.exp(-1))
    assert est.ci_low <= est.point <= est.ci_high
    assert est.samples_used == 500_000
    assert est.std_error == pytest.approx(math.sqrt(est.point * (1 - est.point) / 5e5))


def test_determinism_and_worker_invariance():
    link = HybridLink(FsoParams.preset("moderate", r=2, mu_r=10.0), RfParams(5, 1, 2, 3.0), "mrc")
    n = 2 * CHUNK + 12345
    runs = [estimate_outage(link, [1.0, 4.0], McConfig(samples=n, master_seed=9, workers=w))
            for w in (1, 4, 8)]
    assert runs[0] == runs[1] == runs[2]
    assert estimate_outage(link, [1.0, 4.0], McConfig(samples=n, master_seed=9)) == runs[0]
    mod = make_modspec("ook")
    bers = [estimate_ber(link, mod, McConfig(samples=n, master_seed=9, workers=w)) for w in (1, 4)]
    assert bers[0] == bers[1]


def test_distinct_seeds_differ():
    a = estimate_outage(RAYLEIGH, 1.0, McConfig(samples=10_000, master_seed=1))
    b = estimate_outage(RAYLEIGH, 1.0, McConfig(samples=10_000, master_seed=2))
    assert a.point != b.point


def test_fso_outage_closed_form_inside_intervals():
    fso = FsoParams.preset("moderate", r=1, mu_r=10.0)
    ths = [0.3, 1.0, 3.0, 8.0, 20.0]
    ests = estimate_outage(fso, ths, McConfig(samples=1_000_000, master_seed=4))
    for th, e in zip(ths, ests):
        assert e.covers(fso_outage(fso, th))


def test_hybrid_outage_inside_intervals():
    fso = FsoParams.preset("strong", r=2, mu_r=30.0)
    rf = RfParams(5, 1, 2, 5.0)
    res = estimate_outage_sweep(fso, rf, [(30.0, 5.0), (100.0, 5.0)], [1.0, 3.0],
                                McConfig(samples=1_000_000, master_seed=12))
    assert set(res) == {"fso", "rf", "sc", "mrc"}
    for j, mu in enumerate((30.0, 100.0)):
        for t, th in enumerate((1.0, 3.0)):
            f = fso.with_snr(mu)
            assert res["sc"][j, t].covers(sc_outage(HybridLink(f, rf, "sc"), th))
            assert res["mrc"][j, t].covers(mrc_outage(HybridLink(f, rf, "mrc"), th))


def test_zero_count_interval_is_informative():
    est = estimate_outage(FsoParams.preset("weak", mu_r=1e6), 1e-6, McConfig(samples=1000))
    assert est.point == 0.0 and est.ci_low == 0.0 and 0.0 < est.ci_high < 0.02


def test_degenerate_zero_snr_ber():
    mod = make_modspec("mqam", 16)
    est = estimate_ber(lambda rng, n: np.zeros(n), mod, McConfig(samples=5000))
    assert est.point == mod.ceiling
    assert est.std_error == 0.0


def test_rayleigh_bpsk_ber_covered():
    g = 10.0
    est = estimate_ber(RfParams(0.0, 1, 1, g), make_modspec("mpsk", 2),
                       McConfig(samples=1_000_000, master_seed=5))
    assert est.covers(0.5 * (1 - math.sqrt(g / (1 + g))))


def test_strong_turbulence_ook_ber_covered():
    fso = FsoParams.preset("strong", r=2, mu_r=100.0)
    mod = make_modspec("ook")
    est = estimate_ber(fso, mod, McConfig(samples=1_000_000, master_seed=6))
    assert est.covers(fso_avg_ber(fso, mod))
    assert est.covers(7.48e-2) or abs(est.point - 7.48e-2) < 5e-4


def test_bad_targets():
    with pytest.raises(TypeError):
        estimate_outage("fso", 1.0, McConfig(samples=10))
    with pytest.raises(ValueError):
        estimate_outage_sweep(None, None, [(1.0, 1.0)], [1.0], McConfig(samples=10))
    with pytest.raises(ValueError):
        estimate_outage(RAYLEIGH, [-1.0], McConfig(samples=10))


def test_estimate_is_frozen():
    e = McEstimate(0.1, 0.01, 0.07, 0.13, 100)
    with pytest.raises(AttributeError):
        e.point = 0.2
