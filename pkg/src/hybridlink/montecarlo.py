"""Monte Carlo estimators for outage probability and average BER.

Samples are produced in fixed-size chunks; chunk ``c`` always draws from the
Philox stream keyed by ``(master_seed, c)``.  Workers only decide which thread
processes which chunk, and per-chunk partial results are reduced in chunk
order, so estimates are bit-identical for any worker count.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from numpy.random import Generator, Philox, SeedSequence
from scipy import stats

from .combining import Combiner, HybridLink
from .fso import FsoParams, fso_sample_snr
from .modulation import ModulationSpec, conditional_ber
from .rf import RfParams, rf_sample_snr

__all__ = [
    "CHUNK",
    "McConfig",
    "McEstimate",
    "spawn_streams",
    "estimate_outage",
    "estimate_outage_sweep",
    "estimate_ber",
]

CHUNK = 2 ** 20


@dataclass(frozen=True)
class McConfig:
    samples: int = 10_000_000
    master_seed: int = 0
    workers: int = 1
    ci_level: float = 0.9973

    def __post_init__(self):
        if int(self.samples) != self.samples or self.samples < 1:
            raise ValueError("McConfig.samples must be a positive integer")
        if not 0 <= int(self.master_seed) < 2 ** 64:
            raise ValueError("McConfig.master_seed must be a 64-bit unsigned integer")
        if int(self.workers) < 1:
            raise ValueError("McConfig.workers must be >= 1")
        if not 0 < self.ci_level < 1:
            raise ValueError("McConfig.ci_level must lie in (0, 1)")

    @property
    def z(self) -> float:
        return float(stats.norm.ppf(0.5 + self.ci_level / 2))


@dataclass(frozen=True)
class McEstimate:
    point: float
    std_error: float
    ci_low: float
    ci_high: float
    samples_used: int

    def covers(self, value: float) -> bool:
        return self.ci_low <= value <= self.ci_high


def _stream(master_seed: int, index: int) -> Generator:
    return Generator(Philox(SeedSequence(int(master_seed), spawn_key=(int(index),))))


def spawn_streams(master_seed: int, workers: int) -> list[Generator]:
    """Independent Philox streams; stream ``k`` does not depend on ``workers``."""
    if workers < 1:
        raise ValueError("spawn_streams requires workers >= 1")
    return [_stream(master_seed, k) for k in range(workers)]


def _chunks(cfg: McConfig) -> list[tuple[int, int]]:
    if cfg.samples < 1:
        raise ValueError("Monte Carlo estimate needs at least one sample")
    full, rest = divmod(int(cfg.samples), CHUNK)
    sizes = [CHUNK] * full + ([rest] if rest else [])
    return list(enumerate(sizes))


def _map_chunks(fn, cfg: McConfig) -> list:
    chunks = _chunks(cfg)
    if cfg.workers == 1 or len(chunks) == 1:
        return [fn(c, n) for c, n in chunks]
    with ThreadPoolExecutor(max_workers=int(cfg.workers)) as pool:
        # map preserves chunk order
        return list(pool.map(lambda cn: fn(*cn), chunks))


def _split(target):
    """Return ``(fso, rf, combiner)`` for a branch or a hybrid link."""
    if isinstance(target, HybridLink):
        return target.fso, target.rf, target.combiner
    if isinstance(target, FsoParams):
        return target, None, None
    if isinstance(target, RfParams):
        return None, target, None
    raise TypeError(f"unsupported Monte Carlo target {type(target).__name__}")


def _draw_unit(fso: FsoParams | None, rf: RfParams | None, rng: Generator, n: int):
    """Base draws at unit average SNR; FSO first, then RF, always in that order."""
    gf = fso_sample_snr(fso.with_snr(1.0), rng, n) if fso is not None else None
    gr = rf_sample_snr(rf.with_snr(1.0), rng, n) if rf is not None else None
    return gf, gr


def _wilson(k: int, n: int, z: float) -> McEstimate:
    p = k / n
    se = math.sqrt(p * (1 - p) / n)
    denom = 1 + z * z / n
    centre = (p + z * z / (2 * n)) / denom
    half = z * math.sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / denom
    lo, hi = max(0.0, centre - half), min(1.0, centre + half)
    return McEstimate(p, se, min(lo, p), max(hi, p), n)


def estimate_outage_sweep(fso: FsoParams | None, rf: RfParams | None,
                          points: Sequence[tuple[float, float]],
                          gamma_th: Sequence[float], cfg: McConfig) -> dict[str, np.ndarray]:
    """Outage estimates for every available link over a sweep.

    ``points`` lists ``(mu_r, gamma_bar)`` average SNRs (the entry for a
    missing branch is ignored).  One set of unit-SNR draws is shared by all
    points, so a sweep costs one sampling pass.  Returns ``{link: array}``
    with ``link`` among ``fso``, ``rf``, ``sc``, ``mrc`` and each array of
    :class:`McEstimate` shaped ``(len(points), len(gamma_th))``.
    """
    if fso is None and rf is None:
        raise ValueError("need at least one branch")
    th = np.asarray(gamma_th, dtype=float)
    if th.ndim != 1 or np.any(~(th > 0)):
        raise ValueError("gamma_th must be a sequence of positive thresholds")
    links = [name for name, b in (("fso", fso), ("rf", rf)) if b is not None]
    if fso is not None and rf is not None:
        links += ["sc", "mrc"]
    pts = [(float(a), float(b)) for a, b in points]

    def work(c, n):
        gf, gr = _draw_unit(fso, rf, _stream(cfg.master_seed, c), n)
        counts = np.zeros((len(links), len(pts), th.size), dtype=np.int64)
        for j, (mu_r, gbar) in enumerate(pts):
            snr = {}
            if gf is not None:
                snr["fso"] = mu_r * gf
            if gr is not None:
                snr["rf"] = gbar * gr
            if "sc" in links:
                snr["sc"] = np.maximum(snr["fso"], snr["rf"])
                snr["mrc"] = snr["fso"] + snr["rf"]
            for i, name in enumerate(links):
                counts[i, j] = [np.count_nonzero(snr[name] < t) for t in th]
        return counts

    total = sum(_map_chunks(work, cfg))
    z = cfg.z
    out = {}
    for i, name in enumerate(links):
        arr = np.empty((len(pts), th.size), dtype=object)
        for j in range(len(pts)):
            for t in range(th.size):
                arr[j, t] = _wilson(int(total[i, j, t]), int(cfg.samples), z)
        out[name] = arr
    return out


def estimate_outage(target, gamma_th, cfg: McConfig):
    """Fraction of SNR draws below ``gamma_th`` with a Wilson score interval.

    ``target`` is an :class:`FsoParams`, :class:`RfParams` or
    :class:`HybridLink`; a sequence of thresholds returns a list.
    """
    fso, rf, comb = _split(target)
    scalar = np.ndim(gamma_th) == 0
    th = np.atleast_1d(np.asarray(gamma_th, dtype=float))
    mu_r = fso.mu_r if fso is not None else 1.0
    gbar = rf.gamma_bar if rf is not None else 1.0
    res = estimate_outage_sweep(fso, rf, [(mu_r, gbar)], th, cfg)
    key = "fso" if rf is None else "rf" if fso is None else comb.value
    row = list(res[key][0])
    return row[0] if scalar else row


def estimate_ber(target, mod: ModulationSpec, cfg: McConfig, *,
                 enforce_detection: bool = True) -> McEstimate:
    """Sample mean of the conditional BER over SNR draws.

    ``target`` is a branch, a :class:`HybridLink` or a callable
    ``sampler(rng, n)`` returning ``n`` SNR draws.
    """
    if callable(target):
        # a bare sampler ``f(rng, n) -> SNR array``
        fso = rf = comb = None
    else:
        fso, rf, comb = _split(target)
    if enforce_detection and fso is not None:
        mod.check_detection(fso.r)

    def work(c, n):
        rng = _stream(cfg.master_seed, c)
        if fso is None and rf is None:
            pe = conditional_ber(mod, np.asarray(target(rng, n), dtype=float))
            return float(np.sum(pe)), float(np.sum(pe * pe))
        gf, gr = _draw_unit(fso, rf, rng, n)
        if gf is not None:
            gf = fso.mu_r * gf
        if gr is not None:
            gr = rf.gamma_bar * gr
        if comb is None:
            g = gf if gf is not None else gr
        elif comb is Combiner.SC:
            g = np.maximum(gf, gr)
        else:
            g = gf + gr
        pe = conditional_ber(mod, g)
        return float(np.sum(pe)), float(np.sum(pe * pe))

    parts = _map_chunks(work, cfg)
    n = int(cfg.samples)
    s1 = math.fsum(a for a, _ in parts)
    s2 = math.fsum(b for _, b in parts)
    mean = s1 / n
    var = max(s2 / n - mean * mean, 0.0) * n / max(n - 1, 1)
    se = math.sqrt(var / n)
    half = cfg.z * se
    return McEstimate(mean, se, mean - half, mean + half, n)
