"""Command-line interface: SNR sweeps to CSV and self-validation.

Config files are flat ``key = value`` lines with dotted prefixes::

    link = mrc
    threshold_db = 3
    fso.turbulence = strong        # or fso.alpha / fso.beta
    fso.xi = 1
    fso.detection = hd             # hd | imdd
    fso.snr_db.start = 0
    fso.snr_db.stop = 40
    fso.snr_db.step = 5
    rf.kappa = 5
    rf.mu = 1
    rf.m = 2
    rf.snr_db = 10
    modulation.scheme = mpsk       # ook | mpsk | mqam
    modulation.M = 2
    mc.enabled = false
    mc.samples = 1000000
    mc.seed = 1

Decibels are converted to linear SNR here and nowhere else.
"""

from __future__ import annotations

import argparse
import io
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .combining import HybridLink, mrc_avg_ber, mrc_outage, sc_avg_ber, sc_outage
from .fso import TURBULENCE, FsoParams, fso_avg_ber, fso_outage
from .modulation import ModulationError, ModulationSpec, make_modspec
from .montecarlo import McConfig, estimate_ber, estimate_outage_sweep
from .rf import RfParams, rf_avg_ber, rf_mixture, rf_outage
from .special import ConvergenceError, ParameterError
from .validate import run_suite

__all__ = ["ConfigError", "SweepConfig", "parse_config", "run_sweep", "write_csv", "main"]

EXIT_OK, EXIT_VALIDATION, EXIT_CONFIG, EXIT_NUMERICAL = 0, 1, 2, 3
HEADER = "sweep_snr_db,analytical,mc_point,mc_ci_low,mc_ci_high,status"

KNOWN_KEYS = {
    "link", "task", "threshold_db",
    "fso.alpha", "fso.beta", "fso.turbulence", "fso.xi", "fso.detection",
    "fso.snr_db", "fso.snr_db.start", "fso.snr_db.stop", "fso.snr_db.step",
    "rf.kappa", "rf.mu", "rf.m",
    "rf.snr_db", "rf.snr_db.start", "rf.snr_db.stop", "rf.snr_db.step",
    "modulation.scheme", "modulation.M",
    "mc.enabled", "mc.samples", "mc.seed", "mc.workers",
}


class ConfigError(ValueError):
    """Invalid sweep configuration; the message names the offending field."""


@dataclass
class SweepConfig:
    link: str
    task: str
    sweep_axis: str
    sweep_db: list[float]
    fso: FsoParams | None = None
    rf: RfParams | None = None
    threshold_db: float | None = None
    modulation: ModulationSpec | None = None
    mc_enabled: bool = False
    mc: McConfig = field(default_factory=McConfig)


def _read_pairs(text: str) -> dict[str, str]:
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw.strip()!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in KNOWN_KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in out:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        out[key] = value
    return out


def _num(kv, key, kind=float, default=None):
    if key not in kv:
        if default is None:
            raise ConfigError(f"{key}: required")
        return default
    try:
        v = kind(kv[key])
    except ValueError:
        raise ConfigError(f"{key}: cannot parse {kv[key]!r} as {kind.__name__}") from None
    if kind is float and not math.isfinite(v):
        raise ConfigError(f"{key}: must be finite")
    return v


def _bool(kv, key, default):
    if key not in kv:
        return default
    v = kv[key].lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"{key}: expected true/false, got {kv[key]!r}")


def _snr(kv, prefix):
    """Return ``(fixed_db, None)`` or ``(None, [range_db...])``."""
    fixed = f"{prefix}.snr_db"
    parts = [f"{fixed}.{s}" for s in ("start", "stop", "step")]
    has_range = any(p in kv for p in parts)
    if fixed in kv and has_range:
        raise ConfigError(f"{fixed}: give either a fixed value or start/stop/step, not both")
    if has_range:
        start, stop, step = (_num(kv, p) for p in parts)
        if not step > 0:
            raise ConfigError(f"{fixed}.step: must be positive")
        if stop < start:
            raise ConfigError(f"{fixed}.stop: must be >= start")
        n = int(math.floor((stop - start) / step + 1e-9)) + 1
        return None, [start + i * step for i in range(n)]
    if fixed in kv:
        return _num(kv, fixed), None
    raise ConfigError(f"{fixed}: required (fixed value or start/stop/step)")


def parse_config(text: str, *, task: str | None = None) -> SweepConfig:
    """Parse and validate a flat config; raises :class:`ConfigError`."""
    kv = _read_pairs(text)
    link = kv.get("link", "").lower()
    if link not in ("fso", "rf", "sc", "mrc"):
        raise ConfigError(f"link: expected one of fso, rf, sc, mrc, got {kv.get('link')!r}")
    cfg_task = kv.get("task", "").lower() or None
    if cfg_task is not None and cfg_task not in ("op", "ber"):
        raise ConfigError(f"task: expected op or ber, got {kv['task']!r}")
    if task is not None and cfg_task is not None and task != cfg_task:
        raise ConfigError(f"task: config says {cfg_task!r} but the {task!r} command was used")
    task = task or cfg_task
    if task is None:
        raise ConfigError("task: required (op or ber)")

    uses_fso, uses_rf = link in ("fso", "sc", "mrc"), link in ("rf", "sc", "mrc")
    axes, fixed = {}, {}
    fso = rf = None
    if uses_fso:
        if "fso.turbulence" in kv:
            if "fso.alpha" in kv or "fso.beta" in kv:
                raise ConfigError("fso.turbulence: cannot be combined with fso.alpha/fso.beta")
            name = kv["fso.turbulence"].lower()
            if name not in TURBULENCE:
                raise ConfigError(f"fso.turbulence: expected one of {', '.join(TURBULENCE)}")
            alpha, beta = TURBULENCE[name]
        else:
            alpha, beta = _num(kv, "fso.alpha"), _num(kv, "fso.beta")
        xi = _num(kv, "fso.xi", default=1.0)
        det = kv.get("fso.detection", "hd").lower().replace("/", "")
        if det not in ("hd", "imdd"):
            raise ConfigError(f"fso.detection: expected hd or imdd, got {kv['fso.detection']!r}")
        f_fixed, f_range = _snr(kv, "fso")
        try:
            fso = FsoParams(alpha, beta, xi, 1 if det == "hd" else 2,
                            10 ** ((f_fixed if f_range is None else f_range[0]) / 10))
        except ValueError as exc:
            raise ConfigError(f"fso: {str(exc).removeprefix('FsoParams: ')}") from None
        (axes if f_range else fixed)["fso"] = f_range or f_fixed
    if uses_rf:
        r_fixed, r_range = _snr(kv, "rf")
        try:
            rf = RfParams(_num(kv, "rf.kappa"), _num(kv, "rf.mu", float), _num(kv, "rf.m", float),
                          10 ** ((r_fixed if r_range is None else r_range[0]) / 10))
        except ValueError as exc:
            # "RfParams.kappa must ..." names the offending key as "rf.kappa must ..."
            raise ConfigError(str(exc).replace("RfParams.", "rf.")) from None
        (axes if r_range else fixed)["rf"] = r_range or r_fixed
    if len(axes) != 1:
        raise ConfigError("snr_db: exactly one branch in use must give a start/stop/step range")
    axis, sweep = next(iter(axes.items()))

    threshold = mod = None
    if task == "op":
        threshold = _num(kv, "threshold_db")
    else:
        try:
            mod = make_modspec(kv.get("modulation.scheme", ""), _num(kv, "modulation.M", int, 2))
        except ValueError as exc:
            field_ = "modulation.scheme" if "modulation.scheme" not in kv else "modulation"
            raise ConfigError(f"{field_}: {exc}") from None
        if fso is not None:
            try:
                mod.check_detection(fso.r)
            except ModulationError as exc:
                raise ConfigError(f"modulation: {exc}") from None

    try:
        mc = McConfig(samples=_num(kv, "mc.samples", int, 1_000_000),
                      master_seed=_num(kv, "mc.seed", int, 0),
                      workers=_num(kv, "mc.workers", int, 1))
    except ValueError as exc:
        raise ConfigError(f"mc: {exc}") from None
    return SweepConfig(link=link, task=task, sweep_axis=axis, sweep_db=sweep, fso=fso, rf=rf,
                       threshold_db=threshold, modulation=mod,
                       mc_enabled=_bool(kv, "mc.enabled", False), mc=mc)


def _point(cfg: SweepConfig, snr_db: float):
    """Branch parameters (and link target) at one sweep point."""
    lin = 10 ** (snr_db / 10)
    fso = cfg.fso.with_snr(lin) if cfg.fso is not None and cfg.sweep_axis == "fso" else cfg.fso
    rf = cfg.rf.with_snr(lin) if cfg.rf is not None and cfg.sweep_axis == "rf" else cfg.rf
    if cfg.link == "fso":
        return fso, rf, fso
    if cfg.link == "rf":
        return fso, rf, rf
    return fso, rf, HybridLink(fso, rf, cfg.link)


def _analytical(cfg: SweepConfig, target) -> float:
    if cfg.task == "op":
        th = 10 ** (cfg.threshold_db / 10)
        if cfg.link == "fso":
            return fso_outage(target, th)
        if cfg.link == "rf":
            return rf_outage(rf_mixture(target), th)
        return sc_outage(target, th) if cfg.link == "sc" else mrc_outage(target, th)
    mod = cfg.modulation
    if cfg.link == "fso":
        return fso_avg_ber(target, mod)
    if cfg.link == "rf":
        return rf_avg_ber(rf_mixture(target), mod)
    return sc_avg_ber(target, mod) if cfg.link == "sc" else mrc_avg_ber(target, mod)


def run_sweep(cfg: SweepConfig) -> list[tuple]:
    """Rows ``(snr_db, analytical, mc_point, mc_lo, mc_hi, status)`` in sweep order.

    Numerical failures at a point are recorded in ``status`` and the sweep
    continues; missing values are ``None``.
    """
    rows = []
    for snr_db in cfg.sweep_db:
        _, _, target = _point(cfg, snr_db)
        try:
            val, status = _analytical(cfg, target), "ok"
        except (ConvergenceError, ParameterError, ArithmeticError) as exc:
            val, status = None, f"numerical-failure: {exc}".replace(",", ";")
        rows.append([snr_db, val, None, None, None, status])
    if not cfg.mc_enabled:
        return [tuple(r) for r in rows]
    if cfg.task == "op":
        pts = []
        for snr_db in cfg.sweep_db:
            fso, rf, _ = _point(cfg, snr_db)
            pts.append((fso.mu_r if fso else 1.0, rf.gamma_bar if rf else 1.0))
        fso = cfg.fso if cfg.link != "rf" else None
        rf = cfg.rf if cfg.link != "fso" else None
        est = estimate_outage_sweep(fso, rf, pts, [10 ** (cfg.threshold_db / 10)], cfg.mc)
        for row, e in zip(rows, est[cfg.link][:, 0]):
            row[2:5] = e.point, e.ci_low, e.ci_high
    else:
        for row in rows:
            e = estimate_ber(_point(cfg, row[0])[2], cfg.modulation, cfg.mc)
            row[2:5] = e.point, e.ci_low, e.ci_high
    return [tuple(r) for r in rows]


def _fmt(v) -> str:
    return "" if v is None else f"{v:.16e}"


def write_csv(rows, out) -> None:
    out.write(HEADER + "\n")
    for snr_db, *vals, status in rows:
        out.write(",".join([_fmt(float(snr_db)), *(_fmt(v) for v in vals), status]) + "\n")


PLOT_SCRIPT = '''"""Plot a hybridlink sweep CSV (needs matplotlib)."""
import csv
import sys

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

src = sys.argv[1] if len(sys.argv) > 1 else {csv!r}
dst = sys.argv[2] if len(sys.argv) > 2 else src.rsplit(".", 1)[0] + ".png"
x, y, mx, lo, hi = [], [], [], [], []
with open(src, newline="") as fh:
    for row in csv.DictReader(fh):
        if not row["analytical"]:
            continue
        x.append(float(row["sweep_snr_db"]))
        y.append(float(row["analytical"]))
        if row["mc_point"]:
            mx.append((float(row["sweep_snr_db"]), float(row["mc_point"]),
                       float(row["mc_ci_low"]), float(row["mc_ci_high"])))
fig, ax = plt.subplots(figsize=(6, 4.5))
ax.semilogy(x, y, "-", label="analytical")
if mx:
    xs, ps, ls, hs = zip(*mx)
    err = [[p - l for p, l in zip(ps, ls)], [h - p for p, h in zip(ps, hs)]]
    ax.errorbar(xs, ps, yerr=err, fmt="o", mfc="none", label="Monte Carlo")
ax.set_xlabel({xlabel!r})
ax.set_ylabel({ylabel!r})
ax.grid(True, which="both", alpha=0.3)
ax.legend()
fig.tight_layout()
fig.savefig(dst, dpi=150)
print(dst)
'''


def write_plot_script(path: Path, csv_path: str, cfg: SweepConfig) -> None:
    xlabel = f"average SNR of the {cfg.sweep_axis.upper()} link (dB)"
    ylabel = "outage probability" if cfg.task == "op" else "average BER"
    path.write_text(PLOT_SCRIPT.format(csv=csv_path, xlabel=xlabel, ylabel=ylabel),
                    encoding="utf-8", newline="\n")


def _sweep_command(args) -> int:
    try:
        text = Path(args.config).read_text(encoding="utf-8")
    except OSError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        cfg = parse_config(text, task=args.command)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if args.mc is not None:
        cfg.mc_enabled = args.mc
    if args.seed is not None:
        if not 0 <= args.seed < 2 ** 64:
            print("config error: --seed must be a 64-bit unsigned integer", file=sys.stderr)
            return EXIT_CONFIG
        cfg.mc = McConfig(cfg.mc.samples, args.seed, cfg.mc.workers, cfg.mc.ci_level)
    rows = run_sweep(cfg)
    buf = io.StringIO()
    write_csv(rows, buf)
    if args.out:
        Path(args.out).write_text(buf.getvalue(), encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(buf.getvalue())
    if args.plot_script:
        write_plot_script(Path(args.plot_script), args.out or "sweep.csv", cfg)
    failed = [r for r in rows if r[5] != "ok"]
    for r in failed:
        print(f"{r[0]:g} dB: {r[5]}", file=sys.stderr)
    return EXIT_NUMERICAL if failed else EXIT_OK


def _validate_command(args) -> int:
    try:
        checks = run_suite(args.suite)
    except KeyError as exc:
        print(f"config error: {exc.args[0]}", file=sys.stderr)
        return EXIT_CONFIG
    lines = ["name,expected,got,tol,status", *(c.line() for c in checks)]
    text = "\n".join(lines) + "\n"
    if args.report:
        Path(args.report).write_text(text, encoding="utf-8", newline="\n")
    sys.stdout.write(text)
    failed = sum(not c.passed for c in checks)
    print(f"{len(checks) - failed}/{len(checks)} checks passed", file=sys.stderr)
    return EXIT_VALIDATION if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hybridlink",
                                 description="Outage and BER of FSO, RF and hybrid FSO/RF links.")
    sub = ap.add_subparsers(dest="command", required=True)
    for name, what in (("op", "outage probability"), ("ber", "average bit-error rate")):
        p = sub.add_parser(name, help=f"sweep the {what} and write CSV")
        p.add_argument("--config", required=True, help="flat key = value config file")
        p.add_argument("--out", help="CSV output path (default: stdout)")
        p.add_argument("--mc", dest="mc", action="store_true", default=None,
                       help="add Monte Carlo columns")
        p.add_argument("--no-mc", dest="mc", action="store_false", help="skip Monte Carlo")
        p.add_argument("--seed", type=int, help="Monte Carlo master seed (overrides mc.seed)")
        p.add_argument("--plot-script", help="also write a matplotlib script that plots the CSV")
    p = sub.add_parser("validate", help="run the built-in self-check suites")
    p.add_argument("--suite", default="all",
                   help="identities, mixtures, oracles, paper-values or all")
    p.add_argument("--report", help="also write the report to this path")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "validate":
        return _validate_command(args)
    return _sweep_command(args)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
