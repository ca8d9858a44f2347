"""Command-line front end: reproducible experiments with file-based outputs.

Every command builds an ExperimentConfig, executes it through run(), and
writes a manifest listing each emitted file with its content hash plus the
pass/fail verdicts.  Exit status: 0 when all verdicts pass, 1 when a
verdict fails, 2 for configuration or usage errors, 3 for unexpected
faults.  Identical configs produce byte-identical CSV bodies.

Config files are flat JSON; numeric fields accept exact rationals as
strings like "2/3".  Environment variables LZCROSS_CONFIG, LZCROSS_OUT,
LZCROSS_THREADS, and LZCROSS_SEED mirror the global flags.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable, Sequence

from . import __version__
from .asymptotics import (
    RatioReport,
    lemma1_interior_sum,
    lemma1_reference,
    lemma1_sum,
    lemma2_reference,
    lemma2_sum,
    lemma3_lhs,
    lemma3_reference,
    lemma4_lhs,
    lemma4_reference,
    ratio_scan,
)
from .classes import BesovParams, TheoremParams, derived_exponents
from .experiments import (
    DEFAULT_MAX_GRID_CELLS,
    approx_error_scan,
    class_normalizer,
    theorem1_rate_experiment,
)
from .indexsets import (
    Anisotropy,
    as_fraction,
    hyperbolic_cross,
    indices_to_json_dict,
)
from .norms import GridFunction, MixedSpaceParams, anisotropic_norm
from .spectral import GridSpec, SpectralFunction

KINDS = ("lemma-check", "cross-gen", "norm", "approx-rate", "extremal", "theorem1-rate")


class ConfigError(Exception):
    """Invalid or incomplete experiment configuration."""


@dataclass
class ExperimentConfig:
    kind: str
    options: dict
    out_dir: Path
    threads: int = 1
    seed: int = 0

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ConfigError(f"unknown experiment kind: {self.kind}")
        if self.threads < 1:
            raise ConfigError("threads must be at least 1")
        self.out_dir = Path(self.out_dir)


@dataclass
class RunManifest:
    kind: str
    version: str
    config: dict
    threads: int
    seed: int
    wall_seconds: float
    outputs: list = field(default_factory=list)
    verdicts: list = field(default_factory=list)
    summary: dict = field(default_factory=dict)

    def all_passed(self) -> bool:
        return all(v["passed"] for v in self.verdicts)

    def to_json_dict(self) -> dict:
        return {
            "kind": self.kind,
            "version": self.version,
            "config": self.config,
            "threads": self.threads,
            "seed": self.seed,
            "wall_seconds": self.wall_seconds,
            "outputs": self.outputs,
            "verdicts": self.verdicts,
            "summary": self.summary,
        }


# -- small parsing helpers ----------------------------------------------------


def parse_range(text: str) -> list[int]:
    """Parse "a:b:linear" (step 1) or "a:b:dyadic" (doubling); default linear."""
    parts = str(text).split(":")
    if len(parts) not in (2, 3):
        raise ConfigError(f"bad range {text!r}; expected a:b:dyadic|linear")
    try:
        a, b = int(parts[0]), int(parts[1])
    except ValueError as exc:
        raise ConfigError(f"bad range bounds in {text!r}") from exc
    mode = parts[2] if len(parts) == 3 else "linear"
    if a < 1 or b < a:
        raise ConfigError(f"range bounds must satisfy 1 <= a <= b, got {text!r}")
    if mode == "linear":
        return list(range(a, b + 1))
    if mode == "dyadic":
        out = []
        n = a
        while n <= b:
            out.append(n)
            n *= 2
        return out
    raise ConfigError(f"unknown range mode {mode!r}")


def _as_list(value) -> list:
    if isinstance(value, str):
        return [part.strip() for part in value.split(",")]
    if isinstance(value, (list, tuple)):
        return list(value)
    return [value]


def _float_list(value) -> list[float]:
    out = []
    for v in _as_list(value):
        out.append(math.inf if str(v).lower() in ("inf", "infinity") else float(Fraction(str(v))))
    return out


def _rational_list(value) -> list[Fraction]:
    return [as_fraction(str(v)) for v in _as_list(value)]


def _json_safe(value):
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, float):
        return "inf" if math.isinf(value) else value
    if isinstance(value, Path):
        return str(value)
    if isinstance(value, dict):
        return {str(k): _json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_safe(v) for v in value]
    return value


def _write_json(path: Path, doc: dict) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        json.dump(_json_safe(doc), fh, indent=2, sort_keys=True)
        fh.write("\n")


def _write_csv(path: Path, header: Sequence[str], rows: Sequence[Sequence]) -> None:
    import csv

    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([repr(v) if isinstance(v, float) else v for v in row])


def _sha256(path: Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _out_path(cfg: ExperimentConfig, name: str) -> Path:
    p = Path(name)
    return p if p.is_absolute() else cfg.out_dir / p


def _threaded_values(
    fn: Callable[[int], float], ns: Sequence[int], threads: int
) -> dict[int, float]:
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            vals = list(pool.map(fn, ns))
        return dict(zip(ns, vals))
    return {n: fn(n) for n in ns}


# -- experiment runners --------------------------------------------------------

_LEMMA_DEFAULTS: dict[int, dict] = {
    1: {"range": "16:4096:dyadic", "relation": "two-sided"},
    2: {"range": "8:256:dyadic", "relation": "two-sided"},
    3: {"range": "4:48:linear", "relation": "upper"},
    4: {"range": "2:64:linear", "relation": "lower"},
}


def _lemma_builders(cfg: ExperimentConfig):
    """Return (lhs, rhs, params_echo) callables for the configured lemma."""
    o = cfg.options
    lemma_id = int(o.get("id", 0))
    if lemma_id == 1:
        case = int(o.get("case", 1))
        if case == 1:
            alpha = float(o.get("alpha", 0.25))
            beta = float(o.get("beta", 0.25))
        elif case == 2:
            alpha = float(o.get("alpha", 1.0))
            beta = float(o.get("beta", 1.0))
        elif case == 3:
            alpha = 1.0
            beta = float(o.get("beta", 0.5))
        else:
            raise ConfigError("lemma 1 case must be 1, 2, or 3")
        if case == 3:
            lhs = lambda l: lemma1_interior_sum(l, beta)
        else:
            lhs = lambda l: lemma1_sum(l, alpha, beta)
        rhs = lambda l: lemma1_reference(l, alpha, beta)
        return lhs, rhs, {"id": 1, "case": case, "alpha": alpha, "beta": beta}
    if lemma_id == 2:
        mode = str(o.get("case", "decay"))
        if mode not in ("decay", "growth"):
            raise ConfigError("lemma 2 case must be decay or growth")
        if mode == "decay":
            beta = float(o.get("beta", 1.0))
            theta = float(o.get("theta", 1.0))
            lam1 = float(o.get("lam1", -0.5))
            lam2 = float(o.get("lam2", 2.0))
        else:
            beta = float(o.get("beta", 1.0))
            theta = float(o.get("theta", 2.0))
            lam1 = float(o.get("lam1", 1.0))
            lam2 = float(o.get("lam2", -1.0))
        lhs = lambda n: lemma2_sum(n, beta, theta, lam1, lam2, mode)
        rhs = lambda n: lemma2_reference(n, beta, theta, lam1, lam2, mode)
        echo = {
            "id": 2, "case": mode, "beta": beta, "theta": theta,
            "lam1": lam1, "lam2": lam2,
        }
        return lhs, rhs, echo
    if lemma_id == 3:
        gamma = Anisotropy.of(_rational_list(o.get("gamma", ["1", "1"])))
        gamma_prime = Anisotropy.of(
            _rational_list(o.get("gamma_prime", o.get("gamma", ["1", "1"])))
        )
        lams = _float_list(o.get("lams", [0.0] * gamma.m))
        thetas = _float_list(o.get("thetas", [2.0] * gamma.m))
        alpha = float(o.get("alpha", 1.0))
        lhs = lambda n: lemma3_lhs(n, gamma, gamma_prime, lams, thetas, alpha)
        rhs = lambda n: lemma3_reference(n, gamma, gamma_prime, lams, thetas, alpha)
        echo = {
            "id": 3, "gamma": gamma.weights, "gamma_prime": gamma_prime.weights,
            "lams": lams, "thetas": thetas, "alpha": alpha,
        }
        return lhs, rhs, echo
    if lemma_id == 4:
        gamma = Anisotropy.of(_rational_list(o.get("gamma", ["1", "1"])))
        lams = _float_list(o.get("lams", [0.0] * gamma.m))
        epsilons = _float_list(o.get("epsilons", [1.0] * gamma.m))
        alpha = float(o.get("alpha", 1.0))
        lhs = lambda n: lemma4_lhs(n, gamma, lams, epsilons, alpha)
        rhs = lambda n: lemma4_reference(n, lams, epsilons, alpha)
        echo = {
            "id": 4, "gamma": gamma.weights, "lams": lams,
            "epsilons": epsilons, "alpha": alpha,
        }
        return lhs, rhs, echo
    raise ConfigError("lemma id must be 1, 2, 3, or 4")


def _run_lemma_check(cfg: ExperimentConfig, manifest: RunManifest) -> list[Path]:
    o = cfg.options
    lemma_id = int(o.get("id", 0))
    if lemma_id not in _LEMMA_DEFAULTS:
        raise ConfigError("lemma id must be 1, 2, 3, or 4")
    defaults = _LEMMA_DEFAULTS[lemma_id]
    ns = parse_range(o.get("range", defaults["range"]))
    relation = o.get("relation", defaults["relation"])
    if relation not in ("two-sided", "lower", "upper"):
        raise ConfigError("relation must be two-sided, lower, or upper")
    lhs, rhs, echo = _lemma_builders(cfg)
    lhs_vals = _threaded_values(lhs, ns, cfg.threads)
    rhs_vals = _threaded_values(rhs, ns, cfg.threads)
    report = ratio_scan(
        lambda n: lhs_vals[n], lambda n: rhs_vals[n], ns,
        relation=relation, params=echo,
    )
    spread_threshold = float(o.get("spread_threshold", 10.0))
    lower_threshold = float(o.get("lower_threshold", 0.1))
    upper_threshold = float(o.get("upper_threshold", 10.0))
    passed = report.verdict(
        spread_threshold=spread_threshold,
        lower_threshold=lower_threshold,
        upper_threshold=upper_threshold,
    )
    out_csv = _out_path(cfg, o.get("out", f"lemma{lemma_id}_report.csv"))
    _write_csv(out_csv, ["n", "lhs", "rhs", "ratio"], report.rows)
    summary_path = out_csv.with_name(out_csv.stem + ".summary.json")
    spread = report.spread
    _write_json(
        summary_path,
        {
            "spread": spread if math.isfinite(spread) else None,
            "min_ratio": report.min_ratio,
            "max_ratio": report.max_ratio,
            "verdict": "within" if passed else "exceeded",
        },
    )
    manifest.verdicts.append(
        {
            "name": f"lemma{lemma_id} {relation} ratio window",
            "passed": passed,
            "detail": {
                "spread": spread if math.isfinite(spread) else None,
                "min_ratio": report.min_ratio,
                "max_ratio": report.max_ratio,
                "spread_threshold": spread_threshold,
                "lower_threshold": lower_threshold,
                "upper_threshold": upper_threshold,
            },
        }
    )
    manifest.summary = {"params": _json_safe(echo), "points": len(ns)}
    return [out_csv, summary_path]


def _run_cross_gen(cfg: ExperimentConfig, manifest: RunManifest) -> list[Path]:
    o = cfg.options
    if "gamma" not in o:
        raise ConfigError("cross-gen requires gamma")
    gamma = Anisotropy.of(_rational_list(o["gamma"]))
    n = as_fraction(str(o.get("n", 1)))
    indices = hyperbolic_cross(n, gamma)
    out = _out_path(cfg, o.get("out", "cross.json"))
    _write_json(out, indices_to_json_dict(gamma.m, indices))
    manifest.summary = {"count": len(indices), "m": gamma.m, "n": str(n)}
    return [out]


def _space_from_options(o: dict, m: int, prefix: str, default_p="2") -> MixedSpaceParams:
    p = _rational_list(o.get(f"{prefix}p", [default_p] * m))
    alpha = _float_list(o.get(f"{prefix}alpha", [0.0] * len(p)))
    tau = _float_list(o.get(f"{prefix}tau", [float(v) for v in p]))
    if not (len(p) == len(alpha) == len(tau) == m):
        raise ConfigError(f"{prefix or 'space'} parameter lists must have length {m}")
    return MixedSpaceParams.of(p, alpha, tau)


def _run_norm(cfg: ExperimentConfig, manifest: RunManifest) -> list[Path]:
    o = cfg.options
    if "grid" not in o:
        raise ConfigError("norm requires a grid file")
    with open(o["grid"], "r", encoding="utf-8") as fh:
        g = GridFunction.from_json_dict(json.load(fh))
    params = _space_from_options(o, g.m, "")
    value = anisotropic_norm(g, params)
    print(f"{value:.12f}")
    manifest.summary = {"norm": value, "m": g.m, "shape": list(g.shape)}
    return []


def _run_approx_rate(cfg: ExperimentConfig, manifest: RunManifest) -> list[Path]:
    o = cfg.options
    if "spectral" not in o:
        raise ConfigError("approx-rate requires a spectral file")
    with open(o["spectral"], "r", encoding="utf-8") as fh:
        f = SpectralFunction.from_json_dict(json.load(fh))
    if "gamma" not in o:
        raise ConfigError("approx-rate requires gamma")
    gamma = Anisotropy.of(_rational_list(o["gamma"]))
    target = _space_from_options(o, f.m, "target_")
    ns = parse_range(o.get("range", "1:8:linear"))
    grid = GridSpec(tuple(int(v) for v in _as_list(o["grid"]))) if "grid" in o else None
    rows = approx_error_scan(f, gamma, target, ns, grid, threads=cfg.threads)
    out = _out_path(cfg, o.get("out", "approx.csv"))
    _write_csv(out, ["n", "error", "card"], rows)
    manifest.summary = {
        "error_kind": "projection",
        "points": len(rows),
        "grid_free": grid is None,
    }
    return [out]


def _theorem_params(o: dict) -> TheoremParams:
    if "p" not in o or "q" not in o or "r" not in o:
        raise ConfigError("theorem parameters require p, q, and r")
    p = _rational_list(o["p"])
    m = len(p)
    source_space = MixedSpaceParams.of(
        p,
        _float_list(o.get("alpha", [0.0] * m)),
        _float_list(o.get("tau1", [float(v) for v in p])),
    )
    thetas = _float_list(o.get("thetas", ["inf"] * m))
    source = BesovParams(source_space, tuple(_rational_list(o["r"])), tuple(thetas))
    target = MixedSpaceParams.of(
        _rational_list(o["q"]),
        _float_list(o.get("beta", [0.0] * m)),
        _float_list(o.get("tau2", [2.0] * m)),
    )
    gamma_prime = Anisotropy.of(_rational_list(o.get("gamma_prime", ["1"] * m)))
    return TheoremParams(source, target, gamma_prime)


def _run_extremal(cfg: ExperimentConfig, manifest: RunManifest) -> list[Path]:
    from .classes import extremal_f1, extremal_f2, extremal_f3

    o = cfg.options
    tp = _theorem_params(o)
    which = int(o.get("which", 1))
    n = int(o.get("n", 4))
    builder = {1: extremal_f1, 2: extremal_f2, 3: extremal_f3}.get(which)
    if builder is None:
        raise ConfigError("which must be 1, 2, or 3")
    f = builder(n, tp)
    grid = GridSpec.minimal_for(f.bandwidth())
    max_cells = int(o.get("max_grid_cells", DEFAULT_MAX_GRID_CELLS))
    value, exact = class_normalizer(f, tp.source, grid, max_grid_cells=max_cells)
    out = _out_path(cfg, o.get("out", "extremal.json"))
    _write_json(out, f.to_json_dict())
    sidecar = out.with_name(out.stem + ".sidecar.json")
    _write_json(sidecar, {"besov": value, "support_size": f.n_terms})
    manifest.summary = {
        "which": which,
        "n": n,
        "besov": value,
        "besov_exact": exact,
        "support_size": f.n_terms,
    }
    return [out, sidecar]


def _run_theorem1_rate(cfg: ExperimentConfig, manifest: RunManifest) -> list[Path]:
    o = cfg.options
    tp = _theorem_params(o)
    ns = parse_range(o.get("range", "6:16:linear"))
    which = int(o.get("which", 1))
    max_cells = int(o.get("max_grid_cells", DEFAULT_MAX_GRID_CELLS))
    result = theorem1_rate_experiment(
        tp, ns, which=which, max_grid_cells=max_cells, threads=cfg.threads
    )
    out = _out_path(cfg, o.get("out", "theorem1_rate.csv"))
    _write_csv(
        out,
        ["n", "error", "reference"],
        [(pt.n, pt.error, pt.reference) for pt in result.points],
    )
    spread_threshold = float(o.get("spread_threshold", 10.0))
    fit_tolerance = float(o.get("fit_tolerance", 0.1))
    rho_star = float(result.derived.rho_star)
    spread = result.report.spread
    spread_ok = math.isfinite(spread) and spread <= spread_threshold
    slope_ok = abs(result.fit_free.slope - rho_star) <= fit_tolerance
    manifest.verdicts.append(
        {
            "name": "error/rate ratio spread within threshold",
            "passed": spread_ok,
            "detail": {"spread": spread if math.isfinite(spread) else None,
                       "threshold": spread_threshold},
        }
    )
    manifest.verdicts.append(
        {
            "name": "free-slope fit matches the predicted exponent",
            "passed": slope_ok,
            "detail": {"fitted": result.fit_free.slope, "expected": rho_star,
                       "tolerance": fit_tolerance},
        }
    )
    summary = {
        "rho_star": rho_star,
        "mu": result.derived.mu,
        "delta": str(result.derived.delta),
        "tied_axes": list(result.derived.A),
        "hypothesis_margin": result.derived.hypothesis_margin,
        "slope_free": result.fit_free.slope,
        "polylog_free": result.fit_free.polylog,
        "polylog_pinned": result.fit_pinned.polylog,
        "spread": spread if math.isfinite(spread) else None,
        "normalizer_exact": all(pt.normalizer_exact for pt in result.points),
    }
    summary_path = out.with_name(out.stem + ".summary.json")
    _write_json(summary_path, summary)
    manifest.summary = summary
    return [out, summary_path]


_RUNNERS = {
    "lemma-check": _run_lemma_check,
    "cross-gen": _run_cross_gen,
    "norm": _run_norm,
    "approx-rate": _run_approx_rate,
    "extremal": _run_extremal,
    "theorem1-rate": _run_theorem1_rate,
}


def run(config: ExperimentConfig) -> RunManifest:
    """Execute one experiment, write its outputs and manifest, return the manifest."""
    runner = _RUNNERS[config.kind]
    manifest = RunManifest(
        kind=config.kind,
        version=__version__,
        config=_json_safe(config.options),
        threads=config.threads,
        seed=config.seed,
        wall_seconds=0.0,
    )
    start = time.monotonic()
    outputs = runner(config, manifest)
    manifest.wall_seconds = time.monotonic() - start

    def listed(p: Path) -> str:
        try:
            return str(p.relative_to(config.out_dir))
        except ValueError:
            return str(p)

    manifest.outputs = [
        {"path": listed(p), "sha256": _sha256(p)} for p in outputs
    ]
    _write_json(config.out_dir / "manifest.json", manifest.to_json_dict())
    return manifest


# -- argument parsing ----------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lzcross",
        description="Hyperbolic-cross approximation experiments and norm evaluation",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--config", default=os.environ.get("LZCROSS_CONFIG"),
                        help="JSON config file with experiment options")
    parser.add_argument("--out", dest="out_dir",
                        default=os.environ.get("LZCROSS_OUT", "."),
                        help="output directory (default: current directory)")
    parser.add_argument("--threads", type=int,
                        default=int(os.environ.get("LZCROSS_THREADS", "1")))
    parser.add_argument("--seed", type=int,
                        default=int(os.environ.get("LZCROSS_SEED", "0")))
    sub = parser.add_subparsers(dest="command", required=True)

    lemma = sub.add_parser("lemma", help="asymptotic lemma ratio checks")
    lemma_sub = lemma.add_subparsers(dest="subcommand", required=True)
    check = lemma_sub.add_parser("check")
    check.add_argument("--id", type=int, required=True, choices=[1, 2, 3, 4])
    check.add_argument("--case", help="lemma 1: 1|2|3; lemma 2: decay|growth")
    check.add_argument("--params", help="JSON file with lemma parameters")
    check.add_argument("--range", dest="range_", metavar="A:B:MODE")
    check.add_argument("--relation", choices=["two-sided", "lower", "upper"])
    check.add_argument("--spread-threshold", type=float, dest="spread_threshold")
    check.add_argument("--out", dest="out_file", metavar="REPORT.CSV")
    check.set_defaults(kind="lemma-check")

    cross = sub.add_parser("cross", help="index-set generation")
    cross_sub = cross.add_subparsers(dest="subcommand", required=True)
    gen = cross_sub.add_parser("gen")
    gen.add_argument("--n", required=True, help="level, rational like 5/2 allowed")
    gen.add_argument("--gamma", required=True, help="comma-separated rationals")
    gen.add_argument("--out", dest="out_file", metavar="CROSS.JSON")
    gen.set_defaults(kind="cross-gen")

    norm = sub.add_parser("norm", help="mixed norm of grid samples")
    norm.add_argument("--grid", required=True, help="GridFunction JSON file")
    norm.add_argument("--p", help="comma-separated per-axis p")
    norm.add_argument("--alpha", help="comma-separated per-axis alpha")
    norm.add_argument("--tau", help="comma-separated per-axis tau")
    norm.set_defaults(kind="norm")

    approx = sub.add_parser("approx", help="cross-truncation error scan")
    approx.add_argument("--spectral", required=True, help="SpectralFunction JSON file")
    approx.add_argument("--gamma", required=True)
    approx.add_argument("--range", dest="range_", metavar="A:B:MODE")
    approx.add_argument("--target-p", dest="target_p")
    approx.add_argument("--target-alpha", dest="target_alpha")
    approx.add_argument("--target-tau", dest="target_tau")
    approx.add_argument("--grid", help="comma-separated residual grid shape")
    approx.add_argument("--out", dest="out_file", metavar="ERRORS.CSV")
    approx.set_defaults(kind="approx-rate")

    extremal = sub.add_parser("extremal", help="build a lower-bound extremal function")
    extremal.add_argument("--which", type=int, choices=[1, 2, 3], default=1)
    extremal.add_argument("--n", type=int, required=True)
    extremal.add_argument("--params", help="JSON file with class/target parameters")
    extremal.add_argument("--out", dest="out_file", metavar="F.JSON")
    extremal.set_defaults(kind="extremal")

    theorem1 = sub.add_parser("theorem1", help="rate experiments")
    theorem1_sub = theorem1.add_subparsers(dest="subcommand", required=True)
    rate = theorem1_sub.add_parser("rate")
    rate.add_argument("--params", help="JSON file with class/target parameters")
    rate.add_argument("--which", type=int, choices=[1, 2, 3])
    rate.add_argument("--range", dest="range_", metavar="A:B:MODE")
    rate.add_argument("--fit-tolerance", type=float, dest="fit_tolerance")
    rate.add_argument("--spread-threshold", type=float, dest="spread_threshold")
    rate.add_argument("--out", dest="out_file", metavar="RATE.CSV")
    rate.set_defaults(kind="theorem1-rate")

    return parser


_FLAG_KEYS = (
    ("id", "id"),
    ("case", "case"),
    ("range_", "range"),
    ("relation", "relation"),
    ("spread_threshold", "spread_threshold"),
    ("fit_tolerance", "fit_tolerance"),
    ("out_file", "out"),
    ("n", "n"),
    ("gamma", "gamma"),
    ("grid", "grid"),
    ("p", "p"),
    ("alpha", "alpha"),
    ("tau", "tau"),
    ("spectral", "spectral"),
    ("target_p", "target_p"),
    ("target_alpha", "target_alpha"),
    ("target_tau", "target_tau"),
    ("which", "which"),
)


def _collect_options(args: argparse.Namespace) -> dict:
    options: dict = {}
    if args.config:
        with open(args.config, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
            if not isinstance(doc, dict):
                raise ConfigError("config file must hold a JSON object")
            options.update(doc)
    params_file = getattr(args, "params", None)
    if params_file:
        with open(params_file, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
            if not isinstance(doc, dict):
                raise ConfigError("params file must hold a JSON object")
            options.update(doc)
    for attr, key in _FLAG_KEYS:
        value = getattr(args, attr, None)
        if value is not None:
            options[key] = value
    return options


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        config = ExperimentConfig(
            kind=args.kind,
            options=_collect_options(args),
            out_dir=Path(args.out_dir),
            threads=args.threads,
            seed=args.seed,
        )
        config.out_dir.mkdir(parents=True, exist_ok=True)
        manifest = run(config)
    except (ConfigError, ValueError, OSError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # pragma: no cover - unexpected faults
        print(f"fault: {exc!r}", file=sys.stderr)
        return 3
    for verdict in manifest.verdicts:
        state = "PASS" if verdict["passed"] else "FAIL"
        print(f"{state} {verdict['name']}")
    return 0 if manifest.all_passed() else 1


if __name__ == "__main__":
    sys.exit(main())
