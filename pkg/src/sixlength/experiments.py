"""Monte-Carlo harness comparing sampled walk lengths with the exact law and
the Rayleigh limits.

Trials are cut into fixed-size blocks; block ``b`` draws from the stream
``(seed, 1, b)``.  Results therefore depend only on the configuration, never
on how many workers ran the blocks or in which order they finished.
"""
from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from . import __version__
from .asymptotics import (predicted_mean, predicted_tail_mean, predicted_variance,
                          rayleigh_cdf, rayleigh_moment)
from .degrees import DegreeSequence, parse_generator_spec, stats
from .errors import ConfigError, SixLengthError
from .exact import survival
from .gof import (ChiSquare, UniformityResult, chi_square, joint_uniformity_test,
                  ks_distance)
from .graph import sample_walks_full, sample_walks_lazy
from .reduction import coupled_six_length
from .rng import stream

SAMPLERS = ("full", "lazy", "coupled")
STATISTICS = ("moments", "ks_rayleigh", "exact", "tail", "ecdf")


@dataclass(frozen=True)
class ExperimentConfig:
    degrees: str | DegreeSequence
    n: int | None = None
    target: str | int = "max-degree"
    trials: int = 1000
    seed: int = 0
    sampler: str = "lazy"
    outputs: tuple[str, ...] = STATISTICS
    workers: int = 1
    block_size: int = 1024
    exact_limit: int = 20_000

    def __post_init__(self):
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if self.sampler not in SAMPLERS:
            raise ConfigError(f"sampler must be one of {SAMPLERS}")
        bad = set(self.outputs) - set(STATISTICS)
        if bad:
            raise ConfigError(f"unknown statistics {sorted(bad)}")
        if self.block_size < 1 or self.workers < 1:
            raise ConfigError("block_size and workers must be positive")

    def resolve_degrees(self) -> DegreeSequence:
        if isinstance(self.degrees, DegreeSequence):
            return self.degrees
        try:
            return parse_generator_spec(self.degrees, self.n, stream(self.seed, 0))
        except (SixLengthError, OSError, KeyError) as exc:
            raise ConfigError(f"cannot build degree sequence from {self.degrees!r}: {exc}") from exc

    def describe(self) -> dict:
        d = {k: v for k, v in asdict(self).items() if k != "degrees"}
        d["degrees"] = self.degrees if isinstance(self.degrees, str) else repr(self.degrees)
        d["outputs"] = list(self.outputs)
        return d


def resolve_target(ds: DegreeSequence, rule: str | int) -> int:
    """Vertex id for ``max-degree``, ``zero-degree`` or an explicit 0-indexed id."""
    arr = ds.array
    if rule == "max-degree":
        return int(np.argmax(arr))
    if rule == "zero-degree":
        zeros = np.flatnonzero(arr == 0)
        if zeros.size == 0:
            raise ConfigError("no vertex has degree 0")
        return int(zeros[0])
    try:
        v = int(rule)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad target rule {rule!r}") from exc
    if not 0 <= v < ds.n:
        raise ConfigError(f"vertex {v} outside [0, {ds.n})")
    return v


def _run_block(args) -> np.ndarray:
    ds, v, sampler, seed, block, count = args
    gen = stream(seed, 1, block)
    if sampler == "lazy":
        return sample_walks_lazy(ds, v, count, gen)
    if sampler == "full":
        return sample_walks_full(ds, v, count, gen)
    six = coupled_six_length(ds, v, gen, size=count)
    return np.column_stack([six, np.full(count, -1)])


def draw_samples(cfg: ExperimentConfig, ds: DegreeSequence | None = None,
                 v: int | None = None) -> np.ndarray:
    """All trial records ``(six, tail)`` in trial order; tail is -1 for the coupled sampler."""
    ds = cfg.resolve_degrees() if ds is None else ds
    v = resolve_target(ds, cfg.target) if v is None else v
    nb = math.ceil(cfg.trials / cfg.block_size)
    jobs = [(ds, v, cfg.sampler, cfg.seed, b,
             min(cfg.block_size, cfg.trials - b * cfg.block_size)) for b in range(nb)]
    if cfg.workers > 1 and nb > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            parts = list(pool.map(_run_block, jobs))
    else:
        parts = [_run_block(j) for j in jobs]
    return np.concatenate(parts, axis=0)


@dataclass(frozen=True)
class Summary:
    mean: float
    var: float
    se: float

    @classmethod
    def of(cls, x: np.ndarray) -> "Summary":
        x = np.asarray(x, dtype=float)
        var = float(x.var(ddof=1)) if x.size > 1 else 0.0
        return cls(float(x.mean()), var, math.sqrt(var / x.size))


@dataclass
class StatReport:
    n: int
    sigma2: float
    scale: float
    vertex: int
    d_v: int
    trials: int
    sampler: str
    seed: int
    six: Summary
    tail: Summary | None = None
    cycle: Summary | None = None
    ks_rayleigh: float | None = None
    ks_exact: float | None = None
    chi2_exact: ChiSquare | None = None
    exact_mean: float | None = None
    mean_ratio: float | None = None
    var_ratio: float | None = None
    moment_ratios: dict = field(default_factory=dict)
    p_tail_zero: float | None = None
    tail_six_ratio: float | None = None
    tail_mean_ratio: float | None = None
    cycle_mean_ratio: float | None = None
    tail_uniformity: UniformityResult | None = None
    ecdf: list = field(default_factory=list)
    degenerate: bool = False

    def rows(self) -> list[tuple[str, object]]:
        """Flat ``(statistic, value)`` rows; the ECDF grid is not included."""
        out: list[tuple[str, object]] = []
        for key in ("n", "sigma2", "scale", "vertex", "d_v", "trials", "sampler", "seed"):
            out.append((key, getattr(self, key)))
        for name in ("six", "tail", "cycle"):
            s = getattr(self, name)
            if s is not None:
                out += [(f"{name}_mean", s.mean), (f"{name}_var", s.var), (f"{name}_se", s.se)]
        for key in ("ks_rayleigh", "ks_exact", "exact_mean", "mean_ratio", "var_ratio",
                    "p_tail_zero", "tail_six_ratio", "tail_mean_ratio", "cycle_mean_ratio"):
            val = getattr(self, key)
            if val is not None:
                out.append((key, val))
        if self.chi2_exact is not None:
            out += [("chi2_exact_stat", self.chi2_exact.stat), ("chi2_exact_df", self.chi2_exact.df),
                    ("chi2_exact_p", self.chi2_exact.p)]
        for p, r in sorted(self.moment_ratios.items()):
            out.append((f"moment_ratio_{p}", r))
        if self.tail_uniformity is not None:
            u = self.tail_uniformity
            out += [("tail_uniform_ks", u.ks), ("tail_uniform_chi2", u.chi2),
                    ("tail_uniform_df", u.df), ("tail_uniform_p", u.p)]
        out.append(("degenerate", self.degenerate))
        return out

    def to_csv(self, path_or_file, header: Sequence[str] = ()) -> None:
        fh = open(path_or_file, "w") if isinstance(path_or_file, str) else path_or_file
        try:
            for line in header:
                fh.write(f"# {line}\n")
            fh.write("statistic,value\n")
            for k, v in self.rows():
                fh.write(f"{k},{_fmt(v)}\n")
        finally:
            if isinstance(path_or_file, str):
                fh.close()

    def to_dict(self) -> dict:
        return {"version": __version__, "statistics": {k: v for k, v in self.rows()},
                "ecdf": self.ecdf}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, default=_json_default)


def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _json_default(o):
    if isinstance(o, (np.integer,)):
        return int(o)
    if isinstance(o, (np.floating,)):
        return float(o)
    raise TypeError(type(o))


def summarize(samples: np.ndarray, ds: DegreeSequence, v: int, cfg: ExperimentConfig) -> StatReport:
    st = stats(ds)
    n, s2 = ds.n, st.sigma2_float
    six = samples[:, 0]
    has_tail = bool((samples[:, 1] >= 0).all())
    flat = s2 == 0
    scale = st.scale
    rep = StatReport(n=n, sigma2=s2, scale=scale, vertex=v, d_v=ds[v], trials=len(six),
                     sampler=cfg.sampler, seed=cfg.seed, six=Summary.of(six), degenerate=flat)
    want = set(cfg.outputs)
    if has_tail:
        tail = samples[:, 1]
        rep.tail = Summary.of(tail)
        rep.cycle = Summary.of(six - tail)
        rep.p_tail_zero = float(np.mean(tail == 0))
    if "moments" in want and not flat:
        rep.mean_ratio = rep.six.mean / predicted_mean(n, s2)
        rep.var_ratio = rep.six.var / predicted_variance(n, s2)
        x = six / scale
        rep.moment_ratios = {p: float(np.mean(x**p)) / rayleigh_moment(p) for p in (1, 2, 3, 4)}
    if "ks_rayleigh" in want and not flat:
        rep.ks_rayleigh = ks_distance(six / scale, rayleigh_cdf)
    if "ecdf" in want and not flat:
        grid = np.round(np.arange(0, 4.01, 0.1), 10)
        emp = np.searchsorted(np.sort(six / scale), grid, side="right") / len(six)
        rep.ecdf = [(float(x), float(e), float(rayleigh_cdf(x))) for x, e in zip(grid, emp)]
    if "tail" in want and has_tail:
        if not flat:
            rep.tail_six_ratio = rep.tail.mean / rep.six.mean
            rep.tail_mean_ratio = rep.tail.mean / predicted_tail_mean(n, s2)
            rep.cycle_mean_ratio = rep.cycle.mean / predicted_tail_mean(n, s2)
        if len(six) >= 10_000:
            rep.tail_uniformity = joint_uniformity_test(six, samples[:, 1])
    if "exact" in want and n <= cfg.exact_limit:
        tab = survival(ds, v, n - 1, "float")
        surv = np.array(tab.surv + (0.0,))
        cdf = lambda k: np.where(np.asarray(k) < 0, 0.0,
                                 1.0 - surv[np.clip(np.asarray(k), 0, n)])
        rep.ks_exact = ks_distance(six, cdf, discrete=True)
        rep.exact_mean = float(math.fsum(tab.surv))
        pmf = surv[:-1] - surv[1:]          # P(SL = k+1), k = 0..n-1
        observed = np.bincount(six - 1, minlength=n)[:n]
        rep.chi2_exact = chi_square(observed, pmf)
    return rep


def run_experiment(cfg: ExperimentConfig) -> StatReport:
    ds = cfg.resolve_degrees()
    v = resolve_target(ds, cfg.target)
    samples = draw_samples(cfg, ds, v)
    return summarize(samples, ds, v, cfg)


def write_samples(samples: np.ndarray, path_or_file, header: Sequence[str] = ()) -> None:
    """Raw records, one ``six tail`` integer pair per line."""
    fh = open(path_or_file, "w") if isinstance(path_or_file, str) else path_or_file
    try:
        for line in header:
            fh.write(f"# {line}\n")
        for s, t in samples.tolist():
            fh.write(f"{s} {t}\n")
    finally:
        if isinstance(path_or_file, str):
            fh.close()


def load_thresholds() -> dict:
    """Versioned acceptance thresholds shipped with the package."""
    from importlib.resources import files
    return json.loads(files("sixlength.data").joinpath("thresholds.json").read_text())
