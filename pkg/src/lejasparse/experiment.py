"""Budget sweeps: build a surrogate per budget and tabulate its errors.

Config schema (JSON object, unknown keys rejected)::

    {
      "model": "borehole" | {"callable": "package.module:function",
                             "dists": [{"type": "Uniform", "a": -1, "b": 1}, ...]},
      "budgets": [10, 20, ...],        # strictly increasing positive ints
      "tolerance": 0.0,
      "cv_sample_size": 100000,
      "reference": {"method": "sobol" | "mc", "size": 10000000, "value": null},
      "seed": 0,
      "output": "results.csv",
      "strict_budget": true,
      "timing": true
    }

Only ``model`` is required. An external callable receives an array of shape
``(K, N)`` and returns ``K`` outputs.
"""

from __future__ import annotations

import csv
import importlib
import io
import json
import math
import time
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np

from .benchmarks import NAMES, benchmark_spec
from .distributions import Distribution, from_record
from .leja import unweighted_leja, weighted_leja, symmetric_leja
from .postproc import CV_SAMPLE_SIZE, rel_mean_error, rms_cv_error
from .sampling import PointStream, mc_reference_mean, sample_inputs
from .sparse import BuildError, adaptive_build
from .univariate import hierarchical_weights

DEFAULT_BUDGETS = tuple(range(10, 101, 10)) + tuple(range(200, 1001, 100))
REFERENCE_SIZE = 10**7
COLUMNS = (
    "budget",
    "eval_count",
    "eps_cv_rms",
    "eps_rel_mean",
    "mean_estimate",
    "wall_time_seconds",
    "status",
)

_KEYS = {"model", "budgets", "tolerance", "cv_sample_size", "reference", "seed", "output", "strict_budget", "timing"}
_REF_KEYS = {"method", "size", "value"}


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class Reference:
    method: str = "sobol"
    size: int = REFERENCE_SIZE
    value: float | None = None


@dataclass(frozen=True)
class ExperimentConfig:
    model: str | dict
    budgets: tuple[int, ...] = DEFAULT_BUDGETS
    tolerance: float = 0.0
    cv_sample_size: int = CV_SAMPLE_SIZE
    reference: Reference = field(default_factory=Reference)
    seed: int = 0
    output: str | None = None
    strict_budget: bool = True
    timing: bool = True

    def __post_init__(self):
        b = self.budgets
        if not b or any(int(x) != x or x < 1 for x in b) or any(x >= y for x, y in zip(b, b[1:])):
            raise ConfigError(f"budgets must be positive integers in strictly increasing order, got {list(b)}")
        if not self.tolerance >= 0:
            raise ConfigError("tolerance must be non-negative")
        if self.cv_sample_size < 1:
            raise ConfigError("cv_sample_size must be positive")
        if self.reference.method not in ("sobol", "mc"):
            raise ConfigError(f"reference method must be 'sobol' or 'mc', got {self.reference.method!r}")
        if self.reference.size < 1:
            raise ConfigError("reference size must be positive")
        if self.reference.value is not None and self.reference.value == 0:
            raise ConfigError("a zero reference mean makes the relative error undefined")
        if isinstance(self.model, str):
            if self.model not in NAMES:
                raise ConfigError(f"unknown benchmark {self.model!r}; choose from {', '.join(NAMES)}")
        elif isinstance(self.model, dict):
            extra = set(self.model) - {"callable", "dists"}
            if extra or "callable" not in self.model or "dists" not in self.model:
                raise ConfigError("external model needs exactly the keys 'callable' and 'dists'")
        else:
            raise ConfigError("model must be a benchmark name or an object")

    @classmethod
    def from_dict(cls, doc: dict) -> ExperimentConfig:
        if not isinstance(doc, dict):
            raise ConfigError("config must be a JSON object")
        unknown = set(doc) - _KEYS
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
        if "model" not in doc:
            raise ConfigError("config needs a 'model'")
        kw = dict(doc)
        ref = kw.pop("reference", {}) or {}
        bad = set(ref) - _REF_KEYS
        if bad:
            raise ConfigError(f"unknown reference keys: {', '.join(sorted(bad))}")
        kw["reference"] = Reference(
            method=ref.get("method", "sobol"),
            size=int(ref.get("size", REFERENCE_SIZE)),
            value=None if ref.get("value") is None else float(ref["value"]),
        )
        if "budgets" in kw:
            kw["budgets"] = tuple(kw["budgets"])
        for key in ("cv_sample_size", "seed"):
            if key in kw:
                kw[key] = int(kw[key])
        return cls(**kw)

    @classmethod
    def load(cls, path) -> ExperimentConfig:
        with open(path) as fh:
            try:
                doc = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ConfigError(f"{path}: invalid JSON ({exc})") from None
        return cls.from_dict(doc)

    def with_overrides(self, **kw) -> ExperimentConfig:
        ref_size = kw.pop("reference_size", None)
        kw = {k: v for k, v in kw.items() if v is not None}
        out = replace(self, **kw)
        if ref_size is not None:
            out = replace(out, reference=replace(out.reference, size=int(ref_size)))
        return out


@dataclass(frozen=True)
class ResultRow:
    budget: int
    eval_count: int
    eps_cv_rms: float
    eps_rel_mean: float
    mean_estimate: float
    wall_time_seconds: float | None
    status: str = "ok"


def resolve_model(spec: str | dict) -> tuple[Callable[[np.ndarray], np.ndarray], list[Distribution]]:
    if isinstance(spec, str):
        bm = benchmark_spec(spec)
        return bm.evaluator, list(bm.dists)
    target = spec["callable"]
    mod_name, _, attr = target.partition(":")
    if not mod_name or not attr:
        raise ConfigError(f"callable must look like 'module:function', got {target!r}")
    try:
        fn = getattr(importlib.import_module(mod_name), attr)
    except (ImportError, AttributeError) as exc:
        raise ConfigError(f"cannot resolve {target!r}: {exc}") from None
    dists = [from_record(r) for r in spec["dists"]]
    if not dists:
        raise ConfigError("external model needs at least one distribution")
    return fn, dists


def reference_mean(model, dists: Sequence[Distribution], ref: Reference, seed: int) -> float:
    if ref.value is not None:
        return ref.value
    if ref.method == "sobol":
        stream = PointStream("sobol", len(dists))
    else:
        # offset keeps this stream apart from the cross-validation sample
        stream = PointStream("pseudo-random", len(dists), seed=[seed, 1])
    mean, _ = mc_reference_mean(model, dists, ref.size, stream)
    return mean


def run_experiment(config: ExperimentConfig, log: Callable[[str], None] | None = None) -> list[ResultRow]:
    """One fresh adaptive build per budget, scored on shared samples."""
    model, dists = resolve_model(config.model)
    ref = reference_mean(model, dists, config.reference, config.seed)
    if ref == 0:
        raise ConfigError("reference mean is zero; the relative error is undefined")
    sample = sample_inputs(dists, config.cv_sample_size, config.seed)
    truth = np.asarray(model(sample), dtype=float)
    rows = []
    for budget in config.budgets:
        t0 = time.perf_counter()
        try:
            sur, report = adaptive_build(
                model, dists, budget=budget, tolerance=config.tolerance, strict_budget=config.strict_budget
            )
        except BuildError as exc:
            rows.append(ResultRow(budget, 0, math.nan, math.nan, math.nan, None, f"failed: {exc}"))
            continue
        wall = time.perf_counter() - t0 if config.timing else None
        mean = sur.mean()
        rows.append(
            ResultRow(
                budget,
                sur.eval_count,
                rms_cv_error(sur, truth, sample),
                rel_mean_error(mean, ref),
                mean,
                wall,
                report.termination_reason or "ok",
            )
        )
        if log:
            r = rows[-1]
            log(f"B={budget}: {r.eval_count} evaluations, cv rms {r.eps_cv_rms:.3e}, rel mean {r.eps_rel_mean:.3e}")
    return rows


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def rows_to_csv(rows: Sequence[ResultRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(COLUMNS)
    for r in rows:
        writer.writerow([_fmt(getattr(r, c)) for c in COLUMNS])
    return buf.getvalue()


def write_rows(rows: Sequence[ResultRow], path) -> None:
    text = rows_to_csv(rows)
    try:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write results to {path}: {exc.strerror}") from exc


def leja_sequence_for(record: dict, count: int, kind: str = "weighted", y0: float | None = None):
    if count < 1:
        raise ValueError("count must be at least 1")
    if kind == "weighted":
        return weighted_leja(from_record(record), count, y0)
    if kind == "unweighted":
        return unweighted_leja(count, 1.0 if y0 is None else y0)
    if kind == "symmetric":
        return symmetric_leja(count)
    raise ValueError(f"unknown Leja kind {kind!r}")


def export_leja(record: dict, count: int, path, kind: str = "weighted", y0: float | None = None,
                weights: bool = False) -> None:
    """Write ``index,node,objective`` rows, plus ``weight`` (``E[l_i]``) if asked."""
    seq = leja_sequence_for(record, count, kind, y0)
    header = ["index", "node", "objective"]
    w = None
    if weights:
        header.append("weight")
        w = hierarchical_weights(seq.array, seq.dist)
    try:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(header)
            for j, (y, obj) in enumerate(zip(seq.nodes, seq.objectives)):
                row = [j, repr(float(y)), "" if math.isnan(obj) else repr(float(obj))]
                if w is not None:
                    row.append(repr(float(w[j])))
                writer.writerow(row)
    except OSError as exc:
        raise OSError(f"cannot write Leja nodes to {path}: {exc.strerror}") from exc
