"""MSE convergence experiments over samplers x integrands x sample counts.

Every cell of an experiment draws its realizations from sub-seeds derived
by hashing (master seed, sampler label, integrand label, n, rep), so a
cell's numbers never depend on which other cells run, in what order, or on
how many worker threads execute them.  Records come back sorted, and the
CSV writer prints floats with 17 significant digits; the same plan
therefore produces byte-identical output at any ``--threads`` setting.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .integrands import make_gmm, make_pwconst
from .rng import derive_seed
from .samplers import SampleSet, SamplerSpec, _QMC_KINDS, generate, randomize_shift

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

log = logging.getLogger(__name__)

CSV_HEADER = "sampler,integrand,d,n,reps,mse,stderr"


@dataclass(frozen=True)
class ConvergenceRecord:
    """One (sampler, integrand, n) cell of a convergence study."""

    sampler: str
    integrand: str
    d: int
    n: int
    reps: int  # realizations actually run (1 for unrandomized QMC)
    mse: float
    stderr: float  # standard error of the mean squared error


@dataclass(frozen=True)
class IntegrandDescriptor:
    """Recipe for an integrand, cheap to store in a plan."""

    kind: str  # "gmm" | "pwconst"
    k: int
    d: int
    seed: int = 0

    def build(self):
        if self.kind == "gmm":
            return make_gmm(self.k, self.d, self.seed)
        if self.kind == "pwconst":
            return make_pwconst(self.k, self.d, self.seed)
        raise ValueError(f"unknown integrand kind {self.kind!r}")


@dataclass(frozen=True)
class ExperimentPlan:
    samplers: tuple[SamplerSpec, ...]
    integrands: tuple[IntegrandDescriptor, ...]
    counts: tuple[int, ...]
    reps: int = 100
    master_seed: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "samplers", tuple(self.samplers))
        object.__setattr__(self, "integrands", tuple(self.integrands))
        object.__setattr__(self, "counts", tuple(int(c) for c in self.counts))
        if not (self.samplers and self.integrands and self.counts):
            raise ValueError("plan needs at least one sampler, integrand, and count")
        if self.counts[0] < 1 or any(a >= b for a, b in zip(self.counts, self.counts[1:])):
            raise ValueError(f"counts must be positive and strictly increasing: {self.counts}")
        if self.reps < 2:
            raise ValueError(f"need reps >= 2, got {self.reps}")


def estimate(integrand, samples) -> float:
    """Plain Monte Carlo estimate: mean of the integrand over the points."""
    pts = samples.points if isinstance(samples, SampleSet) else np.asarray(samples, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != integrand.d:
        raise ValueError(
            f"integrand is {integrand.d}-dimensional, points are shaped {pts.shape}"
        )
    return float(np.mean(integrand.evaluate(pts)))


def run_mse(
    spec: SamplerSpec, integrand, n: int, reps: int, master_seed: int = 0
) -> ConvergenceRecord:
    """Mean squared error of the n-point estimator over ``reps`` realizations.

    Unrandomized QMC is deterministic, so it collapses to a single
    realization; the record flags that with reps=1 and stderr 0.
    """
    if reps < 2:
        raise ValueError(f"need reps >= 2 for an error spread, got {reps}")
    d = integrand.d
    if spec.kind in _QMC_KINDS and spec.randomization == "none":
        err = estimate(integrand, generate(spec, n, d)) - integrand.reference
        return ConvergenceRecord(spec.label, integrand.label, d, n, 1, err * err, 0.0)
    base = generate(SamplerSpec(spec.kind, spec.master_seed), n, d) if spec.kind in _QMC_KINDS else None
    squared = np.empty(reps)
    for rep in range(reps):
        cell_seed = derive_seed(master_seed, spec.label, integrand.label, n, rep)
        if base is not None:
            samples = randomize_shift(base, cell_seed)
        else:
            samples = generate(replace(spec, master_seed=cell_seed), n, d)
        err = estimate(integrand, samples) - integrand.reference
        squared[rep] = err * err
    return ConvergenceRecord(
        spec.label,
        integrand.label,
        d,
        n,
        reps,
        float(np.mean(squared)),
        float(np.std(squared, ddof=1) / math.sqrt(reps)),
    )


def _is_perfect_power(n: int, d: int) -> bool:
    k = round(n ** (1.0 / d))
    return any(c >= 1 and c**d == n for c in (k - 1, k, k + 1))


def run_plan(plan: ExperimentPlan, threads: int | None = None) -> list[ConvergenceRecord]:
    """Run every cell of the plan; failed cells are logged and skipped.

    ``threads`` caps the worker count and has no effect on the numbers.
    """
    integrands = [desc.build() for desc in plan.integrands]
    cells = []
    for obj in integrands:
        for spec in plan.samplers:
            for n in plan.counts:
                if spec.kind == "jittered_grid" and not _is_perfect_power(n, obj.d):
                    continue  # the grid only exists at n = k**d
                cells.append((spec, obj, n))

    def one(cell):
        spec, obj, n = cell
        try:
            return run_mse(spec, obj, n, plan.reps, plan.master_seed)
        except Exception as exc:
            log.warning("cell (%s, %s, n=%d) failed: %s", spec.label, obj.label, n, exc)
            return None

    if threads is not None and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(one, cells))
    else:
        results = [one(cell) for cell in cells]
    records = [r for r in results if r is not None]
    records.sort(key=lambda r: (r.integrand, r.sampler, r.n))
    return records


def write_csv(records, stream) -> None:
    """17-significant-digit CSV; fixed header and row order."""
    stream.write(CSV_HEADER + "\n")
    for r in records:
        stream.write(
            f"{r.sampler},{r.integrand},{r.d},{r.n},{r.reps},{r.mse:.17g},{r.stderr:.17g}\n"
        )


def read_csv(stream) -> list[ConvergenceRecord]:
    header = stream.readline().strip()
    if header != CSV_HEADER:
        raise ValueError(f"unexpected header {header!r}")
    records = []
    for line in stream:
        if not line.strip():
            continue
        sampler, integrand, d, n, reps, mse, stderr = line.strip().split(",")
        records.append(
            ConvergenceRecord(sampler, integrand, int(d), int(n), int(reps), float(mse), float(stderr))
        )
    return records


def _parse_sampler(text: str, master_seed: int) -> SamplerSpec:
    kind, _, suffix = text.strip().partition("+")
    if suffix not in ("", "shift"):
        raise ValueError(f"unknown sampler suffix {suffix!r} in {text!r}")
    return SamplerSpec(kind, master_seed, "shift" if suffix else "none")


def load_plan(path) -> ExperimentPlan:
    """Read an experiment plan from a TOML file.

    Expected shape::

        master_seed = 1
        reps = 100
        counts = [16, 64, 256]
        samplers = ["kdt", "random", "sobol+shift"]

        [[integrands]]
        kind = "gmm"
        k = 3
        d = 2
        seed = 7
    """
    with open(path, "rb") as f:
        raw = tomllib.load(f)
    try:
        master_seed = int(raw.get("master_seed", 0))
        samplers = tuple(_parse_sampler(s, master_seed) for s in raw["samplers"])
        integrands = tuple(
            IntegrandDescriptor(
                kind=str(item["kind"]),
                k=int(item["k"]),
                d=int(item["d"]),
                seed=int(item.get("seed", 0)),
            )
            for item in raw["integrands"]
        )
        plan = ExperimentPlan(
            samplers=samplers,
            integrands=integrands,
            counts=tuple(raw["counts"]),
            reps=int(raw.get("reps", 100)),
            master_seed=master_seed,
        )
    except KeyError as exc:
        raise ValueError(f"plan file is missing required key {exc}") from exc
    return plan
