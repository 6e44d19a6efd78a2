"""Config-driven Monte Carlo runner producing reproducible CSV/JSON reports.

Every number in the per-trial CSV is a deterministic function of the
config and the master seed: trial-level randomness is derived from
(master_seed, trial, purpose) key material, and wall-clock timings are
reported only in the JSON summary, which is not covered by the
byte-identical rerun guarantee.
"""

from __future__ import annotations

import json
import time
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path

import numpy as np

from .errors import InvalidSpec
from .io import load_dataset
from .metrics import bundle_error
from .model import DataSet, normalize_dataset
from .pipeline import (
    SolverConfig,
    eta_admissibility_epsilon,
    min_reduced_dim,
    reduce_solve_lift,
)
from .projection import DISTRIBUTIONS, RandomSpec
from .solver import brute_force_oracle
from .synthetic import SyntheticSpec, generate_synthetic

_SEED_MASK = (1 << 64) - 1

ROW_FIELDS = (
    "trial",
    "r",
    "epsilon",
    "e0",
    "reduced_error",
    "lifted_error",
    "bound_value",
    "bound_satisfied",
)


@dataclass(frozen=True)
class ReductionConfig:
    """Sketch settings: either a fixed r, or (eta, delta) to derive both
    r and the bound epsilon from the closed-form minimum."""

    distribution: str = "gaussian"
    r: int | None = None
    eta: float | None = None
    delta: float | None = None
    epsilon: float | None = None  # bound epsilon when r is fixed

    def __post_init__(self):
        if self.distribution not in DISTRIBUTIONS:
            raise InvalidSpec(f"unknown distribution {self.distribution!r}")
        fixed = self.r is not None
        auto = self.eta is not None or self.delta is not None
        if fixed and auto:
            raise InvalidSpec("give either r or (eta, delta), not both")
        if fixed:
            if self.r < 1:
                raise InvalidSpec("r must be at least 1")
        else:
            if self.eta is None or self.delta is None:
                raise InvalidSpec("auto mode needs both eta and delta")


@dataclass(frozen=True)
class ExperimentConfig:
    """Validated experiment description; see :func:`config_from_dict`."""

    n_subspaces: int
    max_dim: int
    reduction: ReductionConfig
    trials: int
    master_seed: int
    synthetic: SyntheticSpec | None = None
    dataset_file: str | None = None
    file_header: bool = False
    solver: SolverConfig = field(default_factory=SolverConfig)
    rows_path: str | None = None
    summary_path: str | None = None

    def __post_init__(self):
        if (self.synthetic is None) == (self.dataset_file is None):
            raise InvalidSpec("exactly one dataset source (synthetic or file) "
                              "must be configured")
        if self.trials < 0:
            raise InvalidSpec("trials must be nonnegative")
        if self.n_subspaces < 1 or self.max_dim < 1:
            raise InvalidSpec("model needs n_subspaces >= 1 and max_dim >= 1")


@dataclass
class ExperimentResult:
    rows: list[dict]
    summary: dict
    exit_code: int


def derive_seed(master_seed: int, *path: int) -> int:
    """64-bit seed derived deterministically from (master, *path)."""
    entropy = [master_seed & _SEED_MASK, *[p & _SEED_MASK for p in path]]
    return int(np.random.SeedSequence(entropy).generate_state(1, np.uint64)[0])


def config_from_dict(raw: dict) -> ExperimentConfig:
    """Build a validated config from a plain dict (parsed JSON)."""
    if not isinstance(raw, dict):
        raise InvalidSpec("config must be a JSON object")
    known = {"dataset", "model", "reduction", "solver", "trials",
             "master_seed", "output"}
    unknown = set(raw) - known
    if unknown:
        raise InvalidSpec(f"unknown config keys: {sorted(unknown)}")

    dataset = raw.get("dataset")
    if not isinstance(dataset, dict) or len(dataset) != 1:
        raise InvalidSpec('config needs a dataset: {"synthetic": {...}} or '
                          '{"file": "path"}')
    synthetic = None
    dataset_file = None
    file_header = False
    if "synthetic" in dataset:
        spec_raw = dict(dataset["synthetic"])
        if "seed" in spec_raw:
            raise InvalidSpec("synthetic seed is derived from master_seed; "
                              "remove it from the config")
        try:
            synthetic = SyntheticSpec(**spec_raw)
        except TypeError as exc:
            raise InvalidSpec(f"bad synthetic spec: {exc}") from exc
    elif "file" in dataset:
        entry = dataset["file"]
        if isinstance(entry, dict):
            dataset_file = entry["path"]
            file_header = bool(entry.get("header", False))
        else:
            dataset_file = str(entry)
    else:
        raise InvalidSpec(f"unknown dataset source {sorted(dataset)}")

    model = raw.get("model") or {}
    n_subspaces = model.get(
        "n_subspaces", synthetic.n_subspaces if synthetic else None
    )
    max_dim = model.get("max_dim", synthetic.max_dim if synthetic else None)
    if n_subspaces is None or max_dim is None:
        raise InvalidSpec("file datasets need an explicit model section")

    try:
        reduction = ReductionConfig(**raw.get("reduction", {}))
        solver = SolverConfig(**raw.get("solver", {}))
    except TypeError as exc:
        raise InvalidSpec(f"bad reduction/solver section: {exc}") from exc

    output = raw.get("output") or {}
    return ExperimentConfig(
        n_subspaces=int(n_subspaces),
        max_dim=int(max_dim),
        reduction=reduction,
        trials=int(raw.get("trials", 0)),
        master_seed=int(raw.get("master_seed", 0)),
        synthetic=synthetic,
        dataset_file=dataset_file,
        file_header=file_header,
        solver=solver,
        rows_path=output.get("rows"),
        summary_path=output.get("summary"),
    )


def load_config(path) -> ExperimentConfig:
    with Path(path).open() as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InvalidSpec(f"{path}: invalid JSON: {exc}") from exc
    return config_from_dict(raw)


def _format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _trial_dataset(cfg: ExperimentConfig, trial: int, file_data) -> DataSet:
    if cfg.synthetic is not None:
        spec = replace(cfg.synthetic, seed=derive_seed(cfg.master_seed, trial, 0))
        data, _ = generate_synthetic(spec)
        return data
    return file_data


def run_experiment(cfg: ExperimentConfig) -> ExperimentResult:
    """Run the configured trials; returns rows, summary, and an exit code.

    The exit code is 1 only when a hard internal invariant failed
    (inconsistent or non-finite errors), never for a violated
    probabilistic bound; those are merely counted.
    """
    t_start = time.perf_counter()
    file_data = None
    if cfg.dataset_file is not None:
        file_data = normalize_dataset(
            load_dataset(cfg.dataset_file, header=cfg.file_header)
        )

    rows: list[dict] = []
    per_trial_seconds: list[float] = []
    bound_checked = 0
    bound_violations = 0
    hard_failures: list[str] = []

    for trial in range(cfg.trials):
        t_trial = time.perf_counter()
        data = _trial_dataset(cfg, trial, file_data)
        d = data.numerical_rank

        red = cfg.reduction
        if red.r is not None:
            r = red.r
            epsilon = red.epsilon
        else:
            r = min_reduced_dim(
                red.eta, red.delta, cfg.n_subspaces, d, cfg.max_dim, data.count
            )
            epsilon = eta_admissibility_epsilon(
                red.eta, cfg.n_subspaces, d, cfg.max_dim
            )

        e0 = None
        if cfg.n_subspaces**data.count <= cfg.solver.oracle_budget:
            e0 = brute_force_oracle(
                data, cfg.n_subspaces, cfg.max_dim, budget=cfg.solver.oracle_budget
            ).error

        spec = RandomSpec(
            distribution=red.distribution,
            reduced_dim=r,
            ambient_dim=data.ambient_dim,
            seed=derive_seed(cfg.master_seed, trial, 1),
        )
        solver_cfg = replace(cfg.solver, seed=derive_seed(cfg.master_seed, trial, 2))
        report = reduce_solve_lift(
            data,
            spec,
            cfg.n_subspaces,
            cfg.max_dim,
            solver_cfg,
            epsilon=epsilon,
            e0=e0,
        )

        recomputed = bundle_error(data, report.lifted_bundle)
        if not np.isfinite(report.lifted_error) or not np.isfinite(
            report.reduced_error
        ):
            hard_failures.append(f"trial {trial}: non-finite error")
        elif abs(recomputed - report.lifted_error) > 1e-10:
            hard_failures.append(f"trial {trial}: inconsistent lifted error")
        elif e0 is not None and report.lifted_error < e0 - 1e-9:
            hard_failures.append(f"trial {trial}: lifted error below the optimum")
        if report.bound_satisfied is not None:
            bound_checked += 1
            if not report.bound_satisfied:
                bound_violations += 1

        rows.append(
            {
                "trial": trial,
                "r": r,
                "epsilon": epsilon,
                "e0": e0,
                "reduced_error": report.reduced_error,
                "lifted_error": report.lifted_error,
                "bound_value": report.bound_value,
                "bound_satisfied": report.bound_satisfied,
            }
        )
        per_trial_seconds.append(time.perf_counter() - t_trial)

    summary = {
        "config_echo": _config_echo(cfg),
        "totals": {"trials": cfg.trials, "bound_checked": bound_checked},
        "violations": {
            "bound": bound_violations,
            "hard": len(hard_failures),
            "hard_detail": hard_failures,
        },
        "elapsed_seconds": time.perf_counter() - t_start,
        "per_trial_seconds": per_trial_seconds,
    }
    result = ExperimentResult(
        rows=rows, summary=summary, exit_code=1 if hard_failures else 0
    )
    if cfg.rows_path is not None:
        write_rows_csv(rows, cfg.rows_path)
    if cfg.summary_path is not None:
        with Path(cfg.summary_path).open("w") as fh:
            json.dump(summary, fh, indent=2)
            fh.write("\n")
    return result


def _config_echo(cfg: ExperimentConfig) -> dict:
    echo = asdict(cfg)
    return echo


def rows_to_csv_text(rows: list[dict]) -> str:
    lines = [",".join(ROW_FIELDS)]
    for row in rows:
        lines.append(",".join(_format_cell(row[name]) for name in ROW_FIELDS))
    return "\n".join(lines) + "\n"


def write_rows_csv(rows: list[dict], path) -> None:
    Path(path).write_text(rows_to_csv_text(rows))
