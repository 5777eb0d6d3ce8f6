"""Experiment manifests and batch execution.

A manifest JSON names the problems (objective, dimension, step budget),
the algorithm presets to compare, the repetition count and a root seed::

    {
      "name": "desk",
      "seed": 987654321,
      "repetitions": 8,
      "record_every": 25,
      "algorithms": ["strong_leadership", "island_model"],
      "problems": [
        {"objective": "sphere", "dimension": 50, "max_steps": 2500}
      ],
      "overrides": {"offspring_size": 10, "eta_m": 20.0}
    }

The optional ``overrides`` object replaces preset EA parameters in every
cell: population_size, offspring_size, base_crossover_rate,
base_mutation_rate, epoch_length, diversity_factor, eta_c, eta_m,
crossover_scope, partner_policy.

Every (problem x algorithm) cell derives its own run seed from the root
seed and the cell labels, so results do not depend on manifest order or on
how many workers execute the cells.  One trace CSV is written per
repetition, one summary CSV per problem.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np

from .config import ConfigError, with_cell
from .engine import run_repetitions
from .presets import PRESET_NAMES, load_preset
from .results import (
    best_so_far_series,
    parse_trace_filename,
    read_summary_csv,
    read_trace_csv,
    summary_filename,
    summary_rows,
    trace_filename,
    write_summary_csv,
    write_trace_csv,
)
from .rng import derive_run_seed
from .stats import SampleGroup, compare_groups, summarize
from .svgchart import render_convergence_svg

__all__ = [
    "ProblemCell",
    "ExperimentManifest",
    "load_manifest",
    "run_manifest",
    "write_stats_reports",
    "write_plots",
    "BASELINE_ALGORITHM",
]

BASELINE_ALGORITHM = "island_model"


@dataclass(frozen=True)
class ProblemCell:
    objective: str
    dimension: int
    max_steps: int
    objective_params: dict = field(default_factory=dict)


# manifest "overrides" may replace these preset values in every cell
_AGENT_OVERRIDES = ("population_size", "offspring_size",
                    "base_crossover_rate", "base_mutation_rate")
_RUN_OVERRIDES = ("epoch_length", "diversity_factor", "eta_c", "eta_m",
                  "crossover_scope", "partner_policy")


@dataclass(frozen=True)
class ExperimentManifest:
    name: str
    seed: int
    repetitions: int
    algorithms: tuple[str, ...]
    problems: tuple[ProblemCell, ...]
    record_every: int = 1
    overrides: dict = field(default_factory=dict)


def load_manifest(path: Union[str, Path]) -> ExperimentManifest:
    """Parse and validate a manifest file."""
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    known = {"name", "seed", "repetitions", "algorithms", "problems", "record_every",
             "overrides"}
    unknown = set(data) - known
    bad: list[str] = [f"unknown manifest field: {k}" for k in sorted(unknown)]

    overrides = dict(data.get("overrides", {}))
    for k in sorted(set(overrides) - set(_AGENT_OVERRIDES) - set(_RUN_OVERRIDES)):
        bad.append(f"overrides: unknown parameter {k!r}")

    name = data.get("name", Path(path).stem)
    seed = data.get("seed", 0)
    reps = data.get("repetitions", 1)
    record_every = data.get("record_every", 1)
    if not isinstance(seed, int) or not (0 <= seed < 2**64):
        bad.append("seed must be an unsigned 64-bit integer")
    if not isinstance(reps, int) or reps < 1:
        bad.append("repetitions must be >= 1")
    if not isinstance(record_every, int) or record_every < 1:
        bad.append("record_every must be >= 1")

    algorithms = tuple(data.get("algorithms", ()))
    if not algorithms:
        bad.append("manifest needs at least one algorithm")
    for a in algorithms:
        if a not in PRESET_NAMES:
            bad.append(f"unknown algorithm preset: {a!r}")

    problems = []
    raw_problems = data.get("problems", ())
    if not raw_problems:
        bad.append("manifest needs at least one problem")
    for k, p in enumerate(raw_problems):
        extra = set(p) - {"objective", "dimension", "max_steps", "objective_params"}
        for e in sorted(extra):
            bad.append(f"problems[{k}]: unknown field {e!r}")
        try:
            cell = ProblemCell(p["objective"], int(p["dimension"]), int(p["max_steps"]),
                               dict(p.get("objective_params", {})))
        except KeyError as miss:
            bad.append(f"problems[{k}]: missing field {miss.args[0]!r}")
            continue
        problems.append(cell)

    if bad:
        raise ConfigError(bad)

    manifest = ExperimentManifest(name, seed, reps, algorithms, tuple(problems),
                                  record_every, overrides)
    validate_manifest_cells(manifest)
    return manifest


def validate_manifest_cells(manifest: ExperimentManifest) -> None:
    """Build every cell config once; surfaces per-cell violations (for
    example an objective that rejects the chosen dimension)."""
    bad: list[str] = []
    for problem in manifest.problems:
        for algorithm in manifest.algorithms:
            try:
                _cell_config(manifest, problem, algorithm)
            except (ConfigError, ValueError) as err:
                bad.append(f"{problem.objective} d={problem.dimension} / {algorithm}: {err}")
    if bad:
        raise ConfigError(bad)


def _cell_config(manifest: ExperimentManifest, problem: ProblemCell, algorithm: str):
    from dataclasses import replace

    from .benchmarks import get_objective
    from .config import validate_config

    cfg = with_cell(
        load_preset(algorithm),
        objective=problem.objective,
        dimension=problem.dimension,
        max_steps=problem.max_steps,
        seed=derive_run_seed(manifest.seed, problem.objective, problem.dimension, algorithm),
        repetitions=manifest.repetitions,
    )
    if problem.objective_params:
        cfg = replace(cfg, objective_params=dict(problem.objective_params))
    if manifest.overrides:
        run_kw = {k: v for k, v in manifest.overrides.items() if k in _RUN_OVERRIDES}
        agent_kw = {k: v for k, v in manifest.overrides.items() if k in _AGENT_OVERRIDES}
        if run_kw:
            cfg = replace(cfg, **run_kw)
        if agent_kw:
            cfg = replace(cfg, per_agent=tuple(replace(t, **agent_kw) for t in cfg.per_agent))
    validate_config(cfg)
    # constructing the objective catches dimension/parameter problems early
    get_objective(cfg.objective, cfg.dimension, **cfg.objective_params)
    return cfg


def _run_cell(args: tuple) -> list[tuple]:
    """Execute one (problem, algorithm) cell and write its trace files.

    Standalone so process pools can pickle it; returns the summary rows.
    """
    manifest, problem, algorithm, out_dir, record_every = args
    cfg = _cell_config(manifest, problem, algorithm)
    traces = run_repetitions(cfg, record_every=record_every)
    out = Path(out_dir)
    for tr in traces:
        write_trace_csv(tr, out / trace_filename(problem.objective, problem.dimension,
                                                 algorithm, tr.repetition))
    return summary_rows(problem.objective, problem.dimension, algorithm, traces)


def run_manifest(
    manifest: ExperimentManifest,
    out_dir: Union[str, Path],
    *,
    jobs: int = 1,
    seed: Optional[int] = None,
    record_every: Optional[int] = None,
) -> list[Path]:
    """Execute every cell of a manifest and write traces plus summaries.

    ``seed`` overrides the manifest root seed, ``record_every`` its trace
    downsampling.  ``jobs > 1`` runs cells in a process pool; outputs are
    identical either way.  Returns the written summary paths.
    """
    if seed is not None:
        manifest = ExperimentManifest(manifest.name, seed, manifest.repetitions,
                                      manifest.algorithms, manifest.problems,
                                      manifest.record_every, manifest.overrides)
    every = manifest.record_every if record_every is None else record_every
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    cells = [
        (manifest, problem, algorithm, str(out), every)
        for problem in manifest.problems
        for algorithm in manifest.algorithms
    ]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows_per_cell = list(pool.map(_run_cell, cells))
    else:
        rows_per_cell = [_run_cell(c) for c in cells]

    paths = []
    n_alg = len(manifest.algorithms)
    for p_idx, problem in enumerate(manifest.problems):
        rows: list[tuple] = []
        for a_idx in range(n_alg):
            rows.extend(rows_per_cell[p_idx * n_alg + a_idx])
        path = out / summary_filename(problem.objective, problem.dimension)
        write_summary_csv(rows, path)
        paths.append(path)
    return paths


# ---------------------------------------------------------------------------
# statistics reports

_OMNIBUS_HEADER = "problem,dim,h_statistic,p_value,df,degenerate"
_PAIRWISE_HEADER = "problem,dim,group_a,group_b,z,raw_p,adjusted_p,significant"
_BASELINE_HEADER = "problem,dim,algorithm,adjusted_p"


def _collect_groups(rows) -> dict[str, list[float]]:
    groups: dict[str, list[float]] = {}
    for r in rows:
        groups.setdefault(r.algorithm, []).append(r.final_best)
    return groups


def write_stats_reports(
    summary_paths: Sequence[Union[str, Path]],
    out_dir: Union[str, Path],
    alpha: float = 0.01,
    baseline: str = BASELINE_ALGORITHM,
) -> list[Path]:
    """Produce the comparison reports for a set of summary CSVs.

    Writes four files into ``out_dir``: ``stats_omnibus.csv`` (one
    Kruskal-Wallis row per problem), ``stats_pairwise.csv`` (every Dunn
    pair with Holm-adjusted p-values), ``stats_vs_baseline.csv`` (the
    algorithms not significantly different from the baseline at ``alpha``)
    and ``stats_report.txt`` (the same content as aligned text).
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    omnibus_lines = [_OMNIBUS_HEADER]
    pairwise_lines = [_PAIRWISE_HEADER]
    baseline_lines = [_BASELINE_HEADER]
    text: list[str] = []

    for path in summary_paths:
        rows = read_summary_csv(path)
        if not rows:
            raise ValueError(f"empty summary: {path}")
        problem, dim = rows[0].problem, rows[0].dim
        groups = _collect_groups(rows)
        if len(groups) < 2:
            raise ValueError(f"summary {path} holds fewer than 2 algorithms")
        sample = [SampleGroup(k, np.array(v)) for k, v in groups.items()]
        report = compare_groups(sample, alpha)
        stats_rows = summarize(sample) if min(len(v) for v in groups.values()) >= 2 else None

        omnibus_lines.append(
            f"{problem},{dim},{report.statistic!r},{report.p_value!r},{report.df},"
            f"{'true' if report.degenerate else 'false'}"
        )
        text.append(f"== {problem} (D={dim}) ==")
        if stats_rows is not None:
            text.append(f"  {'algorithm':<20} {'mean':>14} {'sd':>14} {'n':>4}")
            for label, mean, sd, n in stats_rows:
                text.append(f"  {label:<20} {mean:>14.6g} {sd:>14.6g} {n:>4}")
        text.append(f"  Kruskal-Wallis H = {report.statistic:.6g}, "
                    f"p = {report.p_value:.6g} (df = {report.df})"
                    + ("  [degenerate]" if report.degenerate else ""))
        text.append(f"  {'pair':<42} {'z':>10} {'raw p':>12} {'adj p':>12}  sig")
        ties = []
        for c in report.pairwise:
            pairwise_lines.append(
                f"{problem},{dim},{c.group_a},{c.group_b},{c.z!r},{c.raw_p!r},"
                f"{c.adjusted_p!r},{'true' if c.significant else 'false'}"
            )
            pair = f"{c.group_a} vs {c.group_b}"
            text.append(f"  {pair:<42} {c.z:>10.4f} {c.raw_p:>12.4g} "
                        f"{c.adjusted_p:>12.4g}  {'*' if c.significant else '-'}")
            if baseline in (c.group_a, c.group_b) and not c.significant:
                other = c.group_b if c.group_a == baseline else c.group_a
                ties.append((other, c.adjusted_p))
        for other, adj in ties:
            baseline_lines.append(f"{problem},{dim},{other},{adj!r}")
        if ties:
            text.append(f"  not significantly different from {baseline} at alpha={alpha:g}: "
                        + ", ".join(o for o, _ in ties))
        else:
            text.append(f"  every algorithm differs from {baseline} at alpha={alpha:g}")
        text.append("")

    written = []
    for fname, lines in (
        ("stats_omnibus.csv", omnibus_lines),
        ("stats_pairwise.csv", pairwise_lines),
        ("stats_vs_baseline.csv", baseline_lines),
    ):
        p = out / fname
        p.write_text("\n".join(lines) + "\n", encoding="utf-8")
        written.append(p)
    p = out / "stats_report.txt"
    p.write_text("\n".join(text) + "\n", encoding="utf-8")
    written.append(p)
    return written


# ---------------------------------------------------------------------------
# plots

def _algorithm_order(names) -> list[str]:
    known = [n for n in PRESET_NAMES if n in names]
    extra = sorted(n for n in names if n not in PRESET_NAMES)
    return known + extra


def write_plots(
    trace_paths: Sequence[Union[str, Path]],
    out_dir: Union[str, Path],
    log_scale: str = "auto",
) -> list[Path]:
    """Render one convergence chart per (problem, dimension).

    Each algorithm contributes one curve: the best-so-far series averaged
    over its repetitions (grids must agree across repetitions).
    """
    cells: dict[tuple[str, int], dict[str, list]] = {}
    for path in trace_paths:
        meta = parse_trace_filename(path)
        data = read_trace_csv(path)
        steps, curve = best_so_far_series(data["step"], data["best"])
        cell = cells.setdefault((meta["problem"], meta["dim"]), {})
        cell.setdefault(meta["algorithm"], []).append((meta["rep"], steps, curve))

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for (problem, dim) in sorted(cells):
        per_algo = cells[(problem, dim)]
        series = []
        for algorithm in _algorithm_order(per_algo):
            reps = sorted(per_algo[algorithm], key=lambda item: item[0])
            grid = reps[0][1]
            for _, steps, _ in reps[1:]:
                if not np.array_equal(steps, grid):
                    raise ValueError(
                        f"trace grids differ across repetitions for {problem} d={dim} {algorithm}"
                    )
            mean_curve = np.mean(np.stack([curve for _, _, curve in reps]), axis=0)
            series.append((algorithm, grid.tolist(), mean_curve.tolist()))
        svg = render_convergence_svg(series, f"{problem} (D={dim})",
                                     subtitle="best so far, mean over repetitions",
                                     log_scale=log_scale)
        p = out / f"convergence_{problem}_d{dim}.svg"
        p.write_text(svg, encoding="utf-8")
        written.append(p)
    return written
