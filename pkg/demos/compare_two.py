"""Compare the credibility-gated society against the island-model
baseline on one problem, then test whether the difference is significant.

Both algorithms run the same per-agent EA on the same epoch clock; the
only difference is what happens at an epoch: gated sharing of worst
members versus unconditional best-genome migration.  Final bests over
repetitions form the samples for a Kruskal-Wallis + Dunn/Holm check.
"""

import numpy as np

from trustopt import (
    SampleGroup,
    compare_groups,
    load_preset,
    run_repetitions,
)
from trustopt.config import with_cell

REPS = 8
samples = {}
for preset in ("high_diversity", "island_model"):
    cfg = with_cell(load_preset(preset), objective="sphere", dimension=10,
                    max_steps=2500, seed=20260825, repetitions=REPS)
    traces = run_repetitions(cfg, record_every=2500)
    finals = np.array([t.global_best.fitness for t in traces])
    samples[preset] = finals
    print(f"{preset:<16} median {np.median(finals):.4e}   "
          f"range [{finals.min():.4e}, {finals.max():.4e}]")

report = compare_groups([SampleGroup(k, v) for k, v in samples.items()], alpha=0.05)
print()
print(f"Kruskal-Wallis H = {report.statistic:.4f}, p = {report.p_value:.4g}")
for pc in report.pairwise:
    mark = "significant" if pc.significant else "not significant"
    print(f"{pc.group_a} vs {pc.group_b}: z = {pc.z:+.3f}, "
          f"adjusted p = {pc.adjusted_p:.4g} -> {mark} at 0.05")

# directional claim at this budget: gated sharing should not be worse
better = np.median(samples["high_diversity"]) <= np.median(samples["island_model"])
print()
print("gated society median <= island median:", better)
