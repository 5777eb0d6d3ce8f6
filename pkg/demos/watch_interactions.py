"""Watch the exchange phase instead of the optimization result.

Every epoch_length steps each agent picks a random peer, receives that
peer's worst members, and either merges them (when their mean fitness
passes the acceptance threshold) or throws them away.  The outcome moves
trust up or down.  Passing interaction_log= to tbo_run records every one
of these events as (step, InteractionOutcome).
"""

from collections import Counter

from trustopt import AgentTemplate, CredibilityConfig, TboConfig, tbo_run

cfg = TboConfig(
    agent_count=4,
    dimension=5,
    objective="rastrigin",
    epoch_length=10,
    diversity_factor=1.3,
    max_steps=200,
    seed=99,
    credibility=CredibilityConfig(kind="trust", start_value=5),
    per_agent=(AgentTemplate(population_size=5, offspring_size=15,
                             base_crossover_rate=0.005,
                             base_mutation_rate=0.0005),),
)

log = []
tbo_run(cfg, interaction_log=log)

print(f"{len(log)} interactions over {cfg.max_steps} steps "
      f"({cfg.max_steps // cfg.epoch_length} epochs x {cfg.agent_count} agents)")
print()

print("the first epoch in detail:")
for t, out in log[: cfg.agent_count]:
    verdict = "improved" if out.improved else ("accepted" if out.accepted else "rejected")
    print(f"  t={t}: agent {out.recipient} <- agent {out.sender}  {verdict:>9}  "
          f"shared mean {out.mean_shared:9.3f} vs threshold {out.threshold:9.3f}")
    for delta in out.credibility_deltas:
        print(f"        trust[{delta.truster},{delta.trustee}] {delta.delta:+d}")

tally = Counter(
    "improved" if out.improved else ("accepted" if out.accepted else "rejected")
    for _, out in log
)
print()
print("over the whole run:")
for verdict in ("improved", "accepted", "rejected"):
    print(f"  {verdict:>9}: {tally.get(verdict, 0)}")

# early epochs reject a lot while populations are far apart; the mean gap
# between shared and threshold shrinks as the societies converge
first = [out.mean_shared - out.threshold for _, out in log[:8]]
last = [out.mean_shared - out.threshold for _, out in log[-8:]]
print()
print(f"mean (shared - threshold), first two epochs: {sum(first) / len(first):9.3f}")
print(f"mean (shared - threshold), last two epochs:  {sum(last) / len(last):9.3f}")
