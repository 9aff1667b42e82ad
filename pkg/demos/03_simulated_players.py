"""The two simulated users: perfect recall vs decaying memory.

Run: python demos/03_simulated_players.py   (about 10 seconds)
"""

from random import Random

from pairmind import (
    Location,
    MemoryModel,
    PlayerSpec,
    flip,
    match_probability,
    new_game,
    observe_flip,
    partner_of,
    simulate,
)

# Memory decays with the flips elapsed since a card was last seen:
# recall = (1-d)^delta. d=0.196 is the shipped calibration.
memory = MemoryModel(d=0.196)
state = new_game(3)
flip(state, Location(1, 2))
observe_flip(memory, state.ledger[-1])
print("recall of a card seen delta flips ago (d=0.196):")
for delta in (0, 1, 2, 5, 10, 20):
    p = memory.p_seen(Location(1, 2), nf_now=1 + delta)
    print(f"  delta={delta:2d}  p_seen={p:.3f}")

# The second-flip match chance: uniform over remaining pairs when the partner
# was never seen, recall-scaled when it was, raised by hints.
state = new_game(3)
state.nf = 19                      # pretend 19 flips have happened
flip(state, Location(0, 0))
first = state.ledger[-1]
fresh = MemoryModel(d=0.196)
print(f"\nmatch probability at flip {state.nf}, partner never seen, 12 pairs left: "
      f"{match_probability(fresh, state, first).p:.4f}")

partner = partner_of(state, Location(0, 0))
seen = MemoryModel(d=0.196)
seen.records[partner.cell] = (first.face.id, 15)
print(f"partner seen 5 flips ago: "
      f"{match_probability(seen, state, first).p:.4f}")

# Batch baselines. The perfect player takes a remembered pair whenever one
# exists and otherwise spends the move exploring; the imperfect player follows
# the decaying-memory model above.
print("\n2000-game baselines (moves to finish):")
perfect = simulate("perfect", PlayerSpec(), 2000, seed=101)
print(f"  perfect:   mean={perfect.mean_moves:.2f} sd={perfect.sd_moves:.2f}")
imperfect = simulate("none", PlayerSpec(), 2000, seed=202)
print(f"  imperfect: mean={imperfect.mean_moves:.2f} sd={imperfect.sd_moves:.2f}")

# Forgetfulness is the single biggest lever on difficulty.
print("\nmean moves as the decay rate d grows (400 games each):")
for d in (0.05, 0.15, 0.196, 0.25, 0.35):
    stats = simulate("none", PlayerSpec(d=d), 400, seed=7)
    print(f"  d={d:<5}: {stats.mean_moves:6.2f}")
