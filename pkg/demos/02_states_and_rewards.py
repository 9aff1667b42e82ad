"""The assistant's decision space: 4 actions, 48 states, two reward phases.

Run: python demos/02_states_and_rewards.py
"""

from pairmind import (
    AssistAction,
    GamePhase,
    PrevOutcome,
    RewardParams,
    decode_state,
    phase_of,
    reward_first,
    reward_second,
)

params = RewardParams()

# The state is (game phase, previous assistance, previous flip outcome).
# 3 x 4 x 4 = 48 states, indexed bijectively.
print("a few of the 48 states:")
for index in (0, 2, 17, 47):
    s = decode_state(index)
    print(f"  index {index:2d} -> ({s.phase.name}, {s.prev_assist.name}, {s.prev_outcome.name})")

print("\nphase boundaries by matches found:")
for nm in (0, 3, 4, 7, 8, 11):
    print(f"  NM={nm:2d} -> {phase_of(nm).name}")

# Before the first flip of a move the reward is a_hat/nf: silence pays 10 when
# the player is matching quickly and decays as flips pile up without a match.
print("\nfirst-flip rewards (action x nf):")
header = "  {:>9}".format("action") + "".join(f"  nf={nf:<3d}" for nf in (1, 2, 4, 8))
print(header)
for action in AssistAction:
    row = [reward_first(action, nf, params) for nf in (1, 2, 4, 8)]
    print(f"  {action.name:>9}" + "".join(f"  {v:6.3f}" for v in row))

# Before the second flip the structure flips: silence decays with nf while
# assistance grows with it, so a floundering player eventually makes helping
# the better-paying choice. The crossover is earliest in the begin phase.
print("\nsecond-flip rewards in the BEGIN phase:")
print(header)
for action in AssistAction:
    row = [reward_second(action, nf, GamePhase.BEGIN, params) for nf in (1, 2, 4, 8)]
    print(f"  {action.name:>9}" + "".join(f"  {v:6.3f}" for v in row))

for nf in range(1, 12):
    silent = reward_second(AssistAction.NO_HELP, nf, GamePhase.BEGIN, params)
    helped = reward_second(AssistAction.SUG_ROW, nf, GamePhase.BEGIN, params)
    if helped > silent:
        print(f"\nrow hints out-pay silence at the second flip from nf={nf} on")
        break

# The outcome component doubles as the decision-point marker: F_* states are
# second-flip decisions, S_* states are first-flip decisions.
second_flip_states = [
    s for s in map(decode_state, range(48))
    if s.prev_outcome in (PrevOutcome.F_CORRECT, PrevOutcome.F_WRONG)
]
print(f"{len(second_flip_states)} of 48 states are second-flip decisions")
