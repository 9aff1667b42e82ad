"""The mentalising layer: from an abstract action to a grounded, explained hint.

Run: python demos/05_hints_and_explanations.py
"""

from random import Random

from pairmind import (
    AssistAction,
    HistoryStats,
    Location,
    flip,
    new_game,
    operationalize_first,
    operationalize_second,
    partner_of,
)
from pairmind.mentalising import MODE_NOTOM, MODE_TOM, place_phrase

rng = Random(0)

# Build a short history: the player keeps re-flipping one card ("shark"
# hunting) without finding its partner.
state = new_game(21)
stats = HistoryStats()
hunted = Location(0, 0)
others = [Location(2, 2), Location(3, 5), Location(1, 4)]
for other in others:
    for loc in (hunted, other):
        flip(state, loc)
        stats.observe(state.ledger[-1])

hunted_face = state.face_at(hunted)
print(f"history: {hunted_face.name} flipped {stats.loc_flip_count[hunted.cell]} times "
      f"at {tuple(hunted)}, partner never seen")

# First-card assistance. The ToM grounding targets the partner of the face the
# player is hunting and says why; the ablation targets a random cell, silently.
for action in (AssistAction.SUG_CARD, AssistAction.SUG_ROW):
    hint = operationalize_first(action, stats, state, MODE_TOM, rng)
    print(f"\nToM {action.name} -> target {hint.target} [{hint.case.name}]")
    print(f'  "{hint.explanation}"')

hint = operationalize_first(AssistAction.SUG_CARD, stats, state, MODE_NOTOM, rng)
print(f"\nnoToM SUG_CARD -> target {hint.target} (explanation: {hint.explanation})")
print(f'  "{hint.phrase}"')

# Second-card assistance always points at the true partner of whatever the
# player just flipped, at the granularity the action discloses.
flip(state, hunted)
stats.observe(state.ledger[-1])
first = state.ledger[-1]
mate = partner_of(state, first.location)
print(f"\nplayer flips {first.face.name} again; its partner is at {tuple(mate)}")
for action in (AssistAction.SUG_ROW, AssistAction.SUG_COL, AssistAction.SUG_CARD):
    hint = operationalize_second(action, first, stats, state, MODE_TOM)
    print(f"  ToM {action.name:8s} -> {place_phrase(hint.target):17s} "
          f'"{hint.explanation}"')
hint = operationalize_second(AssistAction.SUG_ROW, first, stats, state, MODE_NOTOM)
print(f'  noToM SUG_ROW  -> "{hint.phrase}"')
