"""Walk through the rules engine: boards, flips, matches and the ledger.

Run: python demos/01_play_a_game.py
"""

from pairmind import (
    FlipNotAllowed,
    Location,
    face_down_locations,
    flip,
    game_summary,
    new_game,
    partner_of,
)
from pairmind.game import dump_ledger, layout_as_grid

# A board is 4x6 = 24 cards, 12 animal faces twice each. The layout is fixed
# by the seed, so every experiment can be replayed.
state = new_game(seed=42)
print("hidden layout (face ids):")
for row in layout_as_grid(state):
    print("  ", row)

# Flip two cards. The engine resolves the move on the second flip.
first = flip(state, Location(0, 0))
print(f"\nflipped (0,0): {first.revealed_face.name}")

mate = partner_of(state, Location(0, 0))
second = flip(state, mate)
print(f"flipped its partner {tuple(mate)}: {second.revealed_face.name} "
      f"-> match={second.produced_match}")
print(f"matches={state.nm}, flips={state.nf}")

# Mismatches turn both cards back face down; the display delay, if any, is a
# client concern. Illegal flips never change state.
a, b = sorted(face_down_locations(state))[:2]
if state.layout[a.cell] != state.layout[b.cell]:
    flip(state, a)
    out = flip(state, b)
    print(f"\nflipped {tuple(a)} and {tuple(b)}: match={out.produced_match} "
          f"(both face down again)")

try:
    flip(state, Location(0, 0))   # already removed
except FlipNotAllowed as exc:
    print(f"illegal flip rejected: {exc}")

# Every flip lands in an append-only ledger; the memory models, the
# mentalising layer and the session logs are all folds over it.
print(f"\nledger so far ({state.nf} flips):")
print(dump_ledger(state))
print("summary:", game_summary(state))
