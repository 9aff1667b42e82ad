"""A live play session, driven headlessly through the session state machine.

The websocket service wraps exactly this object; a browser client sees the
same frames. Run: python demos/06_live_session.py

To play in a browser instead:
    pairmind train --episodes 20000 --seed 13 --out policies/
    pairmind serve --policy-dir policies/ --log-dir logs/
    cd frontend && npm install && npm run dev
"""

from random import Random

from pairmind import PlayerSpec
from pairmind.game import CellStatus, Location
from pairmind.qlearn import train
from pairmind.service import SessionCore

print("training a quick policy (3000 episodes)...")
table = train(3_000, PlayerSpec(), seed=13, created_at=0.0)

core = SessionCore(condition="tom", qtable=table, seed=2024)
rng = Random(5)

print("\nplaying with scripted flips; the assistant decides before each one:")
shown = 0
while not core.game.complete:
    hint = core.next_hint()
    if not hint.is_silent and shown < 6:
        print(f"  move {core.game.nf // 2 + 1:2d} [{hint.decision_point}] "
              f"{hint.action.name}: {hint.explanation or hint.phrase}")
        shown += 1
    # an obedient player: flip within the hinted target, else anywhere
    from pairmind.mentalising import target_cells
    cells = [i for i, s in enumerate(core.game.status) if s is CellStatus.FACE_DOWN]
    if hint.target is not None:
        hinted = [c for c in target_cells(hint.target) if c in cells]
        cells = hinted or cells
    core.handle_flip(Location.from_cell(rng.choice(cells)))

summary = core.summary(completion_time_ms=None)
print("\nsession summary:")
for key in ("moves", "flips", "matches", "normalized_assistance",
            "suggestions_offered", "suggestions_followed", "follow_rate"):
    print(f"  {key}: {summary[key]}")
