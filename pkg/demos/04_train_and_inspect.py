"""Train the assistance policy and read its structure.

Run: python demos/04_train_and_inspect.py   (about 40 seconds)
"""

from pairmind import PlayerSpec, simulate
from pairmind.experiments import eval_policy_report
from pairmind.qlearn import greedy_policy, train

EPISODES = 20_000

print(f"training {EPISODES} episodes against the imperfect player...")
table = train(EPISODES, PlayerSpec(), seed=13, created_at=0.0)
print("meta:", {k: table.meta[k] for k in ("episodes_trained", "gamma", "seed", "backup")})

# The greedy policy, printed as a state grid. Second-flip decisions are the
# states whose previous outcome is F_*; that is where assistance concentrates.
policy = greedy_policy(table)
print("\ngreedy action per state:")
print(f"  {'phase':6s} {'prev_assist':11s} {'prev_outcome':12s} action")
for state, action in policy.items():
    marker = " <- assist" if action.value else ""
    print(f"  {state.phase.name:6s} {state.prev_assist.name:11s} "
          f"{state.prev_outcome.name:12s} {action.name}{marker}")

report = eval_policy_report(table)
print("\nstructure checks:")
for name, ok in report["checks"].items():
    print(f"  {name}: {'PASS' if ok else 'FAIL'}")
diag = report["diagnostics"]
print(f"  assistance mass: first flips {diag['first_flip_assistance_mass']:.3f}, "
      f"second flips {diag['second_flip_assistance_mass']:.3f}")

# What the policy buys the player, at 1000 games per arm.
unassisted = simulate("none", PlayerSpec(), 1000, seed=202)
assisted = simulate(table, PlayerSpec(), 1000, seed=202)
print(f"\nunassisted: {unassisted.mean_moves:.2f} moves")
print(f"assisted:   {assisted.mean_moves:.2f} moves "
      f"(normalized assistance {assisted.mean_normalized_assistance:.3f}, "
      f"follow rate {assisted.follow_rate:.2f})")
