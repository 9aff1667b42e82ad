from collections import Counter
from random import Random

import numpy as np
import pytest

from pairmind.episodes import Transition
from pairmind.mdp import (
    AssistAction,
    GamePhase,
    MdpState,
    PrevOutcome,
    RewardParams,
    decode_state,
)
from pairmind.players import PlayerSpec
from pairmind.qlearn import (
    QTable,
    Schedule,
    greedy_policy,
    load_qtable,
    qtable_from_json,
    qtable_to_json,
    save_qtable,
    schedule_at,
    select_action,
    select_from_row,
    train,
    update,
)

S0 = decode_state(0)
S1 = decode_state(1)


def table_with_row(index, row):
    q = QTable.zeros()
    q.values[index] = row
    return q


class TestSelectAction:
    def test_greedy_argmax(self):
        q = table_with_row(S0.index, [1.0, 2.0, 3.0, 0.0])
        assert select_action(q, S0, 0.0, Random(0)) is AssistAction.SUG_ROW

    def test_tied_rows_restrict_to_tie_set(self):
        q = table_with_row(S0.index, [5.0, 5.0, 0.0, 0.0])
        picks = {select_action(q, S0, 0.0, Random(seed)) for seed in range(50)}
        assert picks == {AssistAction.NO_HELP, AssistAction.SUG_COL}

    def test_full_exploration_is_uniform(self):
        rng = Random(123)
        counts = Counter(select_from_row([0.0, 1.0, 2.0, 3.0], 1.0, rng) for _ in range(100_000))
        for action in AssistAction:
            assert counts[action] / 100_000 == pytest.approx(0.25, abs=0.01)

    def test_epsilon_bounds(self):
        with pytest.raises(ValueError):
            select_from_row([0, 0, 0, 0], 1.5, Random(0))


class TestUpdate:
    def test_one_step_collapse(self):
        q = QTable.zeros()
        t = Transition(S0, AssistAction.NO_HELP, 5.0, S1, "first")
        q2 = update(q, t, alpha=1.0, gamma=0.0)
        assert q2.values[S0.index][0] == 5.0
        assert np.count_nonzero(q2.values) == 1
        assert np.count_nonzero(q.values) == 0   # original untouched

    def test_alpha_zero_is_noop(self):
        q = table_with_row(S0.index, [1.0, 2.0, 3.0, 4.0])
        t = Transition(S0, AssistAction.SUG_COL, 99.0, S1, "first")
        q2 = update(q, t, alpha=0.0, gamma=0.8)
        assert np.array_equal(q2.values, q.values)

    def test_terminal_transition_has_no_bootstrap(self):
        q = table_with_row(S1.index, [100.0, 0, 0, 0])
        t = Transition(S0, AssistAction.NO_HELP, 2.0, None, "second")
        q2 = update(q, t, alpha=1.0, gamma=0.8)
        assert q2.values[S0.index][0] == 2.0

    def test_two_step_chain_hand_computed(self):
        # step 1: q[s1,a]=0 -> 0 + 0.5*(4 + 0.8*0 - 0) = 2
        # step 2: q[s0,a]=0 -> 0 + 0.5*(1 + 0.8*max(q[s1]) - 0) = 0.5*(1 + 1.6) = 1.3
        q = QTable.zeros()
        q = update(q, Transition(S1, AssistAction.NO_HELP, 4.0, None, "second"), 0.5, 0.8)
        assert q.values[S1.index][0] == pytest.approx(2.0, abs=1e-12)
        q = update(q, Transition(S0, AssistAction.NO_HELP, 1.0, S1, "first"), 0.5, 0.8)
        assert q.values[S0.index][0] == pytest.approx(1.3, abs=1e-12)

    def test_validation(self):
        t = Transition(S0, AssistAction.NO_HELP, 1.0, S1, "first")
        with pytest.raises(ValueError):
            update(QTable.zeros(), t, alpha=1.5, gamma=0.8)
        with pytest.raises(ValueError):
            update(QTable.zeros(), t, alpha=0.5, gamma=1.0)


class TestSchedule:
    def test_first_episode_values(self):
        sched = Schedule.for_episodes(20_000)
        assert schedule_at(sched, 0) == (1.0, 0.1)

    def test_limits(self):
        sched = Schedule.for_episodes(20_000)
        eps, alpha = schedule_at(sched, 10_000_000)
        assert eps == 0.1
        assert alpha == 0.95

    def test_floor_reached_at_80_percent(self):
        sched = Schedule.for_episodes(20_000)
        eps, _ = schedule_at(sched, 16_000)
        assert eps <= 0.1 + 1e-9

    def test_monotonicity(self):
        sched = Schedule.for_episodes(1_000)
        pairs = [schedule_at(sched, k) for k in range(1_200)]
        assert all(a[0] >= b[0] for a, b in zip(pairs, pairs[1:]))
        assert all(a[1] <= b[1] for a, b in zip(pairs, pairs[1:]))

    def test_negative_episode_rejected(self):
        with pytest.raises(ValueError):
            schedule_at(Schedule(), -1)

    def test_roundtrip(self):
        sched = Schedule.for_episodes(500)
        assert Schedule.from_json_dict(sched.to_json_dict()) == sched


class TestTrain:
    def test_single_episode_touches_few_cells(self):
        hook_calls = []
        table = train(
            1, PlayerSpec(), seed=3, created_at=0.0,
            episode_hook=lambda k, result, eps, alpha: hook_calls.append(result),
        )
        moves = hook_calls[0].moves
        assert np.count_nonzero(table.values) <= moves * 2

    def test_deterministic_bytes(self):
        a = train(30, PlayerSpec(), seed=5, created_at=0.0)
        b = train(30, PlayerSpec(), seed=5, created_at=0.0)
        assert qtable_to_json(a) == qtable_to_json(b)

    def test_different_seeds_differ(self):
        a = train(30, PlayerSpec(), seed=5, created_at=0.0)
        b = train(30, PlayerSpec(), seed=6, created_at=0.0)
        assert not np.array_equal(a.values, b.values)

    def test_meta_records_run(self):
        table = train(10, PlayerSpec(), seed=1, created_at=123.0)
        assert table.meta["episodes_trained"] == 10
        assert table.meta["gamma"] == 0.8
        assert table.meta["seed"] == 1
        assert table.meta["created_at"] == 123.0
        assert table.meta["reward_params"]["a_hat"]["no_help"] == 10.0

    def test_q_values_bounded(self):
        # single-step reward is bounded by the capped nf, so Q is too
        params = RewardParams()
        r_max = params.a_hat[AssistAction.SUG_COL] * (24 * 12) * params.gs_hat[GamePhase.BEGIN]
        bound = r_max / (1 - 0.8)
        table = train(300, PlayerSpec(), seed=2, created_at=0.0)
        assert np.all(np.abs(table.values) <= bound)

    def test_unvisited_states_stay_zero(self):
        table = train(300, PlayerSpec(), seed=2, created_at=0.0)
        # full compliance makes first-card-hint failures unreachable
        unreachable = MdpState(GamePhase.BEGIN, AssistAction.SUG_CARD, PrevOutcome.F_WRONG)
        assert np.all(table.values[unreachable.index] == 0.0)

    def test_backup_validation(self):
        with pytest.raises(ValueError):
            train(1, PlayerSpec(), backup="episodic")
        with pytest.raises(ValueError):
            train(0, PlayerSpec())


class TestGreedyPolicy:
    def test_zero_table_defaults_to_silence(self):
        policy = greedy_policy(QTable.zeros())
        assert all(action is AssistAction.NO_HELP for action in policy.values())

    def test_export_stable_across_reload(self, tmp_path):
        table = train(50, PlayerSpec(), seed=9, created_at=0.0)
        path = tmp_path / "q.json"
        save_qtable(table, str(path))
        reloaded = load_qtable(str(path))
        assert greedy_policy(table) == greedy_policy(reloaded)


class TestPersistence:
    def test_roundtrip(self, tmp_path):
        table = train(40, PlayerSpec(), seed=4, created_at=0.0)
        path = tmp_path / "q.json"
        save_qtable(table, str(path))
        reloaded = load_qtable(str(path))
        assert np.array_equal(reloaded.values, table.values)
        assert reloaded.meta == table.meta

    def test_file_has_48_state_rows(self, tmp_path):
        import json
        table = train(5, PlayerSpec(), seed=4, created_at=0.0)
        doc = json.loads(qtable_to_json(table))
        assert len(doc["states"]) == 48
        assert doc["schema_version"] == 1

    def test_unknown_schema_rejected(self):
        table = QTable.zeros()
        text = qtable_to_json(table).replace('"schema_version": 1', '"schema_version": 9')
        with pytest.raises(ValueError):
            qtable_from_json(text)

    def test_reward_params_travel_with_policy(self, tmp_path):
        table = train(5, PlayerSpec(), seed=4, created_at=0.0)
        path = tmp_path / "q.json"
        save_qtable(table, str(path))
        assert load_qtable(str(path)).meta["reward_params"] == table.meta["reward_params"]
