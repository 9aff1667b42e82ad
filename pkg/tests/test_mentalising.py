from random import Random

import pytest

from pairmind.game import (
    CellStatus,
    FlipRecord,
    GameState,
    Location,
    face,
    flip,
    new_game,
)
from pairmind.mdp import AssistAction
from pairmind.mentalising import (
    CellTarget,
    ColTarget,
    ExplanationCase,
    HistoryStats,
    MODE_NOTOM,
    MODE_TOM,
    MoveClass,
    RowTarget,
    TemplateError,
    classify_move,
    default_templates,
    first_flip_outcome,
    infer_target_face,
    load_templates,
    operationalize_first,
    operationalize_second,
    render_explanation,
    target_cells,
    target_contains,
)

SHARK = 0   # face id 0 is "shark"


def paired_layout():
    """Deterministic layout: face k sits at cells 2k and 2k+1."""
    layout = []
    for fid in range(12):
        layout.extend([fid, fid])
    return layout


def fresh_state(layout=None):
    return GameState(
        rng_seed=0,
        layout=layout or paired_layout(),
        status=[CellStatus.FACE_DOWN] * 24,
    )


def rec(cell, face_id, move_index=1, flip_in_move=1, match=None):
    return FlipRecord(move_index, flip_in_move, Location.from_cell(cell), face(face_id), match)


def stats_of(*records):
    stats = HistoryStats()
    for r in records:
        stats.observe(r)
    return stats


class TestHistoryStats:
    def test_pure_fold_of_ledger(self):
        state = new_game(17)
        rng = Random(4)
        incremental = HistoryStats()
        while not state.complete and state.nf < 60:
            cells = [i for i, s in enumerate(state.status) if s is CellStatus.FACE_DOWN]
            flip(state, Location.from_cell(rng.choice(cells)))
            incremental.observe(state.ledger[-1])
        assert incremental == HistoryStats.from_ledger(state.ledger)

    def test_counts_match_ledger(self):
        stats = stats_of(rec(0, SHARK), rec(0, SHARK, move_index=2), rec(5, 2, move_index=2, flip_in_move=2))
        assert stats.loc_flip_count[0] == 2
        assert stats.face_flip_count[SHARK] == 2
        assert stats.loc_flip_count[5] == 1


class TestClassifyMove:
    def test_fresh_game_first_move_is_two_unknown(self):
        first = rec(0, SHARK, flip_in_move=1)
        second = rec(5, 2, flip_in_move=2, match=False)
        stats = stats_of(first, second)
        assert classify_move(stats, first, second) is MoveClass.TWO_UNKNOWN

    def test_both_previously_seen_is_zero_unknown(self):
        earlier = [rec(0, SHARK), rec(1, SHARK, flip_in_move=2, match=True)]
        first = rec(0, SHARK, move_index=2)
        second = rec(1, SHARK, move_index=2, flip_in_move=2, match=True)
        stats = stats_of(*earlier, first, second)
        assert classify_move(stats, first, second) is MoveClass.ZERO_UNKNOWN

    def test_one_fresh_one_repeat_is_one_unknown(self):
        earlier = rec(0, SHARK)
        first = rec(0, SHARK, move_index=2)
        second = rec(7, 3, move_index=2, flip_in_move=2, match=False)
        stats = stats_of(earlier, first, second)
        assert classify_move(stats, first, second) is MoveClass.ONE_UNKNOWN


class TestInferTargetFace:
    def test_most_clicked_face_wins(self):
        stats = stats_of(
            rec(0, SHARK), rec(0, SHARK, move_index=2), rec(0, SHARK, move_index=3),
            rec(4, 2, move_index=3, flip_in_move=2),
        )
        assert infer_target_face(stats).id == SHARK

    def test_empty_history_gives_none(self):
        assert infer_target_face(HistoryStats()) is None

    def test_tie_broken_by_recency(self):
        stats = stats_of(
            rec(2, 1, move_index=1), rec(3, 1, move_index=1, flip_in_move=2),
            rec(4, 2, move_index=2), rec(5, 2, move_index=2, flip_in_move=2),
        )
        assert infer_target_face(stats).id == 2   # both faces at 2 flips; face 2 seen later

    def test_eligible_filter(self):
        stats = stats_of(rec(0, SHARK), rec(4, 2, flip_in_move=2))
        assert infer_target_face(stats, eligible={2}).id == 2
        assert infer_target_face(stats, eligible=set()) is None


class TestOperationalizeFirst:
    def test_table_row2_scenario(self):
        # shark clicked three times at (0,0), partner (0,1) never seen
        stats = stats_of(
            rec(0, SHARK, move_index=1), rec(4, 2, move_index=1, flip_in_move=2),
            rec(0, SHARK, move_index=2), rec(7, 3, move_index=2, flip_in_move=2),
            rec(0, SHARK, move_index=3), rec(9, 4, move_index=3, flip_in_move=2),
        )
        hint = operationalize_first(
            AssistAction.SUG_CARD, stats, fresh_state(), MODE_TOM, Random(0),
        )
        assert hint.target == CellTarget(Location(0, 1))
        assert hint.case is ExplanationCase.ONE_NEVER_OTHER_MULTI
        assert hint.explanation == (
            "You have clicked shark several times. Click the one in row 1 and col 2, "
            "you should then remember where the other one is located."
        )
        assert hint.face.name == "shark"

    def test_no_help_is_silent(self):
        hint = operationalize_first(
            AssistAction.NO_HELP, HistoryStats(), fresh_state(), MODE_TOM, Random(0),
        )
        assert hint.is_silent
        assert hint.target is None and hint.explanation is None

    def test_notom_is_random_and_unexplained(self):
        state = fresh_state()
        stats = stats_of(rec(0, SHARK))
        targets = set()
        for seed in range(30):
            hint = operationalize_first(AssistAction.SUG_CARD, stats, state, MODE_NOTOM, Random(seed))
            assert hint.explanation is None and hint.case is None
            assert hint.phrase.startswith("Try to flip a card in")
            targets.add(hint.target.location)
        assert len(targets) > 5   # random grounding, not history-driven

    def test_empty_history_falls_back(self):
        hint = operationalize_first(
            AssistAction.SUG_ROW, HistoryStats(), fresh_state(), MODE_TOM, Random(0),
        )
        assert hint.case is ExplanationCase.FALLBACK
        assert isinstance(hint.target, RowTarget)
        assert "Are you looking for a particular card?" in hint.explanation

    def test_matched_faces_are_not_targets(self):
        state = fresh_state()
        # remove the shark pair from the board
        state.status[0] = CellStatus.REMOVED
        state.status[1] = CellStatus.REMOVED
        state.nm = 1
        stats = stats_of(
            rec(0, SHARK), rec(1, SHARK, flip_in_move=2, match=True),
            rec(4, 2, move_index=2),
        )
        hint = operationalize_first(AssistAction.SUG_CARD, stats, state, MODE_TOM, Random(0))
        assert hint.face.id == 2
        assert hint.target == CellTarget(Location.from_cell(5))

    def test_row_and_col_targets_derive_from_cell(self):
        stats = stats_of(rec(14, 7), rec(4, 2, flip_in_move=2), rec(14, 7, move_index=2))
        row_hint = operationalize_first(AssistAction.SUG_ROW, stats, fresh_state(), MODE_TOM, Random(0))
        col_hint = operationalize_first(AssistAction.SUG_COL, stats, fresh_state(), MODE_TOM, Random(0))
        partner = Location.from_cell(15)   # face 7 pairs cells 14/15; 14 was seen
        assert row_hint.target == RowTarget(partner.row)
        assert col_hint.target == ColTarget(partner.col)


class TestOperationalizeSecond:
    def make_state_with_pending(self, first_cell=9, partner_cell=17):
        layout = paired_layout()
        fid = 11
        swap = {first_cell: fid, partner_cell: fid}
        taken = [c for c, f in enumerate(layout) if f == fid]
        for old, new in zip(taken, [layout[first_cell], layout[partner_cell]]):
            layout[old] = new
        for cell, f in swap.items():
            layout[cell] = f
        state = fresh_state(layout)
        flip(state, Location.from_cell(first_cell))
        return state, state.ledger[-1]

    def test_targets_true_partner(self):
        state, first = self.make_state_with_pending(first_cell=9, partner_cell=17)
        stats = stats_of(first)
        hint = operationalize_second(AssistAction.SUG_ROW, first, stats, state, MODE_TOM)
        assert hint.target == RowTarget(2)        # partner cell 17 = (2, 5)
        col = operationalize_second(AssistAction.SUG_COL, first, stats, state, MODE_TOM)
        assert col.target == ColTarget(5)
        card = operationalize_second(AssistAction.SUG_CARD, first, stats, state, MODE_TOM)
        assert card.target == CellTarget(Location(2, 5))

    def test_tom_explanation_cases(self):
        state, first = self.make_state_with_pending()
        partner_cell = 17
        seen_once = stats_of(rec(partner_cell, first.face.id), first)
        hint = operationalize_second(AssistAction.SUG_ROW, first, seen_once, state, MODE_TOM)
        assert hint.case is ExplanationCase.BOTH_SEEN_ONCE_2
        assert hint.explanation.startswith("You've seen this card before.")

        never_seen = stats_of(first)
        hint = operationalize_second(AssistAction.SUG_ROW, first, never_seen, state, MODE_TOM)
        assert hint.case is ExplanationCase.CURRENT_ONCE_OTHER_NEVER_2
        assert "You haven't seen a" in hint.explanation

        struggling = stats_of(rec(9, first.face.id, move_index=1), rec(9, first.face.id, move_index=2), first)
        hint = operationalize_second(AssistAction.SUG_ROW, first, struggling, state, MODE_TOM)
        assert hint.case is ExplanationCase.ONE_MULTI_OTHER_NEVER_2

        both_multi = stats_of(
            rec(9, first.face.id, move_index=1), rec(17, first.face.id, move_index=1, flip_in_move=2),
            rec(17, first.face.id, move_index=2), first,
        )
        hint = operationalize_second(AssistAction.SUG_ROW, first, both_multi, state, MODE_TOM)
        assert hint.case is ExplanationCase.BOTH_MULTI_2

    def test_notom_bare_phrase(self):
        state, first = self.make_state_with_pending()
        hint = operationalize_second(AssistAction.SUG_ROW, first, stats_of(first), state, MODE_NOTOM)
        assert hint.explanation is None
        assert hint.phrase == "The matching card is located in row 3."

    def test_no_help_silent(self):
        state, first = self.make_state_with_pending()
        hint = operationalize_second(AssistAction.NO_HELP, first, stats_of(first), state, MODE_TOM)
        assert hint.is_silent and hint.target is None


class TestRenderExplanation:
    def test_row2_example(self):
        text = render_explanation(ExplanationCase.ONE_NEVER_OTHER_MULTI, face(SHARK), Location(0, 1))
        assert text.startswith("You have clicked shark several times. Click the one in row 1 and col 2")

    def test_deterministic(self):
        a = render_explanation(ExplanationCase.BOTH_MULTI, face(3), Location(2, 2))
        b = render_explanation(ExplanationCase.BOTH_MULTI, face(3), Location(2, 2))
        assert a == b

    def test_all_templates_nonempty_and_distinct(self):
        rendered = {
            case: render_explanation(case, face(SHARK), Location(0, 1))
            for case in ExplanationCase
        }
        assert all(rendered.values())
        assert len(set(rendered.values())) == len(ExplanationCase)

    def test_missing_data_raises(self):
        with pytest.raises(TemplateError):
            render_explanation(ExplanationCase.BOTH_MULTI)   # needs face and place

    def test_template_file_must_cover_all_cases(self, tmp_path):
        path = tmp_path / "templates.json"
        path.write_text('{"fallback": "x"}')
        with pytest.raises(TemplateError):
            load_templates(str(path))

    def test_default_templates_loaded_once(self):
        assert default_templates() is default_templates()


class TestFirstFlipOutcome:
    def test_followed_hint_is_correct(self):
        state = fresh_state()
        flip(state, Location(0, 0))
        flipped = state.ledger[-1]
        stats = stats_of(flipped)
        from pairmind.mentalising import Hint
        hint = Hint(AssistAction.SUG_CARD, CellTarget(Location(0, 0)), MODE_TOM, "first")
        assert first_flip_outcome(hint, flipped, stats) is True

    def test_fresh_unseen_card_is_wrong(self):
        state = fresh_state()
        flip(state, Location(0, 0))
        flipped = state.ledger[-1]
        assert first_flip_outcome(None, flipped, stats_of(flipped)) is False

    def test_partner_seen_before_is_correct(self):
        earlier = [rec(1, SHARK, move_index=1), rec(1, SHARK, move_index=2)]
        state = fresh_state()
        flip(state, Location(0, 0))   # cell 0: shark, partner cell 1 seen twice
        flipped = state.ledger[-1]
        assert first_flip_outcome(None, flipped, stats_of(*earlier, flipped)) is True


class TestTargets:
    def test_containment(self):
        assert target_contains(RowTarget(2), Location(2, 5))
        assert not target_contains(RowTarget(2), Location(1, 5))
        assert target_contains(ColTarget(3), Location(0, 3))
        assert target_contains(CellTarget(Location(1, 1)), Location(1, 1))

    def test_cells(self):
        assert len(target_cells(RowTarget(0))) == 6
        assert len(target_cells(ColTarget(0))) == 4
        assert target_cells(CellTarget(Location(1, 1))) == [7]
