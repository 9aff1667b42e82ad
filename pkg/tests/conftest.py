import pytest

from pairmind.mdp import AssistAction, GamePhase, MdpState, PrevOutcome
from pairmind.qlearn import QTable


def structured_policy_table() -> QTable:
    """Hand-built table with the expected qualitative structure: silence on
    first flips and in the late game, column hints on early second flips."""
    q = QTable.zeros()
    for phase in GamePhase:
        for assist in AssistAction:
            for outcome in (PrevOutcome.S_CORRECT, PrevOutcome.S_WRONG):
                q.values[MdpState(phase, assist, outcome).index] = [5.0, 1.0, 1.0, 1.0]
            for outcome in (PrevOutcome.F_CORRECT, PrevOutcome.F_WRONG):
                idx = MdpState(phase, assist, outcome).index
                if phase is GamePhase.END:
                    q.values[idx] = [4.0, 1.0, 0.5, 0.2]
                else:
                    q.values[idx] = [1.0, 3.0, 0.5, 0.2]
    return q


@pytest.fixture
def structured_table() -> QTable:
    return structured_policy_table()
