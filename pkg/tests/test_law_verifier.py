from app.services.law_verifier import verify_law
from app.services.ledley_solver import FeedbackLaw, StateSet
from app.services.stabilizer_synth import TargetSpec
from app.services.stp_core import LogicalMatrix
from tests.conftest import BCN_POINT_LAW


def test_known_point_law_passes(bcn, bcn_point_law):
    report = verify_law(bcn.transition, bcn_point_law, TargetSpec.point(3, 16))
    assert report.passed
    assert report.converged
    assert report.loop.convergence_time == 3
    assert not report.violations and not report.mismatches


def test_known_set_law_passes(bcn, bcn_set, bcn_set_law):
    assert verify_law(bcn.transition, bcn_set_law, TargetSpec.of_set(bcn_set)).passed


def test_non_fixing_control_at_target_fails(bcn):
    controls = list(BCN_POINT_LAW)
    controls[2] = 1
    report = verify_law(bcn.transition, FeedbackLaw.from_controls(4, controls), TargetSpec.point(3, 16))
    assert not report.passed
    assert [(v.state, v.layer, v.allowed) for v in report.violations] == [(3, 0, [2, 4])]
    assert not report.converged


def test_constant_law_on_fully_controllable_network():
    # el control 1 lleva cualquier estado a 1
    transition = LogicalMatrix(3, (1, 1, 1, 2, 3, 1))
    law = FeedbackLaw.from_controls(2, [1, 1, 1])
    assert verify_law(transition, law, TargetSpec.point(1, 3)).passed


def test_slow_law_is_flagged_against_bfs():
    # 3 → 2 → 1 es válido pero no óptimo: 3 puede ir directo a 1
    transition = LogicalMatrix(3, (1, 1, 2, 1, 1, 1))
    law = FeedbackLaw.from_controls(2, [1, 1, 1])
    report = verify_law(transition, law, TargetSpec.point(1, 3))
    assert not report.passed
    assert [(m.state, m.hit_time, m.bfs_distance) for m in report.mismatches] == [(3, 2, 1)]


def test_unsolvable_target_fails_with_reason():
    report = verify_law(LogicalMatrix(2, (2, 1)), FeedbackLaw.from_controls(1, [1, 1]), TargetSpec.of_set(StateSet.of(2, [1])))
    assert not report.passed
    assert report.reason == "EmptyCore"
