from app.services.graph_export import to_dot
from app.services.ledley_solver import StateSet
from app.services.stabilizer_synth import attractor_states
from app.services.stp_core import LogicalMatrix
from tests.conftest import BCN_POINT_M_C, BCN_SET_M_C


def _edges(dot):
    return [line.strip() for line in dot.splitlines() if " -> " in line]


def test_point_closed_loop_has_single_self_loop(bcn):
    mc = LogicalMatrix(16, tuple(BCN_POINT_M_C))
    dot = to_dot(mc, attractor_states(mc), bcn.state_label, "bcn4")
    edges = _edges(dot)
    assert len(edges) == 16
    assert [e for e in edges if e.split(" -> ")[0] == e.split(" -> ")[1].rstrip(";")] == ['"3" -> "3";']
    assert dot.count("doublecircle") == 1
    assert 'label="δ16^3\\n(1,1,0,1)"' in dot
    assert dot.startswith('digraph "bcn4" {')


def test_set_closed_loop_has_two_cycle():
    mc = LogicalMatrix(16, tuple(BCN_SET_M_C))
    dot = to_dot(mc, attractor_states(mc))
    assert '"6" -> "12";' in dot
    assert '"12" -> "6";' in dot
    assert dot.count("doublecircle") == 2


def test_identity_gives_self_loops_and_is_deterministic():
    mc = LogicalMatrix.identity(4)
    dot = to_dot(mc, StateSet.full(4))
    assert _edges(dot) == [f'"{x}" -> "{x}";' for x in range(1, 5)]
    assert dot == to_dot(mc, StateSet.full(4))
