import random
from fractions import Fraction

import numpy as np
import pytest

from app.services.logic_model import (
    _BUILTIN_SEMANTICS,
    Apply,
    Const,
    DeltaConst,
    Domain,
    MixedRadix,
    NetworkSyntaxError,
    Var,
    builtin_operator,
    compile_network,
    format_expr,
    parse_expression,
    parse_network,
    structure_matrix,
)
from app.services.stp_core import LogicalMatrix, delta, stp
from tests.conftest import BCN_M_F, LEDLEY_M_F, MIX_M_F, NETWORKS

ABC = "state A: bool\nstate B: bool\nstate C: bool\nA' = A\nB' = B\nC' = C\n"


@pytest.fixture
def abc():
    return parse_network(ABC)


@pytest.fixture
def ledley_source():
    return parse_network((NETWORKS / "ledley_example.net").read_text(encoding="utf-8"))


# ─────────────────────────────────────────────
# Dominios y codificación
# ─────────────────────────────────────────────

def test_domain_value_index_convention():
    d3 = Domain(3)
    assert [d3.value_of(i) for i in (1, 2, 3)] == [1, Fraction(1, 2), 0]
    assert d3.index_of(Fraction(1, 2)) == 2
    assert Domain(2).index_of(0) == 2
    with pytest.raises(ValueError):
        d3.index_of(Fraction(1, 3))
    with pytest.raises(ValueError):
        Domain(1)


def test_mixed_radix_most_significant_first():
    codec = MixedRadix((2, 3))
    assert codec.size == 6
    assert codec.encode((2, 3)) == 6
    assert codec.decode(4) == (2, 1)
    assert [d.tolist() for d in codec.decode_array(np.arange(1, 7))] == [[1, 1, 1, 2, 2, 2], [1, 2, 3, 1, 2, 3]]


def test_state_index_of_value_tuple(bcn):
    assert bcn.state_to_index((1, 1, 0, 1)) == 3
    assert bcn.index_to_state(6) == (1, 0, 1, 0)
    assert bcn.state_label(12) == "(0,1,0,0)"


# ─────────────────────────────────────────────
# Operadores
# ─────────────────────────────────────────────

@pytest.mark.parametrize(
    "symbol, table",
    [
        ("!", (2, 1)),
        ("&", (1, 2, 2, 2)),
        ("|", (1, 1, 1, 2)),
        ("->", (1, 2, 1, 1)),
        ("<->", (1, 2, 2, 1)),
        ("^", (2, 1, 1, 2)),
    ],
)
def test_boolean_builtins(symbol, table):
    assert builtin_operator(symbol).table.col_indices == table


def test_k_valued_builtins():
    assert builtin_operator("!", 3).table.col_indices == (3, 2, 1)
    assert builtin_operator("&", 3).table.col_indices == (1, 2, 3, 2, 2, 3, 3, 3, 3)
    assert builtin_operator("|", 3).table.col_indices == (1, 1, 1, 1, 2, 2, 1, 2, 3)


# ─────────────────────────────────────────────
# Parser
# ─────────────────────────────────────────────

def test_operator_precedence(abc):
    expr = parse_expression("!A & B | C", abc)
    assert expr == Apply("|", (Apply("&", (Apply("!", (Var("A"),)), Var("B"))), Var("C")))
    assert parse_expression("A -> B -> C", abc) == Apply("->", (Var("A"), Apply("->", (Var("B"), Var("C")))))
    assert parse_expression("¬A ∧ B", abc) == parse_expression("!A & B", abc)
    assert format_expr(parse_expression("A <-> B ^ C", abc)) == "(A <-> (B ^ C))"


def test_comments_and_blank_lines_are_ignored():
    net = parse_network("# red mínima\n\nnetwork tiny  # nombre\nstate X: bool\nX' = !X\n")
    assert net.name == "tiny"
    assert compile_network(net).transition.col_indices == (2, 1)


@pytest.mark.parametrize(
    "text, line",
    [
        ("state X: bool\nX' = Y\n", 2),
        ("state X: bool\nstate X: bool\nX' = X\n", 2),
        ("network n\nstate X bool\n", 2),
        ("state X: bool\ncontrol U: bool\nU' = X\nX' = U\n", 3),
        ("state X: bool\nX' = X\nX' = !X\n", 3),
        ("state d: bool\nd' = d\n", 1),
        ("state X: 3\nX' = 1/3\n", 2),
        ("state X: bool\nop f: (2) -> 2 = [1, 2, 1]\nX' = f(X)\n", 2),
    ],
)
def test_syntax_errors_report_line(text, line):
    with pytest.raises(NetworkSyntaxError) as info:
        parse_network(text)
    assert info.value.line == line


def test_missing_update_and_empty_network():
    with pytest.raises(NetworkSyntaxError, match="X2"):
        parse_network("state X1: bool\nstate X2: bool\nX1' = X2\n")
    with pytest.raises(NetworkSyntaxError):
        parse_network("network empty\n")


def test_constants_take_the_context_domain():
    net = parse_network("state Y: 3\nY' = 1/2\n")
    assert compile_network(net).transition.col_indices == (2, 2, 2)
    net = parse_network("state Y: 3\nY' = d(3, 3)\n")
    assert compile_network(net).transition.col_indices == (3, 3, 3)


# ─────────────────────────────────────────────
# Compilación
# ─────────────────────────────────────────────

def test_structure_matrix_of_single_equation(ledley_source):
    expr = parse_expression("(X1 | U) -> X2", ledley_source)
    assert structure_matrix(expr, ledley_source).col_indices == (1, 2, 1, 2, 1, 2, 1, 1)


def test_structure_matrix_satisfies_stp_chain(ledley_source, ledley):
    m_f = ledley.transition
    for u in range(1, 3):
        for x in range(1, 5):
            chain = stp(stp(m_f, delta(2, u)), delta(4, x))
            assert LogicalMatrix.from_dense(chain).col_indices == (m_f.column((u - 1) * 4 + x),)


def test_compile_ledley_example(ledley):
    assert list(ledley.transition.col_indices) == LEDLEY_M_F


def test_compile_four_state_network(bcn):
    assert (bcn.n, bcn.m, bcn.N, bcn.M) == (4, 2, 16, 4)
    assert list(bcn.transition.col_indices) == BCN_M_F


def test_compile_mix_valued_network(mix):
    assert (mix.N, mix.M) == (6, 3)
    assert mix.state_radices == (2, 3)
    assert not mix.is_boolean
    assert list(mix.transition.col_indices) == MIX_M_F


def test_compile_refuses_oversized_networks(bcn_source):
    with pytest.raises(ValueError):
        compile_network(bcn_source, max_columns=32)


# ─────────────────────────────────────────────
# M_F frente a la evaluación directa de las ecuaciones
# ─────────────────────────────────────────────

def _value(expr, env, operators):
    """Valor lógico de `expr` con las variables fijadas en `env` (nombre → Fraction)."""
    if isinstance(expr, Var):
        return env[expr.name]
    if isinstance(expr, Const):
        return expr.value
    if isinstance(expr, DeltaConst):
        return Domain(expr.k).value_of(expr.index)
    args = [_value(a, env, operators) for a in expr.args]
    if expr.op in operators:
        op = operators[expr.op]
        digits = [d.index_of(v) for d, v in zip(op.arg_domains, args)]
        column = MixedRadix(tuple(d.k for d in op.arg_domains)).encode(digits)
        return op.out_domain.value_of(op.table.column(column))
    return _BUILTIN_SEMANTICS[expr.op][1](*args)


def _assert_columns_match_semantics(net):
    compiled = compile_network(net)
    controls = MixedRadix(net.control_radices)
    for u in range(1, net.M + 1):
        u_digits = controls.decode(u)
        for x in range(1, net.N + 1):
            env = {v.name: v.domain.value_of(d) for v, d in zip(net.control_vars, u_digits)}
            env.update(zip((v.name for v in net.state_vars), net.index_to_state(x)))
            successor = [_value(e, env, net.operators) for e in net.updates]
            assert compiled.transition.column((u - 1) * net.N + x) == net.state_to_index(successor)


@pytest.mark.parametrize("filename", ["bcn_point.net", "mix_valued.net", "ledley_example.net"])
def test_transition_columns_match_semantics(filename):
    net = parse_network((NETWORKS / filename).read_text(encoding="utf-8"))
    _assert_columns_match_semantics(net)


def _random_expr(rng, names, constants, depth):
    if depth == 0 or rng.random() < 0.25:
        return rng.choice(names + constants)
    symbol = rng.choice(["!", "&", "|", "->", "<->", "^"])
    if symbol == "!":
        return f"!({_random_expr(rng, names, constants, depth - 1)})"
    left = _random_expr(rng, names, constants, depth - 1)
    right = _random_expr(rng, names, constants, depth - 1)
    return f"({left}) {symbol} ({right})"


def _random_source(seed):
    rng = random.Random(seed)
    k = rng.choice([2, 3])
    domain = "bool" if k == 2 else "3"
    states = [f"X{i}" for i in range(1, rng.randint(1, 3) + 1)]
    controls = [f"U{i}" for i in range(1, rng.randint(0, 2) + 1)]
    constants = ["0", "1"] + (["1/2"] if k == 3 else [])
    lines = [f"state {s}: {domain}" for s in states] + [f"control {c}: {domain}" for c in controls]
    lines += [f"{s}' = {_random_expr(rng, states + controls, constants, 3)}" for s in states]
    return "\n".join(lines) + "\n"


@pytest.mark.parametrize("seed", range(40))
def test_random_networks_match_semantics(seed):
    _assert_columns_match_semantics(parse_network(_random_source(seed)))


@pytest.mark.parametrize(
    "text", [(NETWORKS / "bcn_point.net").read_text(encoding="utf-8"), *map(_random_source, range(5))],
    ids=["bcn4", *(f"random{i}" for i in range(5))],
)
def test_recompilation_is_stable(text):
    first = compile_network(parse_network(text)).transition
    assert compile_network(parse_network(text)).transition == first
