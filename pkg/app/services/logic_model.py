"""
LEDLEY — Modelo lógico
Parsea la descripción textual de una red (booleana, k-valuada o mixta)
y la compila a su forma algebraica x(t+1) = M_F u(t) x(t).

Las matrices de estructura se construyen por EVALUACIÓN EXHAUSTIVA:
para cada columna (u, x) se decodifican las variables, se evalúa la
expresión a través de las tablas de los operadores y se escribe el
índice δ resultante. Las identidades algebraicas del STP quedan como
oráculos de los tests, no como método de construcción.
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import prod
from typing import Optional, Sequence, Union

import numpy as np
from lark import Lark, Transformer, v_args
from lark.exceptions import LarkError, UnexpectedInput

from app.services.stp_core import LogicalMatrix, khatri_rao

logger = logging.getLogger(__name__)


# ─────────────────────────────────────────────
# Gramática del DSL (una sentencia por línea)
# ─────────────────────────────────────────────

NETWORK_GRAMMAR = r"""
    statement: "network" NAME                                   -> network_decl
             | "state" NAME ":" domain                          -> state_decl
             | "control" NAME ":" domain                        -> control_decl
             | "op" NAME ":" "(" domain_list ")" "->" domain "=" "[" index_list "]"  -> op_decl
             | NAME "'" "=" expr                                -> update

    domain: INT | BOOL
    domain_list: domain ("," domain)*
    index_list: INT ("," INT)*

    ?expr: iff
    ?iff: imp
        | iff ("<->" | "↔") imp        -> iff_op
    ?imp: xor
        | xor ("->" | "→") imp         -> imp_op
    ?xor: disj
        | xor ("^" | "⊕") disj         -> xor_op
    ?disj: conj
        | disj ("|" | "∨") conj        -> or_op
    ?conj: unary
        | conj ("&" | "∧") unary       -> and_op
    ?unary: atom
        | ("!" | "¬") unary            -> not_op
    ?atom: NAME "(" expr ("," expr)* ")"   -> call
         | NAME                        -> var
         | INT "/" INT                 -> fraction
         | INT                         -> integer
         | "(" expr ")"

    BOOL: "bool"
    NAME: /[^\W\d]\w*/
    INT: /\d+/

    %import common.WS_INLINE
    %ignore WS_INLINE
"""

_PARSER = Lark(NETWORK_GRAMMAR, parser="lalr", start=["statement", "expr"])

# Nombre reservado para literales delta: d(k, i)
DELTA_LITERAL = "d"


class NetworkSyntaxError(ValueError):
    """Error del DSL con su número de línea."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        self.message = message
        super().__init__(f"línea {line}: {message}" if line else message)


# ─────────────────────────────────────────────
# Dominios y codificación de índices
# ─────────────────────────────────────────────

@dataclass(frozen=True)
class Domain:
    """
    D_k = {0, 1/(k−1), ..., 1}.
    Convención: el valor (k−i)/(k−1) corresponde a δ_k^i
    (para k=2: 1 ↔ δ2^1, 0 ↔ δ2^2).
    """
    k: int

    def __post_init__(self):
        if self.k < 2:
            raise ValueError(f"Un dominio lógico necesita k ≥ 2 (k={self.k}).")

    def value_of(self, index: int) -> Fraction:
        if not 1 <= index <= self.k:
            raise ValueError(f"Índice {index} fuera de 1..{self.k}.")
        return Fraction(self.k - index, self.k - 1)

    def index_of(self, value) -> int:
        v = Fraction(value)
        position = self.k - v * (self.k - 1)
        if position.denominator != 1 or not 1 <= position <= self.k:
            raise ValueError(f"El valor {value} no pertenece a D_{self.k}.")
        return int(position)


@dataclass(frozen=True)
class MixedRadix:
    """
    Índice 1-based en base mixta, variable más significativa primero:
    idx = 1 + Σ_j (i_j − 1) · Π_{l>j} k_l
    """
    radices: tuple[int, ...]

    @property
    def size(self) -> int:
        return prod(self.radices)

    def encode(self, digits: Sequence[int]) -> int:
        if len(digits) != len(self.radices):
            raise ValueError(f"Se esperaban {len(self.radices)} componentes, llegaron {len(digits)}.")
        idx = 0
        for d, k in zip(digits, self.radices):
            if not 1 <= d <= k:
                raise ValueError(f"Componente {d} fuera de 1..{k}.")
            idx = idx * k + (d - 1)
        return idx + 1

    def decode(self, index: int) -> tuple[int, ...]:
        if not 1 <= index <= self.size:
            raise ValueError(f"Índice {index} fuera de 1..{self.size}.")
        rest = index - 1
        digits = []
        for k in reversed(self.radices):
            rest, d = divmod(rest, k)
            digits.append(d + 1)
        return tuple(reversed(digits))

    def decode_array(self, indices: np.ndarray) -> list[np.ndarray]:
        rest = np.asarray(indices, dtype=np.int64) - 1
        digits = []
        for k in reversed(self.radices):
            digits.append(rest % k + 1)
            rest = rest // k
        return list(reversed(digits))


# ─────────────────────────────────────────────
# AST de expresiones
# ─────────────────────────────────────────────

@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Const:
    value: Fraction         # valor lógico en [0, 1]; el dominio lo fija el contexto


@dataclass(frozen=True)
class DeltaConst:
    k: int
    index: int


@dataclass(frozen=True)
class Apply:
    op: str
    args: tuple


Expr = Union[Var, Const, DeltaConst, Apply]


@v_args(inline=True)
class _ExprBuilder(Transformer):
    def var(self, name):
        return Var(str(name))

    def integer(self, value):
        return Const(Fraction(int(value)))

    def fraction(self, num, den):
        if int(den) == 0:
            raise ValueError("Fracción con denominador 0.")
        return Const(Fraction(int(num), int(den)))

    def call(self, name, *args):
        if str(name) == DELTA_LITERAL:
            if len(args) != 2 or not all(isinstance(a, Const) and a.value.denominator == 1 for a in args):
                raise ValueError("El literal delta se escribe d(k, i) con enteros.")
            return DeltaConst(int(args[0].value), int(args[1].value))
        return Apply(str(name), tuple(args))

    def not_op(self, a):
        return Apply("!", (a,))

    def and_op(self, a, b):
        return Apply("&", (a, b))

    def or_op(self, a, b):
        return Apply("|", (a, b))

    def xor_op(self, a, b):
        return Apply("^", (a, b))

    def imp_op(self, a, b):
        return Apply("->", (a, b))

    def iff_op(self, a, b):
        return Apply("<->", (a, b))

    # sentencias
    def domain(self, token):
        return 2 if str(token) == "bool" else int(token)

    def domain_list(self, *domains):
        return list(domains)

    def index_list(self, *indices):
        return [int(i) for i in indices]

    def network_decl(self, name):
        return ("network", str(name))

    def state_decl(self, name, k):
        return ("state", str(name), k)

    def control_decl(self, name, k):
        return ("control", str(name), k)

    def op_decl(self, name, arg_ks, out_k, table):
        return ("op", str(name), arg_ks, out_k, table)

    def update(self, name, expr):
        return ("update", str(name), expr)


def format_expr(expr: Expr) -> str:
    """Texto DSL equivalente (con paréntesis completos)."""
    if isinstance(expr, Var):
        return expr.name
    if isinstance(expr, Const):
        return str(expr.value)
    if isinstance(expr, DeltaConst):
        return f"{DELTA_LITERAL}({expr.k},{expr.index})"
    if expr.op == "!":
        return f"!{format_expr(expr.args[0])}"
    if expr.op in BUILTIN_OPERATORS:
        return "(" + f" {expr.op} ".join(format_expr(a) for a in expr.args) + ")"
    return f"{expr.op}(" + ", ".join(format_expr(a) for a in expr.args) + ")"


# ─────────────────────────────────────────────
# Operadores
# ─────────────────────────────────────────────

@dataclass(frozen=True)
class Operator:
    name: str
    arg_domains: tuple[Domain, ...]
    out_domain: Domain
    table: LogicalMatrix    # out_k × Π arg_k

    def __post_init__(self):
        expected = prod(d.k for d in self.arg_domains)
        if self.table.cols != expected:
            raise ValueError(
                f"El operador '{self.name}' necesita {expected} columnas, tiene {self.table.cols}."
            )
        if self.table.rows != self.out_domain.k:
            raise ValueError(
                f"El operador '{self.name}' tiene {self.table.rows} filas; su dominio de salida es {self.out_domain.k}."
            )

    @property
    def arity(self) -> int:
        return len(self.arg_domains)


# Lógica k-valuada estándar; para k=2 reproduce ¬ ∧ ∨ → ↔ ⊕.
_BUILTIN_SEMANTICS = {
    "!":   (1, lambda a: 1 - a),
    "&":   (2, lambda a, b: min(a, b)),
    "|":   (2, lambda a, b: max(a, b)),
    "->":  (2, lambda a, b: max(1 - a, b)),
    "<->": (2, lambda a, b: min(max(1 - a, b), max(1 - b, a))),
    "^":   (2, lambda a, b: 1 - min(max(1 - a, b), max(1 - b, a))),
}

BUILTIN_OPERATORS = tuple(_BUILTIN_SEMANTICS)


@lru_cache(maxsize=None)
def builtin_operator(symbol: str, k: int = 2) -> Operator:
    """Tabla del conectivo `symbol` sobre D_k, construida evaluando su semántica."""
    arity, fn = _BUILTIN_SEMANTICS[symbol]
    domain = Domain(k)
    args = MixedRadix((k,) * arity)
    table = [
        domain.index_of(fn(*(domain.value_of(i) for i in args.decode(col))))
        for col in range(1, args.size + 1)
    ]
    return Operator(symbol, (domain,) * arity, domain, LogicalMatrix(k, tuple(table)))


# ─────────────────────────────────────────────
# Redes
# ─────────────────────────────────────────────

@dataclass(frozen=True)
class Variable:
    name: str
    domain: Domain

    @property
    def k(self) -> int:
        return self.domain.k


class StateSpace:
    """Codificación de estados/controles compartida por Network y CompiledNetwork."""
    name: str
    state_vars: tuple[Variable, ...]
    control_vars: tuple[Variable, ...]

    @property
    def n(self) -> int:
        return len(self.state_vars)

    @property
    def m(self) -> int:
        return len(self.control_vars)

    @property
    def state_radices(self) -> tuple[int, ...]:
        return tuple(v.k for v in self.state_vars)

    @property
    def control_radices(self) -> tuple[int, ...]:
        return tuple(v.k for v in self.control_vars)

    @property
    def N(self) -> int:
        return prod(self.state_radices)

    @property
    def M(self) -> int:
        return prod(self.control_radices)

    @property
    def is_boolean(self) -> bool:
        return all(v.k == 2 for v in self.state_vars + self.control_vars)

    def state_to_index(self, values: Sequence) -> int:
        if len(values) != self.n:
            raise ValueError(f"El estado necesita {self.n} valores, llegaron {len(values)}.")
        digits = [v.domain.index_of(val) for v, val in zip(self.state_vars, values)]
        return MixedRadix(self.state_radices).encode(digits)

    def index_to_state(self, idx: int) -> tuple[Fraction, ...]:
        digits = MixedRadix(self.state_radices).decode(idx)
        return tuple(v.domain.value_of(d) for v, d in zip(self.state_vars, digits))

    def state_label(self, idx: int) -> str:
        """Tupla de valores, p.ej. '(1,1,0,1)' o '(1,1/2)'."""
        return "(" + ",".join(str(v) for v in self.index_to_state(idx)) + ")"


@dataclass(frozen=True)
class CompiledNetwork(StateSpace):
    """Forma compilada: solo declaraciones y M_F ∈ L_{N×(M·N)}."""
    name: str
    state_vars: tuple[Variable, ...]
    control_vars: tuple[Variable, ...]
    transition: LogicalMatrix

    def __post_init__(self):
        if self.transition.shape != (self.N, self.M * self.N):
            raise ValueError(
                f"M_F tiene forma {self.transition.shape}; se esperaba ({self.N}, {self.M * self.N})."
            )


@dataclass(frozen=True)
class Network(StateSpace):
    name: str
    state_vars: tuple[Variable, ...]
    control_vars: tuple[Variable, ...]
    updates: tuple[Expr, ...]                       # una por variable de estado, en orden
    operators: dict = field(default_factory=dict)   # nombre → Operator (solo los declarados)

    @property
    def scope(self) -> dict[str, Domain]:
        return {v.name: v.domain for v in self.control_vars + self.state_vars}

    @classmethod
    def over_states(cls, state_vars: Sequence[Variable], name: str = "scratch") -> "Network":
        """Red sin controles ni dinámica; sirve para compilar fórmulas sobre los estados."""
        state_vars = tuple(state_vars)
        return cls(name, state_vars, (), tuple(Var(v.name) for v in state_vars))


# ─────────────────────────────────────────────
# Verificación de tipos
# ─────────────────────────────────────────────

def _natural_domain(expr: Expr, scope: dict, operators: dict) -> Optional[int]:
    """Dominio que la expresión impone por sí misma (None si lo decide el contexto)."""
    if isinstance(expr, Var):
        return scope[expr.name].k if expr.name in scope else None
    if isinstance(expr, DeltaConst):
        return expr.k
    if isinstance(expr, Const):
        return None
    if expr.op in operators:
        return operators[expr.op].out_domain.k
    for arg in expr.args:
        k = _natural_domain(arg, scope, operators)
        if k is not None:
            return k
    return None


def check_expr(expr: Expr, expected: Optional[int], scope: dict, operators: dict) -> int:
    """Verifica nombres, aridades y dominios; devuelve el dominio de la expresión."""
    if isinstance(expr, Var):
        if expr.name not in scope:
            raise ValueError(f"Variable no declarada '{expr.name}'.")
        k = scope[expr.name].k
    elif isinstance(expr, Const):
        k = expected or 2
        Domain(k).index_of(expr.value)
    elif isinstance(expr, DeltaConst):
        k = expr.k
        if k < 2 or not 1 <= expr.index <= k:
            raise ValueError(f"Literal d({expr.k},{expr.index}) inválido.")
    elif expr.op in operators:
        op = operators[expr.op]
        if len(expr.args) != op.arity:
            raise ValueError(f"'{op.name}' espera {op.arity} argumentos, recibió {len(expr.args)}.")
        for arg, d in zip(expr.args, op.arg_domains):
            check_expr(arg, d.k, scope, operators)
        k = op.out_domain.k
    elif expr.op in _BUILTIN_SEMANTICS:
        arity = _BUILTIN_SEMANTICS[expr.op][0]
        if len(expr.args) != arity:
            raise ValueError(f"'{expr.op}' espera {arity} argumentos, recibió {len(expr.args)}.")
        k = expected or _natural_domain(expr, scope, operators) or 2
        for arg in expr.args:
            check_expr(arg, k, scope, operators)
    else:
        raise ValueError(f"Operador desconocido '{expr.op}'.")
    if expected is not None and k != expected:
        raise ValueError(f"Dominio incompatible: se esperaba D_{expected} y la expresión da D_{k}.")
    return k


# ─────────────────────────────────────────────
# Parser
# ─────────────────────────────────────────────

def _parse_line(code: str, lineno: int, start: str = "statement"):
    try:
        tree = _PARSER.parse(code, start=start)
        return _ExprBuilder().transform(tree)
    except UnexpectedInput as e:
        raise NetworkSyntaxError(f"sintaxis inválida cerca de la columna {e.column}: «{code}»", lineno) from e
    except LarkError as e:
        cause = getattr(e, "orig_exc", e)
        raise NetworkSyntaxError(str(cause), lineno) from e


def parse_network(text: str) -> Network:
    """Parsea el DSL completo y devuelve una Network resuelta."""
    name = "network"
    states: list[Variable] = []
    controls: list[Variable] = []
    operators: dict[str, Operator] = {}
    updates: dict[str, tuple[Expr, int]] = {}
    declared: set[str] = set()

    def declare(ident: str, lineno: int):
        if ident == DELTA_LITERAL or ident in _BUILTIN_SEMANTICS:
            raise NetworkSyntaxError(f"'{ident}' es un nombre reservado.", lineno)
        if ident in declared:
            raise NetworkSyntaxError(f"'{ident}' ya fue declarado.", lineno)
        declared.add(ident)

    for lineno, raw in enumerate(text.splitlines(), start=1):
        code = raw.split("#", 1)[0].strip()
        if not code:
            continue
        stmt = _parse_line(code, lineno)
        kind = stmt[0]
        try:
            if kind == "network":
                name = stmt[1]
            elif kind in ("state", "control"):
                declare(stmt[1], lineno)
                var = Variable(stmt[1], Domain(stmt[2]))
                (states if kind == "state" else controls).append(var)
            elif kind == "op":
                _, ident, arg_ks, out_k, table = stmt
                declare(ident, lineno)
                operators[ident] = Operator(
                    ident,
                    tuple(Domain(k) for k in arg_ks),
                    Domain(out_k),
                    LogicalMatrix(out_k, tuple(table)),
                )
            else:
                _, target, expr = stmt
                if target in updates:
                    raise NetworkSyntaxError(f"'{target}' tiene más de una ecuación.", lineno)
                updates[target] = (expr, lineno)
        except NetworkSyntaxError:
            raise
        except ValueError as e:
            raise NetworkSyntaxError(str(e), lineno) from e

    if not states:
        raise NetworkSyntaxError("La red no declara variables de estado.")

    scope = {v.name: v.domain for v in controls + states}
    for target, (expr, lineno) in updates.items():
        if target not in scope or target in {c.name for c in controls}:
            raise NetworkSyntaxError(f"'{target}' no es una variable de estado declarada.", lineno)
        try:
            check_expr(expr, scope[target].k, scope, operators)
        except ValueError as e:
            raise NetworkSyntaxError(str(e), lineno) from e

    missing = [v.name for v in states if v.name not in updates]
    if missing:
        raise NetworkSyntaxError(f"Faltan ecuaciones para: {', '.join(missing)}.")

    net = Network(
        name=name,
        state_vars=tuple(states),
        control_vars=tuple(controls),
        updates=tuple(updates[v.name][0] for v in states),
        operators=operators,
    )
    logger.debug("Red '%s' parseada: n=%d, m=%d, N=%d, M=%d", name, net.n, net.m, net.N, net.M)
    return net


def parse_expression(text: str, net: Network, expected: Optional[int] = None) -> Expr:
    """Parsea y verifica una expresión suelta sobre las variables de `net`."""
    expr = _parse_line(text.strip(), 1, start="expr")
    try:
        check_expr(expr, expected, net.scope, net.operators)
    except ValueError as e:
        raise NetworkSyntaxError(str(e)) from e
    return expr


# ─────────────────────────────────────────────
# Compilación por evaluación exhaustiva
# ─────────────────────────────────────────────

def _assignment(net: Network) -> dict[str, np.ndarray]:
    """Para cada columna (u−1)·N + x, el índice δ de cada variable."""
    columns = np.arange(1, net.M * net.N + 1, dtype=np.int64)
    u = (columns - 1) // net.N + 1
    x = (columns - 1) % net.N + 1
    env = {}
    for var, digits in zip(net.control_vars, MixedRadix(net.control_radices).decode_array(u)):
        env[var.name] = digits
    for var, digits in zip(net.state_vars, MixedRadix(net.state_radices).decode_array(x)):
        env[var.name] = digits
    return env


def _lookup(op: Operator, args: list[np.ndarray]) -> np.ndarray:
    combined = np.zeros_like(args[0]) if args else np.zeros(1, dtype=np.int64)
    for values, d in zip(args, op.arg_domains):
        combined = combined * d.k + (values - 1)
    table = np.asarray(op.table.col_indices, dtype=np.int64)
    return table[combined]


def _evaluate(expr: Expr, k: int, env: dict, operators: dict, size: int) -> np.ndarray:
    if isinstance(expr, Var):
        return env[expr.name]
    if isinstance(expr, Const):
        return np.full(size, Domain(k).index_of(expr.value), dtype=np.int64)
    if isinstance(expr, DeltaConst):
        return np.full(size, expr.index, dtype=np.int64)
    if expr.op in operators:
        op = operators[expr.op]
    else:
        op = builtin_operator(expr.op, k)
    args = [_evaluate(a, d.k, env, operators, size) for a, d in zip(expr.args, op.arg_domains)]
    return _lookup(op, args)


def structure_matrix(expr: Expr, net: Network) -> LogicalMatrix:
    """
    Matriz de estructura de `expr`: M ⋉ u ⋉ x = valor de la expresión,
    forma out_k × (M·N).
    """
    k = check_expr(expr, None, net.scope, net.operators)
    env = _assignment(net)
    size = net.M * net.N
    values = _evaluate(expr, k, env, net.operators, size)
    return LogicalMatrix(k, tuple(int(v) for v in np.broadcast_to(values, (size,))))


def compile_network(net: Network, max_columns: Optional[int] = None) -> CompiledNetwork:
    """M_F = M_1 * M_2 * ... * M_n (Khatri-Rao de las matrices de cada ecuación)."""
    if max_columns is not None and net.M * net.N > max_columns:
        raise ValueError(
            f"La red tiene {net.M * net.N} columnas (N·M) y el límite es {max_columns}."
        )
    env = _assignment(net)
    size = net.M * net.N
    transition = None
    for var, expr in zip(net.state_vars, net.updates):
        values = _evaluate(expr, var.k, env, net.operators, size)
        component = LogicalMatrix(var.k, tuple(int(v) for v in np.broadcast_to(values, (size,))))
        transition = component if transition is None else khatri_rao(transition, component)
    logger.info("Red '%s' compilada: M_F ∈ L_{%d×%d}", net.name, transition.rows, transition.cols)
    return CompiledNetwork(net.name, net.state_vars, net.control_vars, transition)
