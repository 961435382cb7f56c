"""
LEDLEY — Síntesis de estabilizadores
Estabilización a un punto y a un conjunto mediante capas Ω(0), Ω(1), ...
construidas con matrices de verdad. La familia resultante codifica a la vez
TODOS los estabilizadores de realimentación de estado de tiempo óptimo.

Incluye el lazo cerrado M_c = M_F M_G PR_N y un oráculo BFS independiente
(búsqueda hacia atrás sobre la relación de transición controlada).
"""
import itertools
import logging
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from math import prod
from typing import Iterator, Optional

from app.services.ledley_solver import (
    FeedbackLaw,
    StateSet,
    TruthMatrix,
    candidate_controls,
    maximum_set,
    truth_matrix,
)
from app.services.logic_model import MixedRadix
from app.services.stp_core import DimensionError, LogicalMatrix, compose

logger = logging.getLogger(__name__)


# ─────────────────────────────────────────────
# Tipos
# ─────────────────────────────────────────────

class UnsolvableReason(str, Enum):
    NOT_FIXED_POINT = "NotFixedPoint"
    UNREACHABLE = "Unreachable"
    EMPTY_CORE = "EmptyCore"


class SelectionPolicy(str, Enum):
    SMALLEST = "smallest"
    LARGEST = "largest"


@dataclass(frozen=True)
class TargetSpec:
    """Punto o conjunto destino, siempre como StateSet no vacío."""
    states: StateSet
    is_point: bool

    @classmethod
    def point(cls, x: int, universe: int) -> "TargetSpec":
        if not 1 <= x <= universe:
            raise ValueError(f"El estado destino {x} está fuera de 1..{universe}.")
        return cls(StateSet.of(universe, [x]), True)

    @classmethod
    def of_set(cls, states: StateSet) -> "TargetSpec":
        if not states:
            raise ValueError("El conjunto destino está vacío.")
        return cls(states, False)

    @property
    def index(self) -> int:
        return next(iter(self.states))


@dataclass
class LayerDecomposition:
    layers: list[StateSet]                  # Ω(0), Ω(1), ..., Ω(k*)
    reached: list[StateSet]                 # W_0, W_1, ...
    truth_matrices: list[TruthMatrix]       # T_{Ω(0)}, ..., T_{Ω(k*−1)} (al menos T_{Ω(0)})
    solvable: bool

    @property
    def k_star(self) -> int:
        return len(self.layers) - 1

    @property
    def covered(self) -> StateSet:
        acc = self.layers[0]
        for layer in self.layers[1:]:
            acc = acc | layer
        return acc


@dataclass(frozen=True)
class Unsolvable:
    reason: UnsolvableReason
    uncovered: StateSet


@dataclass
class StabilizerFamily:
    """Conjunto de controles admisibles por estado; el producto cartesiano son las leyes."""
    n_controls: int
    candidates: dict[int, frozenset]        # estado → controles admisibles
    layer_of: dict[int, int]                # estado → capa

    @property
    def universe(self) -> int:
        return len(self.candidates)

    def count(self) -> int:
        return prod(len(c) for c in self.candidates.values())

    def contains(self, law: FeedbackLaw) -> bool:
        if law.matrix.shape != (self.n_controls, self.universe):
            return False
        return all(law.control_of(x) in self.candidates[x] for x in self.candidates)


@dataclass
class SynthesisResult:
    target: TargetSpec
    decomposition: LayerDecomposition
    family: Optional[StabilizerFamily] = None
    unsolvable: Optional[Unsolvable] = None
    theta: Optional[StateSet] = None        # solo conjuntos: conjunto máximo de T_M
    core: Optional[StateSet] = None         # solo conjuntos: W_0

    @property
    def solvable(self) -> bool:
        return self.family is not None


@dataclass
class ClosedLoop:
    matrix: LogicalMatrix                   # M_c ∈ L_{N×N}
    convergence_time: Optional[int]         # None = no converge
    attractor: StateSet
    hit_times: dict[int, Optional[int]] = field(default_factory=dict)


# ─────────────────────────────────────────────
# Utilidades
# ─────────────────────────────────────────────

def _dimensions(transition: LogicalMatrix) -> tuple[int, int]:
    n_states = transition.rows
    if transition.cols % n_states:
        raise DimensionError(f"M_F ({transition.shape}) no tiene M·N columnas.")
    return n_states, transition.cols // n_states


def _image(transition: LogicalMatrix, n_states: int, u: int, x: int) -> int:
    return transition.col_indices[(u - 1) * n_states + x - 1]


def is_control_fixed_point(transition: LogicalMatrix, x: int) -> bool:
    """∃u: Col_{(u−1)N+x}(M_F) = x."""
    n_states, n_controls = _dimensions(transition)
    if not 1 <= x <= n_states:
        raise ValueError(f"Estado {x} fuera de 1..{n_states}.")
    return any(_image(transition, n_states, u, x) == x for u in range(1, n_controls + 1))


def largest_invariant_subset(transition: LogicalMatrix, target: StateSet) -> tuple[StateSet, StateSet]:
    """
    Devuelve (Θ, W_0): Θ es el conjunto máximo de T_M y W_0 el mayor
    subconjunto control-invariante de M, refinando W ← W ∩ maximum_set(T_W).
    """
    theta = maximum_set(truth_matrix(transition, target))
    core = target & theta
    while core:
        refined = core & maximum_set(truth_matrix(transition, core))
        if refined == core:
            break
        core = refined
    return theta, core


# ─────────────────────────────────────────────
# Capas Ω(k)
# ─────────────────────────────────────────────

def _grow_layers(transition: LogicalMatrix, base: StateSet) -> tuple[LayerDecomposition, Optional[Unsolvable]]:
    n_states = transition.rows
    t_base = truth_matrix(transition, base)
    layers = [base]
    reached = [base, maximum_set(t_base)]
    truths = [t_base]
    covered = base

    while True:
        # primero la cobertura completa, después el fallo por Ω(k) = ∅
        if covered.is_full:
            logger.debug("Cobertura completa con k*=%d", len(layers) - 1)
            return LayerDecomposition(layers, reached, truths, True), None
        omega_k = reached[-1] - covered
        if not omega_k:
            uncovered = StateSet.full(n_states) - covered
            logger.debug("Ω(%d) = ∅; sin cubrir: %s", len(layers), uncovered)
            return (
                LayerDecomposition(layers, reached, truths, False),
                Unsolvable(UnsolvableReason.UNREACHABLE, uncovered),
            )
        layers.append(omega_k)
        covered = covered | omega_k
        logger.debug("Ω(%d) = %s", len(layers) - 1, omega_k)
        if not covered.is_full:
            t_k = truth_matrix(transition, omega_k)
            truths.append(t_k)
            reached.append(maximum_set(t_k))


def _family(decomposition: LayerDecomposition, n_controls: int) -> StabilizerFamily:
    candidates, layer_of = {}, {}
    for i, layer in enumerate(decomposition.layers):
        # Ω(0) y Ω(1) leen T_{Ω(0)}; Ω(i) con i ≥ 2 lee T_{Ω(i−1)}
        t = decomposition.truth_matrices[max(i - 1, 0)]
        for x in layer:
            candidates[x] = candidate_controls(t, x)
            layer_of[x] = i
    return StabilizerFamily(
        n_controls,
        dict(sorted(candidates.items())),
        dict(sorted(layer_of.items())),
    )


def point_stabilize(transition: LogicalMatrix, target: int) -> SynthesisResult:
    n_states, n_controls = _dimensions(transition)
    spec = TargetSpec.point(target, n_states)
    base = spec.states
    t_base = truth_matrix(transition, base)
    if target not in maximum_set(t_base):
        logger.info("El destino %d no es punto fijo de control", target)
        decomposition = LayerDecomposition([base], [base, maximum_set(t_base)], [t_base], False)
        return SynthesisResult(
            spec, decomposition,
            unsolvable=Unsolvable(UnsolvableReason.NOT_FIXED_POINT, StateSet.full(n_states) - base),
        )
    decomposition, failure = _grow_layers(transition, base)
    return _finish(spec, decomposition, failure, n_controls)


def set_stabilize(transition: LogicalMatrix, target: StateSet) -> SynthesisResult:
    n_states, n_controls = _dimensions(transition)
    spec = TargetSpec.of_set(target)
    if target.universe != n_states:
        raise DimensionError(f"El conjunto destino vive en {target.universe} estados; N={n_states}.")
    theta, core = largest_invariant_subset(transition, target)
    if not core:
        logger.info("M ∩ Θ no contiene ningún conjunto control-invariante")
        t_target = truth_matrix(transition, target)
        decomposition = LayerDecomposition([core], [core], [t_target], False)
        return SynthesisResult(
            spec, decomposition,
            unsolvable=Unsolvable(UnsolvableReason.EMPTY_CORE, StateSet.full(n_states)),
            theta=theta, core=core,
        )
    decomposition, failure = _grow_layers(transition, core)
    result = _finish(spec, decomposition, failure, n_controls)
    result.theta, result.core = theta, core
    return result


def stabilize(transition: LogicalMatrix, target: TargetSpec) -> SynthesisResult:
    if target.is_point:
        return point_stabilize(transition, target.index)
    return set_stabilize(transition, target.states)


def _finish(spec, decomposition, failure, n_controls) -> SynthesisResult:
    if failure is not None:
        logger.info("Sin solución: %s", failure.reason.value)
        return SynthesisResult(spec, decomposition, unsolvable=failure)
    family = _family(decomposition, n_controls)
    logger.info("Estabilizable: k*=%d, %d estabilizadores", decomposition.k_star, family.count())
    return SynthesisResult(spec, decomposition, family=family)


# ─────────────────────────────────────────────
# Familia de estabilizadores
# ─────────────────────────────────────────────

def count_stabilizers(family: StabilizerFamily) -> int:
    return family.count()


def select_stabilizer(family: StabilizerFamily, policy: SelectionPolicy = SelectionPolicy.SMALLEST) -> FeedbackLaw:
    pick = min if SelectionPolicy(policy) is SelectionPolicy.SMALLEST else max
    return FeedbackLaw.from_controls(
        family.n_controls, [pick(family.candidates[x]) for x in family.candidates]
    )


def enumerate_stabilizers(family: StabilizerFamily, limit: int) -> Iterator[FeedbackLaw]:
    """Producto cartesiano en orden lexicográfico (estado 1 más significativo), truncado en `limit`."""
    if limit <= 0:
        raise ValueError(f"El límite de enumeración debe ser positivo (limit={limit}).")
    choices = [sorted(family.candidates[x]) for x in family.candidates]
    for controls in itertools.islice(itertools.product(*choices), limit):
        yield FeedbackLaw.from_controls(family.n_controls, controls)


def control_marginals(law: FeedbackLaw, control_radices: tuple[int, ...]) -> list[LogicalMatrix]:
    """M_G^j = (1ᵀ ⊗ I_{k_j} ⊗ 1ᵀ) M_G: la componente j del control."""
    codec = MixedRadix(tuple(control_radices))
    if codec.size != law.matrix.rows:
        raise DimensionError(
            f"Las bases {tuple(control_radices)} dan {codec.size} controles; M_G tiene {law.matrix.rows} filas."
        )
    digits = [codec.decode(u) for u in law.controls]
    return [
        LogicalMatrix(k, tuple(d[j] for d in digits))
        for j, k in enumerate(control_radices)
    ]


# ─────────────────────────────────────────────
# Lazo cerrado
# ─────────────────────────────────────────────

def closed_loop_matrix(transition: LogicalMatrix, law: FeedbackLaw) -> LogicalMatrix:
    """M_c = M_F M_G PR_N: la columna x es Col_{(g(x)−1)N+x}(M_F)."""
    n_states, n_controls = _dimensions(transition)
    if law.matrix.shape != (n_controls, n_states):
        raise DimensionError(f"M_G tiene forma {law.matrix.shape}; se esperaba ({n_controls}, {n_states}).")
    return LogicalMatrix(
        n_states,
        tuple(_image(transition, n_states, law.control_of(x), x) for x in range(1, n_states + 1)),
    )


def attractor_states(mc: LogicalMatrix) -> StateSet:
    """Estados en ciclos: la imagen de M_c^N."""
    image = set(range(1, mc.rows + 1))
    for _ in range(mc.rows):
        image = {mc.column(x) for x in image}
    return StateSet.of(mc.rows, image)


def hit_times(mc: LogicalMatrix, target: StateSet) -> dict[int, Optional[int]]:
    """Primer t ≤ N con x(t) ∈ target, para cada estado inicial."""
    times = {}
    for x0 in range(1, mc.rows + 1):
        x, t = x0, 0
        while x not in target and t < mc.rows:
            x, t = mc.column(x), t + 1
        times[x0] = t if x in target else None
    return times


def convergence_time(mc: LogicalMatrix, target: StateSet) -> Optional[int]:
    """Menor t ≤ N con todas las columnas de M_c^t en target y target cerrado bajo M_c."""
    if any(mc.column(x) not in target for x in target):
        return None
    power = LogicalMatrix.identity(mc.rows)
    for t in range(mc.rows + 1):
        if all(i in target for i in power.col_indices):
            return t
        power = compose(mc, power)
    return None


def closed_loop(transition: LogicalMatrix, law: FeedbackLaw, target: Optional[StateSet] = None) -> ClosedLoop:
    mc = closed_loop_matrix(transition, law)
    attractor = attractor_states(mc)
    goal = target if target is not None else attractor
    return ClosedLoop(mc, convergence_time(mc, goal), attractor, hit_times(mc, goal))


# ─────────────────────────────────────────────
# Oráculo BFS
# ─────────────────────────────────────────────

def _successors(transition: LogicalMatrix) -> dict[int, set[int]]:
    n_states, n_controls = _dimensions(transition)
    return {
        x: {_image(transition, n_states, u, x) for u in range(1, n_controls + 1)}
        for x in range(1, n_states + 1)
    }


def invariant_core(transition: LogicalMatrix, target: StateSet) -> StateSet:
    """Mayor subconjunto control-invariante por poda: quita estados sin sucesor dentro."""
    succ = _successors(transition)
    core = set(target)
    changed = True
    while changed:
        changed = False
        for x in sorted(core):
            if not succ[x] & core:
                core.discard(x)
                changed = True
    return StateSet.of(target.universe, core)


def bfs_oracle(transition: LogicalMatrix, target: TargetSpec) -> dict[int, Optional[int]]:
    """Tiempo mínimo de alcance controlado a target (None = ∞)."""
    n_states, _ = _dimensions(transition)
    start = target.states if target.is_point else invariant_core(transition, target.states)
    preds: dict[int, set[int]] = {y: set() for y in range(1, n_states + 1)}
    for x, ys in _successors(transition).items():
        for y in ys:
            preds[y].add(x)

    dist: dict[int, Optional[int]] = {x: None for x in range(1, n_states + 1)}
    queue = deque()
    for x in start:
        dist[x] = 0
        queue.append(x)
    while queue:
        y = queue.popleft()
        for x in sorted(preds[y]):
            if dist[x] is None:
                dist[x] = dist[y] + 1
                queue.append(x)
    return dist
