"""
LEDLEY — Verificación de una ley de realimentación dada
Comprueba las desigualdades por capa M_G|_{Ω(i)} ≤ T|_{Ω(i)}, la
convergencia del lazo cerrado y la optimalidad frente al oráculo BFS.
"""
import logging
from dataclasses import dataclass, field
from typing import Optional

from app.services.ledley_solver import FeedbackLaw, candidate_controls, is_subset_antecedence
from app.services.stabilizer_synth import (
    ClosedLoop,
    TargetSpec,
    bfs_oracle,
    closed_loop,
    stabilize,
)
from app.services.stp_core import LogicalMatrix

logger = logging.getLogger(__name__)


@dataclass
class LayerViolation:
    state: int
    layer: int
    control: int
    allowed: list[int]


@dataclass
class OptimalityMismatch:
    state: int
    hit_time: Optional[int]
    bfs_distance: Optional[int]


@dataclass
class VerificationReport:
    passed: bool
    reason: Optional[str] = None
    violations: list[LayerViolation] = field(default_factory=list)
    converged: bool = False
    loop: Optional[ClosedLoop] = None
    mismatches: list[OptimalityMismatch] = field(default_factory=list)


def verify_law(transition: LogicalMatrix, law: FeedbackLaw, target: TargetSpec) -> VerificationReport:
    result = stabilize(transition, target)
    if not result.solvable:
        return VerificationReport(passed=False, reason=result.unsolvable.reason.value)

    decomposition = result.decomposition
    violations = []
    for i, layer in enumerate(decomposition.layers):
        t = decomposition.truth_matrices[max(i - 1, 0)]
        if is_subset_antecedence(law, t, layer):
            continue
        for x in layer:
            allowed = candidate_controls(t, x)
            if law.control_of(x) not in allowed:
                violations.append(LayerViolation(x, i, law.control_of(x), sorted(allowed)))

    goal = target.states if target.is_point else result.core
    loop = closed_loop(transition, law, goal)
    distances = bfs_oracle(transition, target)
    mismatches = [
        OptimalityMismatch(x, loop.hit_times[x], distances[x])
        for x in sorted(distances)
        if loop.hit_times[x] != distances[x]
    ]
    converged = loop.convergence_time is not None
    passed = not violations and converged and not mismatches
    logger.info(
        "Ley %s: %s (%d violaciones, %d desajustes de tiempo)",
        law, "válida" if passed else "inválida", len(violations), len(mismatches),
    )
    return VerificationReport(passed, None, violations, converged, loop, mismatches)
