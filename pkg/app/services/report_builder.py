"""
LEDLEY — Ensamblado de los informes JSON
Traduce los resultados de síntesis y verificación a los modelos pydantic
de app/models/schemas.py.
"""
import logging
from typing import Optional

from app.models.schemas import (
    CompiledNetworkOut,
    LayerViolationOut,
    OptimalityMismatchOut,
    Radices,
    StabilizationReport,
    VariableOut,
    VerificationReportOut,
)
from app.services.dnf_export import to_dnf
from app.services.law_verifier import VerificationReport
from app.services.ledley_solver import FeedbackLaw, StateSet
from app.services.logic_model import CompiledNetwork, Domain, Variable
from app.services.stabilizer_synth import (
    SelectionPolicy,
    SynthesisResult,
    closed_loop,
    control_marginals,
    enumerate_stabilizers,
    select_stabilizer,
)
from app.services.stp_core import LogicalMatrix

logger = logging.getLogger(__name__)


def _convergence(value: Optional[int]):
    return "diverges" if value is None else value


# ─────────────────────────────────────────────
# Red compilada
# ─────────────────────────────────────────────

def export_network(net: CompiledNetwork) -> CompiledNetworkOut:
    return CompiledNetworkOut(
        name=net.name,
        n=net.n,
        m=net.m,
        N=net.N,
        M=net.M,
        radices=Radices(states=list(net.state_radices), controls=list(net.control_radices)),
        state_vars=[VariableOut(name=v.name, k=v.k) for v in net.state_vars],
        control_vars=[VariableOut(name=v.name, k=v.k) for v in net.control_vars],
        M_F=list(net.transition.col_indices),
    )


def import_network(doc: CompiledNetworkOut) -> CompiledNetwork:
    def variables(items):
        return tuple(Variable(v.name, Domain(v.k)) for v in items)

    return CompiledNetwork(
        name=doc.name,
        state_vars=variables(doc.state_vars),
        control_vars=variables(doc.control_vars),
        transition=LogicalMatrix(doc.N, tuple(doc.M_F)),
    )


# ─────────────────────────────────────────────
# Informe de estabilización
# ─────────────────────────────────────────────

def build_report(
    net: CompiledNetwork,
    result: SynthesisResult,
    policy: SelectionPolicy = SelectionPolicy.SMALLEST,
    enumerate_limit: Optional[int] = None,
) -> StabilizationReport:
    target = result.target.states
    report = StabilizationReport(
        network=net.name,
        target=[net.state_label(x) for x in target],
        target_indices=target.sorted(),
        solvable=result.solvable,
        layers=[layer.sorted() for layer in result.decomposition.layers],
        theta=result.theta.sorted() if result.theta is not None else None,
        core_W0=result.core.sorted() if result.core is not None else None,
    )
    if not result.solvable:
        report.reason = result.unsolvable.reason.value
        report.uncovered = result.unsolvable.uncovered.sorted()
        return report

    family = result.family
    law = select_stabilizer(family, policy)
    goal = target if result.target.is_point else result.core
    loop = closed_loop(net.transition, law, goal)
    marginals = control_marginals(law, net.control_radices)

    report.count = str(family.count())
    report.candidates = [sorted(family.candidates[x]) for x in family.candidates]
    report.selected_law = list(law.controls)
    report.marginals = [list(mg.col_indices) for mg in marginals]
    report.M_c = list(loop.matrix.col_indices)
    report.convergence_time = _convergence(loop.convergence_time)
    report.attractor = loop.attractor.sorted()
    report.per_state_reach_time = [loop.hit_times[x] for x in sorted(loop.hit_times)]
    if net.is_boolean and net.m:
        report.feedback_formulas = {
            var.name: to_dnf(mg, net.state_vars, merge=True)
            for var, mg in zip(net.control_vars, marginals)
        }
    if enumerate_limit is not None:
        report.enumerated = [list(g.controls) for g in enumerate_stabilizers(family, enumerate_limit)]
        if family.count() > enumerate_limit:
            logger.info("Enumeración truncada en %d de %d leyes", enumerate_limit, family.count())
    return report


def report_closed_loop(report: StabilizationReport, universe: int) -> tuple[LogicalMatrix, StateSet]:
    """M_c y atractor guardados en un informe (para `graph`)."""
    if report.M_c is None:
        raise ValueError("El informe no contiene lazo cerrado (el problema no tenía solución).")
    return LogicalMatrix(universe, tuple(report.M_c)), StateSet.of(universe, report.attractor or [])


# ─────────────────────────────────────────────
# Informe de verificación
# ─────────────────────────────────────────────

def build_verification(net: CompiledNetwork, law: FeedbackLaw, outcome: VerificationReport) -> VerificationReportOut:
    loop = outcome.loop
    return VerificationReportOut(
        network=net.name,
        law=list(law.controls),
        passed=outcome.passed,
        reason=outcome.reason,
        violations=[LayerViolationOut(**vars(v)) for v in outcome.violations],
        converged=outcome.converged,
        M_c=list(loop.matrix.col_indices) if loop else None,
        convergence_time=_convergence(loop.convergence_time) if loop else None,
        mismatches=[OptimalityMismatchOut(**vars(m)) for m in outcome.mismatches],
    )
