"""
Documentos JSON que LEDLEY lee y escribe.
Todo pasa por pydantic: model_dump_json / model_validate_json.
"""
from typing import Literal, Optional, Union

from pydantic import BaseModel, Field, model_validator


class VariableOut(BaseModel):
    name: str
    k: int = Field(ge=2)


class Radices(BaseModel):
    states: list[int]
    controls: list[int]


class CompiledNetworkOut(BaseModel):
    """Exportación de la forma compilada; se puede volver a ingerir."""
    name: str
    n: int
    m: int
    N: int
    M: int
    radices: Radices
    state_vars: list[VariableOut]
    control_vars: list[VariableOut]
    M_F: list[int]


class StabilizationReport(BaseModel):
    network: str
    target: list[str]                       # forma canónica: tuplas de valores
    target_indices: list[int]
    solvable: bool
    reason: Optional[str] = None            # NotFixedPoint | Unreachable | EmptyCore
    uncovered: Optional[list[int]] = None
    layers: list[list[int]]
    theta: Optional[list[int]] = None
    core_W0: Optional[list[int]] = None
    count: str = "0"                        # decimal arbitrario
    candidates: Optional[list[list[int]]] = None
    selected_law: Optional[list[int]] = None
    marginals: Optional[list[list[int]]] = None
    feedback_formulas: Optional[dict[str, str]] = None
    M_c: Optional[list[int]] = None
    convergence_time: Optional[Union[int, Literal["diverges"]]] = None
    attractor: Optional[list[int]] = None
    per_state_reach_time: Optional[list[Optional[int]]] = None
    enumerated: Optional[list[list[int]]] = None


class LayerViolationOut(BaseModel):
    state: int
    layer: int
    control: int
    allowed: list[int]


class OptimalityMismatchOut(BaseModel):
    state: int
    hit_time: Optional[int]
    bfs_distance: Optional[int]


class VerificationReportOut(BaseModel):
    network: str
    law: list[int]
    passed: bool
    reason: Optional[str] = None
    violations: list[LayerViolationOut] = []
    converged: bool = False
    M_c: Optional[list[int]] = None
    convergence_time: Optional[Union[int, Literal["diverges"]]] = None
    mismatches: list[OptimalityMismatchOut] = []


class RunConfig(BaseModel):
    """Argumentos ya interpretados de un subcomando."""
    subcommand: Literal["compile", "stabilize", "verify", "graph"]
    input: str
    point: Optional[str] = None
    index: Optional[int] = None
    set: Optional[str] = None
    law: Optional[str] = None
    report: Optional[str] = None
    enumerate: Optional[int] = None
    policy: Literal["smallest", "largest"] = "smallest"
    dot: Optional[str] = None
    json_out: Optional[str] = None
    out: Optional[str] = None

    @classmethod
    def from_args(cls, subcommand: str, args) -> "RunConfig":
        values = {"set": getattr(args, "set_spec", None)}
        for name in cls.model_fields:
            if name not in ("subcommand", "set") and hasattr(args, name):
                values[name] = getattr(args, name)
        return cls(subcommand=subcommand, **values)

    @model_validator(mode="after")
    def check_target(self):
        given = sum(v is not None for v in (self.point, self.index, self.set))
        if self.subcommand in ("stabilize", "verify") and given != 1:
            raise ValueError("Indica exactamente un destino: --point, --index o --set.")
        if given > 1:
            raise ValueError("Solo se admite una forma de destino.")
        if self.subcommand == "verify" and self.law is None:
            raise ValueError("verify necesita --law.")
        if self.subcommand == "graph":
            if (self.law is None) == (self.report is None):
                raise ValueError("graph necesita exactamente una fuente: --law o --report.")
            if self.law is not None and given == 0:
                raise ValueError("--law necesita un destino: --point, --index o --set.")
            if self.report is not None and given:
                raise ValueError("--report ya fija el destino; no se admite --point, --index ni --set.")
        if self.enumerate is not None and self.enumerate <= 0:
            raise ValueError("--enumerate necesita un límite positivo.")
        return self
