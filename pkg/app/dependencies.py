"""
Carga de entradas compartida por los subcomandos: redes (DSL o JSON
compilado), destinos, leyes de realimentación y escritura de salidas.
"""
import logging
import re
from fractions import Fraction
from pathlib import Path
from typing import Optional

from pydantic import ValidationError

from app.config import settings
from app.models.schemas import CompiledNetworkOut
from app.services.ledley_solver import FeedbackLaw, StateSet
from app.services.logic_model import CompiledNetwork, Network, compile_network, parse_network
from app.services.report_builder import import_network
from app.services.stabilizer_synth import TargetSpec

logger = logging.getLogger(__name__)


class TargetError(ValueError):
    """Destino mal formado o fuera del espacio de estados."""


_TUPLE = re.compile(r"\(([^()]*)\)")


def load_network(path: str) -> tuple[Optional[Network], CompiledNetwork]:
    """
    Lee `path` como DSL o como JSON compilado (sufijo .json o texto que
    empieza por '{'). Con JSON no hay Network fuente: se devuelve None.
    """
    text = Path(path).read_text(encoding="utf-8")
    if path.endswith(".json") or text.lstrip().startswith("{"):
        try:
            doc = CompiledNetworkOut.model_validate_json(text)
        except ValidationError as e:
            raise ValueError(f"JSON compilado inválido en {path}: {e}") from e
        if doc.N * doc.M > settings.MAX_STATES:
            raise ValueError(
                f"La red tiene {doc.N * doc.M} columnas (N·M) y el límite es {settings.MAX_STATES}."
            )
        logger.info("Red compilada '%s' cargada desde JSON", doc.name)
        return None, import_network(doc)
    net = parse_network(text)
    return net, compile_network(net, max_columns=settings.MAX_STATES)


# ─────────────────────────────────────────────
# Destinos
# ─────────────────────────────────────────────

def _parse_tuple(net: CompiledNetwork, body: str) -> int:
    try:
        values = [Fraction(v.strip()) for v in body.split(",") if v.strip()]
        return net.state_to_index(values)
    except (ValueError, ZeroDivisionError) as e:
        raise TargetError(f"Estado «({body})» inválido: {e}") from e


def _parse_index(net: CompiledNetwork, token: str) -> int:
    try:
        idx = int(token)
    except ValueError as e:
        raise TargetError(f"Índice de estado inválido «{token}».") from e
    if not 1 <= idx <= net.N:
        raise TargetError(f"El índice {idx} está fuera de 1..{net.N}.")
    return idx


def _parse_entry(net: CompiledNetwork, entry: str) -> int:
    entry = entry.strip()
    match = _TUPLE.fullmatch(entry)
    if match:
        return _parse_tuple(net, match.group(1))
    if "," in entry:
        return _parse_tuple(net, entry)
    return _parse_index(net, entry)


def _split_entries(body: str) -> list[str]:
    """Parte en las comas que quedan fuera de paréntesis."""
    entries, depth, start = [], 0, 0
    for i, ch in enumerate(body):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "," and depth == 0:
            entries.append(body[start:i])
            start = i + 1
        if not 0 <= depth <= 1:
            raise TargetError(f"Paréntesis desequilibrados en «{{{body}}}».")
    if depth:
        raise TargetError(f"Paréntesis sin cerrar en «{{{body}}}».")
    entries.append(body[start:])
    return [e.strip() for e in entries if e.strip()]


def _parse_set(net: CompiledNetwork, spec: str) -> StateSet:
    spec = spec.strip()
    if spec.startswith("{"):
        if not spec.endswith("}"):
            raise TargetError(f"Conjunto sin cerrar: «{spec}».")
        members = [_parse_entry(net, entry) for entry in _split_entries(spec[1:-1])]
    else:
        path = Path(spec)
        if not path.is_file():
            raise TargetError(f"No existe el fichero de conjunto {spec}.")
        members = []
        for raw in path.read_text(encoding="utf-8").splitlines():
            line = raw.split("#", 1)[0].strip()
            if line:
                members.append(_parse_entry(net, line))
    if not members:
        raise TargetError("El conjunto destino está vacío.")
    return StateSet.of(net.N, members)


def parse_target(
    net: CompiledNetwork,
    point: Optional[str] = None,
    index: Optional[int] = None,
    set_spec: Optional[str] = None,
) -> TargetSpec:
    given = [v for v in (point, index, set_spec) if v is not None]
    if len(given) != 1:
        raise TargetError("Indica exactamente un destino: --point, --index o --set.")
    if point is not None:
        body = point.strip()
        match = _TUPLE.fullmatch(body)
        return TargetSpec.point(_parse_tuple(net, match.group(1) if match else body), net.N)
    if index is not None:
        return TargetSpec.point(_parse_index(net, str(index)), net.N)
    return TargetSpec.of_set(_parse_set(net, set_spec))


# ─────────────────────────────────────────────
# Leyes y salidas
# ─────────────────────────────────────────────

def load_law(path: str, net: CompiledNetwork) -> FeedbackLaw:
    """N índices de control (1..M) separados por espacios: g(1) ... g(N)."""
    text = Path(path).read_text(encoding="utf-8")
    tokens = [t for line in text.splitlines() for t in line.split("#", 1)[0].split()]
    try:
        controls = [int(t) for t in tokens]
    except ValueError as e:
        raise TargetError(f"La ley en {path} solo puede contener enteros.") from e
    if len(controls) != net.N:
        raise TargetError(f"La ley tiene {len(controls)} entradas; la red tiene N={net.N} estados.")
    bad = [u for u in controls if not 1 <= u <= net.M]
    if bad:
        raise TargetError(f"Controles fuera de 1..{net.M}: {bad}.")
    return FeedbackLaw.from_controls(net.M, controls)


def emit(text: str, path: Optional[str] = None):
    if path is None:
        print(text, end="" if text.endswith("\n") else "\n")
        return
    Path(path).write_text(text if text.endswith("\n") else text + "\n", encoding="utf-8")
    logger.info("Escrito %s", path)
