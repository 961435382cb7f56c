"""
LEDLEY — Grafo de transición del lazo cerrado en formato DOT.
Un nodo por estado, una arista x → M_c(x); los estados del atractor
van con doble círculo. Salida determinista (nodos y aristas ordenados).
"""
from typing import Callable, Optional

from app.services.ledley_solver import StateSet
from app.services.stp_core import LogicalMatrix


def _quote(s: str) -> str:
    return '"{}"'.format(s.replace('"', r'\"'))


def to_dot(
    mc: LogicalMatrix,
    attractor: Optional[StateSet] = None,
    label_of: Optional[Callable[[int], str]] = None,
    name: str = "closed_loop",
) -> str:
    n_states = mc.rows
    lines = [f"digraph {_quote(name)} {{", "\trankdir=LR;", "\tnode [shape=ellipse];"]
    for x in range(1, n_states + 1):
        label = f"δ{n_states}^{x}"
        if label_of is not None:
            label += "\\n" + label_of(x)
        shape = ", shape=doublecircle" if attractor is not None and x in attractor else ""
        lines.append(f"\t{_quote(str(x))} [label={_quote(label)}{shape}];")
    for x in range(1, n_states + 1):
        lines.append(f"\t{_quote(str(x))} -> {_quote(str(mc.column(x)))};")
    lines.append("}")
    return "\n".join(lines) + "\n"
