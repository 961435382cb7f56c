"""
LEDLEY — Fórmulas de realimentación
Convierte una marginal M_G^j (matriz lógica 2×N sobre estados booleanos)
en una fórmula DNF escrita en el mismo DSL de las redes, de modo que se
puede volver a compilar con structure_matrix.
"""
from typing import Optional, Sequence

from app.services.logic_model import MixedRadix, Variable
from app.services.stp_core import LogicalMatrix

# Un cubo es una tupla por variable: 1 (X), 2 (¬X) o None (no aparece)
Cube = tuple[Optional[int], ...]


def _merge_pair(a: Cube, b: Cube) -> Optional[Cube]:
    diff = [i for i, (p, q) in enumerate(zip(a, b)) if p != q]
    if len(diff) != 1 or a[diff[0]] is None or b[diff[0]] is None:
        return None
    i = diff[0]
    return a[:i] + (None,) + a[i + 1:]


def _prime_implicants(minterms: list[Cube]) -> list[Cube]:
    current, primes = set(minterms), set()
    while current:
        merged, used = set(), set()
        items = sorted(current, key=str)
        for i, a in enumerate(items):
            for b in items[i + 1:]:
                cube = _merge_pair(a, b)
                if cube is not None:
                    merged.add(cube)
                    used.update((a, b))
        primes |= current - used
        current = merged
    return sorted(primes, key=str)


def _covers(cube: Cube, minterm: Cube) -> bool:
    return all(c is None or c == m for c, m in zip(cube, minterm))


def _greedy_cover(primes: list[Cube], minterms: list[Cube]) -> list[Cube]:
    chosen, pending = [], set(minterms)
    # cubos más grandes primero
    for cube in sorted(primes, key=lambda c: (sum(v is not None for v in c), str(c))):
        hit = {m for m in pending if _covers(cube, m)}
        if hit:
            chosen.append(cube)
            pending -= hit
    return chosen


def _render(cubes: list[Cube], names: Sequence[str]) -> str:
    if not cubes:
        return "0"
    terms = []
    for cube in cubes:
        literals = [name if v == 1 else f"!{name}" for name, v in zip(names, cube) if v is not None]
        if not literals:
            return "1"
        terms.append(" & ".join(literals))
    if len(terms) == 1:
        return terms[0]
    return " | ".join(f"({t})" if " & " in t else t for t in terms)


def to_dnf(marginal: LogicalMatrix, state_vars: Sequence[Variable], merge: bool = False) -> str:
    """
    DNF de la marginal: por defecto minterms canónicos de los estados con
    salida verdadera; con merge=True, implicantes primos y cobertura voraz.
    """
    if any(v.k != 2 for v in state_vars) or marginal.rows != 2:
        raise ValueError("Solo se extraen fórmulas de variables booleanas (k=2).")
    codec = MixedRadix(tuple(v.k for v in state_vars))
    if marginal.cols != codec.size:
        raise ValueError(f"La marginal tiene {marginal.cols} columnas; hay {codec.size} estados.")

    minterms = [codec.decode(x) for x in range(1, codec.size + 1) if marginal.column(x) == 1]
    names = [v.name for v in state_vars]
    if merge:
        return _render(_greedy_cover(_prime_implicants(minterms), minterms), names)
    if len(minterms) == codec.size:
        return "1"
    return _render(minterms, names)
