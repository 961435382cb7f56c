"""
LEDLEY — Soluciones antecedentes generalizadas
Matrices de verdad respecto de un conjunto admisible Ω, conjuntos
máximos y verificación de soluciones antecedentes/consecuentes
restringidas a un subconjunto W de estados.

La restricción "|_W" se hace con máscaras de columnas: nunca se borran
columnas, así los índices de columna siguen siendo índices de estado.
"""
from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

from app.services.stp_core import DimensionError, LogicalMatrix


# ─────────────────────────────────────────────
# Conjuntos de estados
# ─────────────────────────────────────────────

@dataclass(frozen=True)
class StateSet:
    """Subconjunto de {1..universe} (Ω, W, Ω(k), Θ, M...)."""
    universe: int
    members: frozenset

    def __post_init__(self):
        object.__setattr__(self, "members", frozenset(int(x) for x in self.members))
        bad = [x for x in self.members if not 1 <= x <= self.universe]
        if bad:
            raise ValueError(f"Estados fuera de 1..{self.universe}: {sorted(bad)}")

    @classmethod
    def of(cls, universe: int, members: Iterable[int] = ()) -> "StateSet":
        return cls(universe, frozenset(members))

    @classmethod
    def full(cls, universe: int) -> "StateSet":
        return cls(universe, frozenset(range(1, universe + 1)))

    @classmethod
    def empty(cls, universe: int) -> "StateSet":
        return cls(universe, frozenset())

    def _same_universe(self, other: "StateSet"):
        if self.universe != other.universe:
            raise DimensionError(f"Universos distintos: {self.universe} y {other.universe}.")

    def __or__(self, other: "StateSet") -> "StateSet":
        self._same_universe(other)
        return StateSet(self.universe, self.members | other.members)

    def __and__(self, other: "StateSet") -> "StateSet":
        self._same_universe(other)
        return StateSet(self.universe, self.members & other.members)

    def __sub__(self, other: "StateSet") -> "StateSet":
        self._same_universe(other)
        return StateSet(self.universe, self.members - other.members)

    def __le__(self, other: "StateSet") -> bool:
        self._same_universe(other)
        return self.members <= other.members

    def __contains__(self, x: int) -> bool:
        return x in self.members

    def __iter__(self) -> Iterator[int]:
        return iter(sorted(self.members))

    def __len__(self) -> int:
        return len(self.members)

    def __bool__(self) -> bool:
        return bool(self.members)

    @property
    def is_full(self) -> bool:
        return len(self.members) == self.universe

    def sorted(self) -> list[int]:
        return sorted(self.members)

    def mask(self) -> np.ndarray:
        """Máscara booleana de longitud universe (posición x−1)."""
        m = np.zeros(self.universe, dtype=bool)
        if self.members:
            m[np.asarray(sorted(self.members)) - 1] = True
        return m

    def __str__(self) -> str:
        return "{" + ",".join(str(x) for x in self) + "}"


# ─────────────────────────────────────────────
# Matriz de verdad y ley de realimentación
# ─────────────────────────────────────────────

@dataclass(frozen=True, eq=False)
class TruthMatrix:
    """T_Ω: M filas (controles) × N columnas (estados), T[u][x] = 1 ⇔ Col_{(u−1)N+x}(M_F) ∈ Ω."""
    matrix: np.ndarray
    admissible: StateSet

    @property
    def shape(self) -> tuple[int, int]:
        return self.matrix.shape

    def rows(self) -> list[list[int]]:
        return self.matrix.astype(int).tolist()


@dataclass(frozen=True)
class FeedbackLaw:
    """u = M_G x: un índice de control por estado."""
    matrix: LogicalMatrix

    @classmethod
    def from_controls(cls, n_controls: int, controls: Iterable[int]) -> "FeedbackLaw":
        return cls(LogicalMatrix(n_controls, tuple(controls)))

    def control_of(self, x: int) -> int:
        return self.matrix.column(x)

    @property
    def controls(self) -> tuple[int, ...]:
        return self.matrix.col_indices

    def __str__(self) -> str:
        return str(self.matrix)


def _split_transition(transition: LogicalMatrix) -> tuple[int, int, np.ndarray]:
    n_states = transition.rows
    if transition.cols % n_states:
        raise DimensionError(
            f"M_F tiene {transition.cols} columnas, que no es múltiplo de N={n_states}."
        )
    n_controls = transition.cols // n_states
    images = np.asarray(transition.col_indices, dtype=np.int64).reshape(n_controls, n_states)
    return n_states, n_controls, images


# ─────────────────────────────────────────────
# Operaciones
# ─────────────────────────────────────────────

def truth_matrix(transition: LogicalMatrix, omega: StateSet) -> TruthMatrix:
    n_states, _, images = _split_transition(transition)
    if omega.universe != n_states:
        raise DimensionError(f"Ω vive en un universo de {omega.universe} estados; M_F tiene N={n_states}.")
    hit = omega.mask()[images - 1]
    return TruthMatrix(hit.astype(np.int64), omega)


def maximum_set(t: TruthMatrix) -> StateSet:
    """Columnas no nulas de T: los estados desde los que Ω es alcanzable en un paso."""
    nonzero = np.flatnonzero(t.matrix.any(axis=0)) + 1
    return StateSet.of(t.shape[1], nonzero.tolist())


def candidate_controls(t: TruthMatrix, x: int) -> frozenset:
    if not 1 <= x <= t.shape[1]:
        raise ValueError(f"Estado {x} fuera de 1..{t.shape[1]}.")
    return frozenset((np.flatnonzero(t.matrix[:, x - 1]) + 1).tolist())


def _restricted(g: FeedbackLaw, t: TruthMatrix, w: StateSet) -> tuple[np.ndarray, np.ndarray]:
    dense = g.matrix.to_dense()
    if dense.shape != t.shape:
        raise DimensionError(f"M_G tiene forma {dense.shape} y T_Ω {t.shape}.")
    if w.universe != t.shape[1]:
        raise DimensionError(f"W vive en {w.universe} estados; T_Ω tiene {t.shape[1]} columnas.")
    mask = w.mask()
    return dense[:, mask], t.matrix[:, mask]


def is_subset_antecedence(g: FeedbackLaw, t: TruthMatrix, w: StateSet) -> bool:
    """M_G|_W ≤ T_Ω|_W."""
    g_w, t_w = _restricted(g, t, w)
    return bool(np.all(g_w <= t_w))


def is_subset_consequence(g: FeedbackLaw, t: TruthMatrix, w: StateSet) -> bool:
    """T_Ω|_W ≤ M_G|_W."""
    g_w, t_w = _restricted(g, t, w)
    return bool(np.all(t_w <= g_w))
