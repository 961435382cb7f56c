"""
LEDLEY — Núcleo matricial exacto
Producto semi-tensorial (STP), Kronecker, Khatri-Rao, matrices lógicas
y matriz reductora de potencia.

Todo es aritmética entera exacta: nunca hay punto flotante y un
desbordamiento de int64 es un error, no un wraparound.
Índices de columna 1-based, igual que la notación δ_n^i.
"""
import math
from dataclasses import dataclass
from typing import Iterable, Union

import numpy as np


# ─────────────────────────────────────────────
# Errores
# ─────────────────────────────────────────────

class DimensionError(ValueError):
    """Dimensiones incompatibles entre matrices."""


class StpOverflowError(OverflowError):
    """El resultado exacto no cabe en int64."""


INT64_MAX = int(np.iinfo(np.int64).max)
INT64_MIN = int(np.iinfo(np.int64).min)


# ─────────────────────────────────────────────
# Matriz lógica  δ_m[i1, ..., in]
# ─────────────────────────────────────────────

@dataclass(frozen=True)
class LogicalMatrix:
    """
    Matriz cuyas columnas son columnas de la identidad I_m.
    Se guarda solo el índice de cada columna: δ_m[i1, i2, ..., in].
    """
    rows: int
    col_indices: tuple[int, ...]

    def __post_init__(self):
        if self.rows < 1:
            raise DimensionError(f"Una matriz lógica necesita al menos una fila (rows={self.rows}).")
        object.__setattr__(self, "col_indices", tuple(int(i) for i in self.col_indices))
        for j, i in enumerate(self.col_indices, start=1):
            if not 1 <= i <= self.rows:
                raise DimensionError(
                    f"Columna {j}: índice {i} fuera de 1..{self.rows}."
                )

    @property
    def cols(self) -> int:
        return len(self.col_indices)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def column(self, j: int) -> int:
        """Índice δ de la columna j (1-based)."""
        return self.col_indices[j - 1]

    def to_dense(self) -> np.ndarray:
        dense = np.zeros((self.rows, self.cols), dtype=np.int64)
        if self.cols:
            dense[np.asarray(self.col_indices) - 1, np.arange(self.cols)] = 1
        return dense

    @classmethod
    def from_dense(cls, matrix) -> "LogicalMatrix":
        arr = np.asarray(matrix)
        if arr.ndim != 2:
            raise DimensionError(f"Se esperaba una matriz 2-D, llegó ndim={arr.ndim}.")
        ones = arr == 1
        if not (np.all((arr == 0) | ones) and np.all(ones.sum(axis=0) == 1)):
            raise DimensionError("La matriz no es lógica: cada columna debe tener exactamente un 1.")
        return cls(arr.shape[0], tuple(int(i) + 1 for i in ones.argmax(axis=0)))

    @classmethod
    def identity(cls, n: int) -> "LogicalMatrix":
        return cls(n, tuple(range(1, n + 1)))

    def __str__(self) -> str:
        return f"δ{self.rows}[{','.join(str(i) for i in self.col_indices)}]"


def delta(dim: int, index: int) -> LogicalMatrix:
    """Vector δ_dim^index como matriz lógica de una columna."""
    return LogicalMatrix(dim, (index,))


MatrixLike = Union[LogicalMatrix, np.ndarray, Iterable]


def as_dense(m: MatrixLike) -> np.ndarray:
    """Expande a matriz densa int64; las matrices lógicas se convierten en 0/1."""
    if isinstance(m, LogicalMatrix):
        return m.to_dense()
    arr = np.asarray(m)
    if arr.ndim != 2:
        raise DimensionError(f"Se esperaba una matriz 2-D, llegó ndim={arr.ndim}.")
    if arr.dtype == object or not np.issubdtype(arr.dtype, np.integer):
        if not all(float(v).is_integer() for v in arr.flat):
            raise DimensionError("Las entradas deben ser enteras.")
        if any(abs(int(v)) > INT64_MAX for v in arr.flat):
            raise StpOverflowError("Entrada fuera del rango int64.")
    return arr.astype(np.int64)


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


# ─────────────────────────────────────────────
# Productos densos exactos
# ─────────────────────────────────────────────

def _max_abs(arr: np.ndarray) -> int:
    if arr.size == 0:
        return 0
    return max(abs(int(arr.max())), abs(int(arr.min())))


def _guard(value: int, what: str):
    if not INT64_MIN <= value <= INT64_MAX:
        raise StpOverflowError(
            f"{what}: una entrada alcanza {value}, fuera del rango int64."
        )


def matmul(a: MatrixLike, b: MatrixLike) -> np.ndarray:
    """Producto ordinario; solo falla si alguna entrada exacta sale de int64."""
    a, b = as_dense(a), as_dense(b)
    if a.shape[1] != b.shape[0]:
        raise DimensionError(f"Producto imposible: {a.shape} · {b.shape}.")
    if _max_abs(a) * _max_abs(b) * a.shape[1] <= INT64_MAX:
        return a @ b
    # cota superada: producto exacto con enteros de Python
    exact = a.astype(object) @ b.astype(object)
    for entry in exact.flat:
        _guard(int(entry), "Producto")
    return exact.astype(np.int64)


def kron(a: MatrixLike, b: MatrixLike) -> np.ndarray:
    """Producto de Kronecker, forma (ma·mb) × (na·nb)."""
    a, b = as_dense(a), as_dense(b)
    if a.size and b.size:
        # los extremos de A ⊗ B salen de los extremos de A y B
        for x in (int(a.min()), int(a.max())):
            for y in (int(b.min()), int(b.max())):
                _guard(x * y, "Kronecker")
    return np.kron(a, b)


def stp(a: MatrixLike, b: MatrixLike) -> np.ndarray:
    """
    Producto semi-tensorial  A ⋉ B = (A ⊗ I_{t/n})(B ⊗ I_{t/p}),
    con n = cols(A), p = rows(B), t = lcm(n, p).
    Si n == p coincide con el producto ordinario.
    """
    a, b = as_dense(a), as_dense(b)
    n, p = a.shape[1], b.shape[0]
    t = math.lcm(n, p)
    left = a if t == n else kron(a, identity(t // n))
    right = b if t == p else kron(b, identity(t // p))
    return matmul(left, right)


# ─────────────────────────────────────────────
# Álgebra de matrices lógicas (forma de índices)
# ─────────────────────────────────────────────

def khatri_rao(a: LogicalMatrix, b: LogicalMatrix) -> LogicalMatrix:
    """Col_j(A * B) = Col_j(A) ⋉ Col_j(B)."""
    if a.cols != b.cols:
        raise DimensionError(
            f"Khatri-Rao requiere el mismo número de columnas ({a.cols} ≠ {b.cols})."
        )
    return LogicalMatrix(
        a.rows * b.rows,
        tuple((ia - 1) * b.rows + ib for ia, ib in zip(a.col_indices, b.col_indices)),
    )


def power_reducing(k: int) -> LogicalMatrix:
    """PR_k = diag(δ_k^1, ..., δ_k^k), de modo que x ⋉ x = PR_k x para x ∈ Δ_k."""
    if k < 1:
        raise DimensionError(f"PR_k requiere k ≥ 1 (k={k}).")
    return LogicalMatrix(k * k, tuple((i - 1) * k + i for i in range(1, k + 1)))


def compose(a: LogicalMatrix, b: LogicalMatrix) -> LogicalMatrix:
    """Producto A·B de matrices lógicas: la columna j es Col_{b_j}(A)."""
    if a.cols != b.rows:
        raise DimensionError(f"compose requiere cols(A) = rows(B) ({a.cols} ≠ {b.rows}).")
    return LogicalMatrix(a.rows, tuple(a.col_indices[j - 1] for j in b.col_indices))


def logical_kron(a: LogicalMatrix, b: LogicalMatrix) -> LogicalMatrix:
    return LogicalMatrix(
        a.rows * b.rows,
        tuple(
            (ia - 1) * b.rows + ib
            for ia in a.col_indices
            for ib in b.col_indices
        ),
    )


def logical_stp(a: LogicalMatrix, b: LogicalMatrix) -> LogicalMatrix:
    """STP de dos matrices lógicas sin pasar por la forma densa."""
    n, p = a.cols, b.rows
    t = math.lcm(n, p)
    left = a if t == n else logical_kron(a, LogicalMatrix.identity(t // n))
    right = b if t == p else logical_kron(b, LogicalMatrix.identity(t // p))
    return compose(left, right)


def logical_power(a: LogicalMatrix, t: int) -> LogicalMatrix:
    """A^t para A cuadrada (A^0 = I)."""
    if a.rows != a.cols:
        raise DimensionError(f"Potencia de una matriz no cuadrada {a.shape}.")
    result = LogicalMatrix.identity(a.rows)
    for _ in range(t):
        result = compose(a, result)
    return result


# ─────────────────────────────────────────────
# Comparación booleana
# ─────────────────────────────────────────────

def bool_leq(a: MatrixLike, b: MatrixLike) -> bool:
    """A ≤ B entrada a entrada."""
    a, b = as_dense(a), as_dense(b)
    if a.shape != b.shape:
        raise DimensionError(f"Comparación entre formas distintas {a.shape} y {b.shape}.")
    return bool(np.all(a <= b))
