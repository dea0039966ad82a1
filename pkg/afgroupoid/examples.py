"""Готовые диаграммы и их K_0: CAR, канторово множество, гибрид и GICAR"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence, Union

from sympy import ImmutableMatrix, ImmutableSparseMatrix, binomial, diag, eye

from .bratteli import BratteliDiagram
from .errors import IndexOutOfRange, LengthMismatch
from .ktheory import DirectLimitGroup, LimitElement, push


def _reduced(numerator: int, exponent: int) -> tuple[int, int]:
    if exponent < 0:
        numerator, exponent = numerator << -exponent, 0
    if numerator == 0:
        return 0, 0
    shift = min(exponent, (numerator & -numerator).bit_length() - 1)
    return numerator >> shift, exponent - shift


@dataclass(frozen=True)
class Dyadic:
    """numerator / 2^exponent в несократимом виде"""

    numerator: int
    exponent: int = 0

    def __post_init__(self):
        numerator, exponent = _reduced(self.numerator, self.exponent)
        object.__setattr__(self, "numerator", numerator)
        object.__setattr__(self, "exponent", exponent)

    @classmethod
    def from_fraction(cls, value: Fraction) -> "Dyadic":
        denominator = value.denominator
        if denominator & (denominator - 1):
            raise ValueError(f"{value} is not dyadic")
        return cls(value.numerator, denominator.bit_length() - 1)

    def to_fraction(self) -> Fraction:
        return Fraction(self.numerator, 1 << self.exponent)

    def __str__(self) -> str:
        if self.exponent == 0:
            return str(self.numerator)
        return f"{self.numerator}/{1 << self.exponent}"


@lru_cache(maxsize=1 << 16)
def _interned(numerator: int, exponent: int) -> Dyadic:
    return Dyadic(numerator, exponent)


def _dyadic(numerator: int, exponent: int) -> Dyadic:
    # равные значения отдаются одним и тем же объектом
    return _interned(*_reduced(numerator, exponent))


def binom(a: int, b: int) -> int:
    """Биномиальный коэффициент, равный 0 вне треугольника Паскаля"""
    if a < 0 or b < 0 or b > a:
        return 0
    return int(binomial(a, b))


def car_diagram(levels: int) -> BratteliDiagram:
    return BratteliDiagram(edge_matrices=(((2,),),) * levels)


def _doubling_edges(n: int, weight: int) -> tuple[tuple[int, ...], ...]:
    # вершина i уровня n-1 ведет в вершины 2i и 2i+1 уровня n
    width = 1 << n
    return tuple(
        tuple(weight if j // 2 == i else 0 for j in range(width)) for i in range(width // 2)
    )


def cantor_diagram(levels: int) -> BratteliDiagram:
    return BratteliDiagram(edge_matrices=tuple(_doubling_edges(n, 1) for n in range(1, levels + 1)))


def hybrid_diagram(levels: int) -> BratteliDiagram:
    return BratteliDiagram(edge_matrices=tuple(_doubling_edges(n, 2) for n in range(1, levels + 1)))


def gicar_diagram(levels: int) -> BratteliDiagram:
    """Треугольник Паскаля: вершина i уровня n-1 ведет в i и i+1 уровня n"""
    return BratteliDiagram(
        edge_matrices=tuple(
            tuple(tuple(int(j in (i, i + 1)) for j in range(n + 1)) for i in range(n))
            for n in range(1, levels + 1)
        )
    )


def _doubling_matrix(n: int, weight: int) -> ImmutableSparseMatrix:
    """C_n = E_{n+1}^T: столбец i имеет вес weight в строках 2i и 2i+1"""
    width = 1 << n
    return ImmutableSparseMatrix(
        2 * width, width, {(j, j // 2): weight for j in range(2 * width)}
    )


def car_group() -> DirectLimitGroup:
    return DirectLimitGroup([[[2]]], extension="repeat")


def car_value(element: LimitElement) -> Dyadic:
    """Изоморфизм K_0 -> Z[1/2]: x на уровне n переходит в x / 2^n"""
    if len(element.vector) != 1:
        raise LengthMismatch(f"CAR elements have rank 1, got {len(element.vector)}")
    return _dyadic(element.vector[0], element.level)


def cantor_group(depth: int) -> DirectLimitGroup:
    """K_0 канторова множества, усеченный до глубины depth"""
    return DirectLimitGroup([_doubling_matrix(n, 1) for n in range(depth)])


def cantor_value(group: DirectLimitGroup, element: LimitElement, depth: int) -> tuple[int, ...]:
    """Целочисленная функция, постоянная на цилиндрах глубины depth"""
    return push(group, element, depth)


def hybrid_group() -> DirectLimitGroup:
    return DirectLimitGroup(
        unit=(1,),
        extension=lambda n: _doubling_matrix(n, 2),
        injective_forever=True,
    )


def hybrid_value(element: LimitElement) -> tuple[Dyadic, ...]:
    """Двоично-рациональная функция: значение x_j / 2^n на j-м цилиндре"""
    if len(element.vector) != 1 << element.level:
        raise LengthMismatch(
            f"hybrid elements at level {element.level} have rank {1 << element.level}",
            level=element.level,
        )
    return tuple(_dyadic(x, element.level) for x in element.vector)


def refine_values(values: Sequence, levels: int) -> tuple:
    """Та же функция на цилиндрах на levels уровней глубже"""
    return tuple(v for v in values for _ in range(1 << levels))


def gicar_group() -> DirectLimitGroup:
    return DirectLimitGroup(
        unit=(1,),
        extension=lambda n: ImmutableMatrix(n + 2, n + 1, lambda i, j: int(i in (j, j + 1))),
        injective_forever=True,
    )


def gicar_step_matrix(n: int) -> ImmutableMatrix:
    """A_{n,n+1}: унипотентная нижняя двухдиагональная (n+2) x (n+2)"""
    return ImmutableMatrix(n + 2, n + 2, lambda i, j: int(i in (j, j + 1)))


def gicar_step_inverse(n: int) -> ImmutableMatrix:
    return ImmutableMatrix(n + 2, n + 2, lambda i, j: (-1) ** (i - j) if i >= j else 0)


@lru_cache(maxsize=64)
def gicar_basis_change(n: int) -> ImmutableMatrix:
    """A_n: произведение A_{k,k+1}^{-1} (+) I слева направо по k = 0..n-1"""
    if n < 0:
        raise IndexOutOfRange(f"level {n} is negative", level=n)
    result = eye(n + 1)
    for k in range(n):
        rest = n - 1 - k
        step = gicar_step_inverse(k)
        result = result * (diag(step, eye(rest)) if rest else step)
    return ImmutableMatrix(result)


def gicar_binomial_column(n: int, r: int) -> tuple[int, ...]:
    """Столбец r матрицы A_n (r с 1): (-1)^{j-r} C(n+1-r, j-r)"""
    if not 1 <= r <= n + 1:
        raise IndexOutOfRange(f"column {r} outside 1..{n + 1}", level=n, column=r)
    return tuple(
        (-1) ** (j - r) * binom(n + 1 - r, j - r) if j >= r else 0 for j in range(1, n + 2)
    )


@dataclass(frozen=True)
class XminFunction:
    """Функция на X_min: значение на j-й точке равно сумме первых j+1 коэффициентов"""

    coefficients: tuple[int, ...]

    def __post_init__(self):
        coefficients = list(self.coefficients)
        while coefficients and coefficients[-1] == 0:
            coefficients.pop()
        object.__setattr__(self, "coefficients", tuple(coefficients))

    def evaluate(self, j: int) -> int:
        if j < 0:
            raise IndexOutOfRange(f"point {j} is negative")
        return sum(self.coefficients[: j + 1])

    def limit_value(self) -> int:
        return sum(self.coefficients)

    def padded(self, length: int) -> tuple[int, ...]:
        if len(self.coefficients) > length:
            raise LengthMismatch(
                f"{len(self.coefficients)} coefficients do not fit in length {length}"
            )
        return self.coefficients + (0,) * (length - len(self.coefficients))


def _vector(n: int, values: Union[Sequence[int], XminFunction], name: str) -> tuple[int, ...]:
    if isinstance(values, XminFunction):
        return values.padded(n + 1)
    if len(values) != n + 1:
        raise LengthMismatch(
            f"{name} at level {n} needs {n + 1} entries, got {len(values)}", level=n
        )
    return tuple(values)


def gicar_phi(n: int, alpha: Sequence[int]) -> XminFunction:
    """R_n(alpha) в координатах beta = A_n alpha"""
    alpha = _vector(n, alpha, "alpha")
    beta = gicar_basis_change(n) * ImmutableMatrix(alpha)
    return XminFunction(tuple(int(x) for x in beta))


def _recovered(n: int, beta: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(
        sum(binom(n - l, k - l) * beta[l] for l in range(k + 1)) for k in range(n + 1)
    )


def gicar_recover_alpha(n: int, beta: Union[Sequence[int], XminFunction]) -> tuple[int, ...]:
    return _recovered(n, _vector(n, beta, "beta"))


def gicar_cone_member(n: int, beta: Union[Sequence[int], XminFunction]) -> bool:
    """beta лежит в образе положительного конуса уровня n"""
    return all(x >= 0 for x in gicar_recover_alpha(n, beta))


def binomial_sum_identity(m: int, n: int) -> bool:
    """sum_{k=0}^{n} C(m+k, k) = C(m+n+1, n)"""
    return sum(binom(m + k, k) for k in range(n + 1)) == binom(m + n + 1, n)
