"""Размерностные группы как индуктивные пределы Z^{m_0} -> Z^{m_1} -> ...

Элемент предела задается парой (уровень, целочисленный вектор). Все решения
о равенстве и положительности принимаются на конечном горизонте и честно
возвращают Unknown, если горизонта не хватило.
"""

import logging
import random
import threading
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional, Sequence, Union

from sympy import ImmutableMatrix
from sympy.matrices import MatrixBase

from .bratteli import BratteliDiagram, ClopenSet, is_subset, refine, validate
from .dynsys import GeneratorSystem, check_conditions, image, tau_tower
from .errors import (
    BasisAssumptionUnverified,
    ConditionsViolated,
    DepthTooShallow,
    InvalidGroup,
    LengthMismatch,
    LevelUnavailable,
)

logger = logging.getLogger(__name__)

Extension = Union[str, Callable[[int], Sequence[Sequence[int]]]]


def matrix_rows(matrix: MatrixBase) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(int(x) for x in row) for row in matrix.tolist())


def _as_matrix(matrix) -> MatrixBase:
    # разреженные матрицы остаются разреженными
    return matrix if isinstance(matrix, MatrixBase) else ImmutableMatrix(matrix)


def _nonzero_entries(matrix: MatrixBase) -> tuple[tuple[int, int, int], ...]:
    return tuple(sorted((i, j, int(v)) for (i, j), v in matrix.todok().items() if v != 0))


def _multiply(
    entries: tuple[tuple[int, int, int], ...], rows: int, vector: Sequence[int]
) -> tuple[int, ...]:
    result = [0] * rows
    for i, j, value in entries:
        if vector[j]:
            result[i] += value * vector[j]
    return tuple(result)


def _is_injective(matrix: MatrixBase, entries: tuple[tuple[int, int, int], ...]) -> bool:
    """Достаточный признак - у каждого столбца есть строка, где он единственный; иначе rank"""
    owners: dict[int, set[int]] = {}
    for i, j, _ in entries:
        owners.setdefault(i, set()).add(j)
    private = {next(iter(columns)) for columns in owners.values() if len(columns) == 1}
    if len(private) == matrix.cols:
        return True
    return matrix.rank() == matrix.cols


class DirectLimitGroup:
    """Последовательность связующих матриц C_n и порядковых единиц u_n.

    Матрицы за пределами заданного списка достраиваются лениво: "repeat"
    повторяет последнюю матрицу, функция extension(n) возвращает C_n.
    """

    def __init__(
        self,
        matrices: Sequence[Sequence[Sequence[int]]] = (),
        unit: Sequence[int] = (1,),
        extension: Extension = "none",
        injective_forever: Optional[bool] = None,
        units: Optional[Sequence[Sequence[int]]] = None,
    ):
        if not callable(extension) and extension not in ("none", "repeat"):
            raise InvalidGroup(f"unknown extension {extension!r}")
        if extension == "repeat" and not matrices:
            raise InvalidGroup("repeat extension needs at least one matrix")
        self._lock = threading.Lock()
        self._extension = extension
        self._matrices: list[MatrixBase] = []
        self._entries: list[tuple[tuple[int, int, int], ...]] = []
        self._units: list[tuple[int, ...]] = [tuple(int(x) for x in unit)]
        if not self._units[0] or any(x <= 0 for x in self._units[0]):
            raise InvalidGroup("order unit u_0 must have positive entries", level=0)
        for matrix in matrices:
            self._append(_as_matrix(matrix))
        if extension == "repeat":
            last = self._matrices[-1]
            if last.rows != last.cols:
                raise InvalidGroup("repeat extension needs a square last matrix")
        if units is not None:
            for n, expected in enumerate(units):
                if tuple(expected) != self.unit(n):
                    raise InvalidGroup(
                        f"order unit {tuple(expected)} at level {n} is not C u", level=n
                    )
        full_rank = all(_is_injective(m, e) for m, e in zip(self._matrices, self._entries))
        if injective_forever is None:
            injective_forever = full_rank and not callable(extension)
        elif injective_forever and not full_rank:
            raise InvalidGroup("a connecting matrix is not injective")
        self.injective_forever = injective_forever

    def _append(self, matrix: MatrixBase) -> None:
        n = len(self._matrices)
        previous = self._units[-1]
        if matrix.cols != len(previous):
            raise InvalidGroup(
                f"C_{n} has {matrix.cols} columns, rank at level {n} is {len(previous)}", level=n
            )
        entries = _nonzero_entries(matrix)
        if any(value < 0 for _, _, value in entries):
            raise InvalidGroup(f"C_{n} has a negative entry", level=n)
        unit = _multiply(entries, matrix.rows, previous)
        if any(x <= 0 for x in unit):
            raise InvalidGroup(f"order unit at level {n + 1} is not strictly positive", level=n + 1)
        self._matrices.append(matrix)
        self._entries.append(entries)
        self._units.append(unit)

    def apply(self, n: int, vector: Sequence[int]) -> tuple[int, ...]:
        """C_n x по ненулевым элементам C_n"""
        matrix = self.matrix(n)
        return _multiply(self._entries[n], matrix.rows, vector)

    @property
    def available_levels(self) -> Optional[int]:
        """Число заданных матриц, либо None для бесконечной последовательности"""
        return len(self._matrices) if self._extension == "none" else None

    def matrix(self, n: int) -> MatrixBase:
        if n < 0:
            raise LevelUnavailable(f"no matrix at level {n}", level=n)
        with self._lock:
            while len(self._matrices) <= n:
                k = len(self._matrices)
                if self._extension == "none":
                    raise LevelUnavailable(
                        f"matrix C_{n} is not available, {k} levels given", level=n
                    )
                if self._extension == "repeat":
                    self._append(self._matrices[-1])
                    continue
                matrix = _as_matrix(self._extension(k))
                if self.injective_forever and not _is_injective(matrix, _nonzero_entries(matrix)):
                    raise InvalidGroup(f"C_{k} is not injective", level=k)
                self._append(matrix)
                logger.debug("materialized C_%d with shape %s", k, matrix.shape)
            return self._matrices[n]

    def unit(self, n: int) -> tuple[int, ...]:
        if n > 0:
            self.matrix(n - 1)
        elif n < 0:
            raise LevelUnavailable(f"no order unit at level {n}", level=n)
        return self._units[n]

    def rank(self, n: int) -> int:
        return len(self.unit(n))


@dataclass(frozen=True)
class LimitElement:
    level: int
    vector: tuple[int, ...]

    def __str__(self) -> str:
        return f"{self.level}:[" + ",".join(str(x) for x in self.vector) + "]"


class VerdictKind(str, Enum):
    EQUAL = "Equal"
    DISTINCT = "Distinct"
    POSITIVE = "Positive"
    NOT_POSITIVE = "NotPositive"
    ZERO = "Zero"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class Verdict:
    """Ответ на конечном горизонте; level - уровень решения (для Unknown - горизонт)"""

    kind: VerdictKind
    level: Optional[int] = None

    def __str__(self) -> str:
        if self.level is None:
            return self.kind.value
        return f"{self.kind.value}({self.level})"


def _check_element(group: DirectLimitGroup, element: LimitElement) -> None:
    rank = group.rank(element.level)
    if len(element.vector) != rank:
        raise LengthMismatch(
            f"vector of length {len(element.vector)} at level {element.level}, rank is {rank}",
            level=element.level,
        )


def push(group: DirectLimitGroup, element: LimitElement, to: int) -> tuple[int, ...]:
    """C_{L-1} ... C_n x"""
    if to < element.level:
        raise LevelUnavailable(
            f"cannot push from level {element.level} down to {to}", level=to
        )
    _check_element(group, element)
    vector = tuple(element.vector)
    for n in range(element.level, to):
        vector = group.apply(n, vector)
    return vector


def order_unit(group: DirectLimitGroup, n: int) -> LimitElement:
    return LimitElement(n, group.unit(n))


def zero_element(group: DirectLimitGroup, n: int) -> LimitElement:
    return LimitElement(n, (0,) * group.rank(n))


def negate(element: LimitElement) -> LimitElement:
    return LimitElement(element.level, tuple(-x for x in element.vector))


def add(group: DirectLimitGroup, a: LimitElement, b: LimitElement) -> LimitElement:
    level = max(a.level, b.level)
    return LimitElement(
        level, tuple(x + y for x, y in zip(push(group, a, level), push(group, b, level)))
    )


def _horizon_check(group: DirectLimitGroup, start: int, horizon: int) -> None:
    if horizon < start:
        raise LevelUnavailable(f"horizon {horizon} is below level {start}", level=horizon)
    available = group.available_levels
    if available is not None and horizon > available:
        raise LevelUnavailable(
            f"horizon {horizon} exceeds the {available} available levels", level=horizon
        )


def equal(
    group: DirectLimitGroup, a: LimitElement, b: LimitElement, horizon: int
) -> Verdict:
    start = max(a.level, b.level)
    _horizon_check(group, start, horizon)
    vector = tuple(x - y for x, y in zip(push(group, a, start), push(group, b, start)))
    if not any(vector):
        return Verdict(VerdictKind.EQUAL, start)
    if group.injective_forever:
        return Verdict(VerdictKind.DISTINCT, start)
    for level in range(start, horizon):
        vector = push(group, LimitElement(level, vector), level + 1)
        if not any(vector):
            return Verdict(VerdictKind.EQUAL, level + 1)
    logger.info("equality undecided up to level %d", horizon)
    return Verdict(VerdictKind.UNKNOWN, horizon)


def _first_nonnegative(
    group: DirectLimitGroup, element: LimitElement, horizon: int
) -> Optional[int]:
    vector = element.vector
    for level in range(element.level, horizon + 1):
        if all(x >= 0 for x in vector):
            return level
        if level < horizon:
            vector = push(group, LimitElement(level, vector), level + 1)
    return None


def positive(group: DirectLimitGroup, element: LimitElement, horizon: int) -> Verdict:
    """Zero, Positive(L), NotPositive(L) (положителен -e) или Unknown(H)"""
    _horizon_check(group, element.level, horizon)
    _check_element(group, element)
    if equal(group, element, zero_element(group, element.level), horizon).kind is VerdictKind.EQUAL:
        return Verdict(VerdictKind.ZERO)
    level = _first_nonnegative(group, element, horizon)
    if level is not None:
        return Verdict(VerdictKind.POSITIVE, level)
    level = _first_nonnegative(group, negate(element), horizon)
    if level is not None:
        return Verdict(VerdictKind.NOT_POSITIVE, level)
    logger.info("positivity undecided up to level %d", horizon)
    return Verdict(VerdictKind.UNKNOWN, horizon)


def from_diagram(diagram: BratteliDiagram, extension: str = "none") -> DirectLimitGroup:
    """K_0 по матрицам ребер: C_n = E_{n+1}^T"""
    validate(diagram)
    matrices = [ImmutableMatrix(m).T for m in diagram.edge_matrices]
    return DirectLimitGroup(matrices, unit=(1,), extension=extension)


def _certify_basis(system: GeneratorSystem, tower, allow_uncertified: bool) -> None:
    for n, families in enumerate(tower, start=1):
        for r, family in enumerate(families):
            for s, tau in enumerate(family):
                target = image(tau)
                try:
                    pieces = refine(target, n)
                except DepthTooShallow:
                    pieces = ()
                if len(pieces) == 1:
                    continue
                message = (
                    f"image of tau({r + 1},{s + 1}) at level {n} is not a single "
                    f"cylinder of depth {n}"
                )
                if not allow_uncertified:
                    raise BasisAssumptionUnverified(message, level=n, row=r + 1, column=s + 1)
                logger.warning("%s; continuing without certification", message)
                return


def from_system(
    system: GeneratorSystem, levels: int, allow_uncertified: bool = False
) -> DirectLimitGroup:
    """C_n[r'][r] - число tau^{(n+1)}_{r',s} с образом внутри B(r, n); u_n[r] = k(r, n)"""
    report = check_conditions(system, levels)
    if not report.passed:
        raise ConditionsViolated(report.describe(), level=report.level)
    tower = tau_tower(system, levels)
    _certify_basis(system, tower, allow_uncertified)
    units = [(1,)] + [tuple(len(family) for family in families) for families in tower]
    matrices = []
    for n in range(levels):
        bases = [ClopenSet.of(system.diagram, (b,)) for b in system.base_sets[n]]
        matrices.append(
            [
                [sum(1 for tau in family if is_subset(image(tau), base)) for base in bases]
                for family in tower[n]
            ]
        )
    group = DirectLimitGroup(matrices, unit=units[0], units=units)
    logger.debug("K_0 reconstructed through level %d", levels)
    return group


def verify_cone_morphism(
    group: DirectLimitGroup,
    target_eval: Callable[[int, tuple[int, ...]], object],
    levels: int,
    samples: int,
    seed: int = 0,
    start: int = 0,
) -> bool:
    """Проверка phi_{n+1}(C_n x) = phi_n(x) на базисе, единице и случайных векторах"""
    rng = random.Random(seed)
    for n in range(start, levels):
        rank = group.rank(n)
        vectors = [tuple(int(i == j) for j in range(rank)) for i in range(rank)]
        vectors.append(group.unit(n))
        vectors.extend(tuple(rng.randint(-9, 9) for _ in range(rank)) for _ in range(samples))
        for vector in vectors:
            lifted = push(group, LimitElement(n, vector), n + 1)
            if target_eval(n + 1, lifted) != target_eval(n, vector):
                logger.warning("map does not commute with C_%d at %s", n, vector)
                return False
    return True
