"""Диаграммы Браттели, пространство путей и алгебра цилиндрических множеств.

Индексы вершин и уровней внутри библиотеки начинаются с 0; в документации и в
CLI вершины нумеруются с 1, как B(r, n), r = 1..m_n. Ребро на уровне t задается
парой (вершина-источник на уровне t-1, номер среди исходящих ребер источника);
исходящие ребра упорядочены по вершине-приемнику, затем по кратности.
"""

import logging
from collections import defaultdict
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Optional, Sequence

from pydantic import BaseModel, ConfigDict

from .errors import (
    DepthTooShallow,
    DiagramMismatch,
    LevelOutOfRange,
    NegativeEntry,
    ShapeMismatch,
    VertexOutOfRange,
    ZeroColumn,
    ZeroRow,
)

logger = logging.getLogger(__name__)

Edge = tuple[int, int]


class BratteliDiagram(BaseModel):
    """edge_matrices[n-1][i][j] - число ребер из вершины i уровня n-1 в вершину j уровня n"""

    model_config = ConfigDict(frozen=True)

    edge_matrices: tuple[tuple[tuple[int, ...], ...], ...] = ()

    @property
    def levels(self) -> int:
        return len(self.edge_matrices)

    def vertex_count(self, n: int) -> int:
        check_level(self, n)
        if n == 0:
            return 1
        return len(self.edge_matrices[n - 1][0])

    def matrix(self, n: int) -> tuple[tuple[int, ...], ...]:
        if n < 1 or n > self.levels:
            raise LevelOutOfRange(f"no edge matrix at level {n}", level=n)
        return self.edge_matrices[n - 1]

    def in_degree(self, n: int, r: int) -> int:
        """kappa(r, n): число ребер, входящих в вершину r уровня n"""
        check_vertex(self, n, r)
        return sum(row[r] for row in self.matrix(n))

    def truncate(self, levels: int) -> "BratteliDiagram":
        check_level(self, levels)
        return BratteliDiagram(edge_matrices=self.edge_matrices[:levels])


def validate(diagram: BratteliDiagram) -> None:
    """Проверяет инварианты диаграммы; бросает исключение о первом нарушении"""
    rows_expected = 1
    for n, matrix in enumerate(diagram.edge_matrices, start=1):
        if len(matrix) != rows_expected:
            raise ShapeMismatch(
                f"level {n}: expected {rows_expected} rows, got {len(matrix)}", level=n
            )
        width = len(matrix[0])
        if width == 0:
            raise ShapeMismatch(f"level {n}: no vertices", level=n)
        for i, row in enumerate(matrix):
            if len(row) != width:
                raise ShapeMismatch(
                    f"level {n}: row {i + 1} has {len(row)} entries, expected {width}",
                    level=n,
                    row=i + 1,
                )
        for i, row in enumerate(matrix):
            for j, value in enumerate(row):
                if value < 0:
                    raise NegativeEntry(
                        f"level {n}: negative multiplicity {value}",
                        level=n,
                        row=i + 1,
                        column=j + 1,
                    )
        for j in range(width):
            if all(row[j] == 0 for row in matrix):
                raise ZeroColumn(
                    f"level {n}: vertex {j + 1} has no incoming edge", level=n, column=j + 1
                )
        for i, row in enumerate(matrix):
            if not any(row):
                raise ZeroRow(
                    f"level {n}: vertex {i + 1} of level {n - 1} has no outgoing edge",
                    level=n,
                    row=i + 1,
                )
        rows_expected = width
    logger.debug("diagram with %d levels is valid", diagram.levels)


def check_level(diagram: BratteliDiagram, n: int) -> None:
    if n < 0 or n > diagram.levels:
        raise LevelOutOfRange(f"level {n} outside 0..{diagram.levels}", level=n)


def check_vertex(diagram: BratteliDiagram, n: int, r: int) -> None:
    count = diagram.vertex_count(n)
    if r < 0 or r >= count:
        raise VertexOutOfRange(
            f"vertex {r + 1} outside 1..{count} at level {n}", level=n, column=r + 1
        )


@lru_cache(maxsize=256)
def _dim_vectors(diagram: BratteliDiagram) -> tuple[tuple[int, ...], ...]:
    vectors = [(1,)]
    for matrix in diagram.edge_matrices:
        previous = vectors[-1]
        vectors.append(
            tuple(
                sum(previous[i] * matrix[i][j] for i in range(len(previous)))
                for j in range(len(matrix[0]))
            )
        )
    return tuple(vectors)


def dim_vector(diagram: BratteliDiagram, n: int) -> tuple[int, ...]:
    """k(., n): число путей длины n из корня в каждую вершину уровня n"""
    check_level(diagram, n)
    return _dim_vectors(diagram)[n]


@lru_cache(maxsize=256)
def out_targets(diagram: BratteliDiagram) -> tuple[tuple[tuple[int, ...], ...], ...]:
    """out_targets(d)[t][i] - приемники исходящих ребер вершины i уровня t по порядку"""
    return tuple(
        tuple(
            tuple(j for j, count in enumerate(row) for _ in range(count)) for row in matrix
        )
        for matrix in diagram.edge_matrices
    )


@dataclass(frozen=True, order=True)
class PathPrefix:
    edges: tuple[Edge, ...] = ()

    @property
    def level(self) -> int:
        return len(self.edges)

    def extend(self, edge: Edge) -> "PathPrefix":
        return PathPrefix(self.edges + (edge,))

    def parent(self) -> "PathPrefix":
        return PathPrefix(self.edges[:-1])

    def truncate(self, depth: int) -> "PathPrefix":
        return PathPrefix(self.edges[:depth])

    def is_prefix_of(self, other: "PathPrefix") -> bool:
        return other.edges[: len(self.edges)] == self.edges

    def local_indices(self) -> tuple[int, ...]:
        return tuple(local for _, local in self.edges)

    def __str__(self) -> str:
        return "(" + ",".join(str(local) for local in self.local_indices()) + ")"


@dataclass(frozen=True, order=True)
class Cylinder:
    """Множество всех бесконечных путей, продолжающих prefix"""

    prefix: PathPrefix = PathPrefix()

    @property
    def level(self) -> int:
        return self.prefix.level

    def contains(self, other: "Cylinder") -> bool:
        return self.prefix.is_prefix_of(other.prefix)

    def __str__(self) -> str:
        return str(self.prefix)


def terminal_vertex(diagram: BratteliDiagram, prefix: PathPrefix) -> int:
    if prefix.level == 0:
        return 0
    if prefix.level > diagram.levels:
        raise LevelOutOfRange(f"path of length {prefix.level} is too long", level=prefix.level)
    source, local = prefix.edges[-1]
    return out_targets(diagram)[prefix.level - 1][source][local]


def check_prefix(diagram: BratteliDiagram, prefix: PathPrefix) -> None:
    if prefix.level > diagram.levels:
        raise LevelOutOfRange(f"path of length {prefix.level} is too long", level=prefix.level)
    table = out_targets(diagram)
    vertex = 0
    for t, (source, local) in enumerate(prefix.edges):
        if source != vertex or not 0 <= local < len(table[t][source]):
            raise VertexOutOfRange(
                f"edge {(source, local)} at level {t + 1} does not continue the path",
                level=t + 1,
            )
        vertex = table[t][source][local]


def path_from_indices(diagram: BratteliDiagram, indices: Sequence[int]) -> PathPrefix:
    """Путь по номерам исходящих ребер: для CAR (0, 1, 1) - обычная двоичная запись"""
    table = out_targets(diagram)
    if len(indices) > diagram.levels:
        raise LevelOutOfRange(f"path of length {len(indices)} is too long", level=len(indices))
    vertex = 0
    edges = []
    for t, local in enumerate(indices):
        if not 0 <= local < len(table[t][vertex]):
            raise VertexOutOfRange(
                f"vertex {vertex + 1} at level {t} has no outgoing edge {local}", level=t
            )
        edges.append((vertex, local))
        vertex = table[t][vertex][local]
    return PathPrefix(tuple(edges))


def children(diagram: BratteliDiagram, prefix: PathPrefix) -> tuple[PathPrefix, ...]:
    if prefix.level >= diagram.levels:
        raise LevelOutOfRange(
            f"cannot extend a path of length {prefix.level} beyond the diagram",
            level=prefix.level + 1,
        )
    vertex = terminal_vertex(diagram, prefix)
    count = len(out_targets(diagram)[prefix.level][vertex])
    return tuple(prefix.extend((vertex, local)) for local in range(count))


def descendants(diagram: BratteliDiagram, prefix: PathPrefix, depth: int) -> list[PathPrefix]:
    """Все продолжения prefix до длины depth в лексикографическом порядке"""
    if depth < prefix.level:
        raise DepthTooShallow(
            f"depth {depth} is shallower than prefix of length {prefix.level}", level=depth
        )
    check_level(diagram, depth)
    layer = [prefix]
    for _ in range(depth - prefix.level):
        layer = [child for p in layer for child in children(diagram, p)]
    return layer


def iter_paths(
    diagram: BratteliDiagram, n: int, r: Optional[int] = None
) -> Iterator[PathPrefix]:
    """Пути длины n (в вершину r, если задана) в лексикографическом порядке"""
    table = out_targets(diagram)
    allowed = None
    if r is not None:
        allowed = [set() for _ in range(n + 1)]
        allowed[n] = {r}
        for t in range(n, 0, -1):
            allowed[t - 1] = {
                i
                for i, targets in enumerate(table[t - 1])
                if any(j in allowed[t] for j in targets)
            }

    def walk(edges: tuple[Edge, ...], vertex: int) -> Iterator[tuple[Edge, ...]]:
        t = len(edges)
        if t == n:
            yield edges
            return
        for local, target in enumerate(table[t][vertex]):
            if allowed is None or target in allowed[t + 1]:
                yield from walk(edges + ((vertex, local),), target)

    for edges in walk((), 0):
        yield PathPrefix(edges)


def enumerate_paths(diagram: BratteliDiagram, n: int, r: int) -> tuple[PathPrefix, ...]:
    check_vertex(diagram, n, r)
    return tuple(iter_paths(diagram, n, r))


@lru_cache(maxsize=4096)
def canonical_path(diagram: BratteliDiagram, n: int, r: int) -> PathPrefix:
    """Лексикографически первый путь длины n в вершину r"""
    check_vertex(diagram, n, r)
    return next(iter_paths(diagram, n, r))


def canonical_base_set(diagram: BratteliDiagram, n: int, r: int) -> Cylinder:
    """B(r, n): цилиндр первого пути в вершину r уровня n"""
    return Cylinder(canonical_path(diagram, n, r))


def _normalize(diagram: BratteliDiagram, cylinders: Iterable[Cylinder]) -> tuple[Cylinder, ...]:
    prefixes = sorted({c.prefix for c in cylinders})
    present = set(prefixes)
    current = {
        p
        for p in prefixes
        if not any(PathPrefix(p.edges[:k]) in present for k in range(p.level))
    }
    # полные семейства соседей склеиваются в родительский цилиндр
    changed = True
    while changed:
        changed = False
        by_parent = defaultdict(set)
        for p in current:
            if p.level > 0:
                by_parent[p.parent()].add(p)
        for parent, kids in by_parent.items():
            if len(kids) == len(children(diagram, parent)):
                current -= kids
                current.add(parent)
                changed = True
    return tuple(Cylinder(p) for p in sorted(current))


@dataclass(frozen=True)
class ClopenSet:
    """Конечное объединение цилиндров в нормальной форме (антицепь, отсортирована)"""

    diagram: BratteliDiagram
    cylinders: tuple[Cylinder, ...] = ()

    def __post_init__(self):
        for cylinder in self.cylinders:
            check_prefix(self.diagram, cylinder.prefix)
        object.__setattr__(self, "cylinders", _normalize(self.diagram, self.cylinders))

    @classmethod
    def of(cls, diagram: BratteliDiagram, cylinders: Iterable[Cylinder]) -> "ClopenSet":
        return cls(diagram, tuple(cylinders))

    @classmethod
    def whole(cls, diagram: BratteliDiagram) -> "ClopenSet":
        return cls(diagram, (Cylinder(PathPrefix()),))

    @classmethod
    def empty(cls, diagram: BratteliDiagram) -> "ClopenSet":
        return cls(diagram, ())

    @property
    def depth(self) -> int:
        return max((c.level for c in self.cylinders), default=0)

    def is_empty(self) -> bool:
        return not self.cylinders

    def covers(self, prefix: PathPrefix) -> bool:
        """Лежит ли цилиндр prefix целиком в множестве"""
        return any(c.prefix.is_prefix_of(prefix) for c in self.cylinders)

    def __or__(self, other: "ClopenSet") -> "ClopenSet":
        return union(self, other)

    def __and__(self, other: "ClopenSet") -> "ClopenSet":
        return intersection(self, other)

    def __sub__(self, other: "ClopenSet") -> "ClopenSet":
        return difference(self, other)

    def __str__(self) -> str:
        return "{" + ", ".join(str(c) for c in self.cylinders) + "}"


def refine(clopen: ClopenSet, depth: int) -> tuple[Cylinder, ...]:
    """Точный список цилиндров глубины depth, объединение которых равно множеству"""
    if depth < clopen.depth:
        raise DepthTooShallow(
            f"depth {depth} is shallower than a cylinder of depth {clopen.depth}", level=depth
        )
    check_level(clopen.diagram, depth)
    return tuple(
        Cylinder(p)
        for c in clopen.cylinders
        for p in descendants(clopen.diagram, c.prefix, depth)
    )


def _aligned(a: ClopenSet, b: ClopenSet) -> tuple[set[PathPrefix], set[PathPrefix]]:
    if a.diagram != b.diagram:
        raise DiagramMismatch("clopen sets live on different diagrams")
    depth = max(a.depth, b.depth)
    return (
        {c.prefix for c in refine(a, depth)},
        {c.prefix for c in refine(b, depth)},
    )


def union(a: ClopenSet, b: ClopenSet) -> ClopenSet:
    if a.diagram != b.diagram:
        raise DiagramMismatch("clopen sets live on different diagrams")
    return ClopenSet.of(a.diagram, a.cylinders + b.cylinders)


def intersection(a: ClopenSet, b: ClopenSet) -> ClopenSet:
    left, right = _aligned(a, b)
    return ClopenSet.of(a.diagram, (Cylinder(p) for p in left & right))


def difference(a: ClopenSet, b: ClopenSet) -> ClopenSet:
    left, right = _aligned(a, b)
    return ClopenSet.of(a.diagram, (Cylinder(p) for p in left - right))


def equals(a: ClopenSet, b: ClopenSet) -> bool:
    if a.diagram != b.diagram:
        raise DiagramMismatch("clopen sets live on different diagrams")
    return a.cylinders == b.cylinders


def is_subset(a: ClopenSet, b: ClopenSet) -> bool:
    return difference(a, b).is_empty()
