"""Частичные гомеоморфизмы пространства путей, системы генераторов и AF-проверки.

Частичное отображение хранится как конечный набор правил "замена префикса":
путь, начинающийся с source, переходит в путь с префиксом target и тем же хвостом.
Нормальная форма однозначна, поэтому равенство отображений - равенство записей.
"""

import logging
from collections import defaultdict
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Iterable, Mapping, Optional, Sequence, Union

from .bratteli import (
    BratteliDiagram,
    ClopenSet,
    Cylinder,
    PathPrefix,
    canonical_base_set,
    canonical_path,
    check_prefix,
    children,
    descendants,
    difference,
    intersection,
    is_subset,
    iter_paths,
    out_targets,
    refine,
    terminal_vertex,
    union,
    validate,
)
from .errors import (
    ConditionsViolated,
    CylinderStraddlesRules,
    DepthTooShallow,
    DiagramMismatch,
    InvalidGeneratorSystem,
    InvalidPartialMap,
    LevelOutOfRange,
    UndefinedOnCylinder,
    UnknownGenerator,
    UsageError,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True, order=True)
class PrefixSwap:
    source: PathPrefix
    target: PathPrefix

    @property
    def depth(self) -> int:
        return self.source.level

    def __str__(self) -> str:
        return f"{self.source}->{self.target}"


def _refine_rules(
    diagram: BratteliDiagram, rules: Iterable[PrefixSwap], depth: int
) -> dict[PathPrefix, PathPrefix]:
    mapping = {}
    for rule in rules:
        for source in descendants(diagram, rule.source, depth):
            if source in mapping:
                raise InvalidPartialMap(f"rule {rule} overlaps another rule")
            mapping[source] = PathPrefix(rule.target.edges + source.edges[rule.depth :])
    if len(set(mapping.values())) != len(mapping):
        raise InvalidPartialMap("partial map is not injective")
    return mapping


def _merge(diagram: BratteliDiagram, mapping: dict[PathPrefix, PathPrefix], depth: int):
    current = dict(mapping)
    for d in range(depth, 0, -1):
        groups = defaultdict(list)
        for source in current:
            if source.level == d:
                groups[source.parent()].append(source)
        for parent, kids in groups.items():
            if len(kids) != len(children(diagram, parent)):
                continue
            heads = {current[k].parent() for k in kids}
            if len(heads) != 1:
                continue
            # одинаковое последнее ребро у источника и образа
            if any(current[k].edges[-1] != k.edges[-1] for k in kids):
                continue
            head = heads.pop()
            for k in kids:
                del current[k]
            current[parent] = head
    return tuple(sorted(PrefixSwap(s, t) for s, t in current.items()))


@dataclass(frozen=True)
class PartialMap:
    """Частичный гомеоморфизм между открыто-замкнутыми множествами"""

    diagram: BratteliDiagram
    rules: tuple[PrefixSwap, ...] = ()

    def __post_init__(self):
        for rule in self.rules:
            check_prefix(self.diagram, rule.source)
            check_prefix(self.diagram, rule.target)
            if rule.source.level != rule.target.level:
                raise InvalidPartialMap(f"rule {rule} changes path length")
            if terminal_vertex(self.diagram, rule.source) != terminal_vertex(
                self.diagram, rule.target
            ):
                raise InvalidPartialMap(f"rule {rule} ends at different vertices")
        depth = max((rule.depth for rule in self.rules), default=0)
        mapping = _refine_rules(self.diagram, self.rules, depth)
        object.__setattr__(self, "rules", _merge(self.diagram, mapping, depth))

    @property
    def depth(self) -> int:
        return max((rule.depth for rule in self.rules), default=0)

    def is_empty(self) -> bool:
        return not self.rules

    def refined(self, depth: int) -> dict[PathPrefix, PathPrefix]:
        """Правила, измельченные до глубины depth: {источник: образ}"""
        if depth < self.depth:
            raise DepthTooShallow(
                f"depth {depth} is shallower than a rule of depth {self.depth}", level=depth
            )
        return _refine_rules(self.diagram, self.rules, depth)

    def __str__(self) -> str:
        return "{" + ", ".join(str(rule) for rule in self.rules) + "}"


def identity_map(diagram: BratteliDiagram, clopen: ClopenSet) -> PartialMap:
    return PartialMap(diagram, tuple(PrefixSwap(c.prefix, c.prefix) for c in clopen.cylinders))


def prefix_swap(diagram: BratteliDiagram, source: PathPrefix, target: PathPrefix) -> PartialMap:
    return PartialMap(diagram, (PrefixSwap(source, target),))


def _same_diagram(*maps: PartialMap) -> BratteliDiagram:
    diagram = maps[0].diagram
    if any(m.diagram != diagram for m in maps[1:]):
        raise DiagramMismatch("partial maps live on different diagrams")
    return diagram


def compose(g: PartialMap, f: PartialMap) -> PartialMap:
    """g o f: сначала f, затем g"""
    diagram = _same_diagram(g, f)
    depth = max(f.depth, g.depth)
    inner = f.refined(depth)
    outer = g.refined(depth)
    rules = tuple(
        PrefixSwap(source, outer[middle])
        for source, middle in inner.items()
        if middle in outer
    )
    return PartialMap(diagram, rules)


def invert(f: PartialMap) -> PartialMap:
    return PartialMap(f.diagram, tuple(PrefixSwap(r.target, r.source) for r in f.rules))


def restrict(f: PartialMap, clopen: ClopenSet) -> PartialMap:
    if f.diagram != clopen.diagram:
        raise DiagramMismatch("partial map and clopen set live on different diagrams")
    depth = max(f.depth, clopen.depth)
    mapping = f.refined(depth)
    return PartialMap(
        f.diagram,
        tuple(
            PrefixSwap(source, mapping[source])
            for source in (c.prefix for c in refine(clopen, depth))
            if source in mapping
        ),
    )


def domain(f: PartialMap) -> ClopenSet:
    return ClopenSet.of(f.diagram, (Cylinder(rule.source) for rule in f.rules))


def image(f: PartialMap, clopen: Optional[ClopenSet] = None) -> ClopenSet:
    if clopen is not None:
        f = restrict(f, clopen)
    return ClopenSet.of(f.diagram, (Cylinder(rule.target) for rule in f.rules))


def apply_to_cylinder(f: PartialMap, cylinder: Cylinder) -> Cylinder:
    """Образ цилиндра, лежащего целиком в одном правиле.

    Цилиндр, который пересекает несколько правил, отвергается с
    CylinderStraddlesRules, даже если отображение определено на его части.
    """
    for rule in f.rules:
        if rule.source.is_prefix_of(cylinder.prefix):
            tail = cylinder.prefix.edges[rule.depth :]
            return Cylinder(PathPrefix(rule.target.edges + tail))
    if any(cylinder.prefix.is_prefix_of(rule.source) for rule in f.rules):
        raise CylinderStraddlesRules(
            f"cylinder {cylinder} straddles several rules", level=cylinder.level
        )
    raise UndefinedOnCylinder(f"map is not defined on {cylinder}", level=cylinder.level)


@dataclass(frozen=True)
class AddingMachine:
    """Сложение с переносом в смешанной системе счисления на цифрах префикса"""

    bases: tuple[int, ...]
    increment: int = 1

    def __post_init__(self):
        object.__setattr__(self, "bases", tuple(self.bases))
        if not self.bases:
            raise InvalidPartialMap("adding machine needs at least one digit")
        for t, base in enumerate(self.bases, start=1):
            if base < 2:
                raise InvalidPartialMap(f"digit {t} has base {base} < 2", level=t)

    def diagram(self) -> BratteliDiagram:
        return BratteliDiagram(edge_matrices=tuple(((base,),) for base in self.bases))

    def inverse(self) -> "AddingMachine":
        return replace(self, increment=-self.increment)

    def shift(self, digits: Sequence[int], increment: Optional[int] = None):
        """Возвращает (новые цифры, перенос не вышел за префикс)"""
        if increment is None:
            increment = self.increment
        if len(digits) > len(self.bases):
            raise LevelOutOfRange(
                f"prefix of length {len(digits)} exceeds {len(self.bases)} digits",
                level=len(digits),
            )
        value = 0
        weight = 1
        for digit, base in zip(digits, self.bases):
            value += digit * weight
            weight *= base
        shifted = value + increment
        carry_free = 0 <= shifted < weight
        shifted %= weight
        result = []
        for base in self.bases[: len(digits)]:
            shifted, digit = divmod(shifted, base)
            result.append(digit)
        return tuple(result), carry_free


@dataclass(frozen=True, order=True)
class Letter:
    name: str
    inverse: bool = False

    def __str__(self) -> str:
        return f"{self.name}^-1" if self.inverse else self.name


Word = tuple[Letter, ...]
Generator = Union[PartialMap, AddingMachine]


def render_word(word: Word) -> str:
    names = [str(letter) for letter in word]
    if all(len(letter.name) == 1 for letter in word):
        return "".join(names)
    return " ".join(names)


def _letter_value(generators: Mapping[str, Generator], letter: Letter) -> Generator:
    try:
        generator = generators[letter.name]
    except KeyError:
        raise UnknownGenerator(f"unknown generator {letter.name!r}")
    if isinstance(generator, AddingMachine):
        return generator.inverse() if letter.inverse else generator
    return invert(generator) if letter.inverse else generator


def _common_diagram(generators: Mapping[str, Generator]) -> BratteliDiagram:
    diagrams = {
        g.diagram() if isinstance(g, AddingMachine) else g.diagram for g in generators.values()
    }
    if len(diagrams) != 1:
        raise DiagramMismatch("generators live on different diagrams")
    return diagrams.pop()


def _segments(generators: Mapping[str, Generator], word: Word) -> list[Generator]:
    """Склеивает соседние буквы: сложения суммируются, отображения композируются"""
    segments: list[Generator] = []
    for letter in word:
        value = _letter_value(generators, letter)
        last = segments[-1] if segments else None
        if isinstance(value, AddingMachine) and isinstance(last, AddingMachine):
            if value.bases == last.bases:
                segments[-1] = replace(value, increment=last.increment + value.increment)
                continue
        if isinstance(value, PartialMap) and isinstance(last, PartialMap):
            segments[-1] = compose(last, value)
            continue
        segments.append(value)
    return segments


def _evaluate(segments: Sequence[Generator], cylinder: Cylinder) -> tuple[Cylinder, bool]:
    current = cylinder
    tail_identity = True
    for segment in reversed(segments):
        if isinstance(segment, AddingMachine):
            digits, carry_free = segment.shift(current.prefix.local_indices())
            tail_identity = tail_identity and carry_free
            current = Cylinder(PathPrefix(tuple((0, d) for d in digits)))
        else:
            current = apply_to_cylinder(segment, current)
    return current, tail_identity


def word_image(
    generators: Mapping[str, Generator], word: Word, cylinder: Cylinder
) -> tuple[Cylinder, bool]:
    """Образ цилиндра под словом g1 g2 ... gk (действует справа налево).

    Второй элемент ответа истинен, только если доказано, что хвост пути
    не меняется: для сложения - когда перенос не выходит за префикс.
    """
    if not word:
        raise UsageError("word must not be empty")
    if cylinder.level < 1:
        raise LevelOutOfRange("cylinder must have depth at least 1", level=cylinder.level)
    diagram = _common_diagram(generators)
    check_prefix(diagram, cylinder.prefix)
    return _evaluate(_segments(generators, word), cylinder)


@dataclass(frozen=True)
class NonAFCertificate:
    """Слово rho, цилиндр B с rho(B) = B и подцилиндр c, который rho сдвигает"""

    word: Word
    base: Cylinder
    witness: Cylinder
    witness_image: Cylinder
    diagram: BratteliDiagram = field(compare=False, repr=False)

    @property
    def base_set(self) -> ClopenSet:
        return ClopenSet.of(self.diagram, (self.base,))


@dataclass(frozen=True)
class NotFound:
    max_word_len: int
    max_depth: int


def _signature(segments: Sequence[Generator], word: Word):
    if len(segments) == 1 and isinstance(segments[0], PartialMap):
        return segments[0]
    if len(segments) == 1:
        return ("odometer", segments[0].bases, segments[0].increment)
    return ("word", word)


def _is_empty(segments: Sequence[Generator]) -> bool:
    return any(isinstance(s, PartialMap) and s.is_empty() for s in segments)


def _certificate_for(
    diagram: BratteliDiagram, segments: Sequence[Generator], word: Word, max_depth: int
) -> Optional[NonAFCertificate]:
    for base_depth in range(1, max_depth + 1):
        for prefix in iter_paths(diagram, base_depth):
            base = Cylinder(prefix)
            try:
                moved, _ = _evaluate(segments, base)
            except UndefinedOnCylinder:
                continue
            if moved != base:
                continue
            for witness_prefix in descendants(diagram, prefix, max_depth):
                witness = Cylinder(witness_prefix)
                witness_image, _ = _evaluate(segments, witness)
                if witness_image != witness:
                    return NonAFCertificate(word, base, witness, witness_image, diagram)
    return None


def find_non_af_certificate(
    generators: Mapping[str, Generator], max_word_len: int, max_depth: int
) -> Union[NonAFCertificate, NotFound]:
    """Перебор слов по длине и лексикографически в поисках свидетельства не-AF.

    Слова с пустым отображением отбрасываются вместе с продолжениями; слова,
    совпавшие по значению с уже просмотренными, тоже не продолжаются.
    """
    if max_word_len < 1 or max_depth < 1:
        raise UsageError("word length and depth must be at least 1")
    diagram = _common_diagram(generators)
    if max_depth > diagram.levels:
        raise LevelOutOfRange(
            f"depth {max_depth} exceeds {diagram.levels} levels", level=max_depth
        )
    alphabet = [Letter(name, inverse) for name in sorted(generators) for inverse in (False, True)]
    seen = set()
    frontier: list[Word] = [()]
    for length in range(1, max_word_len + 1):
        extended = []
        for prefix_word in frontier:
            for letter in alphabet:
                word = prefix_word + (letter,)
                segments = _segments(generators, word)
                if _is_empty(segments):
                    continue
                signature = _signature(segments, word)
                if signature in seen:
                    continue
                seen.add(signature)
                extended.append(word)
                certificate = _certificate_for(diagram, segments, word, max_depth)
                if certificate is not None:
                    logger.info(
                        "non-AF certificate: word %s, B=%s, c=%s",
                        render_word(word),
                        certificate.base,
                        certificate.witness,
                    )
                    return certificate
        logger.debug("%d distinct words of length %d", len(extended), length)
        frontier = extended
    logger.info("no certificate up to word length %d and depth %d", max_word_len, max_depth)
    return NotFound(max_word_len, max_depth)


def validate_certificate(
    generators: Mapping[str, Generator], certificate: NonAFCertificate
) -> bool:
    if not certificate.base.contains(certificate.witness):
        return False
    moved, _ = word_image(generators, certificate.word, certificate.base)
    if moved != certificate.base:
        return False
    witness_image, _ = word_image(generators, certificate.word, certificate.witness)
    return witness_image == certificate.witness_image and witness_image != certificate.witness


def odometer_generators(bases: Sequence[int]) -> dict[str, AddingMachine]:
    return {"φ": AddingMachine(tuple(bases), 1)}


@dataclass(frozen=True)
class GeneratorSystem:
    """sigma^{(n)}_{r,s} = generators[n-1][r][s], B(r, n) = base_sets[n][r]"""

    diagram: BratteliDiagram
    generators: tuple[tuple[tuple[PartialMap, ...], ...], ...]
    base_sets: tuple[tuple[Cylinder, ...], ...]

    def __post_init__(self):
        if len(self.base_sets) != len(self.generators) + 1:
            raise InvalidGeneratorSystem(
                f"{len(self.generators)} generator levels need {len(self.generators) + 1} "
                f"base set levels, got {len(self.base_sets)}"
            )
        if self.base_sets[0] != (Cylinder(PathPrefix()),):
            raise InvalidGeneratorSystem("B(1, 0) must be the whole path space", level=0)
        for n, level in enumerate(self.base_sets):
            seen = ClopenSet.empty(self.diagram)
            for r, base in enumerate(level):
                clopen = ClopenSet.of(self.diagram, (base,))
                if not intersection(seen, clopen).is_empty():
                    raise InvalidGeneratorSystem(
                        f"base set B({r + 1}, {n}) overlaps another base set",
                        level=n,
                        row=r + 1,
                    )
                seen = union(seen, clopen)
        for n, level in enumerate(self.generators, start=1):
            if len(level) != len(self.base_sets[n]):
                raise InvalidGeneratorSystem(
                    f"level {n}: {len(level)} families for {len(self.base_sets[n])} base sets",
                    level=n,
                )
            for r, family in enumerate(level):
                expected = ClopenSet.of(self.diagram, (self.base_sets[n][r],))
                for s, sigma in enumerate(family):
                    if sigma.diagram != self.diagram:
                        raise DiagramMismatch("generator lives on another diagram", level=n)
                    if domain(sigma) != expected:
                        raise InvalidGeneratorSystem(
                            f"domain of sigma({r + 1},{s + 1}) at level {n} is not B({r + 1}, {n})",
                            level=n,
                            row=r + 1,
                            column=s + 1,
                        )

    @property
    def levels(self) -> int:
        return len(self.generators)

    def sigma(self, n: int, r: int, s: int) -> PartialMap:
        return self.generators[n - 1][r][s]

    def base_set(self, n: int, r: int) -> Cylinder:
        return self.base_sets[n][r]

    def u_set(self, n: int) -> ClopenSet:
        return ClopenSet.of(self.diagram, self.base_sets[n])

    def with_generator(self, n: int, r: int, s: int, sigma: PartialMap) -> "GeneratorSystem":
        """Копия системы с одним замененным генератором"""
        levels = [list(map(list, level)) for level in self.generators]
        levels[n - 1][r][s] = sigma
        return GeneratorSystem(
            self.diagram,
            tuple(tuple(tuple(family) for family in level) for level in levels),
            self.base_sets,
        )


def canonical_system(diagram: BratteliDiagram, levels: int) -> GeneratorSystem:
    """Каноническая система: sigma_{r,s} переносит первый путь в r на путь p(i, n-1) e.

    Образы упорядочены лексикографически, поэтому sigma_{r,1} - тождество.
    """
    validate(diagram)
    if levels < 0 or levels > diagram.levels:
        raise LevelOutOfRange(f"level {levels} outside 0..{diagram.levels}", level=levels)
    table = out_targets(diagram)
    base_sets = tuple(
        tuple(canonical_base_set(diagram, n, r) for r in range(diagram.vertex_count(n)))
        for n in range(levels + 1)
    )
    generators = []
    for n in range(1, levels + 1):
        level = []
        for r in range(diagram.vertex_count(n)):
            source = canonical_path(diagram, n, r)
            targets = sorted(
                canonical_path(diagram, n - 1, i).extend((i, local))
                for i in range(diagram.vertex_count(n - 1))
                for local, j in enumerate(table[n - 1][i])
                if j == r
            )
            level.append(tuple(prefix_swap(diagram, source, target) for target in targets))
        generators.append(tuple(level))
    logger.debug("canonical system built through level %d", levels)
    return GeneratorSystem(diagram, tuple(generators), base_sets)


@dataclass(frozen=True)
class ConditionsReport:
    """Первое нарушение условий (i)-(iii); вершина и индекс нумеруются с 1"""

    passed: bool
    level: Optional[int] = None
    vertex: Optional[int] = None
    index: Optional[int] = None
    condition: Optional[str] = None
    detail: str = ""

    def describe(self) -> str:
        if self.passed:
            return "conditions hold"
        where = f"level {self.level}"
        if self.vertex is not None:
            where += f", vertex {self.vertex}"
        if self.index is not None:
            where += f", index {self.index}"
        return f"condition ({self.condition}) fails at {where}: {self.detail}"


def _fail(n, r, s, condition, detail) -> ConditionsReport:
    report = ConditionsReport(
        False,
        level=n,
        vertex=None if r is None else r + 1,
        index=None if s is None else s + 1,
        condition=condition,
        detail=detail,
    )
    logger.info("%s", report.describe())
    return report


def check_conditions(system: GeneratorSystem, up_to: int) -> ConditionsReport:
    if up_to < 0 or up_to > system.levels:
        raise LevelOutOfRange(f"system has {system.levels} levels, asked {up_to}", level=up_to)
    diagram = system.diagram
    for n in range(1, up_to + 1):
        level = system.generators[n - 1]
        for r, family in enumerate(level):
            base = ClopenSet.of(diagram, (system.base_set(n, r),))
            if not family:
                return _fail(n, r, 0, "i", "vertex has no generators")
            if family[0] != identity_map(diagram, base):
                return _fail(n, r, 0, "i", "first generator is not the identity on B(r, n)")
        lower = [ClopenSet.of(diagram, (b,)) for b in system.base_sets[n - 1]]
        for r, family in enumerate(level):
            for s, sigma in enumerate(family):
                containing = [i for i, b in enumerate(lower) if is_subset(image(sigma), b)]
                if len(containing) != 1:
                    return _fail(n, r, s, "ii", "image lies in no base set of the previous level")
        covered = ClopenSet.empty(diagram)
        for r, family in enumerate(level):
            for s, sigma in enumerate(family):
                target = image(sigma)
                if not intersection(covered, target).is_empty():
                    return _fail(n, r, s, "iii", "image overlaps an earlier image")
                covered = union(covered, target)
        if covered != system.u_set(n - 1):
            missing = difference(system.u_set(n - 1), covered)
            return _fail(n, None, None, "iii", f"images miss {missing}")
    return ConditionsReport(True)


def _containing_base(system: GeneratorSystem, n: int, clopen: ClopenSet) -> int:
    for i, base in enumerate(system.base_sets[n]):
        if is_subset(clopen, ClopenSet.of(system.diagram, (base,))):
            return i
    raise ConditionsViolated(f"image {clopen} lies in no base set of level {n}", level=n)


@lru_cache(maxsize=32)
def _tau_tower(system: GeneratorSystem, n: int):
    if n < 0 or n > system.levels:
        raise LevelOutOfRange(f"system has {system.levels} levels, asked {n}", level=n)
    tower = []
    for level in range(1, n + 1):
        families = system.generators[level - 1]
        if level == 1:
            tower.append(families)
            continue
        previous = tower[-1]
        current = []
        for family in families:
            pairs = []
            for s, sigma in enumerate(family):
                i = _containing_base(system, level - 1, image(sigma))
                for s_prime, tau in enumerate(previous[i]):
                    pairs.append(((s_prime, s), compose(tau, sigma)))
            pairs.sort(key=lambda pair: pair[0])
            current.append(tuple(m for _, m in pairs))
        tower.append(tuple(current))
    return tuple(tower)


def tau_tower(system: GeneratorSystem, n: int):
    """tau^{(1)}, ..., tau^{(n)}; перед построением проверяются условия (i)-(iii)"""
    report = check_conditions(system, n)
    if not report.passed:
        raise ConditionsViolated(report.describe(), level=report.level)
    return _tau_tower(system, n)


def build_tau(system: GeneratorSystem, n: int) -> tuple[tuple[PartialMap, ...], ...]:
    """tau^{(n)}[r][s]: композиции генераторов, упорядоченные по (s', s)"""
    if n < 1:
        raise LevelOutOfRange("tau is defined from level 1", level=n)
    return tau_tower(system, n)[n - 1]


def tau_images(system: GeneratorSystem, n: int) -> tuple[ClopenSet, ...]:
    return tuple(image(tau) for family in build_tau(system, n) for tau in family)


def _groupoid_units(families) -> tuple[PartialMap, ...]:
    return tuple(
        compose(tau, invert(other))
        for family in families
        for tau in family
        for other in family
    )


def groupoid_level(system: GeneratorSystem, n: int) -> tuple[PartialMap, ...]:
    """Элементарный группоид R_n: tau_{r,s} o tau_{r,s'}^{-1}"""
    return _groupoid_units(build_tau(system, n))


def _unit_pairs(units: Iterable[PartialMap], depth: int):
    pairs = set()
    for unit in units:
        pairs.update(unit.refined(depth).items())
    return pairs


def verify_nesting(system: GeneratorSystem, n: int, depth: int) -> bool:
    """R_n содержится в R_{n+1} на уровне цилиндров глубины depth.

    Условия не проверяются заранее: проверка нужна именно для систем,
    где они могут нарушаться.
    """
    if n < 1 or n + 1 > system.levels:
        raise LevelOutOfRange(f"nesting needs levels {n} and {n + 1}", level=n + 1)
    if depth > system.diagram.levels:
        raise LevelOutOfRange(f"depth {depth} exceeds the diagram", level=depth)
    tower = _tau_tower(system, n + 1)
    lower = _unit_pairs(_groupoid_units(tower[n - 1]), depth)
    upper = _unit_pairs(_groupoid_units(tower[n]), depth)
    missing = lower - upper
    if missing:
        source, target = min(missing)
        logger.info("R_%d is not inside R_%d: %s->%s", n, n + 1, source, target)
    return not missing


def system_generators(
    system: GeneratorSystem, up_to: Optional[int] = None
) -> dict[str, PartialMap]:
    """Именованные генераторы sigma<n>.<r>.<s> для поиска слов"""
    if up_to is None:
        up_to = system.levels
    return {
        f"sigma{n}.{r + 1}.{s + 1}": sigma
        for n in range(1, up_to + 1)
        for r, family in enumerate(system.generators[n - 1])
        for s, sigma in enumerate(family)
    }


