"""Двойственная система для супернатуральной шкалы u_0 = 1 | u_1 | u_2 | ...

Путь длины n в диаграмме с матрицами [s(1)], ..., [s(n)], s(i) = u_i / u_{i-1},
кодирует вычет по модулю u_n: цифра d_i дает вклад d_i u_{i-1}. Генераторы
двойственной системы - сдвиги на кратные u_{n-1}.
"""

import logging
from dataclasses import dataclass
from typing import Sequence

from .bratteli import BratteliDiagram, Cylinder, PathPrefix, refine
from .dynsys import GeneratorSystem, prefix_swap, tau_images
from .errors import DivisibilityViolated, IndexOutOfRange, LevelUnavailable, UsageError
from .ktheory import DirectLimitGroup, from_system, matrix_rows

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SupernaturalScale:
    units: tuple[int, ...]
    extension: str = "none"

    def __post_init__(self):
        object.__setattr__(self, "units", tuple(self.units))
        if not self.units or self.units[0] != 1:
            raise DivisibilityViolated("scale must start with u_0 = 1", level=0)
        if self.extension not in ("none", "repeat"):
            raise UsageError(f"unknown extension {self.extension!r}")
        for n in range(1, len(self.units)):
            previous, current = self.units[n - 1], self.units[n]
            if current < 1 or current % previous:
                raise DivisibilityViolated(
                    f"u_{n - 1} = {previous} does not divide u_{n} = {current}", level=n
                )

    @classmethod
    def parse(cls, text: str, extension: str = "none") -> "SupernaturalScale":
        """'2,4,8' задает u_1, u_2, u_3; u_0 = 1 добавляется автоматически"""
        try:
            values = tuple(int(token) for token in text.split(",") if token.strip())
        except ValueError:
            raise UsageError(f"scale {text!r} is not a comma separated list of integers")
        if not values:
            raise UsageError("scale is empty")
        return cls((1,) + values, extension)

    @classmethod
    def factorial(cls, levels: int) -> "SupernaturalScale":
        units = [1]
        for n in range(1, levels + 1):
            units.append(units[-1] * n)
        return cls(tuple(units))

    @property
    def available_levels(self):
        return len(self.units) - 1 if self.extension == "none" else None

    def unit(self, n: int) -> int:
        if n < 0:
            raise LevelUnavailable(f"no unit at level {n}", level=n)
        last = len(self.units) - 1
        if n <= last:
            return self.units[n]
        if self.extension == "none":
            raise LevelUnavailable(f"scale is given through level {last}", level=n)
        ratio = self.ratio(last) if last > 0 else 1
        return self.units[last] * ratio ** (n - last)

    def ratio(self, n: int) -> int:
        """s(n) = u_n / u_{n-1}"""
        if n < 1:
            raise LevelUnavailable("ratios start at level 1", level=n)
        return self.unit(n) // self.unit(n - 1)


def dual_diagram(scale: SupernaturalScale, levels: int) -> BratteliDiagram:
    return BratteliDiagram(
        edge_matrices=tuple(((scale.ratio(n),),) for n in range(1, levels + 1))
    )


def residue_of(scale: SupernaturalScale, prefix: PathPrefix) -> int:
    return sum(d * scale.unit(t) for t, d in enumerate(prefix.local_indices()))


def prefix_of_residue(scale: SupernaturalScale, n: int, residue: int) -> PathPrefix:
    residue %= scale.unit(n)
    return PathPrefix(
        tuple((0, (residue // scale.unit(t - 1)) % scale.ratio(t)) for t in range(1, n + 1))
    )


def build_dual_system(scale: SupernaturalScale, levels: int) -> GeneratorSystem:
    """sigma^{(n)}_{1,s}: сдвиг на (s-1) u_{n-1} на множестве вычетов 0 mod u_n"""
    diagram = dual_diagram(scale, levels)
    base_sets = tuple(
        (Cylinder(prefix_of_residue(scale, n, 0)),) for n in range(levels + 1)
    )
    generators = []
    for n in range(1, levels + 1):
        source = prefix_of_residue(scale, n, 0)
        family = tuple(
            prefix_swap(
                diagram,
                source,
                prefix_of_residue(scale, n, s * scale.unit(n - 1)),
            )
            for s in range(scale.ratio(n))
        )
        generators.append((family,))
    return GeneratorSystem(diagram, tuple(generators), base_sets)


@dataclass(frozen=True)
class CharacterApprox:
    """Согласованные вычеты r_m mod u_m, m = 1..depth"""

    residues: tuple[int, ...]

    @property
    def depth(self) -> int:
        return len(self.residues)

    def validate(self, scale: SupernaturalScale) -> None:
        previous = 0
        for m, residue in enumerate(self.residues, start=1):
            modulus = scale.unit(m)
            if not 0 <= residue < modulus:
                raise IndexOutOfRange(f"residue {residue} outside 0..{modulus - 1}", level=m)
            if residue % scale.unit(m - 1) != previous:
                raise IndexOutOfRange(
                    f"residue {residue} mod u_{m - 1} disagrees with level {m - 1}", level=m
                )
            previous = residue

    def truncate(self) -> "CharacterApprox":
        return CharacterApprox(self.residues[:-1])

    def __str__(self) -> str:
        return "(" + ",".join(str(r) for r in self.residues) + ")"


def tau_translation(scale: SupernaturalScale, indices: Sequence[int]) -> CharacterApprox:
    """tau_{(s_1..s_n)}: сумма (s_i - 1) u_{i-1} по модулю u_m для каждого m"""
    residues = []
    total = 0
    for i, s in enumerate(indices, start=1):
        ratio = scale.ratio(i)
        if not 1 <= s <= ratio:
            raise IndexOutOfRange(f"index {s} outside 1..{ratio}", level=i)
        total += (s - 1) * scale.unit(i - 1)
        residues.append(total % scale.unit(i))
    return CharacterApprox(tuple(residues))


def dual_group(scale: SupernaturalScale, levels: int) -> DirectLimitGroup:
    return DirectLimitGroup(
        [[[scale.ratio(n)]] for n in range(1, levels + 1)],
        extension="repeat" if scale.extension == "repeat" else "none",
    )


def verify_reconstruction(scale: SupernaturalScale, levels: int, horizon: int) -> bool:
    """K_0 двойственной системы: ранг 1, C_n = [s(n+1)], u_n = [u_n], образы tau - все вычеты"""
    top = min(levels, horizon)
    system = build_dual_system(scale, levels)
    group = from_system(system, top)
    for n in range(top + 1):
        if group.unit(n) != (scale.unit(n),):
            logger.warning("order unit at level %d is %s", n, group.unit(n))
            return False
    for n in range(top):
        if matrix_rows(group.matrix(n)) != ((scale.ratio(n + 1),),):
            logger.warning("C_%d is %s", n, matrix_rows(group.matrix(n)))
            return False
    for n in range(1, top + 1):
        residues = sorted(
            residue_of(scale, cylinder.prefix)
            for clopen in tau_images(system, n)
            for cylinder in refine(clopen, n)
        )
        if residues != list(range(scale.unit(n))):
            logger.warning("tau images at level %d do not hit every residue", n)
            return False
    return True
