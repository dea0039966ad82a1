import random
from itertools import product

import pytest

from afgroupoid.bratteli import ClopenSet, Cylinder
from afgroupoid.duality import (
    CharacterApprox,
    SupernaturalScale,
    build_dual_system,
    dual_diagram,
    dual_group,
    prefix_of_residue,
    residue_of,
    tau_translation,
    verify_reconstruction,
)
from afgroupoid.dynsys import build_tau, canonical_system, check_conditions, image
from afgroupoid.errors import DivisibilityViolated, IndexOutOfRange, LevelUnavailable, UsageError
from afgroupoid.examples import car_diagram
from afgroupoid.ktheory import from_system, matrix_rows


@pytest.fixture
def dyadic_scale():
    return SupernaturalScale((1, 2, 4, 8, 16))


@pytest.fixture
def factorial_scale():
    return SupernaturalScale.factorial(5)


class TestScale:
    def test_divisibility(self):
        with pytest.raises(DivisibilityViolated) as exc:
            SupernaturalScale((1, 2, 3))
        assert exc.value.level == 2
        with pytest.raises(DivisibilityViolated):
            SupernaturalScale((2, 4))

    def test_parse(self):
        assert SupernaturalScale.parse("2,4,8").units == (1, 2, 4, 8)
        with pytest.raises(UsageError):
            SupernaturalScale.parse("2,x")

    def test_factorial(self, factorial_scale):
        assert factorial_scale.units == (1, 1, 2, 6, 24, 120)
        assert [factorial_scale.ratio(n) for n in range(1, 6)] == [1, 2, 3, 4, 5]

    def test_repeat_extension(self):
        scale = SupernaturalScale((1, 2, 6), "repeat")
        assert scale.unit(5) == 162
        assert scale.available_levels is None
        with pytest.raises(LevelUnavailable):
            SupernaturalScale((1, 2, 6)).unit(3)

    def test_residue_coding(self, factorial_scale):
        for residue in range(120):
            prefix = prefix_of_residue(factorial_scale, 5, residue)
            assert residue_of(factorial_scale, prefix) == residue


class TestTranslations:
    def test_car(self, dyadic_scale):
        character = tau_translation(dyadic_scale, (2, 1))
        assert character.residues == (1, 1)
        character.validate(dyadic_scale)

    def test_factorial(self, factorial_scale):
        character = tau_translation(factorial_scale, (1, 2, 3))
        assert character.residues[-1] == 5
        assert character.truncate().residues == character.residues[:-1]

    def test_index_out_of_range(self, dyadic_scale):
        with pytest.raises(IndexOutOfRange):
            tau_translation(dyadic_scale, (3,))

    def test_inconsistent_residues(self, dyadic_scale):
        with pytest.raises(IndexOutOfRange):
            CharacterApprox((1, 2)).validate(dyadic_scale)

    def test_truncation_stays_valid(self, factorial_scale):
        rng = random.Random(4)
        for _ in range(30):
            indices = [rng.randint(1, factorial_scale.ratio(i)) for i in range(1, 6)]
            character = tau_translation(factorial_scale, indices)
            while character.depth:
                character.validate(factorial_scale)
                character = character.truncate()

    def test_translations_hit_every_residue_once(self, factorial_scale):
        for n in range(1, 6):
            ranges = [range(1, factorial_scale.ratio(i) + 1) for i in range(1, n + 1)]
            residues = sorted(
                tau_translation(factorial_scale, indices).residues[-1]
                for indices in product(*ranges)
            )
            assert residues == list(range(factorial_scale.unit(n)))

    def test_translations_match_dual_tau(self, factorial_scale, dyadic_scale):
        for scale, levels in ((factorial_scale, 5), (dyadic_scale, 4)):
            system = build_dual_system(scale, levels)
            diagram = system.diagram
            for n in range(1, levels + 1):
                family = build_tau(system, n)[0]
                ranges = [range(1, scale.ratio(i) + 1) for i in range(1, n + 1)]
                for indices, tau in zip(product(*ranges), family, strict=True):
                    residue = tau_translation(scale, indices).residues[-1]
                    target = Cylinder(prefix_of_residue(scale, n, residue))
                    assert image(tau) == ClopenSet.of(diagram, [target])


class TestDualSystem:
    def test_dyadic_dual_is_car(self, dyadic_scale):
        system = build_dual_system(dyadic_scale, 3)
        assert dual_diagram(dyadic_scale, 3) == car_diagram(3)
        assert system.generators == canonical_system(car_diagram(3), 3).generators

    def test_conditions_hold(self, factorial_scale):
        assert check_conditions(build_dual_system(factorial_scale, 5), 5).passed

    def test_factorial_reconstruction(self, factorial_scale):
        assert verify_reconstruction(factorial_scale, 5, 5)
        group = from_system(build_dual_system(factorial_scale, 5), 5)
        assert [matrix_rows(group.matrix(n)) for n in range(5)] == [
            ((1,),),
            ((2,),),
            ((3,),),
            ((4,),),
            ((5,),),
        ]
        assert [group.unit(n) for n in range(6)] == [(u,) for u in factorial_scale.units]

    def test_dyadic_reconstruction(self):
        scale = SupernaturalScale(tuple(2**n for n in range(7)))
        assert verify_reconstruction(scale, 6, 6)
        group = from_system(build_dual_system(scale, 6), 6)
        assert [matrix_rows(group.matrix(n)) for n in range(6)] == [((2,),)] * 6

    def test_random_chains(self):
        rng = random.Random(9)
        for _ in range(10):
            units = [1]
            for _ in range(rng.randint(1, 4)):
                units.append(units[-1] * rng.randint(1, 4))
            scale = SupernaturalScale(tuple(units))
            levels = len(units) - 1
            assert check_conditions(build_dual_system(scale, levels), levels).passed

    def test_dual_group(self):
        group = dual_group(SupernaturalScale((1, 3, 9), "repeat"), 2)
        assert group.unit(4) == (81,)
