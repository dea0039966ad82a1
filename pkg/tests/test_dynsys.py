import random

import pytest

from afgroupoid.bratteli import (
    ClopenSet,
    Cylinder,
    PathPrefix,
    dim_vector,
    enumerate_paths,
    is_subset,
    iter_paths,
    path_from_indices,
)
from afgroupoid.dynsys import (
    AddingMachine,
    GeneratorSystem,
    Letter,
    NonAFCertificate,
    NotFound,
    PartialMap,
    PrefixSwap,
    build_tau,
    canonical_system,
    check_conditions,
    compose,
    domain,
    find_non_af_certificate,
    groupoid_level,
    identity_map,
    image,
    invert,
    odometer_generators,
    prefix_swap,
    render_word,
    restrict,
    system_generators,
    tau_images,
    validate_certificate,
    verify_nesting,
    word_image,
)
from afgroupoid.errors import (
    ConditionsViolated,
    CylinderStraddlesRules,
    DiagramMismatch,
    InvalidGeneratorSystem,
    InvalidPartialMap,
    LevelOutOfRange,
    UndefinedOnCylinder,
    UnknownGenerator,
)
from afgroupoid.examples import car_diagram, gicar_diagram


def swap(diagram, source, target):
    return prefix_swap(
        diagram, path_from_indices(diagram, source), path_from_indices(diagram, target)
    )


def cyl(diagram, *indices):
    return Cylinder(path_from_indices(diagram, indices))


class TestPartialMaps:
    def test_normal_form_merges_swaps(self, car):
        split = PartialMap(
            car,
            (
                PrefixSwap(path_from_indices(car, (0, 0)), path_from_indices(car, (1, 0))),
                PrefixSwap(path_from_indices(car, (0, 1)), path_from_indices(car, (1, 1))),
            ),
        )
        assert split == swap(car, (0,), (1,))
        assert len(split.rules) == 1

    def test_non_injective_rejected(self, car):
        with pytest.raises(InvalidPartialMap):
            PartialMap(
                car,
                (
                    PrefixSwap(path_from_indices(car, (0,)), path_from_indices(car, (1,))),
                    PrefixSwap(path_from_indices(car, (1,)), path_from_indices(car, (1,))),
                ),
            )

    def test_overlapping_sources_rejected(self, car):
        with pytest.raises(InvalidPartialMap):
            PartialMap(
                car,
                (
                    PrefixSwap(path_from_indices(car, (0,)), path_from_indices(car, (0,))),
                    PrefixSwap(path_from_indices(car, (0, 1)), path_from_indices(car, (1, 1))),
                ),
            )

    def test_different_terminal_vertices_rejected(self, gicar):
        with pytest.raises(InvalidPartialMap):
            swap(gicar, (0,), (1,))

    def test_compose_and_invert(self, car):
        f = swap(car, (0, 0), (0, 1))
        g = swap(car, (0, 1), (1, 1))
        assert compose(g, f) == swap(car, (0, 0), (1, 1))
        assert compose(f, g).is_empty()
        assert invert(invert(f)) == f
        assert compose(invert(f), f) == identity_map(car, ClopenSet.of(car, [cyl(car, 0, 0)]))

    def test_restrict_domain_image(self, car):
        f = swap(car, (0,), (1,))
        part = restrict(f, ClopenSet.of(car, [cyl(car, 0, 1, 0)]))
        assert part == swap(car, (0, 1, 0), (1, 1, 0))
        assert domain(f) == ClopenSet.of(car, [cyl(car, 0)])
        assert image(f, ClopenSet.of(car, [cyl(car, 0, 0)])) == ClopenSet.of(car, [cyl(car, 1, 0)])

    def test_diagram_mismatch(self, car):
        other = car_diagram(3)
        with pytest.raises(DiagramMismatch):
            compose(swap(car, (0,), (1,)), swap(other, (0,), (1,)))


class TestCanonicalSystem:
    def test_conditions_hold(self, car, gicar, random_diagrams, five_level_diagrams):
        assert check_conditions(canonical_system(car, 4), 4).passed
        assert check_conditions(canonical_system(gicar, 5), 5).passed
        for diagram in random_diagrams:
            assert check_conditions(canonical_system(diagram, 3), 3).passed
        for diagram in five_level_diagrams:
            assert check_conditions(canonical_system(diagram, 5), 5).passed

    def test_car_second_level(self, car_system, car):
        assert car_system.sigma(2, 0, 0) == identity_map(car, ClopenSet.of(car, [cyl(car, 0, 0)]))
        assert car_system.sigma(2, 0, 1) == swap(car, (0, 0), (0, 1))

    def test_car_tau_ordering(self, car_system, car):
        taus = build_tau(car_system, 2)[0]
        expected = [
            swap(car, (0, 0), (0, 0)),
            swap(car, (0, 0), (0, 1)),
            swap(car, (0, 0), (1, 0)),
            swap(car, (0, 0), (1, 1)),
        ]
        assert list(taus) == expected

    def test_tau_counts_match_dimensions(self, random_diagrams):
        for diagram in random_diagrams[:8]:
            system = canonical_system(diagram, 3)
            for n in range(1, 4):
                counts = tuple(len(family) for family in build_tau(system, n))
                assert counts == dim_vector(diagram, n)

    def test_tau_images_partition_space(self, gicar):
        system = canonical_system(gicar, 3)
        images = tau_images(system, 3)
        covered = ClopenSet.empty(gicar)
        for piece in images:
            assert (covered & piece).is_empty()
            covered = covered | piece
        assert covered == ClopenSet.whole(gicar)

    def test_tau_partitions_refine(self, gicar, deep_random_diagrams):
        for diagram, levels in [(gicar, 4)] + [(d, 4) for d in deep_random_diagrams[:10]]:
            system = canonical_system(diagram, levels)
            for n in range(1, levels):
                coarse = tau_images(system, n)
                for piece in tau_images(system, n + 1):
                    assert sum(1 for c in coarse if is_subset(piece, c)) == 1

    def test_matrix_units(self, gicar, random_diagrams):
        for diagram in [gicar] + random_diagrams[:6]:
            system = canonical_system(diagram, 3)
            for family in build_tau(system, 3):
                for s, tau in enumerate(family):
                    for t, other in enumerate(family):
                        unit = compose(tau, invert(other))
                        square = compose(unit, unit)
                        if s == t:
                            assert unit == identity_map(diagram, image(tau))
                            assert square == unit
                        else:
                            assert square.is_empty()
                            assert domain(unit) == image(other)
                            assert image(unit) == image(tau)

    def test_matrix_unit_products(self, car_system):
        family = build_tau(car_system, 3)[0]
        for a in family[:4]:
            for b in family[:4]:
                for c in family[:4]:
                    left = compose(compose(a, invert(b)), compose(b, invert(c)))
                    assert left == compose(a, invert(c))

    def test_groupoid_level_relations_are_disjoint(self, gicar, random_diagrams):
        for diagram in [gicar] + random_diagrams[:6]:
            system = canonical_system(diagram, 3)
            for n in range(1, 4):
                relations = [set(unit.refined(n).items()) for unit in groupoid_level(system, n)]
                for i, first in enumerate(relations):
                    for second in relations[i + 1 :]:
                        assert first == second or not first & second

    def test_groupoid_level_size(self, car_system):
        assert len(groupoid_level(car_system, 2)) == 16

    def test_nesting(self, car_system, gicar):
        assert verify_nesting(car_system, 1, 3)
        assert verify_nesting(car_system, 2, 3)
        assert verify_nesting(canonical_system(gicar, 3), 2, 3)

    def test_nesting_on_random_diagrams(self, deep_random_diagrams):
        for diagram in deep_random_diagrams:
            system = canonical_system(diagram, 4)
            for n in range(1, 4):
                assert verify_nesting(system, n, 4)
                sizes = sum(k * k for k in dim_vector(diagram, n))
                assert len(groupoid_level(system, n)) == sizes

    def test_level_out_of_range(self, car):
        with pytest.raises(LevelOutOfRange):
            canonical_system(car, 5)


class TestPlantedViolations:
    def test_first_generator_not_identity(self, car_system, car):
        planted = car_system.with_generator(1, 0, 0, swap(car, (0,), (1,)))
        report = check_conditions(planted, 2)
        assert not report.passed
        assert (report.level, report.vertex, report.index, report.condition) == (1, 1, 1, "i")

    def test_image_outside_previous_base(self, car_system, car):
        planted = car_system.with_generator(2, 0, 1, swap(car, (0, 0), (1, 0)))
        report = check_conditions(planted, 2)
        assert (report.level, report.vertex, report.index, report.condition) == (2, 1, 2, "ii")

    def test_overlapping_images(self, car_system, car):
        planted = car_system.with_generator(2, 0, 1, swap(car, (0, 0), (0, 0)))
        report = check_conditions(planted, 2)
        assert (report.level, report.vertex, report.index, report.condition) == (2, 1, 2, "iii")
        with pytest.raises(ConditionsViolated):
            build_tau(planted, 2)

    def test_overlap_breaks_nesting(self, car_system, car):
        planted = car_system.with_generator(2, 0, 1, swap(car, (0, 0), (0, 0)))
        assert not verify_nesting(planted, 1, 2)

    def test_wrong_domain_rejected(self, car_system, car):
        with pytest.raises(InvalidGeneratorSystem):
            car_system.with_generator(2, 0, 1, swap(car, (0, 1), (0, 0)))

    def test_level_zero_must_be_whole_space(self, car_system, car):
        with pytest.raises(InvalidGeneratorSystem) as excinfo:
            GeneratorSystem(
                car, car_system.generators, ((cyl(car, 0),),) + car_system.base_sets[1:]
            )
        assert excinfo.value.level == 0


class TestAddingMachine:
    def test_carry(self):
        machine = AddingMachine((2, 2, 2))
        assert machine.shift((1, 1, 0)) == ((0, 0, 1), True)
        assert machine.shift((1, 1, 1)) == ((0, 0, 0), False)
        assert machine.inverse().shift((0, 0, 0)) == ((1, 1, 1), False)

    def test_mixed_radix(self):
        machine = AddingMachine((2, 3))
        assert machine.shift((1, 0), 3) == ((0, 2), True)
        assert machine.shift((1, 2), 1) == ((0, 0), False)

    def test_invalid_base(self):
        with pytest.raises(InvalidPartialMap):
            AddingMachine((2, 1))

    def test_word_image(self):
        generators = odometer_generators((2, 2, 2))
        word = (Letter("φ"), Letter("φ"))
        machine_diagram = generators["φ"].diagram()
        image_cylinder, tail = word_image(generators, word, cyl(machine_diagram, 0))
        assert image_cylinder == cyl(machine_diagram, 0)
        assert not tail
        with pytest.raises(UnknownGenerator):
            word_image(generators, (Letter("ψ"),), cyl(machine_diagram, 0))

    def test_straddling_cylinder(self, car):
        generators = {"a": swap(car, (0, 0), (0, 1))}
        with pytest.raises(CylinderStraddlesRules):
            word_image(generators, (Letter("a"),), cyl(car, 0))
        with pytest.raises(UndefinedOnCylinder) as excinfo:
            word_image(generators, (Letter("a"),), cyl(car, 1))
        assert not isinstance(excinfo.value, CylinderStraddlesRules)
        assert excinfo.value.error_type != CylinderStraddlesRules.error_type


class TestNonAFCertificate:
    def test_odometer_certificate(self):
        generators = odometer_generators((2, 2, 2))
        result = find_non_af_certificate(generators, 2, 3)
        assert isinstance(result, NonAFCertificate)
        assert render_word(result.word) == "φφ"
        assert str(result.base) == "(0)"
        assert str(result.witness) == "(0,0,0)"
        assert str(result.witness_image) == "(0,1,0)"
        assert validate_certificate(generators, result)

    def test_single_letter_words_do_not_certify(self):
        result = find_non_af_certificate(odometer_generators((2, 2, 2)), 1, 3)
        assert result == NotFound(1, 3)

    def test_af_groupoid_has_no_certificate(self):
        diagram = car_diagram(5)
        generators = system_generators(canonical_system(diagram, 3))
        assert find_non_af_certificate(generators, 4, 5) == NotFound(4, 5)

    def test_gicar_has_no_certificate(self):
        diagram = gicar_diagram(3)
        generators = system_generators(canonical_system(diagram, 2))
        assert isinstance(find_non_af_certificate(generators, 2, 3), NotFound)

    def test_depth_beyond_diagram(self):
        with pytest.raises(LevelOutOfRange):
            find_non_af_certificate(odometer_generators((2, 2)), 2, 3)

    def test_base_is_never_whole_space(self):
        result = find_non_af_certificate(odometer_generators((2, 2, 2)), 2, 3)
        assert result.base.prefix != PathPrefix()


class TestInverseSemigroupLaws:
    """Законы инверсной полугруппы на случайных заменах префиксов"""

    @pytest.fixture
    def maps(self):
        rng = random.Random(7)
        diagram = car_diagram(4)
        result = []
        for _ in range(12):
            depth = rng.randint(1, 3)
            source = tuple(rng.randint(0, 1) for _ in range(depth))
            target = tuple(rng.randint(0, 1) for _ in range(depth))
            result.append(swap(diagram, source, target))
        return result

    def test_associativity(self, maps):
        for f in maps[:6]:
            for g in maps[3:9]:
                for h in maps[6:]:
                    assert compose(h, compose(g, f)) == compose(compose(h, g), f)

    def test_inverse_laws(self, maps):
        for f in maps:
            assert compose(f, compose(invert(f), f)) == f
            assert compose(invert(f), f) == identity_map(f.diagram, domain(f))
            assert compose(f, invert(f)) == identity_map(f.diagram, image(f))


def random_map(rng, diagram):
    # перестановка части путей в одну вершину
    n = rng.randint(1, diagram.levels)
    r = rng.randrange(diagram.vertex_count(n))
    paths = enumerate_paths(diagram, n, r)
    sources = rng.sample(paths, rng.randint(1, len(paths)))
    targets = rng.sample(paths, len(sources))
    return PartialMap(diagram, tuple(PrefixSwap(s, t) for s, t in zip(sources, targets)))


class TestPointwiseOracle:
    """compose и restrict против поточечных таблиц на полной глубине"""

    def test_compose_and_restrict(self, deep_random_diagrams):
        rng = random.Random(5)
        for case in range(1000):
            diagram = deep_random_diagrams[case % len(deep_random_diagrams)]
            depth = diagram.levels
            f = random_map(rng, diagram)
            g = random_map(rng, diagram)
            f_table = f.refined(depth)
            g_table = g.refined(depth)

            expected = {s: g_table[m] for s, m in f_table.items() if m in g_table}
            assert compose(g, f).refined(depth) == expected

            prefixes = list(iter_paths(diagram, rng.randint(0, depth)))
            chosen = ClopenSet.of(diagram, (Cylinder(p) for p in rng.sample(prefixes, 1)))
            restricted = {s: t for s, t in f_table.items() if chosen.covers(s)}
            assert restrict(f, chosen).refined(depth) == restricted

            assert invert(compose(g, f)) == compose(invert(f), invert(g))
            assert compose(f, compose(invert(f), f)) == f
