import random

import pytest

from afgroupoid.bratteli import (
    BratteliDiagram,
    ClopenSet,
    Cylinder,
    PathPrefix,
    canonical_base_set,
    difference,
    dim_vector,
    enumerate_paths,
    equals,
    intersection,
    is_subset,
    iter_paths,
    path_from_indices,
    refine,
    union,
    validate,
)
from afgroupoid.errors import (
    DepthTooShallow,
    DiagramMismatch,
    LevelOutOfRange,
    NegativeEntry,
    ShapeMismatch,
    VertexOutOfRange,
    ZeroColumn,
    ZeroRow,
)


def cylinder(diagram, *indices):
    return Cylinder(path_from_indices(diagram, indices))


def clopen(diagram, *paths):
    return ClopenSet.of(diagram, (cylinder(diagram, *p) for p in paths))


class TestValidate:
    def test_valid_examples(self, car, gicar, random_diagrams):
        validate(car)
        validate(gicar)
        for diagram in random_diagrams:
            validate(diagram)

    def test_zero_column(self):
        with pytest.raises(ZeroColumn) as exc:
            validate(BratteliDiagram(edge_matrices=(((0,),),)))
        assert exc.value.level == 1
        assert exc.value.column == 1

    def test_zero_row(self):
        diagram = BratteliDiagram(edge_matrices=(((1, 1),), ((1,), (0,))))
        with pytest.raises(ZeroRow) as exc:
            validate(diagram)
        assert exc.value.location() == {"level": 2, "row": 2}

    def test_negative_entry(self):
        with pytest.raises(NegativeEntry) as exc:
            validate(BratteliDiagram(edge_matrices=(((2, -1),),)))
        assert exc.value.column == 2

    def test_shape_mismatch(self):
        diagram = BratteliDiagram(edge_matrices=(((1, 1),), ((1, 1),)))
        with pytest.raises(ShapeMismatch) as exc:
            validate(diagram)
        assert exc.value.level == 2

    def test_ragged_rows(self):
        diagram = BratteliDiagram(edge_matrices=(((1, 1),), ((1, 1), (1,))))
        with pytest.raises(ShapeMismatch):
            validate(diagram)


class TestPaths:
    def test_gicar_dimensions_are_binomial(self, gicar):
        assert dim_vector(gicar, 4) == (1, 4, 6, 4, 1)
        assert dim_vector(gicar, 0) == (1,)

    def test_car_dimensions(self, car):
        for n in range(car.levels + 1):
            assert dim_vector(car, n) == (2**n,)

    def test_dimension_recursion(self, random_diagrams):
        for diagram in random_diagrams:
            for n in range(1, diagram.levels + 1):
                previous = dim_vector(diagram, n - 1)
                matrix = diagram.matrix(n)
                expected = tuple(
                    sum(previous[i] * matrix[i][j] for i in range(len(previous)))
                    for j in range(len(matrix[0]))
                )
                assert dim_vector(diagram, n) == expected

    def test_enumerate_paths_counts_and_order(self, random_diagrams):
        for diagram in random_diagrams:
            n = diagram.levels
            for r, count in enumerate(dim_vector(diagram, n)):
                paths = enumerate_paths(diagram, n, r)
                assert len(paths) == count
                assert list(paths) == sorted(paths)

    def test_all_paths_lexicographic(self, gicar):
        paths = list(iter_paths(gicar, 3))
        assert len(paths) == 8
        assert paths == sorted(paths)

    def test_canonical_base_set_is_first_path(self, gicar, car):
        assert str(canonical_base_set(gicar, 2, 1)) == "(0,1)"
        assert str(canonical_base_set(car, 3, 0)) == "(0,0,0)"
        assert canonical_base_set(car, 0, 0) == Cylinder(PathPrefix())

    def test_vertex_out_of_range(self, gicar):
        with pytest.raises(VertexOutOfRange):
            enumerate_paths(gicar, 2, 3)

    def test_level_out_of_range(self, car):
        with pytest.raises(LevelOutOfRange):
            dim_vector(car, car.levels + 1)

    def test_path_from_indices(self, car, gicar):
        assert path_from_indices(car, (0, 1)).edges == ((0, 0), (0, 1))
        assert path_from_indices(gicar, (1, 1)).edges == ((0, 1), (1, 1))
        with pytest.raises(VertexOutOfRange):
            path_from_indices(car, (2,))


class TestClopenSets:
    def test_sibling_families_merge(self, car):
        assert clopen(car, (0,), (1,)) == ClopenSet.whole(car)
        assert clopen(car, (0, 0), (0, 1)) == clopen(car, (0,))

    def test_nested_cylinders_collapse(self, car):
        assert clopen(car, (0,), (0, 1, 1)).cylinders == (cylinder(car, 0),)

    def test_single_child_merges(self, gicar):
        # вершина 1 уровня 1 GICAR имеет единственный путь, но два продолжения
        a = clopen(gicar, (0, 0), (0, 1))
        assert a == clopen(gicar, (0,))

    def test_refine(self, car):
        pieces = refine(ClopenSet.whole(car), 2)
        assert [str(c) for c in pieces] == ["(0,0)", "(0,1)", "(1,0)", "(1,1)"]

    def test_refine_too_shallow(self, car):
        with pytest.raises(DepthTooShallow):
            refine(clopen(car, (0, 1)), 1)

    def test_boolean_operations(self, car):
        whole = ClopenSet.whole(car)
        left = clopen(car, (0,))
        assert difference(whole, left) == clopen(car, (1,))
        assert intersection(left, clopen(car, (0, 1))) == clopen(car, (0, 1))
        assert intersection(left, clopen(car, (1, 1))).is_empty()
        assert union(left, clopen(car, (1, 0))) | clopen(car, (1, 1)) == whole
        assert is_subset(clopen(car, (0, 1, 1)), left)
        assert not is_subset(whole, left)
        assert equals(left - clopen(car, (0, 0)), clopen(car, (0, 1)))

    def test_complement_union_is_whole(self, random_diagrams):
        for diagram in random_diagrams:
            whole = ClopenSet.whole(diagram)
            paths = list(iter_paths(diagram, 2))
            chosen = ClopenSet.of(diagram, (Cylinder(p) for p in paths[::2]))
            assert union(chosen, difference(whole, chosen)) == whole
            assert intersection(chosen, difference(whole, chosen)).is_empty()
            assert len(refine(whole, diagram.levels)) == sum(dim_vector(diagram, diagram.levels))

    def test_diagram_mismatch(self, car, gicar):
        with pytest.raises(DiagramMismatch):
            union(ClopenSet.whole(car), ClopenSet.whole(gicar))

    def test_invalid_prefix_rejected(self, car):
        with pytest.raises(VertexOutOfRange):
            ClopenSet.of(car, (Cylinder(PathPrefix(((1, 0),))),))

    def test_operations_match_bitmask_oracle(self, random_diagrams):
        rng = random.Random(7)
        for diagram in random_diagrams:
            depth = diagram.levels
            leaves = list(iter_paths(diagram, depth))
            index = {p: k for k, p in enumerate(leaves)}
            prefixes = [p for n in range(depth + 1) for p in iter_paths(diagram, n)]

            def mask(s):
                return sum(1 << index[c.prefix] for c in refine(s, depth))

            for _ in range(10):
                a = ClopenSet.of(diagram, (Cylinder(p) for p in rng.sample(prefixes, 3)))
                b = ClopenSet.of(diagram, (Cylinder(p) for p in rng.sample(prefixes, 2)))
                assert mask(union(a, b)) == mask(a) | mask(b)
                assert mask(intersection(a, b)) == mask(a) & mask(b)
                assert mask(difference(a, b)) == mask(a) & ~mask(b)
                assert equals(a, b) == (mask(a) == mask(b))
                assert ClopenSet.of(diagram, refine(a, depth)) == a
