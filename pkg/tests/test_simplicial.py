import pytest

from bcom.builtins import builtin_group
from bcom.category import FiniteCategory
from bcom.errors import ResourceLimitError, SimplicialError
from bcom.simplicial import (
    SimplicialMap,
    SimplicialSet,
    disjoint_union,
    identity_map,
    nerve,
    path_components,
    point,
    quotient_by_action,
)


def swap_action(V):
    # (a, b) -> (b, a) on C2xC2 with index 2a + b
    perm = [2 * (g % 2) + g // 2 for g in range(4)]
    return [tuple(range(4)), tuple(perm)]


def test_nerve_c2_one_nondegenerate_per_degree():
    X = nerve(builtin_group("C2"), 5)
    assert [len(X.nondegenerate(n)) for n in range(6)] == [1] * 6


def test_nerve_klein_counts():
    X = nerve(builtin_group("V4"), 4)
    assert [len(X.nondegenerate(n)) for n in range(5)] == [3**n for n in range(5)]


def test_nerve_of_interval():
    C = FiniteCategory.from_poset([0, 1], [(0, 1)])
    X = nerve(C, 3)
    X.check()
    assert [len(X.nondegenerate(n)) for n in range(4)] == [2, 1, 0, 0]


def test_degeneracy_detection():
    X = nerve(builtin_group("S3"), 3)
    assert X.is_degenerate(1, X.degeneracy(0, 0, ()))
    assert not X.is_degenerate(2, (1, 2))
    assert X.is_degenerate(2, (0, 1))
    for n in range(1, 4):
        for x in X.levels[n]:
            assert X.is_degenerate(n, x) == X.is_degenerate_generic(n, x)


def test_structure_maps_are_range_checked():
    X = nerve(builtin_group("C2"), 2)
    with pytest.raises(SimplicialError):
        X.face(1, 2, (1,))
    with pytest.raises(SimplicialError):
        X.degeneracy(1, 2, (1,))


def test_check_catches_broken_face():
    G = builtin_group("C2")
    X = nerve(G, 2)
    bad = SimplicialSet(X.levels, lambda n, i, x: x[1:] if i == 0 else x[:-1], X._degeneracy)
    with pytest.raises(SimplicialError):
        bad.check()


def test_json_round_trip():
    X = nerve(builtin_group("S3"), 3)
    Y = SimplicialSet.from_json(X.to_json())
    assert Y.levels == X.levels
    assert [Y.nondegenerate(n) for n in range(4)] == [X.nondegenerate(n) for n in range(4)]


def test_quotient_trivial_action():
    X = nerve(builtin_group("V4"), 3)
    Q = quotient_by_action(X, [None], lambda g, n, x: x)
    assert [Q.count(n) for n in range(4)] == [X.count(n) for n in range(4)]


def test_quotient_swap_degree_one():
    V = builtin_group("V4")
    X = nerve(V, 3)
    acts = swap_action(V)
    Q = quotient_by_action(X, acts, lambda p, n, x: tuple(p[e] for e in x))
    assert len(Q.nondegenerate(1)) == 2
    Q.check()


def test_quotient_rejects_non_simplicial_action():
    X = nerve(builtin_group("C3"), 2)
    with pytest.raises(SimplicialError):
        quotient_by_action(X, [1], lambda g, n, x: tuple(reversed(x)))


def test_simplicial_map_check_and_compose():
    X = nerve(builtin_group("S3"), 3)
    f = identity_map(X)
    f.check()
    g = f.then(f)
    assert g(2, (1, 2)) == (1, 2)
    bad = SimplicialMap(X, X, lambda n, x: tuple(reversed(x)))
    with pytest.raises(SimplicialError):
        bad.check()


def test_point_disjoint_union_components():
    X = disjoint_union([point(2), nerve(builtin_group("C2"), 2), point(2)])
    X.check()
    assert path_components(X) == 3


def test_simplex_cap(monkeypatch):
    monkeypatch.setenv("BCOM_MAX_SIMPLICES", "100")
    with pytest.raises(ResourceLimitError):
        nerve(builtin_group("S3"), 3)
