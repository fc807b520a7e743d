import json

import pytest

from bcom.builtins import builtin_group
from bcom.category import FiniteCategory
from bcom.commuting import TauSpec
from bcom.errors import TruncationError, ValidationError
from bcom.groups import abelian_subgroup_poset
from bcom.hocolim import (
    Diagram,
    assembly_map,
    class_collapse,
    decomposition_diagram,
    hocolim,
    nondegenerate_chains,
    orbit_bookkeeping,
    pushforward_over_discrete,
)
from bcom.homology import betti, induced_on_homology
from bcom.simplicial import nerve, point

Z = TauSpec.parse("z")


def to_base(n, x):
    return (0,) * n


def two_level(n_objects, arrows):
    """Category whose only non-identity arrows are ``arrows`` and none compose."""
    ids = list(range(n_objects))
    sources = ids + [s for s, _ in arrows]
    targets = ids + [t for _, t in arrows]
    compose = {}
    for f in range(len(sources)):
        compose[(ids[sources[f]], f)] = f
        compose[(f, ids[targets[f]])] = f
    return FiniteCategory(
        tuple(range(n_objects)), tuple(sources), tuple(targets), tuple(ids), compose
    )


def test_one_object_shape():
    X = nerve(builtin_group("S3"), 3)
    Dg = Diagram(FiniteCategory.from_poset(["*"], []), [X], [None])
    H = hocolim(Dg, 2)
    assert [H.count(n) for n in range(4)] == [X.count(n) for n in range(4)]
    assert betti(H, 2, 2) == betti(X, 2, 2)


def test_interval_of_points_is_contractible():
    C = FiniteCategory.from_poset([0, 1], [(0, 1)])
    Dg = Diagram(C, [point(3), point(3)], [None, to_base, None])
    H = hocolim(Dg, 2)
    H.check()
    assert betti(H, 2, 2).dims == (1, 0, 0)
    assert len(H.nondegenerate(1)) == 1


def test_pushout_suspends():
    C = FiniteCategory.from_poset(["L", "M", "R"], [(1, 0), (1, 2)])
    values = [point(3), nerve(builtin_group("C2"), 3), point(3)]
    actions = [None if C.is_identity[f] else to_base for f in range(C.n_arrows)]
    Dg = Diagram(C, values, actions)
    Dg.check()
    assert betti(hocolim(Dg, 2), 2, 2).dims == (1, 0, 1)


def test_hocolim_truncation():
    Dg = Diagram(FiniteCategory.from_poset(["*"], []), [point(2)], [None])
    with pytest.raises(TruncationError):
        hocolim(Dg, 2)


@pytest.mark.parametrize("name", ["V4", "C2xC4", "C6"])
def test_terminal_object(name):
    G = builtin_group(name)
    Dg = decomposition_diagram(G, abelian_subgroup_poset(G), Z, 2)
    top = max(range(Dg.shape.n_objects), key=lambda i: len(Dg.shape.objects[i]))
    for ell in (2, 3):
        assert betti(hocolim(Dg, 2), ell, 2) == betti(Dg.values[top], ell, 2)


def test_decomposition_diagram_examples():
    V = builtin_group("V4")
    Dg = decomposition_diagram(V, abelian_subgroup_poset(V), Z, 2)
    assert Dg.shape.n_objects == 5
    S3 = builtin_group("S3")
    Ds = decomposition_diagram(S3, abelian_subgroup_poset(S3), Z, 2)
    assert Ds.shape.n_objects == 5
    assert sorted(len(o) for o in Ds.shape.objects) == [1, 2, 2, 2, 3]
    trivial = Ds.values[0]
    assert [trivial.count(n) for n in range(4)] == [1, 1, 1, 1]
    Ds.check()


def test_assembly_basics():
    S3 = builtin_group("S3")
    Dg = decomposition_diagram(S3, abelian_subgroup_poset(S3), Z, 2)
    f = assembly_map(S3, Dg, 2)
    f.check()
    assert f(2, ((0, 0, 0), (0, 0))) == (0, 0)
    G = builtin_group("C2xC4")
    from bcom.groups import poset_from_subgroups

    P = poset_from_subgroups(G, [G.whole])
    one = decomposition_diagram(G, P, Z, 2)
    assert induced_on_homology(assembly_map(G, one, 2), 2, 2).is_iso


def test_assembly_s3_integral():
    S3 = builtin_group("S3")
    Dg = decomposition_diagram(S3, abelian_subgroup_poset(S3), Z, 2)
    assert induced_on_homology(assembly_map(S3, Dg, 2), 2, 2).is_iso


def test_pushforward_to_a_point_for_discrete_shapes():
    C = two_level(2, [])
    X = [nerve(builtin_group("C2"), 3), point(3)]
    Dg = Diagram(C, X, [None, None])
    pt = FiniteCategory.from_poset(["*"], [])
    pushed = pushforward_over_discrete(Dg, [0, 0], pt, 2)
    assert pushed.shape.n_objects == 1
    assert betti(hocolim(pushed, 2), 2, 2) == betti(hocolim(Dg, 2), 2, 2)


def test_two_level_example():
    # level 0: objects 0, 1; level 1: objects 2, 3; arrows 0 -> 2 (twice), 1 -> 3
    C = two_level(4, [(0, 2), (0, 2), (1, 3)])
    C.check()
    BC2 = nerve(builtin_group("C2"), 3)
    values = [BC2, point(3), point(3), BC2]
    actions = [None] * 4 + [to_base, to_base, to_base]
    Dg = Diagram(C, values, actions)
    Dg.check()
    interval = FiniteCategory.from_poset([0, 1], [(0, 1)])
    pushed = pushforward_over_discrete(Dg, [0, 0, 1, 1], interval, 2)
    assert list(pushed.shape.objects) == [(0,), (1,), (0, 1)]
    assert len(pushed.shape.non_identity_arrows()) == 2
    counts = {s: [pushed.values[k].count(n) for n in range(4)] for k, s in enumerate(pushed.shape.objects)}
    # disjoint union over objects at each level, and over arrows (payload at the source)
    assert counts[(0,)] == [BC2.count(n) + 1 for n in range(4)]
    assert counts[(1,)] == [1 + BC2.count(n) for n in range(4)]
    assert counts[(0, 1)] == [2 * BC2.count(n) + 1 for n in range(4)]
    pushed.check()
    direct = betti(hocolim(Dg, 2), 2, 2)
    # suspension of BZ/2 with an extra loop, plus a copy of BZ/2
    assert direct.dims == (2, 2, 2)
    assert betti(hocolim(pushed, 2), 2, 2) == direct


def test_identity_reflection_required():
    C = FiniteCategory.from_poset([0, 1], [(0, 1)])
    Dg = Diagram(C, [point(3), point(3)], [None, to_base, None])
    pt = FiniteCategory.from_poset(["*"], [])
    with pytest.raises(ValidationError, match="identity"):
        pushforward_over_discrete(Dg, [0, 0], pt, 2)


def test_target_must_be_poset():
    # one object with a nontrivial automorphism
    loop = FiniteCategory(("*",), (0, 0), (0, 0), (0,), {(0, 0): 0, (0, 1): 1, (1, 0): 1, (1, 1): 0})
    loop.check()
    with pytest.raises(ValidationError, match="poset"):
        nondegenerate_chains(loop)
    Dg = Diagram(FiniteCategory.from_poset(["*"], []), [point(3)], [None])
    with pytest.raises(ValidationError):
        pushforward_over_discrete(Dg, [0], loop, 2)


def test_diagram_json_round_trip():
    C = FiniteCategory.from_poset(["L", "M", "R"], [(1, 0), (1, 2)])
    values = [point(3), nerve(builtin_group("C2"), 3), point(3)]
    actions = [None if C.is_identity[f] else to_base for f in range(C.n_arrows)]
    Dg = Diagram(C, values, actions, "pushout")
    again = Diagram.from_json(json.loads(json.dumps(Dg.to_json())))
    assert betti(hocolim(again, 2), 2, 2) == betti(hocolim(Dg, 2), 2, 2)


def test_broken_functor_detected():
    C = FiniteCategory.from_poset([0, 1], [(0, 1)])
    X = nerve(builtin_group("C3"), 2)
    Dg = Diagram(C, [X, X], [None, lambda n, x: tuple(reversed(x)), None])
    with pytest.raises(Exception):
        Dg.check()


@pytest.mark.parametrize("name", ["S3", "Q8", "D4"])
def test_orbit_bookkeeping(name):
    G = builtin_group(name)
    P = abelian_subgroup_poset(G)
    Dg = decomposition_diagram(G, P, Z, 1)
    rho, C = class_collapse(P)
    pushed = pushforward_over_discrete(Dg, rho, C, 1)
    rows = orbit_bookkeeping(G, P, Dg, pushed, 1)
    assert len(rows) == pushed.shape.n_objects
    assert all(r.consistent for r in rows)
    # every class chain has finitely many orbits, at least one
    assert all(1 <= len(r.orbit_sizes) <= r.lifts for r in rows)
