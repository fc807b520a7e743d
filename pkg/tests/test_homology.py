import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from bcom.builtins import builtin_group
from bcom.category import FiniteCategory
from bcom.commuting import TauSpec, build_bcom, inclusion_map
from bcom.errors import TruncationError
from bcom.homology import (
    BettiTable,
    betti,
    compose_induced,
    induced_on_homology,
    normalized_chains,
)
from bcom.simplicial import SimplicialMap, identity_map, nerve, path_components, point

import oracles


def unnormalized(X, ell, D):
    return oracles.unnormalized_betti(X.levels, X._face, ell, D)


def test_nerve_c2_mod2_boundaries_vanish():
    C = normalized_chains(nerve(builtin_group("C2"), 5), 2, 4)
    assert all(not col for n in range(1, 6) for col in C.boundary[n])


def test_spec_betti_examples():
    assert betti(nerve(builtin_group("C2"), 5), 2, 4).dims == (1, 1, 1, 1, 1)
    assert betti(build_bcom(builtin_group("S3"), TauSpec.parse("zmod:2"), 3), 2, 3).dims == (1, 3, 3, 3)
    assert betti(nerve(builtin_group("C3"), 4), 2, 3).dims == (1, 0, 0, 0)
    assert betti(point(4), 3, 3).dims == (1, 0, 0, 0)
    C = FiniteCategory.from_poset([0, 1], [(0, 1)])
    assert betti(nerve(C, 3), 2, 2).dims == (1, 0, 0)


# the unnormalized complex is an independent route to the same numbers
@pytest.mark.parametrize(
    "name,tau,ell,D",
    [
        ("S3", "zmod:2", 2, 3),
        ("S3", "z", 3, 2),
        ("Q8", "z", 2, 2),
        ("D4", "zmod:2", 2, 2),
        ("A4", "zmod:3", 3, 2),
        ("V4", "free", 2, 2),
        ("C3", "z", 3, 3),
    ],
)
def test_normalized_matches_unnormalized(name, tau, ell, D):
    X = build_bcom(builtin_group(name), TauSpec.parse(tau), D)
    assert betti(X, ell, D).dims == unnormalized(X, ell, D)


def test_truncation_enforced():
    X = build_bcom(builtin_group("S3"), TauSpec.parse("z"), 2)
    with pytest.raises(TruncationError):
        betti(X, 2, 3)


@pytest.mark.parametrize("name", ["C3", "C5", "S3", "A4"])
def test_coprime_order_kills_positive_homology(name):
    G = builtin_group(name)
    ell = next(p for p in (2, 3, 5, 7) if G.order % p)
    assert betti(nerve(G, 4), ell, 3).reduced() == (0, 0, 0, 0)


def test_h0_counts_components():
    from bcom.simplicial import disjoint_union

    X = disjoint_union([point(3), nerve(builtin_group("C2"), 3)])
    assert betti(X, 2, 2).dims[0] == path_components(X) == 2


def test_induced_spec_examples():
    S3 = builtin_group("S3")
    X = build_bcom(S3, TauSpec.parse("z"), 3)
    assert induced_on_homology(identity_map(X), 2, 3).is_iso
    f = inclusion_map(S3, TauSpec.parse("zmod:2"), TauSpec.parse("z"), 3)
    assert induced_on_homology(f, 2, 3).is_iso
    g = inclusion_map(S3, TauSpec.parse("zmod:2"), TauSpec.parse("z"), 2)
    assert not induced_on_homology(g, 3, 2).is_iso


def test_induced_rejects_non_simplicial_map():
    X = nerve(builtin_group("S3"), 2)
    bad = SimplicialMap(X, X, lambda n, x: tuple(reversed(x)))
    with pytest.raises(Exception):
        induced_on_homology(bad, 2, 1)


@pytest.mark.parametrize("name,ell", [("D4", 2), ("Q8", 2), ("S3", 3), ("A4", 2)])
def test_functoriality(name, ell):
    G = builtin_group(name)
    taus = [TauSpec.parse(t) for t in ("zmod:2", "z", "free")]
    if name in ("S3",):
        taus[0] = TauSpec.parse("zmod:3")
    D = 2
    X, Y, W = (build_bcom(G, t, D) for t in taus)
    f = inclusion_map(G, taus[0], taus[1], D, X, Y)
    g = inclusion_map(G, taus[1], taus[2], D, Y, W)
    CX, CY, CW = (normalized_chains(S, ell, D) for S in (X, Y, W))
    Mf = induced_on_homology(f, ell, D, CX, CY)
    Mg = induced_on_homology(g, ell, D, CY, CW)
    Mgf = induced_on_homology(f.then(g), ell, D, CX, CW)
    for A, B in zip(compose_induced(Mf, Mg), Mgf.matrices):
        assert np.array_equal(A, B)


def test_betti_table_serialisation():
    t = BettiTable(2, (1, 3, 3))
    assert BettiTable.from_json(json.loads(json.dumps(t.to_json()))) == t
    assert t.to_csv().splitlines() == ["ell,degree,dim", "2,0,1", "2,1,3", "2,2,3"]
    assert t.reduced() == (0, 3, 3)


def test_dense_and_sparse_rank_agree_on_boundaries():
    X = build_bcom(builtin_group("S4"), TauSpec.parse("z"), 2)
    C = normalized_chains(X, 2, 2)
    assert C.betti(2, "dense") == C.betti(2, "sparse")


def test_conjugate_action_invariance():
    from bcom.cases import klein_automorphisms
    from bcom.simplicial import quotient_by_action

    auts = klein_automorphisms(builtin_group("V4"))
    X = nerve(builtin_group("V4"), 3)
    ident = tuple(range(4))
    # an order-2 subgroup of automorphisms and its conjugate by a 3-cycle
    swap = next(m for m in auts if m != ident and m[1] == 1)
    c = next(m for m in auts if m[1] != 1 and m[m[1]] != 1)
    c_inv = tuple(c.index(x) for x in range(4))
    sub = [ident, swap]
    conj = [tuple(c[m[c_inv[x]]] for x in range(4)) for m in sub]
    assert conj != sub
    act = lambda m, n, x: tuple(m[e] for e in x)
    for ell in (2, 3):
        assert betti(quotient_by_action(X, sub, act), ell, 2) == betti(quotient_by_action(X, conj, act), ell, 2)


@given(st.sampled_from(["S3", "Q8", "D4", "C2xC4"]), st.sampled_from([2, 3]))
def test_boundary_squares_to_zero(name, ell):
    C = normalized_chains(build_bcom(builtin_group(name), TauSpec.parse("z"), 2), ell, 2)
    C.check()
    for n in range(2, 4):
        B1, B2 = C.boundary_matrix(n - 1), C.boundary_matrix(n)
        assert not ((B1 @ B2) % ell).any()
