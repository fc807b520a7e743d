"""Exhaustive invariants over every builtin group of order at most 200."""

import numpy as np
import pytest

from bcom.builtins import CATALOG, builtin_group
from bcom.commuting import TauSpec, build_bcom, hom_set, inclusion_map
from bcom.groups import abelian_subgroup_poset, centralizer, exponent_valuation
from bcom.homology import compose_induced, induced_on_homology, normalized_chains

import oracles

GROUPS = [name for name in CATALOG if builtin_group(name).order <= 200]
Z = TauSpec.parse("z")


def primes_dividing(n):
    return [p for p in (2, 3, 5, 7) if n % p == 0]


@pytest.mark.parametrize("name", GROUPS)
def test_simplicial_identities(name):
    G = builtin_group(name)
    for tau in ("z", "free"):
        D = 2 if tau == "z" or G.order <= 12 else 1
        build_bcom(G, TauSpec.parse(tau), D).check()
    for ell in primes_dividing(G.order):
        build_bcom(G, TauSpec("zmod", ell), 2).check()


@pytest.mark.parametrize("name", GROUPS)
def test_boundary_squares_to_zero(name):
    G = builtin_group(name)
    X = build_bcom(G, Z, 2)
    for ell in primes_dividing(G.order) or [2]:
        C = normalized_chains(X, ell, 2)
        C.check()
        if C.dim(3) * C.dim(1) <= 2_000_000:
            assert not ((C.boundary_matrix(2) @ C.boundary_matrix(3)) % ell).any()


@pytest.mark.parametrize("name", GROUPS)
def test_class_equation(name):
    G = builtin_group(name)
    pairs = hom_set(G, Z, 2)
    assert len(pairs) == sum(centralizer(G, [g]).order for g in range(G.order))
    if G.order <= 60:
        assert pairs == oracles.commuting_tuples(G.mul, 2)


@pytest.mark.parametrize("name", GROUPS)
def test_poset_closure(name):
    G = builtin_group(name)
    for require_center in (False, True):
        P = abelian_subgroup_poset(G, require_center)
        P.check_closure()
        assert sum(len(c) for c in P.classes) == len(P)


@pytest.mark.parametrize("name", GROUPS)
def test_induced_maps_are_functorial(name):
    G = builtin_group(name)
    D = 1
    for ell in primes_dividing(G.order):
        taus = [TauSpec("zmod", ell ** exponent_valuation(G, ell)), Z, TauSpec.parse("free")]
        X, Y, W = (build_bcom(G, t, D) for t in taus)
        CX, CY, CW = (normalized_chains(S, ell, D) for S in (X, Y, W))
        f = inclusion_map(G, taus[0], taus[1], D, X, Y)
        g = inclusion_map(G, taus[1], taus[2], D, Y, W)
        first = induced_on_homology(f, ell, D, CX, CY)
        second = induced_on_homology(g, ell, D, CY, CW)
        direct = induced_on_homology(f.then(g), ell, D, CX, CW, verify_map=False)
        for A, B in zip(compose_induced(first, second), direct.matrices):
            assert np.array_equal(A, B)
