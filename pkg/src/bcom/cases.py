"""Worked examples as executable checks.

Every study returns a report object with ``to_json()`` and ``checks()``;
the latter is a list of :class:`Check` rows consumed by ``bcom verify``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import permutations, product

from .builtins import builtin_group, cyclic, gl2, matrix_entries, prime_power, product as group_product
from .commuting import TauSpec, build_bcom, inclusion_map, stabilized_adic
from .errors import ValidationError
from .groups import (
    FiniteGroup,
    Subgroup,
    abelian_subgroups,
    center,
    ell_torsion,
    is_prime,
    normalizer,
    poset_from_subgroups,
    subgroup_from_mask,
    to_mask,
    valuation,
)
from .hocolim import assembly_map, decomposition_diagram, hocolim
from .homology import BettiTable, betti, induced_on_homology
from .simplicial import SimplicialSet, nerve, quotient_by_action

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Check:
    suite: str
    name: str
    passed: bool
    detail: str = ""

    def to_json(self) -> dict:
        return {"suite": self.suite, "name": self.name, "passed": self.passed, "detail": self.detail}


# SO(3) components via the finite pushout


def klein_automorphisms(V: FiniteGroup) -> list[tuple[int, ...]]:
    """Automorphisms of a Klein four group as permutations of its elements."""
    if V.order != 4 or not V.is_abelian or any(o not in (1, 2) for o in V.element_orders):
        raise ValidationError("expected a Klein four group")
    out = []
    for p in permutations(range(1, 4)):
        m = (0,) + p
        if all(m[V.mul[a][b]] == V.mul[m[a]][m[b]] for a in range(4) for b in range(4)):
            out.append(m)
    return out


def burnside_orbits(n: int) -> int:
    """Orbits of the automorphism group of ``(Z/2)^2`` on ``n``-tuples, closed form."""
    return (4**n + 3 * 2**n + 2) // 6


def burnside_components(n: int) -> int:
    return burnside_orbits(n) - 2**n + 1


@dataclass
class So3Pi0Report:
    n: int
    orbit_count: int
    image_count: int
    components: int
    burnside_fixed_point_orbits: int

    def __post_init__(self):
        if self.components != self.orbit_count - self.image_count + 1 or self.components < 1:
            raise ValidationError("component count violates the pushout bookkeeping")

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "orbit_count": self.orbit_count,
            "image_count": self.image_count,
            "components": self.components,
            "burnside_fixed_point_orbits": self.burnside_fixed_point_orbits,
            "closed_form_orbits": burnside_orbits(self.n),
            "closed_form_components": burnside_components(self.n),
        }

    def checks(self) -> list[Check]:
        return [
            Check("so3", f"n={self.n} orbits", self.orbit_count == burnside_orbits(self.n)
                  == self.burnside_fixed_point_orbits,
                  f"{self.orbit_count} explicit, {self.burnside_fixed_point_orbits} fixed-point, "
                  f"{burnside_orbits(self.n)} closed form"),
            Check("so3", f"n={self.n} components", self.components == burnside_components(self.n),
                  f"{self.components} vs {burnside_components(self.n)}"),
        ]


def so3_pi0(n: int) -> So3Pi0Report:
    """Pushout of ``* <- Hom(Z^n, Z/2) -> Hom(Z^n, (Z/2)^2)/Sigma_3`` as a set.

    The orbit set is built by explicit enumeration; the pushout is a
    union-find coequalizer over it plus one extra point.
    """
    if n < 0:
        raise ValidationError("n must be >= 0")
    V = group_product(cyclic(2), cyclic(2))
    auts = klein_automorphisms(V)
    tuples = list(product(range(4), repeat=n))
    orbit_of: dict[tuple, tuple] = {}
    for t in tuples:
        if t not in orbit_of:
            orbit = {tuple(m[x] for x in t) for m in auts}
            rep = min(orbit)
            for s in orbit:
                orbit_of[s] = rep
    orbits = sorted(set(orbit_of.values()))
    fixed = sum(sum(1 for t in tuples if tuple(m[x] for x in t) == t) for m in auts)
    burnside = fixed // len(auts)

    # one of the inclusions Z/2 -> (Z/2)^2
    incl = (0, 1)
    parent = {o: o for o in orbits}
    parent["*"] = "*"

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    image = set()
    for t in product(range(2), repeat=n):
        o = orbit_of[tuple(incl[x] for x in t)]
        image.add(o)
        a, b = find(o), find("*")
        if a != b:
            parent[a] = b
    components = len({find(v) for v in parent})
    return So3Pi0Report(n, len(orbits), len(image), components, burnside)


# the quotient of B(Z/2)^2 by Sigma_3


def klein_quotient(D: int) -> SimplicialSet:
    """``nerve((Z/2)^2) / Sigma_3`` with simplices through degree ``D + 1``."""
    V = group_product(cyclic(2), cyclic(2))
    auts = klein_automorphisms(V)
    X = nerve(V, D + 1)
    return quotient_by_action(
        X, auts, lambda m, n, x: tuple(m[e] for e in x), "B(Z/2)^2/Sigma3"
    )


def klein_quotient_betti(ell: int, D: int) -> BettiTable:
    return betti(klein_quotient(D), ell, D)


def quotient_lemma_check(ell: int, D: int) -> BettiTable:
    """Mod-``ell`` Betti numbers of the quotient, for odd ``ell`` only."""
    if not is_prime(ell) or ell == 2:
        raise ValidationError("expected an odd prime; use klein_quotient_betti for 2")
    return klein_quotient_betti(ell, D)


@dataclass
class QuotientReport:
    D: int
    tables: dict[int, BettiTable]
    control_ell: int = 2
    control: BettiTable | None = None

    def to_json(self) -> dict:
        return {
            "D": self.D,
            "betti": {str(l): list(t.dims) for l, t in self.tables.items()},
            "control": {"ell": self.control_ell, "dims": list(self.control.dims)} if self.control else None,
        }

    def checks(self) -> list[Check]:
        out = [
            Check("quotient", f"ell={l} reduced Betti zero through {self.D}",
                  all(d == 0 for d in t.reduced()), str(t))
            for l, t in self.tables.items()
        ]
        if self.control is not None:
            out.append(Check(
                "quotient", f"ell={self.control_ell} control has nonzero reduced Betti through {self.D}",
                any(d > 0 for d in self.control.reduced()), str(self.control),
            ))
        return out


def quotient_suite(ells=(3, 5, 7), D: int = 4) -> QuotientReport:
    Q = klein_quotient(D)
    tables = {l: betti(Q, l, D) for l in ells}
    return QuotientReport(D, tables, 2, betti(Q, 2, D))


# Sigma_3


@dataclass
class Sigma3Report:
    D: int
    zmod2_betti: BettiTable
    z_betti: BettiTable
    iso_mod2: bool
    zmod2_betti_mod3: BettiTable
    z_betti_mod3: BettiTable
    iso_mod3: bool
    c2_betti: BettiTable

    def to_json(self) -> dict:
        return {
            "D": self.D,
            "B(Z/2,S3) mod 2": list(self.zmod2_betti.dims),
            "B(Z,S3) mod 2": list(self.z_betti.dims),
            "inclusion iso mod 2": self.iso_mod2,
            "B(Z/2,S3) mod 3": list(self.zmod2_betti_mod3.dims),
            "B(Z,S3) mod 3": list(self.z_betti_mod3.dims),
            "inclusion iso mod 3": self.iso_mod3,
            "B(Z/2,C2) mod 2": list(self.c2_betti.dims),
        }

    def checks(self) -> list[Check]:
        wedge = (1,) + (3,) * self.D
        return [
            Check("sigma3", "B(Z/2,S3) is a wedge of three BZ/2 mod 2",
                  self.zmod2_betti.dims == wedge, str(self.zmod2_betti)),
            Check("sigma3", "B(Z/2,S3) -> B(Z,S3) iso mod 2", self.iso_mod2),
            Check("sigma3", "B(Z/2,S3) -> B(Z,S3) not iso mod 3", not self.iso_mod3,
                  f"{self.zmod2_betti_mod3} vs {self.z_betti_mod3}"),
            Check("sigma3", "B(Z/2,S3) and B(Z/2,Z/2) differ mod 2",
                  self.c2_betti.dims != self.zmod2_betti.dims,
                  f"{self.c2_betti} vs {self.zmod2_betti}"),
        ]


def sigma3_suite(D: int = 3) -> Sigma3Report:
    G = builtin_group("S3")
    z2, z = TauSpec.parse("zmod:2"), TauSpec.parse("z")
    small, big = build_bcom(G, z2, D), build_bcom(G, z, D)
    f = inclusion_map(G, z2, z, D, small, big)
    mod2 = induced_on_homology(f, 2, D)
    mod3 = induced_on_homology(f, 3, D, verify_map=False)
    c2 = betti(build_bcom(builtin_group("C2"), z2, D), 2, D)
    return Sigma3Report(
        D, mod2.source_betti, mod2.target_betti, mod2.is_iso,
        mod3.source_betti, mod3.target_betti, mod3.is_iso, c2,
    )


# GL_2(F_q)


def _census_preconditions(q: int, ell: int) -> None:
    if prime_power(q) is None or q > 5:
        raise ValidationError(f"q={q} must be a prime power at most 5")
    if not is_prime(ell) or ell == 2:
        raise ValidationError(f"ell={ell} must be an odd prime")
    if (q - 1) % ell:
        raise ValidationError(
            f"ell={ell} does not divide q-1={q - 1}; pass a field F_(q^r) with "
            f"q^r = 1 mod {ell} directly instead"
        )


@dataclass
class Gl2Census:
    q: int
    ell: int
    group_order: int
    s: int
    torus: Subgroup
    center_torsion: Subgroup
    normalizer: Subgroup
    n_q: int
    conjugates: list[Subgroup] = field(repr=False)
    sylow: bool = False
    intersections_ok: bool = False

    @property
    def closed_form(self) -> int | None:
        q, l = self.q, self.ell
        if self.s != 1:
            return None
        return (q - 1) ** 2 * q * (q + 1) // (2 * l * l)

    def to_json(self) -> dict:
        return {
            "q": self.q,
            "ell": self.ell,
            "group_order": self.group_order,
            "s": self.s,
            "torus_order": self.torus.order,
            "torus_exponent": max(self.torus.parent.element_orders[g] for g in self.torus),
            "center_torsion_order": self.center_torsion.order,
            "normalizer_order": self.normalizer.order,
            "n_q": self.n_q,
            "n_q_closed_form": self.closed_form,
            "sylow": self.sylow,
            "conjugate_intersections_are_center_torsion": self.intersections_ok,
        }

    def checks(self) -> list[Check]:
        l, s = self.ell, self.s
        G = self.torus.parent
        t_exp = max(G.element_orders[g] for g in self.torus)
        z_exp = max(G.element_orders[g] for g in self.center_torsion)
        return [
            Check("gl2", "group order", self.group_order == (self.q**2 - 1) * (self.q**2 - self.q),
                  str(self.group_order)),
            Check("gl2", f"T_{l} is (Z/{l**s})^2",
                  self.torus.order == l ** (2 * s) and t_exp == l**s and self.torus.is_abelian),
            Check("gl2", f"Z_{l} is Z/{l**s}",
                  self.center_torsion.order == l**s and z_exp == l**s),
            Check("gl2", f"T_{l} is Sylow", self.sylow),
            Check("gl2", "distinct conjugates meet in Z_l", self.intersections_ok),
            Check("gl2", "n_q = |G|/|N|", self.n_q * self.normalizer.order == self.group_order),
            Check("gl2", "n_q closed form", self.closed_form in (None, self.n_q),
                  f"{self.n_q} vs {self.closed_form}"),
        ]


def diagonal_torus(G: FiniteGroup) -> Subgroup:
    return subgroup_from_mask(
        G, to_mask(g for g in range(G.order) if matrix_entries(G, g)[1:3] == (0, 0))
    )


def gl2_census(q: int, ell: int) -> Gl2Census:
    _census_preconditions(q, ell)
    G = gl2(q)
    T = diagonal_torus(G)
    T_l = ell_torsion(T, ell)
    Z_l = ell_torsion(center(G), ell)
    N = normalizer(G, T_l)
    conj = {}
    for g in range(G.order):
        H = T_l.conjugate(g)
        conj.setdefault(H.mask, H)
    conjugates = sorted(conj.values(), key=lambda H: H.members)
    intersections_ok = all(
        (A.mask & B.mask) == Z_l.mask
        for i, A in enumerate(conjugates)
        for B in conjugates[i + 1:]
    )
    sylow = T_l.order == ell ** valuation(G.order, ell)
    return Gl2Census(
        q, ell, G.order, valuation(q - 1, ell), T_l, Z_l, N, G.order // N.order,
        conjugates, sylow, intersections_ok and len(conjugates) == G.order // N.order,
    )


@dataclass
class Gl2DecompositionReport:
    q: int
    ell: int
    D: int
    objects: int
    nonidentity_arrows: int
    expected_objects: int
    hocolim_betti: BettiTable
    direct_betti: BettiTable
    assembly_iso: bool

    @property
    def agreement(self) -> bool:
        return self.hocolim_betti == self.direct_betti

    @property
    def h1(self) -> int:
        return self.hocolim_betti.dims[1] if self.D >= 1 else 0

    def to_json(self) -> dict:
        return {
            "q": self.q,
            "ell": self.ell,
            "D": self.D,
            "objects": self.objects,
            "nonidentity_arrows": self.nonidentity_arrows,
            "hocolim_betti": list(self.hocolim_betti.dims),
            "direct_betti": list(self.direct_betti.dims),
            "agreement": self.agreement,
            "assembly_iso": self.assembly_iso,
            "h1": self.h1,
        }

    def checks(self) -> list[Check]:
        n_q = self.expected_objects - 1
        return [
            Check("gl2", "diagram has n_q+1 objects and n_q arrows",
                  self.objects == self.expected_objects and self.nonidentity_arrows == n_q,
                  f"{self.objects} objects, {self.nonidentity_arrows} arrows"),
            Check("gl2", "hocolim Betti = direct Betti", self.agreement,
                  f"{self.hocolim_betti} vs {self.direct_betti}"),
            Check("gl2", "assembly map is a homology iso", self.assembly_iso),
            Check("gl2", "H_1 > 0", self.h1 > 0, str(self.h1)),
        ]


def ell_subgroup_poset(G: FiniteGroup, ell: int, floor: Subgroup):
    """Abelian ``ell``-subgroups of ``G`` containing ``floor``."""
    groups = [
        A for A in abelian_subgroups(G)
        if A.order == ell ** valuation(A.order, ell) and floor.issubset(A)
    ]
    return poset_from_subgroups(G, groups)


def gl2_decomposition_check(q: int, ell: int, D: int = 2) -> Gl2DecompositionReport:
    census = gl2_census(q, ell)
    G = census.torus.parent
    P = ell_subgroup_poset(G, ell, census.center_torsion)
    tau = TauSpec("zell", ell)
    Dg = decomposition_diagram(G, P, tau, D)
    H = hocolim(Dg, D)
    direct = stabilized_adic(G, ell, D)
    f = assembly_map(G, Dg, D, H, direct)
    induced = induced_on_homology(f, ell, D)
    return Gl2DecompositionReport(
        q, ell, D, len(P), len(P.leq) - len(P),
        census.n_q + 1, induced.source_betti, induced.target_betti, induced.is_iso,
    )
