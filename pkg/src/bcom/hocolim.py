"""Diagrams of simplicial sets and their homotopy colimits.

The homotopy colimit is the diagonal of the simplicial replacement. An
``n``-simplex is a pair ``(chain, x)`` where ``chain = (c0, f1, ..., fn)`` is
a string of composable arrows (identities allowed) and ``x`` is an
``n``-simplex of the value at ``c0``. The payload sits at the source of the
chain, so ``d_0`` has to push it along ``f1``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable, Hashable, Sequence

from .category import FiniteCategory
from .commuting import TauSpec, build_bcom
from .errors import TruncationError, ValidationError, VerificationError
from .groups import AbelianPoset, FiniteGroup, normalizer
from .simplicial import SimplicialMap, SimplicialSet, map_from_tables

log = logging.getLogger(__name__)

Action = Callable[[int, Hashable], Hashable]


class Diagram:
    """A functor from a finite category to truncated simplicial sets.

    ``actions[f]`` is ``fn(n, x)`` for the arrow ``f``; ``None`` means the
    identity function on simplices (used for identity arrows and for
    inclusions of subcomplexes).
    """

    def __init__(
        self,
        shape: FiniteCategory,
        values: Sequence[SimplicialSet],
        actions: Sequence[Action | None],
        name: str = "",
        metadata: dict | None = None,
    ):
        if len(values) != shape.n_objects:
            raise ValidationError("need one value per object of the shape")
        if len(actions) != shape.n_arrows:
            raise ValidationError("need one action per arrow of the shape")
        self.shape = shape
        self.values = tuple(values)
        self.actions = tuple(actions)
        self.name = name
        self.metadata = dict(metadata or {})

    def __repr__(self) -> str:
        return f"Diagram({self.name or '?'}: {self.shape.n_objects} objects, {self.shape.n_arrows} arrows)"

    @property
    def max_degree(self) -> int:
        return min(X.max_degree for X in self.values)

    def act(self, f: int, n: int, x):
        fn = self.actions[f]
        return x if fn is None else fn(n, x)

    def arrow_map(self, f: int) -> SimplicialMap:
        S = self.shape
        fn = self.actions[f]
        return SimplicialMap(
            self.values[S.sources[f]],
            self.values[S.targets[f]],
            (lambda n, x: x) if fn is None else fn,
            f"arrow{f}",
        )

    def check(self) -> None:
        """Every arrow is a simplicial map; identities and composites are respected."""
        S = self.shape
        for f in range(S.n_arrows):
            self.arrow_map(f).check()
        for a in range(S.n_objects):
            e = S.identities[a]
            X = self.values[a]
            for n in range(X.max_degree + 1):
                for x in X.levels[n]:
                    if self.act(e, n, x) != x:
                        raise VerificationError(f"identity of object {a} moves {x!r}")
        for (f, g), h in S.compose.items():
            X = self.values[S.sources[f]]
            for n in range(X.max_degree + 1):
                for x in X.levels[n]:
                    if self.act(g, n, self.act(f, n, x)) != self.act(h, n, x):
                        raise VerificationError(f"composite of arrows {f}, {g} acts wrongly on {x!r}")

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "shape": self.shape.to_json(),
            "values": [X.to_json() for X in self.values],
            "arrows": [self.arrow_map(f).to_json()["tables"] for f in range(self.shape.n_arrows)],
        }

    @classmethod
    def from_json(cls, data: dict) -> "Diagram":
        shape = FiniteCategory.from_json(data["shape"])
        values = [SimplicialSet.from_json(v) for v in data["values"]]
        actions = []
        for f, tables in enumerate(data["arrows"]):
            src, tgt = values[shape.sources[f]], values[shape.targets[f]]
            actions.append(map_from_tables(src, tgt, tables).fn)
        D = cls(shape, values, actions, data.get("name", ""))
        D.check()
        return D


def hocolim(Dg: Diagram, D: int) -> SimplicialSet:
    """Homotopy colimit with simplices through degree ``D + 1``."""
    if Dg.max_degree < D + 1:
        raise TruncationError(
            f"diagram values stop at degree {Dg.max_degree}; hocolim through {D} needs {D + 1}"
        )
    S, values, act = Dg.shape, Dg.values, Dg.act
    levels = []
    for n in range(D + 2):
        levels.append([(ch, x) for ch in S.chains(n) for x in values[ch[0]].levels[n]])

    def face(n, i, cx):
        ch, x = cx
        X = values[ch[0]]
        if i == 0:
            return S.chain_face(ch, 0), act(ch[1], n - 1, X._face(n, 0, x))
        return S.chain_face(ch, i), X._face(n, i, x)

    def degeneracy(n, j, cx):
        ch, x = cx
        return S.chain_degeneracy(ch, j), values[ch[0]]._degeneracy(n, j, x)

    is_id = S.is_identity

    def degenerate(n, cx):
        ch, x = cx
        X = values[ch[0]]
        return any(
            is_id[ch[j + 1]] and X._degeneracy(n - 1, j, X._face(n, j, x)) == x
            for j in range(n)
        )

    return SimplicialSet(
        levels, face, degeneracy, f"hocolim({Dg.name})", {"diagram": Dg.name}, degenerate
    )


def decomposition_diagram(G: FiniteGroup, P: AbelianPoset, tau: TauSpec, D: int) -> Diagram:
    """``A -> B(tau, A)`` over the inclusion poset of ``P``.

    Tuples are stored as elements of ``G``, so every inclusion acts as the
    identity on simplices.
    """
    if P.group is not G:
        raise ValidationError("poset belongs to a different group")
    shape = FiniteCategory.from_poset([H.members for H in P.groups], P.leq)
    values = [build_bcom(H, tau, D) for H in P.groups]
    return Diagram(
        shape,
        values,
        [None] * shape.n_arrows,
        f"B({tau},-) on {G.name}",
        {"group": G.name, "tau": str(tau)},
    )


def assembly_map(
    G: FiniteGroup,
    Dg: Diagram,
    D: int,
    source: SimplicialSet | None = None,
    target: SimplicialSet | None = None,
) -> SimplicialMap:
    """``(A_0 <= ... <= A_n, x) -> x`` into ``B(tau, G)``."""
    tau = TauSpec.parse(Dg.metadata["tau"])
    H = source if source is not None else hocolim(Dg, D)
    Y = target if target is not None else build_bcom(G, tau, D)
    return SimplicialMap(H, Y, lambda n, cx: cx[1], "assembly")


# pushforward along a functor to a finite poset


def nondegenerate_chains(C: FiniteCategory) -> list[tuple[int, ...]]:
    """Strictly increasing object sequences of a poset, shortest first."""
    if not C.is_poset:
        raise ValidationError("target category is not a poset")
    out = []
    k = 0
    while True:
        level = [
            C.chain_objects(ch)
            for ch in C.chains(k)
            if not any(C.is_identity[f] for f in ch[1:])
        ]
        if not level:
            return out
        out.extend(level)
        k += 1


def _check_functor(shape: FiniteCategory, rho: Sequence[int], C: FiniteCategory) -> None:
    if len(rho) != shape.n_objects:
        raise ValidationError("rho must assign a target object to every source object")
    for f in range(shape.n_arrows):
        a, b = rho[shape.sources[f]], rho[shape.targets[f]]
        if not C.hom(a, b):
            raise ValidationError(f"arrow {f} has no image: no arrow {a} -> {b} in the target poset")
        if a == b and not shape.is_identity[f]:
            raise ValidationError(
                f"arrow {f} is not an identity but rho sends it to one; "
                "only identity-reflecting functors are supported"
            )


def pushforward_over_discrete(
    Dg: Diagram, rho: Sequence[int], C: FiniteCategory, D: int
) -> Diagram:
    """The diagram ``sigma -> {(lift of sigma, x)}`` over nondegenerate chains of ``C``.

    ``rho`` maps objects of ``Dg.shape`` to objects of the poset ``C``. The
    new shape has one object per strictly increasing chain ``sigma`` of
    ``C`` and an arrow ``sigma -> tau`` whenever ``tau`` is a subsequence of
    ``sigma``. A lift of ``sigma`` is a chain of arrows in the old shape
    lying over it; the value at ``sigma`` is the disjoint union of the
    values at the sources of its lifts.
    """
    S = Dg.shape
    _check_functor(S, rho, C)
    if Dg.max_degree < D + 1:
        raise TruncationError("diagram values are truncated below D + 1")
    sigmas = nondegenerate_chains(C)
    lifts: dict[tuple[int, ...], list[tuple[int, ...]]] = {}
    for sigma in sigmas:
        k = len(sigma) - 1
        lifts[sigma] = [
            ch for ch in S.chains(k) if tuple(rho[o] for o in S.chain_objects(ch)) == sigma
        ]
    index = {s: i for i, s in enumerate(sigmas)}
    leq = [
        (index[s], index[t])
        for s in sigmas
        for t in sigmas
        if _positions(t, s) is not None
    ]
    shape = FiniteCategory.from_poset(sigmas, leq)

    values = []
    for sigma in sigmas:
        values.append(_lift_value(Dg, sigma, lifts[sigma], D))

    actions: list[Action | None] = []
    for f in range(shape.n_arrows):
        s, t = sigmas[shape.sources[f]], sigmas[shape.targets[f]]
        if s == t:
            actions.append(None)
            continue
        theta = _positions(t, s)
        actions.append(_restriction(Dg, theta))
    return Diagram(
        shape,
        values,
        actions,
        f"pushforward({Dg.name})",
        {**Dg.metadata, "lifts": {str(s): len(lifts[s]) for s in sigmas}},
    )


def _positions(sub: tuple[int, ...], seq: tuple[int, ...]) -> tuple[int, ...] | None:
    """Indices of ``sub`` inside the strictly increasing ``seq``, if it is a subsequence."""
    pos = {c: i for i, c in enumerate(seq)}
    try:
        idx = tuple(pos[c] for c in sub)
    except KeyError:
        return None
    return idx if all(a < b for a, b in zip(idx, idx[1:])) else None


def _lift_value(Dg: Diagram, sigma, lifts, D: int) -> SimplicialSet:
    vals = Dg.values
    levels = [[(ch, x) for ch in lifts for x in vals[ch[0]].levels[n]] for n in range(D + 2)]
    return SimplicialSet(
        levels,
        lambda n, i, cx: (cx[0], vals[cx[0][0]]._face(n, i, cx[1])),
        lambda n, j, cx: (cx[0], vals[cx[0][0]]._degeneracy(n, j, cx[1])),
        f"rho_*X{sigma}",
        {"sigma": sigma},
        lambda n, cx: vals[cx[0][0]].is_degenerate(n, cx[1]),
    )


def _restriction(Dg: Diagram, theta: tuple[int, ...]) -> Action:
    S = Dg.shape

    def restrict(n, cx):
        ch, x = cx
        objs = S.chain_objects(ch)
        new = (objs[theta[0]],) + tuple(
            S.composite_along(ch, a, b) for a, b in zip(theta, theta[1:])
        )
        return new, Dg.act(S.composite_along(ch, 0, theta[0]), n, x)

    return restrict


def class_collapse(P: AbelianPoset) -> tuple[list[int], FiniteCategory]:
    """``rho``: each subgroup to its conjugacy class, with classes ordered by subconjugacy."""
    C = FiniteCategory.from_poset(
        [P.groups[r].members for r in P.class_reps], P.class_leq
    )
    return list(P.class_of), C


@dataclass
class OrbitBookkeeping:
    """Per class-chain: lift count, orbit sizes and the payload-count identity."""

    sigma: tuple[int, ...]
    lifts: int
    orbit_sizes: list[int]
    normalizer_orders: list[int]
    simplex_counts: list[int]
    predicted_counts: list[int]

    @property
    def consistent(self) -> bool:
        return sum(self.orbit_sizes) == self.lifts and self.simplex_counts == self.predicted_counts

    def to_json(self) -> dict:
        return {
            "sigma": list(self.sigma),
            "lifts": self.lifts,
            "orbits": len(self.orbit_sizes),
            "orbit_sizes": self.orbit_sizes,
            "normalizer_orders": self.normalizer_orders,
            "simplex_counts": self.simplex_counts,
            "predicted_counts": self.predicted_counts,
            "consistent": self.consistent,
        }


def orbit_bookkeeping(
    G: FiniteGroup, P: AbelianPoset, original: Diagram, pushed: Diagram, D: int
) -> list[OrbitBookkeeping]:
    """Check the pushforward of a decomposition diagram against conjugation orbits.

    ``G`` acts on the lifts of each class chain by conjugation; an orbit has
    ``|G| / |N(lift)|`` members, where ``N(lift)`` normalizes every subgroup
    of the lift. Each lift contributes the simplices of ``B(tau, A_0)``, so
    the value's simplex count in degree ``n`` must equal the orbit-weighted
    sum of those counts.
    """
    S = original.shape
    tau = TauSpec.parse(original.metadata["tau"])

    def conjugate_lift(ch, g):
        objs = [P.index(P.groups[o].conjugate(g)) for o in S.chain_objects(ch)]
        return (objs[0],) + tuple(S.arrow_between(a, b) for a, b in zip(objs, objs[1:]))

    out = []
    for s_idx, sigma in enumerate(pushed.shape.objects):
        V = pushed.values[s_idx]
        lifts = sorted({ch for ch, _ in V.levels[0]})
        remaining = set(lifts)
        sizes, norms = [], []
        predicted = [0] * (D + 2)
        for ch in lifts:
            if ch not in remaining:
                continue
            orbit = {conjugate_lift(ch, g) for g in range(G.order)}
            if not orbit <= remaining:
                raise VerificationError("lifts are not closed under conjugation")
            remaining -= orbit
            groups = [P.groups[o] for o in S.chain_objects(ch)]
            N = normalizer(G, groups[0])
            for H in groups[1:]:
                N = N.intersection(normalizer(G, H))
            if len(orbit) * N.order != G.order:
                raise VerificationError(f"orbit-stabilizer fails on lift {ch}")
            sizes.append(len(orbit))
            norms.append(N.order)
            X = build_bcom(groups[0], tau, D)
            for n in range(D + 2):
                predicted[n] += len(orbit) * X.count(n)
        counts = [V.count(n) for n in range(D + 2)]
        out.append(OrbitBookkeeping(tuple(sigma), len(lifts), sizes, norms, counts, predicted))
    return out
