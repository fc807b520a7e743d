"""Finite categories: the index shapes of diagrams."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Hashable, Iterable, Sequence

from .errors import ValidationError


@dataclass(frozen=True, eq=False)
class FiniteCategory:
    """Objects ``0..n-1`` (with display labels) and numbered arrows.

    ``compose[(f, g)]`` is the composite "f then g" for ``f: a -> b`` and
    ``g: b -> c``.
    """

    objects: tuple[Hashable, ...]
    sources: tuple[int, ...]
    targets: tuple[int, ...]
    identities: tuple[int, ...]
    compose: dict[tuple[int, int], int] = field(repr=False)
    arrow_labels: tuple[Hashable, ...] | None = None

    @property
    def n_objects(self) -> int:
        return len(self.objects)

    @property
    def n_arrows(self) -> int:
        return len(self.sources)

    @cached_property
    def is_identity(self) -> tuple[bool, ...]:
        ids = set(self.identities)
        return tuple(f in ids for f in range(self.n_arrows))

    @cached_property
    def out_arrows(self) -> tuple[tuple[int, ...], ...]:
        out = [[] for _ in self.objects]
        for f, s in enumerate(self.sources):
            out[s].append(f)
        return tuple(tuple(a) for a in out)

    def hom(self, a: int, b: int) -> list[int]:
        return [f for f in self.out_arrows[a] if self.targets[f] == b]

    def then(self, f: int, g: int) -> int:
        return self.compose[(f, g)]

    def non_identity_arrows(self) -> list[int]:
        return [f for f in range(self.n_arrows) if not self.is_identity[f]]

    @cached_property
    def is_poset(self) -> bool:
        """At most one arrow between any two objects and no cycles."""
        pairs = set()
        for f in range(self.n_arrows):
            key = (self.sources[f], self.targets[f])
            if key in pairs:
                return False
            pairs.add(key)
        return all(
            (b, a) not in pairs for (a, b) in pairs if a != b
        )

    def check(self) -> None:
        n = self.n_objects
        for a in range(n):
            e = self.identities[a]
            if self.sources[e] != a or self.targets[e] != a:
                raise ValidationError(f"identity of object {a} has wrong endpoints")
        for f in range(self.n_arrows):
            a, b = self.sources[f], self.targets[f]
            if self.compose.get((self.identities[a], f)) != f:
                raise ValidationError(f"left unit law fails at arrow {f}")
            if self.compose.get((f, self.identities[b])) != f:
                raise ValidationError(f"right unit law fails at arrow {f}")
            for g in self.out_arrows[b]:
                fg = self.compose.get((f, g))
                if fg is None:
                    raise ValidationError(f"composite of {f} then {g} missing")
                if self.sources[fg] != a or self.targets[fg] != self.targets[g]:
                    raise ValidationError(f"composite of {f} then {g} has wrong endpoints")
                for h in self.out_arrows[self.targets[g]]:
                    if self.compose[(fg, h)] != self.compose[(f, self.compose[(g, h)])]:
                        raise ValidationError(f"composition not associative at ({f}, {g}, {h})")

    @classmethod
    def from_poset(
        cls, elements: Sequence[Hashable], leq: Iterable[tuple[int, int]]
    ) -> "FiniteCategory":
        """Poset on ``range(len(elements))``; ``leq`` need not list reflexive pairs."""
        n = len(elements)
        rel = set(leq) | {(i, i) for i in range(n)}
        for i, j in rel:
            if i != j and (j, i) in rel:
                raise ValidationError(f"relation has a cycle between {i} and {j}; not a poset")
        for i, j in rel:
            for k in range(n):
                if (j, k) in rel and (i, k) not in rel:
                    raise ValidationError(f"relation is not transitive at ({i}, {j}, {k})")
        arrows = sorted(rel)
        index = {p: f for f, p in enumerate(arrows)}
        compose = {}
        for (i, j), f in index.items():
            for k in range(n):
                if (j, k) in index:
                    compose[(f, index[(j, k)])] = index[(i, k)]
        return cls(
            objects=tuple(elements),
            sources=tuple(i for i, _ in arrows),
            targets=tuple(j for _, j in arrows),
            identities=tuple(index[(i, i)] for i in range(n)),
            compose=compose,
            arrow_labels=tuple(arrows),
        )

    def arrow_between(self, a: int, b: int) -> int:
        """The unique arrow ``a -> b`` of a poset."""
        arrows = self.hom(a, b)
        if len(arrows) != 1:
            raise ValidationError(f"expected one arrow {a} -> {b}, found {len(arrows)}")
        return arrows[0]

    # nerve simplices are tuples (c0, f1, ..., fn) of composable arrows

    def chains(self, n: int) -> list[tuple[int, ...]]:
        """All composable strings of ``n`` arrows, identities included."""
        level = [(c,) for c in range(self.n_objects)]
        for _ in range(n):
            nxt = []
            for chain in level:
                end = self.targets[chain[-1]] if len(chain) > 1 else chain[0]
                for f in self.out_arrows[end]:
                    nxt.append(chain + (f,))
            level = nxt
        return level

    def chain_objects(self, chain: tuple[int, ...]) -> tuple[int, ...]:
        objs = [chain[0]]
        for f in chain[1:]:
            objs.append(self.targets[f])
        return tuple(objs)

    def chain_face(self, chain: tuple[int, ...], i: int) -> tuple[int, ...]:
        n = len(chain) - 1
        if i == 0:
            return (self.targets[chain[1]],) + chain[2:]
        if i == n:
            return chain[:-1]
        return chain[:i] + (self.compose[(chain[i], chain[i + 1])],) + chain[i + 2:]

    def chain_degeneracy(self, chain: tuple[int, ...], j: int) -> tuple[int, ...]:
        objs_j = chain[0] if j == 0 else self.targets[chain[j]]
        return chain[: j + 1] + (self.identities[objs_j],) + chain[j + 1:]

    def composite_along(self, chain: tuple[int, ...], i: int, j: int) -> int:
        """Arrow from object ``i`` to object ``j`` of the chain (``i <= j``)."""
        objs = self.chain_objects(chain)
        f = self.identities[objs[i]]
        for k in range(i + 1, j + 1):
            f = self.compose[(f, chain[k])]
        return f

    def to_json(self) -> dict:
        return {
            "objects": [_jsonable(o) for o in self.objects],
            "arrows": [
                {"source": s, "target": t} for s, t in zip(self.sources, self.targets)
            ],
            "identities": list(self.identities),
            "compose": [[f, g, h] for (f, g), h in sorted(self.compose.items())],
        }

    @classmethod
    def from_json(cls, data: dict) -> "FiniteCategory":
        cat = cls(
            objects=tuple(_tupled(o) for o in data["objects"]),
            sources=tuple(a["source"] for a in data["arrows"]),
            targets=tuple(a["target"] for a in data["arrows"]),
            identities=tuple(data["identities"]),
            compose={(f, g): h for f, g, h in data["compose"]},
        )
        cat.check()
        return cat


def _jsonable(x):
    if isinstance(x, tuple):
        return [_jsonable(y) for y in x]
    return x


def _tupled(x):
    if isinstance(x, list):
        return tuple(_tupled(y) for y in x)
    return x
