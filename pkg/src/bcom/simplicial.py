"""Truncated, levelwise-finite simplicial sets and simplicial maps.

A :class:`SimplicialSet` stores every simplex in degrees ``0..max_degree`` as a
hashable value and computes faces and degeneracies with callables
``face(n, i, x)`` / ``degeneracy(n, j, x)``, where ``n`` is the degree of ``x``.
Degeneracy of a simplex is decided by the identity ``s_j d_j x == x``.
"""

from __future__ import annotations

from functools import cached_property
from itertools import product
from typing import Callable, Hashable, Iterable, Sequence

import numpy as np

from .category import FiniteCategory
from .errors import ResourceLimitError, SimplicialError, ValidationError, limits
from .groups import FiniteGroup, Subgroup

Simplex = Hashable
FaceFn = Callable[[int, int, Simplex], Simplex]


class SimplicialSet:
    def __init__(
        self,
        levels: Sequence[Iterable[Simplex]],
        face: FaceFn,
        degeneracy: FaceFn,
        name: str = "",
        metadata: dict | None = None,
        degenerate_test: Callable[[int, Simplex], bool] | None = None,
    ):
        self.levels = tuple(tuple(level) for level in levels)
        if not self.levels:
            raise ValidationError("a simplicial set needs at least degree 0")
        total = sum(len(level) for level in self.levels)
        if total > limits().max_simplices:
            raise ResourceLimitError(
                f"{name or 'simplicial set'} has {total} simplices, above the cap "
                f"{limits().max_simplices}"
            )
        self._face = face
        self._degeneracy = degeneracy
        self.name = name
        self.metadata = dict(metadata or {})
        self._degenerate_test = degenerate_test

    def __repr__(self) -> str:
        counts = ",".join(str(len(level)) for level in self.levels)
        return f"SimplicialSet({self.name or '?'}, counts=[{counts}])"

    @property
    def max_degree(self) -> int:
        return len(self.levels) - 1

    def count(self, n: int) -> int:
        return len(self.levels[n])

    def face(self, n: int, i: int, x: Simplex) -> Simplex:
        if n < 1 or not 0 <= i <= n:
            raise SimplicialError(f"face d_{i} undefined in degree {n}")
        return self._face(n, i, x)

    def degeneracy(self, n: int, j: int, x: Simplex) -> Simplex:
        if n < 0 or not 0 <= j <= n:
            raise SimplicialError(f"degeneracy s_{j} undefined in degree {n}")
        return self._degeneracy(n, j, x)

    @cached_property
    def _indices(self) -> tuple[dict, ...]:
        return tuple({x: i for i, x in enumerate(level)} for level in self.levels)

    def index(self, n: int, x: Simplex) -> int:
        try:
            return self._indices[n][x]
        except KeyError:
            raise SimplicialError(f"{x!r} is not a stored {n}-simplex of {self.name}") from None

    def contains(self, n: int, x: Simplex) -> bool:
        return 0 <= n <= self.max_degree and x in self._indices[n]

    def is_degenerate(self, n: int, x: Simplex) -> bool:
        if self._degenerate_test is not None:
            return self._degenerate_test(n, x)
        return self.is_degenerate_generic(n, x)

    def is_degenerate_generic(self, n: int, x: Simplex) -> bool:
        face, degen = self._face, self._degeneracy
        return any(degen(n - 1, j, face(n, j, x)) == x for j in range(n))

    def nondegenerate(self, n: int) -> tuple[Simplex, ...]:
        return self._nondegenerate[n]

    @cached_property
    def _nondegenerate(self) -> tuple[tuple[Simplex, ...], ...]:
        return tuple(
            tuple(x for x in level if not self.is_degenerate(n, x))
            for n, level in enumerate(self.levels)
        )

    def face_table(self, n: int) -> np.ndarray:
        """``table[k, i]`` is the index of ``d_i`` of the ``k``-th ``n``-simplex."""
        idx = self._indices[n - 1]
        rows = [[idx[self._face(n, i, x)] for i in range(n + 1)] for x in self.levels[n]]
        return np.array(rows, dtype=np.int64).reshape(len(rows), n + 1)

    def degeneracy_table(self, n: int) -> np.ndarray:
        idx = self._indices[n + 1]
        rows = [[idx[self._degeneracy(n, j, x)] for j in range(n + 1)] for x in self.levels[n]]
        return np.array(rows, dtype=np.int64).reshape(len(rows), n + 1)

    def check(self) -> None:
        """Closure and all simplicial identities, exhaustively up to the truncation."""
        top = self.max_degree
        d, s = self._face, self._degeneracy
        for n in range(top + 1):
            for x in self.levels[n]:
                if n >= 1:
                    for i in range(n + 1):
                        if not self.contains(n - 1, d(n, i, x)):
                            raise SimplicialError(f"d_{i}{x!r} is not stored")
                if n < top:
                    for j in range(n + 1):
                        if not self.contains(n + 1, s(n, j, x)):
                            raise SimplicialError(f"s_{j}{x!r} is not stored")
        for n in range(2, top + 1):
            for x in self.levels[n]:
                for j in range(n + 1):
                    dj = d(n, j, x)
                    for i in range(j):
                        if d(n - 1, i, dj) != d(n - 1, j - 1, d(n, i, x)):
                            raise SimplicialError(f"d_{i} d_{j} != d_{j - 1} d_{i} on {x!r}")
        for n in range(top - 1):
            for x in self.levels[n]:
                for j in range(n + 1):
                    sj = s(n, j, x)
                    for i in range(j + 1):
                        if s(n + 1, i, sj) != s(n + 1, j + 1, s(n, i, x)):
                            raise SimplicialError(f"s_{i} s_{j} != s_{j + 1} s_{i} on {x!r}")
        for n in range(top):
            for x in self.levels[n]:
                for j in range(n + 1):
                    sx = s(n, j, x)
                    for i in range(n + 2):
                        got = d(n + 1, i, sx)
                        if i < j:
                            want = s(n - 1, j - 1, d(n, i, x)) if n >= 1 else None
                        elif i in (j, j + 1):
                            want = x
                        else:
                            want = s(n - 1, j, d(n, i - 1, x)) if n >= 1 else None
                        if want is not None and got != want:
                            raise SimplicialError(f"mixed identity d_{i} s_{j} fails on {x!r}")

    def truncate(self, top: int) -> "SimplicialSet":
        if top > self.max_degree:
            raise SimplicialError(f"cannot truncate {self.name} above degree {self.max_degree}")
        return SimplicialSet(
            self.levels[: top + 1], self._face, self._degeneracy, self.name, self.metadata,
            self._degenerate_test,
        )

    def to_json(self) -> dict:
        """Simplex lists per degree with face/degeneracy tables by index."""
        top = self.max_degree
        return {
            "name": self.name,
            "max_degree": top,
            "simplices": [[_jsonable(x) for x in level] for level in self.levels],
            "faces": [None] + [self.face_table(n).tolist() for n in range(1, top + 1)],
            "degeneracies": [self.degeneracy_table(n).tolist() for n in range(top)] + [None],
        }

    @classmethod
    def from_json(cls, data: dict) -> "SimplicialSet":
        levels = [[_tupled(x) for x in level] for level in data["simplices"]]
        return tabulated(levels, data["faces"], data["degeneracies"], data.get("name", ""))


def tabulated(levels, faces, degeneracies, name: str = "") -> SimplicialSet:
    """Simplicial set whose structure maps are given as index tables."""
    levels = [tuple(level) for level in levels]
    index = [{x: i for i, x in enumerate(level)} for level in levels]

    def face(n, i, x):
        return levels[n - 1][faces[n][index[n][x]][i]]

    def degeneracy(n, j, x):
        if n + 1 >= len(levels):
            raise SimplicialError(f"degeneracy leaves the truncation at degree {n}")
        return levels[n + 1][degeneracies[n][index[n][x]][j]]

    X = SimplicialSet(levels, face, degeneracy, name)
    X.check()
    return X


def _jsonable(x):
    if isinstance(x, tuple):
        return [_jsonable(y) for y in x]
    if isinstance(x, np.integer):
        return int(x)
    return x


def _tupled(x):
    if isinstance(x, list):
        return tuple(_tupled(y) for y in x)
    return x


class SimplicialMap:
    """A levelwise function ``fn(n, x)`` between truncated simplicial sets."""

    def __init__(
        self,
        source: SimplicialSet,
        target: SimplicialSet,
        fn: Callable[[int, Simplex], Simplex],
        name: str = "",
    ):
        if source.max_degree > target.max_degree:
            raise SimplicialError("map target is truncated below its source")
        self.source = source
        self.target = target
        self.fn = fn
        self.name = name

    def __call__(self, n: int, x: Simplex) -> Simplex:
        return self.fn(n, x)

    def __repr__(self) -> str:
        return f"SimplicialMap({self.name or '?'}: {self.source.name} -> {self.target.name})"

    def check(self) -> None:
        """Images are stored and the map commutes with every face and degeneracy."""
        X, Y, f = self.source, self.target, self.fn
        top = X.max_degree
        for n in range(top + 1):
            for x in X.levels[n]:
                y = f(n, x)
                if not Y.contains(n, y):
                    raise SimplicialError(f"{self.name}: image of {x!r} is not in the target")
                if n >= 1:
                    for i in range(n + 1):
                        if f(n - 1, X._face(n, i, x)) != Y._face(n, i, y):
                            raise SimplicialError(f"{self.name}: does not commute with d_{i} at {x!r}")
                if n < top:
                    for j in range(n + 1):
                        if f(n + 1, X._degeneracy(n, j, x)) != Y._degeneracy(n, j, y):
                            raise SimplicialError(f"{self.name}: does not commute with s_{j} at {x!r}")

    def then(self, other: "SimplicialMap") -> "SimplicialMap":
        """Composite ``other . self``."""
        if other.source is not self.target:
            raise SimplicialError("maps are not composable")
        f, g = self.fn, other.fn
        return SimplicialMap(
            self.source, other.target, lambda n, x: g(n, f(n, x)), f"{other.name}.{self.name}"
        )

    def table(self, n: int) -> np.ndarray:
        idx = self.target._indices[n]
        return np.array([idx[self.fn(n, x)] for x in self.source.levels[n]], dtype=np.int64)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "tables": [self.table(n).tolist() for n in range(self.source.max_degree + 1)],
        }


def identity_map(X: SimplicialSet) -> SimplicialMap:
    return SimplicialMap(X, X, lambda n, x: x, f"id_{X.name}")


def map_from_tables(source: SimplicialSet, target: SimplicialSet, tables, name="") -> SimplicialMap:
    lookup = [
        {x: target.levels[n][tables[n][k]] for k, x in enumerate(source.levels[n])}
        for n in range(source.max_degree + 1)
    ]
    f = SimplicialMap(source, target, lambda n, x: lookup[n][x], name)
    f.check()
    return f


# bar-construction structure maps on tuples of group elements


def bar_face(mul, n: int, i: int, x: tuple) -> tuple:
    if i == 0:
        return x[1:]
    if i == n:
        return x[:-1]
    return x[: i - 1] + (mul[x[i - 1]][x[i]],) + x[i + 1:]


def bar_degeneracy(n: int, j: int, x: tuple) -> tuple:
    return x[:j] + (0,) + x[j:]


def bar_complex(G: FiniteGroup, levels, name: str = "", metadata=None) -> SimplicialSet:
    """Simplicial set of tuples in ``G`` with the bar-construction faces.

    ``levels[n]`` must be a face- and degeneracy-closed set of ``n``-tuples.
    """
    mul = G.mul
    # a tuple is degenerate exactly when it has an identity entry; this agrees
    # with the s_j d_j test and is much cheaper
    return SimplicialSet(
        levels,
        lambda n, i, x: bar_face(mul, n, i, x),
        lambda n, j, x: bar_degeneracy(n, j, x),
        name,
        metadata,
        degenerate_test=lambda n, x: 0 in x,
    )


def nerve(obj, max_degree: int) -> SimplicialSet:
    """Nerve of a finite group, subgroup, poset (given as a category) or category.

    For a group the ``n``-simplices are all ``n``-tuples of elements; for a
    category they are composable strings ``(c0, f1, ..., fn)``.
    """
    if max_degree < 0:
        raise ValidationError("max_degree must be >= 0")
    if isinstance(obj, (FiniteGroup, Subgroup)):
        G = obj if isinstance(obj, FiniteGroup) else obj.parent
        members = tuple(range(G.order)) if isinstance(obj, FiniteGroup) else obj.members
        est = len(members) ** max_degree
        if est > limits().max_simplices:
            raise ResourceLimitError(f"nerve would have {est} simplices in degree {max_degree}")
        levels = [list(product(members, repeat=n)) for n in range(max_degree + 1)]
        return bar_complex(G, levels, f"B{G.name}", {"kind": "nerve"})
    if isinstance(obj, FiniteCategory):
        C = obj
        levels = [C.chains(n) for n in range(max_degree + 1)]
        return SimplicialSet(
            levels,
            lambda n, i, x: C.chain_face(x, i),
            lambda n, j, x: C.chain_degeneracy(x, j),
            "N(C)",
            {"kind": "nerve"},
        )
    raise ValidationError(f"cannot take the nerve of {type(obj).__name__}")


def point(max_degree: int) -> SimplicialSet:
    """The terminal simplicial set: one simplex ``()`` ... per degree."""
    levels = [[(0,) * n] for n in range(max_degree + 1)]
    return SimplicialSet(
        levels, lambda n, i, x: x[:-1], lambda n, j, x: x + (0,), "pt"
    )


def disjoint_union(parts: Sequence[SimplicialSet], name: str = "") -> SimplicialSet:
    """Simplices are ``(k, x)`` for ``x`` in the ``k``-th summand."""
    top = min(X.max_degree for X in parts) if parts else 0
    levels = [[(k, x) for k, X in enumerate(parts) for x in X.levels[n]] for n in range(top + 1)]
    return SimplicialSet(
        levels,
        lambda n, i, kx: (kx[0], parts[kx[0]]._face(n, i, kx[1])),
        lambda n, j, kx: (kx[0], parts[kx[0]]._degeneracy(n, j, kx[1])),
        name,
    )


def quotient_by_action(
    X: SimplicialSet,
    group_elements: Sequence[Hashable],
    act: Callable[[Hashable, int, Simplex], Simplex],
    name: str = "",
    verify: bool = True,
) -> SimplicialSet:
    """Orbit simplicial set of a levelwise action ``act(g, n, x)``.

    Each orbit is represented by its minimal member; faces and degeneracies
    are computed on representatives and re-canonicalised. With ``verify`` the
    action is checked to commute with the structure maps.
    """
    if verify:
        for g in group_elements:
            for n in range(X.max_degree + 1):
                for x in X.levels[n]:
                    y = act(g, n, x)
                    if not X.contains(n, y):
                        raise SimplicialError(f"action of {g!r} leaves the simplicial set at {x!r}")
                    if n >= 1 and any(
                        act(g, n - 1, X._face(n, i, x)) != X._face(n, i, y) for i in range(n + 1)
                    ):
                        raise SimplicialError(f"action of {g!r} does not commute with faces at {x!r}")
                    if n < X.max_degree and any(
                        act(g, n + 1, X._degeneracy(n, j, x)) != X._degeneracy(n, j, y)
                        for j in range(n + 1)
                    ):
                        raise SimplicialError(
                            f"action of {g!r} does not commute with degeneracies at {x!r}"
                        )
    canon: list[dict] = []
    levels = []
    for n in range(X.max_degree + 1):
        rep_of: dict = {}
        reps = []
        for x in X.levels[n]:
            if x in rep_of:
                continue
            orbit = {act(g, n, x) for g in group_elements}
            orbit.add(x)
            r = min(orbit)
            for y in orbit:
                rep_of[y] = r
            reps.append(r)
        canon.append(rep_of)
        levels.append(sorted(reps))
    Q = SimplicialSet(
        levels,
        lambda n, i, r: canon[n - 1][X._face(n, i, r)],
        lambda n, j, r: canon[n + 1][X._degeneracy(n, j, r)],
        name or f"{X.name}/G",
        {"orbit_of": canon},
    )
    return Q


def path_components(X: SimplicialSet) -> int:
    """Vertices modulo the relation generated by edges."""
    parent = {v: v for v in X.levels[0]}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    if X.max_degree >= 1:
        for e in X.levels[1]:
            a, b = find(X._face(1, 0, e)), find(X._face(1, 1, e))
            if a != b:
                parent[a] = b
    return len({find(v) for v in X.levels[0]})
