"""Normalized chains over F_l, Betti numbers and induced maps on homology."""

from __future__ import annotations

import csv
import io
import logging
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import linalg
from .errors import SimplicialError, TruncationError, ValidationError, VerificationError
from .linalg import Eliminator, SparseVec
from .simplicial import SimplicialMap, SimplicialSet, path_components

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class BettiTable:
    ell: int
    dims: tuple[int, ...]

    def __post_init__(self):
        if any(d < 0 for d in self.dims):
            raise ValidationError("Betti numbers are nonnegative")

    @property
    def max_degree(self) -> int:
        return len(self.dims) - 1

    def reduced(self) -> tuple[int, ...]:
        return (self.dims[0] - 1,) + self.dims[1:] if self.dims else ()

    def to_json(self) -> dict:
        return {"ell": self.ell, "dims": list(self.dims)}

    @classmethod
    def from_json(cls, data: dict) -> "BettiTable":
        return cls(int(data["ell"]), tuple(int(d) for d in data["dims"]))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["ell", "degree", "dim"])
        for n, d in enumerate(self.dims):
            w.writerow([self.ell, n, d])
        return buf.getvalue()

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.dims)) + ")"


@dataclass
class HomologyBasis:
    """Cycle representatives of ``H_n`` and a coordinate function for cycles."""

    degree: int
    reps: list[SparseVec]
    _echelon: Eliminator = field(repr=False)

    @property
    def dim(self) -> int:
        return len(self.reps)

    def coordinates(self, cycle: SparseVec) -> np.ndarray:
        residual, combo = self._echelon.reduce(cycle)
        if residual:
            raise VerificationError(f"vector is not a cycle in degree {self.degree}")
        p = self._echelon.p
        out = np.zeros(self.dim, dtype=np.int64)
        for k, v in combo.items():
            out[k] = (-v) % p
        return out


class ChainComplex:
    """Normalized chains of a truncated simplicial set with F_l coefficients.

    ``basis[n]`` lists the nondegenerate ``n``-simplices; ``boundary[n]`` is
    a list of sparse columns, one per basis element of degree ``n``, with
    row indices into ``basis[n-1]``. Degenerate faces contribute zero.
    """

    def __init__(self, X: SimplicialSet, ell: int, top: int):
        linalg.check_prime(ell)
        if top > X.max_degree:
            raise TruncationError(f"{X.name} is stored only through degree {X.max_degree}")
        self.space = X
        self.ell = ell
        self.top = top
        self.basis = [X.nondegenerate(n) for n in range(top + 1)]
        self.position = [{x: i for i, x in enumerate(b)} for b in self.basis]
        self.boundary: list[list[SparseVec]] = [[{} for _ in self.basis[0]]]
        for n in range(1, top + 1):
            self.boundary.append([self._column(n, x) for x in self.basis[n]])
        self.check()

    def _column(self, n: int, x) -> SparseVec:
        face, pos, p = self.space._face, self.position[n - 1], self.ell
        col: SparseVec = {}
        for i in range(n + 1):
            k = pos.get(face(n, i, x))
            if k is None:
                continue
            v = (col.get(k, 0) + (1 if i % 2 == 0 else -1)) % p
            if v:
                col[k] = v
            else:
                del col[k]
        return col

    def dim(self, n: int) -> int:
        return len(self.basis[n])

    def apply_boundary(self, n: int, chain: SparseVec) -> SparseVec:
        out: SparseVec = {}
        if n == 0:
            return out
        for j, c in chain.items():
            linalg.axpy(out, c, self.boundary[n][j], self.ell)
        return out

    def check(self) -> None:
        """Asserts that the boundary squares to zero."""
        for n in range(2, self.top + 1):
            for j, col in enumerate(self.boundary[n]):
                if self.apply_boundary(n - 1, col):
                    raise VerificationError(
                        f"boundary does not square to zero on {self.basis[n][j]!r} (degree {n})"
                    )

    def boundary_matrix(self, n: int) -> np.ndarray:
        rows = self.dim(n - 1) if n >= 1 else 0
        return linalg.to_dense(self.boundary[n], rows) if n >= 1 else np.zeros((0, self.dim(0)), np.int64)

    def rank(self, n: int, method: str = "auto") -> int:
        if n < 1 or n > self.top:
            return 0
        return self._ranks.setdefault(
            (n, method), linalg.rank(self.boundary[n], self.dim(n - 1), self.ell, method)
        )

    @cached_property
    def _ranks(self) -> dict:
        return {}

    def betti(self, D: int | None = None, method: str = "auto") -> BettiTable:
        D = self.top - 1 if D is None else D
        if D + 1 > self.top:
            raise TruncationError(f"Betti numbers through {D} need chains through {D + 1}")
        dims = tuple(
            self.dim(n) - self.rank(n, method) - self.rank(n + 1, method) for n in range(D + 1)
        )
        return BettiTable(self.ell, dims)

    def cycles(self, n: int) -> list[SparseVec]:
        if n == 0:
            return [{j: 1} for j in range(self.dim(0))]
        return linalg.kernel(self.boundary[n], self.ell)

    def homology_basis(self, n: int) -> HomologyBasis:
        if n + 1 > self.top:
            raise TruncationError(f"H_{n} needs chains through degree {n + 1}")
        cache = self._bases
        if n not in cache:
            E = Eliminator(self.ell)
            for col in self.boundary[n + 1]:
                E.add(col)
            reps = []
            for z in self.cycles(n):
                independent, _ = E.add(z, {len(reps): 1})
                if independent:
                    reps.append(z)
            cache[n] = HomologyBasis(n, reps, E)
        return cache[n]

    @cached_property
    def _bases(self) -> dict:
        return {}


def normalized_chains(X: SimplicialSet, ell: int, D: int | None = None) -> ChainComplex:
    """Chains through degree ``D + 1`` (default: everything stored)."""
    top = X.max_degree if D is None else D + 1
    if D is not None and D < 0:
        raise ValidationError("D must be >= 0")
    if top > X.max_degree:
        raise TruncationError(
            f"homology through degree {D} needs simplices through {D + 1}; "
            f"{X.name} stops at {X.max_degree}"
        )
    return ChainComplex(X, ell, top)


def betti(X: SimplicialSet, ell: int, D: int, method: str = "auto") -> BettiTable:
    return normalized_chains(X, ell, D).betti(D, method)


@dataclass
class InducedMap:
    ell: int
    matrices: list[np.ndarray]
    source_betti: BettiTable
    target_betti: BettiTable

    @property
    def ranks(self) -> list[int]:
        return [linalg.dense_rank(M, self.ell) if M.size else 0 for M in self.matrices]

    def is_iso_in(self, n: int) -> bool:
        a, b = self.source_betti.dims[n], self.target_betti.dims[n]
        return a == b and self.ranks[n] == a

    @property
    def is_iso(self) -> bool:
        return all(self.is_iso_in(n) for n in range(len(self.matrices)))

    def to_json(self) -> dict:
        return {
            "ell": self.ell,
            "source_betti": list(self.source_betti.dims),
            "target_betti": list(self.target_betti.dims),
            "ranks": self.ranks,
            "iso": self.is_iso,
            "matrices": [M.tolist() for M in self.matrices],
        }


def chain_map_image(f: SimplicialMap, CX: ChainComplex, CY: ChainComplex, n: int, chain: SparseVec) -> SparseVec:
    """Push a normalized chain forward; degenerate images vanish."""
    out: SparseVec = {}
    pos, basis, p = CY.position[n], CX.basis[n], CX.ell
    for j, c in chain.items():
        k = pos.get(f.fn(n, basis[j]))
        if k is not None:
            out[k] = (out.get(k, 0) + c) % p
            if not out[k]:
                del out[k]
    return out


def induced_on_homology(
    f: SimplicialMap,
    ell: int,
    D: int,
    source: ChainComplex | None = None,
    target: ChainComplex | None = None,
    verify_map: bool = True,
) -> InducedMap:
    """Matrices of ``f_*: H_n(X) -> H_n(Y)`` for ``n <= D`` in the cached homology bases.

    Each degree's rank is also recomputed as
    ``rank[B_Y | f(Z_X)] - rank B_Y``; a mismatch raises.
    """
    if verify_map:
        f.check()
    CX = source or normalized_chains(f.source, ell, D)
    CY = target or normalized_chains(f.target, ell, D)
    if CX.ell != ell or CY.ell != ell:
        raise ValidationError("chain complexes use a different prime")
    matrices = []
    for n in range(D + 1):
        HX, HY = CX.homology_basis(n), CY.homology_basis(n)
        M = np.zeros((HY.dim, HX.dim), dtype=np.int64)
        images = []
        for k, z in enumerate(HX.reps):
            w = chain_map_image(f, CX, CY, n, z)
            images.append(w)
            M[:, k] = HY.coordinates(w)
        matrices.append(M)
        image_route = _rank_modulo_boundaries(CY, n, images)
        matrix_route = linalg.dense_rank(M, ell) if M.size else 0
        if image_route != matrix_route:
            raise VerificationError(
                f"induced rank in degree {n}: coordinates give {matrix_route}, "
                f"image span gives {image_route}"
            )
    return InducedMap(ell, matrices, CX.betti(D), CY.betti(D))


def _rank_modulo_boundaries(C: ChainComplex, n: int, vectors: list[SparseVec]) -> int:
    E = Eliminator(C.ell)
    for col in C.boundary[n + 1]:
        E.add(col)
    base = len(E)
    for v in vectors:
        E.add(v)
    return len(E) - base


def compose_induced(first: InducedMap, second: InducedMap) -> list[np.ndarray]:
    """Matrices of ``second . first`` computed from the two factors."""
    return [linalg.matmul(B, A, first.ell) for A, B in zip(first.matrices, second.matrices)]


def check_path_components(X: SimplicialSet, table: BettiTable) -> None:
    if table.dims[0] != path_components(X):
        raise SimplicialError("H_0 disagrees with the path-component count")
