"""The cosimplicial groups F, Z and Z/m in explicit coordinates.

Level ``n`` has ordered generators ``x_1, ..., x_n`` (the edges ``k-1 -> k``
of the reduced ``n``-simplex). Elements of ``Z[n]`` and ``(Z/m)[n]`` are
coefficient tuples of length ``n``. Elements of ``F[n]`` are freely reduced
words: tuples of nonzero ints, where ``k`` stands for ``x_k`` and ``-k`` for
its inverse.

A homomorphism out of level ``n`` is determined by the images of the
generators, so ``Hom(tau^n, G)`` is a set of ``n``-tuples in ``G``; the
simplicial structure on those tuples is precomposition with the maps here.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import SimplicialError, ValidationError
from .groups import FiniteGroup

Element = tuple[int, ...]


def _reduce_word(word: Sequence[int]) -> Element:
    out: list[int] = []
    for letter in word:
        if out and out[-1] == -letter:
            out.pop()
        else:
            out.append(letter)
    return tuple(out)


def _sign(k: int) -> int:
    return 1 if k > 0 else -1


@dataclass(frozen=True)
class CosimplicialGroup:
    """``kind`` is ``"free"``, ``"z"`` or ``"zmod"`` (with ``modulus``)."""

    kind: str
    modulus: int = 0

    def __post_init__(self):
        if self.kind not in ("free", "z", "zmod"):
            raise ValidationError(f"unknown cosimplicial group {self.kind!r}")
        if self.kind == "zmod" and self.modulus < 1:
            raise ValidationError("Z/m needs m >= 1")

    @property
    def abelian(self) -> bool:
        return self.kind != "free"

    def __str__(self) -> str:
        return {"free": "F", "z": "Z"}.get(self.kind, f"Z/{self.modulus}")

    # group structure of a single level

    def identity(self, n: int) -> Element:
        return () if self.kind == "free" else (0,) * n

    def generator(self, n: int, k: int) -> Element:
        if not 1 <= k <= n:
            raise SimplicialError(f"generator x_{k} does not exist in level {n}")
        if self.kind == "free":
            return (k,)
        return self._normalize(tuple(1 if j == k else 0 for j in range(1, n + 1)))

    def multiply(self, a: Element, b: Element) -> Element:
        if self.kind == "free":
            return _reduce_word(a + b)
        return self._normalize(tuple(x + y for x, y in zip(a, b)))

    def inverse(self, a: Element) -> Element:
        if self.kind == "free":
            return tuple(-k for k in reversed(a))
        return self._normalize(tuple(-x for x in a))

    def _normalize(self, a: Element) -> Element:
        return tuple(x % self.modulus for x in a) if self.kind == "zmod" else a

    def from_word(self, n: int, word: Sequence[int]) -> Element:
        """The image of a word in ``x_1..x_n`` (F is the universal case)."""
        if any(not 1 <= abs(k) <= n for k in word):
            raise SimplicialError(f"word {tuple(word)} uses generators outside level {n}")
        if self.kind == "free":
            return _reduce_word(word)
        counts = [0] * n
        for k in word:
            counts[abs(k) - 1] += _sign(k)
        return self._normalize(tuple(counts))

    def _as_word(self, a: Element) -> list[int]:
        if self.kind == "free":
            return list(a)
        word: list[int] = []
        for k, c in enumerate(a, start=1):
            word.extend([k if c > 0 else -k] * abs(c))
        return word

    # cosimplicial structure

    def coface(self, i: int, n: int, a: Element) -> Element:
        """``delta^i: tau^n -> tau^(n+1)`` for ``0 <= i <= n+1``.

        ``x_k`` goes to ``x_(k+1)`` when ``k >= i+1`` (the edge is shifted),
        to ``x_i x_(i+1)`` when ``k == i`` (the edge is subdivided) and stays
        put otherwise.
        """
        if not 0 <= i <= n + 1:
            raise SimplicialError(f"coface index {i} out of range for level {n}")
        word: list[int] = []
        for letter in self._as_word(a):
            k, s = abs(letter), _sign(letter)
            if k > i:
                image = [k + 1]
            elif k == i:
                image = [k, k + 1]
            else:
                image = [k]
            word.extend(image if s > 0 else [-x for x in reversed(image)])
        return self.from_word(n + 1, word)

    def codegeneracy(self, j: int, n: int, a: Element) -> Element:
        """``sigma^j: tau^n -> tau^(n-1)`` for ``0 <= j <= n-1``; kills ``x_(j+1)``."""
        if not 0 <= j <= n - 1:
            raise SimplicialError(f"codegeneracy index {j} out of range for level {n}")
        word = []
        for letter in self._as_word(a):
            k = abs(letter)
            if k == j + 1:
                continue
            word.append(letter if k <= j else _sign(letter) * (k - 1))
        return self.from_word(n - 1, word)

    # homomorphisms into a finite group

    def evaluate(self, G: FiniteGroup, images: Sequence[int], a: Element) -> int:
        """``phi(a)`` where ``phi`` sends ``x_k`` to ``images[k-1]``.

        For the abelian kinds the images must commute (and be ``m``-torsion
        for ``Z/m``), otherwise ``phi`` is not a homomorphism.
        """
        g = G.identity
        for letter in self._as_word(a):
            h = images[abs(letter) - 1]
            g = G.mul[g][h if letter > 0 else G.inv[h]]
        return g

    def face_by_precomposition(self, G: FiniteGroup, images: Sequence[int], i: int) -> tuple[int, ...]:
        n = len(images)
        if n < 1:
            raise SimplicialError("level 0 has no faces")
        return tuple(
            self.evaluate(G, images, self.coface(i, n - 1, self.generator(n - 1, k)))
            for k in range(1, n)
        )

    def degeneracy_by_precomposition(self, G: FiniteGroup, images: Sequence[int], j: int) -> tuple[int, ...]:
        n = len(images)
        return tuple(
            self.evaluate(G, images, self.codegeneracy(j, n + 1, self.generator(n + 1, k)))
            for k in range(1, n + 2)
        )


FREE = CosimplicialGroup("free")
Z = CosimplicialGroup("z")


def zmod(m: int) -> CosimplicialGroup:
    return CosimplicialGroup("zmod", m)


def surjection(source: CosimplicialGroup, target: CosimplicialGroup, n: int, a: Element) -> Element:
    """The canonical quotient ``F -> Z -> Z/m`` (and ``Z/m -> Z/m'`` for ``m' | m``)."""
    order = {"free": 0, "z": 1, "zmod": 2}
    if order[source.kind] > order[target.kind]:
        raise ValidationError(f"no canonical surjection {source} -> {target}")
    if source.kind == target.kind == "zmod" and source.modulus % target.modulus:
        raise ValidationError(f"{target.modulus} does not divide {source.modulus}")
    if source.kind == target.kind and source.kind != "zmod":
        return a
    return target.from_word(n, source._as_word(a))
