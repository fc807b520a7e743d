"""Finite groups given by multiplication tables, and their subgroup data.

Elements are the integers ``0 .. order-1`` and ``0`` is always the identity.
Subsets of a group are handled internally as Python-int bitmasks, which keeps
centralizer intersections and subgroup deduplication cheap.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import GroupValidationError, ResourceLimitError, ValidationError, limits


def bits(mask: int) -> Iterator[int]:
    """Yield the set bits of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def to_mask(elements: Iterable[int]) -> int:
    mask = 0
    for g in elements:
        mask |= 1 << g
    return mask


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """A finite group by its Cayley table.

    Instances compare by identity; two separately built copies of the same
    group are different objects.
    """

    order: int
    mul: tuple[tuple[int, ...], ...]
    inv: tuple[int, ...]
    labels: tuple[str, ...] | None = None
    name: str = ""

    identity = 0

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name or '?'}, order={self.order})"

    def __len__(self) -> int:
        return self.order

    def label(self, g: int) -> str:
        return self.labels[g] if self.labels else str(g)

    @cached_property
    def mul_array(self) -> np.ndarray:
        arr = np.array(self.mul, dtype=np.int64)
        arr.flags.writeable = False
        return arr

    @cached_property
    def conj_array(self) -> np.ndarray:
        """``conj_array[g, h] == g h g^-1``."""
        m = self.mul_array
        inv = np.array(self.inv, dtype=np.int64)
        out = m[m, inv[:, None]]
        out.flags.writeable = False
        return out

    @cached_property
    def commuting_masks(self) -> tuple[int, ...]:
        """Bitmask of the centralizer of each single element."""
        m = self.mul_array
        comm = m == m.T
        return tuple(to_mask(np.flatnonzero(row).tolist()) for row in comm)

    @cached_property
    def element_orders(self) -> tuple[int, ...]:
        orders = []
        for g in range(self.order):
            k, x = 1, g
            while x != 0:
                x = self.mul[x][g]
                k += 1
            orders.append(k)
        return tuple(orders)

    @cached_property
    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.mul_array, self.mul_array.T))

    @cached_property
    def full_mask(self) -> int:
        return (1 << self.order) - 1

    def power(self, g: int, k: int) -> int:
        if k < 0:
            g, k = self.inv[g], -k
        x = 0
        for _ in range(k):
            x = self.mul[x][g]
        return x

    def conjugate(self, g: int, h: int) -> int:
        return self.mul[self.mul[g][h]][self.inv[g]]

    def commute(self, g: int, h: int) -> bool:
        return self.mul[g][h] == self.mul[h][g]

    def to_json(self) -> dict:
        out: dict = {"order": self.order, "mul": [list(row) for row in self.mul]}
        if self.labels is not None:
            out["labels"] = list(self.labels)
        if self.name:
            out["name"] = self.name
        return out

    @property
    def whole(self) -> "Subgroup":
        return Subgroup(self, tuple(range(self.order)))

    @property
    def trivial(self) -> "Subgroup":
        return Subgroup(self, (0,))


def group_from_table(
    order: int,
    mul: Sequence[Sequence[int]],
    labels: Sequence[str] | None = None,
    name: str = "",
) -> FiniteGroup:
    """Validate a Cayley table and wrap it as a :class:`FiniteGroup`.

    The identity must be element 0. Errors name the first failing element or
    triple.
    """
    if order < 1:
        raise GroupValidationError(f"order must be positive, got {order}")
    if len(mul) != order or any(len(row) != order for row in mul):
        raise GroupValidationError(f"table must be {order}x{order}")
    for a, row in enumerate(mul):
        for b, c in enumerate(row):
            if not isinstance(c, (int, np.integer)) or not 0 <= c < order:
                raise GroupValidationError(
                    f"entry mul[{a}][{b}] = {c!r} is out of range 0..{order - 1}", (a, b)
                )
    if labels is not None and len(labels) != order:
        raise GroupValidationError(f"expected {order} labels, got {len(labels)}")
    table = tuple(tuple(int(c) for c in row) for row in mul)

    for g in range(order):
        if table[0][g] != g or table[g][0] != g:
            candidates = [
                e for e in range(order)
                if all(table[e][x] == x == table[x][e] for x in range(order))
            ]
            hint = f"; element {candidates[0]} is an identity" if candidates else ""
            raise GroupValidationError(
                f"element 0 is not a two-sided identity (fails at {g}){hint}", (g,)
            )

    inv = []
    for g in range(order):
        row = table[g]
        try:
            h = row.index(0)
        except ValueError:
            raise GroupValidationError(f"element {g} has no inverse", (g,)) from None
        if table[h][g] != 0:
            raise GroupValidationError(f"element {g} has no two-sided inverse", (g,))
        inv.append(h)

    m = np.array(table, dtype=np.int64)
    for a in range(order):
        left = m[m[a]]                       # (ab)c over all b, c
        right = m[a][m]                      # a(bc) over all b, c
        bad = np.argwhere(left != right)
        if bad.size:
            b, c = (int(x) for x in bad[0])
            raise GroupValidationError(
                f"not associative at ({a}, {b}, {c})", (a, b, c)
            )
    return FiniteGroup(
        order=order,
        mul=table,
        inv=tuple(inv),
        labels=tuple(labels) if labels is not None else None,
        name=name,
    )


def group_from_json(data: dict | str) -> FiniteGroup:
    if isinstance(data, str):
        data = json.loads(data)
    try:
        return group_from_table(
            int(data["order"]), data["mul"], data.get("labels"), data.get("name", "")
        )
    except KeyError as exc:
        raise GroupValidationError(f"group JSON is missing field {exc}") from None


@dataclass(frozen=True)
class Subgroup:
    parent: FiniteGroup = field(compare=False, repr=False)
    members: tuple[int, ...]

    def __post_init__(self):
        if list(self.members) != sorted(set(self.members)):
            object.__setattr__(self, "members", tuple(sorted(set(self.members))))

    @property
    def order(self) -> int:
        return len(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, g: int) -> bool:
        return bool(self.mask >> g & 1)

    def __iter__(self):
        return iter(self.members)

    @cached_property
    def mask(self) -> int:
        return to_mask(self.members)

    @cached_property
    def is_abelian(self) -> bool:
        G = self.parent
        return all(
            (G.commuting_masks[g] & self.mask) == self.mask for g in self.members
        )

    def is_subgroup(self) -> bool:
        G = self.parent
        if 0 not in self:
            return False
        return all(G.inv[a] in self for a in self.members) and all(
            G.mul[a][b] in self for a in self.members for b in self.members
        )

    def issubset(self, other: "Subgroup") -> bool:
        return self.mask & other.mask == self.mask

    def intersection(self, other: "Subgroup") -> "Subgroup":
        return Subgroup(self.parent, tuple(bits(self.mask & other.mask)))

    def conjugate(self, g: int) -> "Subgroup":
        row = self.parent.conj_array[g]
        return Subgroup(self.parent, tuple(sorted(int(row[h]) for h in self.members)))

    def label(self) -> str:
        return "{" + ",".join(self.parent.label(g) for g in self.members) + "}"


def subgroup_from_mask(G: FiniteGroup, mask: int) -> Subgroup:
    return Subgroup(G, tuple(bits(mask)))


def generate(G: FiniteGroup, gens: Iterable[int]) -> Subgroup:
    """Smallest subgroup containing ``gens``."""
    gens = [g for g in set(gens) if g != 0]
    seen = {0}
    frontier = [0]
    while frontier:
        nxt = []
        for x in frontier:
            row = G.mul[x]
            for g in gens:
                y = row[g]
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return Subgroup(G, tuple(sorted(seen)))


def centralizer(G: FiniteGroup, S: Iterable[int]) -> Subgroup:
    mask = G.full_mask
    for s in S:
        mask &= G.commuting_masks[s]
    return subgroup_from_mask(G, mask)


def center(G: FiniteGroup) -> Subgroup:
    return centralizer(G, range(G.order))


def normalizer(G: FiniteGroup, H: Subgroup) -> Subgroup:
    conj = G.conj_array
    members = np.array(H.members, dtype=np.int64)
    hmask = np.zeros(G.order, dtype=bool)
    hmask[members] = True
    keep = hmask[conj[:, members]].all(axis=1)
    return Subgroup(G, tuple(int(g) for g in np.flatnonzero(keep)))


@dataclass(frozen=True)
class ConjClassTable:
    classes: tuple[tuple[int, ...], ...]
    reps: tuple[int, ...]

    def class_of(self, g: int) -> int:
        for i, c in enumerate(self.classes):
            if g in c:
                return i
        raise KeyError(g)


def conjugacy_classes(G: FiniteGroup) -> ConjClassTable:
    conj = G.conj_array
    seen = np.zeros(G.order, dtype=bool)
    classes = []
    for g in range(G.order):
        if seen[g]:
            continue
        cls = sorted(set(conj[:, g].tolist()))
        seen[cls] = True
        classes.append(tuple(cls))
    return ConjClassTable(tuple(classes), tuple(c[0] for c in classes))


def exponent(G: FiniteGroup) -> int:
    return math.lcm(*G.element_orders)


def valuation(n: int, p: int) -> int:
    if n == 0:
        raise ValueError("valuation of zero")
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, math.isqrt(n) + 1))


def _check_prime(ell: int) -> None:
    if not is_prime(ell):
        raise ValidationError(f"{ell} is not a prime")


def exponent_valuation(G: FiniteGroup, ell: int) -> int:
    """Power of ``ell`` in the exponent of ``G``.

    Beyond this ``k``, homomorphisms from ``(Z/ell^k)^n`` into ``G`` no longer
    change.
    """
    _check_prime(ell)
    return valuation(exponent(G), ell)


def ell_torsion(A: Subgroup, ell: int) -> Subgroup:
    """Elements of the abelian subgroup ``A`` whose order is a power of ``ell``."""
    _check_prime(ell)
    if not A.is_abelian:
        raise ValidationError("ell_torsion needs an abelian subgroup")
    orders = A.parent.element_orders
    members = []
    for g in A.members:
        k = orders[g]
        while k % ell == 0:
            k //= ell
        if k == 1:
            members.append(g)
    return Subgroup(A.parent, tuple(members))


def _subgroup_key(H: Subgroup) -> tuple:
    return (H.order, H.members)


def abelian_subgroups(G: FiniteGroup, require_center: bool = False) -> list[Subgroup]:
    """Every abelian subgroup of ``G`` (optionally only those containing Z(G)).

    Subgroups are grown one generator at a time inside the centralizer of what
    has been built so far, so every abelian subgroup is reached.
    """
    lim = limits()
    if G.order > lim.max_subgroup_search_order:
        raise ResourceLimitError(
            f"subgroup search capped at order {lim.max_subgroup_search_order}, "
            f"group has order {G.order}"
        )
    found: dict[int, Subgroup] = {}
    frontier = []
    for g in range(G.order):
        H = generate(G, [g])
        if H.mask not in found:
            found[H.mask] = H
            frontier.append(H)
    while frontier:
        nxt = []
        for A in frontier:
            cmask = G.full_mask
            for a in A.members:
                cmask &= G.commuting_masks[a]
            rest = cmask & ~A.mask
            while rest:
                g = (rest & -rest).bit_length() - 1
                B = _abelian_join(G, A, g)
                rest &= ~_same_join_mask(G, A, g, B.order // A.order)
                if B.mask not in found:
                    found[B.mask] = B
                    nxt.append(B)
                    if len(found) > lim.max_subgroups:
                        raise ResourceLimitError(
                            f"more than {lim.max_subgroups} abelian subgroups"
                        )
        frontier = nxt
    groups = list(found.values())
    if require_center:
        Z = center(G)
        groups = [A for A in groups if Z.issubset(A)]
    groups.sort(key=_subgroup_key)
    return groups


def _abelian_join(G: FiniteGroup, A: Subgroup, g: int) -> Subgroup:
    members = set(A.members)
    x = g
    while x not in A:
        members.update(G.mul[a][x] for a in A.members)
        x = G.mul[x][g]
    return Subgroup(G, tuple(sorted(members)))


def _same_join_mask(G: FiniteGroup, A: Subgroup, g: int, index: int) -> int:
    """Elements ``x`` with ``<A, x> == <A, g>``: the cosets ``A g^k``, gcd(k, index) = 1."""
    mask = 0
    x = g
    for k in range(1, index + 1):
        if math.gcd(k, index) == 1:
            for a in A.members:
                mask |= 1 << G.mul[a][x]
        x = G.mul[x][g]
    return mask


@dataclass(frozen=True, eq=False)
class AbelianPoset:
    """Abelian subgroups closed under intersection and conjugation.

    ``leq`` holds pairs ``(i, j)`` with ``groups[i] <= groups[j]`` (reflexive
    pairs included). ``classes`` partitions the indices into conjugacy
    orbits, ordered by their representatives.
    """

    group: FiniteGroup
    groups: tuple[Subgroup, ...]
    leq: frozenset[tuple[int, int]]
    classes: tuple[tuple[int, ...], ...]
    class_reps: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.groups)

    @cached_property
    def class_of(self) -> tuple[int, ...]:
        out = [0] * len(self.groups)
        for c, members in enumerate(self.classes):
            for i in members:
                out[i] = c
        return tuple(out)

    def index(self, H: Subgroup) -> int:
        return self._index[H.mask]

    @cached_property
    def _index(self) -> dict[int, int]:
        return {H.mask: i for i, H in enumerate(self.groups)}

    @cached_property
    def class_leq(self) -> frozenset[tuple[int, int]]:
        """Order on conjugacy classes: [A] <= [B] iff A is conjugate into B."""
        cls = self.class_of
        return frozenset((cls[i], cls[j]) for i, j in self.leq)

    def check_closure(self) -> None:
        """Raise if any listed invariant of the collection fails."""
        G = self.group
        masks = set(self._index)
        for A in self.groups:
            if not A.is_abelian:
                raise ValidationError(f"non-abelian subgroup {A.members}")
        for A, B in combinations(self.groups, 2):
            if A.mask & B.mask not in masks:
                raise ValidationError(f"intersection of {A.members} and {B.members} missing")
        for A in self.groups:
            for g in range(G.order):
                if A.conjugate(g).mask not in masks:
                    raise ValidationError(f"conjugate of {A.members} by {g} missing")
        for i, A in enumerate(self.groups):
            for j, B in enumerate(self.groups):
                if ((i, j) in self.leq) != A.issubset(B):
                    raise ValidationError(f"order relation wrong at ({i}, {j})")


def poset_from_subgroups(
    G: FiniteGroup, subgroups: Iterable[Subgroup], close: bool = False
) -> AbelianPoset:
    """Package a collection of abelian subgroups as an :class:`AbelianPoset`.

    With ``close`` the collection is first closed under conjugation and
    pairwise intersection; otherwise a collection that is not closed is an
    error.
    """
    found = {H.mask: H for H in subgroups}
    if close:
        changed = True
        while changed:
            changed = False
            for H in list(found.values()):
                for g in range(G.order):
                    K = H.conjugate(g)
                    if K.mask not in found:
                        found[K.mask] = K
                        changed = True
            for H, K in combinations(list(found.values()), 2):
                m = H.mask & K.mask
                if m not in found:
                    found[m] = subgroup_from_mask(G, m)
                    changed = True
    groups = sorted(found.values(), key=_subgroup_key)
    poset = _make_poset(G, groups)
    poset.check_closure()
    return poset


def _make_poset(G: FiniteGroup, groups: list[Subgroup]) -> AbelianPoset:
    index = {H.mask: i for i, H in enumerate(groups)}
    leq = frozenset(
        (i, j)
        for i, A in enumerate(groups)
        for j, B in enumerate(groups)
        if A.order <= B.order and A.issubset(B)
    )
    seen = [False] * len(groups)
    classes = []
    for i, H in enumerate(groups):
        if seen[i]:
            continue
        orbit = set()
        for g in range(G.order):
            K = H.conjugate(g)
            if K.mask not in index:
                raise ValidationError(f"conjugate of {H.members} by {g} not in collection")
            orbit.add(index[K.mask])
        for j in orbit:
            seen[j] = True
        # groups are sorted by (order, members), so the smallest index is the
        # lexicographically minimal member list of the orbit
        classes.append(tuple(sorted(orbit)))
    classes.sort(key=lambda c: _subgroup_key(groups[c[0]]))
    return AbelianPoset(
        group=G,
        groups=tuple(groups),
        leq=leq,
        classes=tuple(classes),
        class_reps=tuple(c[0] for c in classes),
    )


def abelian_subgroup_poset(G: FiniteGroup, require_center: bool = False) -> AbelianPoset:
    """All abelian subgroups of ``G`` ordered by inclusion, with conjugacy classes.

    With ``require_center`` only subgroups containing the centre are kept;
    intersections of such subgroups still contain the centre, so the
    collection stays closed.
    """
    return poset_from_subgroups(G, abelian_subgroups(G, require_center))
