"""Commuting tuples and the simplicial sets ``B(tau, G)``.

The ``n``-simplices of ``B(tau, G)`` are the homomorphisms ``tau^n -> G``
written in the basis ``e_{0->1}, ..., e_{n-1->n}``, i.e. ``n``-tuples of
elements:

* ``free``: any tuple (the bar construction of ``BG``);
* ``z``: pairwise commuting tuples;
* ``zmod:m``: pairwise commuting tuples of elements whose order divides ``m``;
* ``zell:l``: the ``l``-adic version, always realised as ``zmod:l^k`` with
  ``k`` the ``l``-adic valuation of the exponent of the ambient group.

Faces: ``d_0`` drops the first entry, ``d_i`` multiplies entries ``i`` and
``i+1`` (1-based), ``d_n`` drops the last. Degeneracy ``s_j`` inserts the
identity in slot ``j``.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from itertools import product
from typing import Union

from .errors import ResourceLimitError, SimplicialError, ValidationError, limits
from .groups import FiniteGroup, Subgroup, bits, exponent_valuation, is_prime, to_mask
from .simplicial import SimplicialMap, SimplicialSet, bar_complex, bar_degeneracy, bar_face

log = logging.getLogger(__name__)

GroupLike = Union[FiniteGroup, Subgroup]

FREE, Z, ZMOD, ZELL = "free", "z", "zmod", "zell"


@dataclass(frozen=True)
class TauSpec:
    kind: str
    parameter: int | None = None

    def __post_init__(self):
        if self.kind not in (FREE, Z, ZMOD, ZELL):
            raise ValidationError(f"unknown tau kind {self.kind!r}")
        if self.kind == ZMOD and (self.parameter is None or self.parameter < 1):
            raise ValidationError("zmod needs m >= 1")
        if self.kind == ZELL and (self.parameter is None or not is_prime(self.parameter)):
            raise ValidationError("zell needs a prime parameter")
        if self.kind in (FREE, Z) and self.parameter is not None:
            raise ValidationError(f"{self.kind} takes no parameter")

    def __str__(self) -> str:
        return self.kind if self.parameter is None else f"{self.kind}:{self.parameter}"

    @classmethod
    def parse(cls, text: str) -> "TauSpec":
        """``free``, ``z``, ``zmod:m``, ``zell:l`` (``zadic:l`` is accepted too)."""
        m = re.fullmatch(r"\s*(free|z|zmod|zell|zadic)(?::(\d+))?\s*", text.lower())
        if not m:
            raise ValidationError(f"cannot parse tau spec {text!r}")
        kind = ZELL if m.group(1) == "zadic" else m.group(1)
        param = int(m.group(2)) if m.group(2) else None
        return cls(kind, param)

    def resolve(self, G: FiniteGroup) -> "TauSpec":
        """Replace ``zell:l`` by the stable ``zmod:l^k`` for ``G``."""
        if self.kind != ZELL:
            return self
        k = exponent_valuation(G, self.parameter)
        return TauSpec(ZMOD, self.parameter**k)

    @property
    def commutative(self) -> bool:
        return self.kind != FREE


def _ambient(G: GroupLike) -> tuple[FiniteGroup, tuple[int, ...]]:
    if isinstance(G, Subgroup):
        return G.parent, G.members
    return G, tuple(range(G.order))


def candidates(G: GroupLike, tau: TauSpec) -> tuple[int, ...]:
    """Elements allowed as tuple entries."""
    parent, members = _ambient(G)
    tau = tau.resolve(parent)
    if tau.kind == ZMOD:
        orders = parent.element_orders
        return tuple(g for g in members if tau.parameter % orders[g] == 0)
    return members


def hom_set(G: GroupLike, tau: TauSpec, n: int) -> list[tuple[int, ...]]:
    """All of ``Hom(tau^n, G)`` as lexicographically sorted tuples.

    Commuting tuples are grown one entry at a time inside the centralizer of
    the entries chosen so far.
    """
    if n < 0:
        raise ValidationError("degree must be >= 0")
    parent, members = _ambient(G)
    cand = candidates(G, tau)
    estimate = len(members) * len(cand) ** max(n - 1, 0)
    if estimate > limits().max_tuple_estimate:
        raise ResourceLimitError(
            f"Hom({tau}^{n}, {parent.name}) enumeration estimate {estimate} exceeds "
            f"{limits().max_tuple_estimate}"
        )
    if n == 0:
        return [()]
    if not tau.commutative:
        return list(product(cand, repeat=n))
    comm = parent.commuting_masks
    cand_mask = to_mask(cand)
    out: list[tuple[int, ...]] = []
    cap = limits().max_simplices

    def extend(prefix: tuple[int, ...], allowed: int) -> None:
        if len(prefix) == n:
            out.append(prefix)
            if len(out) > cap:
                raise ResourceLimitError(f"more than {cap} tuples in degree {n}")
            return
        for g in bits(allowed):
            extend(prefix + (g,), allowed & comm[g])

    extend((), cand_mask)
    return out


def face(G: GroupLike, tau: TauSpec, i: int, t: tuple[int, ...]) -> tuple[int, ...]:
    n = len(t)
    if n < 1 or not 0 <= i <= n:
        raise SimplicialError(f"face d_{i} undefined on a {n}-tuple")
    return bar_face(_ambient(G)[0].mul, n, i, tuple(t))


def degeneracy(G: GroupLike, tau: TauSpec, j: int, t: tuple[int, ...]) -> tuple[int, ...]:
    n = len(t)
    if not 0 <= j <= n:
        raise SimplicialError(f"degeneracy s_{j} undefined on a {n}-tuple")
    return bar_degeneracy(n, j, tuple(t))


def build_bcom(G: GroupLike, tau: TauSpec, D: int) -> SimplicialSet:
    """``B(tau, G)`` with simplices through degree ``D + 1``.

    Homology through degree ``D`` needs the ``(D+1)``-simplices, so they are
    always built.
    """
    if D < 0:
        raise ValidationError("D must be >= 0")
    parent, members = _ambient(G)
    resolved = tau.resolve(parent)
    levels = []
    for n in range(D + 2):
        levels.append(hom_set(G, resolved, n))
        log.debug("B(%s,%s): %d simplices in degree %d", tau, parent.name, len(levels[-1]), n)
    label = parent.name if isinstance(G, FiniteGroup) else f"{parent.name}>{len(members)}"
    meta = {"group": label, "tau": str(tau), "resolved_tau": str(resolved)}
    if tau.kind == ZELL:
        meta["k"] = exponent_valuation(parent, tau.parameter)
    return bar_complex(parent, levels, f"B({tau},{label})", meta)


def _torsion_rank(tau: TauSpec) -> tuple[int, int | None]:
    """Position in the chain zmod -> z -> free, plus the modulus."""
    if tau.kind == ZMOD:
        return 0, tau.parameter
    if tau.kind == Z:
        return 1, None
    return 2, None


def inclusion_map(
    G: GroupLike,
    source: TauSpec,
    target: TauSpec,
    D: int,
    source_set: SimplicialSet | None = None,
    target_set: SimplicialSet | None = None,
) -> SimplicialMap:
    """Inclusion ``B(source, G) -> B(target, G)`` induced by ``target^. -> source^.``.

    Allowed: ``zmod:m -> zmod:m'`` with ``m | m'``, ``zmod -> z``, and
    anything ``-> free``; ``zell`` is resolved first.
    """
    parent, _ = _ambient(G)
    a, b = source.resolve(parent), target.resolve(parent)
    ra, ma = _torsion_rank(a)
    rb, mb = _torsion_rank(b)
    ok = ra < rb or (ra == rb and (ma is None or mb % ma == 0))
    if not ok:
        raise ValidationError(f"no inclusion B({source},G) -> B({target},G)")
    X = source_set if source_set is not None else build_bcom(G, source, D)
    Y = target_set if target_set is not None else build_bcom(G, target, D)
    return SimplicialMap(X, Y, lambda n, x: x, f"incl[{source}->{target}]")


def stabilized_adic(G: FiniteGroup, ell: int, D: int) -> SimplicialSet:
    """``B(Z_ell, G)``: the ``l``-adic colimit, which is reached at ``zmod:l^k``."""
    return build_bcom(G, TauSpec(ZELL, ell), D)


def conjugation_orbits(G: FiniteGroup, tuples: list[tuple[int, ...]]) -> list[list[tuple[int, ...]]]:
    """Partition tuples into orbits of simultaneous conjugation (``Rep(Z^n, G)``)."""
    conj = G.conj_array.tolist()
    seen: set = set()
    orbits = []
    for t in tuples:
        if t in seen:
            continue
        orbit = sorted({tuple(conj[g][x] for x in t) for g in range(G.order)})
        seen.update(orbit)
        orbits.append(orbit)
    return orbits
