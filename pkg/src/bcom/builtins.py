"""Builtin group families and the group-spec string parser.

Element orderings (identity is always index 0):

* ``cyclic(m)``: ``k`` is the residue ``k mod m``.
* ``product(G, H)``: ``(g, h)`` has index ``g * |H| + h``.
* ``dihedral(n)`` (order ``2n``): ``r^k s^e`` has index ``k + n*e``; ``s r s = r^-1``.
* ``quaternion()``: ``1, -1, i, -i, j, -j, k, -k``.
* ``symmetric(n)`` / ``alternating(n)``: permutations of ``0..n-1`` in
  lexicographic order of their one-line form; ``(st)(x) = s(t(x))``.
* ``gl2(q)`` / ``sl2(q)``: matrices ``(a, b, c, d)`` over ``F_q`` with the
  identity first and the rest in lexicographic order of field indices.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations, product as iproduct
from pathlib import Path

from .errors import ResourceLimitError, ValidationError, limits
from .groups import FiniteGroup, group_from_json, group_from_table, is_prime

# Irreducible polynomials used for the non-prime fields, as coefficient lists
# from the constant term up (monic, degree k).
IRREDUCIBLE = {
    4: (1, 1, 1),        # x^2 + x + 1 over F_2
    8: (1, 1, 0, 1),     # x^3 + x + 1 over F_2
    9: (1, 0, 1),        # x^2 + 1 over F_3
}


@dataclass(frozen=True)
class FiniteField:
    """``F_q`` with elements ``0..q-1``; element ``x`` encodes the polynomial
    whose base-``p`` digits (least significant first) are its coefficients."""

    q: int
    p: int
    add: tuple[tuple[int, ...], ...]
    mul: tuple[tuple[int, ...], ...]

    def neg(self, a: int) -> int:
        return self.add[a].index(0)

    def sub(self, a: int, b: int) -> int:
        return self.add[a][self.neg(b)]

    def label(self, a: int) -> str:
        if self.q == self.p:
            return str(a)
        digits = []
        x = a
        while x:
            digits.append(x % self.p)
            x //= self.p
        terms = []
        for power, c in reversed(list(enumerate(digits))):
            if c == 0:
                continue
            mono = {0: "1", 1: "t"}.get(power, f"t^{power}")
            terms.append(mono if c == 1 else (f"{c}" if power == 0 else f"{c}{mono}"))
        return "+".join(terms) or "0"


def prime_power(q: int) -> tuple[int, int] | None:
    for p in range(2, q + 1):
        if q % p == 0:
            if not is_prime(p):
                return None
            k, x = 0, q
            while x % p == 0:
                x //= p
                k += 1
            return (p, k) if x == 1 else None
    return None


@lru_cache(maxsize=None)
def finite_field(q: int) -> FiniteField:
    pk = prime_power(q)
    if pk is None:
        raise ValidationError(f"{q} is not a prime power")
    p, k = pk
    if k == 1:
        add = tuple(tuple((a + b) % p for b in range(q)) for a in range(q))
        mul = tuple(tuple((a * b) % p for b in range(q)) for a in range(q))
        return FiniteField(q, p, add, mul)
    if q not in IRREDUCIBLE:
        raise ValidationError(f"no irreducible polynomial tabulated for F_{q}")
    poly = IRREDUCIBLE[q]

    def digits(x):
        return [(x // p**i) % p for i in range(k)]

    def encode(ds):
        return sum(d * p**i for i, d in enumerate(ds))

    def pmul(a, b):
        prod = [0] * (2 * k - 1)
        for i, x in enumerate(digits(a)):
            for j, y in enumerate(digits(b)):
                prod[i + j] = (prod[i + j] + x * y) % p
        for deg in range(2 * k - 2, k - 1, -1):
            c = prod[deg]
            if c:
                for i in range(k + 1):
                    prod[deg - k + i] = (prod[deg - k + i] - c * poly[i]) % p
        return encode(prod[:k])

    add = tuple(
        tuple(encode([(x + y) % p for x, y in zip(digits(a), digits(b))]) for b in range(q))
        for a in range(q)
    )
    mul = tuple(tuple(pmul(a, b) for b in range(q)) for a in range(q))
    return FiniteField(q, p, add, mul)


def _from_elements(elements, op, name, label=str) -> FiniteGroup:
    index = {x: i for i, x in enumerate(elements)}
    table = [[index[op(a, b)] for b in elements] for a in elements]
    return group_from_table(len(elements), table, [label(x) for x in elements], name)


def _guard(order: int, what: str) -> None:
    cap = limits().max_group_order
    if order > cap:
        raise ResourceLimitError(f"{what} has order {order}, above the cap {cap}")


def cyclic(m: int) -> FiniteGroup:
    if m < 1:
        raise ValidationError("cyclic group needs m >= 1")
    _guard(m, f"C{m}")
    return _from_elements(list(range(m)), lambda a, b: (a + b) % m, f"C{m}")


def product(G: FiniteGroup, H: FiniteGroup) -> FiniteGroup:
    _guard(G.order * H.order, f"{G.name}x{H.name}")
    n = H.order
    table = [
        [G.mul[a // n][b // n] * n + H.mul[a % n][b % n] for b in range(G.order * n)]
        for a in range(G.order * n)
    ]
    labels = [f"({G.label(a // n)},{H.label(a % n)})" for a in range(G.order * n)]
    return group_from_table(G.order * n, table, labels, f"{G.name}x{H.name}")


def dihedral(n: int) -> FiniteGroup:
    """Dihedral group of order ``2n`` (so ``dihedral(4)`` has order 8)."""
    if n < 1:
        raise ValidationError("dihedral group needs n >= 1")
    _guard(2 * n, f"D{n}")
    elements = [(k, e) for e in (0, 1) for k in range(n)]

    def op(x, y):
        (k1, e1), (k2, e2) = x, y
        return ((k1 + (-k2 if e1 else k2)) % n, (e1 + e2) % 2)

    def label(x):
        k, e = x
        r = "" if k == 0 else ("r" if k == 1 else f"r{k}")
        return (r + ("s" if e else "")) or "e"

    return _from_elements(elements, op, f"D{n}", label)


def quaternion() -> FiniteGroup:
    # unit quaternions as (sign, basis) with basis in 1, i, j, k
    names = ["1", "i", "j", "k"]
    table = {
        (0, 0): (1, 0), (0, 1): (1, 1), (0, 2): (1, 2), (0, 3): (1, 3),
        (1, 0): (1, 1), (1, 1): (-1, 0), (1, 2): (1, 3), (1, 3): (-1, 2),
        (2, 0): (1, 2), (2, 1): (-1, 3), (2, 2): (-1, 0), (2, 3): (1, 1),
        (3, 0): (1, 3), (3, 1): (1, 2), (3, 2): (-1, 1), (3, 3): (-1, 0),
    }
    elements = [(s, b) for b in range(4) for s in (1, -1)]

    def op(x, y):
        s, b = table[(x[1], y[1])]
        return (x[0] * y[0] * s, b)

    def label(x):
        return ("" if x[0] == 1 else "-") + names[x[1]]

    return _from_elements(elements, op, "Q8", label)


def _perm_label(p):
    return "".join(str(i) for i in p)


def symmetric(n: int) -> FiniteGroup:
    if n < 1:
        raise ValidationError("symmetric group needs n >= 1")
    if n > limits().max_symmetric_degree:
        raise ResourceLimitError(f"S{n} exceeds the degree cap {limits().max_symmetric_degree}")
    elements = list(permutations(range(n)))
    return _from_elements(
        elements, lambda s, t: tuple(s[t[x]] for x in range(n)), f"S{n}", _perm_label
    )


def _sign(p) -> int:
    sign, seen = 1, set()
    for i in range(len(p)):
        if i in seen:
            continue
        j, length = i, 0
        while j not in seen:
            seen.add(j)
            j = p[j]
            length += 1
        sign *= -1 if length % 2 == 0 else 1
    return sign


def alternating(n: int) -> FiniteGroup:
    if n < 1:
        raise ValidationError("alternating group needs n >= 1")
    if n > limits().max_symmetric_degree:
        raise ResourceLimitError(f"A{n} exceeds the degree cap {limits().max_symmetric_degree}")
    elements = [p for p in permutations(range(n)) if _sign(p) == 1]
    return _from_elements(
        elements, lambda s, t: tuple(s[t[x]] for x in range(n)), f"A{n}", _perm_label
    )


@lru_cache(maxsize=None)
def matrix_elements(q: int, special: bool) -> tuple[tuple[int, int, int, int], ...]:
    """Elements of GL2(q) or SL2(q) in the canonical order."""
    F = finite_field(q)
    M = F.mul

    def det(x):
        a, b, c, d = x
        return F.sub(M[a][d], M[b][c])

    keep = (lambda x: det(x) == 1) if special else (lambda x: det(x) != 0)
    identity = (1, 0, 0, 1)
    return (identity,) + tuple(
        x for x in iproduct(range(q), repeat=4) if x != identity and keep(x)
    )


def _matrix_group(q: int, special: bool) -> FiniteGroup:
    F = finite_field(q)
    name = f"{'SL2' if special else 'GL2'}({q})"
    full_order = (q * q - 1) * (q * q - q)
    _guard(full_order // (q - 1) if special else full_order, name)
    A, M = F.add, F.mul

    def op(x, y):
        a, b, c, d = x
        e, f, g, h = y
        return (
            A[M[a][e]][M[b][g]], A[M[a][f]][M[b][h]],
            A[M[c][e]][M[d][g]], A[M[c][f]][M[d][h]],
        )

    def label(x):
        return "[" + ",".join(F.label(v) for v in x) + "]"

    return _from_elements(list(matrix_elements(q, special)), op, name, label)


def gl2(q: int) -> FiniteGroup:
    return _matrix_group(q, special=False)


def sl2(q: int) -> FiniteGroup:
    return _matrix_group(q, special=True)


def _matrix_params(G: FiniteGroup) -> tuple[int, bool]:
    m = re.fullmatch(r"(GL2|SL2)\((\d+)\)", G.name)
    if not m:
        raise ValidationError(f"{G.name!r} is not a 2x2 matrix group")
    return int(m.group(2)), m.group(1) == "SL2"


def matrix_field(G: FiniteGroup) -> FiniteField:
    """Field of a group built by :func:`gl2`/:func:`sl2`."""
    return finite_field(_matrix_params(G)[0])


def matrix_entries(G: FiniteGroup, g: int) -> tuple[int, int, int, int]:
    """Recover ``(a, b, c, d)`` of element ``g`` of a matrix group."""
    return matrix_elements(*_matrix_params(G))[g]


_FAMILY = re.compile(r"^(C|S|A|D)(\d+)$")
_MATRIX = re.compile(r"^(GL2|SL2):(\d+)$")


def builtin_group(spec: str) -> FiniteGroup:
    """Build a group from a spec string such as ``S3``, ``GL2:4`` or ``C2xC2``.

    Recognised atoms: ``Cn``, ``Sn``, ``An``, ``Dn`` (order ``2n``), ``V4``,
    ``Q8``, ``GL2:q``, ``SL2:q``. Atoms joined by ``x`` form direct products.
    Anything else is treated as a path to a JSON table.
    """
    spec = spec.strip()
    if spec.endswith(".json") or Path(spec).is_file():
        path = Path(spec)
        if not path.is_file():
            raise ValidationError(f"no such group file: {spec}")
        return group_from_json(json.loads(path.read_text()))
    return _cached_builtin(spec)


@lru_cache(maxsize=None)
def _cached_builtin(spec: str) -> FiniteGroup:
    parts = spec.split("x")
    if len(parts) > 1:
        G = _atom(parts[0])
        for part in parts[1:]:
            G = product(G, _atom(part))
        return G
    return _atom(spec)


def _atom(atom: str) -> FiniteGroup:
    atom = atom.strip()
    if atom == "V4":
        G = product(cyclic(2), cyclic(2))
        return group_from_table(G.order, G.mul, G.labels, "V4")
    if atom == "Q8":
        return quaternion()
    m = _MATRIX.match(atom)
    if m:
        q = int(m.group(2))
        if prime_power(q) is None:
            raise ValidationError(f"{q} is not a prime power")
        return gl2(q) if m.group(1) == "GL2" else sl2(q)
    m = _FAMILY.match(atom)
    if m:
        kind, n = m.group(1), int(m.group(2))
        return {"C": cyclic, "S": symmetric, "A": alternating, "D": dihedral}[kind](n)
    raise ValidationError(f"unrecognised group spec {atom!r}")


# Named groups used by the exhaustive property suites.
CATALOG = (
    "C1", "C2", "C3", "C4", "C5", "C6", "V4", "C2xC2xC2", "C2xC4",
    "S3", "D4", "Q8", "D5", "D6", "A4", "SL2:3", "S4", "C3xS3",
    "GL2:2", "GL2:3", "SL2:4", "A5", "S5", "SL2:5", "GL2:4",
)
