import pytest

from bcom.builtins import (
    CATALOG,
    builtin_group,
    finite_field,
    gl2,
    matrix_entries,
    matrix_field,
    prime_power,
    sl2,
    symmetric,
)
from bcom.errors import ResourceLimitError, ValidationError
from bcom.groups import conjugacy_classes


def test_klein_four():
    V = builtin_group("C2xC2")
    assert V.order == 4 and V.is_abelian
    assert sorted(V.element_orders) == [1, 2, 2, 2]


def test_symmetric_three():
    S3 = symmetric(3)
    assert S3.order == 6 and len(conjugacy_classes(S3).classes) == 3


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_gl2_order_matches_formula_and_enumeration(q):
    F = finite_field(q)
    invertible = 0
    for a in range(q):
        for b in range(q):
            for c in range(q):
                for d in range(q):
                    if F.sub(F.mul[a][d], F.mul[b][c]) != 0:
                        invertible += 1
    assert gl2(q).order == invertible == (q * q - 1) * (q * q - q)
    assert sl2(q).order == invertible // (q - 1)


def test_gl2_four_is_180():
    assert builtin_group("GL2:4").order == 180


def test_field_axioms_f4():
    F = finite_field(4)
    for a in range(4):
        for b in range(4):
            for c in range(4):
                assert F.mul[a][F.add[b][c]] == F.add[F.mul[a][b]][F.mul[a][c]]
    assert all(any(F.mul[a][b] == 1 for b in range(4)) for a in range(1, 4))


def test_matrix_entries_identity_first():
    G = gl2(3)
    assert matrix_entries(G, 0) == (1, 0, 0, 1)
    assert matrix_field(G).q == 3


@pytest.mark.parametrize("bad", ["GL2:6", "S9", "X3", "GL2:1"])
def test_rejected_specs(bad):
    with pytest.raises((ValidationError, ResourceLimitError)):
        builtin_group(bad)


def test_symmetric_degree_guard_is_resource_error():
    with pytest.raises(ResourceLimitError):
        builtin_group("S6")


def test_prime_power():
    assert prime_power(4) == (2, 2) and prime_power(6) is None and prime_power(1) is None


@pytest.mark.parametrize("name", CATALOG)
def test_catalog_identity_first(name):
    G = builtin_group(name)
    assert all(G.mul[0][g] == g == G.mul[g][0] for g in range(G.order))


def test_dihedral_and_quaternion_orders():
    assert builtin_group("D4").order == 8 and not builtin_group("D4").is_abelian
    Q8 = builtin_group("Q8")
    assert sorted(Q8.element_orders) == [1, 2, 4, 4, 4, 4, 4, 4]


def test_json_path(tmp_path):
    import json

    p = tmp_path / "g.json"
    p.write_text(json.dumps(builtin_group("S3").to_json()))
    assert builtin_group(str(p)).mul == builtin_group("S3").mul
    with pytest.raises(ValidationError):
        builtin_group(str(tmp_path / "missing.json"))
