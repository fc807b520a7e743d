import numpy as np
import pytest
from hypothesis import given, strategies as st

from bcom import linalg
from bcom.errors import ValidationError

import oracles


@st.composite
def sparse_matrices(draw):
    p = draw(st.sampled_from([2, 3, 5, 7]))
    rows = draw(st.integers(0, 12))
    cols = draw(st.integers(0, 12))
    entries = draw(st.lists(st.integers(0, p - 1), min_size=rows * cols, max_size=rows * cols))
    M = np.array(entries, dtype=np.int64).reshape(rows, cols)
    columns = [{i: int(M[i, j]) for i in range(rows) if M[i, j]} for j in range(cols)]
    return p, M, columns


@given(sparse_matrices())
def test_three_rank_routes_agree(data):
    p, M, columns = data
    expected = oracles.rank_mod_p(M.tolist(), p) if M.size else 0
    assert linalg.rank(columns, M.shape[0], p, "sparse") == expected
    assert linalg.rank(columns, M.shape[0], p, "dense") == expected


@given(sparse_matrices())
def test_kernel_vectors_are_killed(data):
    p, M, columns = data
    K = linalg.kernel(columns, p)
    assert len(K) == M.shape[1] - linalg.sparse_rank(columns, p)
    for v in K:
        out = {}
        for j, c in v.items():
            linalg.axpy(out, c, columns[j], p)
        assert out == {}


def test_check_prime():
    with pytest.raises(ValidationError):
        linalg.check_prime(9)
    linalg.check_prime(7)
