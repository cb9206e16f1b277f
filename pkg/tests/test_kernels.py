import numpy as np
import pytest

from conftest import random_graph
from xistrong import _backend, _fallback
from xistrong._util import make_rng

compiled = pytest.importorskip("xistrong._kernels")


@pytest.mark.parametrize("args", [(3, 1, 2), (20, 1, 1), (500, 3, 3), (3000, 5, 8)])
def test_ba_backends_identical(args):
    a = compiled.ba_edges(*args, make_rng(41))
    b = _fallback.ba_edges(*args, make_rng(41))
    assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])


def test_ba_backends_leave_rng_in_same_state():
    r1, r2 = make_rng(5), make_rng(5)
    compiled.ba_edges(400, 3, 4, r1)
    _fallback.ba_edges(400, 3, 4, r2)
    assert r1.random() == r2.random()


def test_component_backends_identical():
    rng = make_rng(8)
    for _ in range(30):
        n = int(rng.integers(1, 2000))
        g = random_graph(rng, n, float(rng.uniform(0, 3 / n)))
        src, dst = g.edges()
        assert np.array_equal(compiled.component_labels(n, src, dst), _fallback.component_labels(n, src, dst))


def test_component_labels_length_mismatch():
    with pytest.raises(ValueError):
        compiled.component_labels(3, np.array([0, 1], dtype=np.int64), np.array([1], dtype=np.int64))
    with pytest.raises(ValueError):
        _fallback.component_labels(3, np.array([0, 1], dtype=np.int64), np.array([1], dtype=np.int64))


def test_backend_selected():
    assert _backend.BACKEND in {"cython", "python"}
