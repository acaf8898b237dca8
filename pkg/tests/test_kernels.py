"""Backend parity: the compiled and pure-Python kernels must agree exactly."""

import importlib
import random
import subprocess
import sys

import pytest

from mealysync import _kernels_py, kernels

try:
    _c = importlib.import_module("mealysync._ckernels")
except ImportError:
    _c = None

needs_c = pytest.mark.skipif(_c is None, reason="compiled kernels not built")


def _tables(rng, n, k, perm=False):
    delta = [rng.randrange(n) for _ in range(n * k)]
    if perm:
        out = []
        for _ in range(n):
            row = list(range(k))
            rng.shuffle(row)
            out.extend(row)
    else:
        out = [rng.randrange(k) for _ in range(n * k)]
    return delta, out


@needs_c
@pytest.mark.parametrize("seed", range(40))
def test_refine_parity(seed):
    rng = random.Random(seed)
    n, k = rng.randint(1, 30), rng.randint(1, 4)
    delta, _ = _tables(rng, n, k)
    labels = [rng.randrange(3) for _ in range(n)]
    assert list(_c.refine(delta, labels, n, k)) == list(_kernels_py.refine(delta, labels, n, k))


@needs_c
@pytest.mark.parametrize("seed", range(40))
def test_compose_parity(seed):
    rng = random.Random(seed)
    k = rng.randint(1, 3)
    n1, n2 = rng.randint(1, 8), rng.randint(1, 8)
    df, of = _tables(rng, n1, k, perm=True)
    dg, og = _tables(rng, n2, k, perm=True)
    for cap in (3, 1000):
        a = _c.compose(df, of, dg, og, k, cap)
        b = _kernels_py.compose(df, of, dg, og, k, cap)
        if b is None:
            assert a is None
        else:
            assert tuple(map(list, a[:2])) + (a[2],) == tuple(map(list, b[:2])) + (b[2],)


@needs_c
@pytest.mark.parametrize("seed", range(30))
def test_subsets_parity(seed):
    rng = random.Random(seed)
    n, k = rng.randint(1, 9), rng.randint(1, 3)
    delta, _ = _tables(rng, n, k)
    start = (1 << n) - 1
    a_masks, a_tab = _c.subsets(delta, n, k, start)
    b_masks, b_tab = _kernels_py.subsets(delta, n, k, start)
    assert list(a_masks) == list(b_masks) and list(a_tab) == list(b_tab)


@needs_c
@pytest.mark.parametrize("seed", range(30))
def test_transduce_and_orbit_parity(seed):
    rng = random.Random(seed)
    n, k = rng.randint(1, 6), rng.randint(2, 3)
    delta, out = _tables(rng, n, k, perm=True)
    word = [rng.randrange(k) for _ in range(rng.randint(0, 20))]
    q = rng.randrange(n)
    assert list(_c.transduce(delta, out, k, q, word)) == _kernels_py.transduce(delta, out, k, q, word)
    assert _c.orbit_length(delta, out, k, q, word, 50) == _kernels_py.orbit_length(delta, out, k, q, word, 50)


def test_refine_small_case():
    # 0 -> 1 -> 2 -> 2 with labels marking 2: all three states are distinct
    assert list(kernels.refine([1, 2, 2], [0, 0, 1], 3, 1)) == [0, 1, 2]


def test_compose_cap_returns_none():
    # a 2-cycle after a 1-state machine gives a 2-state product
    assert kernels.compose([1, 0], [0, 0], [0], [0], 1, 1) is None
    assert kernels.compose([1, 0], [0, 0], [0], [0], 1, 2) == ([1, 0], [0, 0], 2)


def test_backend_switch_by_environment():
    code = "from mealysync import kernels; print(kernels.BACKEND)"
    env = {"MEALYSYNC_PURE_PYTHON": "1", "PATH": "/usr/bin:/bin"}
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True)
    assert out.stdout.strip() == "python"


@needs_c
def test_compiled_backend_is_default():
    assert kernels.BACKEND == "cython"
