import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bagrefine import kernels
from bagrefine.canonical import _twin_classes
from bagrefine.graph import grid, petersen, random_planar_graph
from bagrefine.kernels import _loops, numpy_backend

from test_graph_core import graphs

needs_jit = pytest.mark.skipif(kernels.jit is None, reason="numba not importable")


def _nested_brute(p, q):
    return np.array([sum(1 for l in range(len(p)) if p[k] < p[l] and q[l] < q[k]) for k in range(len(p))], np.int64)


@settings(max_examples=60, deadline=None)
@given(graphs(max_n=9))
def test_numpy_dp_matches_loops(g):
    a = g.mask_array()
    for name in ("tw_dp", "pw_dp"):
        ref = getattr(_loops, name)(a, g.n)
        got = getattr(numpy_backend, name)(a, g.n)
        if isinstance(ref, tuple):
            # tie-breaks in the argmin array may differ; the widths may not
            assert np.array_equal(ref[0], got[0])
        else:
            assert np.array_equal(ref, got)


@needs_jit
@settings(max_examples=60, deadline=None)
@given(graphs(max_n=10))
def test_jit_matches_numpy(g):
    a = g.mask_array()
    assert np.array_equal(kernels.jit.tw_dp(a, g.n)[0], numpy_backend.tw_dp(a, g.n)[0])
    assert np.array_equal(kernels.jit.pw_dp(a, g.n), numpy_backend.pw_dp(a, g.n))
    if g.n:
        cls, cm = _twin_classes(g)
        for x, y in zip(kernels.jit.canon(a, g.n, cls, cm), _loops.canon(a, g.n, cls, cm)):
            assert np.array_equal(x, y)


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 40).flatmap(lambda m: st.lists(st.tuples(st.integers(0, m - 1), st.integers(0, m - 1)), max_size=60).map(lambda c: (m, c))))
def test_nested_counts_all_backends(case):
    m, chords = case
    p = np.array([min(a, b) for a, b in chords], np.int64)
    q = np.array([max(a, b) for a, b in chords], np.int64)
    ref = _nested_brute(p, q)
    assert np.array_equal(_loops.nested_counts(p, q, m), ref)
    # a tiny block size exercises the cross-block path of the numpy version
    assert np.array_equal(numpy_backend.nested_counts(p, q, m, block=4), ref)
    assert np.array_equal(numpy_backend.nested_counts(p, q, m), ref)
    if kernels.jit is not None:
        assert np.array_equal(kernels.jit.nested_counts(p, q, m), ref)


def test_nested_counts_with_heavy_ties():
    rng = np.random.default_rng(3)
    m = 30
    a, b = rng.integers(0, 6, 500), rng.integers(0, m, 500)
    p, q = np.minimum(a, b), np.maximum(a, b)
    ref = _nested_brute(p, q)
    assert np.array_equal(numpy_backend.nested_counts(p, q, m, block=16), ref)


@needs_jit
def test_backends_agree_on_larger_graphs():
    for g in (petersen(), grid(4, 4), random_planar_graph(15, seed=1)):
        a = g.mask_array()
        assert np.array_equal(kernels.jit.tw_dp(a, g.n)[0], numpy_backend.tw_dp(a, g.n)[0])
        assert np.array_equal(kernels.jit.pw_dp(a, g.n), numpy_backend.pw_dp(a, g.n))


def _backend_in_subprocess(flag):
    env = dict(os.environ)
    env.pop("BAGREFINE_NO_JIT", None)
    if flag is not None:
        env["BAGREFINE_NO_JIT"] = flag
    code = "from bagrefine import kernels; from bagrefine.exact import treewidth; from bagrefine.graph import grid; print(kernels.BACKEND, treewidth(grid(4, 4)))"
    return subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True).stdout.split()


def test_env_flag_selects_numpy_backend():
    assert _backend_in_subprocess("1") == ["numpy", "4"]
    assert _backend_in_subprocess("0")[1] == "4"


@needs_jit
def test_default_backend_is_numba():
    assert _backend_in_subprocess(None) == ["numba", "4"]
