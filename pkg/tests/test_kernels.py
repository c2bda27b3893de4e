"""Compiled and pure-Python kernels must agree exactly."""

import importlib.util
import os
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from leadsel import kernels
from leadsel.graph import random_tree

BACKENDS = kernels.backends()
needs_both = pytest.mark.skipif(len(BACKENDS) < 2, reason="compiled extension not built")


def test_selected_backend_importable():
    assert kernels.BACKEND in BACKENDS


@needs_both
def test_compiled_backend_is_default():
    assert kernels.BACKEND == "cython"


@needs_both
def test_prufer_parity():
    py, cy = BACKENDS["python"], BACKENDS["cython"]
    rng = np.random.default_rng(0)
    for _ in range(300):
        n = int(rng.integers(3, 40))
        seq = rng.integers(0, n, n - 2)
        assert np.array_equal(py.prufer_decode(seq, n), cy.prufer_decode(seq, n))


@needs_both
@pytest.mark.parametrize("mode", [0, 1, 2, 3])
def test_run_rounds_parity(mode):
    py, cy = BACKENDS["python"], BACKENDS["cython"]
    rng = np.random.default_rng(mode)
    for _ in range(60):
        n = int(rng.integers(2, 30))
        g = random_tree(n, rng)
        if mode >= 2:
            g = g.with_weights(rng.uniform(0.2, 5.0, g.m))
        ip, ix, c = g.csr
        vals = rng.integers(0, n + 1, n).astype(float)
        leader = int(rng.integers(n))
        a = py.run_rounds(ip, ix, c, vals, leader, mode, 3 * n, 1e-12)
        b = cy.run_rounds(ip, ix, c, vals, leader, mode, 3 * n, 1e-12)
        for x, y in zip(a, b):
            assert np.array_equal(x, y)


@needs_both
def test_tree_distance_parity():
    py, cy = BACKENDS["python"], BACKENDS["cython"]
    rng = np.random.default_rng(11)
    for _ in range(50):
        n = int(rng.integers(1, 40))
        g = random_tree(n, rng).with_weights(rng.uniform(0.1, 3.0, max(n - 1, 0)))
        ip, ix, c = g.csr
        assert np.array_equal(py.tree_distances(ip, ix, c), cy.tree_distances(ip, ix, c))


def test_env_var_forces_pure_python():
    code = "from leadsel import kernels; print(kernels.BACKEND)"
    env = {**os.environ, "LEADSEL_PURE_PYTHON": "1"}
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True)
    assert out.stdout.strip() == "python"


def test_benchmark_smoke(capsys):
    path = Path(__file__).resolve().parents[1] / "benchmarks" / "bench_kernels.py"
    spec = importlib.util.spec_from_file_location("bench_kernels", path)
    mod = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(mod)
    mod.main(["--n", "4", "--repeat", "1"])
    out = capsys.readouterr().out
    assert "run_rounds" in out and "tree_distances" in out
