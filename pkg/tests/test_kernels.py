import numpy as np
import pytest

from tgmatch import _kernels

PAIRS = [(a, b) for a in _kernels.IMPLEMENTATIONS for b in _kernels.IMPLEMENTATIONS if a < b]


@pytest.mark.parametrize("impl_a,impl_b", PAIRS)
def test_build_incidence_parity(impl_a, impl_b):
    rng = np.random.default_rng(1)
    for _ in range(20):
        n_nodes = int(rng.integers(1, 30))
        n_edges = int(rng.integers(0, 80))
        src = rng.integers(0, n_nodes, size=n_edges).astype(np.int64)
        dst = rng.integers(0, n_nodes, size=n_edges).astype(np.int64)
        a = _kernels.IMPLEMENTATIONS[impl_a]["build_incidence"](src, dst, n_nodes)
        b = _kernels.IMPLEMENTATIONS[impl_b]["build_incidence"](src, dst, n_nodes)
        assert np.array_equal(a[0], b[0])
        assert np.array_equal(a[1], b[1])


@pytest.mark.parametrize("impl_a,impl_b", PAIRS)
def test_bin_counts_parity(impl_a, impl_b):
    rng = np.random.default_rng(2)
    for _ in range(30):
        n = int(rng.integers(0, 50))
        times = rng.uniform(-500, 500, size=n)
        origin = float(rng.uniform(-100, 100))
        width = float(rng.uniform(0.5, 50))
        a = _kernels.IMPLEMENTATIONS[impl_a]["bin_counts"](times, origin, width)
        b = _kernels.IMPLEMENTATIONS[impl_b]["bin_counts"](times, origin, width)
        assert a[0] == b[0]
        assert np.array_equal(a[1], b[1])


@pytest.mark.parametrize("impl_a,impl_b", PAIRS)
def test_offset_sweep_parity(impl_a, impl_b):
    rng = np.random.default_rng(3)
    for _ in range(40):
        t1 = np.sort(rng.uniform(0, 300, size=rng.integers(1, 8)))
        t2 = np.sort(rng.uniform(0, 300, size=rng.integers(1, 8)))
        width = float(rng.uniform(1, 60))
        offsets = np.array([0.0, -width, width, -2 * width, 2 * width])
        pa, ca = _kernels.IMPLEMENTATIONS[impl_a]["offset_sweep"](t1, t2, width, offsets)
        pb, cb = _kernels.IMPLEMENTATIONS[impl_b]["offset_sweep"](t1, t2, width, offsets)
        assert ca == pytest.approx(cb, abs=1e-12)
        assert pa == pb


def test_bin_counts_conservation():
    fn = _kernels.bin_counts
    times = np.array([0.0, 0.5, 99.9, 100.0, 250.0])
    k0, counts = fn(times, 0.0, 100.0)
    assert k0 == 0
    assert counts.tolist() == [3, 1, 1]
    assert counts.sum() == len(times)


def test_offset_sweep_identical_sets_cosine_one():
    t = np.array([10.0, 20.0, 35.5])
    pos, cos = _kernels.offset_sweep(t, t, 7.0, np.array([0.0, -7.0, 7.0]))
    assert pos == 0
    assert cos == 1.0


def test_soft_binning_degrades_smoothly():
    # a half-bin displacement must score strictly between 0 and 1
    t1 = np.array([100.0])
    t2 = np.array([150.0])
    _, cos = _kernels.offset_sweep(t1, t2, 100.0, np.array([0.0]))
    assert 0.0 < cos < 1.0


def test_env_flag_selects_numpy(tmp_path):
    import subprocess
    import sys

    code = (
        "import tgmatch._kernels as k\n"
        "assert not k.NUMBA_ENABLED\n"
        "assert 'numba' not in k.IMPLEMENTATIONS\n"
        "import numpy as np\n"
        "t = np.array([1.0, 2.0])\n"
        "print(k.offset_sweep(t, t, 1.0, np.array([0.0])))\n"
    )
    out = subprocess.run(
        [sys.executable, "-c", code],
        env={"TGMATCH_DISABLE_NUMBA": "1", "PATH": "/usr/bin:/bin"},
        capture_output=True, text=True, timeout=120)
    assert out.returncode == 0, out.stderr
    assert "1.0" in out.stdout
