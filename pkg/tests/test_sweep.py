import itertools
import os
import subprocess
import sys
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from quadric_bundles import _kernels, model, sweep
from quadric_bundles.errors import GridTooLarge, InvalidBundle, InvalidGenus

CODE = {model.STABLE: 0, model.POLYSTABLE: 1, model.STRICTLY_SEMISTABLE: 2, model.UNSTABLE: 3}


def grid_bundles(n_max, deg_bound, dl_max):
    for n in range(1, n_max + 1):
        for pattern in sweep.all_patterns(n):
            for degrees in itertools.product(range(-deg_bound, deg_bound + 1), repeat=n):
                for dl in range(dl_max + 1):
                    try:
                        yield model.PatternQuadricBundle(degrees, pattern, dl)
                    except InvalidBundle:
                        pass


def test_all_patterns_counts():
    # symmetric 0/1 matrices minus the zero one
    assert [sum(1 for _ in sweep.all_patterns(n)) for n in (1, 2, 3)] == [1, 7, 63]


def test_batch_matches_scalar_classify():
    alphas = [F(k, 3) for k in range(-30, 10)]
    for bundle in sweep.random_grid_bundles(150, seed=11, n_max=4, deg_bound=3, dl_max=6):
        codes = sweep.classify_batch(bundle.pattern, np.array([bundle.degrees]), bundle.twist_degree, alphas)
        expected = [CODE[model.classify(bundle, a).cls] for a in alphas]
        assert codes[0].tolist() == expected, bundle


def test_sweep_matches_scalar_path_on_small_grid():
    res = sweep.run_sweep(2, 2, 3)
    bundles = list(grid_bundles(2, 2, 3))
    assert res.bundles == len(bundles)
    scalar = {p: 0 for p in sweep.PROPERTIES}
    for b in bundles:
        for p in sweep.bundle_violations(b):
            scalar[p] += 1
    assert res.ok
    assert not any(scalar.values())


def test_sweep_result_shape_and_determinism():
    a = sweep.run_sweep(2, 1, 2).to_dict()
    b = sweep.run_sweep(2, 1, 2).to_dict()
    assert a == b
    assert set(a["properties"]) == set(sweep.PROPERTIES)
    assert a["all_passed"] is True
    assert sum(a["verdict_counts"].values()) == a["evaluations"]


def test_grid_guard():
    assert sweep.grid_size(3, 3, 6) <= sweep.MAX_GRID
    with pytest.raises(GridTooLarge):
        sweep.run_sweep(6, 10, 20)


def test_sweep_genus_validated():
    with pytest.raises(InvalidGenus):
        sweep.run_sweep(1, 1, 1, genus=1)


def test_counterexamples_capped():
    res = sweep.SweepResult(1, 1, 1, 2, 0)
    ex = [{"n": 1, "degrees": [i], "pattern": ["*"], "twist_degree": 0} for i in range(50)]
    res.record("wall_locality", 50, ex)
    out = res.to_dict()
    assert out["properties"]["wall_locality"]["violations"] == 50
    assert len(out["counterexamples"]) == sweep.MAX_COUNTEREXAMPLES
    assert out["all_passed"] is False


def test_random_grid_bundles_reproducible():
    assert sweep.random_grid_bundles(30, 4) == sweep.random_grid_bundles(30, 4)
    assert sweep.random_grid_bundles(30, 4) != sweep.random_grid_bundles(30, 5)


def test_has_zero_slack_example():
    bundle = model.PatternQuadricBundle((1, 0), ((True, True), (True, True)), 3)
    assert sweep.has_zero_slack(bundle, 0)
    assert not sweep.has_zero_slack(bundle, F(-1, 2))


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 6), st.integers(1, 8), st.integers(1, 5), st.integers(0, 2**32 - 1))
def test_verdict_backends_agree(b, k, s, seed):
    rng = np.random.default_rng(seed)
    c0 = rng.integers(-6, 7, size=(b, k))
    c1 = rng.integers(-3, 4, size=(b, k))
    dec = rng.random(k) < 0.5
    degree = rng.integers(-5, 6, size=b)
    num = rng.integers(-8, 9, size=(b, s))
    den = rng.integers(1, 4, size=(b, s))
    n = int(rng.integers(1, 5))
    x = _kernels.verdict_codes_numpy(c0, c1, dec, degree, n, num, den)
    y = _kernels.verdict_codes_numba(c0, c1, dec, degree, n, num, den)
    assert (x == y).all()
    assert (_kernels.zero_slack_numpy(c0, c1, num, den) == _kernels.zero_slack_numba(c0, c1, num, den)).all()


def _sweep_json(backend):
    env = dict(os.environ, QUADRIC_BUNDLES_BACKEND=backend)
    argv = [sys.executable, "-m", "quadric_bundles", "sweep", "--n-max", "2", "--deg-bound", "2", "--dL-max", "3", "--json"]
    return subprocess.run(argv, env=env, capture_output=True, check=True).stdout


def test_env_flag_backends_give_identical_sweeps():
    assert _sweep_json("numpy") == _sweep_json("numba")


def test_env_flag_rejects_unknown_backend():
    env = dict(os.environ, QUADRIC_BUNDLES_BACKEND="cuda")
    p = subprocess.run([sys.executable, "-c", "import quadric_bundles._kernels"], env=env, capture_output=True)
    assert p.returncode != 0 and b"QUADRIC_BUNDLES_BACKEND" in p.stderr
