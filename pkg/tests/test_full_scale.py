"""Full-size ensemble run (10^5 samples per side); opt in with ``pytest -m slow``."""

import math

import numpy as np
import pytest

from tpht import DistSpec, EnsembleRun, run_ensemble
from tpht.ensemble import DEFAULT_SEED


@pytest.mark.slow
def test_lognormal_ensemble_at_full_size():
    run = run_ensemble(EnsembleRun(DistSpec("lognormal", 3, 1.0), n=100, p=5, samples=100_000, seed=DEFAULT_SEED))
    s = run.summary
    assert s["ks"] < 0.012
    b = s["bounds"]
    for side in (run.lhs_samples, run.rhs_samples):
        se = np.std(side, ddof=1) / math.sqrt(side.size)
        assert b["lower"] - 3 * se <= np.mean(side) <= b["upper"] + 3 * se
