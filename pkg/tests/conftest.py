import numpy as np
import pytest

_ACCEPTANCE = {}


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    """Compile (or load cached) numba kernels once so per-test runtimes measure work, not JIT."""
    from tpht import eigen_hessenberg, is_totally_positive, tpht_band, tpht_truncation
    from tpht.ensemble import ks_distance, lhs_moment_batch, rhs_moment_batch
    from tpht.spectra import esd_moment

    A = tpht_truncation([1, 1, 1], 6)
    eigen_hessenberg(A, want_vectors=True)
    eigen_hessenberg(tpht_truncation([1, 1], 6))
    is_totally_positive(A)
    esd_moment(tpht_band([1, 1], 8), 3)
    roots = np.ones((2, 3))
    lhs_moment_batch(roots, 8, 3)
    rhs_moment_batch(roots, 3)
    ks_distance([1.0, 2.0], [1.5])


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        name = report.nodeid.split("::")[-1]
        detail = dict(report.user_properties).get("detail", "")
        _ACCEPTANCE[name] = (report.outcome, detail)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, (outcome, detail) in sorted(_ACCEPTANCE.items()):
        tag = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"ACCEPTANCE {name}: {tag}  {detail}")
