import time
import warnings
from collections import OrderedDict

import pytest

from vscpt import domain, pulse

# criterion id -> (title, [outcomes], seconds)
_CRITERIA = OrderedDict()


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(cid, title): acceptance criterion covered by the test")


def pytest_runtest_makereport(item, call):
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    cid, title = mark.args
    entry = _CRITERIA.setdefault(cid, [title, [], 0.0])
    if call.when == "call":
        entry[1].append(call.excinfo is None)
        entry[2] += call.duration
    elif call.excinfo is not None and call.when == "setup":
        entry[1].append(False)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for cid in sorted(_CRITERIA, key=lambda c: (int("".join(ch for ch in c if ch.isdigit())), c)):
        title, outcomes, secs = _CRITERIA[cid]
        status = "PASS" if outcomes and all(outcomes) else "FAIL"
        tr.write_line(f"{status}  {cid:<4} {title}  ({secs:.2f} s)")


@pytest.fixture(scope="session")
def rb():
    return domain.preset_species("rb87")


@pytest.fixture(scope="session")
def he():
    return domain.preset_species("he4")


def _timed_pulse(species, sigma_p, fwhm, density=2e16, length=0.01, delta_s=3e6):
    sample = domain.GasSample(density, length, sigma_p)
    probe = domain.ProbeConfig.from_detuning(species, delta_s)
    start = time.perf_counter()
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        run = pulse.propagate_pulse(species, sample, probe, fwhm=fwhm)
    return run, time.perf_counter() - start


@pytest.fixture(scope="session")
def pulse_runs(rb, he):
    """Dephased and ideal (sigma_p = 0) runs for both species, computed once."""
    # compile outside the timed runs
    _timed_pulse(rb, 0.0, 4e-6, length=0.001)
    return {
        "rb": _timed_pulse(rb, None, 4e-6),
        "rb_ideal": _timed_pulse(rb, 0.0, 4e-6),
        "he": _timed_pulse(he, None, 2e-6),
        "he_ideal": _timed_pulse(he, 0.0, 2e-6),
    }
