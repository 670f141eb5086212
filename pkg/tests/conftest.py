import numpy as np
import pytest

from segrd.kitti import LabeledCloud

_criteria = []


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    crit = report.user_properties and dict(report.user_properties).get("criterion")
    if crit:
        _criteria.append((crit, report.outcome))


@pytest.fixture(autouse=True)
def _tag_criterion(request, record_property):
    marker = request.node.get_closest_marker("criterion")
    if marker:
        record_property("criterion", f"{marker.args[0]}. {marker.args[1]}")


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for crit, outcome in sorted(_criteria, key=lambda c: int(c[0].split(".")[0])):
        terminalreporter.write_line(f"[{'PASS' if outcome == 'passed' else 'FAIL'}] {crit}")


def random_cloud(rng, n, n_labels=5, scale=10.0):
    pts = rng.uniform(-scale, scale, (n, 3))
    labels = rng.integers(0, n_labels, n) * 10 + 10
    return LabeledCloud.from_arrays(
        pts,
        labels=labels,
        reflectance=rng.uniform(0, 1, n),
        instance_ids=rng.integers(0, 2**16, n),
    )


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def small_sequence(tmp_path_factory):
    from segrd.synthetic import write_sequence

    return write_sequence(tmp_path_factory.mktemp("seq"), n_scans=4, n_points=4000, seed=100)
