import logging
import os

import pytest

from opacsyn.conventions import test_skip_env
from opacsyn.input import load_example_instance
from opacsyn.log import LoggedError


def pytest_addoption(parser):
    parser.addoption("--skip-slow", action="store_true",
                     help="Skip the property tests over many random instances.")


def pytest_configure(config):
    config.addinivalue_line(
        "markers", "slow: property test over many random instances")


# Shared instances #######################################################################

@pytest.fixture(scope="session")
def example():
    """The bundled vehicle instance, parsed once."""
    return load_example_instance()


# Skipping ###############################################################################

def _skip_marker(reason):
    return pytest.mark.skip(reason=reason)


def pytest_collection_modifyitems(config, items):
    # comma or space separated keywords, matched against test names and markers
    keywords = os.environ.get(test_skip_env, "").replace(",", " ").split()
    for keyword in keywords:
        marker = _skip_marker("'%s' skipped by env variable '%s'" % (keyword, test_skip_env))
        for item in items:
            if keyword.lower() in item.name.lower() or keyword in item.keywords:
                item.add_marker(marker)
    if config.getoption("--skip-slow"):
        marker = _skip_marker("slow test skipped by --skip-slow")
        for item in items:
            if "slow" in item.keywords:
                item.add_marker(marker)


# Reporting ##############################################################################

@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if report.when != "call" or not report.failed:
        return
    report.sections = [s for s in report.sections if s[0] != "Captured log call"]
    # a LoggedError has printed its message already: keep only the last line
    if call.excinfo is not None and isinstance(call.excinfo.value, LoggedError) and \
            logging.root.getEffectiveLevel() > logging.DEBUG and report.longrepr:
        report.longrepr = str(report.longrepr).split("\n")[-1]
