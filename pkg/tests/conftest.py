"""Per-criterion PASS/FAIL summary for tests marked ``criterion``."""

from collections import OrderedDict

CRITERIA = OrderedDict(
    [
        ("C1", "solution validity: FD residual <= 1e-6 for all 8 families, runtime <= 10 s"),
        ("C2", "degeneracy: 20 gauges per family <= 1e-6; annihilator residual <= 1e-13 |psi|"),
        ("C3", "negative controls: mass 0.5 gives 0.5*sqrt(2); zero potential and flipped annihilator >= 1e3 x threshold"),
        ("C4", "convergence order: 4.0 +- 0.3 and 2.0 +- 0.3 on the chirped Dirac case"),
        ("C5", "spin observables: closed forms to 1e-12, limits, opposition, helicity +-1 to 1e-14"),
        ("C6", "field dual oracle: closed form vs FD <= 1e-7 for all families x 5 gauges"),
        ("C7", "separation fields: closed vs generic 1e-9, inversion 1e-11, gaussian B_z = -4/q"),
        ("C8", "waveform: modulus equals envelope; phase derivative within 1% of the chirp"),
        ("C9", "determinism: byte-identical outputs across runs and thread counts"),
    ]
)

_owner: dict = {}
_outcome: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(id): acceptance criterion the test belongs to")


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark is not None:
            _owner[item.nodeid] = mark.args[0]


def pytest_runtest_logreport(report):
    cid = _owner.get(report.nodeid)
    if cid is None:
        return
    state = _outcome.setdefault(cid, {"passed": 0, "failed": 0})
    if report.failed:
        state["failed"] += 1
    elif report.when == "call" and report.passed:
        state["passed"] += 1


def pytest_terminal_summary(terminalreporter):
    if not _outcome:
        return
    terminalreporter.section("acceptance criteria")
    for cid, title in CRITERIA.items():
        state = _outcome.get(cid)
        if state is None:
            continue
        verdict = "PASS" if state["failed"] == 0 and state["passed"] > 0 else "FAIL"
        terminalreporter.write_line(
            f"{cid} {verdict}  {title}  ({state['passed']} passed, {state['failed']} failed)"
        )
