import pytest

_KEY = pytest.StashKey[dict]()


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion checked by the test")
    config.stash[_KEY] = {}


@pytest.fixture
def detail(request):
    """Attach a one-line measurement to the criterion being checked."""
    store = request.config.stash[_KEY]

    def put(text: str) -> None:
        store.setdefault(request.node.nodeid, {})["detail"] = text

    return put


def pytest_runtest_makereport(item, call):
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    store = item.config.stash[_KEY].setdefault(item.nodeid, {})
    store["number"], store["title"] = mark.args
    if call.when == "setup" and call.excinfo is not None:
        store["passed"] = False
    elif call.when == "call":
        store["passed"] = call.excinfo is None


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = [r for r in config.stash[_KEY].values() if "number" in r]
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    by_number = {}
    for r in results:
        by_number.setdefault(r["number"], []).append(r)
    for number in sorted(by_number):
        group = by_number[number]
        ok = all(r.get("passed", False) for r in group)
        details = "; ".join(r["detail"] for r in group if r.get("detail"))
        line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {group[0]['title']}"
        if details:
            line += f"  [{details}]"
        terminalreporter.write_line(line)
