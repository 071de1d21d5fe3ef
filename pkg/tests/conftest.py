import importlib.util
import os

import pytest

ECOLI_ENV = "LEADTREE_ECOLI"


def _keel_raw_ecoli():
    spec = importlib.util.find_spec("keel_ds")
    if spec is None or not spec.submodule_search_locations:
        return None
    path = os.path.join(spec.submodule_search_locations[0], "data", "imbalanced", "raw", "ecoli1.dat")
    return path if os.path.exists(path) else None


@pytest.fixture(scope="session")
def ecoli_path(tmp_path_factory):
    """Path to an Ecoli file in UCI layout.

    Uses $LEADTREE_ECOLI when set. Otherwise rebuilds the file from the KEEL
    copy of the same 336 rows, with placeholder sequence names and KEEL's
    binary class in place of the eight UCI classes.
    """
    env = os.environ.get(ECOLI_ENV)
    if env:
        if not os.path.exists(env):
            pytest.fail(f"{ECOLI_ENV}={env} does not exist")
        return env
    raw = _keel_raw_ecoli()
    if raw is None:
        pytest.skip(f"no Ecoli data: set {ECOLI_ENV} or install keel-ds")
    out = tmp_path_factory.mktemp("ecoli") / "ecoli.data"
    rows = []
    with open(raw) as fh:
        for line in fh:
            if not line.strip() or line.startswith("@"):
                continue
            *vals, cls = [f.strip() for f in line.split(",")]
            rows.append(f"SEQ{len(rows) + 1:04d}_ECOLI  " + "  ".join(vals) + f"  {cls}\n")
    out.write_text("".join(rows))
    return str(out)


ACCEPTANCE_LINES = {}


def record_acceptance(number, ok, detail):
    """Remember one criterion's verdict; all verdicts are printed at the end of the run."""
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES[number] = line
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for number in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[number])
