from pathlib import Path

import pytest

from causal_multiteams.core import CausalFunction, CausalMultiteam, FunctionComponent, Multiteam, Signature

DATA = Path(__file__).parent / "data"

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def data_dir() -> Path:
    return DATA


@pytest.fixture
def inc_sig() -> Signature:
    return Signature(("X", "Y"), (("0", "1", "2"), ("1", "2", "3")))


@pytest.fixture
def inc_laws(inc_sig) -> FunctionComponent:
    return FunctionComponent([CausalFunction.from_callable("Y", ["X"], inc_sig, lambda x: int(x) + 1)])


@pytest.fixture
def inc(inc_sig, inc_laws) -> CausalMultiteam:
    team = Multiteam({("0", "1"): 1, ("1", "2"): 2, ("2", "3"): 3})
    return CausalMultiteam(inc_sig, team, inc_laws)


@pytest.fixture
def coin_sig() -> Signature:
    return Signature(("X", "Y"), (("heads", "tails"), ("heads", "tails")))


@pytest.fixture
def coin(coin_sig) -> CausalMultiteam:
    rows = [("tails", "tails"), ("tails", "heads"), ("heads", "tails"), ("heads", "heads")]
    return CausalMultiteam(coin_sig, Multiteam.from_rows(rows), FunctionComponent())


@pytest.fixture
def binary_sig() -> Signature:
    return Signature(("X", "Y"), (("0", "1"), ("0", "1")))


@pytest.fixture
def s3(binary_sig) -> CausalMultiteam:
    return CausalMultiteam(binary_sig, Multiteam({("0", "0"): 2, ("0", "1"): 1}), FunctionComponent())


@pytest.fixture
def copy_laws(binary_sig) -> FunctionComponent:
    return FunctionComponent([CausalFunction("Y", ["X"], {("0",): "0", ("1",): "1"})])


@pytest.fixture
def acceptance_log() -> list[str]:
    return ACCEPTANCE_LINES
