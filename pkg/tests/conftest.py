import itertools

import numpy as np
import pytest

from qppldpc import example_code


def pytest_addoption(parser):
    parser.addoption("--run-stretch", action="store_true", default=False,
                     help="run long non-gating stretch checks")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--run-stretch"):
        return
    skip = pytest.mark.skip(reason="stretch check, enable with --run-stretch")
    for item in items:
        if "stretch" in item.keywords:
            item.add_marker(skip)


@pytest.fixture(scope="session")
def code_I():
    return example_code("I")


@pytest.fixture(scope="session")
def code_II():
    return example_code("II")


@pytest.fixture(scope="session")
def H_I(code_I):
    return code_I.parity_check()


@pytest.fixture(scope="session")
def H_II(code_II):
    return code_II.parity_check()


HAMMING_74 = np.array([[1, 0, 1, 0, 1, 0, 1],
                       [0, 1, 1, 0, 0, 1, 1],
                       [0, 0, 0, 1, 1, 1, 1]], dtype=np.uint8)


def hamming_codewords():
    out = []
    for bits in itertools.product((0, 1), repeat=7):
        w = np.array(bits, dtype=np.uint8)
        if not (HAMMING_74 @ w % 2).any():
            out.append(w)
    return np.array(out)


def naive_permanent(M):
    M = np.asarray(M)
    m = M.shape[0]
    return sum(int(np.prod([M[i, p[i]] for i in range(m)])) for p in itertools.permutations(range(m)))


def dense_rank_gf2(M):
    M = np.array(M, dtype=np.uint8) % 2
    r = 0
    rows, cols = M.shape
    for c in range(cols):
        piv = next((i for i in range(r, rows) if M[i, c]), None)
        if piv is None:
            continue
        M[[r, piv]] = M[[piv, r]]
        for i in range(rows):
            if i != r and M[i, c]:
                M[i] ^= M[r]
        r += 1
    return r


def brute_is_permutation(N, f1, f2):
    x = np.arange(N, dtype=np.int64)
    return len(np.unique((f1 * x + f2 * x * x) % N)) == N


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    verdicts = getattr(mod, "VERDICTS", None)
    if not verdicts:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(verdicts):
        terminalreporter.write_line(verdicts[num])
