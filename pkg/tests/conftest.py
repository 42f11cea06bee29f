import pytest

from perm2.cli import fixture_text
from perm2.kernel import Sort
from perm2.syntax import parse_context, parse_proof, parse_signature, parse_term

T = Sort("t")


@pytest.fixture(scope="session")
def lam():
    return parse_signature(fixture_text("lambda.hrs"))


@pytest.fixture(scope="session")
def ccs():
    return parse_signature(fixture_text("ccs.hrs"))


@pytest.fixture
def parse(lam):
    """parse(kind, src, ctx="x:t") for terms and proofs over the lambda signature."""
    def go(kind, src, ctx="x:t", sig=None):
        sig = sig or lam
        c = parse_context(ctx)
        if kind == "term":
            return parse_term(src, c, sig)
        return parse_proof(src, c, sig)
    return go


ACCEPTANCE = {}


@pytest.fixture
def verdict():
    """Record the PASS/FAIL line of an acceptance criterion."""
    def put(n, ok, detail):
        line = f"{'PASS' if ok else 'FAIL'} criterion {n}: {detail}"
        ACCEPTANCE[n] = line
        print(line)
        return ok
    return put


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[n])
