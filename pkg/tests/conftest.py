import itertools
import random

import pytest

from softtopo import Context, SoftSet

ELEMENTS = "abcdefgh"
PARAMS = ("e", "f", "g", "h", "i", "j")


def ctx_of(n_elements, n_params):
    return Context(tuple(ELEMENTS[:n_elements]), PARAMS[:n_params])


def small_contexts(max_bits, max_params=4):
    """Every (|U|, |E|) shape with |U|*|E| <= max_bits; empty universes up to max_params."""
    out = []
    for n_params in range(1, max(max_bits, max_params) + 1):
        for n_elements in range(0, max_bits + 1):
            if n_elements * n_params > max_bits:
                break
            if n_elements == 0 and n_params > max_params:
                continue
            out.append(ctx_of(n_elements, n_params))
    return out


def as_dict(f: SoftSet) -> dict:
    return {p: set(f.approximation(p)) for p in f.context.parameters}


def random_soft_set(rng, ctx):
    return SoftSet(ctx, rng.getrandbits(ctx.size) if ctx.size else 0)


@pytest.fixture
def rng():
    return random.Random(20261016)


@pytest.fixture
def ab_e():
    return ctx_of(2, 1)


@pytest.fixture
def ab_ef():
    return ctx_of(2, 2)


def all_families(sets):
    for r in range(len(sets) + 1):
        yield from itertools.combinations(sets, r)


# one line per acceptance criterion, echoed after the run
ACCEPTANCE_LINES = []


def record_criterion(number, ok, detail):
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
