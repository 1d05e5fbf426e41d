from __future__ import annotations

import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from stabbond import catalog, dynamics  # noqa: E402
from stabbond.catalog import GraphSpec  # noqa: E402


def random_graph(rng: random.Random, n: int, connected: bool = False) -> GraphSpec:
    while True:
        edges = frozenset(
            (a, b) for a in range(n) for b in range(a + 1, n) if rng.random() < 0.5
        )
        spec = GraphSpec(n, edges)
        if not connected or spec.is_connected():
            return spec


def random_local(rng: random.Random, state, length: int = 4):
    """Random local Clifford word on every qubit, with Pauli gates to randomize signs."""
    words = {}
    for k in range(state.n):
        word = "".join(rng.choice("HSXYZ") for _ in range(rng.randint(0, length)))
        if word:
            state = dynamics.apply_local_clifford(state, k, word)
            words[k] = word
    return state, words


def random_state(rng: random.Random, n: int, connected: bool = False):
    state, _ = random_local(rng, catalog.graph_state(random_graph(rng, n, connected)))
    return state


@pytest.fixture
def rng():
    return random.Random(20261014)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
