import sys

import pytest

from stabtherm.pauli import build_canonical_hamiltonian, build_graph_hamiltonian
from stabtherm.structures import Kind, StructureSpec, build_structure

TREE_KINDS = (Kind.S1, Kind.S2, Kind.S3, Kind.S4)


def hamiltonian_of(spec):
    if spec.kind is Kind.CANONICAL:
        return build_canonical_hamiltonian(spec.level)
    return build_graph_hamiltonian(build_structure(spec))


@pytest.fixture
def ham_of():
    return hamiltonian_of


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = sorted(getattr(mod, "REPORT_LINES", []), key=lambda l: int(l.split()[2].rstrip(":")))
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
