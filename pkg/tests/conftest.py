"""Shared fixtures: host classes, registries, and the shipped spec files."""

from __future__ import annotations

from pathlib import Path

import pytest

import aspobj.solver
from aspobj import ClassRegistry, parse_spec

SPEC_DIR = Path(__file__).resolve().parent.parent / "specs"
DATA_DIR = Path(__file__).resolve().parent / "data"

# Every model a kernel emits gets re-verified against the reference
# stable-model check while the suite runs.
aspobj.solver.SELF_CHECK = True


class Component:
    def __init__(self, nr_sock: int, ctype: int = 1):
        self._nr_sock = nr_sock
        self._type = ctype

    def getNrSock(self) -> int:
        return self._nr_sock

    def getType(self) -> int:
        return self._type


class Node:
    def __init__(self, component):
        self.component = component
        self.nodes: list["Node"] = []

    def addNode(self, node: "Node") -> None:
        self.nodes.append(node)


#: Frozen acceptance instance: socket counts and types per component.
SOCKS = (1, 2, 2, 2, 3, 3)
TYPES = (1, 2, 3, 1, 2, 3)
NR_CABLES = 9


@pytest.fixture(scope="session")
def network_source() -> str:
    return (SPEC_DIR / "network.ospec").read_text()


@pytest.fixture(scope="session")
def network_bytype_source() -> str:
    return (SPEC_DIR / "network_bytype.ospec").read_text()


@pytest.fixture(scope="session")
def toy_source() -> str:
    return (SPEC_DIR / "toy.ospec").read_text()


@pytest.fixture(scope="session")
def network_spec(network_source):
    return parse_spec(network_source)


@pytest.fixture(scope="session")
def toy_spec(toy_source):
    return parse_spec(toy_source)


@pytest.fixture()
def registry() -> ClassRegistry:
    return ClassRegistry.from_classes(
        {"Node": Node, "Component": Component},
        accessor_methods={"Component": ("getNrSock", "getType")},
        invocable_methods={"Node": ("addNode",)},
    )


@pytest.fixture()
def components() -> list[Component]:
    return [Component(s, t) for s, t in zip(SOCKS, TYPES)]


def kernel_names() -> list[str]:
    return sorted(aspobj.solver.available_kernels())


@pytest.fixture(params=kernel_names())
def kernel(request) -> str:
    return request.param
