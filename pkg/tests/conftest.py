from __future__ import annotations

import pytest

from parx_verify.fixtures import consistent_path, rtm_paths
from parx_verify.graph import Graph, merge_graphs
from parx_verify.model import ProcessModel, model_from_graph
from parx_verify.turtle import parse_turtle, parse_turtle_document


@pytest.fixture(scope="session")
def rtm_raw_graph() -> Graph:
    """The inconsistent RTM model, merged but not normalized."""
    return merge_graphs(parse_turtle(p.read_text(encoding="utf-8")) for p in rtm_paths())


@pytest.fixture(scope="session")
def injection_only_graph() -> Graph:
    """Just the injection-step excerpt (no probe process, no unit vocabulary)."""
    for path in rtm_paths():
        if path.name == "rtm-injection.ttl":
            return parse_turtle(path.read_text(encoding="utf-8"))
    raise AssertionError("fixture file missing")


@pytest.fixture(scope="session")
def rtm_model(rtm_raw_graph) -> ProcessModel:
    return model_from_graph(rtm_raw_graph)


@pytest.fixture(scope="session")
def consistent_model() -> ProcessModel:
    graph = parse_turtle(consistent_path().read_text(encoding="utf-8"))
    return model_from_graph(graph)


@pytest.fixture()
def rtm_file_args() -> list[str]:
    return [str(p) for p in rtm_paths()]


@pytest.fixture()
def consistent_file_arg() -> str:
    return str(consistent_path())
