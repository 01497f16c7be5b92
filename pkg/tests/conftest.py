"""Shared fixtures: the named corpus, parsed and compiled once per session."""
import pytest

from cpa2relu import corpus, maxform, model, network
from cpa2relu.decompose import decompose


@pytest.fixture(scope="session")
def corpus_docs():
    return corpus.all_documents()


@pytest.fixture(scope="session")
def corpus_insts(corpus_docs):
    return {name: model.parse_instance(doc)
            for name, doc in corpus_docs.items()}


@pytest.fixture(scope="session")
def compiled(corpus_insts):
    """name -> (inst, slim, dec, terms, net) for the whole pipeline."""
    out = {}
    for name, inst in corpus_insts.items():
        slim = model.sparsify(inst)
        dec = decompose(slim)
        terms = maxform.reduce(dec, slim.p)
        net = network.build_network(terms)
        out[name] = (inst, slim, dec, terms, net)
    return out


def pytest_terminal_summary(terminalreporter):
    """One PASS/FAIL line per acceptance criterion at the end of the run."""
    lines = []
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            nodeid = getattr(rep, "nodeid", "")
            if "test_acceptance.py::test_criterion_" in nodeid:
                name = nodeid.split("::", 1)[1].split("[")[0]
                lines.append((name, "PASS" if outcome == "passed" else "FAIL"))
    if lines:
        terminalreporter.section("acceptance criteria")
        for name, verdict in sorted(set(lines)):
            terminalreporter.write_line(f"{name}: {verdict}")
