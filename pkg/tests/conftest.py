import hypothesis
import pytest

from plexspread import build_network

hypothesis.settings.register_profile(
    "suite", deadline=None, max_examples=60, derandomize=True
)
hypothesis.settings.load_profile("suite")


def path_labels(n):
    return [f"n{i:02d}" for i in range(n)]


def path_edges(n):
    labels = path_labels(n)
    return [(labels[i], labels[i + 1], 1.0) for i in range(n - 1)]


@pytest.fixture
def path6():
    """Single-layer path on 6 nodes, labels n00..n05 in registry order."""
    return build_network([("only", path_edges(6))])


@pytest.fixture
def two_layer_toy():
    """Replica-aligned 2-layer toy: shared vocabulary, different edges."""
    sem = [("good", "fine", 1.0), ("fine", "hope", 1.0), ("good", "pay", 1.0)]
    phon = [("good", "hood", 1.0), ("pay", "say", 1.0), ("fine", "pine", 1.0),
            ("hood", "hope", 1.0), ("say", "pine", 1.0)]
    return build_network([("semantic", sem), ("phonological", phon)])


def write_tsv(path, rows):
    with open(path, "w", encoding="utf-8") as fh:
        for row in rows:
            fh.write("\t".join(str(x) for x in row) + "\n")
    return path
