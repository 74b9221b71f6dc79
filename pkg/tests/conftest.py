from __future__ import annotations

import io
from pathlib import Path

import pytest

from folkrel.core import parse_posts
from folkrel.wndb import SynsetSpec
from folkrel.wordnet import ic_from_counts, load_taxonomy

FIXTURE_DIR = Path(__file__).parent / "fixtures"

# Four posts over three users, three resources and three tags; the smallest
# corpus where co-occurrence weights, ranks and the folded graph are all
# checkable by hand.
F1_TEXT = (
    b"u1\tr1\tweb,ajax\n"
    b"u2\tr1\tweb,ajax\n"
    b"u1\tr2\tweb,design\n"
    b"u3\tr3\tajax,design\n"
)

# Toy noun hierarchy: entity splits into animal (dog, cat) and artifact
# (car).  Checked in as real database files under fixtures/wndb.
T1_SPECS = (
    SynsetSpec("entity", ("entity",)),
    SynsetSpec("animal", ("animal",), parents=("entity",)),
    SynsetSpec("artifact", ("artifact",), parents=("entity",)),
    SynsetSpec("dog", ("dog",), parents=("animal",)),
    SynsetSpec("cat", ("cat",), parents=("animal",)),
    SynsetSpec("car", ("car",), parents=("artifact",)),
)

T1_COUNTS = {"dog": 1, "cat": 1, "car": 2}


@pytest.fixture
def f1():
    return parse_posts(io.BytesIO(F1_TEXT))


@pytest.fixture(scope="session")
def t1():
    return load_taxonomy(FIXTURE_DIR / "wndb" / "index.noun",
                         FIXTURE_DIR / "wndb" / "data.noun", "noun")


@pytest.fixture(scope="session")
def t1_ic(t1):
    return ic_from_counts(t1, lemma_counts=T1_COUNTS, smoothing=0.0)


def synset_by_lemma(tax, lemma):
    offs = tax.synsets_of(lemma)
    assert len(offs) == 1
    return offs[0]
