from __future__ import annotations

import random
from pathlib import Path

import pytest

from bnkeypad import bn_text
from bnkeypad.bn_text import (
    CONJUNCT_JOINER,
    CONSONANTS,
    INDEPENDENT_VOWELS,
    SPACE_UNIT,
    SYMBOLS,
    VOWEL_SIGNS,
)
from bnkeypad.ergonomics import default_model
from bnkeypad.layout import DEFAULT_ROLES, Layout

FIXTURES = Path(__file__).parent / "fixtures"
CORPUS_PATH = FIXTURES / "corpus_bn.txt"
TOY_LAYOUT_PATH = FIXTURES / "toy_layout.tsv"


@pytest.fixture(scope="session")
def model():
    return default_model()


@pytest.fixture(scope="session")
def corpus_path():
    return CORPUS_PATH


@pytest.fixture(scope="session")
def corpus_text():
    return bn_text.read_corpus(CORPUS_PATH)


@pytest.fixture(scope="session")
def corpus_units(corpus_text):
    units, _skipped = bn_text.scan_units(corpus_text)
    return units


@pytest.fixture(scope="session")
def corpus_table():
    return bn_text.count_file(CORPUS_PATH)


def random_full_layout(rng: random.Random) -> Layout:
    """A random layout that places the whole typable inventory."""
    consonants = list(CONSONANTS)
    rng.shuffle(consonants)
    keys = ["2", "3", "4", "5", "6", "7", "8"]
    cuts = sorted(rng.sample(range(len(consonants) + 1), len(keys) - 1))
    chunks = []
    prev = 0
    for cut in cuts + [len(consonants)]:
        chunks.append(tuple(consonants[prev:cut]))
        prev = cut

    symbols = list(VOWEL_SIGNS + SYMBOLS)
    rng.shuffle(symbols)
    vowels = list(INDEPENDENT_VOWELS)
    rng.shuffle(vowels)

    slots = {key: chunk for key, chunk in zip(keys, chunks)}
    slots["9"] = tuple(vowels)
    slots["0"] = (SPACE_UNIT,)
    slots["*"] = (CONJUNCT_JOINER,)
    if rng.random() < 0.3 and len(symbols) > 4:
        tail = rng.randint(1, 4)
        slots["#"] = tuple(symbols[-tail:])
        slots["1"] = tuple(symbols[:-tail])
    else:
        slots["1"] = tuple(symbols)
    return Layout(slots=slots, roles=dict(DEFAULT_ROLES), name="random")


def random_text(rng: random.Random, layout: Layout, length: int):
    """A random typable unit sequence drawn from a layout's inventory."""
    pool = layout.units()
    return [rng.choice(pool) for _ in range(length)]
