import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))  # makes `oracles` importable

from truthline.textkit import StopwordList


@pytest.fixture
def rng():
    return random.Random(20240601)


@pytest.fixture
def small_stopwords():
    return StopwordList.from_words(["the", "a", "of", "in", "on", "to", "and"])


def random_tokens(rng, max_len=12, alphabet=8):
    letters = "abcdefgh"[:alphabet]
    return [rng.choice(letters) for _ in range(rng.randint(0, max_len))]
