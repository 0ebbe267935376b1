import threading
import time

import pytest
import torch
import uvicorn
from transformers import BertConfig, BertForSequenceClassification, BertTokenizer

from scorer_service.app import create_app
from scorer_service.config import ServiceConfig
from scorer_service.model import EntailmentModel

WORDS = [
    "the", "a", "cat", "sat", "on", "mat", "dog", "ran", "stocks", "rose",
    "fell", "tuesday", "markets", "rain", "vote", "passed", "narrowly",
    "all", "day", "rallied", "tokyo", "prices", "oil", "shares", "bank",
    "council", "budget", "approved", "narrow", "keen", "sell",
]


def build_tiny_checkpoint(path, seed=0):
    """A small randomly initialized pair classifier, fully offline."""
    vocab = {w: i for i, w in enumerate(["[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]"] + WORDS)}
    tokenizer = BertTokenizer(vocab=vocab, do_lower_case=True)
    torch.manual_seed(seed)
    config = BertConfig(
        vocab_size=len(vocab),
        hidden_size=32,
        num_hidden_layers=2,
        num_attention_heads=2,
        intermediate_size=64,
        max_position_embeddings=128,
        num_labels=2,
        id2label={0: "non_entail", 1: "entail"},
        label2id={"non_entail": 0, "entail": 1},
    )
    model = BertForSequenceClassification(config)
    model.save_pretrained(path)
    tokenizer.save_pretrained(path)
    return path


@pytest.fixture(scope="session")
def tiny_checkpoint(tmp_path_factory):
    return build_tiny_checkpoint(tmp_path_factory.mktemp("model") / "tiny")


@pytest.fixture(scope="session")
def service_config(tiny_checkpoint):
    return ServiceConfig(model=str(tiny_checkpoint), max_batch_size=4, max_seq_len=48)


@pytest.fixture(scope="session")
def entailment_model(service_config):
    return EntailmentModel(service_config)


class LiveServer:
    """uvicorn in a thread, bound to an OS-assigned port."""

    def __init__(self, app):
        self._server = uvicorn.Server(
            uvicorn.Config(app, host="127.0.0.1", port=0, log_level="warning")
        )
        self._thread = threading.Thread(target=self._server.run, daemon=True)

    def __enter__(self):
        self._thread.start()
        deadline = time.monotonic() + 15
        while not self._server.started:
            if time.monotonic() > deadline:
                raise RuntimeError("service did not start in time")
            time.sleep(0.02)
        port = self._server.servers[0].sockets[0].getsockname()[1]
        self.base_url = f"http://127.0.0.1:{port}"
        return self

    def __exit__(self, *exc_info):
        self._server.should_exit = True
        self._thread.join(timeout=10)


@pytest.fixture(scope="session")
def live_service(entailment_model):
    with LiveServer(create_app(entailment_model)) as server:
        yield server.base_url
