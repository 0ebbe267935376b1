"""Entailment-scoring microservice speaking the truthline scorer protocol."""

from .app import create_app
from .config import ServiceConfig
from .finetune import finetune, load_labeled_pairs
from .model import EntailmentModel, OversizeItemError

__version__ = "0.1.0"
