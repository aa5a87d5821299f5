"""Corpus ablation benchmarking for LSA and skip-gram word embeddings.

Thin wrapper over the C++ extension module; see the project README for the
full pipeline (tokenization, discard methods, training, evaluation and the
grid experiment harness).
"""

from embedlab._core import *  # noqa: F401,F403
from embedlab._core import __version__  # noqa: F401
