"""musetune: build instruction-tuning datasets from annotated music corpora
and evaluate music-text models."""

__version__ = "0.1.0"
