from .captions import (
    build_idf,
    caption_metrics,
    cider,
    corpus_bleu,
    meteor_lite,
    rouge_l,
    score_caption_corpus,
)
from .genre import HashTfidfEmbedder, RemoteEmbedder, genre_acc1
from .instruments import instrument_f1, normalize_instruments
from .keys import mirex_key_score, parse_key_text
from .report import MetricReport
from .tempo_metrics import ACC2_MULTIPLES, ACC2_TOLERANCE, acc2, parse_bpm_text
from .tokens import PROBE_PROMPTS, token_stats, tokenize, word_count_probe

__all__ = [
    "ACC2_MULTIPLES",
    "ACC2_TOLERANCE",
    "HashTfidfEmbedder",
    "MetricReport",
    "PROBE_PROMPTS",
    "RemoteEmbedder",
    "acc2",
    "build_idf",
    "caption_metrics",
    "cider",
    "corpus_bleu",
    "genre_acc1",
    "instrument_f1",
    "meteor_lite",
    "mirex_key_score",
    "normalize_instruments",
    "parse_bpm_text",
    "parse_key_text",
    "rouge_l",
    "score_caption_corpus",
    "token_stats",
    "tokenize",
    "word_count_probe",
]
