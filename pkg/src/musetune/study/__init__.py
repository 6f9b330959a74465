from .analyze import LIKERT_RULE, SCREENING_RULE, analyze
from .build import build_llm_detail_items, build_matching_study, build_pairwise_study
from .items import KINDS, LIKERT_MAX, LIKERT_MIN, Judgment, StudyItem
from .judge import JUDGE_SYSTEM_PROMPT, run_llm_judge

__all__ = [
    "JUDGE_SYSTEM_PROMPT",
    "Judgment",
    "KINDS",
    "LIKERT_MAX",
    "LIKERT_MIN",
    "LIKERT_RULE",
    "SCREENING_RULE",
    "StudyItem",
    "analyze",
    "build_llm_detail_items",
    "build_matching_study",
    "build_pairwise_study",
    "run_llm_judge",
]
