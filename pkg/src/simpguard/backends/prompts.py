"""Prompt templates and placeholder rendering for the model backends.

Placeholders are replaced literally, never via ``str.format``: the templates
themselves contain brace characters (a JSON response schema in the judge
prompt, doubled braces around the distortion response) that must reach the
model byte for byte.
"""

from __future__ import annotations

import re

from ..corpus import CATEGORY_LABELS

JUDGE_SCORE_KEYS = (
    "spuriousness",
    "over_generalization",
    "contradiction",
    "vagueness",
)

DISTORTION_SCORE_KEYS = CATEGORY_LABELS

# NOTE: three lines of JUDGE_TEMPLATE end in a single space. That whitespace
# is part of the prompt contract; do not let an editor strip it.
JUDGE_TEMPLATE = (
    "You are an expert annotator tasked with evaluating whether an input text is spurious when compared to a source document.\n"
    "\n"
    "An input text is **spurious** if:\n"
    "- It fabricates information not grounded in any source.\n"
    "- It misrepresents or contradicts the source documents.\n"
    "- It is too general, trivial, or irrelevant in the context of the documents, even if technically true.\n"
    "\n"
    "Please review the following examples to guide your evaluation:\n"
    "\n"
    "Example 1:\n"
    "SOURCE DOCUMENT:\n"
    "Online social media provide users with opportunities to engage with diverse opinions and can spread misinformation.\n"
    "\n"
    "INPUT TEXT:\n"
    "Social media always spreads misinformation.\n"
    "\n"
    "RESPONSE:\n"
    "{\n"
    "  \"spuriousness\": 0.8,\n"
    "  \"over_generalization\": 0.9,\n"
    "  \"contradiction\": 0.7,\n"
    "  \"vagueness\": 0.4\n"
    "}\n"
    "\n"
    "Example 2:\n"
    "SOURCE DOCUMENT:\n"
    "We propose a new welfare criterion that allows us to rank alternative financial market structures in the presence of belief heterogeneity.\n"
    "\n"
    "INPUT TEXT:\n"
    "We propose a new economic theory to manage inflation.\n"
    "\n"
    "RESPONSE:\n"
    "{\n"
    "  \"spuriousness\": 1.0,\n"
    "  \"over_generalization\": 0.8,\n"
    "  \"contradiction\": 0.6,\n"
    "  \"vagueness\": 0.5\n"
    "}\n"
    "\n"
    "Example 3:\n"
    "SOURCE DOCUMENT:\n"
    "We analyze economies with complete and incomplete financial markets and restricted trading possibilities like borrowing limits.\n"
    "\n"
    "INPUT TEXT:\n"
    "We analyze economies with complete and incomplete financial markets.\n"
    "\n"
    "RESPONSE:\n"
    "{\n"
    "  \"spuriousness\": 0.1,\n"
    "  \"over_generalization\": 0.4,\n"
    "  \"contradiction\": 0.0,\n"
    "  \"vagueness\": 0.2\n"
    "}\n"
    "\n"
    "Now evaluate the next pair:\n"
    "\n"
    "SOURCE DOCUMENT:\n"
    "{source}\n"
    "\n"
    "INPUT TEXT:\n"
    "{input_text}\n"
    "\n"
    "Please answer with a score between 0 and 1 for each of the following:\n"
    "\n"
    "1. Spuriousness (fabricated, irrelevant, or ungrounded): \n"
    "2. Over-generalization (too broad or omits key details): \n"
    "3. Contradiction (misrepresents or opposes the source): \n"
    "4. Vagueness (too imprecise, lacks specificity):\n"
    "\n"
    "Do not include any text or commentary outside of the JSON response format below.\n"
    "Respond in this JSON format:\n"
    "{\n"
    "  \"spuriousness\": float,\n"
    "  \"over_generalization\": float,\n"
    "  \"contradiction\": float,\n"
    "  \"vagueness\": float\n"
    "}"
)

DISTORTION_TEMPLATE = (
    "You are an expert linguist specializing in text simplification. Given a source sentence and a simplified version, your task is to score between 0 and 1 for any of the information distortion errors in the simplified sentence.\n"
    "\n"
    "The possible error categories are:\n"
    "- 'No error': 1 if the simplified sentence is accurate, grammatical, and faithful to the source.\n"
    "- 'A1. Random generation': 1 if the simplified sentence contains unrelated content.\n"
    "- 'A2. Syntax error': 1 if the simplified sentence is syntactically broken or malformed.\n"
    "- 'A3. Contradiction': 1 if the simplified sentence contradicts the source.\n"
    "- 'A4. Simple punctuation / grammar errors': 1 if there are small grammar or punctuation issues.\n"
    "- 'A5. Redundancy': 1 if the sentence repeats information unnecessarily.\n"
    "- 'B1. Format misalignement': 1 if the formatting deviates in a way that distorts meaning.\n"
    "- 'B2. Prompt misalignement': 1 if the simplification ignores the intent or task of simplification.\n"
    "- 'C1. Factuality hallucination': 1 if the simplified sentence adds false information.\n"
    "- 'C2. Faithfulness hallucination': 1 if information is not supported by the source.\n"
    "- 'C3. Topic shift': 1 if the sentence shifts to a different topic.\n"
    "- 'D1.1. Overgeneralization': 1 if it makes the content too broad and less precise.\n"
    "- 'D1.2 Overspecification of Concepts': 1 if it introduces more specificity than appropriate.\n"
    "- 'D2.1. Loss of Informative Content': 1 if key details from the source are missing.\n"
    "- 'D2.2. Out-of-Scope Generation': 1 if the simplified sentence includes irrelevant elaborations.\n"
    "\n"
    "Please review the following example to guide your evaluation:\n"
    "\n"
    "Example 1:\n"
    "SOURCE SENTENCE: We conducted the experiments with a data set of 94 chest CTs (laboratory confirmed 39 viral bronchiolitis caused by human parainfluenza (HPIV), 34 nontuberculous mycobacterial (NTM), and 21 normal control).\n"
    "\n"
    "SIMPLIFIED SENTENCE: 'The tests were Out of these, there were 39 cases with viral bronchiolitis from HPIV, 34 cases of non-tuberculosis mycobacteria (NTM), and 21 healthy people for comparison.\n"
    "\n"
    "RESPONSE:\n"
    "{{\n"
    " 'No error': 0,\n"
    " 'A1. Random generation': 0,\n"
    " 'A2. Syntax error': 1,\n"
    " 'A3. Contradiction': 0,\n"
    " 'A4. Simple punctuation / grammar errors': 0,\n"
    " 'A5. Redundancy': 0,\n"
    " 'B1. Format misalignement': 0,\n"
    " 'B2. Prompt misalignement': 0,\n"
    " 'C1. Factuality hallucination': 0,\n"
    " 'C2. Faithfulness hallucination': 0,\n"
    " 'C3. Topic shift': 0,\n"
    " 'D1.1. Overgeneralization': 0,\n"
    " 'D1.2 Overspecification of Concepts': 0,\n"
    " 'D2.1. Loss of Informative Content': 0,\n"
    " 'D2.2. Out-of-Scope Generation': 0\n"
    "\n"
    "}}\n"
    "\n"
    "Now evaluate the next pair:\n"
    "\n"
    "SOURCE SENTENCE:\n"
    "{source_sentence}\n"
    "\n"
    "SIMPLIFIED SENTENCE:\n"
    "{simplified_sentence}\n"
    "\n"
    "\n"
    "Do not include any text or commentary outside of the JSON response format below.\n"
    "Respond in this JSON format:\n"
    "{{\n"
    " 'No error': float,\n"
    " 'A1. Random generation': float,\n"
    " 'A2. Syntax error': float,\n"
    " 'A3. Contradiction': float,\n"
    " 'A4. Simple punctuation / grammar errors': float,\n"
    " 'A5. Redundancy': float,\n"
    " 'B1. Format misalignement': float,\n"
    " 'B2. Prompt misalignement': float,\n"
    " 'C1. Factuality hallucination': float,\n"
    " 'C2. Faithfulness hallucination': float,\n"
    " 'C3. Topic shift': float,\n"
    " 'D1.1. Overgeneralization': float,\n"
    " 'D1.2 Overspecification of Concepts': float,\n"
    " 'D2.1. Loss of Informative Content': float,\n"
    " 'D2.2. Out-of-Scope Generation': float\n"
    "\n"
    "}}"
)

GROUNDING_TEMPLATE = (
    "You are given:\n"
    "- A reference document\n"
    "- An input text that may contain errors such as fabricated content, contradictions, hallucinations or overgeneration.\n"
    "\n"
    "Your task is to revise the input text so that it is fully grounded in the reference document. The corrected version must:\n"
    "- Be factually consistent with the reference\n"
    "- Avoid introducing unrelated or inaccurate information\n"
    "\n"
    "Return only the corrected version of the input text if it is needed, otherwise return the same input text.\n"
    "\n"
    "Reference Document: {reference_doc}\n"
    "Input Text: {input_text}\n"
    "Corrected Text:"
)


def _render(template: str, mapping: dict[str, str]) -> str:
    """Substitute ``{name}`` tokens literally, each in a single pass.

    A single regex pass means substituted text can never be re-scanned for
    further placeholders, so user text containing ``{input_text}`` survives
    unmangled.
    """

    pattern = re.compile(r"\{(" + "|".join(re.escape(k) for k in mapping) + r")\}")
    seen: set[str] = set()

    def sub(match: re.Match[str]) -> str:
        seen.add(match.group(1))
        return mapping[match.group(1)]

    rendered = pattern.sub(sub, template)
    missing = set(mapping) - seen
    if missing:
        raise ValueError(f"template has no placeholder(s): {sorted(missing)}")
    return rendered


def render_judge_prompt(source: str, input_text: str) -> str:
    """Fill the spuriousness-judging prompt with a source and the text to rate."""

    return _render(JUDGE_TEMPLATE, {"source": source, "input_text": input_text})


def render_distortion_prompt(source_sentence: str, simplified_sentence: str) -> str:
    """Fill the error-category scoring prompt with a sentence pair."""

    return _render(
        DISTORTION_TEMPLATE,
        {
            "source_sentence": source_sentence,
            "simplified_sentence": simplified_sentence,
        },
    )


def render_grounding_prompt(reference_doc: str, input_text: str) -> str:
    """Fill the revision prompt that rewrites text to match its reference."""

    return _render(
        GROUNDING_TEMPLATE,
        {"reference_doc": reference_doc, "input_text": input_text},
    )
