"""
Number words and numeric literals.
"""
import re
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from aimp.errors import FormatError

UNVALUED_WORDS = frozenset({"many", "much"})

_UNITS = [
    "zero", "one", "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten",
    "eleven", "twelve", "thirteen", "fourteen", "fifteen", "sixteen", "seventeen",
    "eighteen", "nineteen", "twenty",
]
_TENS = {"thirty": 30, "forty": 40, "fifty": 50, "sixty": 60, "seventy": 70, "eighty": 80, "ninety": 90}

DEFAULT_NUMBER_WORDS: Dict[str, float] = {word: float(i) for i, word in enumerate(_UNITS)}
DEFAULT_NUMBER_WORDS.update({word: float(v) for word, v in _TENS.items()})
DEFAULT_NUMBER_WORDS.update({"a": 1.0, "an": 1.0, "dozen": 12.0})

MULTIPLIER_WORDS = frozenset({"dozen"})
ARTICLE_WORDS = frozenset({"a", "an"})

_NUMERAL_RE = re.compile(r"^(?:\d{1,3}(?:,\d{3})+|\d+)(?:\.\d+)?$|^\.\d+$")


def is_numeral(text: str) -> bool:
    return bool(_NUMERAL_RE.match(text))


def numeral_value(text: str) -> float:
    return float(text.replace(",", ""))


def is_number_word(text: str, numwords: Optional[Dict[str, float]] = None) -> bool:
    table = DEFAULT_NUMBER_WORDS if numwords is None else numwords
    return text.lower() in table


def combine_number_words(words: Sequence[str], numwords: Dict[str, float]) -> float:
    """
    Value of adjacent number words: "twenty one" -> 21, "a dozen" -> 12,
    "two dozen" -> 24.
    """
    total = 0.0
    for word in words:
        key = word.lower()
        if key in MULTIPLIER_WORDS:
            total = (total or 1.0) * numwords[key]
        elif is_numeral(word):
            total += numeral_value(word)
        else:
            total += numwords[key]
    return total


def load_numwords(path: Path) -> Dict[str, float]:
    """Read a `word<TAB>value` table, layered over the built-in words."""
    table = dict(DEFAULT_NUMBER_WORDS)
    lines: List[str] = Path(path).read_text(encoding="utf-8").splitlines()
    for line_no, line in enumerate(lines, 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise FormatError(line_no, "expected word<TAB>value")
        try:
            table[parts[0].strip().lower()] = float(parts[1])
        except ValueError:
            raise FormatError(line_no, f"not a number: {parts[1]!r}")
    return table
