"""Tokenizers and string distance shared by every metric."""

from __future__ import annotations

import re

from ._kernels import levenshtein as _levenshtein

# mteval-v13a, language-dependent part (Western languages); applied in order.
_13A_RULES = [
    # ASCII symbols other than apostrophe, comma, hyphen, period
    (re.compile(r"([\{-\~\[-\` -\&\(-\+\:-\@\/])"), r" \1 "),
    # period and comma unless preceded by a digit
    (re.compile(r"([^0-9])([\.,])"), r"\1 \2 "),
    # period and comma unless followed by a digit
    (re.compile(r"([\.,])([^0-9])"), r" \1 \2"),
    # dash when preceded by a digit
    (re.compile(r"([0-9])(-)"), r"\1 \2 "),
]

_ENTITIES = (("&quot;", '"'), ("&amp;", "&"), ("&lt;", "<"), ("&gt;", ">"))


def tokenize_13a(text: str) -> list[str]:
    """Tokenize ``text`` the way mteval-v13a (and sacreBLEU's ``13a``) does.

    Case is preserved.  Returns the token list rather than a joined string.
    """
    line = text.replace("<skipped>", "").replace("-\n", "").replace("\n", " ")
    if "&" in line:
        for entity, char in _ENTITIES:
            line = line.replace(entity, char)
    line = f" {line} "
    for pattern, repl in _13A_RULES:
        line = pattern.sub(repl, line)
    return line.split()


def tokenize_whitespace(text: str) -> list[str]:
    return text.split()


TOKENIZERS = {
    "13a": tokenize_13a,
    "whitespace": tokenize_whitespace,
    # sacreBLEU's "none": no preprocessing, n-grams come from a plain split
    "none": tokenize_whitespace,
}


def get_tokenizer(name: str):
    try:
        return TOKENIZERS[name]
    except KeyError:
        raise ValueError(f"unknown tokenizer {name!r}; expected one of {sorted(TOKENIZERS)}") from None


def levenshtein(a: str, b: str) -> int:
    """Unit-cost edit distance between ``a`` and ``b``, counted in code points."""
    return _levenshtein(a, b)
