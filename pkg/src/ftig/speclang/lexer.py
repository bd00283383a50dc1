"""Tokenizer for the ``.fti`` interface-specification language.

Identifiers may contain ``:`` between name characters (``RIi:L:CSP:SE``,
``hmt:csla``); a ``:`` not directly followed by a name character is the
punctuation token used in architecture members.  Comments are written
``%[ ... %]`` and may span lines.  Whitespace is insignificant outside
comments.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import ParseError, SourcePosition

KEYWORDS = frozenset({
    "entity", "extern", "action", "motive", "condition",
    "interface", "architecture", "check", "contained", "monoid",
    "refine", "rename",
})

_PUNCT = {
    "+": "PLUS", "-": "MINUS", "~": "TILDE", ".": "DOT", "@": "AT",
    "/": "SLASH", "(": "LPAREN", ")": "RPAREN", "{": "LBRACE",
    "}": "RBRACE", ",": "COMMA", ":": "COLON", "!": "BANG", "=": "EQUALS",
}


@dataclass(frozen=True)
class Token:
    kind: str          # IDENT, INT, COMMENT, EOF, a keyword, or a punct kind
    text: str
    pos: SourcePosition


def _is_name_start(ch: str) -> bool:
    return ch.isascii() and (ch.isalpha() or ch == "_")


def _is_name_char(ch: str) -> bool:
    return ch.isascii() and (ch.isalnum() or ch == "_")


def tokenize(text: str, filename: str | None = None) -> list[Token]:
    tokens: list[Token] = []
    i = 0
    line = 1
    col = 1
    n = len(text)

    def pos() -> SourcePosition:
        return SourcePosition(line, col, filename)

    def advance(k: int = 1):
        nonlocal i, line, col
        for _ in range(k):
            if i < n and text[i] == "\n":
                line += 1
                col = 1
            else:
                col += 1
            i += 1

    while i < n:
        ch = text[i]
        if ch in " \t\r\n":
            advance()
            continue
        start = pos()
        if text.startswith("%[", i):
            advance(2)
            body_start = i
            while i < n and not text.startswith("%]", i):
                advance()
            if i >= n:
                raise ParseError("unterminated comment: missing %]", start)
            body = text[body_start:i]
            advance(2)
            tokens.append(Token("COMMENT", body, start))
            continue
        if ch == "%":
            raise ParseError("stray % (comments open with %[)", start)
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(Token("INT", text[i:j], start))
            advance(j - i)
            continue
        if _is_name_start(ch):
            j = i
            while j < n:
                if _is_name_char(text[j]):
                    j += 1
                elif text[j] == ":" and j + 1 < n and _is_name_char(text[j + 1]):
                    j += 2
                else:
                    break
            word = text[i:j]
            kind = word if word in KEYWORDS else "IDENT"
            tokens.append(Token(kind, word, start))
            advance(j - i)
            continue
        if ch == "λ":  # λ reply constraint, normalized to its ASCII spelling
            tokens.append(Token("IDENT", "lambda", start))
            advance()
            continue
        if text.startswith("->", i):
            tokens.append(Token("ARROW", "->", start))
            advance(2)
            continue
        if text.startswith("<|", i):
            tokens.append(Token("CONDL", "<|", start))
            advance(2)
            continue
        if text.startswith("|>", i):
            tokens.append(Token("CONDR", "|>", start))
            advance(2)
            continue
        if ch in _PUNCT:
            tokens.append(Token(_PUNCT[ch], ch, start))
            advance()
            continue
        raise ParseError(f"unexpected character {ch!r}", start)
    tokens.append(Token("EOF", "", pos()))
    return tokens
