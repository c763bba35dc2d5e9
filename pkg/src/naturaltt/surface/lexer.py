from __future__ import annotations

import re
from dataclasses import dataclass

from naturaltt.diagnostics import Diagnostic, Span, TypeCheckError

KEYWORDS = frozenset({
    "def", "postulate", "check", "eq", "modeleq",
    "fun", "Pi", "Sig", "let", "in", "up", "dn", "natural",
    "fst", "snd", "Id", "refl", "jelim", "Unit", "tt", "Type", "PB",
})

# longest symbols first
SYMBOLS = ("::", ":=", "=>", "->", "==", "(", ")", ",", ":", ";", "=", "~", "%")

_IDENT = re.compile(r"[^\W\d]\w*'*", re.UNICODE)
_WS = re.compile(r"[ \t\r]+")


@dataclass(frozen=True)
class Token:
    kind: str  # "id", "kw", "sym", "eof"
    text: str
    line: int
    col: int

    @property
    def span(self) -> Span:
        return Span(self.line, self.col, self.line, self.col + len(self.text))

    def __repr__(self) -> str:
        return f"{self.kind}:{self.text!r}@{self.line}:{self.col}"


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    line, col, i, n = 1, 1, 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line, col, i = line + 1, 1, i + 1
            continue
        m = _WS.match(text, i)
        if m:
            col += m.end() - i
            i = m.end()
            continue
        if text.startswith("--", i):
            j = text.find("\n", i)
            j = n if j < 0 else j
            col += j - i
            i = j
            continue
        for sym in SYMBOLS:
            if text.startswith(sym, i):
                tokens.append(Token("sym", sym, line, col))
                i += len(sym)
                col += len(sym)
                break
        else:
            m = _IDENT.match(text, i)
            if not m:
                raise TypeCheckError(Diagnostic(
                    "lex", f"unexpected character {ch!r}", span=Span(line, col)))
            word = m.group()
            tokens.append(Token("kw" if word in KEYWORDS else "id", word, line, col))
            col += len(word)
            i = m.end()
    tokens.append(Token("eof", "", line, col))
    return tokens
