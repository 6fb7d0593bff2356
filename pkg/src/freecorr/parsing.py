"""Recursive-descent parser for the word notations used by the CLI and fixtures.

Copy-indexed words::

    A_1 B_2 (A C)_1       letters; parentheses hold a merged monomial
    A*_1  A^*_1  A†_1     adjoints
    ~A_1                  centered letter A - <A> 1
    (A_1 B_2)^3           repeated group
    1_2                   identity letter (dropped on normalization)

Timed words: ``e(3) e(7) e(3)``, ``(e(1) e(2))^4``.
Copy patterns: a word over ``e`` (``e_1 e_2 e_1 e_2``) or digits (``1212``, ``1,2,1``).
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .words import Letter, ObservableSymbol, Polynomial, normalize


class ParseError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        self.text = text
        self.pos = pos
        token = text[pos:pos + 8].split(" ")[0] if pos < len(text) else "<end>"
        self.token = token or text[pos:pos + 1]
        super().__init__(f"{message}: {self.token!r} at position {pos} in {text!r}")


_NAME = re.compile(r"[A-Za-z][A-Za-z0-9]*|1")
_INT = re.compile(r"-?\d+")


@dataclass(frozen=True)
class ParsedLetter:
    letter: Letter
    centered: bool = False


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, message: str):
        raise ParseError(message, self.text, self.pos)

    def skip_space(self):
        while self.pos < len(self.text) and self.text[self.pos] in " \t":
            self.pos += 1

    def peek(self, s: str) -> bool:
        self.skip_space()
        return self.text.startswith(s, self.pos)

    def eat(self, s: str) -> bool:
        if self.peek(s):
            self.pos += len(s)
            return True
        return False

    def expect(self, s: str):
        if not self.eat(s):
            self.error(f"expected {s!r}")

    def at_end(self) -> bool:
        self.skip_space()
        return self.pos >= len(self.text)

    def integer(self, what: str = "integer") -> int:
        self.skip_space()
        m = _INT.match(self.text, self.pos)
        if not m:
            self.error(f"expected {what}")
        self.pos = m.end()
        return int(m.group())

    def name(self) -> str:
        self.skip_space()
        m = _NAME.match(self.text, self.pos)
        if not m:
            self.error("expected a symbol name")
        self.pos = m.end()
        return m.group()

    def adjoint_suffix(self) -> bool:
        if self.text.startswith("^*", self.pos):
            self.pos += 2
            return True
        if self.pos < len(self.text) and self.text[self.pos] in "*†":
            self.pos += 1
            return True
        return False

    def symbol(self) -> ObservableSymbol:
        name = self.name()
        adj = self.adjoint_suffix()
        if name == "1":
            return ObservableSymbol.identity()
        return ObservableSymbol(name, adj)

    def power(self) -> int:
        if self.text.startswith("^", self.pos) and not self.text.startswith("^*", self.pos):
            self.pos += 1
            k = self.integer("exponent")
            if k < 0:
                self.error("negative exponent")
            return k
        return 1

    # -- copy-indexed words --------------------------------------------
    def word_items(self, closing: str | None = None) -> list:
        items: list = []
        while True:
            if closing is not None and self.peek(closing):
                return items
            if self.at_end():
                if closing is not None:
                    self.error(f"missing {closing!r}")
                return items
            items.extend(self.word_item())

    def word_item(self) -> list:
        self.skip_space()
        start = self.pos
        centered = self.eat("~")
        if self.eat("("):
            inner_start = self.pos
            # merged monomial "(A C)_k" or group "(A_1 B_2)^k"
            save = self.pos
            syms = []
            try:
                while not self.peek(")"):
                    syms.append(self.symbol())
                self.expect(")")
                if self.text.startswith("_", self.pos):
                    self.pos += 1
                    copy = self.integer("copy index")
                    self._check_copy(copy, start)
                    letter = Letter(copy, syms)
                    return [ParsedLetter(letter, centered)] * self.power()
                raise ParseError("not a monomial", self.text, self.pos)
            except ParseError:
                self.pos = save
            if centered:
                self.pos = start
                self.error("'~' applies to a single letter")
            items = self.word_items(")")
            self.expect(")")
            if not self.text.startswith("^", self.pos):
                self.pos = inner_start - 1
                self.error("expected '_<copy>' or '^<power>' after parenthesis")
            return items * self.power()
        sym = self.symbol()
        if not self.text.startswith("_", self.pos):
            self.error("expected '_<copy>' after symbol")
        self.pos += 1
        copy = self.integer("copy index")
        self._check_copy(copy, start)
        return [ParsedLetter(Letter(copy, (sym,)), centered)] * self.power()

    def _check_copy(self, copy: int, start: int):
        if copy < 1:
            self.pos = start
            self.error("copy indices start at 1")

    # -- timed words ----------------------------------------------------
    def timed_items(self, closing: str | None = None) -> list:
        times: list = []
        while True:
            if closing is not None and self.peek(closing):
                return times
            if self.at_end():
                if closing is not None:
                    self.error(f"missing {closing!r}")
                return times
            self.skip_space()
            if self.text.startswith("e(", self.pos):
                self.pos += 2
                t = self.integer("time")
                self.expect(")")
                times.extend([t] * self.power())
            elif self.eat("("):
                inner = self.timed_items(")")
                self.expect(")")
                times.extend(inner * self.power())
            elif self.peek("1") and not _INT.match(self.text, self.pos + 1):
                self.pos += 1  # identity
            else:
                self.error("expected 'e(<time>)'")


def parse_word(text: str) -> list:
    """Parse a copy-indexed word into :class:`ParsedLetter` items (not normalized)."""
    p = _Parser(text)
    items = p.word_items()
    return items


def word_polynomial(items, state=None) -> Polynomial:
    """Multiply parsed letters out; centered letters need ``state`` for their means."""
    if isinstance(items, str):
        items = parse_word(items)
    out = Polynomial.one()
    for item in items:
        term = Polynomial.from_word([item.letter])
        if item.centered:
            if state is None:
                raise ValueError("centered letters need a marginal state")
            term = term - Polynomial.scalar(state(item.letter.symbols))
        out = out * term
    return out


def parse_normal_word(text: str):
    items = parse_word(text)
    if any(i.centered for i in items):
        raise ParseError("centered letters are not allowed here", text, text.index("~"))
    return normalize(i.letter for i in items)


def parse_timed_word(text: str):
    from .shift import TimedWord

    p = _Parser(text)
    return TimedWord(p.timed_items())


def parse_pattern(text: str) -> list:
    """Copy pattern of a shift word: ``e_1 e_2 e_1``, ``1212`` or ``1,2,1``."""
    stripped = text.strip()
    if re.fullmatch(r"[0-9]+", stripped):
        copies = [int(c) for c in stripped]
        if 0 in copies:
            raise ParseError("copy indices start at 1", text, text.index("0"))
        return copies
    if re.fullmatch(r"[0-9]+(\s*,\s*[0-9]+)+", stripped):
        copies = [int(c) for c in stripped.split(",")]
        if 0 in copies:
            raise ParseError("copy indices start at 1", text, 0)
        return copies
    items = parse_word(text)
    copies = []
    pos = 0
    for item in items:
        syms = item.letter.symbols
        if item.centered or any(s.name != "e" for s in syms):
            bad = next((s for s in syms if s.name != "e"), syms[0])
            idx = text.find(bad.name, pos)
            raise ParseError("shift patterns use the generator 'e' only", text, max(idx, 0))
        copies.extend([item.letter.copy] * len(syms))
    return copies
