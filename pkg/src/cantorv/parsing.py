"""Text formats.

Terms: ``g<i>``, ``a<k>(t)`` (``L``/``R`` for a1/a2 when n = 2), ``m(t1,...,tn)``.
Addresses: ``<root>:<word>`` (root may be omitted when r = 1), ``e`` is the
empty word.  Codes: ``{0, 10, 11}``.  Tableaux: ``n=2 r=1 { 0->00, 10->01,
11->1 }`` or ``id(n,r)``.  Clone sequences: ``[{0} > {00}]``.  Every literal
except a term may start with an ``n=.. r=..`` header; otherwise the caller's
default signature is used.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Sequence

from .core import (
    Address, Alpha, CantorError, Gen, Mu, PrefixCode, Signature, Term, check_term,
    code_validate, format_address, format_word,
)


class ParseError(CantorError):
    def __init__(self, message: str, text: str = "", pos: int = 0):
        line = text.count("\n", 0, pos) + 1
        col = pos - (text.rfind("\n", 0, pos) + 1) + 1
        self.line, self.column, self.message = line, col, message
        super().__init__(f"line {line}, column {col}: {message}")


_TOKEN = re.compile(r"\s*(?:(->)|([A-Za-z_][A-Za-z_0-9]*)|(\d+)|(.))", re.S)


@dataclass
class _Tok:
    kind: str  # "arrow", "name", "num", "sym", "end"
    text: str
    pos: int


def _tokenize(text: str) -> list:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        start = m.start(m.lastindex) if m.lastindex else m.end()
        if m.group(1):
            out.append(_Tok("arrow", "->", start))
        elif m.group(2):
            out.append(_Tok("name", m.group(2), start))
        elif m.group(3):
            out.append(_Tok("num", m.group(3), start))
        elif m.group(4):
            out.append(_Tok("sym", m.group(4), start))
        pos = m.end()
    out.append(_Tok("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def error(self, msg: str, tok: _Tok | None = None):
        raise ParseError(msg, self.text, (tok or self.tok).pos)

    def advance(self) -> _Tok:
        t = self.tok
        self.i += 1
        return t

    def expect(self, sym: str) -> _Tok:
        if self.tok.text != sym:
            self.error(f"expected {sym!r}, found {self.tok.text or 'end of input'!r}")
        return self.advance()

    def at(self, sym: str) -> bool:
        return self.tok.text == sym

    def done(self):
        if self.tok.kind != "end":
            self.error(f"unexpected {self.tok.text!r}")

    def number(self) -> int:
        if self.tok.kind != "num":
            self.error("expected a number")
        return int(self.advance().text)

    # -- terms --------------------------------------------------------------------

    def term(self) -> Term:
        tok = self.tok
        if tok.kind != "name":
            self.error("expected a term")
        name = tok.text
        self.advance()
        m = re.fullmatch(r"g(\d+)", name)
        if m:
            return Gen(int(m.group(1)))
        if name == "m":
            self.expect("(")
            args = [self.term()]
            while self.at(","):
                self.advance()
                args.append(self.term())
            self.expect(")")
            if len(args) < 2:
                self.error("merge needs at least two arguments", tok)
            return Mu(tuple(args))
        m = re.fullmatch(r"a(\d+)", name)
        if m or name in ("L", "R"):
            k = int(m.group(1)) if m else (1 if name == "L" else 2)
            self.expect("(")
            arg = self.term()
            self.expect(")")
            return Alpha(k, arg)
        self.error(f"unknown term constructor {name!r}", tok)

    # -- headers, addresses, codes ----------------------------------------------------

    def header(self, default: Signature | None) -> Signature:
        vals = {}
        while self.tok.kind == "name" and self.tok.text in ("n", "r") \
                and self.toks[self.i + 1].text == "=":
            key = self.advance().text
            self.advance()
            vals[key] = self.number()
        if not vals:
            if default is None:
                return Signature(2, 1)
            return default
        base = default or Signature(2, 1)
        try:
            return Signature(vals.get("n", base.arity), vals.get("r", base.rank))
        except CantorError as exc:
            self.error(str(exc))

    def address(self, sig: Signature) -> Address:
        tok = self.tok
        root = 1
        if tok.kind == "num" and self.toks[self.i + 1].text == ":":
            root = int(self.advance().text)
            self.advance()
            tok = self.tok
        elif sig.rank != 1 and not (tok.kind == "name" and tok.text == "e" and sig.rank == 0):
            self.error(f"address needs an explicit root when r = {sig.rank}")
        if tok.kind == "num":
            word = tuple(int(c) for c in tok.text)
        elif tok.kind == "name" and tok.text == "e":
            word = ()
        else:
            self.error("expected an address word")
        self.advance()
        if not 1 <= root <= sig.rank:
            self.error(f"root {root} outside rank {sig.rank}", tok)
        if any(x >= sig.arity for x in word):
            self.error(f"letter outside arity {sig.arity}", tok)
        return Address(root, word)

    def address_list(self, sig: Signature, close: str, item) -> list:
        out = []
        if self.at(close):
            return out
        out.append(item())
        while self.at(","):
            self.advance()
            out.append(item())
        return out

    def code(self, sig: Signature) -> tuple:
        start = self.tok
        self.expect("{")
        addrs = self.address_list(sig, "}", lambda: self.address(sig))
        self.expect("}")
        if len(set(addrs)) != len(addrs):
            self.error("repeated address in code", start)
        return PrefixCode(sig, addrs), start


def _check_code(p: _Parser, code: PrefixCode, start: _Tok, mode: str | None):
    rep = code_validate(code, mode or "complete")
    if mode is None and rep.reason.startswith("incomplete"):
        return
    if mode is None and rep.reason.startswith("complete code"):
        return
    if not rep.ok:
        w = ", ".join(format_address(a, code.sig) for a in rep.witness)
        detail = {
            "not prefix-free": f"{format_address(rep.witness[0], code.sig)} is a prefix of "
                               f"{format_address(rep.witness[1], code.sig)}" if rep.witness else "",
        }.get(rep.reason, f"{rep.reason} ({w})" if w else rep.reason)
        p.error(detail, start)


def parse_term(text: str, sig: Signature | None = None) -> Term:
    p = _Parser(text)
    t = p.term()
    p.done()
    if sig is not None:
        try:
            check_term(t, sig)
        except CantorError as exc:
            raise ParseError(str(exc), text, 0) from None
    return t


def parse_address(text: str, sig: Signature | None = None) -> Address:
    p = _Parser(text)
    sig = p.header(sig)
    a = p.address(sig)
    p.done()
    return a


def parse_code(text: str, sig: Signature | None = None, mode: str | None = None) -> PrefixCode:
    """A prefix-free code.  ``mode`` 'complete' or 'clone' additionally enforces
    that invariant; None only checks prefix-freeness."""
    p = _Parser(text)
    sig = p.header(sig)
    code, start = p.code(sig)
    p.done()
    _check_code(p, code, start, mode)
    return code


def parse_tableau(text: str, sig: Signature | None = None):
    from .thompson import TableauError, identity, make_tableau

    p = _Parser(text)
    if p.tok.text == "id" and p.toks[p.i + 1].text == "(":
        p.advance()
        p.advance()
        n = p.number()
        p.expect(",")
        r = p.number()
        p.expect(")")
        p.done()
        return identity(Signature(n, r))
    sig = p.header(sig)
    start = p.expect("{")
    pairs = []

    def pair():
        d = p.address(sig)
        p.expect("->") if p.tok.kind == "arrow" else p.error("expected '->'")
        e = p.address(sig)
        pairs.append((d, e))

    p.address_list(sig, "}", pair)
    p.expect("}")
    p.done()
    try:
        return make_tableau(sig, pairs)
    except TableauError as exc:
        raise ParseError(str(exc), text, start.pos) from None


def parse_cloneseq(text: str, sig: Signature | None = None):
    from .clones import CloneError, CloneSeq

    p = _Parser(text)
    sig = p.header(sig)
    start = p.expect("[")
    codes = []
    while True:
        code, cstart = p.code(sig)
        _check_code(p, code, cstart, "clone")
        codes.append(code)
        if p.at(">"):
            p.advance()
            continue
        break
    p.expect("]")
    p.done()
    try:
        return CloneSeq(sig, tuple(tuple(c) for c in codes))
    except CloneError as exc:
        raise ParseError(str(exc), text, start.pos) from None


def parse_matrix(text: str) -> list:
    """Plain text rows of integers separated by spaces or commas; blank lines
    and '#' comments are ignored."""
    rows = []
    offset = 0
    for line in text.splitlines(keepends=True):
        body = line.split("#", 1)[0]
        if body.strip():
            row = []
            for m in re.finditer(r"[^\s,]+", body):
                try:
                    row.append(int(m.group()))
                except ValueError:
                    raise ParseError(f"not an integer: {m.group()!r}", text,
                                     offset + m.start()) from None
            if rows and len(row) != len(rows[0]):
                raise ParseError("ragged matrix row", text, offset)
            rows.append(row)
        offset += len(line)
    return rows


def parse_group(text: str):
    """A builtin group name, or a Cayley table in CSV form."""
    from .groups import GroupError, builtin, group_from_csv

    stripped = text.strip()
    try:
        if "\n" not in stripped and "," not in stripped:
            return builtin(stripped)
        return group_from_csv(text)
    except GroupError as exc:
        raise ParseError(str(exc), text, 0) from None


def parse(text: str, kind: str, sig: Signature | None = None):
    kinds = {
        "term": lambda: parse_term(text, sig),
        "address": lambda: parse_address(text, sig),
        "code": lambda: parse_code(text, sig),
        "clone": lambda: parse_code(text, sig, "clone"),
        "tableau": lambda: parse_tableau(text, sig),
        "cloneseq": lambda: parse_cloneseq(text, sig),
        "group": lambda: parse_group(text),
        "matrix": lambda: parse_matrix(text),
    }
    if kind not in kinds:
        raise CantorError(f"unknown literal kind {kind!r}")
    return kinds[kind]()


# -- printing ----------------------------------------------------------------------------

def format_term(t: Term, aliases: bool = False) -> str:
    """Inverse of :func:`parse_term`.  With ``aliases`` the n = 2 descents print
    as L and R."""
    if type(t) is Gen:
        return f"g{t.index}"
    if type(t) is Alpha:
        name = f"a{t.k}"
        if aliases and t.k <= 2:
            name = "LR"[t.k - 1]
        return f"{name}({format_term(t.arg, aliases)})"
    return "m(" + ",".join(format_term(a, aliases) for a in t.args) + ")"


def format_header(sig: Signature) -> str:
    return f"n={sig.arity} r={sig.rank}"


def format_code_literal(code: PrefixCode, header: bool = False) -> str:
    body = "{" + ", ".join(format_address(a, code.sig) for a in code) + "}"
    return f"{format_header(code.sig)} {body}" if header else body


def format_tableau(u) -> str:
    pairs = ", ".join(f"{format_address(d, u.sig)}->{format_address(e, u.sig)}"
                      for d, e in zip(u.domain, u.range))
    return f"{format_header(u.sig)} {{{pairs}}}"


def format_cloneseq(X, header: bool = False) -> str:
    body = "[" + " > ".join(
        "{" + ", ".join(format_address(a, X.sig) for a in term) + "}" for term in X.terms) + "]"
    return f"{format_header(X.sig)} {body}" if header else body


def format_matrix(M: Sequence[Sequence[int]]) -> str:
    return "\n".join(" ".join(str(x) for x in row) for row in M)


__all__ = [
    "ParseError", "parse", "parse_term", "parse_address", "parse_code", "parse_tableau",
    "parse_cloneseq", "parse_matrix", "parse_group", "format_term", "format_tableau",
    "format_cloneseq", "format_code_literal", "format_matrix", "format_word",
]
