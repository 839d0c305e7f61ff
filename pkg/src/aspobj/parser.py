"""Tokenizer and recursive-descent parser for ``.ospec`` sources.

The only genuinely ambiguous construct is ``V?name(...)``: it is a
parameter-membership literal when ``name`` is a declared array parameter
and a creation reference otherwise, so the parser threads the declared
parameter names through literal parsing. Heads of the form
``term { element } term`` (bounded choices) are disambiguated from
ordinary atoms by a bounded backtrack.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .ast_nodes import (
    AnonTerm, ArithTerm, CardElement, CardinalityLiteral, ChoiceHead, Comparison,
    CountAssignment, CreationRef, ExeAtom, IntTerm, MethodValueTerm, MinimizeStatement,
    Naf, NewAtom, OrdinaryAtom, ParamDecl, ParamMembership, ReturnAtom, Rule,
    ScalarRefTerm, SpecProgram, SymbolTerm, Term, VarTerm, COMPARISON_OPS,
)
from .errors import LexicalError, SpecSyntaxError


class TokenKind(enum.Enum):
    IDENT = "ident"
    INT = "int"
    VAR = "var"
    ANON = "anon"
    PUNCT = "punct"
    OP = "op"
    KEYWORD = "kw"
    MINIMIZE = "#minimize"
    EOF = "eof"


KEYWORDS = frozenset({"package", "import", "new", "exe", "return", "not"})

_PUNCT = (":-", ".", ",", ":", "{", "}", "(", ")", "[", "]", ";", "*")
_OPS = ("==", "!=", "<=", ">=", "<", ">", "+", "-", "=")


@dataclass(frozen=True, slots=True)
class Token:
    kind: TokenKind
    text: str
    line: int
    col: int

    def __repr__(self) -> str:
        return f"{self.kind.value}:{self.text}"


def tokenize(source: str) -> list[Token]:
    """Lex a specification source into tokens (no EOF sentinel)."""
    tokens: list[Token] = []
    i, line, col = 0, 1, 1
    n = len(source)
    while i < n:
        ch = source[i]
        if ch == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "%":  # comment to end of line
            while i < n and source[i] != "\n":
                i += 1
            continue
        start_col = col
        if ch.isdigit():
            j = i
            while j < n and source[j].isdigit():
                j += 1
            tokens.append(Token(TokenKind.INT, source[i:j], line, start_col))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (source[j].isalnum() or source[j] == "_"):
                j += 1
            word = source[i:j]
            col += j - i
            i = j
            if word == "_":
                tokens.append(Token(TokenKind.ANON, word, line, start_col))
            elif i < n and source[i] == "?":
                tokens.append(Token(TokenKind.VAR, word, line, start_col))
                i += 1
                col += 1
            elif word in KEYWORDS:
                tokens.append(Token(TokenKind.KEYWORD, word, line, start_col))
            else:
                tokens.append(Token(TokenKind.IDENT, word, line, start_col))
            continue
        if ch == "#":
            if source.startswith("#minimize", i):
                tokens.append(Token(TokenKind.MINIMIZE, "#minimize", line, start_col))
                i += len("#minimize")
                col += len("#minimize")
                continue
            raise LexicalError("unrecognized directive", line, col)
        matched = None
        for p in _PUNCT + _OPS:
            if source.startswith(p, i):
                matched = p
                break
        # ":-" must win over ":"; the tuples are ordered longest-first where
        # prefixes overlap, but "==" vs "=" spans the two groups:
        if matched == "=" and source.startswith("==", i):
            matched = "=="
        if matched == ":" and source.startswith(":-", i):
            matched = ":-"
        if matched is None:
            raise LexicalError(f"unrecognizable character {ch!r}", line, col)
        kind = TokenKind.PUNCT if matched in _PUNCT else TokenKind.OP
        tokens.append(Token(kind, matched, line, start_col))
        i += len(matched)
        col += len(matched)
    return tokens


class _Cursor:
    __slots__ = ("tokens", "pos")

    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self, ahead: int = 0) -> Token:
        idx = self.pos + ahead
        if idx < len(self.tokens):
            return self.tokens[idx]
        last = self.tokens[-1] if self.tokens else None
        line = last.line if last else 1
        col = (last.col + len(last.text)) if last else 1
        return Token(TokenKind.EOF, "", line, col)

    def next(self) -> Token:
        tok = self.peek()
        self.pos += 1
        return tok

    def at(self, kind: TokenKind, text: str | None = None) -> bool:
        tok = self.peek()
        return tok.kind is kind and (text is None or tok.text == text)

    def expect(self, kind: TokenKind, text: str | None = None) -> Token:
        tok = self.peek()
        if not self.at(kind, text):
            want = text or kind.value
            raise SpecSyntaxError(f"expected {want!r}, found {tok.text!r}", tok.line, tok.col)
        return self.next()

    def accept(self, kind: TokenKind, text: str | None = None) -> Token | None:
        if self.at(kind, text):
            return self.next()
        return None


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.cur = _Cursor(tokens)
        self.array_params: set[str] = set()
        self.scalar_params: set[str] = set()

    # -- header ------------------------------------------------------------

    def dotted_name(self) -> str:
        parts = [self.cur.expect(TokenKind.IDENT).text]
        while self.cur.accept(TokenKind.PUNCT, "."):
            if self.cur.at(TokenKind.PUNCT, "*"):
                self.cur.next()
                parts.append("*")
                break
            parts.append(self.cur.expect(TokenKind.IDENT).text)
        return ".".join(parts)

    def parse_spec(self) -> SpecProgram:
        package = None
        if self.cur.accept(TokenKind.KEYWORD, "package"):
            package = self.dotted_name()
            self.cur.expect(TokenKind.PUNCT, ";")
        imports = []
        while self.cur.accept(TokenKind.KEYWORD, "import"):
            imports.append(self.dotted_name())
            self.cur.expect(TokenKind.PUNCT, ";")
        name_tok = self.cur.expect(TokenKind.IDENT)
        self.cur.expect(TokenKind.PUNCT, "(")
        params: list[ParamDecl] = []
        if not self.cur.at(TokenKind.PUNCT, ")"):
            params.append(self.param_decl())
            while self.cur.accept(TokenKind.PUNCT, ","):
                params.append(self.param_decl())
        self.cur.expect(TokenKind.PUNCT, ")")

        imported_classes = {imp.rsplit(".", 1)[-1] for imp in imports if not imp.endswith("*")}
        for p in params:
            if p.name in imported_classes:
                raise SpecSyntaxError(
                    f"{p.name!r} is both a parameter name and an imported class name",
                    name_tok.line, name_tok.col)
        seen = set()
        for p in params:
            if p.name in seen:
                raise SpecSyntaxError(f"duplicate parameter name {p.name!r}",
                                      name_tok.line, name_tok.col)
            seen.add(p.name)
        self.array_params = {p.name for p in params if p.is_array}
        self.scalar_params = {p.name for p in params if not p.is_array}

        self.cur.expect(TokenKind.PUNCT, "{")
        rules: list[Rule] = []
        minimize: MinimizeStatement | None = None
        while not self.cur.at(TokenKind.PUNCT, "}"):
            if self.cur.at(TokenKind.MINIMIZE):
                tok = self.cur.next()
                if minimize is not None:
                    raise SpecSyntaxError("at most one #minimize statement is allowed",
                                          tok.line, tok.col)
                self.cur.expect(TokenKind.PUNCT, "{")
                element = self.card_element()
                self.cur.expect(TokenKind.PUNCT, "}")
                self.cur.expect(TokenKind.PUNCT, ".")
                minimize = MinimizeStatement(element)
            else:
                rules.append(self.rule())
        self.cur.expect(TokenKind.PUNCT, "}")
        tok = self.cur.peek()
        if tok.kind is not TokenKind.EOF:
            raise SpecSyntaxError(f"unexpected {tok.text!r} after specification body",
                                  tok.line, tok.col)
        return SpecProgram(name=name_tok.text, params=tuple(params), rules=tuple(rules),
                           minimize=minimize, package=package, imports=tuple(imports))

    def param_decl(self) -> ParamDecl:
        type_tok = self.cur.expect(TokenKind.IDENT)
        if type_tok.text == "int":
            name = self.cur.expect(TokenKind.IDENT).text
            return ParamDecl(name, None)
        self.cur.expect(TokenKind.PUNCT, "[")
        self.cur.expect(TokenKind.PUNCT, "]")
        name = self.cur.expect(TokenKind.IDENT).text
        return ParamDecl(name, type_tok.text)

    # -- rules ---------------------------------------------------------------

    def rule(self) -> Rule:
        tok = self.cur.peek()
        head: object | None = None
        if not self.cur.at(TokenKind.PUNCT, ":-"):
            head = self.head()
        body: list = []
        if self.cur.accept(TokenKind.PUNCT, ":-"):
            if not self.cur.at(TokenKind.PUNCT, "."):
                body.append(self.body_literal())
                while self.cur.accept(TokenKind.PUNCT, ","):
                    body.append(self.body_literal())
        self.cur.expect(TokenKind.PUNCT, ".")
        if head is None and not body:
            raise SpecSyntaxError("a constraint needs a nonempty body", tok.line, tok.col)
        return Rule(head=head, body=tuple(body), line=tok.line)

    def head(self):
        if self.cur.accept(TokenKind.KEYWORD, "new"):
            cls = self.cur.expect(TokenKind.IDENT).text
            self.cur.expect(TokenKind.PUNCT, "(")
            terms = self.term_list()
            self.cur.expect(TokenKind.PUNCT, ")")
            return NewAtom(cls, terms)
        if self.cur.accept(TokenKind.KEYWORD, "exe"):
            stage = 0
            if self.cur.accept(TokenKind.PUNCT, "["):
                stage = int(self.cur.expect(TokenKind.INT).text)
                self.cur.expect(TokenKind.PUNCT, "]")
            target = self.cur.expect(TokenKind.VAR).text
            self.cur.expect(TokenKind.PUNCT, ".")
            method = self.cur.expect(TokenKind.IDENT).text
            self.cur.expect(TokenKind.PUNCT, "(")
            terms = self.term_list()
            self.cur.expect(TokenKind.PUNCT, ")")
            return ExeAtom(stage, target, method, terms)
        if self.cur.accept(TokenKind.KEYWORD, "return"):
            return ReturnAtom(self.cur.expect(TokenKind.VAR).text)
        if self.cur.at(TokenKind.PUNCT, "{"):
            return self.choice_or_card(head=True)
        # Either an ordinary atom or a lower-bounded choice; try the bound.
        mark = self.cur.pos
        try:
            lower = self.term()
            if self.cur.at(TokenKind.PUNCT, "{"):
                self.cur.pos = mark
                return self.choice_or_card(head=True)
        except SpecSyntaxError:
            pass
        self.cur.pos = mark
        return self.ordinary_atom()

    def choice_or_card(self, head: bool):
        lower = None
        if not self.cur.at(TokenKind.PUNCT, "{"):
            lower = self.term()
        self.cur.expect(TokenKind.PUNCT, "{")
        element = self.card_element()
        self.cur.expect(TokenKind.PUNCT, "}")
        upper = None
        if self.cur.peek().kind in (TokenKind.INT, TokenKind.VAR, TokenKind.IDENT):
            upper = self.term()
        cls = ChoiceHead if head else CardinalityLiteral
        return cls(lower, element, upper)

    def body_literal(self):
        tok = self.cur.peek()
        if self.cur.accept(TokenKind.KEYWORD, "not"):
            atom = self.negatable_atom()
            return Naf(atom)
        if tok.kind is TokenKind.VAR:
            if self.cur.peek(1).kind is TokenKind.OP and self.cur.peek(1).text == "=" \
                    and self.cur.peek(2).kind is TokenKind.PUNCT and self.cur.peek(2).text == "{":
                var = self.cur.next().text
                self.cur.next()  # "="
                self.cur.expect(TokenKind.PUNCT, "{")
                element = self.card_element()
                self.cur.expect(TokenKind.PUNCT, "}")
                return CountAssignment(var, element)
            if self.cur.peek(1).kind is TokenKind.IDENT \
                    and self.cur.peek(2).kind is TokenKind.PUNCT and self.cur.peek(2).text == "(":
                return self.membership_or_creation()
        if tok.kind is TokenKind.IDENT and self.cur.peek(1).kind is TokenKind.PUNCT \
                and self.cur.peek(1).text == "(":
            return self.ordinary_atom()
        if tok.kind is TokenKind.IDENT and tok.text not in self.scalar_params \
                and self.cur.peek(1).kind is TokenKind.PUNCT \
                and self.cur.peek(1).text in (",", "."):
            return self.ordinary_atom()  # 0-ary atom in a body
        if tok.kind is TokenKind.PUNCT and tok.text == "{":
            return self.choice_or_card(head=False)
        # A bare term: either a comparison or the lower bound of a cardinality.
        lhs = self.term()
        nxt = self.cur.peek()
        if nxt.kind is TokenKind.OP and nxt.text in COMPARISON_OPS:
            op = self.cur.next().text
            rhs = self.term()
            return Comparison(lhs, op, rhs)
        if nxt.kind is TokenKind.PUNCT and nxt.text == "{":
            self.cur.expect(TokenKind.PUNCT, "{")
            element = self.card_element()
            self.cur.expect(TokenKind.PUNCT, "}")
            upper = None
            if self.cur.peek().kind in (TokenKind.INT, TokenKind.VAR, TokenKind.IDENT):
                upper = self.term()
            return CardinalityLiteral(lhs, element, upper)
        if nxt.kind is TokenKind.IDENT and isinstance(lhs, VarTerm):
            raise SpecSyntaxError(f"cannot resolve {nxt.text!r}: not a declared array "
                                  "parameter or class reference", nxt.line, nxt.col)
        raise SpecSyntaxError(f"expected comparison or cardinality after term, found "
                              f"{nxt.text!r}", nxt.line, nxt.col)

    def negatable_atom(self):
        tok = self.cur.peek()
        if tok.kind is TokenKind.VAR:
            return self.membership_or_creation()
        if tok.kind is TokenKind.IDENT:
            return self.ordinary_atom()
        raise SpecSyntaxError("default negation applies only to ordinary atoms, "
                              "parameter membership, and creation references",
                              tok.line, tok.col)

    def membership_or_creation(self):
        var = self.cur.expect(TokenKind.VAR).text
        name = self.cur.expect(TokenKind.IDENT).text
        self.cur.expect(TokenKind.PUNCT, "(")
        if name in self.array_params:
            index = self.term()
            self.cur.expect(TokenKind.PUNCT, ")")
            return ParamMembership(var, name, index)
        terms = self.term_list()
        self.cur.expect(TokenKind.PUNCT, ")")
        return CreationRef(var, name, terms)

    def ordinary_atom(self) -> OrdinaryAtom:
        pred = self.cur.expect(TokenKind.IDENT).text
        terms: tuple[Term, ...] = ()
        if self.cur.accept(TokenKind.PUNCT, "("):
            terms = self.term_list()
            self.cur.expect(TokenKind.PUNCT, ")")
        return OrdinaryAtom(pred, terms)

    def card_element(self) -> CardElement:
        template = self.ordinary_atom()
        conditions = []
        while self.cur.accept(TokenKind.PUNCT, ":"):
            conditions.append(self.element_condition())
        return CardElement(template, tuple(conditions))

    def element_condition(self):
        tok = self.cur.peek()
        if tok.kind is TokenKind.VAR and self.cur.peek(1).kind is TokenKind.IDENT \
                and self.cur.peek(2).kind is TokenKind.PUNCT and self.cur.peek(2).text == "(":
            return self.membership_or_creation()
        if tok.kind is TokenKind.IDENT and self.cur.peek(1).kind is TokenKind.PUNCT \
                and self.cur.peek(1).text == "(":
            return self.ordinary_atom()
        if tok.kind is TokenKind.IDENT and tok.text not in self.scalar_params \
                and self.cur.peek(1).kind is TokenKind.PUNCT \
                and self.cur.peek(1).text in (":", "}"):
            return self.ordinary_atom()  # 0-ary atom condition
        lhs = self.term()
        op_tok = self.cur.peek()
        if op_tok.kind is TokenKind.OP and op_tok.text in COMPARISON_OPS:
            self.cur.next()
            rhs = self.term()
            return Comparison(lhs, op_tok.text, rhs)
        raise SpecSyntaxError(f"expected element condition, found {op_tok.text!r}",
                              op_tok.line, op_tok.col)

    # -- terms ----------------------------------------------------------------

    def term_list(self) -> tuple[Term, ...]:
        if self.cur.at(TokenKind.PUNCT, ")"):
            return ()
        terms = [self.term()]
        while self.cur.accept(TokenKind.PUNCT, ","):
            terms.append(self.term())
        return tuple(terms)

    def term(self) -> Term:
        left = self.term_primary()
        while self.cur.peek().kind is TokenKind.OP and self.cur.peek().text in ("+", "-"):
            op = self.cur.next().text
            right = self.term_primary()
            left = ArithTerm(left, op, right)
        return left

    def term_primary(self) -> Term:
        tok = self.cur.peek()
        if tok.kind is TokenKind.INT:
            self.cur.next()
            return IntTerm(int(tok.text))
        if tok.kind is TokenKind.ANON:
            self.cur.next()
            return AnonTerm()
        if tok.kind is TokenKind.VAR:
            self.cur.next()
            # "V?." only starts a method value when the full zero-argument
            # call pattern ".method()" follows; otherwise the dot is the
            # rule terminator.
            if self.cur.at(TokenKind.PUNCT, ".") \
                    and self.cur.peek(1).kind is TokenKind.IDENT \
                    and self.cur.peek(2).kind is TokenKind.PUNCT \
                    and self.cur.peek(2).text == "(" \
                    and self.cur.peek(3).kind is TokenKind.PUNCT \
                    and self.cur.peek(3).text == ")":
                self.cur.next()
                method = self.cur.expect(TokenKind.IDENT).text
                self.cur.expect(TokenKind.PUNCT, "(")
                self.cur.expect(TokenKind.PUNCT, ")")
                return MethodValueTerm(tok.text, method)
            return VarTerm(tok.text)
        if tok.kind is TokenKind.IDENT:
            self.cur.next()
            if tok.text in self.scalar_params:
                return ScalarRefTerm(tok.text)
            return SymbolTerm(tok.text)
        raise SpecSyntaxError(f"expected term, found {tok.text!r}", tok.line, tok.col)


def parse_spec(source: str) -> SpecProgram:
    """Parse specification source text into a :class:`SpecProgram`."""
    return _Parser(tokenize(source)).parse_spec()
