"""Tokenizer and recursive-descent parser for the input script language.

Statements (each terminated by ';' except the braced declarations):

    base { p = 2; pbasis = [t]; }
    ring A = unramified(2);
    ring B = eisenstein(2, E = pi^2 - p);
    scheme X over A { vars [x]; eqs [ x^2 - teich(t)^2 ]; }
    elem g = teich(t) + p;
    witt add (1,0) (1,0);            cohen extract (0,t);
    greenberg X --stage 0 --out out.json;
    point push X (teich(t));         point pull X (0, 1, 0);
    units level g;                   units ppow-solve g --n 1;
    selftest --seed 42;

Expressions use integer literals, the declared p-basis names, the symbols
``p`` and ``pi`` (ring context), ``teich(..)``, previously declared element
names, scheme variables (inside eqs), and the operators + - * / ^ with the
usual precedence.  Parse errors carry line and column.
"""

import re

from .errors import ParseError

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<comment>\#[^\n]*)
  | (?P<flag>--[A-Za-z][A-Za-z0-9_-]*)
  | (?P<string>"[^"\n]*")
  | (?P<int>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<punct>[{}\[\]();,=^+\-*/])
    """,
    re.VERBOSE,
)


class Token:
    __slots__ = ("kind", "value", "line", "col")

    def __init__(self, kind, value, line, col):
        self.kind = kind
        self.value = value
        self.line = line
        self.col = col

    def __repr__(self):
        return f"Token({self.kind}, {self.value!r}, {self.line}:{self.col})"


def tokenize(text):
    tokens = []
    line, col = 1, 1
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(line, col, "a token", text[pos])
        kind = m.lastgroup
        value = m.group()
        if kind not in ("ws", "comment"):
            if kind == "punct":
                kind = value
            tokens.append(Token(kind, value, line, col))
        newlines = value.count("\n")
        if newlines:
            line += newlines
            col = len(value) - value.rfind("\n")
        else:
            col += len(value)
        pos = m.end()
    tokens.append(Token("eof", "", line, col))
    return tokens


class Parser:
    def __init__(self, text):
        self.tokens = tokenize(text)
        self.pos = 0

    # -- token plumbing ------------------------------------------------------

    def peek(self, offset=0):
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def next(self):
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def expect(self, kind, value=None):
        tok = self.peek()
        if tok.kind != kind or (value is not None and tok.value != value):
            want = value if value is not None else kind
            raise ParseError(tok.line, tok.col, repr(want), tok.value or "end of input")
        return self.next()

    def accept(self, kind, value=None):
        tok = self.peek()
        if tok.kind == kind and (value is None or tok.value == value):
            return self.next()
        return None

    def keyword(self):
        return self.expect("ident").value

    # -- grammar ---------------------------------------------------------------

    def parse_script(self):
        statements = []
        while self.peek().kind != "eof":
            statements.append(self.parse_statement())
        return statements

    def parse_statement(self):
        tok = self.peek()
        if tok.kind != "ident":
            raise ParseError(tok.line, tok.col, "a statement keyword", tok.value)
        word = tok.value
        if word == "base":
            return self.parse_base()
        if word == "ring":
            return self.parse_ring()
        if word == "scheme":
            return self.parse_scheme()
        if word == "elem":
            return self.parse_elem()
        if word in ("witt", "cohen", "greenberg", "point", "units", "selftest"):
            return self.parse_command()
        raise ParseError(tok.line, tok.col, "a statement keyword", word)

    def parse_base(self):
        self.expect("ident", "base")
        self.expect("{")
        self.expect("ident", "p")
        self.expect("=")
        p = int(self.expect("int").value)
        self.expect(";")
        self.expect("ident", "pbasis")
        self.expect("=")
        self.expect("[")
        names = []
        if self.peek().kind == "ident":
            names.append(self.keyword())
            while self.accept(","):
                names.append(self.keyword())
        self.expect("]")
        self.expect(";")
        self.expect("}")
        return ("base", {"p": p, "names": names})

    def parse_ring(self):
        self.expect("ident", "ring")
        name = self.keyword()
        self.expect("=")
        kind = self.keyword()
        tok = self.peek()
        if kind == "unramified":
            self.expect("(")
            m = int(self.expect("int").value)
            self.expect(")")
            self.expect(";")
            return ("ring", {"name": name, "kind": "unramified", "m": m})
        if kind == "eisenstein":
            self.expect("(")
            m = int(self.expect("int").value)
            self.expect(",")
            self.expect("ident", "E")
            self.expect("=")
            expr = self.parse_expr()
            self.expect(")")
            self.expect(";")
            return ("ring", {"name": name, "kind": "eisenstein", "m": m, "E": expr})
        raise ParseError(tok.line, tok.col, "'unramified' or 'eisenstein'", kind)

    def parse_scheme(self):
        self.expect("ident", "scheme")
        name = self.keyword()
        self.expect("ident", "over")
        ring = self.keyword()
        self.expect("{")
        self.expect("ident", "vars")
        self.expect("[")
        variables = [self.keyword()]
        while self.accept(","):
            variables.append(self.keyword())
        self.expect("]")
        self.expect(";")
        self.expect("ident", "eqs")
        self.expect("[")
        eqs = []
        if self.peek().kind != "]":
            eqs.append(self.parse_expr())
            while self.accept(","):
                eqs.append(self.parse_expr())
        self.expect("]")
        self.expect(";")
        self.expect("}")
        return (
            "scheme",
            {"name": name, "ring": ring, "vars": variables, "eqs": eqs},
        )

    def parse_elem(self):
        self.expect("ident", "elem")
        name = self.keyword()
        self.expect("=")
        expr = self.parse_expr()
        ring = None
        if self.peek().kind == "ident" and self.peek().value == "over":
            self.next()
            ring = self.keyword()
        self.expect(";")
        return ("elem", {"name": name, "expr": expr, "ring": ring})

    def parse_command(self):
        head = self.keyword()
        if head == "selftest":
            flags = self.parse_flags()
            self.expect(";")
            return ("cmd", {"kind": "selftest", "flags": flags})
        if head == "greenberg":
            scheme = self.keyword()
            flags = self.parse_flags()
            self.expect(";")
            return ("cmd", {"kind": "greenberg", "scheme": scheme, "flags": flags})
        if head == "point":
            sub = self.keyword()
            tok = self.peek()
            if sub not in ("push", "pull"):
                raise ParseError(tok.line, tok.col, "'push' or 'pull'", sub)
            scheme = self.keyword()
            vector = self.parse_vector()
            flags = self.parse_flags()
            self.expect(";")
            return (
                "cmd",
                {"kind": f"point.{sub}", "scheme": scheme, "vector": vector, "flags": flags},
            )
        if head == "witt":
            sub = self.keyword()
            ops = {"add": 2, "mul": 2, "neg": 1, "v": 1, "f": 1}
            if sub == "ghost":
                r = int(self.expect("int").value)
                vec = self.parse_vector()
                flags = self.parse_flags()
                self.expect(";")
                return ("cmd", {"kind": "witt.ghost", "r": r, "vectors": [vec], "flags": flags})
            if sub == "teich":
                expr = self.parse_expr()
                flags = self.parse_flags()
                self.expect(";")
                return ("cmd", {"kind": "witt.teich", "expr": expr, "flags": flags})
            if sub not in ops:
                tok = self.peek()
                raise ParseError(tok.line, tok.col, "a witt operation", sub)
            vectors = [self.parse_vector() for _ in range(ops[sub])]
            flags = self.parse_flags()
            self.expect(";")
            return ("cmd", {"kind": f"witt.{sub}", "vectors": vectors, "flags": flags})
        if head == "cohen":
            sub = self.keyword()
            ops = {"add": 2, "mul": 2, "extract": 1, "embed": 1, "pdiv": 1, "residue": 1}
            if sub not in ops:
                tok = self.peek()
                raise ParseError(tok.line, tok.col, "a cohen operation", sub)
            vectors = [self.parse_vector() for _ in range(ops[sub])]
            flags = self.parse_flags()
            self.expect(";")
            return ("cmd", {"kind": f"cohen.{sub}", "vectors": vectors, "flags": flags})
        if head == "units":
            tok = self.peek()
            sub = self.keyword()
            if sub == "ppow":
                self.expect("-")
                self.expect("ident", "solve")
                sub = "ppow-solve"
            if sub not in ("level", "ppow-solve"):
                raise ParseError(tok.line, tok.col, "'level' or 'ppow-solve'", sub)
            expr = self.parse_expr()
            flags = self.parse_flags()
            self.expect(";")
            return ("cmd", {"kind": f"units.{sub}", "expr": expr, "flags": flags})
        tok = self.peek()
        raise ParseError(tok.line, tok.col, "a command", head)

    def parse_vector(self):
        self.expect("(")
        entries = [self.parse_expr()]
        while self.accept(","):
            entries.append(self.parse_expr())
        self.expect(")")
        return entries

    def parse_flags(self):
        flags = {}
        while self.peek().kind == "flag":
            name = self.next().value[2:]
            tok = self.peek()
            if tok.kind == "int":
                flags[name] = int(self.next().value)
            elif tok.kind == "ident":
                flags[name] = self.next().value
            elif tok.kind == "string":
                flags[name] = self.next().value[1:-1]
            else:
                raise ParseError(tok.line, tok.col, "a flag value", tok.value)
        return flags

    # -- expressions -----------------------------------------------------------

    def parse_expr(self):
        node = self.parse_term()
        while True:
            if self.accept("+"):
                node = ("bin", "+", node, self.parse_term())
            elif self.accept("-"):
                node = ("bin", "-", node, self.parse_term())
            else:
                return node

    def parse_term(self):
        node = self.parse_factor()
        while True:
            if self.accept("*"):
                node = ("bin", "*", node, self.parse_factor())
            elif self.accept("/"):
                node = ("bin", "/", node, self.parse_factor())
            else:
                return node

    def parse_factor(self):
        if self.accept("-"):
            return ("neg", self.parse_factor())
        node = self.parse_atom()
        if self.accept("^"):
            exp = int(self.expect("int").value)
            node = ("pow", node, exp)
        return node

    def parse_atom(self):
        tok = self.peek()
        if tok.kind == "int":
            self.next()
            return ("int", int(tok.value))
        if tok.kind == "ident":
            name = self.next().value
            if self.peek().kind == "(":
                self.next()
                args = [self.parse_expr()]
                while self.accept(","):
                    args.append(self.parse_expr())
                self.expect(")")
                return ("call", name, args)
            return ("name", name)
        if tok.kind == "(":
            self.next()
            node = self.parse_expr()
            self.expect(")")
            return node
        raise ParseError(tok.line, tok.col, "an expression", tok.value or "end of input")


def parse(text):
    """Parse a script into its statement list."""
    return Parser(text).parse_script()
