# Pratt-style parser for polynomial expressions in x and y.
# Precedence (highest -> lowest):
#   ^          right associative, exponent must be a constant
#   prefix -, +
#   *, /       division only by nonzero constants
#   +, -
# Literals: non-negative integers. A rational p/q is the constant p divided by q, so
# x^4/2 halves x^4 and a fractional exponent needs parentheses: x^(3/2).

import re
from fractions import Fraction

from algebra.poly import Polynomial
from errors import DivisionByVariable, FractionalYExponent, NegativeExponent, ParseError

TOK_REGEX = re.compile(
    r"""\s*(?:
    (?P<number>\d+)|
    (?P<op>[()+\-*/^])|
    (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
    )""", re.VERBOSE
)

BP = {
    "+": 10, "-": 10,
    "*": 20, "/": 20,
    "^": 40,
}
PREFIX_BP = 30


class Lexer:
    def __init__(self, text):
        self.text = text or ""
        self.tokens = []
        pos = 0
        while pos < len(self.text):
            if self.text[pos:].strip() == "":
                break
            m = TOK_REGEX.match(self.text, pos)
            if not m or m.end(0) == pos:
                start = pos + len(self.text[pos:]) - len(self.text[pos:].lstrip())
                raise ParseError(f"unexpected character {self.text[start]!r}", position=start)
            kind = m.lastgroup
            start = m.start(kind)
            value = m.group(kind)
            if kind == "ident" and value not in ("x", "y"):
                raise ParseError(f"unknown identifier {value!r}", position=start)
            self.tokens.append((kind, value, start))
            pos = m.end(0)
        self.tokens.append(("eof", None, len(self.text)))
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def pop(self, kind=None, value=None):
        tok = self.peek()
        if (kind and tok[0] != kind) or (value and tok[1] != value):
            expected = value or kind
            raise ParseError(f"expected {expected!r}", position=tok[2])
        self.i += 1
        return tok


def _constant_value(p):
    if p.is_zero():
        return Fraction(0)
    if p.support() == {(0, 0)}:
        return p.coefficient(0, 0)
    return None


def _power(base, exponent, position):
    if exponent < 0:
        raise NegativeExponent(f"negative exponent {exponent}", position=position)
    if exponent.denominator == 1:
        return base ** int(exponent)
    # fractional powers are only defined for bare powers of x
    terms = base.terms
    if any(t.by for t in terms):
        raise FractionalYExponent("fractional exponent applied to an expression in y", position=position)
    if len(terms) != 1 or terms[0].coeff != 1:
        raise ParseError("fractional exponent needs a bare power of x as its base", position=position)
    return Polynomial.monomial(1, terms[0].ax * exponent, 0)


class Parser:
    def __init__(self, text):
        self.lx = Lexer(text)

    def parse(self):
        if self.lx.peek()[0] == "eof":
            raise ParseError("empty expression", position=0)
        expr = self.parse_bp(0)
        tok = self.lx.peek()
        if tok[0] != "eof":
            raise ParseError(f"unexpected trailing token {tok[1]!r}", position=tok[2])
        return expr

    def nud(self, tok):
        kind, value, pos = tok
        if kind == "number":
            return Polynomial.constant(Fraction(value))
        if kind == "ident":
            return Polynomial.x() if value == "x" else Polynomial.y()
        if kind == "op" and value == "(":
            e = self.parse_bp(0)
            self.lx.pop("op", ")")
            return e
        if kind == "op" and value in ("+", "-"):
            operand = self.parse_bp(PREFIX_BP)
            return -operand if value == "-" else operand
        if kind == "eof":
            raise ParseError("unexpected end of expression", position=pos)
        raise ParseError(f"unexpected token {value!r}", position=pos)

    def led(self, left, tok):
        _, op, pos = tok
        if op == "^":
            exp_pos = self.lx.peek()[2]
            right = self.parse_bp(BP[op])
            exponent = _constant_value(right)
            if exponent is None:
                raise ParseError("exponent must be a constant", position=exp_pos)
            return _power(left, exponent, exp_pos)
        right = self.parse_bp(BP[op] + 1)
        if op == "+":
            return left + right
        if op == "-":
            return left - right
        if op == "*":
            return left * right
        divisor = _constant_value(right)
        if divisor is None:
            raise DivisionByVariable("division by an expression containing x or y", position=pos)
        if divisor == 0:
            raise ParseError("division by zero", position=pos)
        return left * (1 / divisor)

    def parse_bp(self, min_bp):
        left = self.nud(self.lx.pop())
        while True:
            kind, value, pos = self.lx.peek()
            if kind == "eof" or kind != "op" or value not in BP:
                if kind in ("number", "ident") or (kind == "op" and value == "("):
                    raise ParseError("missing operator (write products with '*')", position=pos)
                break
            lbp = BP[value]
            # '^' is right associative: an equal binding power keeps folding to the right
            if lbp < min_bp or (lbp == min_bp and value != "^"):
                break
            self.lx.pop()
            left = self.led(left, (kind, value, pos))
        return left


def parse(text):
    """Parse text into a Polynomial; errors carry the character offset."""
    return Parser(text).parse()
