"""Univariate polynomials and rational functions over the rationals in one parameter t."""
import re
from fractions import Fraction
from typing import List, Sequence, Tuple


class UPoly:
    """Coefficient list, lowest degree first, no trailing zeros."""

    __slots__ = ("c",)

    def __init__(self, coeffs: Sequence = ()):
        c = [Fraction(x) for x in coeffs]
        while c and not c[-1]:
            c.pop()
        self.c: Tuple[Fraction, ...] = tuple(c)

    @classmethod
    def const(cls, x) -> "UPoly":
        return cls([x])

    @classmethod
    def t(cls) -> "UPoly":
        return cls([0, 1])

    def __bool__(self):
        return bool(self.c)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = UPoly.const(other)
        return isinstance(other, UPoly) and self.c == other.c

    def __hash__(self):
        return hash(self.c)

    @property
    def degree(self) -> int:
        return len(self.c) - 1

    def valuation(self) -> int:
        """Order of vanishing at 0 (-1 for the zero polynomial)."""
        for i, x in enumerate(self.c):
            if x:
                return i
        return -1

    def lead(self) -> Fraction:
        return self.c[-1] if self.c else Fraction(0)

    def __add__(self, other):
        if not isinstance(other, UPoly):
            other = UPoly.const(other)
        n = max(len(self.c), len(other.c))
        a = list(self.c) + [Fraction(0)] * (n - len(self.c))
        for i, x in enumerate(other.c):
            a[i] += x
        return UPoly(a)

    __radd__ = __add__

    def __neg__(self):
        return UPoly([-x for x in self.c])

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, UPoly):
            other = Fraction(other)
            if not other:
                return UPoly()
            return UPoly([x * other for x in self.c])
        if not self.c or not other.c:
            return UPoly()
        out = [Fraction(0)] * (len(self.c) + len(other.c) - 1)
        for i, x in enumerate(self.c):
            if x:
                for j, y in enumerate(other.c):
                    if y:
                        out[i + j] += x * y
        return UPoly(out)

    __rmul__ = __mul__

    def __call__(self, x) -> Fraction:
        acc = Fraction(0)
        for coef in reversed(self.c):
            acc = acc * x + coef
        return acc

    def divmod(self, other: "UPoly"):
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.c)
        q = [Fraction(0)] * max(len(rem) - len(other.c) + 1, 0)
        lead = other.c[-1]
        while len(rem) >= len(other.c) and any(rem):
            shift = len(rem) - len(other.c)
            f = rem[-1] / lead
            q[shift] = f
            for i, y in enumerate(other.c):
                rem[shift + i] -= f * y
            rem.pop()
            while rem and not rem[-1]:
                rem.pop()
        return UPoly(q), UPoly(rem)

    def monic(self) -> "UPoly":
        return self * (1 / self.lead()) if self.c else self

    def shift_down(self, k: int) -> "UPoly":
        """Divide by t^k, assuming exact divisibility."""
        if any(self.c[:k]):
            raise ArithmeticError("not divisible by the requested power of t")
        return UPoly(self.c[k:])

    def reversed_to(self, d: int) -> "UPoly":
        """t^d · f(1/t) for d ≥ degree."""
        c = list(self.c) + [Fraction(0)] * (d + 1 - len(self.c))
        return UPoly(list(reversed(c)))

    def compose_linear(self, a, b) -> "UPoly":
        """f(a·t + b)."""
        lin = UPoly([b, a])
        acc = UPoly()
        for coef in reversed(self.c):
            acc = acc * lin + coef
        return acc

    def text(self, var: str = "t") -> str:
        if not self.c:
            return "0"
        parts = []
        for i in range(len(self.c) - 1, -1, -1):
            x = self.c[i]
            if not x:
                continue
            mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
            coef = f"{x.numerator}/{x.denominator}"
            parts.append(coef if not mono else f"{coef}*{mono}")
        return " + ".join(parts)

    def __repr__(self):
        return f"UPoly({self.text()})"


def poly_gcd(a: UPoly, b: UPoly) -> UPoly:
    while b:
        a, b = b, a.divmod(b)[1]
    return a.monic() if a else UPoly.const(1)


class RationalFunction:
    """num/den in lowest terms with monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        num = num if isinstance(num, UPoly) else UPoly.const(num)
        den = UPoly.const(1) if den is None else (den if isinstance(den, UPoly) else UPoly.const(den))
        if not den:
            raise ZeroDivisionError("rational function with zero denominator")
        g = poly_gcd(num, den) if num else den
        num = num.divmod(g)[0]
        den = den.divmod(g)[0]
        lc = den.lead()
        self.num = num * (1 / lc)
        self.den = den * (1 / lc)

    @classmethod
    def const(cls, x) -> "RationalFunction":
        return cls(UPoly.const(x))

    def __bool__(self):
        return bool(self.num)

    def __eq__(self, other):
        if not isinstance(other, RationalFunction):
            other = RationalFunction(other) if isinstance(other, (UPoly, int, Fraction)) else None
        return other is not None and self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def _lift(self, other):
        return other if isinstance(other, RationalFunction) else RationalFunction(other)

    def __add__(self, other):
        o = self._lift(other)
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __mul__(self, other):
        o = self._lift(other)
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if not o:
            raise ZeroDivisionError("division by the zero rational function")
        return RationalFunction(self.num * o.den, self.den * o.num)

    def __pow__(self, k: int):
        out = RationalFunction.const(1)
        base = self if k >= 0 else RationalFunction.const(1) / self
        for _ in range(abs(k)):
            out = out * base
        return out

    def __call__(self, x) -> Fraction:
        return self.num(x) / self.den(x)

    def compose_linear(self, a, b) -> "RationalFunction":
        return RationalFunction(self.num.compose_linear(a, b), self.den.compose_linear(a, b))

    def text(self, var: str = "t") -> str:
        if self.den == UPoly.const(1):
            return f"({self.num.text(var)})"
        return f"({self.num.text(var)})/({self.den.text(var)})"

    def __repr__(self):
        return f"RationalFunction{self.text()}"


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_]\w*)|(.))")


def parse_rational_function(text: str, var: str = "t") -> RationalFunction:
    """Parse literals such as ``(3*t^2+1)/(t)``, ``-2``, ``1/2*t``."""
    tokens = []
    for m in _TOKEN.finditer(text):
        num, name, sym = m.groups()
        if num is not None:
            tokens.append(("num", int(num)))
        elif name is not None:
            if name not in (var, "tau"):
                raise ValueError(f"unknown symbol {name!r} in {text!r}")
            tokens.append(("var", name))
        elif sym is not None and not sym.isspace():
            tokens.append(("sym", sym))
    pos = [0]

    def peek():
        return tokens[pos[0]] if pos[0] < len(tokens) else (None, None)

    def take():
        tok = peek()
        pos[0] += 1
        return tok

    def expr():
        val = term()
        while peek() in (("sym", "+"), ("sym", "-")):
            op = take()[1]
            rhs = term()
            val = val + rhs if op == "+" else val - rhs
        return val

    def term():
        val = factor()
        while peek() in (("sym", "*"), ("sym", "/")):
            op = take()[1]
            rhs = factor()
            val = val * rhs if op == "*" else val / rhs
        return val

    def factor():
        if peek() == ("sym", "-"):
            take()
            return -factor()
        if peek() == ("sym", "+"):
            take()
            return factor()
        base = atom()
        if peek() == ("sym", "^"):
            take()
            kind, k = take()
            if kind != "num":
                raise ValueError(f"bad exponent in {text!r}")
            base = base ** k
        return base

    def atom():
        kind, val = take()
        if kind == "num":
            return RationalFunction.const(val)
        if kind == "var":
            return RationalFunction(UPoly.t())
        if (kind, val) == ("sym", "("):
            inner = expr()
            if take() != ("sym", ")"):
                raise ValueError(f"unbalanced parentheses in {text!r}")
            return inner
        raise ValueError(f"unexpected token {val!r} in {text!r}")

    out = expr()
    if pos[0] != len(tokens):
        raise ValueError(f"trailing input in {text!r}")
    return out
