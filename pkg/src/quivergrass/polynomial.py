"""Sparse commutative polynomials over the rationals in indexed variables X_0, X_1, ..."""
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Tuple

Monomial = Tuple[Tuple[int, int], ...]  # sorted (variable, exponent) pairs, exponents > 0

ONE: Monomial = ()


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for v, e in b:
        d[v] = d.get(v, 0) + e
    return tuple(sorted(d.items()))


def mono_key(m: Monomial):
    """Sort key putting larger monomials first (graded lex, X_0 > X_1 > ...)."""
    return (-sum(e for _, e in m), tuple((v, -e) for v, e in m))


class Polynomial:
    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Monomial, Fraction] = None):
        self.terms: Dict[Monomial, Fraction] = {}
        if terms:
            for m, c in terms.items():
                if c:
                    self.terms[m] = Fraction(c)

    @classmethod
    def constant(cls, c) -> "Polynomial":
        return cls({ONE: Fraction(c)}) if c else cls()

    @classmethod
    def var(cls, i: int) -> "Polynomial":
        return cls({((i, 1),): Fraction(1)})

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(other)
        return isinstance(other, Polynomial) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            x = out.get(m, 0) + c
            if x:
                out[m] = x
            else:
                out.pop(m, None)
        p = Polynomial()
        p.terms = out
        return p

    __radd__ = __add__

    def __neg__(self):
        p = Polynomial()
        p.terms = {m: -c for m, c in self.terms.items()}
        return p

    def __sub__(self, other):
        return self + (-other if isinstance(other, Polynomial) else -Fraction(other))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return Polynomial()
            p = Polynomial()
            p.terms = {m: c * other for m, c in self.terms.items()}
            return p
        out: Dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                out[m] = out.get(m, 0) + c1 * c2
        return Polynomial(out)

    __rmul__ = __mul__

    def degree(self) -> int:
        return max((sum(e for _, e in m) for m in self.terms), default=-1)

    def variables(self) -> Iterable[int]:
        return sorted({v for m in self.terms for v, _ in m})

    def constant_term(self) -> Fraction:
        return self.terms.get(ONE, Fraction(0))

    def evaluate(self, values: Mapping[int, Fraction]) -> Fraction:
        total = Fraction(0)
        for m, c in self.terms.items():
            x = c
            for v, e in m:
                x *= values[v] ** e
                if not x:
                    break
            total += x
        return total

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: mono_key(t[0]))

    def to_text(self) -> str:
        """``coeff * X[i]^e * ... + ...`` with p/q coefficients; ``0`` for the zero polynomial."""
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            factors = [fraction_text(c)]
            for v, e in m:
                factors.append(f"X[{v}]" if e == 1 else f"X[{v}]^{e}")
            parts.append(" * ".join(factors))
        return " + ".join(parts)

    def to_json(self):
        return [[fraction_text(c), [[v, e] for v, e in m]] for m, c in self.sorted_terms()]

    @classmethod
    def from_json(cls, data) -> "Polynomial":
        return cls({tuple((int(v), int(e)) for v, e in m): Fraction(c) for c, m in data})

    def __repr__(self):
        return f"Polynomial({self.to_text()})"


def fraction_text(c: Fraction) -> str:
    """Exact ``p/q`` token; integers keep the ``/1`` so the format is uniform."""
    c = Fraction(c)
    return f"{c.numerator}/{c.denominator}"
