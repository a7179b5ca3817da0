"""Exact Laurent polynomials in v and X with integer coefficients.

Conventions (see CONVENTIONS.md): v^2 = q and X = q^(-s), so a monomial
v^a X^b evaluates to q^(a/2 - s*b).  Specializing s to a half-integer
folds X into v; numeric evaluation substitutes q > 1 and complex s.
"""

from __future__ import annotations

import cmath
from fractions import Fraction


class Laurent:
    """Immutable-by-convention {(v_exp, x_exp): int} with exact arithmetic."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {
            (int(a), int(b)): int(c) for (a, b), c in (terms or {}).items() if c != 0
        }

    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def one(cls):
        return cls({(0, 0): 1})

    @classmethod
    def term(cls, coeff: int, v: int = 0, x: int = 0):
        return cls({(v, x): coeff})

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, int):
            other = Laurent({(0, 0): other})
        return isinstance(other, Laurent) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        if isinstance(other, int):
            other = Laurent({(0, 0): other})
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return Laurent(out)

    __radd__ = __add__

    def __neg__(self):
        return Laurent({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, int):
            other = Laurent({(0, 0): other})
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            if other == 0:
                return Laurent()
            return Laurent({k: c * other for k, c in self.terms.items()})
        out = {}
        for (a1, b1), c1 in self.terms.items():
            for (a2, b2), c2 in other.terms.items():
                k = (a1 + a2, b1 + b2)
                out[k] = out.get(k, 0) + c1 * c2
        return Laurent(out)

    __rmul__ = __mul__

    def shift(self, v: int = 0, x: int = 0):
        """Multiply by the monomial v^v X^x."""
        if not v and not x:
            return self
        return Laurent({(a + v, b + x): c for (a, b), c in self.terms.items()})

    def monomial_inverse(self):
        """Inverse of a single +-1 monomial (used for unitriangular solves)."""
        if len(self.terms) != 1:
            raise ValueError(f"not a monomial: {self}")
        ((a, b), c) = next(iter(self.terms.items()))
        if c not in (1, -1):
            raise ValueError(f"unit coefficient required: {self}")
        return Laurent({(-a, -b): c})

    def specialize_x(self, s: Fraction):
        """Fold X into v at s (half-integral): X^b -> v^(-2 s b)."""
        s = Fraction(s)
        out = {}
        for (a, b), c in self.terms.items():
            e = a - 2 * s * b
            if e.denominator != 1:
                raise ValueError(f"specialization at {s} leaves fractional v-power")
            k = (int(e), 0)
            out[k] = out.get(k, 0) + c
        return Laurent(out)

    def eval_complex(self, q: float, s: complex) -> complex:
        """Substitute v = sqrt(q), X = q^(-s)."""
        lq = cmath.log(q)
        total = 0j
        for (a, b), c in self.terms.items():
            total += c * cmath.exp(lq * (a / 2.0 - s * b))
        return total

    def x_support(self):
        return sorted({b for (_, b) in self.terms})

    def __str__(self):
        if not self.terms:
            return "0"
        def mono(a, b, c):
            factors = []
            if abs(c) != 1 or (a == 0 and b == 0):
                factors.append(str(abs(c)))
            if a:
                factors.append("v" if a == 1 else f"v^{a}")
            if b:
                factors.append("X" if b == 1 else f"X^{b}")
            return "*".join(factors)

        keys = sorted(self.terms, key=lambda k: (k[1], k[0]), reverse=True)
        parts = []
        for i, k in enumerate(keys):
            c = self.terms[k]
            text = mono(*k, c)
            if i == 0:
                parts.append(text if c > 0 else "-" + text)
            else:
                parts.append(("+ " if c > 0 else "- ") + text)
        return " ".join(parts)

    __repr__ = __str__

    def to_json(self):
        return [[a, b, self.terms[(a, b)]] for (a, b) in sorted(self.terms)]

    @classmethod
    def from_json(cls, obj):
        return cls({(int(a), int(b)): int(c) for a, b, c in obj})
