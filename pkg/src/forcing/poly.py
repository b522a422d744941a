"""Prime fields and sparse multivariate polynomials over them.

Polynomials are immutable maps from exponent tuples to nonzero residues.
The text format is ``c*x^a*y^b*z^c`` summed with ``+``/``-``; the printer
emits terms in graded-lex order (x1 > x2 > ...) and the parser also
accepts parentheses and ``**``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import product as _iproduct
from typing import Iterable, Mapping, Sequence

MAX_PRIME = 2**31 - 1

DEFAULT_VARIABLES = ("x", "y", "z")


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class PrimeField:
    p: int

    def __post_init__(self):
        if not isinstance(self.p, int) or not is_prime(self.p):
            raise ValueError("characteristic must be prime")
        if self.p > MAX_PRIME:
            raise ValueError(f"characteristic must be at most {MAX_PRIME}")

    def __call__(self, a: int) -> int:
        return a % self.p

    def inverse(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return pow(a, -1, self.p)

    def symmetric(self, a: int) -> int:
        """Representative of ``a`` in (-p/2, p/2]."""
        a %= self.p
        return a - self.p if a > self.p // 2 else a


def grlex_key(exps: Sequence[int]) -> tuple:
    """Sort key; larger key means larger monomial in graded lex order."""
    return (sum(exps), tuple(exps))


def monomials_of_degree(nvars: int, n: int) -> list[tuple[int, ...]]:
    """All exponent tuples of total degree n, in decreasing graded-lex order."""
    if n < 0:
        return []
    if nvars == 0:
        return [()] if n == 0 else []
    if nvars == 1:
        return [(n,)]
    out = []
    for a in range(n, -1, -1):
        for rest in monomials_of_degree(nvars - 1, n - a):
            out.append((a,) + rest)
    return out


class Poly:
    """Polynomial over GF(p) in ``nvars`` variables."""

    __slots__ = ("p", "nvars", "_terms", "_hash")

    def __init__(self, p: int, nvars: int, terms: Mapping[tuple, int] | None = None):
        self.p = p
        self.nvars = nvars
        clean: dict[tuple, int] = {}
        if terms:
            for e, c in terms.items():
                c %= p
                if c:
                    if len(e) != nvars:
                        raise ValueError(f"exponent {e} has wrong length for {nvars} variables")
                    clean[tuple(e)] = c
        self._terms = clean
        self._hash = None

    # construction -----------------------------------------------------
    @classmethod
    def zero(cls, p: int, nvars: int) -> "Poly":
        return cls(p, nvars)

    @classmethod
    def constant(cls, p: int, nvars: int, c: int = 1) -> "Poly":
        return cls(p, nvars, {(0,) * nvars: c})

    @classmethod
    def monomial(cls, p: int, exps: Sequence[int], c: int = 1) -> "Poly":
        return cls(p, len(exps), {tuple(exps): c})

    @classmethod
    def variable(cls, p: int, nvars: int, i: int) -> "Poly":
        e = [0] * nvars
        e[i] = 1
        return cls(p, nvars, {tuple(e): 1})

    @classmethod
    def parse(cls, text: str, p: int, variables: Sequence[str] = DEFAULT_VARIABLES) -> "Poly":
        return _Parser(text, p, tuple(variables)).parse()

    # basic accessors --------------------------------------------------
    @property
    def terms(self) -> Mapping[tuple, int]:
        return self._terms

    def items(self):
        return self._terms.items()

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def coefficient(self, exps: Sequence[int]) -> int:
        return self._terms.get(tuple(exps), 0)

    @property
    def degree(self) -> int | None:
        """Total degree, None for the zero polynomial."""
        if not self._terms:
            return None
        return max(sum(e) for e in self._terms)

    def is_homogeneous(self) -> bool:
        degs = {sum(e) for e in self._terms}
        return len(degs) <= 1

    def sorted_terms(self) -> list[tuple[tuple, int]]:
        return sorted(self._terms.items(), key=lambda t: grlex_key(t[0]), reverse=True)

    def leading_term(self) -> tuple[tuple, int]:
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        return max(self._terms.items(), key=lambda t: grlex_key(t[0]))

    # arithmetic --------------------------------------------------------
    def _check(self, other: "Poly") -> None:
        if self.p != other.p or self.nvars != other.nvars:
            raise ValueError("polynomials live in different rings")

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            self._check(other)
            return other
        if isinstance(other, int):
            return Poly.constant(self.p, self.nvars, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        t = dict(self._terms)
        for e, c in other._terms.items():
            t[e] = (t.get(e, 0) + c) % self.p
        return Poly(self.p, self.nvars, t)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.p, self.nvars, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return Poly(self.p, self.nvars, {e: c * other for e, c in self._terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.p
        t: dict[tuple, int] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                t[e] = (t.get(e, 0) + c1 * c2) % p
        return Poly(p, self.nvars, t)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative exponent")
        result = Poly.constant(self.p, self.nvars)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def frobenius(self, q: int) -> "Poly":
        """``self**q`` for q a power of p, computed as sum c*m^q."""
        return Poly(self.p, self.nvars, {tuple(a * q for a in e): c for e, c in self._terms.items()})

    def derivative(self, i: int) -> "Poly":
        t = {}
        for e, c in self._terms.items():
            if e[i]:
                e2 = list(e)
                e2[i] -= 1
                t[tuple(e2)] = c * e[i]
        return Poly(self.p, self.nvars, t)

    def power_truncated(self, k: int, bound: Sequence[int]) -> "Poly":
        """``self**k`` keeping only monomials with exponents <= bound.

        Exponents never decrease under multiplication, so dropped terms
        cannot contribute to kept ones.
        """
        p = self.p
        keep = lambda e: all(a <= b for a, b in zip(e, bound))  # noqa: E731
        base = {e: c for e, c in self._terms.items() if keep(e)}
        result = {(0,) * self.nvars: 1}
        for _ in range(k):
            nxt: dict[tuple, int] = {}
            for e1, c1 in result.items():
                for e2, c2 in base.items():
                    e = tuple(a + b for a, b in zip(e1, e2))
                    if keep(e):
                        nxt[e] = (nxt.get(e, 0) + c1 * c2) % p
            result = {e: c for e, c in nxt.items() if c}
        return Poly(p, self.nvars, result)

    # comparison ---------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, int):
            other = Poly.constant(self.p, self.nvars, other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.p == other.p and self.nvars == other.nvars and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.p, self.nvars, frozenset(self._terms.items())))
        return self._hash

    # printing -----------------------------------------------------------
    def to_str(self, variables: Sequence[str] = DEFAULT_VARIABLES) -> str:
        if not self._terms:
            return "0"
        if len(variables) < self.nvars:
            raise ValueError("not enough variable names")
        parts = []
        for e, c in self.sorted_terms():
            c = c - self.p if c > self.p // 2 else c
            sign = "-" if c < 0 else "+"
            c = abs(c)
            factors = []
            for name, a in zip(variables, e):
                if a == 1:
                    factors.append(name)
                elif a > 1:
                    factors.append(f"{name}^{a}")
            if c != 1 or not factors:
                factors.insert(0, str(c))
            parts.append((sign, "*".join(factors)))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __str__(self):
        names = DEFAULT_VARIABLES if self.nvars <= 3 else tuple(f"x{i + 1}" for i in range(self.nvars))
        return self.to_str(names)

    def __repr__(self):
        return f"Poly({self!s}, p={self.p})"


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*^()]))")


class _Parser:
    def __init__(self, text: str, p: int, variables: tuple[str, ...]):
        self.text = text
        self.p = p
        self.variables = variables
        self.index = {v: i for i, v in enumerate(variables)}
        self.tokens = self._tokenize(text)
        self.pos = 0

    def _tokenize(self, text):
        tokens = []
        i = 0
        text = text.rstrip()
        while i < len(text):
            m = _TOKEN.match(text, i)
            if not m or m.end() == i:
                raise ValueError(f"cannot parse polynomial {text!r} at position {i}")
            num, name, op = m.groups()
            if num is not None:
                tokens.append(("num", int(num)))
            elif name is not None:
                if name not in self.index:
                    raise ValueError(f"unknown variable {name!r} in {text!r}")
                tokens.append(("var", self.index[name]))
            else:
                tokens.append(("op", "^" if op == "**" else op))
            i = m.end()
        return tokens

    def _peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else (None, None)

    def _take(self):
        tok = self._peek()
        self.pos += 1
        return tok

    def _fail(self, what):
        raise ValueError(f"cannot parse polynomial {self.text!r}: {what}")

    def parse(self) -> Poly:
        if not self.tokens:
            self._fail("empty expression")
        poly = self._expr()
        if self.pos != len(self.tokens):
            self._fail(f"unexpected token {self._peek()[1]!r}")
        return poly

    def _expr(self):
        kind, val = self._peek()
        if kind == "op" and val in "+-":
            self._take()
            acc = self._term()
            if val == "-":
                acc = -acc
        else:
            acc = self._term()
        while True:
            kind, val = self._peek()
            if kind == "op" and val in "+-":
                self._take()
                t = self._term()
                acc = acc + t if val == "+" else acc - t
            else:
                return acc

    def _term(self):
        acc = self._factor()
        while self._peek() == ("op", "*"):
            self._take()
            acc = acc * self._factor()
        return acc

    def _factor(self):
        kind, val = self._peek()
        if kind == "op" and val == "-":
            self._take()
            return -self._factor()
        base = self._atom()
        if self._peek() == ("op", "^"):
            self._take()
            kind, exp = self._take()
            if kind != "num":
                self._fail("exponent must be a nonnegative integer")
            base = base**exp
        return base

    def _atom(self):
        kind, val = self._take()
        n = len(self.variables)
        if kind == "num":
            return Poly.constant(self.p, n, val)
        if kind == "var":
            return Poly.variable(self.p, n, val)
        if (kind, val) == ("op", "("):
            inner = self._expr()
            if self._take() != ("op", ")"):
                self._fail("missing ')'")
            return inner
        self._fail(f"unexpected token {val!r}")


def parse_many(texts: Iterable[str], p: int, variables: Sequence[str] = DEFAULT_VARIABLES) -> list[Poly]:
    return [Poly.parse(t, p, variables) for t in texts]


def dense_power_coefficients(poly: Poly, k: int) -> dict[tuple, int]:
    """Brute-force multinomial expansion of ``poly**k`` over the integers, reduced mod p.

    Kept independent of ``Poly.__pow__`` so it can serve as an oracle.
    """
    terms = list(poly.items())
    out: dict[tuple, int] = {}
    for choice in _iproduct(range(len(terms)), repeat=k):
        e = [0] * poly.nvars
        c = 1
        for idx in choice:
            te, tc = terms[idx]
            c *= tc
            for i, a in enumerate(te):
                e[i] += a
        out[tuple(e)] = (out.get(tuple(e), 0) + c) % poly.p
    return {e: c for e, c in out.items() if c}
