"""Sparse multivariate polynomials over an exact coefficient ring.

The variable universe is fixed and tiny: four projective variables
x0..x3 followed by four formal parameters u, v, w, t.  Exponent vectors
are dense length-8 tuples; polynomials are dicts mapping exponent tuples
to nonzero coefficients.  Parameters are ordinary variables of the same
polynomial type, so "coefficients in ZZ[t]" is just a ZZ-polynomial whose
support touches the parameter slots.

Canonical term order is graded lexicographic with x0 < x1 < x2 < x3 <
u < v < w < t; printing and matrix row ordering both use it, so output is
deterministic and parse/print round-trips exactly on canonical form.
"""

from __future__ import annotations

from math import gcd

from .rings import GF, NotDivisible, ZZ

NVARS = 8
VAR_NAMES = ("x0", "x1", "x2", "x3", "u", "v", "w", "t")
VAR_INDEX = {name: i for i, name in enumerate(VAR_NAMES)}
PROJECTIVE = (0, 1, 2, 3)
PARAMS = (4, 5, 6, 7)

_ZERO_EXP = (0,) * NVARS


def _grlex_key(exp):
    # Ties broken reading from the largest variable (t) downward.
    return (sum(exp), exp[::-1])


class MPoly:
    """Immutable sparse polynomial; do not mutate `terms` after creation."""

    __slots__ = ("ring", "terms")

    def __init__(self, terms: dict, ring):
        self.ring = ring
        self.terms = terms

    # -- constructors -------------------------------------------------

    @staticmethod
    def zero(ring=ZZ) -> "MPoly":
        return MPoly({}, ring)

    @staticmethod
    def constant(c, ring=ZZ) -> "MPoly":
        c = ring.coerce(c)
        return MPoly({} if ring.is_zero(c) else {_ZERO_EXP: c}, ring)

    @staticmethod
    def variable(i: int, ring=ZZ) -> "MPoly":
        exp = tuple(1 if j == i else 0 for j in range(NVARS))
        return MPoly({exp: ring.one}, ring)

    @staticmethod
    def from_terms(pairs, ring=ZZ) -> "MPoly":
        terms = {}
        for exp, c in pairs:
            exp = tuple(exp)
            c = ring.coerce(c)
            if exp in terms:
                c = ring.add(terms[exp], c)
            if ring.is_zero(c):
                terms.pop(exp, None)
            else:
                terms[exp] = c
        return MPoly(terms, ring)

    # -- predicates and views -----------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and _ZERO_EXP in self.terms)

    def constant_value(self):
        """The ring value of a constant polynomial."""
        if not self.terms:
            return self.ring.zero
        if not self.is_constant():
            raise ValueError(f"not a constant polynomial: {self}")
        return self.terms[_ZERO_EXP]

    def support_indices(self) -> set[int]:
        used = set()
        for exp in self.terms:
            for i in range(NVARS):
                if exp[i]:
                    used.add(i)
        return used

    def sorted_terms(self):
        """Terms in descending graded-lex order."""
        return sorted(self.terms.items(), key=lambda kv: _grlex_key(kv[0]), reverse=True)

    def leading(self):
        """(exponent, coefficient) of the graded-lex leading term."""
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        exp = max(self.terms, key=_grlex_key)
        return exp, self.terms[exp]

    def degree(self, variables=None) -> int:
        """Max total degree over the given variable subset (-1 for zero)."""
        if not self.terms:
            return -1
        if variables is None:
            return max(sum(e) for e in self.terms)
        return max(sum(e[i] for i in variables) for e in self.terms)

    def homogeneous_degree(self, variables=None):
        """Common total degree over the subset, or None if inhomogeneous."""
        if not self.terms:
            raise ValueError("zero polynomial has no homogeneity degree")
        variables = range(NVARS) if variables is None else variables
        degs = {sum(e[i] for i in variables) for e in self.terms}
        return degs.pop() if len(degs) == 1 else None

    # -- ring helpers --------------------------------------------------

    def _check(self, other: "MPoly"):
        if self.ring != other.ring:
            raise ValueError(f"ring mismatch: {self.ring} vs {other.ring}")

    def _wrap(self, other) -> "MPoly":
        if isinstance(other, MPoly):
            self._check(other)
            return other
        return MPoly.constant(other, self.ring)

    # -- arithmetic -----------------------------------------------------

    def __add__(self, other):
        other = self._wrap(other)
        ring = self.ring
        big, small = (self.terms, other.terms) if len(self.terms) >= len(other.terms) else (other.terms, self.terms)
        out = dict(big)
        for exp, c in small.items():
            s = ring.add(out.get(exp, ring.zero), c)
            if ring.is_zero(s):
                out.pop(exp, None)
            else:
                out[exp] = s
        return MPoly(out, ring)

    __radd__ = __add__

    def __neg__(self):
        ring = self.ring
        return MPoly({e: ring.neg(c) for e, c in self.terms.items()}, ring)

    def __sub__(self, other):
        return self + (-self._wrap(other))

    def __rsub__(self, other):
        return self._wrap(other) - self

    def __mul__(self, other):
        if not isinstance(other, MPoly):
            return self.scale(other)
        self._check(other)
        ring = self.ring
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                exp = tuple(a + b for a, b in zip(e1, e2))
                c = ring.mul(c1, c2)
                if exp in out:
                    c = ring.add(out[exp], c)
                if ring.is_zero(c):
                    out.pop(exp, None)
                else:
                    out[exp] = c
        return MPoly(out, ring)

    __rmul__ = __mul__

    def scale(self, c) -> "MPoly":
        ring = self.ring
        c = ring.coerce(c)
        if ring.is_zero(c):
            return MPoly({}, ring)
        return MPoly({e: ring.mul(v, c) for e, v in self.terms.items()}, ring)

    def shift(self, exp) -> "MPoly":
        """Multiply by a single monomial x^exp."""
        exp = tuple(exp)
        return MPoly({tuple(a + b for a, b in zip(e, exp)): c for e, c in self.terms.items()}, self.ring)

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result = MPoly.constant(self.ring.one, self.ring)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, MPoly):
            return self.ring == other.ring and self.terms == other.terms
        if self.is_constant():
            try:
                return self.ring.eq(self.constant_value(), self.ring.coerce(other))
            except TypeError:
                return NotImplemented
        return NotImplemented

    def __hash__(self):
        return hash((self.ring, frozenset(self.terms.items())))

    # -- calculus and substitution ---------------------------------------

    def partial(self, i: int) -> "MPoly":
        """Formal partial derivative with respect to variable i."""
        ring = self.ring
        out = {}
        for exp, c in self.terms.items():
            e = exp[i]
            if e == 0:
                continue
            nexp = exp[:i] + (e - 1,) + exp[i + 1:]
            nc = ring.mul(c, ring.coerce(e))
            if not ring.is_zero(nc):
                out[nexp] = ring.add(out[nexp], nc) if nexp in out else nc
        return MPoly(out, ring)

    def subst(self, assignments: dict) -> "MPoly":
        """Simultaneous substitution variable index -> MPoly or scalar."""
        ring = self.ring
        values = {}
        for i, val in assignments.items():
            values[i] = val if isinstance(val, MPoly) else MPoly.constant(val, ring)
            if values[i].ring != ring:
                raise ValueError("substituted value in a different ring")
        out = MPoly.zero(ring)
        powers: dict = {}
        for exp, c in self.terms.items():
            kept = tuple(0 if i in values else exp[i] for i in range(NVARS))
            piece = MPoly({kept: c}, ring)
            for i, val in values.items():
                e = exp[i]
                if e == 0:
                    continue
                key = (i, e)
                if key not in powers:
                    powers[key] = val ** e
                piece = piece * powers[key]
            out = out + piece
        return out

    def subst_linear(self, matrix, variables) -> "MPoly":
        """Linear change of coordinates: variables[j] -> sum_k matrix[j][k]*variables[k]."""
        ring = self.ring
        images = {}
        for j, vj in enumerate(variables):
            img = MPoly.zero(ring)
            for k, vk in enumerate(variables):
                img = img + MPoly.variable(vk, ring).scale(matrix[j][k])
            images[vj] = img
        return self.subst(images)

    def map_coefficients(self, fn, new_ring) -> "MPoly":
        out = {}
        for exp, c in self.terms.items():
            nc = fn(c)
            if not new_ring.is_zero(nc):
                out[exp] = nc
        return MPoly(out, new_ring)

    def to_gf(self, ring: GF) -> "MPoly":
        """Reduce an integer polynomial mod p."""
        if self.ring is not ZZ:
            raise ValueError("to_gf expects a ZZ polynomial")
        return self.map_coefficients(lambda c: c % ring.p, ring)

    # -- exact division ----------------------------------------------------

    def exact_div(self, den: "MPoly") -> "MPoly":
        """Exact quotient self/den, or raise NotDivisible.

        Graded-lex long division with a divisibility check at every step;
        quotients in this pipeline are exact by construction, so failure
        signals a bug (or a non-generic input) rather than a rounding case.
        """
        den = self._wrap(den)
        if den.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        ring = self.ring
        dexp, dc = den.leading()
        rem = self
        qterms: dict = {}
        while not rem.is_zero():
            rexp, rc = rem.leading()
            qexp = tuple(a - b for a, b in zip(rexp, dexp))
            if any(e < 0 for e in qexp) or not ring.divides(dc, rc):
                raise NotDivisible(f"leading term {rc}*{rexp} not divisible by {dc}*{dexp}")
            qc = ring.exact_div(rc, dc)
            qterms[qexp] = qc
            rem = rem - den.shift(qexp).scale(qc)
        return MPoly(qterms, ring)

    def content_primitive(self):
        """(content, primitive part) over ZZ; primitive part has positive lead."""
        if self.ring is not ZZ:
            raise ValueError("content is defined for ZZ polynomials")
        if self.is_zero():
            raise ValueError("zero polynomial has no content")
        g = 0
        for c in self.terms.values():
            g = gcd(g, c)
        if self.leading()[1] < 0:
            g = -g
        return g, MPoly({e: c // g for e, c in self.terms.items()}, ZZ)

    # -- splitting for matrix assembly ----------------------------------

    def coefficients_on(self, variables) -> dict:
        """Group terms by their monomial in `variables`.

        Returns {restricted exponent tuple: coefficient}, where each
        coefficient is an MPoly in the remaining variables (parameters).
        Raises if the polynomial touches a projective variable outside
        `variables`.
        """
        varset = set(variables)
        for i in PROJECTIVE:
            if i not in varset and any(e[i] for e in self.terms):
                raise ValueError(f"polynomial involves {VAR_NAMES[i]} outside {variables}")
        out: dict = {}
        for exp, c in self.terms.items():
            key = tuple(exp[i] for i in variables)
            rest = tuple(0 if i in varset else exp[i] for i in range(NVARS))
            bucket = out.setdefault(key, {})
            bucket[rest] = self.ring.add(bucket[rest], c) if rest in bucket else c
        return {k: MPoly({e: c for e, c in v.items() if not self.ring.is_zero(c)}, self.ring)
                for k, v in out.items()}

    # -- printing --------------------------------------------------------

    def __str__(self):
        if not self.terms:
            return "0"
        ring = self.ring
        parts = []
        for exp, c in self.sorted_terms():
            mono = "*".join(
                VAR_NAMES[i] if exp[i] == 1 else f"{VAR_NAMES[i]}^{exp[i]}"
                for i in range(NVARS) if exp[i]
            )
            cs = ring.fmt(c)
            neg = cs.startswith("-")
            if neg:
                cs = cs[1:]
            if mono and cs == "1":
                body = mono
            elif mono:
                body = f"{cs}*{mono}"
            else:
                body = cs
            if not parts:
                parts.append(f"-{body}" if neg else body)
            else:
                parts.append(f" - {body}" if neg else f" + {body}")
        return "".join(parts)

    def __repr__(self):
        return f"MPoly({self}, {self.ring})"


# ---------------------------------------------------------------------------
# Parser: signed integer coefficients, optional '*', '^' powers, parentheses,
# variables x0..x3 u v w t; whitespace-insensitive.
# ---------------------------------------------------------------------------


class PolyParseError(ValueError):
    pass


def _tokenize(s: str):
    tokens = []
    i, n = 0, len(s)
    while i < n:
        c = s[i]
        if c.isspace():
            i += 1
        elif c in "+-*^()":
            tokens.append(c)
            i += 1
        elif c.isdigit():
            j = i
            while j < n and s[j].isdigit():
                j += 1
            tokens.append(int(s[i:j]))
            i = j
        elif c.isalpha():
            j = i + 1
            while j < n and s[j].isdigit():
                j += 1
            name = s[i:j]
            if name not in VAR_INDEX:
                raise PolyParseError(f"unknown variable {name!r}")
            tokens.append(name)
            i = j
        else:
            raise PolyParseError(f"unexpected character {c!r}")
    return tokens


class _Parser:
    def __init__(self, tokens, ring):
        self.tokens = tokens
        self.pos = 0
        self.ring = ring

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def parse_expr(self) -> MPoly:
        result = self.parse_term()
        while self.peek() in ("+", "-"):
            op = self.take()
            rhs = self.parse_term()
            result = result + rhs if op == "+" else result - rhs
        return result

    def parse_term(self) -> MPoly:
        result = self.parse_factor()
        while True:
            tok = self.peek()
            if tok == "*":
                self.take()
                result = result * self.parse_factor()
            elif isinstance(tok, (int, str)) and tok not in ("+", "-", "*", "^", ")"):
                # implicit multiplication: 3x0, x0x1, 2(x0+x1)
                result = result * self.parse_factor()
            elif tok == "(":
                result = result * self.parse_factor()
            else:
                return result

    def parse_factor(self) -> MPoly:
        tok = self.peek()
        if tok in ("+", "-"):
            self.take()
            f = self.parse_factor()
            return f if tok == "+" else -f
        base = self.parse_atom()
        if self.peek() == "^":
            self.take()
            e = self.take()
            if not isinstance(e, int):
                raise PolyParseError("exponent must be a nonnegative integer")
            return base ** e
        return base

    def parse_atom(self) -> MPoly:
        tok = self.take()
        if tok is None:
            raise PolyParseError("unexpected end of input")
        if isinstance(tok, int):
            return MPoly.constant(tok, self.ring)
        if tok == "(":
            inner = self.parse_expr()
            if self.take() != ")":
                raise PolyParseError("unbalanced parentheses")
            return inner
        if isinstance(tok, str) and tok in VAR_INDEX:
            return MPoly.variable(VAR_INDEX[tok], self.ring)
        raise PolyParseError(f"unexpected token {tok!r}")


def parse_poly(s: str, ring=ZZ) -> MPoly:
    parser = _Parser(_tokenize(s), ring)
    result = parser.parse_expr()
    if parser.peek() is not None:
        raise PolyParseError(f"trailing input at token {parser.peek()!r}")
    return result


def poly(s: str, ring=ZZ) -> MPoly:
    """Shorthand used throughout the tests."""
    return parse_poly(s, ring)


X0 = MPoly.variable(0)
X1 = MPoly.variable(1)
X2 = MPoly.variable(2)
X3 = MPoly.variable(3)
U = MPoly.variable(4)
V = MPoly.variable(5)
W = MPoly.variable(6)
T = MPoly.variable(7)
