"""Field towers: Q or F_p, cyclotomic steps, then rational-function steps."""
from __future__ import annotations

import ast
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from math import lcm

from ..errors import CharDividesOrder, DuplicateVariable, NonzeroValuation, ZeroInput
from . import poly as P
from .base import AlgebraicField, CycElt, Fp
from .ratfunc import RatFunc

_FIELD_CACHE: dict = {}


def algebraic_field(p: int, N: int) -> AlgebraicField:
    key = (p, N if p or N % 2 == 0 or N == 1 else 2 * N)
    K = _FIELD_CACHE.get(key)
    if K is None:
        K = AlgebraicField(p, N)
        _FIELD_CACHE[key] = K
    return K


class FieldTower:
    """K(t_1, ..., t_k) with K = Q(zeta_N) or F_p(zeta_N).

    Without variables the elements are bare K elements (Fraction, Fp or
    CycElt); otherwise every element is a RatFunc.
    """

    def __init__(self, p: int = 0, N: int = 1, vars=()):
        vars = tuple(vars)
        if len(set(vars)) != len(vars):
            raise DuplicateVariable(f"duplicate variable in {vars}")
        for v in vars:
            if v.startswith("zeta") or not v.isidentifier():
                raise ValueError(f"bad variable name {v!r}")
        self.K = algebraic_field(p, N)
        self.p = p
        self.vars = vars
        self.nvars = len(vars)
        self._one_poly = {(0,) * self.nvars: self.K.one}
        if self.nvars:
            self.one = RatFunc(self._one_poly, self._one_poly, self, True)
            self.zero = RatFunc({}, self._one_poly, self, True)
        else:
            self.one = self.K.one
            self.zero = self.K.zero

    # -- identity ---------------------------------------------------------------
    @property
    def key(self):
        return (self.p, self.K.N, self.vars)

    def __eq__(self, o):
        return isinstance(o, FieldTower) and o.key == self.key

    def __hash__(self):
        return hash(self.key)

    @property
    def characteristic(self) -> int:
        return self.p

    def __repr__(self):
        base = repr(self.K)
        if self.vars:
            return f"{base}({','.join(self.vars)})"
        return base

    def describe(self) -> dict:
        base = "Q" if not self.p else {"Fp": self.p}
        steps = []
        if self.K.N > 2 or (self.p and self.K.N > 1):
            steps.append({"zeta": self.K.N})
        steps += [{"var": v} for v in self.vars]
        return {"base": base, "steps": steps}

    # -- construction -----------------------------------------------------------
    def extend(self, new_vars) -> "FieldTower":
        return FieldTower(self.p, self.K.N, self.vars + tuple(new_vars))

    def with_zeta(self, n: int) -> "FieldTower":
        if self.p and n % self.p == 0:
            raise CharDividesOrder(f"characteristic {self.p} divides {n}")
        return FieldTower(self.p, lcm(self.K.N, n), self.vars)

    def drop(self, names) -> "FieldTower":
        return FieldTower(self.p, self.K.N, [v for v in self.vars if v not in names])

    def contains(self, other: "FieldTower") -> bool:
        return (other.p == self.p and self.K.has_zeta(other.K.N)
                and set(other.vars) <= set(self.vars))

    # -- elements -----------------------------------------------------------------
    def _embed_k(self, x):
        """Map an element of some cyclotomic field into self.K."""
        if isinstance(x, CycElt):
            if x.K is self.K:
                return x
            src = x.K
            if src.p != self.p:
                raise TypeError("characteristic mismatch")
            z = self.K.zeta(src.N)
            if src.modulus is not None:
                # the image of the source generator must satisfy its modulus
                acc = self.K.zero
                for c in reversed(src.modulus):
                    acc = acc * z + self.K.embed_prime(c)
                if acc:
                    raise TypeError("incompatible cyclotomic embeddings")
            out = self.K.zero
            zk = self.K.one
            for c in x.c:
                if c:
                    out = out + zk * self.K.embed_prime(c)
                zk = zk * z
            return out
        return self.K(x)

    def __call__(self, x):
        if isinstance(x, str):
            return self.parse(x)
        if isinstance(x, RatFunc):
            if x.T is self or x.T.key == self.key:
                return x
            return self._from_ratfunc(x)
        if isinstance(x, bool):
            x = int(x)
        c = self._embed_k(x)
        if not self.nvars:
            return c
        if not c:
            return self.zero
        return RatFunc({(0,) * self.nvars: c}, self._one_poly, self, True)

    def _from_ratfunc(self, x: RatFunc):
        idx = []
        for v in x.T.vars:
            if v not in self.vars:
                raise TypeError(f"variable {v} not in {self}")
            idx.append(self.vars.index(v))

        def remap(p):
            out = {}
            for m, c in p.items():
                e = [0] * self.nvars
                for k, d in zip(idx, m):
                    e[k] = d
                out[tuple(e)] = self._embed_k(c)
            return out

        if not self.nvars:
            return self._embed_k(x.constant_value())
        return RatFunc(remap(x.num), remap(x.den), self, normalized=False)

    def var(self, name: str):
        k = self.vars.index(name)
        e = [0] * self.nvars
        e[k] = 1
        return RatFunc({tuple(e): self.K.one}, self._one_poly, self, True)

    def monomial(self, exps, coeff=None):
        """coeff * t^exps; exponents may be negative."""
        c = self.K.one if coeff is None else self._embed_k(coeff)
        pos = tuple(max(e, 0) for e in exps)
        neg = tuple(max(-e, 0) for e in exps)
        if not self.nvars:
            return c
        if not c:
            return self.zero
        return RatFunc({pos: c}, {neg: self.K.one}, self, True)

    def zeta(self, n: int):
        return self(self.K.zeta(n))

    def is_element(self, x) -> bool:
        if self.nvars:
            return isinstance(x, RatFunc) and x.T.key == self.key
        return self.K.is_element(x)

    def constant_value(self, x):
        """The K-part of a constant element, or None."""
        if isinstance(x, RatFunc):
            return x.constant_value()
        return x

    def numer_denom(self, x):
        if isinstance(x, RatFunc):
            return x.num, x.den
        return P.const(x, self.nvars), self._one_poly

    # -- powers and roots ---------------------------------------------------------
    def nth_root(self, x, m: int):
        """Some y in the tower with y^m = x, or None."""
        x = self(x)
        if not self.nvars:
            return self.K.nth_root(x, m)
        if not x:
            return self.zero
        rn = _poly_nth_root(x.num, m, self.K)
        if rn is None:
            return None
        rd = _poly_nth_root(x.den, m, self.K)
        if rd is None:
            return None
        return RatFunc(rn, rd, self)

    def is_power(self, x, m: int) -> bool:
        return self.nth_root(x, m) is not None

    # -- text ---------------------------------------------------------------------
    def format(self, x) -> str:
        if not isinstance(x, RatFunc):
            return self.K.format(self.K(x))
        names = self.vars
        num = P.to_str(x.num, names, self.K.format, self.K.is_compound)
        if x.is_polynomial():
            return num
        den = P.to_str(x.den, names, self.K.format, self.K.is_compound)
        if len(x.num) > 1 or num.startswith("-") or self.K.is_compound(next(iter(x.num.values()))):
            num = f"({num})"
        if len(x.den) > 1 or "*" in den:
            den = f"({den})"
        return f"{num}/{den}"

    def parse(self, s: str):
        try:
            tree = ast.parse(str(s).replace("^", "**"), mode="eval")
        except SyntaxError as exc:
            from ..errors import ParseError

            raise ParseError(f"cannot parse scalar {s!r}", exc.offset) from None
        return self._eval(tree.body, s)

    def _eval(self, node, src):
        from ..errors import ParseError

        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return self(node.value)
        if isinstance(node, ast.Name):
            if node.id in self.vars:
                return self.var(node.id)
            if node.id.startswith("zeta") and node.id[4:].isdigit():
                return self.zeta(int(node.id[4:]))
            raise ParseError(f"unknown name {node.id!r} in {src!r}", node.col_offset)
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = self._eval(node.operand, src)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp):
            if isinstance(node.op, ast.Pow):
                e = node.right
                sign = 1
                if isinstance(e, ast.UnaryOp) and isinstance(e.op, ast.USub):
                    sign, e = -1, e.operand
                if not (isinstance(e, ast.Constant) and isinstance(e.value, int)):
                    raise ParseError(f"non-integer exponent in {src!r}", node.col_offset)
                return self._eval(node.left, src) ** (sign * e.value)
            a = self._eval(node.left, src)
            b = self._eval(node.right, src)
            if isinstance(node.op, ast.Add):
                return a + b
            if isinstance(node.op, ast.Sub):
                return a - b
            if isinstance(node.op, ast.Mult):
                return a * b
            if isinstance(node.op, ast.Div):
                if not b:
                    raise ParseError(f"division by zero in {src!r}", node.col_offset)
                return a / b
        raise ParseError(f"unsupported syntax in {src!r}", getattr(node, "col_offset", None))

    # -- randomness (test and property-suite support) ------------------------------
    def random_constant(self, rng, height: int = 3, nonzero: bool = False):
        while True:
            cs = [rng.randint(-height, height) for _ in range(self.K.degree)]
            c = self.K.from_coefficients(cs)
            if c or not nonzero:
                return self(c)

    def random_element(self, rng, height: int = 3, terms: int = 2, degree: int = 2,
                       fraction: bool = True, nonzero: bool = False):
        while True:
            x = self._random_poly(rng, height, terms, degree)
            if fraction and self.nvars and rng.random() < 0.3:
                d = self._random_poly(rng, height, 2, 1)
                if d:
                    x = x / d
            if x or not nonzero:
                return x

    def _random_poly(self, rng, height, terms, degree):
        x = self.zero
        for _ in range(rng.randint(1, terms)):
            e = [rng.randint(0, degree) for _ in range(self.nvars)]
            x = x + self.monomial(e, self.K.from_coefficients(
                [rng.randint(-height, height) for _ in range(self.K.degree)]))
        return x


def build_tower(spec) -> FieldTower:
    """Tower from {"base": "Q" | {"Fp": p}, "steps": [{"zeta": n} | {"var": name}]}."""
    base = spec.get("base", "Q")
    if base == "Q":
        p = 0
    elif isinstance(base, dict) and "Fp" in base:
        p = int(base["Fp"])
        import sympy

        if not sympy.isprime(p):
            raise ValueError(f"{p} is not prime")
    else:
        raise ValueError(f"unknown base field {base!r}")
    N = 1
    vars = []
    for step in spec.get("steps", []):
        if "zeta" in step:
            n = int(step["zeta"])
            if n < 1:
                raise ValueError("zeta order must be positive")
            if p and n % p == 0:
                raise CharDividesOrder(f"characteristic {p} divides {n}")
            N = lcm(N, n)
        elif "var" in step:
            v = step["var"]
            if v in vars:
                raise DuplicateVariable(f"variable {v} declared twice")
            vars.append(v)
        else:
            raise ValueError(f"unknown tower step {step!r}")
    return FieldTower(p, N, vars)


# ---------------------------------------------------------------------------
# exponent vectors and the monomial valuation

@total_ordering
@dataclass(frozen=True)
class ExponentVector:
    """Element of (1/n_1)Z x ... x (1/n_r)Z stored as integer numerators."""

    num: tuple
    den: tuple = None

    def __post_init__(self):
        if self.den is None:
            object.__setattr__(self, "den", (1,) * len(self.num))
        if len(self.den) != len(self.num):
            raise ValueError("numerator/denominator length mismatch")

    @classmethod
    def zero(cls, r, den=None):
        return cls((0,) * r, den)

    def fractions(self):
        return tuple(Fraction(a, b) for a, b in zip(self.num, self.den))

    def _rescale(self, den):
        return tuple(a * (d // b) for a, b, d in zip(self.num, self.den, den))

    def _common(self, o):
        if self.den == o.den:
            return self.num, o.num, self.den
        den = tuple(lcm(a, b) for a, b in zip(self.den, o.den))
        return self._rescale(den), o._rescale(den), den

    def __add__(self, o):
        a, b, den = self._common(o)
        return ExponentVector(tuple(x + y for x, y in zip(a, b)), den)

    def __neg__(self):
        return ExponentVector(tuple(-x for x in self.num), self.den)

    def __sub__(self, o):
        return self + (-o)

    def __eq__(self, o):
        if not isinstance(o, ExponentVector):
            return NotImplemented
        return self.fractions() == o.fractions()

    def __hash__(self):
        return hash(self.fractions())

    def __lt__(self, o):
        # right-to-left lexicographic: the last coordinate is most significant
        a, b, _ = self._common(o)
        return tuple(reversed(a)) < tuple(reversed(b))

    def residue_class(self):
        """Image in (1/n_1)Z/Z x ... as numerators mod denominators."""
        return tuple(a % b for a, b in zip(self.num, self.den))

    def is_zero(self) -> bool:
        return not any(self.num)

    def to_json(self):
        return [str(f) for f in self.fractions()]

    def __str__(self):
        return "(" + ", ".join(str(f) for f in self.fractions()) + ")"

    __repr__ = __str__


def _rtl_key(e):
    return tuple(reversed(e))


def _var_indices(T: FieldTower, vars):
    if vars is None:
        return list(range(T.nvars))
    return [T.vars.index(v) for v in vars]


def _poly_min(p, idx):
    """Minimal projected exponent of a polynomial and the terms attaining it."""
    best = None
    for m in p:
        e = tuple(m[k] for k in idx)
        if best is None or _rtl_key(e) < _rtl_key(best):
            best = e
    part = {}
    for m, c in p.items():
        if tuple(m[k] for k in idx) == best:
            mm = list(m)
            for k in idx:
                mm[k] = 0
            part[tuple(mm)] = c
    return best, part


def monomial_valuation(T: FieldTower, x, vars=None) -> ExponentVector:
    """The (t_1,...,t_r)-adic valuation, right-to-left lex, over the chosen variables."""
    if not x:
        raise ZeroInput("valuation of zero")
    idx = _var_indices(T, vars)
    if not isinstance(x, RatFunc):
        return ExponentVector.zero(len(idx))
    a, _ = _poly_min(x.num, idx)
    b, _ = _poly_min(x.den, idx)
    return ExponentVector(tuple(i - j for i, j in zip(a, b)))


def leading_part(T: FieldTower, x, vars=None):
    """(valuation, leading coefficient) with the coefficient in the tower without vars."""
    if not x:
        raise ZeroInput("leading part of zero")
    idx = _var_indices(T, vars)
    names = [T.vars[k] for k in idx]
    sub = T.drop(names)
    if not isinstance(x, RatFunc):
        return ExponentVector.zero(len(idx)), sub(x)
    a, pa = _poly_min(x.num, idx)
    b, pb = _poly_min(x.den, idx)
    keep = [k for k in range(T.nvars) if k not in idx]

    def proj(p):
        return {tuple(m[k] for k in keep): c for m, c in p.items()}

    if sub.nvars:
        coeff = RatFunc(proj(pa), proj(pb), sub)
    else:
        coeff = proj(pa)[()] / proj(pb)[()]
    return ExponentVector(tuple(i - j for i, j in zip(a, b))), coeff


def residue_at_zero(T: FieldTower, x, vars=None):
    """Residue of a valuation-zero element; lies in the tower without vars."""
    v, c = leading_part(T, x, vars)
    if not v.is_zero():
        raise NonzeroValuation(f"valuation of {T.format(x)} is {v}, not zero")
    return c


# ---------------------------------------------------------------------------

def _poly_nth_root(p, m, K):
    """Some polynomial r with r^m = p, or None (characteristic must not divide m)."""
    if not p:
        return {}
    if K.p and m % K.p == 0:
        raise CharDividesOrder(f"root of order {m} in characteristic {K.p}")
    lm, lc = P.leading(p)
    if any(e % m for e in lm):
        return None
    c = K.nth_root(lc, m)
    if c is None:
        return None
    n = len(lm)
    r = {tuple(e // m for e in lm): c}
    mindeg = min(sum(e) for e in p)
    lead_r = r
    denom = P.scale(P.power(lead_r, m - 1, n), K(m))
    (dm, dc), = denom.items()
    for _ in range(sum(lm) * len(p) + 2):
        rem = P.sub(p, P.power(r, m, n))
        if not rem:
            return r
        em, ec = P.leading(rem)
        q = tuple(a - b for a, b in zip(em, dm))
        if min(q) < 0 or sum(q) * m < mindeg:
            return None
        r = P.add(r, {q: ec / dc})
    return None
