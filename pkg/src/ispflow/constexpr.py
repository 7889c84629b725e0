"""Exact constants ring.

A ``ConstExpr`` is a Laurent polynomial in a fixed set of transcendental
generators with Gaussian-rational coefficients.  The generators are treated
as algebraically independent; nothing is ever rewritten between them except
through explicit substitution.  All symbolic derivations in this package
(running-coupling tables, beta transseries, cross-sector expansions) use
this ring as their coefficient field, so every printed table entry is exact.

Generators
----------
pi      : the circle constant
gamma   : Euler-Mascheroni constant
zeta3.. : odd zeta values zeta(3) through zeta(19)
K       : half-tangent of the shifted phase shift, (1/2) tan(delta + pi/4)
n       : level label (odd integer 2b+1 on branch b), kept formal
L       : (1/pi) ln(Lambda_IR / p)
lam     : ln(Lambda / p), used by the scattering phase condition
shat    : the momentum ratio p / Lambda_IR, formal in the cross-sector map

Polygamma values psi^(2k)(1) are display-only; they are stored in the
zeta basis via psi^(m)(1) = (-1)^(m+1) m! zeta(m+1).
"""

from __future__ import annotations

import json
from fractions import Fraction
from math import factorial

import mpmath as mp

GENERATORS = ("pi", "gamma", "zeta3", "zeta5", "zeta7", "zeta9", "zeta11",
              "zeta13", "zeta15", "zeta17", "zeta19", "K", "n", "L", "lam",
              "shat")
_GIDX = {g: i for i, g in enumerate(GENERATORS)}
_NGEN = len(GENERATORS)
_ZERO_EXP = (0,) * _NGEN

# zeta generators by odd argument, for the psi display map
_ZETA_ARG = {"zeta3": 3, "zeta5": 5, "zeta7": 7, "zeta9": 9, "zeta11": 11,
             "zeta13": 13, "zeta15": 15, "zeta17": 17, "zeta19": 19}


class GRat:
    """Gaussian rational ``re + im*i`` with exact Fraction parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = re if isinstance(re, Fraction) else Fraction(re)
        self.im = im if isinstance(im, Fraction) else Fraction(im)

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        other = as_grat(other)
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __add__(self, other):
        other = as_grat(other)
        return GRat(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return GRat(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-as_grat(other))

    def __rsub__(self, other):
        return as_grat(other) + (-self)

    def __mul__(self, other):
        other = as_grat(other)
        return GRat(self.re * other.re - self.im * other.im,
                    self.re * other.im + self.im * other.re)

    __rmul__ = __mul__

    def inverse(self):
        d = self.re * self.re + self.im * self.im
        if not d:
            raise ZeroDivisionError("inverse of zero Gaussian rational")
        return GRat(self.re / d, -self.im / d)

    def __truediv__(self, other):
        return self * as_grat(other).inverse()

    def conjugate(self):
        return GRat(self.re, -self.im)

    def __repr__(self):
        if not self.im:
            return str(self.re)
        return f"({self.re}{'+' if self.im >= 0 else '-'}{abs(self.im)}i)"

    def to_mp(self):
        return mp.mpc(mp.mpf(self.re.numerator) / self.re.denominator,
                      mp.mpf(self.im.numerator) / self.im.denominator)


def as_grat(x) -> GRat:
    if isinstance(x, GRat):
        return x
    if isinstance(x, (int, Fraction)):
        return GRat(x)
    raise TypeError(f"cannot coerce {type(x).__name__} to Gaussian rational")


ONE_G = GRat(1)
I_G = GRat(0, 1)


class ConstExpr:
    """Exact Laurent polynomial over the generator set with GRat coefficients.

    Stored in canonical form: a dict mapping exponent vectors (tuples over
    GENERATORS, negative powers allowed) to nonzero GRat coefficients.
    Equality is structural on this form.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        if terms is None:
            terms = {}
        self.terms = {e: c for e, c in terms.items() if c}

    # -- constructors -------------------------------------------------

    @classmethod
    def number(cls, re, im=0) -> "ConstExpr":
        c = GRat(re, im)
        return cls({_ZERO_EXP: c}) if c else cls()

    @classmethod
    def generator(cls, name: str, power: int = 1) -> "ConstExpr":
        e = [0] * _NGEN
        e[_GIDX[name]] = power
        return cls({tuple(e): ONE_G})

    @classmethod
    def monomial(cls, coef, **powers) -> "ConstExpr":
        e = [0] * _NGEN
        for name, p in powers.items():
            e[_GIDX[name]] = p
        c = coef if isinstance(coef, GRat) else GRat(coef)
        return cls({tuple(e): c}) if c else cls()

    @classmethod
    def zero(cls) -> "ConstExpr":
        return cls()

    @classmethod
    def one(cls) -> "ConstExpr":
        return cls.number(1)

    @classmethod
    def psi(cls, m: int, coef=1) -> "ConstExpr":
        """psi^(m)(1) for even m >= 2, stored as a zeta-basis monomial."""
        if m % 2 or m < 2 or m > 18:
            raise ValueError(f"psi^({m})(1) not supported")
        zeta_name = f"zeta{m + 1}"
        factor = Fraction((-1) ** (m + 1) * factorial(m))
        return cls.monomial(GRat(factor) * as_grat(coef), **{zeta_name: 1})

    # -- predicates ----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_number(self) -> bool:
        return all(e == _ZERO_EXP for e in self.terms)

    def as_grat(self) -> GRat:
        if not self.terms:
            return GRat(0)
        if not self.is_number():
            raise ValueError(f"not a pure number: {self}")
        return self.terms[_ZERO_EXP]

    def constant_part(self) -> GRat:
        return self.terms.get(_ZERO_EXP, GRat(0))

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, GRat)):
            other = ConstExpr({_ZERO_EXP: as_grat(other)})
        if not isinstance(other, ConstExpr):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    # -- ring operations ------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e)
            s = c if s is None else s + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return ConstExpr(out)

    __radd__ = __add__

    def __neg__(self):
        return ConstExpr({e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                c = c1 * c2
                s = out.get(e)
                s = c if s is None else s + c
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return ConstExpr(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse_monomial() ** (-k)
        out = ConstExpr.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base if k > 1 else base
            k >>= 1
        return out

    def scalar_mul(self, c) -> "ConstExpr":
        c = as_grat(c)
        return ConstExpr({e: v * c for e, v in self.terms.items()})

    def inverse_monomial(self) -> "ConstExpr":
        """Exact inverse, defined only for a single-term expression."""
        if len(self.terms) != 1:
            raise ValueError("only monomials are invertible exactly")
        (e, c), = self.terms.items()
        return ConstExpr({tuple(-x for x in e): c.inverse()})

    def conjugate(self) -> "ConstExpr":
        """Complex conjugate assuming all generators are real-valued."""
        return ConstExpr({e: c.conjugate() for e, c in self.terms.items()})

    def real_part(self) -> "ConstExpr":
        return ConstExpr({e: GRat(c.re) for e, c in self.terms.items() if c.re})

    def imag_part(self) -> "ConstExpr":
        return ConstExpr({e: GRat(c.im) for e, c in self.terms.items() if c.im})

    # -- substitution and evaluation -------------------------------------

    def substitute(self, name: str, value) -> "ConstExpr":
        """Exact substitution of a generator by a ConstExpr or Gaussian rational."""
        idx = _GIDX[name]
        if not isinstance(value, ConstExpr):
            value = ConstExpr({_ZERO_EXP: as_grat(value)})
        out = ConstExpr.zero()
        for e, c in self.terms.items():
            k = e[idx]
            rest = ConstExpr({e[:idx] + (0,) + e[idx + 1:]: c})
            out = out + rest * (value ** k if k >= 0 else value.inverse_monomial() ** (-k))
        return out

    def eval_mp(self, assignment: dict | None = None):
        """Evaluate to an mpmath complex at the active precision.

        ``assignment`` supplies values for K, n, L, lam as needed; the
        transcendental generators default to their true values.
        """
        assignment = assignment or {}
        vals = {}
        for name in GENERATORS:
            if name in assignment:
                vals[name] = mp.mpmathify(assignment[name])
            elif name == "pi":
                vals[name] = +mp.pi
            elif name == "gamma":
                vals[name] = +mp.euler
            elif name in _ZETA_ARG:
                vals[name] = mp.zeta(_ZETA_ARG[name])
            else:
                vals[name] = None
        total = mp.mpc(0)
        for e, c in self.terms.items():
            term = c.to_mp()
            for i, k in enumerate(e):
                if k:
                    v = vals[GENERATORS[i]]
                    if v is None:
                        raise ValueError(f"no value supplied for generator "
                                         f"'{GENERATORS[i]}'")
                    term *= v ** k
            total += term
        return total

    def generators_used(self):
        used = set()
        for e in self.terms:
            for i, k in enumerate(e):
                if k:
                    used.add(GENERATORS[i])
        return used

    # -- display ----------------------------------------------------------

    def sorted_terms(self):
        return sorted(self.terms.items())

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            gens = "*".join(
                (GENERATORS[i] if k == 1 else f"{GENERATORS[i]}^{k}")
                for i, k in enumerate(e) if k)
            if not gens:
                parts.append(repr(c))
            elif c == ONE_G:
                parts.append(gens)
            elif c == GRat(-1):
                parts.append(f"-{gens}")
            else:
                parts.append(f"{c!r}*{gens}")
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out

    __repr__ = __str__

    def to_psi_terms(self):
        """Rewrite zeta monomials into psi^(2k)(1) powers.

        Returns a list of (GRat coefficient, psi-power dict, other-generator
        exponent dict).  Exact: zeta(m+1) = (-1)^(m+1) psi^(m)(1) / m!.
        """
        out = []
        for e, c in self.sorted_terms():
            psi_pows = {}
            coef = c
            rest = {}
            for i, k in enumerate(e):
                if not k:
                    continue
                name = GENERATORS[i]
                if name in _ZETA_ARG:
                    m = _ZETA_ARG[name] - 1
                    if k < 0:
                        raise ValueError("negative zeta power has no psi form")
                    coef = coef * GRat(Fraction((-1) ** (m + 1),
                                                factorial(m)) ** k)
                    psi_pows[m] = psi_pows.get(m, 0) + k
                else:
                    rest[name] = k
            out.append((coef, psi_pows, rest))
        return out

    def str_psi(self) -> str:
        """Human-readable string in the psi^(2k)(1) display basis."""
        terms = self.to_psi_terms()
        if not terms:
            return "0"
        parts = []
        for coef, psi_pows, rest in terms:
            factors = []
            for name, k in rest.items():
                factors.append(name if k == 1 else f"{name}^{k}")
            for m in sorted(psi_pows):
                k = psi_pows[m]
                base = f"psi{m}(1)"
                factors.append(base if k == 1 else f"{base}^{k}")
            body = "*".join(factors)
            if not body:
                parts.append(repr(coef))
            elif coef == ONE_G:
                parts.append(body)
            elif coef == GRat(-1):
                parts.append(f"-{body}")
            else:
                parts.append(f"{coef!r}*{body}")
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out

    def eval_psi_mp(self, assignment: dict | None = None):
        """Evaluate the psi-basis form numerically (via mpmath polygamma).

        Independent route from eval_mp: used to verify the display map.
        """
        assignment = assignment or {}
        total = mp.mpc(0)
        for coef, psi_pows, rest in self.to_psi_terms():
            term = coef.to_mp()
            for m, k in psi_pows.items():
                term *= mp.psi(m, 1) ** k
            for name, k in rest.items():
                if name == "pi":
                    v = +mp.pi
                elif name == "gamma":
                    v = +mp.euler
                else:
                    v = mp.mpmathify(assignment[name])
                term *= v ** k
            total += term
        return total

    # -- serialization ------------------------------------------------------

    def to_jsonable(self):
        return [[list(e), [_frac_str(c.re), _frac_str(c.im)]]
                for e, c in self.sorted_terms()]

    @classmethod
    def from_jsonable(cls, data) -> "ConstExpr":
        terms = {}
        for e, (re_s, im_s) in data:
            terms[tuple(e)] = GRat(Fraction(re_s), Fraction(im_s))
        return cls(terms)

    def to_json(self) -> str:
        return json.dumps(self.to_jsonable(), sort_keys=True,
                          separators=(",", ":"))

    @classmethod
    def from_json(cls, s: str) -> "ConstExpr":
        return cls.from_jsonable(json.loads(s))


def _coerce(x) -> ConstExpr:
    if isinstance(x, ConstExpr):
        return x
    if isinstance(x, (int, Fraction, GRat)):
        c = as_grat(x)
        return ConstExpr({_ZERO_EXP: c}) if c else ConstExpr()
    raise TypeError(f"cannot coerce {type(x).__name__} to ConstExpr")


def _frac_str(f: Fraction) -> str:
    return f"{f.numerator}/{f.denominator}" if f.denominator != 1 else str(f.numerator)


# convenience handles used across the derivation modules
PI = ConstExpr.generator("pi")
GAMMA = ConstExpr.generator("gamma")
ZETA3 = ConstExpr.generator("zeta3")
ZETA5 = ConstExpr.generator("zeta5")
ZETA7 = ConstExpr.generator("zeta7")
ZETA9 = ConstExpr.generator("zeta9")
ZETA11 = ConstExpr.generator("zeta11")
K_GEN = ConstExpr.generator("K")
N_GEN = ConstExpr.generator("n")
L_GEN = ConstExpr.generator("L")
LAM_GEN = ConstExpr.generator("lam")
