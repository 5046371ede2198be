"""Exact arithmetic substrate.

Big rationals, sparse multivariate polynomials over Q, rational functions
over the parameter field, univariate polynomials in the summation variable,
and the gcd / resultant / dispersion / linear-solving routines the summation
algorithms sit on.

All values are immutable; every operation returns a new object, so instances
are safe to share between concurrent workers.
"""

from __future__ import annotations

import math
import random
from typing import Iterable, Mapping, Sequence

try:
    from gmpy2 import mpq as QQ
except ImportError:  # pragma: no cover - gmpy2 is an optional speedup
    from fractions import Fraction as QQ

__all__ = [
    "QQ",
    "qq",
    "qq_str",
    "ExactDivisionError",
    "MPoly",
    "mpoly_gcd",
    "RatFunc",
    "UniPoly",
    "gcd_uni",
    "resultant",
    "dispersion_set",
    "linsolve",
    "parse_ratfunc",
    "parse_poly",
]

_ZERO = QQ(0)
_ONE = QQ(1)

# Automatic num/den gcd reduction kicks in above this combined term count.
REDUCE_THRESHOLD = 5000

# Trailing variables in the canonical ordering: accessory parameters sort
# alphabetically before these.
_TAIL_VARS = ("n", "k", "s")


def qq(x) -> QQ:
    """Coerce ints, strings like '3/4', and rационals to the rational type."""
    if type(x) is type(_ONE):
        return x
    if isinstance(x, QQ):
        return x
    if isinstance(x, float):
        raise TypeError("refusing float -> rational coercion; pass a string")
    return QQ(x)


def qq_str(x) -> str:
    """Decimal string of a rational: '3', '-1/2'."""
    return str(qq(x))


def _var_key(name: str):
    if name in _TAIL_VARS:
        return (1, _TAIL_VARS.index(name), name)
    return (0, 0, name)


def merge_vars(*groups: Iterable[str]) -> tuple[str, ...]:
    seen = set()
    for g in groups:
        seen.update(g)
    return tuple(sorted(seen, key=_var_key))


class ExactDivisionError(ArithmeticError):
    """Raised when an exact polynomial division leaves a remainder."""


class MPoly:
    """Sparse multivariate polynomial over Q.

    ``vars`` is the ordered generator tuple; ``terms`` maps exponent tuples
    (one entry per generator) to nonzero rational coefficients.
    """

    __slots__ = ("vars", "terms")

    def __init__(self, vars: tuple[str, ...], terms: Mapping[tuple[int, ...], QQ]):
        self.vars = tuple(vars)
        self.terms = {e: c for e, c in terms.items() if c}

    # -- constructors -------------------------------------------------------

    @classmethod
    def const(cls, c, vars: Iterable[str] = ()) -> "MPoly":
        c = qq(c)
        vars = tuple(vars)
        if not c:
            return cls(vars, {})
        return cls(vars, {(0,) * len(vars): c})

    @classmethod
    def variable(cls, name: str, vars: Iterable[str] | None = None) -> "MPoly":
        vs = merge_vars([name] if vars is None else vars, [name])
        e = tuple(1 if v == name else 0 for v in vs)
        return cls(vs, {e: _ONE})

    # -- structure ----------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def is_const(self) -> bool:
        return all(not any(e) for e in self.terms)

    def const_value(self) -> QQ:
        if self.is_zero:
            return _ZERO
        if not self.is_const():
            raise ValueError("polynomial is not constant")
        return next(iter(self.terms.values()))

    def degree(self, var: str) -> int:
        if var not in self.vars or self.is_zero:
            return 0
        i = self.vars.index(var)
        return max(e[i] for e in self.terms)

    def total_terms(self) -> int:
        return len(self.terms)

    def depends_on(self, var: str) -> bool:
        if var not in self.vars:
            return False
        i = self.vars.index(var)
        return any(e[i] for e in self.terms)

    def align(self, vars: tuple[str, ...]) -> "MPoly":
        """Re-express over a superset generator tuple."""
        if vars == self.vars:
            return self
        idx = []
        for v in self.vars:
            if v not in vars:
                if self.depends_on(v):
                    raise ValueError(f"cannot drop live variable {v!r}")
                idx.append(None)
            else:
                idx.append(vars.index(v))
        out: dict[tuple[int, ...], QQ] = {}
        for e, c in self.terms.items():
            ne = [0] * len(vars)
            for j, pos in enumerate(idx):
                if pos is not None:
                    ne[pos] = e[j]
            out[tuple(ne)] = out.get(tuple(ne), _ZERO) + c
        return MPoly(vars, out)

    def _pair(self, other) -> tuple["MPoly", "MPoly"]:
        if not isinstance(other, MPoly):
            other = MPoly.const(other, self.vars)
        if self.vars == other.vars:
            return self, other
        vs = merge_vars(self.vars, other.vars)
        return self.align(vs), other.align(vs)

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other) -> "MPoly":
        a, b = self._pair(other)
        out = dict(a.terms)
        for e, c in b.terms.items():
            nc = out.get(e, _ZERO) + c
            if nc:
                out[e] = nc
            else:
                out.pop(e, None)
        return MPoly(a.vars, out)

    __radd__ = __add__

    def __neg__(self) -> "MPoly":
        return MPoly(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> "MPoly":
        return self + (-other if isinstance(other, MPoly) else MPoly.const(-qq(other), self.vars))

    def __rsub__(self, other) -> "MPoly":
        return (-self) + other

    def __mul__(self, other) -> "MPoly":
        if not isinstance(other, MPoly):
            c = qq(other)
            if not c:
                return MPoly(self.vars, {})
            return MPoly(self.vars, {e: v * c for e, v in self.terms.items()})
        a, b = self._pair(other)
        if len(a.terms) < len(b.terms):
            a, b = b, a
        out: dict[tuple[int, ...], QQ] = {}
        for e1, c1 in a.terms.items():
            for e2, c2 in b.terms.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                nc = out.get(e, _ZERO) + c1 * c2
                if nc:
                    out[e] = nc
                else:
                    out.pop(e, None)
        return MPoly(a.vars, out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "MPoly":
        if n < 0:
            raise ValueError("negative power on a polynomial")
        result = MPoly.const(1, self.vars)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, RatFunc):
            return other == self
        a, b = self._pair(other)
        return a.terms == b.terms

    def __hash__(self):
        live = merge_vars(v for v in self.vars if self.depends_on(v))
        return hash((live, frozenset(self.align(live).terms.items()) if live else frozenset(self.terms.items())))

    # -- substitution -------------------------------------------------------

    def subs(self, mapping: Mapping[str, object]) -> "MPoly":
        """Substitute rationals or polynomials for variables."""
        mapping = {v: x for v, x in mapping.items() if v in self.vars}
        if not mapping:
            return self
        kept = tuple(v for v in self.vars if v not in mapping)
        values: dict[str, MPoly] = {}
        for v, x in mapping.items():
            values[v] = x if isinstance(x, MPoly) else MPoly.const(qq(x))
        out_vars = merge_vars(kept, *(p.vars for p in values.values()))
        power_cache: dict[tuple[str, int], MPoly] = {}

        def vpow(v: str, e: int) -> MPoly:
            key = (v, e)
            if key not in power_cache:
                power_cache[key] = values[v] ** e
            return power_cache[key]

        total = MPoly.const(0, out_vars)
        kept_idx = {v: out_vars.index(v) for v in kept}
        for e, c in self.terms.items():
            mono = [0] * len(out_vars)
            factor = None
            for v, ev in zip(self.vars, e):
                if not ev:
                    continue
                if v in mapping:
                    pw = vpow(v, ev)
                    factor = pw if factor is None else factor * pw
                else:
                    mono[kept_idx[v]] = ev
            piece = MPoly(out_vars, {tuple(mono): c})
            if factor is not None:
                piece = piece * factor
            total = total + piece
        return total

    def evaluate(self, point: Mapping[str, object]) -> QQ:
        """Evaluate with every live variable bound to a rational."""
        vals = []
        for v in self.vars:
            if v in point:
                vals.append(qq(point[v]))
            elif self.depends_on(v):
                raise ValueError(f"unbound variable {v!r}")
            else:
                vals.append(_ZERO)
        cache: dict[tuple[int, int], QQ] = {}

        def pw(i: int, e: int) -> QQ:
            key = (i, e)
            if key not in cache:
                cache[key] = vals[i] ** e
            return cache[key]

        total = _ZERO
        for e, c in self.terms.items():
            t = c
            for i, ev in enumerate(e):
                if ev:
                    t *= pw(i, ev)
            total += t
        return total

    # -- division and normalization -----------------------------------------

    def lex_lead(self) -> tuple[tuple[int, ...], QQ]:
        e = max(self.terms)
        return e, self.terms[e]

    def divexact(self, other: "MPoly") -> "MPoly":
        a, d = self._pair(other)
        if d.is_zero:
            raise ZeroDivisionError("division by the zero polynomial")
        if a.is_zero:
            return a
        if d.is_const():
            return a * (_ONE / d.const_value())
        dlead, dc = d.lex_lead()
        q: dict[tuple[int, ...], QQ] = {}
        r = dict(a.terms)
        while r:
            rlead = max(r)
            rc = r[rlead]
            qe = tuple(x - y for x, y in zip(rlead, dlead))
            if any(x < 0 for x in qe):
                raise ExactDivisionError("inexact polynomial division")
            qc = rc / dc
            q[qe] = qc
            for de, dcc in d.terms.items():
                e = tuple(x + y for x, y in zip(qe, de))
                nc = r.get(e, _ZERO) - qc * dcc
                if nc:
                    r[e] = nc
                else:
                    r.pop(e, None)
        return MPoly(a.vars, q)

    def primitive(self) -> tuple[QQ, "MPoly"]:
        """Return (scale, prim) with self = scale*prim, prim having coprime
        integer coefficients and a positive lex-leading one."""
        if self.is_zero:
            return _ONE, self
        dens = [int(c.denominator) for c in self.terms.values()]
        lcm = 1
        for d in dens:
            lcm = lcm * d // math.gcd(lcm, d)
        g = 0
        for c in self.terms.values():
            g = math.gcd(g, abs(int(c.numerator) * (lcm // int(c.denominator))))
        scale = QQ(g, lcm)
        _, lead = self.lex_lead()
        if lead < 0:
            scale = -scale
        prim = MPoly(self.vars, {e: c / scale for e, c in self.terms.items()})
        return scale, prim

    # -- printing -----------------------------------------------------------

    def poly_str(self) -> str:
        """Canonical expanded form: '4*k+6*n+1', '-2*k+2*n-1'."""
        if self.is_zero:
            return "0"
        items = sorted(self.terms.items(), key=lambda it: (-sum(it[0]), it[0]))
        parts = []
        for e, c in items:
            atoms = []
            for v, ev in zip(self.vars, e):
                if ev == 1:
                    atoms.append(v)
                elif ev > 1:
                    atoms.append(f"{v}^{ev}")
            if not atoms:
                parts.append(qq_str(c))
                continue
            body = "*".join(atoms)
            if c == 1:
                parts.append(body)
            elif c == -1:
                parts.append(f"-{body}")
            else:
                cs = qq_str(c)
                if "/" in cs:
                    cs = f"({cs})"
                parts.append(f"{cs}*{body}")
        return "+".join(parts).replace("+-", "-")

    def __repr__(self):
        return f"MPoly({self.poly_str()})"


def _primitive_part(p: MPoly) -> MPoly:
    return p.primitive()[1]


def _content_wrt(coeffs: Sequence[MPoly]) -> MPoly:
    g = None
    for c in coeffs:
        if c.is_zero:
            continue
        g = c if g is None else mpoly_gcd(g, c)
        if g.is_const():
            break
    if g is None:
        return MPoly.const(0)
    return _primitive_part(g)


def _coeff_list(p: MPoly, var: str) -> list[MPoly]:
    """Coefficients of p by degree in var, as polynomials in the rest."""
    if var not in p.vars:
        return [p]
    i = p.vars.index(var)
    rest = tuple(v for v in p.vars if v != var)
    d = p.degree(var)
    buckets: list[dict] = [dict() for _ in range(d + 1)]
    for e, c in p.terms.items():
        ne = tuple(x for j, x in enumerate(e) if j != i)
        buckets[e[i]][ne] = buckets[e[i]].get(ne, _ZERO) + c
    return [MPoly(rest, b) for b in buckets]


def _from_coeff_list(coeffs: Sequence[MPoly], var: str) -> MPoly:
    x = MPoly.variable(var)
    total = MPoly.const(0)
    for d in range(len(coeffs) - 1, -1, -1):
        total = total * x + coeffs[d]
    return total


def _prem(A: list[MPoly], B: list[MPoly]) -> list[MPoly]:
    """Pseudo-remainder of coefficient lists (index = degree)."""
    d = B[-1]
    delta = len(A) - len(B)
    e = delta + 1
    R = list(A)
    while R and len(R) >= len(B):
        t = R[-1]
        shift = len(R) - len(B)
        R = [c * d for c in R]
        for j, bc in enumerate(B):
            R[shift + j] = R[shift + j] - t * bc
        while R and R[-1].is_zero:
            R.pop()
        e -= 1
    scale = d ** e if e > 0 else None
    if scale is not None:
        R = [c * scale for c in R]
    return R


def _prs_gcd_coeffs(A: list[MPoly], B: list[MPoly]) -> list[MPoly]:
    """Subresultant PRS gcd of primitive coefficient lists."""
    if len(A) < len(B):
        A, B = B, A
    g = MPoly.const(1)
    h = MPoly.const(1)
    while True:
        delta = len(A) - len(B)
        R = _prem(A, B)
        if not R:
            break
        if len(R) == 1:
            return [MPoly.const(1)]
        denom = g * (h ** delta)
        A, B = B, [c.divexact(denom) for c in R]
        g = A[-1]
        if delta >= 1:
            h = (g ** delta).divexact(h ** (delta - 1)) if delta > 1 else g
    cont = _content_wrt(B)
    return [c.divexact(cont) for c in B]


def mpoly_gcd(p: MPoly, q: MPoly) -> MPoly:
    """Primitive gcd over Q, positive lex-leading coefficient.

    Subresultant PRS in the lowest-degree shared variable with recursive
    content extraction; constants count as units.
    """
    p = _primitive_part(p)
    q = _primitive_part(q)
    if p.is_zero:
        return q
    if q.is_zero:
        return p
    if p.is_const() or q.is_const():
        return MPoly.const(1)
    shared = [v for v in merge_vars(p.vars, q.vars) if p.depends_on(v) and q.depends_on(v)]
    if not shared:
        return MPoly.const(1)
    var = min(shared, key=lambda v: min(p.degree(v), q.degree(v)))
    ap = _coeff_list(p, var)
    aq = _coeff_list(q, var)
    cont_p = _content_wrt(ap)
    cont_q = _content_wrt(aq)
    pp_p = [c.divexact(cont_p) for c in ap]
    pp_q = [c.divexact(cont_q) for c in aq]
    gc = _prs_gcd_coeffs(pp_p, pp_q)
    g = _from_coeff_list(gc, var) * mpoly_gcd(cont_p, cont_q)
    return _primitive_part(g)


class RatFunc:
    """Rational function num/den over Q in the canonical variable order.

    The denominator keeps a positive lex-leading coefficient; full gcd
    reduction is applied lazily once the combined term count passes
    REDUCE_THRESHOLD, and eagerly via reduced().
    """

    __slots__ = ("num", "den")

    def __init__(self, num: MPoly, den: MPoly | None = None, reduce: bool = False):
        if den is None:
            den = MPoly.const(1, num.vars)
        num, den = num._pair(den)
        if den.is_zero:
            raise ZeroDivisionError("zero denominator")
        if reduce or (num.total_terms() + den.total_terms() > REDUCE_THRESHOLD):
            g = mpoly_gcd(num, den)
            if not g.is_const():
                num = num.divexact(g)
                den = den.divexact(g)
        if den.is_const():
            c = den.const_value()
            num = num * (_ONE / c)
            den = MPoly.const(1, den.vars)
        elif den.lex_lead()[1] < 0:
            num, den = -num, -den
        self.num = num
        self.den = den

    # -- constructors -------------------------------------------------------

    @classmethod
    def const(cls, c, vars: Iterable[str] = ()) -> "RatFunc":
        return cls(MPoly.const(c, vars))

    @classmethod
    def variable(cls, name: str) -> "RatFunc":
        return cls(MPoly.variable(name))

    # -- structure ----------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    def is_const(self) -> bool:
        return self.num.is_const() and self.den.is_const()

    def const_value(self) -> QQ:
        if not self.is_const():
            raise ValueError("not a constant")
        return self.num.const_value()

    def depends_on(self, var: str) -> bool:
        return self.num.depends_on(var) or self.den.depends_on(var)

    def _coerce(self, other) -> "RatFunc":
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, MPoly):
            return RatFunc(other)
        return RatFunc.const(qq(other))

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other) -> "RatFunc":
        o = self._coerce(other)
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self) -> "RatFunc":
        return RatFunc(-self.num, self.den)

    def __sub__(self, other) -> "RatFunc":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "RatFunc":
        return (-self) + other

    def __mul__(self, other) -> "RatFunc":
        o = self._coerce(other)
        return RatFunc(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "RatFunc":
        o = self._coerce(other)
        if o.is_zero:
            raise ZeroDivisionError("division by zero rational function")
        return RatFunc(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other) -> "RatFunc":
        return self._coerce(other) / self

    def __pow__(self, e: int) -> "RatFunc":
        if e < 0:
            return RatFunc(self.den, self.num) ** (-e)
        return RatFunc(self.num ** e, self.den ** e)

    def __eq__(self, other) -> bool:
        o = self._coerce(other)
        return (self.num * o.den) == (o.num * self.den)

    def __hash__(self):
        r = self.reduced()
        return hash((r.num, r.den))

    # -- substitution -------------------------------------------------------

    def subs(self, mapping: Mapping[str, object]) -> "RatFunc":
        num = self.num.subs(mapping)
        den = self.den.subs(mapping)
        return RatFunc(num, den)

    def evaluate(self, point: Mapping[str, object]) -> QQ:
        d = self.den.evaluate(point)
        if not d:
            raise ZeroDivisionError("denominator vanishes at the point")
        return self.num.evaluate(point) / d

    # -- normalization and printing -----------------------------------------

    def reduced(self) -> "RatFunc":
        return RatFunc(self.num, self.den, reduce=True)

    def canonical_str(self) -> str:
        r = self.reduced()
        c1, p1 = r.num.primitive()
        c2, p2 = r.den.primitive()
        if r.num.is_zero:
            return "(0)/1"
        scale = c1 / c2
        num = p1 * qq(scale.numerator)
        den = p2 * qq(scale.denominator)
        ns = num.poly_str()
        ds = den.poly_str()
        if ds == "1":
            return f"({ns})/1"
        return f"({ns})/({ds})"

    def __repr__(self):
        return f"RatFunc({self.num.poly_str()!r}, {self.den.poly_str()!r})"


class UniPoly:
    """Univariate polynomial in one summation variable with RatFunc
    coefficients over the remaining variables (index = degree)."""

    __slots__ = ("var", "coeffs")

    def __init__(self, var: str, coeffs: Sequence[RatFunc]):
        cs = list(coeffs)
        while cs and cs[-1].is_zero:
            cs.pop()
        for c in cs:
            if c.depends_on(var):
                raise ValueError(f"coefficient depends on the main variable {var!r}")
        self.var = var
        self.coeffs = tuple(cs)

    # -- constructors -------------------------------------------------------

    @classmethod
    def from_mpoly(cls, p: MPoly, var: str) -> "UniPoly":
        return cls(var, [RatFunc(c) for c in _coeff_list(p, var)])

    @classmethod
    def from_ratfunc_pair(cls, num: MPoly, den: MPoly, var: str) -> "UniPoly":
        if den.depends_on(var):
            raise ValueError("denominator must be free of the main variable")
        d = RatFunc(den)
        return cls(var, [RatFunc(c) / d for c in _coeff_list(num, var)])

    @classmethod
    def const(cls, c, var: str) -> "UniPoly":
        return cls(var, [c if isinstance(c, RatFunc) else RatFunc.const(qq(c))])

    @classmethod
    def x(cls, var: str) -> "UniPoly":
        return cls(var, [RatFunc.const(0), RatFunc.const(1)])

    # -- structure ----------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1 if self.coeffs else -1

    @property
    def lc(self) -> RatFunc:
        if self.is_zero:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def coeff(self, d: int) -> RatFunc:
        if 0 <= d < len(self.coeffs):
            return self.coeffs[d]
        return RatFunc.const(0)

    def to_ratfunc(self) -> RatFunc:
        x = RatFunc.variable(self.var)
        total = RatFunc.const(0)
        for d in range(len(self.coeffs) - 1, -1, -1):
            total = total * x + self.coeffs[d]
        return total

    def cleared(self) -> MPoly:
        """Multiply through by a common coefficient denominator; returns the
        resulting polynomial (gcd-equivalent to self)."""
        den = MPoly.const(1)
        for c in self.coeffs:
            den = den * c.den
        total = MPoly.const(0)
        x = MPoly.variable(self.var)
        for d in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[d]
            total = total * x + c.num * den.divexact(c.den)
        return total

    # -- arithmetic ---------------------------------------------------------

    def _c(self, other) -> "UniPoly":
        if isinstance(other, UniPoly):
            if other.var != self.var:
                raise ValueError("mixed main variables")
            return other
        return UniPoly.const(other if isinstance(other, RatFunc) else qq(other), self.var)

    def __add__(self, other) -> "UniPoly":
        o = self._c(other)
        n = max(len(self.coeffs), len(o.coeffs))
        return UniPoly(self.var, [self.coeff(i) + o.coeff(i) for i in range(n)])

    __radd__ = __add__

    def __neg__(self) -> "UniPoly":
        return UniPoly(self.var, [-c for c in self.coeffs])

    def __sub__(self, other) -> "UniPoly":
        return self + (-self._c(other))

    def __mul__(self, other) -> "UniPoly":
        if isinstance(other, (RatFunc, int)) or type(other) is type(_ONE):
            f = other if isinstance(other, RatFunc) else RatFunc.const(qq(other))
            return UniPoly(self.var, [c * f for c in self.coeffs])
        o = self._c(other)
        if self.is_zero or o.is_zero:
            return UniPoly(self.var, [])
        out = [RatFunc.const(0)] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero:
                continue
            for j, b in enumerate(o.coeffs):
                out[i + j] = out[i + j] + a * b
        return UniPoly(self.var, out)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "UniPoly":
        out = UniPoly.const(1, self.var)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base if e > 1 else base
            e >>= 1
        return out

    def __eq__(self, other) -> bool:
        o = self._c(other)
        return len(self.coeffs) == len(o.coeffs) and all(
            a == b for a, b in zip(self.coeffs, o.coeffs)
        )

    def shift(self, j) -> "UniPoly":
        """Substitute var -> var + j (j an integer, rational, or symbol name)."""
        if isinstance(j, str):
            off = RatFunc.variable(j)
        else:
            off = RatFunc.const(qq(j))
        lin = UniPoly(self.var, [off, RatFunc.const(1)])
        out = UniPoly.const(0, self.var)
        for d in range(len(self.coeffs) - 1, -1, -1):
            out = out * lin + self._c(self.coeffs[d])
        return out

    def monic(self) -> "UniPoly":
        if self.is_zero:
            return self
        inv = RatFunc.const(1) / self.lc
        return UniPoly(self.var, [c * inv for c in self.coeffs])

    def divmod(self, other: "UniPoly") -> tuple["UniPoly", "UniPoly"]:
        o = self._c(other)
        if o.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        q = UniPoly.const(0, self.var)
        r = self
        inv = RatFunc.const(1) / o.lc
        while not r.is_zero and r.degree >= o.degree:
            d = r.degree - o.degree
            c = r.lc * inv
            t = UniPoly(self.var, [RatFunc.const(0)] * d + [c])
            q = q + t
            r = r - t * o
            r = UniPoly(self.var, r.coeffs[: o.degree + d] )
        return q, r

    def evaluate_coeffs(self, point: Mapping[str, object]) -> list[QQ]:
        """Specialize every coefficient to a rational."""
        return [c.evaluate(point) for c in self.coeffs]

    def __repr__(self):
        return f"UniPoly({self.var}; {self.to_ratfunc().num.poly_str()})"


def gcd_uni(p: UniPoly, q: UniPoly) -> UniPoly:
    """Monic gcd over the coefficient fraction field."""
    if p.var != q.var:
        raise ValueError("mixed main variables")
    if p.is_zero:
        return q.monic() if not q.is_zero else q
    if q.is_zero:
        return p.monic()
    g = mpoly_gcd(p.cleared(), q.cleared())
    return UniPoly.from_mpoly(g, p.var).monic()


def _bareiss_det(M: list[list[MPoly]]) -> MPoly:
    """Fraction-free determinant; entries are polynomials."""
    n = len(M)
    if n == 0:
        return MPoly.const(1)
    M = [row[:] for row in M]
    sign = 1
    prev = MPoly.const(1)
    for i in range(n - 1):
        if M[i][i].is_zero:
            for r in range(i + 1, n):
                if not M[r][i].is_zero:
                    M[i], M[r] = M[r], M[i]
                    sign = -sign
                    break
            else:
                return MPoly.const(0)
        piv = M[i][i]
        for r in range(i + 1, n):
            for c in range(i + 1, n):
                M[r][c] = (M[r][c] * piv - M[r][i] * M[i][c]).divexact(prev)
            M[r][i] = MPoly.const(0)
        prev = piv
    d = M[n - 1][n - 1]
    return -d if sign < 0 else d


def resultant(p: UniPoly, q: UniPoly) -> MPoly:
    """Resultant in the shared main variable, up to a nonzero rational factor.

    Coefficients are cleared of denominators first, so the result equals the
    true resultant times a nonzero constant; root sets are unaffected.
    """
    if p.var != q.var:
        raise ValueError("mixed main variables")
    if p.is_zero or q.is_zero:
        return MPoly.const(0)
    a = _coeff_list(p.cleared(), p.var)
    b = _coeff_list(q.cleared(), q.var)
    m, n = len(a) - 1, len(b) - 1
    if m == 0:
        return a[0] ** n
    if n == 0:
        return b[0] ** m
    size = m + n
    rows: list[list[MPoly]] = []
    zero = MPoly.const(0)
    for i in range(n):
        rows.append([zero] * i + list(reversed(a)) + [zero] * (size - m - 1 - i))
    for i in range(m):
        rows.append([zero] * i + list(reversed(b)) + [zero] * (size - n - 1 - i))
    return _bareiss_det(rows)


# -- integer roots modulo a prime ------------------------------------------


def _poly_mod_trim(f: list[int]) -> list[int]:
    while f and f[-1] == 0:
        f.pop()
    return f


def _poly_mod_mul(f: list[int], g: list[int], p: int) -> list[int]:
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if not a:
            continue
        for j, b in enumerate(g):
            out[i + j] = (out[i + j] + a * b) % p
    return _poly_mod_trim(out)


def _poly_mod_rem(f: list[int], g: list[int], p: int) -> list[int]:
    f = f[:]
    dg = len(g) - 1
    inv = pow(g[-1], p - 2, p)
    while len(f) - 1 >= dg and f:
        c = f[-1] * inv % p
        shift = len(f) - 1 - dg
        for j, b in enumerate(g):
            f[shift + j] = (f[shift + j] - c * b) % p
        _poly_mod_trim(f)
    return f


def _poly_mod_gcd(f: list[int], g: list[int], p: int) -> list[int]:
    while g:
        f, g = g, _poly_mod_rem(f, g, p)
    if f:
        inv = pow(f[-1], p - 2, p)
        f = [c * inv % p for c in f]
    return f


def _poly_mod_powmod(base: list[int], e: int, f: list[int], p: int) -> list[int]:
    result = [1]
    base = _poly_mod_rem(base, f, p)
    while e:
        if e & 1:
            result = _poly_mod_rem(_poly_mod_mul(result, base, p), f, p)
        base = _poly_mod_rem(_poly_mod_mul(base, base, p), f, p)
        e >>= 1
    return result


def _roots_modp(f: list[int], p: int, rng: random.Random) -> list[int]:
    """Roots in F_p of an integer-coefficient polynomial."""
    f = [c % p for c in f]
    f = _poly_mod_trim(f)
    if len(f) <= 1:
        return []
    # squarefree part
    df = _poly_mod_trim([(i * c) % p for i, c in enumerate(f)][1:])
    if df:
        g = _poly_mod_gcd(f[:], df[:], p)
        if len(g) > 1:
            q, r = _poly_mod_divmod(f[:], g, p)
            if not r:
                f = q
    # linear-factor product
    xp = _poly_mod_powmod([0, 1], p, f, p)
    xp = _poly_mod_trim([(a - b) % p for a, b in _zip_pad(xp, [0, 1])])
    h = _poly_mod_gcd(f[:], xp, p)
    roots: list[int] = []

    def split(h: list[int]):
        if len(h) <= 1:
            return
        if len(h) == 2:
            roots.append((-h[0] * pow(h[1], p - 2, p)) % p)
            return
        while True:
            a = rng.randrange(p)
            w = _poly_mod_powmod([a, 1], (p - 1) // 2, h, p)
            w = _poly_mod_trim([(c - (1 if i == 0 else 0)) % p for i, c in enumerate(w)] or [p - 1])
            d = _poly_mod_gcd(h[:], w, p)
            if 1 < len(d) < len(h):
                q, r = _poly_mod_divmod(h[:], d, p)
                split(d)
                split(q)
                return

    split(h)
    return roots


def _poly_mod_divmod(f: list[int], g: list[int], p: int) -> tuple[list[int], list[int]]:
    q = [0] * max(len(f) - len(g) + 1, 0)
    inv = pow(g[-1], p - 2, p)
    f = f[:]
    while f and len(f) >= len(g):
        c = f[-1] * inv % p
        shift = len(f) - len(g)
        q[shift] = c
        for j, b in enumerate(g):
            f[shift + j] = (f[shift + j] - c * b) % p
        _poly_mod_trim(f)
    return _poly_mod_trim(q), f


def _zip_pad(a: list[int], b: list[int]):
    n = max(len(a), len(b))
    for i in range(n):
        yield (a[i] if i < len(a) else 0), (b[i] if i < len(b) else 0)


def _int_roots(coeffs: Sequence[QQ], rng: random.Random) -> set[int]:
    """Integer roots of a rational-coefficient polynomial."""
    lcm = 1
    for c in coeffs:
        d = int(c.denominator)
        lcm = lcm * d // math.gcd(lcm, d)
    f = [int(c.numerator) * (lcm // int(c.denominator)) for c in coeffs]
    while f and f[-1] == 0:
        f.pop()
    if len(f) <= 1:
        return set()
    low = 0
    while f[low] == 0:
        low += 1
    roots = {0} if low else set()
    f = f[low:]
    g = 0
    for c in f:
        g = math.gcd(g, c)
    f = [c // g for c in f]
    if len(f) <= 1:
        return roots
    cands: set[int] | None = None
    for _ in range(2):
        while True:
            p = rng.randrange(1 << 60, 1 << 61) | 1
            if _is_probable_prime(p) and f[-1] % p:
                break
        rs = _roots_modp(f, p, rng)
        lifted = set()
        for r in rs:
            for cand in (r, r - p):
                lifted.add(cand)
        cands = lifted if cands is None else {c for c in cands if (c % p) in {r % p for r in rs}}
    out = set(roots)
    for c in cands or ():
        acc = 0
        for coef in reversed(f):
            acc = acc * c + coef
        if acc == 0:
            out.add(c)
    return out


def _is_probable_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


_DEFAULT_RNG_SEED = 0x5A17


def dispersion_set(p: UniPoly, q: UniPoly, rng: random.Random | None = None,
                   trials: int = 3) -> set[int]:
    """All j >= 0 with deg gcd(p(x), q(x+j)) > 0.

    Candidate integers come from integer roots of the resultant
    Res_x(p(x), q(x+s)) under random integer parameter specializations
    (three independent trials, unioned); every candidate is then verified
    by a symbolic gcd, so the returned set is exact.
    """
    if p.is_zero or q.is_zero:
        raise ValueError("dispersion of a zero polynomial")
    if p.var != q.var:
        raise ValueError("mixed main variables")
    if p.degree == 0 or q.degree == 0:
        return set()
    if rng is None:
        rng = random.Random(_DEFAULT_RNG_SEED)
    params = set()
    for c in list(p.coeffs) + list(q.coeffs):
        for v in c.num.vars:
            if c.depends_on(v):
                params.add(v)
    candidates: set[int] = set()
    n_trials = trials if params else 1
    for _ in range(n_trials):
        for _attempt in range(60):
            point = {v: QQ(rng.randint(-10 ** 6, 10 ** 6)) for v in params}
            try:
                pc = p.evaluate_coeffs(point)
                qc = q.evaluate_coeffs(point)
            except ZeroDivisionError:
                continue
            if pc[-1] and qc[-1]:
                break
        else:
            raise RuntimeError("could not find a nondegenerate specialization")
        ps = UniPoly(p.var, [RatFunc.const(c) for c in pc])
        qs = UniPoly(q.var, [RatFunc.const(c) for c in qc]).shift("s")
        res = resultant(ps, qs)
        if res.is_zero:
            # p and q share a factor for every shift only if something
            # degenerated; fall back to direct candidate scan
            continue
        rc = _coeff_list(res, "s") if res.depends_on("s") else [res]
        coeffs = [c.const_value() for c in rc]
        candidates.update(j for j in _int_roots(coeffs, rng) if j >= 0)
    out = set()
    for j in sorted(candidates):
        if gcd_uni(p, q.shift(j)).degree > 0:
            out.add(j)
    return out


def dispersion_from_linear_factors(
    num_roots: Sequence[RatFunc], den_roots: Sequence[RatFunc]
) -> set[int]:
    """Dispersion candidates for products of monic linear factors given their
    roots: j = root(q) - root(p) whenever that difference is a nonnegative
    integer constant."""
    out: set[int] = set()
    for rp in num_roots:
        for rq in den_roots:
            d = rq - rp
            if d.is_const():
                v = d.const_value()
                if v.denominator == 1 and v >= 0:
                    out.add(int(v))
    return out


def linsolve(rows: Sequence[Sequence[RatFunc]], rhs: Sequence[RatFunc]):
    """Exact solution of A x = b over the rational-function field.

    Returns a list of RatFunc (free variables set to zero) or None when the
    system is inconsistent. Fraction-free (Bareiss) forward elimination with
    deterministic pivoting, exact back-substitution.
    """
    m = len(rows)
    if m != len(rhs):
        raise ValueError("shape mismatch")
    n = len(rows[0]) if m else 0
    aug: list[list[MPoly]] = []
    for i in range(m):
        if len(rows[i]) != n:
            raise ValueError("ragged matrix")
        den = MPoly.const(1)
        for c in list(rows[i]) + [rhs[i]]:
            den = den * c.den
        row = []
        for c in list(rows[i]) + [rhs[i]]:
            row.append(c.num * den.divexact(c.den))
        aug.append(row)
    prev = MPoly.const(1)
    pivots: list[tuple[int, int]] = []
    rank = 0
    for col in range(n):
        sel = None
        for r in range(rank, m):
            if not aug[r][col].is_zero:
                sel = r
                break
        if sel is None:
            continue
        aug[rank], aug[sel] = aug[sel], aug[rank]
        piv = aug[rank][col]
        for r in range(rank + 1, m):
            if all(aug[r][c].is_zero for c in range(col, n + 1)):
                continue
            for c in range(col + 1, n + 1):
                aug[r][c] = (aug[r][c] * piv - aug[r][col] * aug[rank][c]).divexact(prev)
            aug[r][col] = MPoly.const(0)
        prev = piv
        pivots.append((rank, col))
        rank += 1
    for r in range(rank, m):
        if all(aug[r][c].is_zero for c in range(n)) and not aug[r][n].is_zero:
            return None
    x: list[RatFunc] = [RatFunc.const(0) for _ in range(n)]
    for r, col in reversed(pivots):
        acc = RatFunc(aug[r][n])
        for c in range(col + 1, n):
            if not aug[r][c].is_zero:
                acc = acc - RatFunc(aug[r][c]) * x[c]
        x[col] = acc / RatFunc(aug[r][col])
    return x


# -- parsing ----------------------------------------------------------------


class _Tok:
    def __init__(self, s: str):
        self.s = s
        self.i = 0

    def peek(self) -> str:
        while self.i < len(self.s) and self.s[self.i].isspace():
            self.i += 1
        return self.s[self.i] if self.i < len(self.s) else ""

    def take(self) -> str:
        c = self.peek()
        self.i += 1
        return c

    def name(self) -> str:
        self.peek()
        j = self.i
        while j < len(self.s) and (self.s[j].isalnum() or self.s[j] == "_"):
            j += 1
        out = self.s[self.i:j]
        self.i = j
        return out

    def number(self) -> int:
        self.peek()
        j = self.i
        while j < len(self.s) and self.s[j].isdigit():
            j += 1
        out = int(self.s[self.i:j])
        self.i = j
        return out


def _parse_expr(t: _Tok) -> RatFunc:
    out = _parse_term(t)
    while t.peek() in ("+", "-"):
        op = t.take()
        rhs = _parse_term(t)
        out = out + rhs if op == "+" else out - rhs
    return out


def _parse_term(t: _Tok) -> RatFunc:
    out = _parse_factor(t)
    while True:
        c = t.peek()
        if c == "*" and not t.s[t.i:t.i + 2] == "**":
            t.take()
            out = out * _parse_factor(t)
        elif c == "/":
            t.take()
            out = out / _parse_factor(t)
        else:
            return out


def _parse_factor(t: _Tok) -> RatFunc:
    c = t.peek()
    neg = False
    while c in ("+", "-"):
        if c == "-":
            neg = not neg
        t.take()
        c = t.peek()
    if c == "(":
        t.take()
        out = _parse_expr(t)
        if t.take() != ")":
            raise ValueError("unbalanced parenthesis")
    elif c.isdigit():
        out = RatFunc.const(t.number())
    elif c.isalpha() or c == "_":
        out = RatFunc.variable(t.name())
    else:
        raise ValueError(f"unexpected character {c!r}")
    c = t.peek()
    if c == "^" or t.s[t.i:t.i + 2] == "**":
        t.take()
        if t.peek() == "*":
            t.take()
        esign = 1
        if t.peek() == "-":
            t.take()
            esign = -1
        e = t.number() * esign
        out = out ** e
    return -out if neg else out


def parse_ratfunc(s: str) -> RatFunc:
    """Parse '+-*/^()' expressions over integers and variable names."""
    t = _Tok(s)
    out = _parse_expr(t)
    if t.peek():
        raise ValueError(f"trailing input at position {t.i}: {s[t.i:]!r}")
    return out


def parse_poly(s: str) -> MPoly:
    r = parse_ratfunc(s)
    if not r.den.is_const():
        raise ValueError("expression is not polynomial")
    return r.num
