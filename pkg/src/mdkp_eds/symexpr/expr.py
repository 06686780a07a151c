"""Canonical exact expressions.

An :class:`Expr` is a finite sum ``sum c_m * m`` with ``mpq`` coefficients and
monomials ``m`` = products of atom powers.  Atoms are symbols, ``ln|.|`` nodes
and opaque bases (sums raised to negative, fractional or symbolic powers).
Exponents are ints, ``mpq`` or (symbolic) ``Expr``.

Monomials are tuples of ``(atom, exponent)`` pairs sorted by ``atom.rank``.
Two expressions in the Laurent subring (symbol atoms, integer exponents) are
equal iff their term dictionaries are equal.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Union

import gmpy2
from gmpy2 import mpq

from .symbols import Atom, LnAbs, PowBase, Symbol


class SymExprError(Exception):
    pass


class CyclicRuleError(SymExprError):
    pass


class EvalDomainError(SymExprError):
    pass


class MissingAssignmentError(SymExprError):
    pass


Number = Union[int, "mpq"]
_MPQ = type(mpq(0))
_MPFR = type(gmpy2.mpfr(0))


def _rank(pair):
    return pair[0].rank


def _num(c) -> "mpq":
    if isinstance(c, _MPQ):
        return c
    if isinstance(c, (int, Fraction)):
        return mpq(c)
    raise TypeError(f"not an exact number: {c!r}")


def _norm_exp(e):
    """Exponent normal form: int, non-integral mpq, or non-constant Expr."""
    if isinstance(e, Expr):
        if not e.terms:
            return 0
        if e.is_const():
            e = e.const_value()
        else:
            return e
    if isinstance(e, bool):
        raise TypeError("bool exponent")
    if isinstance(e, int):
        return e
    e = _num(e)
    if e.denominator == 1:
        return int(e.numerator)
    return e


def _exp_add(a, b):
    if isinstance(a, Expr) or isinstance(b, Expr):
        return _norm_exp(_as_expr(a) + _as_expr(b))
    return _norm_exp(a + b)


def _exp_mul(a, b):
    if isinstance(a, Expr) or isinstance(b, Expr):
        return _norm_exp(_as_expr(a) * _as_expr(b))
    return _norm_exp(mpq(a) * b)


def _exp_free(e) -> frozenset:
    return e.free_symbols if isinstance(e, Expr) else frozenset()


_MONO_CACHE: dict = {}
_MONO_CACHE_LIMIT = 1 << 19


def _mono_mul(a: tuple, b: tuple) -> tuple:
    if not a:
        return b
    if not b:
        return a
    key = (a, b)
    hit = _MONO_CACHE.get(key)
    if hit is not None:
        return hit
    d = dict(a)
    for atom, e in b:
        if atom in d:
            s = _exp_add(d[atom], e)
            if isinstance(s, int) and s == 0:
                del d[atom]
            else:
                d[atom] = s
        else:
            d[atom] = e
    res = tuple(sorted(d.items(), key=_rank))
    if len(_MONO_CACHE) > _MONO_CACHE_LIMIT:
        _MONO_CACHE.clear()
    _MONO_CACHE[key] = res
    return res


def _needs_expand(mono: tuple) -> bool:
    for atom, e in mono:
        if type(atom) is PowBase and isinstance(e, int) and e > 0:
            return True
    return False


class Expr:
    __slots__ = ("terms", "_hash", "_free", "_laurent", "_skey", "_opaque")

    def __init__(self, terms: dict):
        self.terms = terms
        self._hash = None
        self._free = None
        self._laurent = None
        self._skey = None
        self._opaque = None

    # construction -------------------------------------------------------
    @staticmethod
    def const(c) -> "Expr":
        c = _num(c)
        return Expr({(): c}) if c else Expr({})

    @staticmethod
    def atom(atom: Atom, e=1) -> "Expr":
        e = _norm_exp(e)
        if isinstance(e, int) and e == 0:
            return ONE
        return Expr({((atom, e),): mpq(1)})

    @staticmethod
    def from_terms(items: Iterable) -> "Expr":
        out: dict = {}
        for m, c in items:
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return _finish(out)

    # basic queries ------------------------------------------------------
    def is_zero_canonical(self) -> bool:
        return not self.terms

    def is_const(self) -> bool:
        t = self.terms
        return not t or (len(t) == 1 and () in t)

    def const_value(self) -> "mpq":
        if not self.terms:
            return mpq(0)
        if self.is_const():
            return self.terms[()]
        raise ValueError("expression is not constant")

    def is_single_term(self) -> bool:
        return len(self.terms) == 1

    @property
    def free_symbols(self) -> frozenset:
        if self._free is None:
            fs = set()
            for m in self.terms:
                for atom, e in m:
                    fs |= atom.free
                    if isinstance(e, Expr):
                        fs |= e.free_symbols
            self._free = frozenset(fs)
        return self._free

    def is_laurent(self) -> bool:
        """True iff every atom is a symbol raised to an integer power."""
        if self._laurent is None:
            ok = True
            for m in self.terms:
                for atom, e in m:
                    if type(atom) is not Symbol or not isinstance(e, int):
                        ok = False
                        break
                if not ok:
                    break
            self._laurent = ok
        return self._laurent

    def has_opaque(self) -> bool:
        if self._opaque is None:
            self._opaque = any(
                type(atom) is PowBase for m in self.terms for atom, _ in m
            )
        return self._opaque

    def atoms(self) -> set:
        out = set()
        for m in self.terms:
            for atom, e in m:
                out.add(atom)
                if isinstance(e, Expr):
                    out |= e.atoms()
        return out

    def __len__(self) -> int:
        return len(self.terms)

    # hashing / equality -------------------------------------------------
    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __eq__(self, other) -> bool:
        if isinstance(other, Expr):
            return self is other or self.terms == other.terms
        if isinstance(other, (int, _MPQ, Fraction)):
            return self.is_const() and self.const_value() == other
        return NotImplemented

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    def sort_key(self) -> tuple:
        if self._skey is None:
            from .printing import term_order_key

            items = sorted(self.terms.items(), key=lambda mc: term_order_key(mc[0]))
            self._skey = tuple(
                (term_order_key(m), (int(c.numerator), int(c.denominator))) for m, c in items
            )
        return self._skey

    # arithmetic ---------------------------------------------------------
    def __add__(self, other) -> "Expr":
        other = _coerce(other)
        if other is None:
            return NotImplemented
        if not other.terms:
            return self
        if not self.terms:
            return other
        if len(other.terms) > len(self.terms):
            big, small = other.terms, self.terms
        else:
            big, small = self.terms, other.terms
        out = dict(big)
        for m, c in small.items():
            s = out.get(m)
            if s is None:
                out[m] = c
            else:
                s = s + c
                if s:
                    out[m] = s
                else:
                    del out[m]
        return Expr(out)

    __radd__ = __add__

    def __neg__(self) -> "Expr":
        return Expr({m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> "Expr":
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "Expr":
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def scale(self, c) -> "Expr":
        c = _num(c)
        if not c:
            return ZERO
        if c == 1:
            return self
        return Expr({m: v * c for m, v in self.terms.items()})

    def __mul__(self, other) -> "Expr":
        other = _coerce(other)
        if other is None:
            return NotImplemented
        a, b = self.terms, other.terms
        if not a or not b:
            return ZERO
        if len(b) == 1 and () in b:
            return self.scale(b[()])
        if len(a) == 1 and () in a:
            return other.scale(a[()])
        if len(a) < len(b):
            a, b = b, a
        out: dict = {}
        get = out.get
        for mb, cb in b.items():
            for ma, ca in a.items():
                m = _mono_mul(ma, mb)
                s = get(m)
                if s is None:
                    out[m] = ca * cb
                else:
                    out[m] = s + ca * cb
        res = _finish(out)
        if self.has_opaque() or other.has_opaque():
            res = _expand_powbase(res)
        return res

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Expr":
        other = _coerce(other)
        if other is None:
            return NotImplemented
        if other.is_const():
            c = other.const_value()
            if not c:
                raise ZeroDivisionError("division by zero expression")
            return self.scale(1 / c)
        return self * power(other, -1)

    def __rtruediv__(self, other) -> "Expr":
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return other * power(self, -1)

    def __pow__(self, e) -> "Expr":
        return power(self, e)

    # calculus -----------------------------------------------------------
    def derivative(self, s: Symbol) -> "Expr":
        """Exact partial derivative; every other symbol is a constant."""
        if s not in self.free_symbols:
            return ZERO
        out: dict = {}
        extra = []
        for m, c in self.terms.items():
            for i, (atom, e) in enumerate(m):
                if s not in atom.free and not (isinstance(e, Expr) and s in e.free_symbols):
                    continue
                if atom is s and not isinstance(e, Expr):
                    ne = _norm_exp(e - 1)
                    if isinstance(ne, int) and ne == 0:
                        nm = m[:i] + m[i + 1:]
                    else:
                        nm = m[:i] + ((atom, ne),) + m[i + 1:]
                    v = out.get(nm, 0) + c * e
                    if v:
                        out[nm] = v
                    else:
                        out.pop(nm, None)
                else:
                    rest = Expr({m[:i] + m[i + 1:]: c})
                    extra.append(_d_factor(atom, e, s) * rest)
        res = _finish(out)
        for x in extra:
            res = res + x
        return res

    def derivation(self, images: Mapping[Symbol, "Expr"]) -> "Expr":
        """Apply the derivation sending each symbol ``s`` to ``images[s]``.

        Symbols missing from ``images`` are constants.  One pass over the
        terms; this is how total derivatives are computed.
        """
        keys = images.keys()
        if not any(s in keys for s in self.free_symbols):
            return ZERO
        acc: dict = {}
        get = acc.get
        extra = []
        for m, c in self.terms.items():
            for i, (atom, e) in enumerate(m):
                if type(atom) is Symbol and not isinstance(e, Expr):
                    img = images.get(atom)
                    if img is None or not img.terms:
                        continue
                    ne = _norm_exp(e - 1)
                    if isinstance(ne, int) and ne == 0:
                        nm = m[:i] + m[i + 1:]
                    else:
                        nm = m[:i] + ((atom, ne),) + m[i + 1:]
                    ce = c * e
                    for mi, ci in img.terms.items():
                        key = _mono_mul(nm, mi)
                        v = get(key)
                        acc[key] = ce * ci if v is None else v + ce * ci
                elif any(s in keys for s in atom.free) or (
                    isinstance(e, Expr) and any(s in keys for s in e.free_symbols)
                ):
                    rest = Expr({m[:i] + m[i + 1:]: c})
                    extra.append(_derive_factor(atom, e, images) * rest)
        res = _finish(acc)
        if any(x.has_opaque() for x in images.values()):
            res = _expand_powbase(res)
        for x in extra:
            res = res + x
        return res

    def subs(self, rules: Mapping[Symbol, "Expr"]) -> "Expr":
        """Simultaneous substitution of symbols by expressions."""
        if not rules:
            return self
        keys = frozenset(rules)
        for k, v in rules.items():
            if keys & _coerce(v).free_symbols:
                raise CyclicRuleError(f"rule key occurs in a rule value (at {k.name})")
        return self._subs(rules, keys, {})

    def _subs(self, rules, keys, memo) -> "Expr":
        if not (keys & self.free_symbols):
            return self
        out: dict = {}
        pieces = []
        for m, c in self.terms.items():
            hit = False
            for atom, e in m:
                if keys & atom.free or (isinstance(e, Expr) and keys & e.free_symbols):
                    hit = True
                    break
            if not hit:
                v = out.get(m, 0) + c
                if v:
                    out[m] = v
                else:
                    out.pop(m, None)
                continue
            keep = []
            prod = Expr.const(c)
            for atom, e in m:
                if keys & atom.free or (isinstance(e, Expr) and keys & e.free_symbols):
                    k = (atom, e)
                    val = memo.get(k)
                    if val is None:
                        val = power(_subs_atom(atom, rules, keys, memo), _subs_exp(e, rules, keys, memo))
                        memo[k] = val
                    prod = prod * val
                else:
                    keep.append((atom, e))
            if keep:
                prod = prod * Expr({tuple(keep): mpq(1)})
            pieces.append(prod)
        res = _finish(out)
        for p in pieces:
            res = res + p
        return res

    # numerics -----------------------------------------------------------
    def evaluate(self, values: Mapping[Symbol, object], memo: dict | None = None):
        """Return ``(value, max |term|)`` at the current gmpy2 precision."""
        if memo is None:
            memo = {}
        total = gmpy2.mpfr(0)
        biggest = gmpy2.mpfr(0)
        for m, c in self.terms.items():
            v = gmpy2.mpfr(c)
            for atom, e in m:
                v = v * _eval_factor(atom, e, values, memo)
            total += v
            a = abs(v)
            if a > biggest:
                biggest = a
        return total, biggest

    def __str__(self) -> str:
        from .printing import render

        return render(self)

    def __repr__(self) -> str:
        return f"Expr({self})"


def _finish(out: dict) -> Expr:
    return Expr({m: c for m, c in out.items() if c})


def _expand_powbase(e: Expr) -> Expr:
    bad = [m for m in e.terms if _needs_expand(m)]
    if not bad:
        return e
    out = dict(e.terms)
    res_parts = []
    for m in bad:
        c = out.pop(m)
        prod = Expr.const(c)
        keep = []
        for atom, ex in m:
            if type(atom) is PowBase and isinstance(ex, int) and ex > 0:
                prod = prod * power(atom.base, ex)
            else:
                keep.append((atom, ex))
        if keep:
            prod = prod * Expr({tuple(keep): mpq(1)})
        res_parts.append(prod)
    res = Expr(out)
    for p in res_parts:
        res = res + p
    return res


def _coerce(x) -> Expr | None:
    if isinstance(x, Expr):
        return x
    if isinstance(x, Symbol):
        return Expr({((x, 1),): mpq(1)})
    if isinstance(x, (int, _MPQ, Fraction)) and not isinstance(x, bool):
        return Expr.const(x)
    return None


def _as_expr(x) -> Expr:
    e = _coerce(x)
    if e is None:
        raise TypeError(f"cannot convert {x!r} to Expr")
    return e


def sympify(x) -> Expr:
    return _as_expr(x)


def _atom_value(atom: Atom) -> Expr:
    if type(atom) is PowBase:
        return atom.base
    return Expr({((atom, 1),): mpq(1)})


def _d_atom(atom: Atom, s: Symbol) -> Expr:
    if type(atom) is Symbol:
        return ONE if atom is s else ZERO
    if type(atom) is LnAbs:
        return atom.arg.derivative(s) * power(atom.arg, -1)
    return atom.base.derivative(s)


def _d_factor(atom: Atom, e, s: Symbol) -> Expr:
    if isinstance(e, Expr) and s in e.free_symbols:
        a = _atom_value(atom)
        whole = Expr.atom(atom, e) if type(atom) is not PowBase else power(atom.base, e)
        return whole * (e * _d_atom(atom, s) * power(a, -1) + ln_abs(a) * e.derivative(s))
    da = _d_atom(atom, s)
    if not da.terms:
        return ZERO
    lower = _exp_add(e, -1)
    if type(atom) is PowBase:
        low = power(atom.base, lower)
    else:
        low = Expr.atom(atom, lower)
    return low * da * _as_expr(e)


def _derive_atom(atom: Atom, images) -> Expr:
    if type(atom) is Symbol:
        return images.get(atom, ZERO)
    if type(atom) is LnAbs:
        return atom.arg.derivation(images) * power(atom.arg, -1)
    return atom.base.derivation(images)


def _derive_factor(atom: Atom, e, images) -> Expr:
    keys = images.keys()
    if isinstance(e, Expr) and any(s in keys for s in e.free_symbols):
        a = _atom_value(atom)
        whole = Expr.atom(atom, e) if type(atom) is not PowBase else power(atom.base, e)
        return whole * (e * _derive_atom(atom, images) * power(a, -1) + ln_abs(a) * e.derivation(images))
    da = _derive_atom(atom, images)
    if not da.terms:
        return ZERO
    lower = _exp_add(e, -1)
    if type(atom) is PowBase:
        low = power(atom.base, lower)
    else:
        low = Expr.atom(atom, lower)
    return low * da * _as_expr(e)


def _subs_atom(atom: Atom, rules, keys, memo) -> Expr:
    if type(atom) is Symbol:
        v = rules.get(atom)
        return _as_expr(v) if v is not None else Expr({((atom, 1),): mpq(1)})
    if type(atom) is LnAbs:
        return ln_abs(atom.arg._subs(rules, keys, memo))
    return atom.base._subs(rules, keys, memo)


def _subs_exp(e, rules, keys, memo):
    if isinstance(e, Expr):
        return _norm_exp(e._subs(rules, keys, memo))
    return e


def _eval_factor(atom: Atom, e, values, memo):
    key = (atom, e)
    hit = memo.get(key)
    if hit is not None:
        return hit
    base_v = memo.get(atom)
    if base_v is None:
        if type(atom) is Symbol:
            try:
                base_v = gmpy2.mpfr(values[atom])
            except KeyError:
                raise MissingAssignmentError(f"no value for {atom.name}") from None
        elif type(atom) is LnAbs:
            a, _ = atom.arg.evaluate(values, memo)
            if a == 0:
                raise EvalDomainError("ln of zero")
            base_v = gmpy2.log(abs(a))
        else:
            base_v, _ = atom.base.evaluate(values, memo)
        memo[atom] = base_v
    if isinstance(e, int):
        if base_v == 0 and e < 0:
            raise EvalDomainError("division by zero")
        v = base_v ** e
    else:
        if isinstance(e, Expr):
            ev, _ = e.evaluate(values, memo)
        else:
            ev = gmpy2.mpfr(e)
        if base_v < 0:
            raise EvalDomainError("non-integer power of a negative value")
        if base_v == 0:
            if ev > 0:
                v = gmpy2.mpfr(0)
            else:
                raise EvalDomainError("non-positive power of zero")
        else:
            v = base_v ** ev
    memo[key] = v
    return v


def _content(e: Expr):
    """Split a multi-term sum as ``lc * g * rest`` (g a symbol monomial)."""
    from .printing import leading_monomial

    mins: dict | None = None
    for m in e.terms:
        cur = {atom: ex for atom, ex in m if type(atom) is Symbol and isinstance(ex, int)}
        if mins is None:
            mins = cur
        else:
            mins = {a: min(x, cur[a]) for a, x in mins.items() if a in cur}
        if not mins:
            break
    g = tuple(sorted(((a, x) for a, x in (mins or {}).items() if x != 0), key=_rank))
    if g:
        inv = tuple((a, -x) for a, x in g)
        e = Expr({_mono_mul(m, inv): c for m, c in e.terms.items()})
    lc = e.terms[leading_monomial(e)]
    if lc != 1:
        e = e.scale(1 / lc)
    return lc, g, e


def power(base, e) -> Expr:
    """``base ** e`` for integer, rational or symbolic exponents.

    Positive arguments are assumed wherever a non-integer power is
    distributed over a product; negative integer powers of sums and all
    non-integer powers of sums become opaque atoms.
    """
    base = _as_expr(base)
    e = _norm_exp(e if not isinstance(e, Symbol) else _as_expr(e))
    if isinstance(e, int):
        if e == 0:
            return ONE
        if e == 1:
            return base
        t = base.terms
        if not t:
            if e < 0:
                raise ZeroDivisionError("zero to a negative power")
            return ZERO
        if len(t) == 1:
            (m, c), = t.items()
            if e < 0 and not c:
                raise ZeroDivisionError
            nm = tuple((a, _exp_mul(x, e)) for a, x in m)
            return _expand_powbase(Expr({nm: c ** e}))
        if e > 0:
            result = ONE
            sq = base
            n = e
            while n:
                if n & 1:
                    result = result * sq
                n >>= 1
                if n:
                    sq = sq * sq
            return result
        return _opaque_power(base, e)
    t = base.terms
    if not t:
        if not isinstance(e, Expr) and e > 0:
            return ZERO
        raise EvalDomainError("zero to a non-positive or symbolic power")
    if len(t) == 1:
        (m, c), = t.items()
        if c > 0:
            factors = tuple((a, _exp_mul(x, e)) for a, x in m)
            out = Expr({tuple(p for p in factors if not (isinstance(p[1], int) and p[1] == 0)): mpq(1)})
            if c != 1:
                out = out * _const_power(c, e)
            return _expand_powbase(out)
    return _opaque_power(base, e)


def _const_power(c, e) -> Expr:
    if isinstance(e, int):
        return Expr.const(mpq(c) ** e)
    if c == 1:
        return ONE
    if not isinstance(e, Expr):
        # exact rational root when available
        num, den = int(c.numerator), int(c.denominator)
        p, q = int(e.numerator), int(e.denominator)
        rn, exact_n = gmpy2.iroot(num, q) if num > 0 else (0, False)
        rd, exact_d = gmpy2.iroot(den, q)
        if num > 0 and exact_n and exact_d:
            return Expr.const(mpq(int(rn), int(rd)) ** p)
    return Expr.atom(PowBase(Expr.const(c)), e)


def _opaque_power(base: Expr, e) -> Expr:
    if base.is_const():
        return _const_power(base.const_value(), e)
    lc, g, rest = _content(base)
    if not isinstance(e, int) and lc < 0:
        lc, rest = -lc, -rest
    out = Expr.atom(PowBase(rest), e)
    if g:
        out = out * Expr({tuple((a, _exp_mul(x, e)) for a, x in g): mpq(1)})
    if lc != 1:
        out = out * _const_power(lc, e)
    return out


def ln_abs(arg) -> Expr:
    """ln|arg| as an opaque node; the argument sign is normalized away."""
    from .printing import leading_monomial

    arg = _as_expr(arg)
    if not arg.terms:
        raise EvalDomainError("ln of zero")
    if arg.is_const():
        c = abs(arg.const_value())
        if c == 1:
            return ZERO
        return Expr.atom(LnAbs(Expr.const(c)))
    if arg.terms[leading_monomial(arg)] < 0:
        arg = -arg
    return Expr.atom(LnAbs(arg))


def sqrt(arg) -> Expr:
    return power(arg, mpq(1, 2))


def sym(s: Symbol) -> Expr:
    return Expr({((s, 1),): mpq(1)})


ZERO = Expr({})
ONE = Expr({(): mpq(1)})
