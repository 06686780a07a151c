"""Exterior forms with expression coefficients.

A :class:`DiffForm` maps strictly increasing tuples of basis symbols to
coefficients.  Basis symbols are either coordinates (``t x y``, jets, fibers),
standing for their differentials, or abstract generators (``gen`` symbols)
naming 1-forms of a coframe.  Both live in one ordered alphabet, so the same
class carries coordinate forms, forms written in a coframe, and mixtures of
the two.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

from .jetspace import JetContext, is_internal
from .symexpr import ONE, ZERO, Expr, Symbol, Verdict, ZeroTester, sym, sympify
from .symexpr.expr import SymExprError
from .symexpr.symbols import gen

MAX_DEGREE = 3

COORD_KINDS = ("base", "jet", "fiber")


class FormError(SymExprError):
    pass


class FrameError(FormError):
    """The coframe is not pointwise independent."""


def _key(s: Symbol):
    return s.coord_key


def _sort_with_sign(idx: Sequence[Symbol]):
    """Sort basis symbols; return (sign, tuple) or (0, None) on a repeat."""
    arr = list(idx)
    sign = 1
    n = len(arr)
    for i in range(1, n):
        j = i
        while j > 0 and _key(arr[j - 1]) > _key(arr[j]):
            arr[j - 1], arr[j] = arr[j], arr[j - 1]
            sign = -sign
            j -= 1
    for i in range(1, n):
        if arr[i - 1] is arr[i]:
            return 0, None
    return sign, tuple(arr)


def _merge_sign(a: tuple, b: tuple):
    """Sign of the shuffle that sorts a+b, or 0 if they overlap."""
    inversions = 0
    j = 0
    nb = len(b)
    for s in a:
        ks = _key(s)
        while j < nb and _key(b[j]) < ks:
            j += 1
        if j < nb and b[j] is s:
            return 0, None
        inversions += j
    merged = tuple(sorted(a + b, key=_key))
    return (-1 if inversions & 1 else 1), merged


class DiffForm:
    __slots__ = ("degree", "terms")

    def __init__(self, terms: Mapping[tuple, Expr] | None = None, degree: int | None = None):
        clean = {}
        for k, v in (terms or {}).items():
            v = sympify(v)
            if v.terms:
                clean[k] = v
        if degree is None:
            if not clean:
                raise FormError("degree required for the zero form")
            degree = len(next(iter(clean)))
        if degree > MAX_DEGREE:
            raise FormError(f"degree {degree} exceeds the cap {MAX_DEGREE}")
        for k in clean:
            if len(k) != degree:
                raise FormError("mixed degrees in one form")
        self.degree = degree
        self.terms = clean

    # construction -------------------------------------------------------
    @staticmethod
    def zero(degree: int) -> "DiffForm":
        return DiffForm({}, degree)

    @staticmethod
    def basis(s: Symbol) -> "DiffForm":
        return DiffForm({(s,): ONE}, 1)

    @staticmethod
    def one_form(coeffs: Mapping[Symbol, object]) -> "DiffForm":
        return DiffForm({(s,): sympify(c) for s, c in coeffs.items()}, 1)

    @staticmethod
    def from_items(items: Iterable, degree: int) -> "DiffForm":
        out: dict = {}
        for idx, c in items:
            sign, key = _sort_with_sign(idx)
            if not sign:
                continue
            c = sympify(c)
            prev = out.get(key)
            val = c if sign > 0 else -c
            out[key] = val if prev is None else prev + val
        return DiffForm(out, degree)

    # queries ------------------------------------------------------------
    def is_zero_canonical(self) -> bool:
        return not self.terms

    def is_zero(self, tester: ZeroTester) -> Verdict:
        return tester.is_zero_all(self.terms.values())

    def prune(self, tester: ZeroTester) -> "DiffForm":
        """Drop coefficients that test as zero (only the probabilistic ones can)."""
        keep = {}
        for k, c in self.terms.items():
            if c.is_laurent() or tester.is_zero(c) is not Verdict.ZERO:
                keep[k] = c
        return DiffForm(keep, self.degree)

    def coeff(self, *idx: Symbol) -> Expr:
        sign, key = _sort_with_sign(idx)
        if not sign:
            return ZERO
        c = self.terms.get(key, ZERO)
        return c if sign > 0 else -c

    def basis_symbols(self) -> set:
        return {s for k in self.terms for s in k}

    @property
    def free_symbols(self) -> frozenset:
        out = set()
        for c in self.terms.values():
            out |= c.free_symbols
        return frozenset(out)

    def __eq__(self, other) -> bool:
        if not isinstance(other, DiffForm):
            return NotImplemented
        if not self.terms and not other.terms:
            return True
        return self.degree == other.degree and self.terms == other.terms

    def __hash__(self):
        return hash((self.degree, frozenset(self.terms.items())))

    # linear structure ---------------------------------------------------
    def __add__(self, other) -> "DiffForm":
        if not isinstance(other, DiffForm):
            if isinstance(other, int) and other == 0:
                return self
            return NotImplemented
        if not other.terms:
            return self
        if not self.terms:
            return other
        if other.degree != self.degree:
            raise FormError("adding forms of different degrees")
        out = dict(self.terms)
        for k, v in other.terms.items():
            prev = out.get(k)
            out[k] = v if prev is None else prev + v
        return DiffForm(out, self.degree)

    __radd__ = __add__

    def __neg__(self) -> "DiffForm":
        return DiffForm({k: -v for k, v in self.terms.items()}, self.degree)

    def __sub__(self, other) -> "DiffForm":
        if not isinstance(other, DiffForm):
            return NotImplemented
        return self + (-other)

    def __mul__(self, c) -> "DiffForm":
        if isinstance(c, DiffForm):
            return NotImplemented
        c = sympify(c)
        if not c.terms:
            return DiffForm.zero(self.degree)
        return DiffForm({k: v * c for k, v in self.terms.items()}, self.degree)

    __rmul__ = __mul__

    def __truediv__(self, c) -> "DiffForm":
        return self * (ONE / sympify(c))

    def map_coeffs(self, fn: Callable[[Expr], Expr]) -> "DiffForm":
        return DiffForm({k: fn(v) for k, v in self.terms.items()}, self.degree)

    def subs(self, rules: Mapping[Symbol, Expr]) -> "DiffForm":
        if not rules:
            return self
        return self.map_coeffs(lambda c: c.subs(rules))

    def wedge(self, other: "DiffForm") -> "DiffForm":
        return wedge(self, other)

    def __and__(self, other):
        if not isinstance(other, DiffForm):
            return NotImplemented
        return wedge(self, other)

    def replace_basis(self, images: Mapping[Symbol, "DiffForm"]) -> "DiffForm":
        """Substitute 1-forms for basis symbols (a linear change of basis)."""
        if not images or not (self.basis_symbols() & images.keys()):
            return self
        acc: dict = {}
        for idx, c in self.terms.items():
            parts = [images.get(s) or DiffForm.basis(s) for s in idx]
            prod = _wedge_many(parts, self.degree)
            for k, v in prod.terms.items():
                prev = acc.get(k)
                val = v * c
                acc[k] = val if prev is None else prev + val
        return DiffForm(acc, self.degree)

    def restrict(self, keep: Callable[[tuple], bool]) -> "DiffForm":
        return DiffForm({k: v for k, v in self.terms.items() if keep(k)}, self.degree)

    # output -------------------------------------------------------------
    def render(self, style: str = "plain") -> str:
        if not self.terms:
            return "0"
        parts = []
        for k in sorted(self.terms, key=lambda k: tuple(_key(s) for s in k)):
            basis = "^".join(_basis_name(s) for s in k)
            parts.append(f"({_render(self.terms[k], style)})*{basis}")
        return " + ".join(parts)

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"DiffForm<{self.degree}>({self.render()})"


def _render(e: Expr, style: str) -> str:
    from .symexpr.printing import render

    return render(e, style)


def _basis_name(s: Symbol) -> str:
    return s.name if s.kind == "gen" else "d" + s.name


def _wedge_many(parts: Sequence[DiffForm], degree: int) -> DiffForm:
    if not parts:
        return scalar(ONE)
    out = parts[0]
    for p in parts[1:]:
        out = wedge(out, p)
    return out


def wedge(a: DiffForm, b: DiffForm) -> DiffForm:
    deg = a.degree + b.degree
    if deg > MAX_DEGREE:
        raise FormError(f"wedge of degree {deg} exceeds the cap {MAX_DEGREE}")
    out: dict = {}
    for ka, ca in a.terms.items():
        for kb, cb in b.terms.items():
            sign, key = _merge_sign(ka, kb)
            if not sign:
                continue
            v = ca * cb
            if sign < 0:
                v = -v
            prev = out.get(key)
            out[key] = v if prev is None else prev + v
    return DiffForm(out, deg)


def wedge_all(*forms: DiffForm) -> DiffForm:
    out = forms[0]
    for f in forms[1:]:
        out = wedge(out, f)
    return out


def d(s: Symbol) -> DiffForm:
    """The basis 1-form ``ds``."""
    return DiffForm.basis(s)


def scalar(e) -> DiffForm:
    return DiffForm({(): sympify(e)}, 0)


def parse_form(text: str, namespace: Mapping[str, object]):
    """Parse a form expression; names in ``namespace`` denote forms or scalars."""
    from .symexpr.parser import FormParser

    return FormParser(text, dict(namespace)).parse()


# exterior derivative --------------------------------------------------------

def _coordinate_differential(s: Symbol):
    return DiffForm.basis(s) if s.kind in COORD_KINDS else None


def exterior_derivative(
    f,
    d_function: Callable[[Symbol], DiffForm | None],
    d_basis: Callable[[Symbol], DiffForm | None],
) -> DiffForm:
    """Leibniz-rule exterior derivative.

    ``d_function(s)`` is the differential of the coefficient symbol ``s``
    (None for constants); ``d_basis(b)`` is the 2-form ``d(b)`` for a basis
    symbol (None when it is closed).
    """
    if isinstance(f, (Expr, int)) or not isinstance(f, DiffForm):
        f = scalar(f)
    deg = f.degree + 1
    if deg > MAX_DEGREE:
        raise FormError(f"exterior derivative would have degree {deg}")
    acc: dict = {}
    extra: list[DiffForm] = []
    dcache: dict = {}
    for idx, c in f.terms.items():
        for s in c.free_symbols:
            if s not in dcache:
                dcache[s] = d_function(s)
            ds = dcache[s]
            if ds is None:
                continue
            dc = c.derivative(s)
            if not dc.terms:
                continue
            for kk, vv in ds.terms.items():
                sign, key = _merge_sign(kk, idx)
                if not sign:
                    continue
                v = vv * dc
                if sign < 0:
                    v = -v
                prev = acc.get(key)
                acc[key] = v if prev is None else prev + v
        for i, b in enumerate(idx):
            db = d_basis(b)
            if db is None or not db.terms:
                continue
            left = DiffForm({idx[:i]: ONE}, i)
            right = DiffForm({idx[i + 1:]: ONE}, len(idx) - i - 1)
            term = wedge(wedge(left, db), right) * c
            extra.append(-term if i & 1 else term)
    out = DiffForm(acc, deg)
    for e in extra:
        out = out + e
    return out


def reduce_form(f: DiffForm, ctx: JetContext) -> DiffForm:
    """Restrict a coordinate form to the equation manifold."""
    images = {}
    for s in f.basis_symbols():
        if s.kind == "jet" and not is_internal(s):
            images[s] = ext_d(ctx.reduce(sym(s)))
    out = f.replace_basis(images) if images else f
    return out.map_coeffs(ctx.reduce)


def ext_d(f, ctx: JetContext | None = None, on_shell: bool = False) -> DiffForm:
    """Coordinate exterior derivative; ``on_shell`` restricts first."""
    if not isinstance(f, DiffForm):
        f = scalar(f)
    if on_shell:
        if ctx is None:
            raise FormError("on-shell exterior derivative needs a context")
        f = reduce_form(f, ctx)
    for s in f.basis_symbols():
        if s.kind == "gen":
            raise FormError(f"ext_d on abstract generator {s.name}; use structure_d")
    return exterior_derivative(f, _coordinate_differential, lambda b: None)


def structure_d(
    f,
    dgen: Mapping[Symbol, DiffForm],
    dfun: Mapping[Symbol, DiffForm],
) -> DiffForm:
    """Exterior derivative in an abstract algebra with given structure equations.

    Generators not in ``dgen`` and coefficient symbols not in ``dfun`` raise;
    parameters (``k``, ``lam``) are constants.
    """

    def d_function(s: Symbol):
        if s in dfun:
            return dfun[s]
        if s.kind == "param":
            return None
        raise FormError(f"no differential known for {s.name}")

    def d_basis(b: Symbol):
        if b in dgen:
            return dgen[b]
        raise FormError(f"no structure equation for {b.name}")

    return exterior_derivative(f, d_function, d_basis)


# contact forms --------------------------------------------------------------

def contact_form(index: str, ctx: JetContext | None = None) -> DiffForm:
    """``du_I - u_{It} dt - u_{Ix} dx - u_{Iy} dy``, reduced on-shell if ``ctx``."""
    from .symexpr.symbols import T, X, Y, jet

    u = jet(index)
    f = DiffForm.one_form(
        {
            u: ONE,
            T: -sym(jet(index + "t")),
            X: -sym(jet(index + "x")),
            Y: -sym(jet(index + "y")),
        }
    )
    return reduce_form(f, ctx) if ctx is not None else f


def contact_forms_upto(order: int, ctx: JetContext) -> list[DiffForm]:
    """On-shell contact forms for the internal jets of order <= ``order``."""
    from .jetspace import all_jets

    return [contact_form(s.index, ctx) for s in all_jets(order) if is_internal(s)]


# coframes and frames ---------------------------------------------------------

_GEN_POSITIONS: dict[str, int] = {}


def label(name: str) -> Symbol:
    """Generator symbol standing for the coframe element ``name``."""
    pos = _GEN_POSITIONS.get(name, 10**6)
    return gen(name, pos)


def register_labels(names: Sequence[str], start: int = 0) -> None:
    for i, n in enumerate(names):
        _GEN_POSITIONS.setdefault(n, start + i)


@dataclass
class Coframe:
    names: list[str]
    forms: list[DiffForm]
    completion: list[Symbol] = field(default_factory=list)

    def __post_init__(self):
        if len(self.names) != len(self.forms):
            raise FormError("names and forms differ in length")
        if len(set(self.names)) != len(self.names):
            raise FormError("duplicate coframe names")
        for f in self.forms:
            if f.degree != 1:
                raise FormError("coframe elements must be 1-forms")

    def __getitem__(self, name: str) -> DiffForm:
        return self.forms[self.names.index(name)]

    def items(self):
        return zip(self.names, self.forms)

    def labels(self) -> list[Symbol]:
        return [label(n) for n in self.names]


class Frame:
    """Change of basis from coordinate differentials to coframe labels.

    Gauss-Jordan elimination on the coframe rows chooses one pivot
    coordinate per element, preferring single-term entries so that division
    stays inside the Laurent ring.  Each pivot differential then has an
    expansion ``dz_p = sum_i B_pi w_i - sum_k R_pk dz_k`` over the labels and the
    remaining (completion) coordinates.
    """

    def __init__(self, coframe: Coframe, tester: ZeroTester | None = None):
        self.coframe = coframe
        self.tester = tester or ZeroTester()
        self.labels = coframe.labels()
        rows = [dict((k[0], v) for k, v in f.terms.items()) for f in coframe.forms]
        n = len(rows)
        combo = [{i: ONE} for i in range(n)]
        pivots: list[Symbol | None] = [None] * n
        pending = set(range(n))
        while pending:
            # sparsest remaining row first
            i = min(pending, key=lambda r: (len(rows[r]), r))
            pending.discard(i)
            row = rows[i]
            for k in list(row):
                if row[k].terms and not row[k].is_laurent():
                    if self.tester.is_zero(row[k]) is Verdict.ZERO:
                        del row[k]
            if not row:
                raise FrameError(f"coframe element {coframe.names[i]} is dependent on the others")
            p = self._choose_pivot(row)
            inv = ONE / row[p]
            row = {k: v * inv for k, v in row.items()}
            row[p] = ONE
            combo[i] = {j: v * inv for j, v in combo[i].items()}
            rows[i] = row
            pivots[i] = p
            for r in range(n):
                if r == i:
                    continue
                factor = rows[r].get(p)
                if factor is None or not factor.terms:
                    continue
                other = rows[r]
                for k, v in row.items():
                    nv = other.get(k, ZERO) - factor * v
                    if nv.terms:
                        other[k] = nv
                    else:
                        other.pop(k, None)
                other.pop(p, None)
                cr = combo[r]
                for j, v in combo[i].items():
                    nv = cr.get(j, ZERO) - factor * v
                    if nv.terms:
                        cr[j] = nv
                    else:
                        cr.pop(j, None)
        self.pivots = pivots
        self.expansion: dict[Symbol, DiffForm] = {}
        for i in range(n):
            p = pivots[i]
            terms = {(self.labels[j],): v for j, v in combo[i].items()}
            for k, v in rows[i].items():
                if k is not p:
                    terms[(k,)] = -v
            self.expansion[p] = DiffForm.from_items(terms.items(), 1)
        self.completion = sorted(
            {k for row in rows for k in row if k not in self.expansion}
            | set(coframe.completion),
            key=_key,
        )

    @staticmethod
    def _choose_pivot(row: dict) -> Symbol:
        best = None
        for k, v in row.items():
            score = (len(v.terms) == 1, v.is_laurent(), _key(k))
            if best is None or score > best[0]:
                best = (score, k)
        return best[1]

    def to_frame(self, f: DiffForm) -> DiffForm:
        """Rewrite a coordinate form over labels and completion differentials."""
        return f.replace_basis(self.expansion)

    def from_frame(self, f: DiffForm) -> DiffForm:
        """Inverse of :meth:`to_frame`: labels back to coordinate forms."""
        images = {lab: form for lab, form in zip(self.labels, self.coframe.forms)}
        return f.replace_basis(images)

    def label_of(self, name: str) -> Symbol:
        return self.labels[self.coframe.names.index(name)]


@dataclass
class Decomposition:
    coefficients: dict[tuple[str, ...], Expr]
    remainder: DiffForm
    frame_form: DiffForm


def decompose(f: DiffForm, cf: Coframe | Frame, tester: ZeroTester | None = None) -> Decomposition:
    frame = cf if isinstance(cf, Frame) else Frame(cf, tester)
    ff = frame.to_frame(f)
    if tester is not None:
        ff = ff.prune(tester)
    coeffs = {}
    rem = {}
    for k, v in ff.terms.items():
        if all(s.kind == "gen" for s in k):
            coeffs[tuple(s.name for s in k)] = v
        else:
            rem[k] = v
    return Decomposition(coeffs, DiffForm(rem, f.degree), ff)


def contact_reduce(
    f: DiffForm,
    ideal: Sequence[DiffForm],
    ctx: JetContext | None = None,
    on_shell: bool = True,
    tester: ZeroTester | None = None,
) -> DiffForm:
    """Normal form of ``f`` modulo the algebraic ideal spanned by ``ideal``."""
    tester = tester or ZeroTester()
    if on_shell and ctx is not None:
        f = reduce_form(f, ctx)
        ideal = [reduce_form(g, ctx) for g in ideal]
    names = [f"__ideal{i}" for i in range(len(ideal))]
    frame = Frame(Coframe(names, list(ideal)), tester)
    ff = frame.to_frame(f)
    out = ff.restrict(lambda k: all(s.kind != "gen" or s not in frame.labels for s in k))
    return out.prune(tester)


@dataclass
class FactorSolution:
    solved: dict[str, DiffForm]
    ambiguity: dict[str, list[str]]
    residual: DiffForm


def solve_factors(
    f: DiffForm,
    pattern: Sequence[tuple[str, str]],
    frame: Frame | None = None,
    tester: ZeroTester | None = None,
) -> FactorSolution:
    """Write a 2-form as ``sum partner_u ^ X_u + residual``.

    ``f`` may be a coordinate form (then ``frame`` rewrites it) or already be
    expressed over labels.  A term containing a partner goes to the first
    pattern entry whose partner it contains; every ``X_u`` is therefore
    determined only modulo the span of all partners, which is what the
    ambiguity lists record.
    """
    if f.degree != 2:
        raise FormError("solve_factors needs a 2-form")
    partners = [p for p, _ in pattern]
    if len(set(partners)) != len(partners):
        raise FormError("partners must be distinct")
    ff = frame.to_frame(f) if frame is not None else f
    if tester is not None:
        ff = ff.prune(tester)
    plabels = [label(p) for p in partners]
    acc: dict[str, dict] = {u: {} for _, u in pattern}
    rem = {}
    for k, v in ff.terms.items():
        a, b = k
        hit = None
        for (p, u), pl in zip(pattern, plabels):
            if a is pl:
                hit = (u, b, v)
                break
            if b is pl:
                hit = (u, a, -v)
                break
        if hit is None:
            rem[k] = v
            continue
        u, other, val = hit
        prev = acc[u].get((other,))
        acc[u][(other,)] = val if prev is None else prev + val
    solved = {u: DiffForm(acc[u], 1) for _, u in pattern}
    ambiguity = {u: list(partners) for _, u in pattern}
    return FactorSolution(solved, ambiguity, DiffForm(rem, 2))


def project_out(f: DiffForm, names: Iterable[str]) -> DiffForm:
    """Drop every term containing one of the given labels."""
    labs = {label(n) for n in names}
    return f.restrict(lambda k: not any(s in labs for s in k))


__all__ = [
    "DiffForm",
    "Coframe",
    "Frame",
    "FactorSolution",
    "Decomposition",
    "FormError",
    "FrameError",
    "wedge",
    "wedge_all",
    "d",
    "scalar",
    "ext_d",
    "structure_d",
    "exterior_derivative",
    "reduce_form",
    "contact_form",
    "contact_forms_upto",
    "decompose",
    "contact_reduce",
    "solve_factors",
    "project_out",
    "label",
    "register_labels",
    "parse_form",
]
