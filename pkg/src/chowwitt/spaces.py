"""Space expressions and the constructors deriving their theories.

Grammar (whitespace-insensitive)::

    Expr := Atom ("x" Atom)?
    Atom := "P(" INT ")" | "BGm" | "Bmu(" INT ")"

A space is built from projective models: P^r directly, BG_m as a truncated
P^{B+2} valid through degree B, and every B mu_n factor as a localization
quotient of a BG_m factor.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property

from . import catalog
from .errors import ArityError, OutOfScope, ParamError, SpaceSyntaxError, UnknownCase
from .fields import FieldModel
from .graded import (Comparison, RingPresentation, compare, tensor_product, twist_str)
from .linalg import FpAbGroup
from .models import ProjectiveModel, QuotientModel, rho_image_index
from .scalars import witt_ring
from .stack import TheoryStack

DEFAULT_BOUND = 6


# ---------------------------------------------------------------------------
# Syntax
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Atom:
    kind: str                 # "P", "BGm" or "Bmu"
    param: int | None = None

    def __str__(self) -> str:
        return self.kind if self.param is None else f"{self.kind}({self.param})"

    @property
    def is_bg(self) -> bool:
        return self.kind in ("BGm", "Bmu")


@dataclass(frozen=True)
class SpaceExpr:
    atoms: tuple[Atom, ...]

    def __str__(self) -> str:
        return " x ".join(str(a) for a in self.atoms)

    @property
    def pic_mod2_rank(self) -> int:
        return sum(0 if a.kind == "Bmu" and a.param % 2 else 1 for a in self.atoms)


_ATOM = re.compile(r"(P|BGm|Bmu)")


def parse_space(text: str) -> SpaceExpr:
    """Parse a space expression; errors carry the offending column."""
    pos = 0
    atoms: list[Atom] = []
    n = len(text)

    def skip() -> None:
        nonlocal pos
        while pos < n and text[pos].isspace():
            pos += 1

    def integer() -> int:
        nonlocal pos
        skip()
        start = pos
        if pos < n and text[pos] in "+-":
            pos += 1
        while pos < n and text[pos].isdigit():
            pos += 1
        if start == pos or not text[start:pos].lstrip("+-"):
            raise SpaceSyntaxError("expected an integer", start)
        return int(text[start:pos])

    def expect(ch: str) -> None:
        nonlocal pos
        skip()
        if pos >= n or text[pos] != ch:
            raise SpaceSyntaxError(f"expected {ch!r}", pos)
        pos += 1

    while True:
        skip()
        start = pos
        m = _ATOM.match(text, pos)
        if not m:
            raise SpaceSyntaxError("expected P(r), BGm or Bmu(n)", pos)
        # 'Bmu' must not be read as a prefix of something longer
        kind = "Bmu" if text.startswith("Bmu", pos) else m.group(1)
        pos += len(kind)
        if kind == "BGm":
            atoms.append(Atom("BGm"))
        else:
            expect("(")
            value = integer()
            expect(")")
            if value < 1:
                raise ParamError(f"{kind}({value}) at position {start}: parameter must be >= 1")
            atoms.append(Atom(kind, value))
        skip()
        if pos >= n:
            break
        if text[pos] not in "xX*":
            raise SpaceSyntaxError("expected 'x' between factors", pos)
        pos += 1
    if len(atoms) > 2:
        raise ArityError(f"at most two factors are supported, got {len(atoms)}")
    return SpaceExpr(tuple(atoms))


# ---------------------------------------------------------------------------
# Derived theories
# ---------------------------------------------------------------------------

@dataclass
class BidegreeRow:
    degree: int
    twist: tuple[int, ...]
    invariant_factors: tuple[int, ...]
    free_rank: int
    rho_image_index: int | None
    generators: list[str]
    margin: int | None          # validity margin of the approximation, None if exact
    flag: str = ""              # "DERIVED" where no closed form pins the group down

    def group_str(self) -> str:
        from .linalg import describe_invariants
        return describe_invariants(self.invariant_factors, self.free_rank)


@dataclass
class SpaceTheories:
    expr: SpaceExpr
    field: FieldModel
    bound: int
    model: ProjectiveModel | QuotientModel
    case: tuple[str, dict] | None          # catalog lookup key
    derivation_log: list[str] = field(default_factory=list)
    swapped: bool = False

    @cached_property
    def stack(self) -> TheoryStack:
        return TheoryStack(self.model, self.bound)

    @property
    def pic_mod2_rank(self) -> int:
        return self.model.nsides - len(self.model.collapsed)

    def twists(self) -> list[tuple[int, ...]]:
        """Twists as bit tuples over the uncollapsed sides."""
        from .graded import all_twists
        return all_twists(self.pic_mod2_rank)

    def full_twist(self, twist: tuple[int, ...]) -> tuple[int, ...]:
        free = [i for i in range(self.model.nsides) if i not in self.model.collapsed]
        out = [0] * self.model.nsides
        for i, b in zip(free, twist):
            out[i] = b
        return tuple(out)

    def margin(self, degree: int) -> int | None:
        """Degrees left before the BG_m truncation stops being certified."""
        root = self.model.root if isinstance(self.model, QuotientModel) else self.model
        if root.bound is None:
            return None
        return root.bound - degree

    def presentation(self, theory: str = "CW") -> RingPresentation | None:
        if self.case is None:
            return None
        name, params = self.case
        try:
            return catalog.closed_form(name, self.field, theory, **params)
        except UnknownCase:
            return None

    def piece(self, theory: str, degree: int, twist: tuple[int, ...]):
        return self.model.piece(theory, degree, self.full_twist(twist))

    def rows(self, theory: str = "CW", twist_filter: tuple[int, ...] | None = None,
             with_generators: bool = True) -> list[BidegreeRow]:
        pres = self.presentation(theory) if with_generators else None
        out = []
        for d in range(self.bound + 1):
            for t in self.twists():
                if twist_filter is not None and tuple(t) != tuple(twist_filter):
                    continue
                P = self.piece(theory, d, t)
                factors, free = P.invariants()
                rho = rho_image_index(self.model, d, self.full_twist(t)) \
                    if theory == "CW" else None
                gens = _generator_names(pres, d, t) if pres is not None \
                    else _piece_generator_names(self.model, P)
                out.append(BidegreeRow(d, tuple(t), factors, free, rho, gens, self.margin(d),
                                       self.row_flag(d)))
        return out

    def row_flag(self, degree: int) -> str:
        """Odd degrees of B mu_n, n even, come from the localization sequence alone:
        the closed form leaves them ambiguous."""
        atoms = self.expr.atoms
        if len(atoms) == 1 and atoms[0].kind == "Bmu" and atoms[0].param % 2 == 0 \
                and degree % 2:
            return "DERIVED"
        return ""

    def compare_to_catalog(self, theory: str = "CW", literal: bool = False) -> Comparison:
        if self.case is None:
            raise UnknownCase(f"no closed form for {self.expr}")
        name, params = self.case
        pres = catalog.closed_form(name, self.field, theory, literal, **params)
        corr = {"c": "e", "c1": "e1", "c2": "e2"} if theory in ("CH", "Ch") else None
        return compare(pres, self.model, corr, theory, self.bound)


def _minimal(candidates, G: FpAbGroup) -> list[int]:
    """Indices of a greedy generating subset of G, in candidate order.

    Works in the coordinates of G's kept generators, which are few."""
    k = G.rank_kept
    span = [list(r) for r in G._red.hnf]
    chosen: list[int] = []
    for i, cols in candidates:
        vecs = [G.reduce(c) for c in cols]
        Q = FpAbGroup(k, span)
        if all(Q.is_zero(v) for v in vecs):
            continue
        chosen.append(i)
        span.extend(vecs)
    return chosen


def _generator_names(pres: RingPresentation, degree: int, twist) -> list[str]:
    R = pres.realize(degree, tuple(twist))
    G, k, alg = R.group, pres.scalars.dim, pres.algebra
    order = sorted(range(len(R.monomials)),
                   key=lambda i: (sum(R.monomials[i]), alg.mono_str(R.monomials[i])))
    cands = [(i, [{i * k + s: 1} for s in range(k)]) for i in order]
    return [alg.mono_str(R.monomials[i]) for i in _minimal(cands, G)]


def _piece_generator_names(model, piece) -> list[str]:
    def name(g) -> str:
        w, c = [], []
        for i, a in sorted(g.items()):
            (c if piece.keys[i][0] == "c" else w).append((piece.labels[i], a))
        if not w and c and all(a % 2 == 0 for _, a in c):
            w = [(f"h*{lab}", a // 2) for lab, a in c]
        parts = w or c
        return " + ".join(lab if a == 1 else f"{a}*{lab}" for lab, a in parts)

    cands = [(i, [g]) for i, g in enumerate(piece.gens)]
    return [name(piece.gens[i]) for i in _minimal(cands, piece.ambient)]


# ---------------------------------------------------------------------------
# Constructors
# ---------------------------------------------------------------------------

def projective_space(r: int, field: FieldModel, bound: int | None = None) -> SpaceTheories:
    if r < 1:
        raise ParamError("P(r) needs r >= 1")
    b = r if bound is None else bound
    model = ProjectiveModel((r,), field)
    return SpaceTheories(SpaceExpr((Atom("P", r),)), field, b, model, ("P", {"r": r}),
                         [f"projective bundle formula for P^{r}"])


def projective_bundle_product(q: int, r: int, field: FieldModel,
                              bound: int | None = None) -> SpaceTheories:
    if q < 1 or r < 1:
        raise ParamError("P(q) x P(r) needs q, r >= 1")
    b = q + r if bound is None else bound
    model = ProjectiveModel((q, r), field)
    return SpaceTheories(SpaceExpr((Atom("P", q), Atom("P", r))), field, b, model,
                         ("PxP", {"q": q, "r": r}),
                         [f"projective bundle formula for P^{q} x P^{r}",
                          "H(I) from pullbacks, mu_a classes and orientation classes"])


def stabilize_bgm_product(factors: int, field: FieldModel,
                          bound: int = DEFAULT_BOUND) -> SpaceTheories:
    if factors not in (1, 2):
        raise ArityError("BG_m products have one or two factors")
    dims = (bound + 2,) * factors
    model = ProjectiveModel(dims, field, name=" x ".join(["BGm"] * factors), bound=bound)
    expr = SpaceExpr((Atom("BGm"),) * factors)
    case = ("BGm", {}) if factors == 1 else ("BGmxBGm", {})
    trunc = " x ".join(f"P^{d}" for d in dims)
    return SpaceTheories(expr, field, bound, model, case,
                         [f"truncate to {trunc}, certified through degree {bound}",
                          "drop R classes and e^{r+1} relations above the bound"])


def localization_quotient(base: SpaceTheories, n: int, side: int,
                          sign: int = 1) -> SpaceTheories:
    """Replace the BG_m factor at ``side`` by B mu_n."""
    if n < 1:
        raise ParamError("Bmu(n) needs n >= 1")
    fld = base.field.excluding(n)
    atoms = list(base.expr.atoms)
    if atoms[side].kind != "BGm":
        raise OutOfScope("localization needs a BG_m factor at that side")
    atoms[side] = Atom("Bmu", n)
    model = QuotientModel(base.model, side, n, sign=sign)
    model.name = " x ".join(str(a) for a in atoms)
    parity = "odd: twist collapses" if n % 2 else "even: split W-tail <U> in degree 0"
    log = base.derivation_log + [
        f"localize side {side + 1} by e(O({n})) ({parity})"]
    return SpaceTheories(SpaceExpr(tuple(atoms)), fld, base.bound, model,
                         _case_for(tuple(atoms)), log)


def _case_for(atoms: tuple[Atom, ...]) -> tuple[str, dict] | None:
    kinds = tuple(a.kind for a in atoms)
    if kinds == ("Bmu",):
        return "Bmu", {"n": atoms[0].param}
    if kinds == ("BGm", "Bmu"):
        return "BGmxBmu", {"n": atoms[1].param}
    if kinds == ("Bmu", "Bmu"):
        m, n = atoms[0].param, atoms[1].param
        if m % 2 == 0 and n % 2:
            return None
        return "BmuxBmu", {"m": m, "n": n}
    return None


def _canonical_order(atoms: tuple[Atom, ...]) -> tuple[tuple[Atom, ...], bool]:
    """BG_m before B mu; an odd B mu before an even one."""
    if len(atoms) != 2:
        return atoms, False
    a, b = atoms
    if a.kind == "Bmu" and b.kind == "BGm":
        return (b, a), True
    if a.kind == "Bmu" and b.kind == "Bmu" and a.param % 2 == 0 and b.param % 2:
        return (b, a), True
    return atoms, False


def build_space(expr: SpaceExpr | str, field: FieldModel,
                bound: int = DEFAULT_BOUND, sign: int = 1) -> SpaceTheories:
    """Derive the theories of a catalog space through degree ``bound``."""
    if isinstance(expr, str):
        expr = parse_space(expr)
    atoms, swapped = _canonical_order(expr.atoms)
    kinds = tuple(a.kind for a in atoms)
    if "P" in kinds and any(a.is_bg for a in atoms):
        raise OutOfScope("products of P^r with classifying spaces are not covered")
    for a in atoms:
        if a.kind == "Bmu":
            field = field.excluding(a.param)
    if kinds == ("P",):
        out = projective_space(atoms[0].param, field, bound)
    elif kinds == ("P", "P"):
        out = projective_bundle_product(atoms[0].param, atoms[1].param, field, bound)
    else:
        out = stabilize_bgm_product(len(atoms), field, bound)
        # localize the later side first so the outer quotient sees the inner one
        for side in reversed(range(len(atoms))):
            if atoms[side].kind == "Bmu":
                out = localization_quotient(out, atoms[side].param, side, sign)
    if len(atoms) == 1 and kinds == ("Bmu",) and atoms[0].param % 2 == 0:
        out.derivation_log.append("odd degrees: localization sequence only [DERIVED]")
    if swapped:
        out.swapped = True
        out.derivation_log.insert(0, f"reorder factors: {expr} -> {SpaceExpr(atoms)}")
    return out


# ---------------------------------------------------------------------------
# Degree-0 Witt classes and Kunneth verdicts
# ---------------------------------------------------------------------------

def witt_degree0_product(m: int, n: int, field: FieldModel) -> tuple[list[str], FpAbGroup]:
    """H^0(B mu_m x B mu_n, I^0) as the tensor product of the factors' W-bases."""
    first = ["1"] + (["U1"] if m % 2 == 0 else [])
    second = ["1"] + (["U2"] if n % 2 == 0 else [])
    names = []
    for a in first:
        for b in second:
            names.append(b if a == "1" else (a if b == "1" else f"{a}*{b}"))
    w = witt_ring(field)
    G = FpAbGroup(0)
    for _ in names:
        G = G.direct_sum(w.group)
    return names, G


_SIDE_NAMES = [{"H": "H1", "U": "U1", "e": "e1"}, {"H": "H2", "U": "U2", "e": "e2"}]


def factor_presentation(atom: Atom, field: FieldModel) -> RingPresentation:
    if atom.kind == "BGm":
        return catalog.bgm_chow_witt(field)
    if atom.kind == "Bmu":
        return catalog.bmu_chow_witt(field.excluding(atom.param), atom.param)
    raise OutOfScope(f"no Kunneth factor for {atom}")


@dataclass
class KunnethVerdict:
    expr: SpaceExpr
    comparison: Comparison
    flag: str = ""

    @property
    def verdict(self) -> str:
        return self.comparison.verdict


REMARK_FLAG = ("closed-form sources disagree for two odd factors (iso vs. "
               "surjective-not-injective); verdict is the computed one")


def kunneth_verdict(expr: SpaceExpr | str, field: FieldModel,
                    bound: int = DEFAULT_BOUND) -> KunnethVerdict:
    """Compare CH~(X) (x)_GW CH~(Y) with CH~(X x Y) bidegree by bidegree."""
    if isinstance(expr, str):
        expr = parse_space(expr)
    if len(expr.atoms) != 2:
        raise ArityError("the Kunneth map needs two factors")
    space = build_space(expr, field, bound)
    X, Y = (space.expr.atoms if space.swapped else expr.atoms)
    pX = factor_presentation(X, space.field)
    pY = factor_presentation(Y, space.field)
    T = tensor_product(pX, pY, _SIDE_NAMES[0], _SIDE_NAMES[1],
                       name=f"CH~({X}) (x) CH~({Y})")
    cmp = compare(T, space.model, None, "CW", bound)
    flag = ""
    if X.kind == Y.kind == "Bmu" and X.param % 2 and Y.param % 2:
        flag = REMARK_FLAG
    return KunnethVerdict(expr, cmp, flag)


# ---------------------------------------------------------------------------
# Regression cases
# ---------------------------------------------------------------------------

REGRESSION_SPACES = [
    "P(2)", "P(3)", "P(2) x P(3)", "P(3) x P(3)",
    "BGm", "BGm x BGm",
    "Bmu(2)", "Bmu(3)", "Bmu(4)", "Bmu(5)",
    "BGm x Bmu(2)", "BGm x Bmu(3)",
    "Bmu(3) x Bmu(5)", "Bmu(3) x Bmu(4)", "Bmu(2) x Bmu(4)",
]
REGRESSION_FIELDS = ["C", "R", "F3", "F5"]


def regression_cases() -> list[tuple[str, str]]:
    out = []
    for s in REGRESSION_SPACES:
        for f in REGRESSION_FIELDS:
            try:
                fld = FieldModel.parse(f)
                for a in parse_space(s).atoms:
                    if a.kind == "Bmu":
                        fld.excluding(a.param)
            except ParamError:
                continue
            out.append((s, f))
    return out


def render_table(space: SpaceTheories, theory: str = "CW",
                 twist_filter: tuple[int, ...] | None = None) -> str:
    lines = [f"space {space.expr}", f"field {space.field.name}", f"bound {space.bound}",
             f"theory {theory}"]
    for line in space.derivation_log:
        lines.append(f"# {line}")
    lines.append(f"{'deg':>3} {'twist':>5}  {'group':<24} {'rho-index':>9}  generators")
    for r in space.rows(theory, twist_filter):
        rho = "-" if r.rho_image_index is None and theory != "CW" else \
            ("inf" if r.rho_image_index is None else str(r.rho_image_index))
        lines.append(f"{r.degree:>3} {twist_str(r.twist):>5}  {r.group_str():<24} {rho:>9}  "
                     + ", ".join(r.generators) + (f"  [{r.flag}]" if r.flag else ""))
    return "\n".join(lines) + "\n"
