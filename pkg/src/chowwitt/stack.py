"""The four theories of a space and the maps of the key diagram.

A ``TheoryStack`` wraps a derived model and realizes, per bidegree, the
structure maps

    h_L : CH -> CH~(L)        rho : CH~(L) -> CH        mod_h : CH~(L) -> H(I, L)
    mod_2 : CH -> Ch          rho~ : H(I, L) -> Ch      eta : H^i(I^{i+1}) -> H^i(I^i)
    beta_L : Ch^i -> H^{i+1}(I^{i+1}, L)                d_L = beta_L o mod_2

as ``GroupHom`` objects, together with the consistency checks tying them
together.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import InjectivityUnknown, NoRepresentative, OutOfScope, TwistMismatch
from .graded import GradedAlgebra, Poly, Twist, all_twists, twist_add
from .linalg import FpAbGroup, GroupHom
from .models import (Piece, ProjectiveModel, QuotientModel, delta, elem_add, euler_poly,
                     side_suffix)
from .scalars import hyperbolic

Model = ProjectiveModel | QuotientModel


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} {self.name}{': ' + self.detail if self.detail else ''}"


@dataclass
class AssembledPiece:
    degree: int
    twist: Twist
    piece: Piece
    certificate: str        # "no 2-torsion", "eta injective", "localization" or "unknown"


class TheoryStack:
    """CH, Ch, H(I), H(Ibar) and CH~ of one model, with the maps between them."""

    def __init__(self, model: Model, bound: int):
        self.model = model
        self.bound = bound

    # -- pieces ----------------------------------------------------------------
    @property
    def twists(self) -> list[Twist]:
        m = self.model
        return sorted({m.canonical(t) for t in all_twists(m.nsides)})

    def bidegrees(self) -> list[tuple[int, Twist]]:
        return [(d, t) for d in range(self.bound + 1) for t in self.twists]

    def ch(self, d: int) -> Piece:
        return self.model.piece("CH", d, self.twists[0])

    def ch2(self, d: int) -> Piece:
        return self.model.piece("Ch", d, self.twists[0])

    def hibar(self, d: int) -> Piece:
        """H^i(Ibar^i) is identified with Ch^i."""
        return self.ch2(d)

    def hi(self, d: int, t: Twist) -> Piece:
        return self.model.piece("hI", d, t)

    def cw(self, d: int, t: Twist) -> Piece:
        return self.model.piece("CW", d, t)

    # -- maps ----------------------------------------------------------------------
    def h_map(self, d: int, t: Twist) -> GroupHom:
        src, dst = self.ch(d), self.cw(d, t)
        return GroupHom(src.ambient, dst.ambient,
                        [dst.vector(x) for x in self.model.hyperbolic_images(d)])

    def rho(self, d: int, t: Twist) -> GroupHom:
        src, dst = self.cw(d, t), self.ch(d)
        return GroupHom(src.ambient, dst.ambient,
                        [dst.vector(self.model.project("CH", {k: 1})) for k in src.keys])

    def mod_h(self, d: int, t: Twist) -> GroupHom:
        src, dst = self.cw(d, t), self.hi(d, t)
        return GroupHom(src.ambient, dst.ambient,
                        [dst.vector(self.model.project("hI", {k: 1})) for k in src.keys])

    def mod_2(self, d: int) -> GroupHom:
        src, dst = self.ch(d), self.ch2(d)
        return GroupHom(src.ambient, dst.ambient, [{i: 1} for i in range(len(src.keys))])

    def _projective(self) -> ProjectiveModel:
        if not isinstance(self.model, ProjectiveModel):
            raise OutOfScope("chain-level maps exist only for projective models")
        return self.model

    def rho_tilde(self, d: int, t: Twist) -> GroupHom:
        m = self._projective()
        src, dst = self.hi(d, t), self.ch2(d)
        return GroupHom(src.ambient, dst.ambient,
                        [dst.vector(m.rho_tilde({k: 1})) for k in src.keys])

    def eta(self, d: int, t: Twist) -> GroupHom:
        m = self._projective()
        src, dst = m.level_piece(d, t, d + 1), self.hi(d, t)
        return GroupHom(src.group, dst.ambient, list(src.inclusion.images))

    def beta(self, d: int, t: Twist) -> GroupHom:
        m = self._projective()
        src, dst = self.ch2(d), m.level_piece(d + 1, t, d + 1)
        return GroupHom(src.ambient, dst.ambient,
                        [dst.vector(m.beta(k[1], t)) for k in src.keys])

    def boundary(self, d: int, t: Twist) -> GroupHom:
        return self.mod_2(d).compose(self.beta(d, t))

    # -- checks ----------------------------------------------------------------------
    def check_rho_h(self) -> CheckResult:
        """rho o h_L is multiplication by 2 on CH."""
        bad = []
        for d, t in self.bidegrees():
            ch = self.ch(d)
            comp = self.h_map(d, t).compose(self.rho(d, t))
            for i in range(len(ch.keys)):
                if not ch.ambient.equal(comp.apply({i: 1}), {i: 2}):
                    bad.append((d, t))
        return CheckResult("rho o h = 2", not bad, _where(bad))

    def check_central_square(self) -> CheckResult:
        """rho~ o mod_h = mod_2 o rho on CH~."""
        bad = []
        for d, t in self.bidegrees():
            a = self.mod_h(d, t).compose(self.rho_tilde(d, t))
            b = self.rho(d, t).compose(self.mod_2(d))
            for v in self.cw(d, t).gens:
                if not self.ch2(d).ambient.equal(a.apply(v), b.apply(v)):
                    bad.append((d, t))
                    break
        return CheckResult("central square commutes", not bad, _where(bad))

    def check_bar_exactness(self) -> CheckResult:
        """H^i(I^{i+1}) -> H^i(I^i) -> Ch^i -> H^{i+1}(I^{i+1}) exact in the middle."""
        bad = []
        for d, t in self.bidegrees():
            if d + 1 > self.bound:
                continue
            eta, rt, beta = self.eta(d, t), self.rho_tilde(d, t), self.beta(d, t)
            hi = self.hi(d, t)
            # ker rho~ = im eta inside H^i(I^i)
            K, inc = GroupHom(hi.ambient, rt.codomain, rt.images).kernel()
            ker_in = [inc.apply({i: 1}) for i in range(K.n)]
            span_eta = FpAbGroup(hi.ambient.n, list(hi.ambient.relations) + list(eta.images))
            ok1 = all(span_eta.is_zero(v) for v in ker_in) and \
                all(rt.codomain.is_zero(rt.apply(v)) for v in eta.images)
            # ker beta = im rho~ inside Ch^i
            K2, inc2 = beta.kernel()
            ch2 = self.ch2(d)
            span_rt = FpAbGroup(ch2.ambient.n, list(ch2.ambient.relations) + list(rt.images))
            ok2 = all(span_rt.is_zero(inc2.apply({i: 1})) for i in range(K2.n)) and \
                all(beta.codomain.is_zero(beta.apply(v)) for v in rt.images)
            if not (ok1 and ok2):
                bad.append((d, t))
        return CheckResult("Bar sequence exact", not bad, _where(bad))

    def check_hyperbolic_cokernel(self) -> CheckResult:
        """CH -> CH~(L) -> H(I, L) -> 0 exact: H(I) is CH~ modulo h_L(CH)."""
        bad = []
        for d, t in self.bidegrees():
            cw, hi = self.cw(d, t), self.hi(d, t)
            f = self.mod_h(d, t)
            imgs = [f.apply(v) for v in cw.gens]
            span = FpAbGroup(hi.ambient.n, list(hi.ambient.relations) + imgs)
            surj = all(span.is_zero(g) for g in hi.gens)
            sub = GroupHom(cw.group, hi.ambient, [f.apply(v) for v in cw.inclusion.images])
            K, inc = sub.kernel()
            h_imgs = self.h_map(d, t).images
            h_span = FpAbGroup(cw.ambient.n, list(cw.ambient.relations) + list(h_imgs))
            exact = all(h_span.is_zero(cw.inclusion.apply(inc.apply({i: 1})))
                        for i in range(K.n))
            if not (surj and exact):
                bad.append((d, t))
        return CheckResult("CH -> CH~ -> H(I) -> 0 exact", not bad, _where(bad))

    def run_checks(self) -> list[CheckResult]:
        out = [self.check_rho_h(), self.check_hyperbolic_cokernel()]
        if isinstance(self.model, ProjectiveModel):
            out += [self.check_central_square(), self.check_bar_exactness()]
        return out


def _where(bad: Sequence) -> str:
    return "" if not bad else "fails at " + ", ".join(f"({d}, {''.join(map(str, t))})"
                                                     for d, t in bad[:6])


# ---------------------------------------------------------------------------
# Assembly
# ---------------------------------------------------------------------------

def _has_2_torsion(G: FpAbGroup) -> bool:
    factors, _ = G.invariants()
    return any(f % 2 == 0 for f in factors)


def assemble_chow_witt(stack: TheoryStack, strict: bool = False) -> list[AssembledPiece]:
    """CH~^i(L) per bidegree, with the certificate that the fiber-product
    description H(I) x_Ch ker(d) is valid there.

    Condition (1) is the absence of 2-torsion in CH^i; condition (2) is
    injectivity of eta.  Localization models are certified by construction.
    """
    out = []
    for d, t in stack.bidegrees():
        piece = stack.cw(d, t)
        if isinstance(stack.model, QuotientModel):
            cert = "localization"
        elif not _has_2_torsion(stack.ch(d).group):
            cert = "no 2-torsion"
        elif stack.eta(d, t).is_injective():
            cert = "eta injective"
        else:
            cert = "unknown"
            if strict:
                raise InjectivityUnknown(f"no certificate at ({d}, {t})")
        out.append(AssembledPiece(d, t, piece, cert))
    return out


def assemble_nondiagonal(model: Model, degree: int, j: int, twist: Twist) -> FpAbGroup:
    """H^i(X, K^MW_j, L) for j < i, which equals H^i(X, I^j, L) here."""
    if j >= degree:
        raise OutOfScope("only j < i is handled off the diagonal")
    if isinstance(model, ProjectiveModel):
        return model.level_piece(degree, model.canonical(twist), j).group
    if degree == 0 and not any(model.canonical(twist)):
        w = model.w
        G = FpAbGroup(0)
        for _ in model.w_basis():
            G = G.direct_sum(w.group)
        return G
    return FpAbGroup(0)


# ---------------------------------------------------------------------------
# Euler classes, Bockstein, twist normalization
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EulerClass:
    bundle: tuple[int, ...]      # O(a) or O(a, b)
    value: tuple                 # frozen polynomial items

    @property
    def twist(self) -> Twist:
        return tuple(a % 2 for a in self.bundle)


def euler_class(alg: GradedAlgebra, bundle: Sequence[int]) -> Poly:
    """e(O(a)) in the symbols of ``alg``."""
    return euler_poly(alg, tuple(bundle))


def hyperbolic_chern(alg: GradedAlgebra, twist: Twist, chern: Sequence[int]) -> Poly:
    """h_L(c_1(M)) for M = O(b): with c_s := c_1(O(-delta_s)) = rho(e_s),
    h_L(c_s) = H_{L + delta_s} e_s and c_1(O(b)) = -sum b_s c_s."""
    nsides = len(twist)
    out: Poly = {}
    for s, b in enumerate(chern):
        if not b:
            continue
        tw = twist_add(twist, delta(nsides, s))
        H = alg.var("H" + side_suffix(nsides, tw)) if any(tw) \
            else alg.const(hyperbolic(alg.scalars.field))
        es = alg.var("e" + side_suffix(nsides, delta(nsides, s)))
        out = alg.sub(out, alg.smul(b, alg.mul(H, es)))
    return out


def euler_of_tensor(alg: GradedAlgebra, L: Sequence[int], M: Sequence[int]) -> Poly:
    """e(L (x) M^2) = e(L) + h_L(c(M))."""
    if len(L) != len(M):
        raise TwistMismatch("bundles on different spaces")
    tau = tuple(a % 2 for a in L)
    return alg.add(euler_class(alg, L), hyperbolic_chern(alg, tau, M))


def euler_case_split(alg: GradedAlgebra, n: int) -> Poly:
    """e(O(n)) over BG_m by cases: -n e for n odd, -(n/2) H e for n even."""
    if n % 2:
        return alg.smul(-n, alg.var("e"))
    return alg.smul(-(n // 2), alg.mul(alg.var("H"), alg.var("e")))


def bockstein(model: ProjectiveModel, exponents: Sequence[int], twist: Twist):
    """beta_L(cbar^ex) = e^ex * e(M), M the parity difference of ex and L."""
    if not isinstance(model, ProjectiveModel):
        raise NoRepresentative("Bockstein values need a projective model")
    if any(x < 0 for x in exponents):
        raise NoRepresentative("negative exponent")
    return model.beta(tuple(exponents), tuple(twist))


def twist_normalize(model: Model, p: Poly) -> Poly:
    """Rewrite a symbol polynomial at the canonical twist of ``model``."""
    if isinstance(model, QuotientModel):
        out = model.base_poly(p)
        m = model
        chain = []
        while isinstance(m, QuotientModel):
            chain.append(m)
            m = m.base
        for q in chain:
            out = q.psi(out)
        return out
    return p


# ---------------------------------------------------------------------------
# Stability and sign checks
# ---------------------------------------------------------------------------

def _invariants_table(model: Model, bound: int, theory: str = "CW") -> dict:
    out = {}
    for d in range(bound + 1):
        for t in sorted({model.canonical(t) for t in all_twists(model.nsides)}):
            out[(d, t)] = model.piece(theory, d, t).invariants()
    return out


def check_sign_independence(build, bound: int) -> CheckResult:
    """Localization by +e(O(n)) and -e(O(n)) gives the same groups."""
    a = _invariants_table(build(1), bound)
    b = _invariants_table(build(-1), bound)
    bad = [k for k in a if a[k] != b[k]]
    return CheckResult("quotient sign independence", not bad, _where(bad))


def check_truncation_stability(build, bound: int) -> CheckResult:
    """Truncations at bound B and B+2 agree in degrees <= B."""
    a = _invariants_table(build(bound), bound)
    b = _invariants_table(build(bound + 2), bound)
    bad = [k for k in a if a[k] != b[k]]
    return CheckResult("truncation stability", not bad, _where(bad))


def check_euler_formula(field_model, span: int = 6) -> CheckResult:
    """Iterating e(L (x) O(1)^2) = e(L) + h_L(c(O(1))) from O(0) and O(-1)
    reproduces the case split for e(O(n)), n in [-span, span]."""
    from .models import ProjectiveModel as PM
    model = PM((span + 4,), field_model, bound=span + 2)
    alg = model.algebra
    bad = []
    step = lambda L: hyperbolic_chern(alg, (L % 2,), (1,))  # noqa: E731
    for start in (0, -1):
        vals = {start: euler_class(alg, (start,)) if start else {}}
        L = start
        while L + 2 <= span:
            vals[L + 2] = alg.add(vals[L], step(L))
            L += 2
        L = start
        while L - 2 >= -span:
            vals[L - 2] = alg.sub(vals[L], step(L - 2))
            L -= 2
        for n, v in vals.items():
            lhs = model.evaluate(v)
            rhs = model.evaluate(euler_case_split(alg, n))
            piece = model.piece("CW", 1, (n % 2,))
            if not piece.is_zero(elem_add(lhs, {k: -a for k, a in rhs.items()})):
                bad.append(n)
    return CheckResult("Euler class case split", not bad,
                       "" if not bad else f"fails for n = {sorted(bad)}")
