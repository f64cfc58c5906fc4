"""Derived models of the four theories, built without the closed-form
presentations.

``ProjectiveModel`` covers P^r, P^q x P^r and their truncations standing in
for BG_m and BG_m x BG_m.  Its I-cohomology is the labelled basis produced by
the projective bundle formula (pullbacks, the mu_a classes and the
orientation class xi, written R here); products are computed by lifting along
rho~, which is injective on the W/I-summands.  Chow-Witt groups are the fiber
product H(I) x_Ch ker(d).

``QuotientModel`` realizes a B mu_n factor as the cokernel of multiplication by
e(O(n)) on a model with a BG_m factor at that side, adds the split W-tail in
degree 0 when n is even, and collapses the twist of that side when n is odd.

Elements are sparse dicts keyed by coordinates:
  ("h", label, b)  W-basis element b on an I-cohomology label,
  ("c", exps)      a Chow monomial,
  ("t", mono, b)   W-basis element b on a degree-0 tail class U*...
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from .errors import ChowWittError, DegreeBoundExceeded, OutOfScope, TailUnknown, TwistMismatch
from .fields import FieldModel
from .graded import GradedAlgebra, Generator, Mono, Poly, Twist, twist_add
from .linalg import FpAbGroup, GroupHom, Sparse, index_of, subgroup
from .scalars import (grothendieck_witt, hyperbolic, ideal_generators,
                      ideal_power_spanning, minus_one_form, rank, witt_ring)

Key = tuple
Elem = dict


# ---------------------------------------------------------------------------
# Symbols shared by all models of a given shape
# ---------------------------------------------------------------------------

def side_suffix(nsides: int, twist: Twist) -> str:
    """Name suffix of the Euler/H class living in a nonzero twist."""
    if nsides == 1:
        return ""
    return {(1, 0): "1", (0, 1): "2", (1, 1): "3"}[tuple(twist)]


def symbol_algebra(dims: Sequence[int], field: FieldModel) -> GradedAlgebra:
    """H, U, e, R symbols (one side) or H1..H3, U1, U2, e1..e3, R1, R2."""
    gw = grothendieck_witt(field)
    if len(dims) == 1:
        (r,) = dims
        gens = [Generator("H", 0, (1,), "I"), Generator("U", 0, (0,), "h"),
                Generator("e", 1, (1,), "I"), Generator("R", r, ((r + 1) % 2,))]
        return GradedAlgebra(gens, gw)
    q, r = dims
    gens = [Generator("H1", 0, (1, 0), "I"), Generator("H2", 0, (0, 1), "I"),
            Generator("H3", 0, (1, 1), "I"), Generator("U1", 0, (0, 0), "h"),
            Generator("U2", 0, (0, 0), "h"), Generator("e1", 1, (1, 0), "I"),
            Generator("e2", 1, (0, 1), "I"), Generator("e3", 1, (1, 1), "I"),
            Generator("R1", q, ((q + 1) % 2, 0)), Generator("R2", r, (0, (r + 1) % 2))]
    return GradedAlgebra(gens, gw)


def delta(nsides: int, side: int) -> Twist:
    return tuple(int(i == side) for i in range(nsides))


def euler_poly(alg: GradedAlgebra, a: Sequence[int]) -> Poly:
    """e(O(a)) with e_tau := e(O(-tau)) on the symbols of ``alg``.

    Writing O(a) = O(-tau) (x) M^2 with tau = a mod 2, the square-twist formula
    e(L (x) M^2) = e(L) + h_L(c(M)) gives
        e(O(a)) = e_tau - sum_s ((a_s + tau_s)/2) H_{tau + delta_s} e_s,
    where e_0 = 0 and H_0 = h.
    """
    nsides = len(a)
    tau = tuple(x % 2 for x in a)
    out = alg.var("e" + side_suffix(nsides, tau)) if any(tau) else {}
    for s in range(nsides):
        coef = (a[s] + tau[s]) // 2
        if not coef:
            continue
        tw = twist_add(tau, delta(nsides, s))
        H = alg.var("H" + side_suffix(nsides, tw)) if any(tw) \
            else alg.const(hyperbolic(alg.scalars.field))
        es = alg.var("e" + side_suffix(nsides, delta(nsides, s)))
        out = alg.sub(out, alg.smul(coef, alg.mul(H, es)))
    return out


# ---------------------------------------------------------------------------
# Graded pieces
# ---------------------------------------------------------------------------

class Piece:
    """The subquotient (G + R)/R of the free group on ``keys``."""

    def __init__(self, keys: Sequence[Key], relations: Iterable[Elem],
                 gens: Iterable[Elem], labels: Sequence[str] | None = None):
        self.keys = tuple(keys)
        self.pos = {k: i for i, k in enumerate(self.keys)}
        self.relations = [self.vector(r) for r in relations]
        self.gens = [self.vector(g) for g in gens]
        self.labels = tuple(labels) if labels is not None else tuple(_key_str(k) for k in keys)

    def vector(self, elem: Elem) -> Sparse:
        out: Sparse = {}
        for k, a in elem.items():
            if a:
                try:
                    i = self.pos[k]
                except KeyError:
                    raise TwistMismatch(f"coordinate {k} is not in this bidegree") from None
                out[i] = out.get(i, 0) + a
        return {i: a for i, a in out.items() if a}

    @cached_property
    def ambient(self) -> FpAbGroup:
        return FpAbGroup(len(self.keys), self.relations, self.labels)

    @cached_property
    def _sub(self) -> tuple[FpAbGroup, GroupHom]:
        return subgroup(self.ambient, self.gens)

    @property
    def group(self) -> FpAbGroup:
        return self._sub[0]

    @property
    def inclusion(self) -> GroupHom:
        return self._sub[1]

    @cached_property
    def _span(self) -> FpAbGroup:
        return FpAbGroup(len(self.keys), self.relations + self.gens)

    def contains(self, elem: Elem) -> bool:
        return self._span.is_zero(self.vector(elem))

    def is_zero(self, elem: Elem) -> bool:
        return self.ambient.is_zero(self.vector(elem))

    def invariants(self) -> tuple[tuple[int, ...], int]:
        return self.group.invariants()

    def describe(self) -> str:
        return self.group.describe()


def _key_str(k: Key) -> str:
    return "/".join(str(x) for x in k)


def elem_add(*xs: Elem) -> Elem:
    out: Elem = {}
    for x in xs:
        for k, a in x.items():
            out[k] = out.get(k, 0) + a
    return {k: a for k, a in out.items() if a}


def elem_scale(n: int, x: Elem) -> Elem:
    return {k: n * a for k, a in x.items() if n * a}


# ---------------------------------------------------------------------------
# Projective products and BG_m truncations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Label:
    mono: Mono          # monomial in the symbol algebra naming the class
    kind: str           # "W": coefficients W(k);  "T": coefficients W(k)/I(k)
    degree: int
    twist: Twist
    rho: frozenset      # rho~ image: set of exponent tuples in Z/2[cbar]


class ProjectiveModel:
    """P^r (dims = (r,)) or P^q x P^r (dims = (q, r))."""

    collapsed: tuple[int, ...] = ()

    def __init__(self, dims: Sequence[int], field: FieldModel, name: str | None = None,
                 bound: int | None = None):
        """``bound`` marks a truncation standing in for BG_m factors: only
        degrees <= bound are meaningful, and the dims must exceed it by 2."""
        self.dims = tuple(int(d) for d in dims)
        self.bound = bound
        if bound is not None and min(self.dims) < bound + 2:
            raise ValueError("a BG_m truncation needs dims >= bound + 2")
        if len(self.dims) not in (1, 2) or min(self.dims) < 1:
            raise ValueError("dims must be one or two positive integers")
        self.field = field
        self.nsides = len(self.dims)
        self.name = name or " x ".join(f"P^{d}" for d in self.dims)
        self.algebra = symbol_algebra(self.dims, field)
        self.gw = grothendieck_witt(field)
        self.w = witt_ring(field)
        self.k = self.gw.dim
        self._minus_one = minus_one_form(field)
        self.labels = self._build_labels()
        self._at: dict[tuple[int, Twist], list[int]] = {}
        for i, lab in enumerate(self.labels):
            self._at.setdefault((lab.degree, lab.twist), []).append(i)
        self._by_mono = {lab.mono: i for i, lab in enumerate(self.labels)}
        self._cache: dict = {}
        A = self.algebra
        self._sym = {g.name: i for i, g in enumerate(A.gens)}

    # -- labels --------------------------------------------------------------
    def _mono(self, **exps: int) -> Mono:
        m = [0] * len(self.algebra.gens)
        for name, e in exps.items():
            m[self.algebra.index[name]] = e
        return tuple(m)

    def _build_labels(self) -> list[Label]:
        if self.nsides == 1:
            (r,) = self.dims
            labs = [Label(self._mono(), "W", 0, (0,), frozenset({(0,)}))]
            for k in range(1, r + 1):
                labs.append(Label(self._mono(e=k), "T", k, (k % 2,), frozenset({(k,)})))
            labs.append(Label(self._mono(R=1), "W", r, ((r + 1) % 2,), frozenset({(r,)})))
            return labs
        q, r = self.dims
        # base P^r labels: (exponent dict, kind, degree, twist bit, cbar_2 power)
        base = [({}, "W", 0, 0, 0)]
        base += [({"e2": k}, "T", k, k % 2, k) for k in range(1, r + 1)]
        base.append(({"R2": 1}, "W", r, (r + 1) % 2, r))
        labs = []
        for ex, kind, d, t, b in base:           # pullbacks
            labs.append(Label(self._mono(**ex), kind, d, (0, t), frozenset({(0, b)})))
        for a in range(1, q + 1):                # the mu_a classes
            for k in range(r + 1):
                for t in (0, 1):
                    if t == k % 2:
                        m = self._mono(e1=a, e2=k)
                        rho = {(a, k)}
                    else:
                        m = self._mono(e1=a - 1, e2=k, e3=1)
                        rho = {(a, k)} | ({(a - 1, k + 1)} if k + 1 <= r else set())
                    labs.append(Label(m, "T", a + k, (a % 2, t), frozenset(rho)))
        for ex, kind, d, t, b in base:           # R_1 times the pullbacks
            labs.append(Label(self._mono(R1=1, **ex), kind, q + d, ((q + 1) % 2, t),
                              frozenset({(q, b)})))
        return labs

    def labels_at(self, degree: int, twist: Twist) -> list[int]:
        return self._at.get((degree, tuple(twist)), [])

    def label_str(self, i: int) -> str:
        return self.algebra.mono_str(self.labels[i].mono)

    # -- twists --------------------------------------------------------------
    def canonical(self, twist: Twist) -> Twist:
        return tuple(twist)

    @property
    def twist_bits(self) -> int:
        return self.nsides

    # -- Chow monomials ------------------------------------------------------
    def ch_monos(self, degree: int) -> list[tuple[int, ...]]:
        if self.nsides == 1:
            return [(degree,)] if 0 <= degree <= self.dims[0] else []
        q, r = self.dims
        return [(a, degree - a) for a in range(max(0, degree - r), min(q, degree) + 1)]

    def _ch_ok(self, ex: tuple[int, ...]) -> bool:
        return all(0 <= x <= d for x, d in zip(ex, self.dims))

    def _chern(self, name: str) -> dict[tuple[int, ...], int]:
        z = (0,) * self.nsides
        if name.startswith("e"):
            tw = self.algebra.gens[self.algebra.index[name]].twist
            return {tuple(int(i == s) for i in range(self.nsides)): 1
                    for s in range(self.nsides) if tw[s]}
        if name.startswith("R"):
            s = 0 if name in ("R", "R1") else 1
            return {tuple(self.dims[s] if i == s else 0 for i in range(self.nsides)): 1}
        return {z: 1}

    def _ch_mul(self, a: dict, b: dict) -> dict:
        out: dict = {}
        for x, u in a.items():
            for y, v in b.items():
                z = tuple(i + j for i, j in zip(x, y))
                if self._ch_ok(z):
                    out[z] = out.get(z, 0) + u * v
        return {z: c for z, c in out.items() if c}

    # -- rho~ and the I-cohomology product -------------------------------------
    def _rho_mul(self, a: frozenset, b: frozenset) -> frozenset:
        out: set = set()
        for x in a:
            for y in b:
                z = tuple(i + j for i, j in zip(x, y))
                if self._ch_ok(z):
                    out ^= {z}
        return frozenset(out)

    def _rho_symbol(self, name: str) -> frozenset:
        return frozenset(self._chern(name))

    def _theta_solver(self, degree: int, twist: Twist):
        key = ("solver", degree, twist)
        if key not in self._cache:
            ids = [i for i in self.labels_at(degree, twist) if self.labels[i].kind == "T"]
            self._cache[key] = _GF2Solver([self.labels[i].rho for i in ids], ids)
        return self._cache[key]

    def hi_mono(self, m: Mono) -> Elem:
        """Value in H(I) of a monomial in e's and R's (W-basis index 0)."""
        key = ("himono", m)
        if key in self._cache:
            return self._cache[key]
        A = self.algebra
        names = [g.name for g in A.gens]
        if any(e and (names[i][0] in "HU") for i, e in enumerate(m)):
            raise ValueError("hi_mono expects a monomial in e and R only")
        has_e = any(e and names[i][0] == "e" for i, e in enumerate(m))
        if not has_e:
            i = self._by_mono.get(m)
            out = {("h", i, 0): 1} if i is not None else {}
        else:
            rho = frozenset({(0,) * self.nsides})
            for i, e in enumerate(m):
                for _ in range(e):
                    rho = self._rho_mul(rho, self._rho_symbol(names[i]))
            if not rho:
                out = {}
            else:
                d, t = A.bidegree(m)
                sol = self._theta_solver(d, t).solve(rho)
                if sol is None:
                    raise ChowWittError(f"no W/I-label lift for {A.mono_str(m)}")
                out = {("h", i, 0): 1 for i in sol}
        self._cache[key] = out
        return out

    def _label_product(self, i: int, j: int) -> tuple[Elem, int]:
        key = ("lprod", i, j)
        if key not in self._cache:
            m, parity = self.algebra.mono_mul(self.labels[i].mono, self.labels[j].mono)
            self._cache[key] = (self.hi_mono(m), parity)
        return self._cache[key]

    # -- scalar action and products ---------------------------------------------
    def scalar_act(self, s: Sequence[int], x: Elem) -> Elem:
        out: Elem = {}
        for key, a in x.items():
            if key[0] in ("h", "t"):
                prod = self.w.mul(s, self.w.basis_vec(key[2]))
                for b, c in enumerate(prod):
                    if c:
                        nk = key[:2] + (b,)
                        out[nk] = out.get(nk, 0) + a * c
            else:
                out[key] = out.get(key, 0) + a * rank(s)
        return {k: a for k, a in out.items() if a}

    def mul(self, x: Elem, y: Elem) -> Elem:
        out: Elem = {}
        for kx, a in x.items():
            for ky, b in y.items():
                if kx[0] == "c" and ky[0] == "c":
                    z = tuple(i + j for i, j in zip(kx[1], ky[1]))
                    if self._ch_ok(z):
                        out[("c", z)] = out.get(("c", z), 0) + a * b
                elif kx[0] == "h" and ky[0] == "h":
                    v, parity = self._label_product(kx[1], ky[1])
                    if not v:
                        continue
                    s = self.w.mul(self.w.basis_vec(kx[2]), self.w.basis_vec(ky[2]))
                    if parity:
                        s = self.w.mul(s, self._minus_one)
                    for kk, c in self.scalar_act(s, v).items():
                        out[kk] = out.get(kk, 0) + a * b * c
                elif "t" in (kx[0], ky[0]):
                    raise OutOfScope("tail classes only exist on localization models")
        return {k: a for k, a in out.items() if a}

    # -- evaluation of symbol polynomials -----------------------------------------
    def mono_value(self, m: Mono) -> Elem:
        key = ("val", m)
        if key in self._cache:
            return self._cache[key]
        A = self.algebra
        names = [g.name for g in A.gens]
        nH = 0
        rest = list(m)
        for i, e in enumerate(m):
            if e and names[i][0] == "U":
                raise OutOfScope("U classes need a localization model")
            if e and names[i][0] == "H":
                nH += e
                rest[i] = 0
        rest = tuple(rest)
        hi = self.hi_mono(rest) if nH == 0 else {}
        ch = {(0,) * self.nsides: 2 ** nH}
        for i, e in enumerate(rest):
            for _ in range(e):
                ch = self._ch_mul(ch, self._chern(names[i]))
        out = dict(hi)
        for ex, c in ch.items():
            out[("c", ex)] = c
        self._cache[key] = out
        return out

    def evaluate(self, p: Poly) -> Elem:
        out: Elem = {}
        for m, c in p.items():
            out = elem_add(out, self.scalar_act(c, self.mono_value(m)))
        return out

    def multiply(self, x: Elem, p: Poly) -> Elem:
        return self.mul(x, self.evaluate(p))

    def bidegree(self, p: Poly) -> tuple[int, Twist] | None:
        bd = self.algebra.poly_bidegree(p)
        if bd is None:
            return None
        return bd[0], self.canonical(bd[1])

    # -- graded pieces --------------------------------------------------------------
    def _hi_keys(self, degree: int, twist: Twist) -> list[Key]:
        return [("h", i, b) for i in self.labels_at(degree, twist) for b in range(self.k)]

    def _hi_relations(self, degree: int, twist: Twist) -> list[Elem]:
        rels = []
        for i in self.labels_at(degree, twist):
            vecs = list(self.w.relations)
            if self.labels[i].kind == "T":
                vecs += list(ideal_generators(self.field))
            for v in vecs:
                rels.append({("h", i, b): a for b, a in enumerate(v) if a})
        return rels

    def _key_label(self, key: Key) -> str:
        if key[0] == "h":
            base = self.label_str(key[1])
            b = self.w.basis[key[2]]
            return base if b == "1" else f"<{b}>{base}"
        if key[0] == "c":
            return _ch_str(key[1], self.nsides)
        return _key_str(key)

    def _ch_keys(self, degree: int) -> list[Key]:
        return [("c", ex) for ex in self.ch_monos(degree)]

    def _make(self, keys, rels, gens) -> Piece:
        return Piece(keys, rels, gens, [self._key_label(k) for k in keys])

    def hi_piece(self, degree: int, twist: Twist) -> Piece:
        key = ("hi", degree, tuple(twist))
        if key not in self._cache:
            keys = self._hi_keys(degree, twist)
            self._cache[key] = self._make(keys, self._hi_relations(degree, twist),
                                          [{k: 1} for k in keys])
        return self._cache[key]

    def ch_piece(self, degree: int) -> Piece:
        key = ("ch", degree)
        if key not in self._cache:
            keys = self._ch_keys(degree)
            self._cache[key] = self._make(keys, [], [{k: 1} for k in keys])
        return self._cache[key]

    def ch2_piece(self, degree: int) -> Piece:
        keys = self._ch_keys(degree)
        return self._make(keys, [{k: 2} for k in keys], [{k: 1} for k in keys])

    def rho_tilde(self, x: Elem) -> Elem:
        """H(I) -> Ch on label coordinates (rank mod 2 times the cbar image)."""
        out: Elem = {}
        for key, a in x.items():
            if key[0] != "h":
                continue
            for ex in self.labels[key[1]].rho:
                out[("c", ex)] = out.get(("c", ex), 0) + a
        return {k: a for k, a in out.items() if a % 2}

    def beta(self, ex: tuple[int, ...], twist: Twist) -> Elem:
        """beta_L(cbar^ex) = e^ex * e(M), M the parity of ex - L."""
        A = self.algebra
        m = [0] * len(A.gens)
        names = ["e"] if self.nsides == 1 else ["e1", "e2"]
        for s, name in enumerate(names):
            m[A.index[name]] = ex[s]
        M = tuple((x - t) % 2 for x, t in zip(ex, twist))
        if not any(M):
            return {}
        mm, parity = A.mono_mul(tuple(m), self._mono(**{"e" + side_suffix(self.nsides, M): 1}))
        return self.hi_mono(mm)

    def boundary(self, degree: int, twist: Twist) -> GroupHom:
        """d_L = beta_L o mod 2 : CH^i -> H^{i+1}(I^{i+1}, L)."""
        src = self.ch_piece(degree)
        dst = self.hi_piece(degree + 1, twist)
        images = [dst.vector(self.beta(key[1], twist)) for key in src.keys]
        return GroupHom(src.ambient, dst.ambient, images)

    def cw_piece(self, degree: int, twist: Twist) -> Piece:
        """H^i(I^i, L) x_{Ch^i} ker(d_L); CH^i is torsion free here, which is
        the injectivity condition for this fiber-product description."""
        key = ("cw", degree, tuple(twist))
        if key in self._cache:
            return self._cache[key]
        from .linalg import fiber_product
        hi = self.hi_piece(degree, twist)
        ch = self.ch_piece(degree)
        ch2 = self.ch2_piece(degree)
        rt = GroupHom(hi.ambient, ch2.ambient,
                      [ch2.vector(self.rho_tilde({k: 1})) for k in hi.keys])
        K, incl = self.boundary(degree, twist).kernel()
        g = GroupHom(K, ch2.ambient, list(incl.images))
        P, pa, pb = fiber_product(rt, g)
        gens = []
        for a_img, b_img in zip(pa.images, pb.images):
            e: Elem = {hi.keys[i]: c for i, c in a_img.items()}
            for kidx, c in incl.apply(b_img).items():
                e[ch.keys[kidx]] = e.get(ch.keys[kidx], 0) + c
            gens.append({kk: c for kk, c in e.items() if c})
        keys = list(hi.keys) + list(ch.keys)
        piece = self._make(keys, self._hi_relations(degree, twist), gens)
        self._cache[key] = piece
        return piece

    def level_piece(self, degree: int, twist: Twist, j: int) -> Piece:
        """H^i(I^j, L): W-labels carry I^{j-i}(k), T-labels I^{j-i}/I^{j-i+1}.

        Keys are those of ``hi_piece``, so the map induced by I^{j+1} -> I^j
        is the identity on coordinates."""
        key = ("level", degree, tuple(twist), j)
        if key in self._cache:
            return self._cache[key]
        keys = self._hi_keys(degree, twist)
        rels, gens = [], []
        e = j - degree
        for i in self.labels_at(degree, twist):
            kind = self.labels[i].kind
            vecs = list(self.w.relations)
            if kind == "T":
                if e < 0:
                    continue            # Ibar^{<0} = 0
                vecs += list(ideal_power_spanning(self.field, e + 1))
            span = ideal_power_spanning(self.field, max(e, 0))
            for v in vecs:
                rels.append({("h", i, b): a for b, a in enumerate(v) if a})
            for v in span:
                gens.append({("h", i, b): a for b, a in enumerate(v) if a})
        piece = self._make(keys, rels, gens)
        self._cache[key] = piece
        return piece

    def hyperbolic_images(self, degree: int) -> list[Elem]:
        """h_L(c) = (0, 2c) for every Chow monomial c."""
        return [{k: 2} for k in self._ch_keys(degree)]

    def w_basis_reduce(self, m: Mono) -> list[tuple[int, Mono]]:
        """Degree-0 W-classes in trivial twist: only the unit here."""
        if any(m):
            raise TailUnknown(f"{self.algebra.mono_str(m)} is not a degree-0 W-class")
        return [(1, m)]

    def w_basis(self) -> list[Mono]:
        return [self.algebra.one]

    def nondiagonal_labels(self, degree: int, twist: Twist) -> list[int]:
        """W-labels: the classes surviving in H^i(I^j, L) for j < i."""
        return [i for i in self.labels_at(degree, twist) if self.labels[i].kind == "W"]

    def project(self, theory: str, x: Elem) -> Elem:
        if theory == "CW":
            return x
        if theory == "hI":
            return {k: a for k, a in x.items() if k[0] == "h"}
        return {k: a for k, a in x.items() if k[0] == "c"}

    def piece(self, theory: str, degree: int, twist: Twist) -> Piece:
        twist = self.canonical(twist)
        if self.bound is not None and degree > self.bound:
            raise DegreeBoundExceeded(f"degree {degree} is beyond the truncation bound {self.bound}")
        if theory == "CW":
            return self.cw_piece(degree, twist)
        if theory == "hI":
            return self.hi_piece(degree, twist)
        if theory == "CH":
            return self.ch_piece(degree)
        if theory in ("Ch", "hIbar"):
            return self.ch2_piece(degree)
        raise ValueError(f"unknown theory {theory!r}")


def _ch_str(ex: tuple[int, ...], nsides: int) -> str:
    names = ["c"] if nsides == 1 else ["c1", "c2"]
    parts = [n if e == 1 else f"{n}^{e}" for n, e in zip(names, ex) if e]
    return "*".join(parts) if parts else "1"


class _GF2Solver:
    """Express a Z/2-polynomial in the span of fixed ones (unique if independent)."""

    def __init__(self, polys: Sequence[frozenset], ids: Sequence[int]):
        self.ids = list(ids)
        self.index: dict = {}
        rows = []
        for p in polys:
            v = 0
            for ex in p:
                v |= 1 << self._bit(ex)
            rows.append(v)
        self.basis: list[tuple[int, int]] = []   # (reduced vector, combination mask)
        for i, v in enumerate(rows):
            mask = 1 << i
            for bv, bm in self.basis:
                if v ^ bv < v:
                    v ^= bv
                    mask ^= bm
            if v:
                self.basis.append((v, mask))
                self.basis.sort(key=lambda t: -t[0])

    def _bit(self, ex) -> int:
        if ex not in self.index:
            self.index[ex] = len(self.index)
        return self.index[ex]

    def solve(self, poly: frozenset) -> list[int] | None:
        v = 0
        for ex in poly:
            if ex not in self.index:
                return None
            v |= 1 << self.index[ex]
        mask = 0
        for bv, bm in self.basis:
            if v ^ bv < v:
                v ^= bv
                mask ^= bm
        if v:
            return None
        return [self.ids[i] for i in range(len(self.ids)) if mask >> i & 1]


# ---------------------------------------------------------------------------
# Localization quotients
# ---------------------------------------------------------------------------

class QuotientModel:
    """B mu_n at ``side``: coker of e(O(n delta_side)) on ``base`` plus the
    degree-0 tail W<U * b> for n even; the side's twist collapses for n odd."""

    def __init__(self, base, side: int, n: int, sign: int = 1, name: str | None = None):
        if n < 1:
            raise ValueError("n must be positive")
        if side in base.collapsed:
            raise OutOfScope("side already localized")
        self.base = base
        self.side = side
        self.n = n
        self.sign = sign
        self.field = base.field
        self.nsides = base.nsides
        self.algebra = base.algebra
        self.gw = base.gw
        self.w = base.w
        self.k = base.k
        self.collapsed = tuple(sorted(base.collapsed + ((side,) if n % 2 else ())))
        self.localized = getattr(base, "localized", ()) + (side,)
        self.name = name or f"{base.name}/e(O({n}) at side {side + 1})"
        sfx = side_suffix(self.nsides, delta(self.nsides, side))
        self.u_name = "U" + sfx
        self.euler = self.algebra.smul(sign, euler_poly(
            self.algebra, tuple(n if i == side else 0 for i in range(self.nsides))))
        self._cache: dict = {}
        self._check_tail()

    # -- twists ------------------------------------------------------------
    def canonical(self, twist: Twist) -> Twist:
        return tuple(0 if i in self.collapsed else b for i, b in enumerate(twist))

    @property
    def twist_bits(self) -> int:
        return self.nsides - len(self.collapsed)

    def _check_tail(self) -> None:
        """The only admissible tail H^i(base, K^MW_{i-1}, L(n)) is the degree-0
        trivial-twist one; positive degrees must carry no W-labels."""
        root = self.root
        if root.bound is None or root.dims[self.side] < root.bound + 2:
            raise OutOfScope("localization needs a BG_m factor at that side")
        for d in range(1, root.bound + 1):
            for t in _twists(self.nsides):
                if root.nondiagonal_labels(d, t):
                    raise TailUnknown(f"W-classes in degree {d} of the base obstruct the tail")

    @property
    def root(self) -> ProjectiveModel:
        m = self.base
        while isinstance(m, QuotientModel):
            m = m.base
        return m

    # -- twist collapse ---------------------------------------------------------
    def psi_symbol(self, name: str) -> Poly:
        """Image of a symbol under the collapse O(delta_side) ~ O(n delta_side)."""
        A = self.algebra
        g = A.gens[A.index[name]]
        if self.n % 2 == 0 or not g.twist[self.side] or name.startswith("R"):
            return A.var(name)      # R classes sit above the truncation bound
        if name.startswith("H"):
            tw = twist_add(g.twist, delta(self.nsides, self.side))
            return A.var("H" + side_suffix(self.nsides, tw)) if any(tw) \
                else A.const(hyperbolic(self.field))
        if name.startswith("e"):
            a = tuple(-b - (self.n if i == self.side else 0) for i, b in enumerate(g.twist))
            return euler_poly(A, a)
        raise OutOfScope(f"cannot collapse the twist of {name}")

    def psi(self, p: Poly) -> Poly:
        A = self.algebra
        if self.n % 2 == 0:
            return p
        images = {g.name: self.psi_symbol(g.name) for g in A.gens}
        return A.substitute(p, images, A)

    # -- evaluation ------------------------------------------------------------------
    def _u_rewrite(self, m: Mono) -> tuple[str, object]:
        """Apply the U axioms for this side to one monomial.

        Returns ("zero", None), ("base", mono), ("tail", list of (coef, mono))
        or ("poly", poly) when a U e_j substitution was made."""
        A = self.algebra
        iu = A.index.get(self.u_name)
        u = m[iu] if iu is not None else 0
        if not u:
            return "base", m
        names = [g.name for g in A.gens]
        if any(e and names[i][0] == "H" for i, e in enumerate(m)):
            return "zero", None                        # H_i U = 0
        coef = (-2) ** (u - 1)                          # U^2 = -2U
        rest = list(m)
        rest[iu] = 0
        deg, _ = A.bidegree(tuple(rest))
        if deg == 0:
            return "tail", [(coef * c, b) for c, b in self.base.w_basis_reduce(tuple(rest))]
        j = next((i for i, e in enumerate(rest) if e and names[i][0] == "e"), None)
        if j is None:
            raise OutOfScope(f"no U rule for {A.mono_str(m)}")
        # U_s e_j = (n/2) H_{tau_j - delta_s} e_s
        rest[j] -= 1
        rest[iu] = u - 1
        tw = twist_add(A.gens[j].twist, delta(self.nsides, self.side))
        H = A.var("H" + side_suffix(self.nsides, tw)) if any(tw) \
            else A.const(hyperbolic(self.field))
        es = A.var("e" + side_suffix(self.nsides, delta(self.nsides, self.side)))
        # e_j is the leftmost positive-degree factor, so U e_j * rest = (U e_j) * rest
        new = A.mul(A.mul(H, es), A.monomial_poly(tuple(rest)))
        return "poly", A.smul(self.n // 2, new)

    def mono_value(self, m: Mono) -> Elem:
        key = ("val", m)
        if key in self._cache:
            return self._cache[key]
        kind, data = self._u_rewrite(m)
        if kind == "zero":
            out = {}
        elif kind == "base":
            out = self.base.evaluate(self.base_poly({m: self.gw.unit}))
        elif kind == "tail":
            out = {}
            for c, b in data:
                out = elem_add(out, {("t", self._tail_mono(b), 0): c})
        else:
            out = self.evaluate(data)
        self._cache[key] = out
        return out

    def base_poly(self, p: Poly) -> Poly:
        return p

    def _tail_mono(self, b: Mono) -> Mono:
        m = list(b)
        m[self.algebra.index[self.u_name]] += 1
        return tuple(m)

    def evaluate(self, p: Poly) -> Elem:
        out: Elem = {}
        for m, c in self.psi(p).items():
            out = elem_add(out, self.scalar_act(c, self.mono_value(m)))
        return out

    def scalar_act(self, s: Sequence[int], x: Elem) -> Elem:
        return self.root.scalar_act(s, x)

    def multiply(self, x: Elem, p: Poly) -> Elem:
        q = self.psi(p)
        A = self.algebra
        base_part = {k: a for k, a in x.items() if not self._own_tail(k)}
        out = self.base.multiply(base_part, q) if base_part else {}
        for key, a in x.items():
            if self._own_tail(key):
                term = A.mul(A.monomial_poly(key[1], self.w.basis_vec(key[2])), q)
                out = elem_add(out, elem_scale(a, self.evaluate(term)))
        return out

    def _own_tail(self, key: Key) -> bool:
        return key[0] == "t" and key[1][self.algebra.index[self.u_name]] > 0

    def bidegree(self, p: Poly) -> tuple[int, Twist] | None:
        bd = self.algebra.poly_bidegree(p)
        if bd is None:
            return None
        return bd[0], self.canonical(bd[1])

    # -- degree-0 W-classes -------------------------------------------------------------
    def w_basis(self) -> list[Mono]:
        out = list(self.base.w_basis())
        if self.n % 2 == 0:
            out += [self._tail_mono(b) for b in self.base.w_basis()]
        return out

    def w_basis_reduce(self, m: Mono) -> list[tuple[int, Mono]]:
        A = self.algebra
        iu = A.index[self.u_name]
        u = m[iu]
        if not u:
            return self.base.w_basis_reduce(m)
        if self.n % 2:
            raise TailUnknown("odd localization carries no U class")
        rest = list(m)
        rest[iu] = 0
        return [((-2) ** (u - 1) * c, self._tail_mono(b))
                for c, b in self.base.w_basis_reduce(tuple(rest))]

    # -- pieces -----------------------------------------------------------------------
    def _tail_keys(self, degree: int, twist: Twist) -> list[Key]:
        if self.n % 2 or degree != 0 or any(twist):
            return []
        return [("t", self._tail_mono(b), s) for b in self.base.w_basis() for s in range(self.k)]

    def _tail_label(self, key: Key) -> str:
        b = self.w.basis[key[2]]
        ms = self.algebra.mono_str(key[1])
        return ms if b == "1" else f"<{b}>{ms}"

    def cw_piece(self, degree: int, twist: Twist) -> Piece:
        twist = self.canonical(twist)
        key = ("cw", degree, twist)
        if key in self._cache:
            return self._cache[key]
        B = self.base.cw_piece(degree, twist)
        rels = [dict(zip_elem(B.keys, r)) for r in B.relations]
        if degree >= 1:
            tw_src = twist_add(twist, delta(self.nsides, self.side)) if self.n % 2 else twist
            Bs = self.base.cw_piece(degree - 1, tw_src)
            for g in Bs.gens:
                rels.append(self.base.multiply(dict(zip_elem(Bs.keys, g)), self.euler))
        tails = self._tail_keys(degree, twist)
        for t in tails[::self.k]:
            for v in self.w.relations:
                rels.append({t[:2] + (b,): a for b, a in enumerate(v) if a})
        keys = list(B.keys) + tails
        gens = [dict(zip_elem(B.keys, g)) for g in B.gens] + [{t: 1} for t in tails]
        labels = list(B.labels) + [self._tail_label(t) for t in tails]
        piece = Piece(keys, rels, gens, labels)
        self._cache[key] = piece
        return piece

    def ch_piece(self, degree: int) -> Piece:
        key = ("ch", degree)
        if key in self._cache:
            return self._cache[key]
        B = self.base.ch_piece(degree)
        rels = [dict(zip_elem(B.keys, r)) for r in B.relations]
        if degree >= 1:
            Bs = self.base.ch_piece(degree - 1)
            for ck in Bs.keys:
                ex = tuple(a + b for a, b in zip(ck[1], step_unit(self.side, self.nsides)))
                if ("c", ex) in B.pos:
                    rels.append({("c", ex): self.n})
        piece = Piece(B.keys, rels, [{k: 1} for k in B.keys], B.labels)
        self._cache[key] = piece
        return piece

    def ch2_piece(self, degree: int) -> Piece:
        C = self.ch_piece(degree)
        rels = [dict(zip_elem(C.keys, r)) for r in C.relations] + [{k: 2} for k in C.keys]
        return Piece(C.keys, rels, [{k: 1} for k in C.keys], C.labels)

    def hyperbolic_images(self, degree: int) -> list[Elem]:
        return [{k: 2} for k in self.ch_piece(degree).keys]

    def hi_piece(self, degree: int, twist: Twist) -> Piece:
        """H(I) = CH~ modulo the images of the hyperbolic maps."""
        twist = self.canonical(twist)
        key = ("hi", degree, twist)
        if key not in self._cache:
            C = self.cw_piece(degree, twist)
            rels = [dict(zip_elem(C.keys, r)) for r in C.relations]
            rels += self.hyperbolic_images(degree)
            gens = [dict(zip_elem(C.keys, g)) for g in C.gens]
            self._cache[key] = Piece(C.keys, rels, gens, C.labels)
        return self._cache[key]

    def project(self, theory: str, x: Elem) -> Elem:
        if theory in ("CW", "hI"):
            return x
        return {k: a for k, a in x.items() if k[0] == "c"}

    def piece(self, theory: str, degree: int, twist: Twist) -> Piece:
        bound = self.root.bound
        if bound is not None and degree > bound:
            raise DegreeBoundExceeded(f"degree {degree} is beyond the truncation bound {bound}")
        if theory == "CW":
            return self.cw_piece(degree, twist)
        if theory == "hI":
            return self.hi_piece(degree, twist)
        if theory == "CH":
            return self.ch_piece(degree)
        if theory in ("Ch", "hIbar"):
            return self.ch2_piece(degree)
        raise ValueError(f"unknown theory {theory!r}")

    def nondiagonal_labels(self, degree: int, twist: Twist) -> list[int]:
        return []


def step_unit(side: int, nsides: int) -> tuple[int, ...]:
    return tuple(int(i == side) for i in range(nsides))


def zip_elem(keys: Sequence[Key], v: Sparse):
    return ((keys[i], a) for i, a in v.items())


def _twists(nbits: int) -> list[Twist]:
    out = [()]
    for _ in range(nbits):
        out = [t + (b,) for t in out for b in (0, 1)]
    return out


# ---------------------------------------------------------------------------
# Derived comparison helpers
# ---------------------------------------------------------------------------

def rho_image_index(model, degree: int, twist: Twist) -> int | None:
    """[CH^i : rho(CH~^i(L))], None when infinite."""
    C = model.piece("CW", degree, twist)
    ch = model.ch_piece(degree)
    images = [ch.vector(model.project("CH", dict(zip_elem(C.keys, g)))) for g in C.gens]
    return index_of(ch.ambient, images)
