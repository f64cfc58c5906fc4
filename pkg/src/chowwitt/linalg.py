"""Exact integer linear algebra: Smith normal form, finitely presented abelian
groups and the homomorphisms between them.

Presentations are simplified lazily.  Relations with a unit coefficient are
used to eliminate generators (the kept generators are always original ones),
and the small residual lattice is put into Hermite normal form.  That
residual drives invariant factors, element normal forms, kernels and
cokernels.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from math import gcd
from typing import Iterable, Sequence

import flint

Matrix = list[list[int]]
Sparse = dict[int, int]


# ---------------------------------------------------------------------------
# Smith normal form with transforms (pure Python, arbitrary precision)
# ---------------------------------------------------------------------------

def _identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def smith_normal_form(M: Sequence[Sequence[int]], ncols: int | None = None
                      ) -> tuple[Matrix, Matrix, Matrix]:
    """Return (U, D, V) with U*M*V = D, U and V unimodular and D diagonal
    with d_1 | d_2 | ... (nonnegative).

    ``ncols`` is only needed when M has no rows.
    """
    m = len(M)
    n = len(M[0]) if m else (ncols or 0)
    D = [list(map(int, row)) for row in M]
    U = _identity(m)
    V = _identity(n)

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, k):  # row_dst += k * row_src
        if k:
            rs, rd = D[src], D[dst]
            for c in range(n):
                rd[c] += k * rs[c]
            us, ud = U[src], U[dst]
            for c in range(m):
                ud[c] += k * us[c]

    def add_col(src, dst, k):  # col_dst += k * col_src
        if k:
            for row in D:
                row[dst] += k * row[src]
            for row in V:
                row[dst] += k * row[src]

    for t in range(min(m, n)):
        while True:
            # smallest nonzero entry of the trailing block becomes the pivot
            best = None
            for i in range(t, m):
                row = D[i]
                for j in range(t, n):
                    a = row[j]
                    if a and (best is None or abs(a) < best[0]):
                        best = (abs(a), i, j)
            if best is None:
                return U, D, V
            _, i, j = best
            if i != t:
                swap_rows(i, t)
            if j != t:
                swap_cols(j, t)
            p = D[t][t]
            dirty = False
            for i in range(t + 1, m):
                if D[i][t]:
                    add_row(t, i, -(D[i][t] // p))
                    dirty = dirty or D[i][t] != 0
            for j in range(t + 1, n):
                if D[t][j]:
                    add_col(t, j, -(D[t][j] // p))
                    dirty = dirty or D[t][j] != 0
            if dirty:
                continue
            bad = next((i for i in range(t + 1, m)
                        if any(D[i][j] % p for j in range(t + 1, n))), None)
            if bad is None:
                break
            add_row(bad, t, 1)
        if D[t][t] < 0:
            D[t] = [-a for a in D[t]]
            U[t] = [-a for a in U[t]]
    return U, D, V


def diagonal(D: Matrix) -> list[int]:
    return [D[i][i] for i in range(min(len(D), len(D[0]) if D else 0))]


def determinant(M: Sequence[Sequence[int]]) -> int:
    if not M:
        return 1
    return int(flint.fmpz_mat([list(r) for r in M]).det())


# ---------------------------------------------------------------------------
# Lattice helpers backed by FLINT's Hermite normal form
# ---------------------------------------------------------------------------

def hnf_rows(rows: Sequence[Sequence[int]], ncols: int) -> Matrix:
    """Nonzero rows of the Hermite normal form of the row lattice."""
    rows = [list(r) for r in rows if any(r)]
    if not rows or ncols == 0:
        return []
    H = flint.fmpz_mat(rows).hnf()
    out = []
    for i in range(H.nrows()):
        r = [int(H[i, j]) for j in range(ncols)]
        if any(r):
            out.append(r)
    return out


def left_kernel(rows: Sequence[Sequence[int]], ncols: int) -> Matrix:
    """A Z-basis of {x : x * M = 0} for the matrix with the given rows."""
    r = len(rows)
    if r == 0:
        return []
    if ncols == 0:
        return _identity(r)
    aug = [list(rows[i]) + [int(i == j) for j in range(r)] for i in range(r)]
    H = flint.fmpz_mat(aug).hnf()
    out = []
    for i in range(H.nrows()):
        if all(H[i, j] == 0 for j in range(ncols)):
            out.append([int(H[i, ncols + j]) for j in range(r)])
    return out


def _to_sparse(v) -> Sparse:
    if isinstance(v, dict):
        return {int(k): int(a) for k, a in v.items() if a}
    return {i: int(a) for i, a in enumerate(v) if a}


def _dense(v: Sparse, n: int) -> list[int]:
    out = [0] * n
    for k, a in v.items():
        out[k] = a
    return out


# ---------------------------------------------------------------------------
# Presentation simplification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class _Reduced:
    kept: tuple[int, ...]
    express: tuple[Sparse, ...]      # original generator -> kept coordinates
    hnf: tuple[tuple[int, ...], ...]  # residual relations, Hermite form
    pivots: tuple[int, ...]


def _simplify(n: int, rels: Sequence[Sparse]) -> _Reduced:
    rows: list[Sparse] = [dict(r) for r in rels if r]
    col_rows: dict[int, set[int]] = {}
    for i, r in enumerate(rows):
        for c in r:
            col_rows.setdefault(c, set()).add(i)
    alive = set(range(len(rows)))
    elim: list[tuple[int, Sparse]] = []
    eliminated: set[int] = set()

    progress = True
    while progress:
        progress = False
        for i in sorted(alive, key=lambda k: len(rows[k])):
            if i not in alive:
                continue
            row = rows[i]
            units = [c for c, a in row.items() if a in (1, -1)]
            if not units:
                continue
            c = min(units, key=lambda x: (len(col_rows.get(x, ())), x))
            u = row[c]
            expr = {j: -u * a for j, a in row.items() if j != c}
            alive.discard(i)
            for j in row:
                col_rows[j].discard(i)
            for k in list(col_rows.get(c, ())):
                rk = rows[k]
                a = rk.pop(c)
                for j, b in expr.items():
                    s = rk.get(j, 0) + a * b
                    if s:
                        if j not in rk:
                            col_rows.setdefault(j, set()).add(k)
                        rk[j] = s
                    elif j in rk:
                        del rk[j]
                        col_rows[j].discard(k)
                if not rk:
                    alive.discard(k)
            col_rows.pop(c, None)
            elim.append((c, expr))
            eliminated.add(c)
            progress = True

    kept = tuple(g for g in range(n) if g not in eliminated)
    pos = {g: i for i, g in enumerate(kept)}
    express: list[Sparse | None] = [None] * n
    for g in kept:
        express[g] = {pos[g]: 1}
    for c, expr in reversed(elim):
        acc: Sparse = {}
        for j, b in expr.items():
            for t, a in express[j].items():
                acc[t] = acc.get(t, 0) + a * b
        express[c] = {t: a for t, a in acc.items() if a}
    residual = []
    seen = set()
    for i in alive:
        key = tuple(sorted((pos[c], a) for c, a in rows[i].items()))
        if key and key not in seen:
            seen.add(key)
            residual.append(_dense(dict(key), len(kept)))
    H = hnf_rows(residual, len(kept))
    pivots = tuple(next(j for j, a in enumerate(r) if a) for r in H)
    return _Reduced(kept, tuple(express), tuple(tuple(r) for r in H), pivots)


# ---------------------------------------------------------------------------
# Finitely presented abelian groups
# ---------------------------------------------------------------------------

class FpAbGroup:
    """Z^n modulo the row lattice of ``relations``."""

    def __init__(self, n: int, relations: Iterable = (), labels: Sequence[str] | None = None):
        self.n = int(n)
        self.relations: tuple[Sparse, ...] = tuple(
            r for r in (_to_sparse(v) for v in relations) if r)
        if labels is not None and len(labels) != self.n:
            raise ValueError("label count does not match generator count")
        self.labels = tuple(labels) if labels is not None else None

    @classmethod
    def from_invariants(cls, factors: Sequence[int], free_rank: int = 0) -> FpAbGroup:
        k = len(factors)
        rels = [{i: d} for i, d in enumerate(factors)]
        return cls(k + free_rank, rels)

    @classmethod
    def zero(cls) -> FpAbGroup:
        return cls(0)

    @cached_property
    def _red(self) -> _Reduced:
        return _simplify(self.n, self.relations)

    @property
    def rank_kept(self) -> int:
        return len(self._red.kept)

    @cached_property
    def _smith(self) -> tuple[tuple[int, ...], int]:
        red = self._red
        k = len(red.kept)
        if not red.hnf:
            return (), k
        S = flint.fmpz_mat([list(r) for r in red.hnf]).snf()
        diag = [abs(int(S[i, i])) for i in range(min(S.nrows(), S.ncols()))]
        nonzero = [d for d in diag if d]
        return tuple(d for d in nonzero if d > 1), k - len(nonzero)

    @property
    def invariant_factors(self) -> tuple[int, ...]:
        return self._smith[0]

    @property
    def free_rank(self) -> int:
        return self._smith[1]

    @property
    def order(self) -> int | None:
        if self.free_rank:
            return None
        out = 1
        for d in self.invariant_factors:
            out *= d
        return out

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.invariant_factors

    def invariants(self) -> tuple[tuple[int, ...], int]:
        return self._smith

    # -- elements -----------------------------------------------------------
    def reduce(self, v) -> list[int]:
        """Coordinates of v in the kept generators (not yet normalized)."""
        red = self._red
        out = [0] * len(red.kept)
        for g, a in _to_sparse(v).items():
            for t, b in red.express[g].items():
                out[t] += a * b
        return out

    def normal_form(self, v) -> tuple[int, ...]:
        w = self.reduce(v)
        for row, p in zip(self._red.hnf, self._red.pivots):
            if w[p]:
                q = w[p] // row[p]
                if q:
                    for j in range(p, len(w)):
                        w[j] -= q * row[j]
        return tuple(w)

    def is_zero(self, v) -> bool:
        return not any(self.normal_form(v))

    def equal(self, v, w) -> bool:
        return self.is_zero(_sub(v, w, self.n))

    # -- structure ------------------------------------------------------------
    def direct_sum(self, other: FpAbGroup) -> FpAbGroup:
        rels = list(self.relations)
        rels += [{k + self.n: a for k, a in r.items()} for r in other.relations]
        labels = None
        if self.labels is not None and other.labels is not None:
            labels = self.labels + other.labels
        return FpAbGroup(self.n + other.n, rels, labels)

    def describe(self) -> str:
        return describe_invariants(self.invariant_factors, self.free_rank)

    def __repr__(self) -> str:
        return f"FpAbGroup({self.describe()})"


def describe_invariants(factors: Sequence[int], free: int) -> str:
    parts = []
    if free == 1:
        parts.append("Z")
    elif free > 1:
        parts.append(f"Z^{free}")
    counts: dict[int, int] = {}
    for d in factors:
        counts[d] = counts.get(d, 0) + 1
    for d in sorted(counts):
        c = counts[d]
        parts.append(f"Z/{d}" if c == 1 else f"(Z/{d})^{c}")
    return " + ".join(parts) if parts else "0"


def _sub(v, w, n: int) -> Sparse:
    a = _to_sparse(v)
    for k, b in _to_sparse(w).items():
        a[k] = a.get(k, 0) - b
    return {k: x for k, x in a.items() if x}


def isomorphic(a: FpAbGroup, b: FpAbGroup) -> bool:
    return a.invariants() == b.invariants()


# ---------------------------------------------------------------------------
# Homomorphisms
# ---------------------------------------------------------------------------

class GroupHom:
    """Homomorphism given by the images of the domain generators (rows)."""

    def __init__(self, domain: FpAbGroup, codomain: FpAbGroup, images: Sequence):
        if len(images) != domain.n:
            raise ValueError("need one image per domain generator")
        self.domain = domain
        self.codomain = codomain
        self.images: tuple[Sparse, ...] = tuple(_to_sparse(v) for v in images)

    def apply(self, v) -> Sparse:
        out: Sparse = {}
        for g, a in _to_sparse(v).items():
            for k, b in self.images[g].items():
                out[k] = out.get(k, 0) + a * b
        return {k: x for k, x in out.items() if x}

    def is_well_defined(self) -> bool:
        return all(self.codomain.is_zero(self.apply(r)) for r in self.domain.relations)

    def compose(self, after: GroupHom) -> GroupHom:
        """after o self."""
        return GroupHom(self.domain, after.codomain, [after.apply(v) for v in self.images])

    def _reduced_matrix(self) -> Matrix:
        A, B = self.domain, self.codomain
        return [B.reduce(self.images[g]) for g in A._red.kept]

    def kernel(self) -> tuple[FpAbGroup, GroupHom]:
        A, B = self.domain, self.codomain
        kA, kB = A.rank_kept, B.rank_kept
        stacked = self._reduced_matrix() + [list(r) for r in B._red.hnf]
        K = left_kernel(stacked, kB) if stacked else []
        K = hnf_rows([row[:kA] for row in K], kA)
        return _subgroup_from_kept(A, K)

    def cokernel(self) -> tuple[FpAbGroup, GroupHom]:
        B = self.codomain
        C = FpAbGroup(B.n, list(B.relations) + list(self.images), B.labels)
        proj = GroupHom(B, C, [{i: 1} for i in range(B.n)])
        return C, proj

    def image(self) -> tuple[FpAbGroup, GroupHom]:
        return subgroup(self.codomain, self.images)

    def is_injective(self) -> bool:
        return self.kernel()[0].is_trivial

    def is_surjective(self) -> bool:
        return self.cokernel()[0].is_trivial

    def is_iso(self) -> bool:
        return self.is_injective() and self.is_surjective()


def _subgroup_from_kept(A: FpAbGroup, K: Matrix) -> tuple[FpAbGroup, GroupHom]:
    """Subgroup of A generated by rows of K given in A's kept coordinates."""
    kA = A.rank_kept
    rels = left_kernel([list(r) for r in K] + [list(r) for r in A._red.hnf], kA)
    rels = [row[:len(K)] for row in rels]
    S = FpAbGroup(len(K), rels)
    kept = A._red.kept
    incl = GroupHom(S, A, [{kept[j]: a for j, a in enumerate(r) if a} for r in K])
    return S, incl


def subgroup(C: FpAbGroup, gens: Sequence) -> tuple[FpAbGroup, GroupHom]:
    """Subgroup generated by the given elements, with its inclusion."""
    gens = [_to_sparse(g) for g in gens]
    kC = C.rank_kept
    G = [C.reduce(g) for g in gens]
    rels = left_kernel(G + [list(r) for r in C._red.hnf], kC) if G else []
    rels = [row[:len(G)] for row in rels]
    S = FpAbGroup(len(G), rels)
    return S, GroupHom(S, C, gens)


def direct_sum_hom(f: GroupHom, g: GroupHom) -> GroupHom:
    """(a, b) -> f(a) + g(b) on domain(f) + domain(g); shared codomain."""
    if f.codomain is not g.codomain and f.codomain.n != g.codomain.n:
        raise ValueError("codomains differ")
    dom = f.domain.direct_sum(g.domain)
    return GroupHom(dom, f.codomain, list(f.images) + list(g.images))


def fiber_product(f: GroupHom, g: GroupHom) -> tuple[FpAbGroup, GroupHom, GroupHom]:
    """P = {(a, b) : f(a) = g(b)} with its two projections."""
    neg_g = GroupHom(g.domain, g.codomain, [{k: -a for k, a in v.items()} for v in g.images])
    diff = direct_sum_hom(f, neg_g)
    P, incl = diff.kernel()
    nA = f.domain.n
    pa = GroupHom(P, f.domain, [{k: a for k, a in v.items() if k < nA} for v in incl.images])
    pb = GroupHom(P, g.domain, [{k - nA: a for k, a in v.items() if k >= nA}
                                for v in incl.images])
    return P, pa, pb


def order_of(C: FpAbGroup, v) -> int | None:
    """Additive order of an element (None when infinite)."""
    S, _ = subgroup(C, [v])
    return S.order


def index_of(C: FpAbGroup, gens: Sequence) -> int | None:
    """[C : <gens>] when finite, None otherwise."""
    Q = FpAbGroup(C.n, list(C.relations) + [_to_sparse(g) for g in gens])
    return Q.order


def gcd_list(xs: Iterable[int]) -> int:
    g = 0
    for x in xs:
        g = gcd(g, x)
    return g
