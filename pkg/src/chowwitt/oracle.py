"""Singular cohomology of real points, from cellular cochain complexes.

Every real-point space in the catalog is a disjoint union of products of
truncated real projective spaces, so a cochain complex with one cell per
dimension and factor covers everything.  Coefficients are Z or the sign
local system Z(L) of a line bundle.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .errors import OutOfScope
from .fields import FieldModel
from .graded import Comparison, compare, twist_str
from .linalg import FpAbGroup, diagonal, isomorphic, smith_normal_form
from .models import ProjectiveModel, QuotientModel

Matrix = list[list[int]]


@dataclass(frozen=True)
class CellModel:
    """A free cochain complex: ``cells[k]`` generators in degree k and
    coboundaries ``delta[k]`` from degree k to k+1 (rows index degree k+1)."""

    cells: tuple[int, ...]
    delta: tuple[tuple[tuple[int, ...], ...], ...]
    components: int = 1

    @property
    def top(self) -> int:
        return len(self.cells) - 1

    def coboundary(self, k: int) -> Matrix:
        if k < 0 or k >= self.top:
            rows = self.cells[k + 1] if 0 <= k + 1 <= self.top else 0
            cols = self.cells[k] if 0 <= k <= self.top else 0
            return [[0] * cols for _ in range(rows)]
        return [list(r) for r in self.delta[k]]

    def check_square_zero(self) -> bool:
        for k in range(self.top - 1):
            a, b = self.coboundary(k), self.coboundary(k + 1)
            for row in b:
                for j in range(self.cells[k]):
                    if sum(row[i] * a[i][j] for i in range(len(row))):
                        return False
        return True

    def cohomology(self, k: int) -> FpAbGroup:
        """H^k, repeated once per component."""
        if k < 0 or k > self.top:
            return FpAbGroup(0)
        n = self.cells[k]
        out_rank = _rank(self.coboundary(k), n)
        incoming = self.coboundary(k - 1) if k > 0 else []
        divisors = _divisors(incoming, self.cells[k - 1] if k > 0 else 0)
        free = n - out_rank - len(divisors)
        torsion = [d for d in divisors if d > 1]
        one = _group(free, torsion)
        G = FpAbGroup(0)
        for _ in range(self.components):
            G = G.direct_sum(one)
        return G

    @cached_property
    def table(self) -> tuple[str, ...]:
        return tuple(self.cohomology(k).describe() for k in range(self.top + 1))


def _divisors(M: Matrix, ncols: int) -> list[int]:
    if not M or not ncols:
        return []
    _, D, _ = smith_normal_form(M, ncols)
    return [d for d in diagonal(D) if d]


def _rank(M: Matrix, ncols: int) -> int:
    return len(_divisors(M, ncols))


def _group(free: int, torsion: list[int]) -> FpAbGroup:
    rels = [{i: d} for i, d in enumerate(torsion)]
    return FpAbGroup(len(torsion) + free, rels)


# ---------------------------------------------------------------------------
# Real projective spaces and products
# ---------------------------------------------------------------------------

def rp_model(N: int, twisted: bool = False, components: int = 1) -> CellModel:
    """RP^N with one cell per dimension.  The coboundary C^k -> C^{k+1} is
    1 + (-1)^{k+1} untwisted and 1 + (-1)^k twisted."""
    if N < 0:
        raise ValueError("N must be nonnegative")
    delta = []
    for k in range(N):
        even = k % 2 == 0
        d = 2 if even == twisted else 0
        delta.append(((d,),))
    return CellModel((1,) * (N + 1), tuple(delta), components)


def point() -> CellModel:
    return CellModel((1,), (), 1)


def rp_cohomology(N: int, twisted: bool = False) -> list[FpAbGroup]:
    """H^i(RP^N; Z or Z(L)) for i = 0..N."""
    if N < 1:
        raise ValueError("rp_cohomology needs N >= 1")
    M = rp_model(N, twisted)
    return [M.cohomology(k) for k in range(N + 1)]


def product_model(a: CellModel, b: CellModel) -> CellModel:
    """Tensor product of cochain complexes with the Koszul sign."""
    top = a.top + b.top
    basis = [[(p, k - p) for p in range(k + 1) if p <= a.top and k - p <= b.top]
             for k in range(top + 1)]
    # one cell per (p, q) pair times the factor cell counts
    index: list[dict] = []
    cells = []
    for k in range(top + 1):
        idx, n = {}, 0
        for p, q in basis[k]:
            for i in range(a.cells[p]):
                for j in range(b.cells[q]):
                    idx[(p, q, i, j)] = n
                    n += 1
        index.append(idx)
        cells.append(n)
    delta = []
    for k in range(top):
        M = [[0] * cells[k] for _ in range(cells[k + 1])]
        for (p, q, i, j), col in index[k].items():
            if p < a.top:
                da = a.coboundary(p)
                for i2 in range(a.cells[p + 1]):
                    if da[i2][i]:
                        M[index[k + 1][(p + 1, q, i2, j)]][col] += da[i2][i]
            if q < b.top:
                db = b.coboundary(q)
                sign = -1 if p % 2 else 1
                for j2 in range(b.cells[q + 1]):
                    if db[j2][j]:
                        M[index[k + 1][(p, q + 1, i, j2)]][col] += sign * db[j2][j]
        delta.append(tuple(tuple(r) for r in M))
    return CellModel(tuple(cells), tuple(delta), a.components * b.components)


def product_cohomology(a: CellModel, b: CellModel) -> list[FpAbGroup]:
    P = product_model(a, b)
    return [P.cohomology(k) for k in range(P.top + 1)]


# ---------------------------------------------------------------------------
# Real points of derived spaces
# ---------------------------------------------------------------------------

def real_points(space, twist: tuple[int, ...], degree: int | None = None) -> CellModel:
    """Cell model of X(R) with the local system of the twist.

    ``twist`` has one bit per uncollapsed side, as in ``SpaceTheories``.
    Infinite factors are truncated at ``degree + 2`` (or the model's own
    truncation when no degree is given).
    """
    model = space.model
    root = model.root if isinstance(model, QuotientModel) else model
    full = space.full_twist(twist)
    factors = []
    for side, atom in enumerate(space.expr.atoms):
        if atom.kind == "P":
            factors.append(rp_model(atom.param, bool(full[side])))
            continue
        N = root.dims[side] if degree is None else degree + 2
        if atom.kind == "BGm":
            factors.append(rp_model(N, bool(full[side])))
        elif atom.param % 2:
            factors.append(point())
        else:
            factors.append(rp_model(N, bool(full[side]), components=2))
    out = factors[0]
    for f in factors[1:]:
        out = product_model(out, f)
    return out


@dataclass
class CycleClassResult:
    degree: int
    twist: tuple[int, ...]
    j: int
    status: str                 # "match", "MISMATCH" or "not-applicable"
    derived: str
    oracle: str
    agree: bool
    reason: str = ""

    def line(self) -> str:
        return (f"H^{self.degree}(I^{self.j}, {twist_str(self.twist) or '-'}): "
                f"{self.derived} vs {self.oracle}  {self.status}"
                + (f"  ({self.reason})" if self.reason else ""))


def certified_level(space, degree: int) -> int | None:
    """Smallest j for which the real cycle class map is certified to be an
    isomorphism in degree ``degree``, or None if no certificate applies."""
    atoms = space.expr.atoms
    kinds = sorted(a.kind for a in atoms)
    if all(k in ("P", "BGm") for k in kinds):
        return degree                       # cellular
    if kinds == ["Bmu"]:
        return degree + 3
    if kinds == ["BGm", "Bmu"]:
        return 2 * degree + 5
    if kinds == ["Bmu", "Bmu"]:
        return 2 * degree + 6
    return None


def _derived_level(space, degree: int, twist, j: int) -> FpAbGroup | None:
    full = space.full_twist(twist)
    if isinstance(space.model, ProjectiveModel):
        return space.model.level_piece(degree, full, j).group
    if j == degree:
        return space.model.piece("hI", degree, full).group
    return None


def cycle_class_check(space, degree: int, j: int, twist: tuple[int, ...]) -> CycleClassResult:
    """Compare H^i(X, I^j, L) with H^i(X(R); Z(L))."""
    if space.field.kind != "R":
        raise OutOfScope("the real cycle class map needs the field R")
    if j < degree:
        raise OutOfScope("the comparison is only made for j >= i")
    oracle = real_points(space, twist, degree).cohomology(degree)
    derived = _derived_level(space, degree, twist, j)
    need = certified_level(space, degree)
    if derived is None:
        return CycleClassResult(degree, tuple(twist), j, "not-applicable", "?", oracle.describe(),
                                False, "I^j-cohomology of quotient models is derived for j = i only")
    agree = isomorphic(derived, oracle)
    if need is None or j < need:
        return CycleClassResult(degree, tuple(twist), j, "not-applicable", derived.describe(),
                                oracle.describe(), agree, "no isomorphism certificate here")
    return CycleClassResult(degree, tuple(twist), j, "match" if agree else "MISMATCH",
                            derived.describe(), oracle.describe(), agree)


def cycle_class_sweep(space, bound: int | None = None, extra: int = 2,
                      twist_filter=None) -> list[CycleClassResult]:
    """All i <= bound, all twists, j from i to i + extra."""
    bound = space.bound if bound is None else bound
    out = []
    for d in range(bound + 1):
        for t in space.twists():
            if twist_filter is not None and tuple(t) != tuple(twist_filter):
                continue
            for j in range(d, d + extra + 1):
                out.append(cycle_class_check(space, d, j, t))
    return out


# ---------------------------------------------------------------------------
# The ring of RP^oo x RP^oo against I-cohomology of BG_m x BG_m
# ---------------------------------------------------------------------------

REAL_RING_IMAGES = {"lam": "e1^2", "mu": "e2^2", "nu": "e1*e2*e3"}


def real_ring_embedding(bound: int = 8) -> Comparison:
    """lam, mu, nu -> e1^2, e2^2, e1e2e3 into untwisted H(I)(BG_m x BG_m) over R."""
    from .catalog import real_points_ring
    from .spaces import stabilize_bgm_product
    R = FieldModel("R")
    space = stabilize_bgm_product(2, R, bound)
    ring = real_points_ring()
    return compare(ring, space.model, REAL_RING_IMAGES, "hI", bound,
                   twist_map=lambda t: (0, 0), name="Z[lam,mu,nu]/(...) -> H(I)(BGm x BGm)")


def real_ring_vs_oracle(bound: int = 8) -> list[tuple[int, str, str, bool]]:
    """Degreewise: the presentation's groups against H^d(RP^N x RP^N; Z)."""
    from .catalog import real_points_ring
    ring = real_points_ring()
    N = bound + 2
    P = product_model(rp_model(N), rp_model(N))
    rows = []
    for d in range(bound + 1):
        G = ring.realize(d, ()).group
        H = P.cohomology(d)
        rows.append((d, G.describe(), H.describe(), isomorphic(G, H)))
    return rows
