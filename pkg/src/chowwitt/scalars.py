"""Quadratic-form invariants of the base field: GW(k), W(k), the powers of the
fundamental ideal and the rank maps.

Every scalar ring carries a fixed Z-basis, so modules over it linearize to
integer matrices.  GW(k) and W(k) share the basis of one-dimensional forms
<a> (a running over square classes); W(k) just adds the relation h = 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .fields import FieldModel
from .linalg import FpAbGroup, GroupHom, fiber_product, subgroup
from .errors import UnsupportedField

Vec = tuple[int, ...]


@dataclass(frozen=True)
class ScalarRing:
    label: str                               # GW, W, Z, Z2
    field: FieldModel
    basis: tuple[str, ...]
    relations: tuple[Vec, ...]
    table: tuple[tuple[Vec, ...], ...]       # table[i][j] = basis_i * basis_j
    unit: Vec

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def group(self) -> FpAbGroup:
        return _group(self)

    def zero(self) -> Vec:
        return (0,) * self.dim

    def basis_vec(self, i: int) -> Vec:
        return tuple(int(i == j) for j in range(self.dim))

    def from_int(self, n: int) -> Vec:
        return tuple(n * a for a in self.unit)

    def add(self, a: Sequence[int], b: Sequence[int]) -> Vec:
        return tuple(x + y for x, y in zip(a, b))

    def neg(self, a: Sequence[int]) -> Vec:
        return tuple(-x for x in a)

    def scale(self, n: int, a: Sequence[int]) -> Vec:
        return tuple(n * x for x in a)

    def mul(self, a: Sequence[int], b: Sequence[int]) -> Vec:
        out = [0] * self.dim
        for i, x in enumerate(a):
            if x:
                row = self.table[i]
                for j, y in enumerate(b):
                    if y:
                        for k, c in enumerate(row[j]):
                            if c:
                                out[k] += x * y * c
        return tuple(out)

    def is_zero(self, a: Sequence[int]) -> bool:
        return self.group.is_zero(list(a))

    def equal(self, a: Sequence[int], b: Sequence[int]) -> bool:
        return self.is_zero([x - y for x, y in zip(a, b)])

    def form(self, a: str) -> Vec:
        """The element <a> named by its square-class label."""
        return self.basis_vec(self.basis.index(a))

    def __str__(self) -> str:
        return f"{self.label}({self.field.name})"


@lru_cache(maxsize=None)
def _group(ring: ScalarRing) -> FpAbGroup:
    return FpAbGroup(ring.dim, [list(r) for r in ring.relations], ring.basis)


# ---------------------------------------------------------------------------
# Square classes and the Witt presentation of GW
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def square_classes(field: FieldModel) -> tuple[str, ...]:
    if field.kind == "C":
        return ("1",)
    if field.kind == "R":
        return ("1", "-1")
    return ("1", "u")


def _class_index(field: FieldModel, a: int) -> int:
    F = field.finite_field
    return 0 if a in F.squares else 1


@lru_cache(maxsize=None)
def _gw_relations(field: FieldModel) -> tuple[Vec, ...]:
    """Relations among the <a> in GW(k).

    For C and R there are none (GW is free on square classes).  Over F_q the
    relations are generated by brute force from Witt's presentation:
    <a> + <b> = <a+b> + <ab(a+b)> whenever a + b != 0.
    """
    if field.kind in ("C", "R"):
        return ()
    F = field.finite_field
    rels = set()
    for a in F.units:
        for b in F.units:
            s = F.add(a, b)
            if s == 0:
                continue
            v = [0, 0]
            v[_class_index(field, a)] += 1
            v[_class_index(field, b)] += 1
            v[_class_index(field, s)] -= 1
            v[_class_index(field, F.mul(F.mul(a, b), s))] -= 1
            if any(v):
                rels.add(tuple(v))
    return tuple(sorted(rels))


def _class_table(field: FieldModel) -> tuple[tuple[Vec, ...], ...]:
    classes = square_classes(field)
    k = len(classes)
    rows = []
    for i in range(k):
        row = []
        for j in range(k):
            v = [0] * k
            v[i ^ j] = 1          # square classes form an elementary 2-group here
            row.append(tuple(v))
        rows.append(tuple(row))
    return tuple(rows)


def minus_one_index(field: FieldModel) -> int:
    if field.kind == "C":
        return 0
    if field.kind == "R":
        return 1
    F = field.finite_field
    return _class_index(field, F.minus_one)


@lru_cache(maxsize=None)
def grothendieck_witt(field: FieldModel) -> ScalarRing:
    classes = square_classes(field)
    unit = tuple(int(i == 0) for i in range(len(classes)))
    return ScalarRing("GW", field, classes, _gw_relations(field), _class_table(field), unit)


@lru_cache(maxsize=None)
def witt_ring(field: FieldModel) -> ScalarRing:
    if field.kind not in ("C", "R", "F"):
        raise UnsupportedField(field.name)
    gw = grothendieck_witt(field)
    return ScalarRing("W", field, gw.basis, gw.relations + (hyperbolic(field),), gw.table, gw.unit)


@lru_cache(maxsize=None)
def integers(field: FieldModel) -> ScalarRing:
    return ScalarRing("Z", field, ("1",), (), (((1,),),), (1,))


@lru_cache(maxsize=None)
def integers_mod2(field: FieldModel) -> ScalarRing:
    return ScalarRing("Z2", field, ("1",), ((2,),), (((1,),),), (1,))


def scalar_ring(field: FieldModel, label: str) -> ScalarRing:
    try:
        return {"GW": grothendieck_witt, "W": witt_ring, "Z": integers,
                "Z2": integers_mod2}[label](field)
    except KeyError:
        raise UnsupportedField(f"unknown scalar ring {label!r}") from None


# ---------------------------------------------------------------------------
# Distinguished elements and maps
# ---------------------------------------------------------------------------

def minus_one_form(field: FieldModel) -> Vec:
    """<-1> in the shared GW/W basis."""
    k = len(square_classes(field))
    return tuple(int(i == minus_one_index(field)) for i in range(k))


def hyperbolic(field: FieldModel) -> Vec:
    """h = <1> + <-1>."""
    k = len(square_classes(field))
    v = [0] * k
    v[0] += 1
    v[minus_one_index(field)] += 1
    return tuple(v)


def ideal_generators(field: FieldModel) -> tuple[Vec, ...]:
    """Generators <a> - <1> of the fundamental ideal (as an ideal)."""
    k = len(square_classes(field))
    gens = []
    for i in range(1, k):
        v = [0] * k
        v[i] = 1
        v[0] = -1
        gens.append(tuple(v))
    return tuple(gens)


def rank(v: Sequence[int]) -> int:
    """Rank GW(k) -> Z: every <a> has rank one."""
    return sum(v)


def convert(v: Sequence[int], src: ScalarRing, dst: ScalarRing) -> Vec:
    """Canonical map between scalar rings (GW -> W -> Z/2, GW -> Z -> Z/2)."""
    if src.label == dst.label:
        return tuple(v)
    if src.label in ("GW", "W") and dst.label in ("GW", "W"):
        return tuple(v)  # shared basis; W -> GW is the evident lift
    if src.label in ("GW", "W") and dst.label in ("Z", "Z2"):
        if src.label == "W" and dst.label == "Z":
            raise ValueError("no ring map W -> Z")
        return (rank(v),)
    if src.label == "Z" and dst.label == "Z2":
        return tuple(v)
    if src.label in ("Z", "Z2") and dst.label in ("GW", "W"):
        return dst.from_int(v[0])
    raise ValueError(f"no canonical map {src.label} -> {dst.label}")


@lru_cache(maxsize=None)
def rank_maps(field: FieldModel) -> tuple[GroupHom, GroupHom]:
    """(rk: GW -> Z, rk mod 2: W -> Z/2)."""
    gw, w = grothendieck_witt(field), witt_ring(field)
    z, z2 = integers(field), integers_mod2(field)
    rk = GroupHom(gw.group, z.group, [[1] for _ in gw.basis])
    rk2 = GroupHom(w.group, z2.group, [[1] for _ in w.basis])
    return rk, rk2


@lru_cache(maxsize=None)
def gw_as_fiber_product(field: FieldModel) -> FpAbGroup:
    """W(k) x_{Z/2} Z over the two rank maps."""
    _, rk2 = rank_maps(field)
    z, z2 = integers(field), integers_mod2(field)
    mod2 = GroupHom(z.group, z2.group, [[1]])
    P, _, _ = fiber_product(rk2, mod2)
    return P


# ---------------------------------------------------------------------------
# The I-filtration
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def ideal_power_spanning(field: FieldModel, j: int) -> tuple[Vec, ...]:
    w = witt_ring(field)
    if j <= 0:
        return tuple(w.basis_vec(i) for i in range(w.dim))
    if j == 1:
        gens = ideal_generators(field)
    else:
        prev = ideal_power_spanning(field, j - 1)
        gens = tuple(w.mul(a, b) for a in prev for b in ideal_generators(field))
    # close up under the W-action so the span is an ideal
    return tuple(w.mul(b, g) for g in gens for b in (w.basis_vec(i) for i in range(w.dim)))


@lru_cache(maxsize=None)
def fundamental_ideal_power(field: FieldModel, j: int) -> tuple[FpAbGroup, GroupHom]:
    """I^j(k) as a subgroup of W(k), with I^{<=0} = W(k)."""
    w = witt_ring(field)
    return subgroup(w.group, [list(v) for v in ideal_power_spanning(field, j)])


@lru_cache(maxsize=None)
def ibar(field: FieldModel, j: int) -> FpAbGroup:
    """I^j / I^{j+1}."""
    w = witt_ring(field)
    if j < 0:
        return FpAbGroup(0)
    lower = [list(v) for v in ideal_power_spanning(field, j + 1)]
    upper = [list(v) for v in ideal_power_spanning(field, j)]
    big = FpAbGroup(w.dim, list(w.relations) + lower)
    S, _ = subgroup(big, upper)
    return S
