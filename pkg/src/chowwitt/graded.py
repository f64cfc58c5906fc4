"""Bigraded algebras over a scalar ring: generators with (degree, twist),
epsilon-commutative multiplication, finitely presented quotients, and their
per-bidegree realization as abelian groups.

Twists are bit tuples (elements of Pic/2).  Swapping factors of degrees i
and j costs <-1>^{ij}; monomials are kept in the declared generator order.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .errors import DegreeBoundExceeded, InvalidCorrespondence
from .fields import FieldModel
from .linalg import FpAbGroup, GroupHom, Sparse
from .scalars import (ScalarRing, hyperbolic, ideal_generators, minus_one_form,
                      scalar_ring)

Twist = tuple[int, ...]
Mono = tuple[int, ...]
Poly = dict[Mono, tuple[int, ...]]

DEFAULT_DEGREE0_CAP = 3


def twist_add(a: Twist, b: Twist) -> Twist:
    return tuple((x + y) % 2 for x, y in zip(a, b))


def twist_str(t: Twist) -> str:
    return "".join(str(b) for b in t) if t else "-"


@dataclass(frozen=True)
class Generator:
    name: str
    degree: int
    twist: Twist
    annihilator: str = "none"     # none | I | h

    def __post_init__(self):
        if self.degree < 0:
            raise ValueError("negative degree")
        if self.annihilator not in ("none", "I", "h"):
            raise ValueError(f"unknown annihilator tag {self.annihilator!r}")


class GradedAlgebra:
    """Free epsilon-commutative algebra on named generators."""

    def __init__(self, gens: Sequence[Generator], scalars: ScalarRing):
        self.gens = tuple(gens)
        self.scalars = scalars
        self.index = {g.name: i for i, g in enumerate(self.gens)}
        if len(self.index) != len(self.gens):
            raise ValueError("duplicate generator names")
        bits = {len(g.twist) for g in self.gens}
        if len(bits) > 1:
            raise ValueError("generators disagree on twist length")
        self.nbits = bits.pop() if bits else 0
        self._odd = tuple(i for i, g in enumerate(self.gens) if g.degree % 2)
        # <-1> acts as 1 on Z- and Z/2-valued theories
        self._minus_one = (minus_one_form(scalars.field) if scalars.label in ("GW", "W")
                           else scalars.unit)

    # -- monomials ----------------------------------------------------------
    @property
    def one(self) -> Mono:
        return (0,) * len(self.gens)

    def bidegree(self, m: Mono) -> tuple[int, Twist]:
        d = 0
        t = [0] * self.nbits
        for e, g in zip(m, self.gens):
            if e:
                d += e * g.degree
                if e % 2:
                    for k, b in enumerate(g.twist):
                        t[k] ^= b
        return d, tuple(t)

    def mono_mul(self, a: Mono, b: Mono) -> tuple[Mono, int]:
        """Normal-ordered product and the parity of the epsilon sign."""
        # parity of the sum over i > j of a_i deg_i * b_j deg_j; only odd degrees count
        sign = suffix = 0
        for j in reversed(self._odd):
            if b[j] & suffix:
                sign ^= 1
            suffix ^= a[j] & 1
        return tuple(x + y for x, y in zip(a, b)), sign

    def mono_str(self, m: Mono) -> str:
        parts = []
        for e, g in zip(m, self.gens):
            if e == 1:
                parts.append(g.name)
            elif e > 1:
                parts.append(f"{g.name}^{e}")
        return "*".join(parts) if parts else "1"

    # -- polynomials -----------------------------------------------------------
    def const(self, c: Sequence[int]) -> Poly:
        c = tuple(c)
        return {self.one: c} if any(c) else {}

    def integer(self, n: int) -> Poly:
        return self.const(self.scalars.from_int(n))

    def var(self, name: str) -> Poly:
        m = [0] * len(self.gens)
        m[self.index[name]] = 1
        return {tuple(m): self.scalars.unit}

    def add(self, *ps: Poly) -> Poly:
        out: dict[Mono, list[int]] = {}
        for p in ps:
            for m, c in p.items():
                acc = out.setdefault(m, [0] * self.scalars.dim)
                for i, x in enumerate(c):
                    acc[i] += x
        return {m: tuple(c) for m, c in out.items() if any(c)}

    def scale(self, c: Sequence[int], p: Poly) -> Poly:
        S = self.scalars
        return {m: v for m, v in ((m, S.mul(c, x)) for m, x in p.items()) if any(v)}

    def smul(self, n: int, p: Poly) -> Poly:
        return {m: tuple(n * x for x in c) for m, c in p.items() if n}

    def neg(self, p: Poly) -> Poly:
        return self.smul(-1, p)

    def sub(self, a: Poly, b: Poly) -> Poly:
        return self.add(a, self.neg(b))

    def mul(self, a: Poly, b: Poly) -> Poly:
        S = self.scalars
        out: dict[Mono, list[int]] = {}
        for ma, ca in a.items():
            for mb, cb in b.items():
                m, s = self.mono_mul(ma, mb)
                c = S.mul(ca, cb)
                if s:
                    c = S.mul(c, self._minus_one)
                acc = out.setdefault(m, [0] * S.dim)
                for i, x in enumerate(c):
                    acc[i] += x
        return {m: tuple(c) for m, c in out.items() if any(c)}

    def mono_times(self, m: Mono, p: Poly) -> Poly:
        """m * p for a monomial m with unit coefficient."""
        S = self.scalars
        out: Poly = {}
        for mb, c in p.items():
            prod, s = self.mono_mul(m, mb)
            if s:
                c = S.mul(c, self._minus_one)
            if prod in out:
                c = tuple(x + y for x, y in zip(out[prod], c))
            out[prod] = c
        return {mm: c for mm, c in out.items() if any(c)}

    def power(self, p: Poly, k: int) -> Poly:
        out = self.integer(1)
        for _ in range(k):
            out = self.mul(out, p)
        return out

    def monomial_poly(self, m: Mono, c: Sequence[int] | None = None) -> Poly:
        return {tuple(m): tuple(c) if c is not None else self.scalars.unit}

    def poly_bidegree(self, p: Poly) -> tuple[int, Twist] | None:
        degs = {self.bidegree(m) for m in p}
        if len(degs) > 1:
            raise ValueError(f"inhomogeneous polynomial {self.format(p)}")
        return degs.pop() if degs else None

    def substitute(self, p: Poly, images: Mapping[str, Poly], target: GradedAlgebra) -> Poly:
        """Ring map sending generator names to polynomials of ``target``."""
        out: Poly = {}
        for m, c in p.items():
            term = target.const(c)
            for e, g in zip(m, self.gens):
                for _ in range(e):
                    term = target.mul(term, images[g.name])
            out = target.add(out, term)
        return out

    # -- text ---------------------------------------------------------------------
    def coeff_str(self, c: Sequence[int]) -> str:
        S = self.scalars
        if all(x == 0 for x in c[1:]):
            return str(c[0])
        out = ""
        for x, name in zip(c, S.basis):
            if not x:
                continue
            body = f"<{name}>" if abs(x) == 1 else f"{abs(x)}*<{name}>"
            if not out:
                out = body if x > 0 else f"-{body}"
            else:
                out += f" + {body}" if x > 0 else f" - {body}"
        return "(" + out + ")"

    def format(self, p: Poly) -> str:
        if not p:
            return "0"
        terms = []
        for m in sorted(p, key=self._order_key):
            c = p[m]
            mono = self.mono_str(m)
            cs = self.coeff_str(c)
            if cs == "1":
                body, sign = mono, "+"
            elif cs == "-1":
                body, sign = mono, "-"
            elif cs.startswith("-") and not cs.startswith("("):
                body, sign = (cs[1:] if mono == "1" else f"{cs[1:]}*{mono}"), "-"
            else:
                body, sign = (cs if mono == "1" else f"{cs}*{mono}"), "+"
            terms.append((sign, body))
        out = ("-" if terms[0][0] == "-" else "") + terms[0][1]
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out

    def _order_key(self, m: Mono):
        d, _ = self.bidegree(m)
        return (d, tuple(-x for x in m))

    def parse(self, text: str) -> Poly:
        return _PolyParser(self, text).parse()


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z][A-Za-z0-9_]*)|(<[^>]*>)|(.))")


class _PolyParser:
    """Recursive descent over sums of products of integers, scalar symbols
    (h, <a>) and generator powers."""

    def __init__(self, alg: GradedAlgebra, text: str):
        self.alg = alg
        self.text = text
        self.tokens = []
        for mt in _TOKEN.finditer(text):
            if mt.group(0).strip() == "":
                continue
            kind = ("int" if mt.group(1) else "name" if mt.group(2)
                    else "form" if mt.group(3) else "op")
            self.tokens.append((kind, mt.group(0).strip()))
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else (None, None)

    def take(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def parse(self) -> Poly:
        p = self.sum()
        if self.pos != len(self.tokens):
            raise ValueError(f"trailing input in {self.text!r}")
        return p

    def sum(self) -> Poly:
        alg = self.alg
        sign = 1
        if self.peek() == ("op", "-"):
            self.take()
            sign = -1
        elif self.peek() == ("op", "+"):
            self.take()
        acc = alg.smul(sign, self.product())
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            term = self.product()
            acc = alg.add(acc, term if op == "+" else alg.neg(term))
        return acc

    def product(self) -> Poly:
        alg = self.alg
        acc = self.factor()
        while self.peek() == ("op", "*"):
            self.take()
            acc = alg.mul(acc, self.factor())
        return acc

    def factor(self) -> Poly:
        alg = self.alg
        kind, val = self.take()
        if kind == "int":
            base = alg.integer(int(val))
        elif kind == "form":
            name = val[1:-1].strip()
            S = alg.scalars
            if name not in S.basis:
                raise ValueError(f"unknown form {val} over {S.field.name}")
            base = alg.const(S.form(name))
        elif kind == "name" and val == "h":
            base = alg.const(hyperbolic(alg.scalars.field))
        elif kind == "name":
            if val not in alg.index:
                raise ValueError(f"unknown generator {val!r}")
            base = alg.var(val)
        elif (kind, val) == ("op", "("):
            base = self.sum()
            if self.take() != ("op", ")"):
                raise ValueError(f"unbalanced parenthesis in {self.text!r}")
        else:
            raise ValueError(f"unexpected {val!r} in {self.text!r}")
        if self.peek() == ("op", "^"):
            self.take()
            k, e = self.take()
            if k != "int":
                raise ValueError("exponent must be an integer")
            base = alg.power(base, int(e))
        return base


# ---------------------------------------------------------------------------
# Presentations
# ---------------------------------------------------------------------------

@dataclass
class RingPresentation:
    name: str
    algebra: GradedAlgebra
    relations: list[Poly]
    degree0_cap: int = DEFAULT_DEGREE0_CAP
    notes: str = ""
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def scalars(self) -> ScalarRing:
        return self.algebra.scalars

    @property
    def gens(self) -> tuple[Generator, ...]:
        return self.algebra.gens

    @property
    def nbits(self) -> int:
        return self.algebra.nbits

    def __post_init__(self):
        for r in self.relations:
            self.algebra.poly_bidegree(r)

    @cached_property
    def all_relations(self) -> tuple[Poly, ...]:
        alg = self.algebra
        field_ = alg.scalars.field
        out = [r for r in self.relations if r]
        for g in alg.gens:
            if g.annihilator == "I":
                for x in ideal_generators(field_):
                    out.append(alg.scale(x, alg.var(g.name)))
            elif g.annihilator == "h":
                out.append(alg.scale(hyperbolic(field_), alg.var(g.name)))
        return tuple(r for r in out if r)

    @cached_property
    def graded_relations(self) -> tuple[tuple[Poly, tuple[int, Twist]], ...]:
        return tuple((r, self.algebra.poly_bidegree(r)) for r in self.all_relations)

    @cached_property
    def zero_monomials(self) -> tuple[Mono, ...]:
        """Monomial relations with unit coefficient; their multiples vanish."""
        unit = self.scalars.unit
        out = []
        for r in self.relations:
            if len(r) == 1:
                (m, c), = r.items()
                if tuple(c) == unit or tuple(-x for x in c) == unit:
                    out.append(m)
        return tuple(out)

    def is_zero_monomial(self, m: Mono) -> bool:
        memo = self._cache.setdefault("zero", {})
        if m not in memo:
            memo[m] = any(all(x >= y for x, y in zip(m, z)) for z in self.zero_monomials)
        return memo[m]

    def monomials(self, degree: int, twist: Twist) -> list[Mono]:
        key = ("mono", degree, twist)
        if key not in self._cache:
            self._cache[key] = [m for m in enumerate_monomials(self.algebra, degree, twist,
                                                               self.degree0_cap)
                                if not self.is_zero_monomial(m)]
        return self._cache[key]

    def quotient(self, extra: Iterable[Poly], name: str | None = None) -> RingPresentation:
        return RingPresentation(name or self.name, self.algebra,
                                list(self.relations) + [r for r in extra],
                                self.degree0_cap, self.notes)

    def realize(self, degree: int, twist: Twist, bound: int | None = None) -> Realization:
        if bound is not None and degree > bound:
            raise DegreeBoundExceeded(f"degree {degree} exceeds bound {bound}")
        key = ("real", degree, tuple(twist))
        if key not in self._cache:
            self._cache[key] = Realization(self, degree, tuple(twist))
        return self._cache[key]

    def bidegrees(self, bound: int) -> list[tuple[int, Twist]]:
        return [(d, t) for d in range(bound + 1) for t in all_twists(self.nbits)]


def all_twists(nbits: int) -> list[Twist]:
    out = [()]
    for _ in range(nbits):
        out = [t + (b,) for t in out for b in (0, 1)]
    return out


def enumerate_monomials(alg: GradedAlgebra, degree: int, twist: Twist, cap0: int) -> list[Mono]:
    gens = alg.gens
    n = len(gens)
    out: list[Mono] = []
    exps = [0] * n

    def rec(i: int, remaining: int, zero_budget: int):
        if i == n:
            if remaining == 0 and alg.bidegree(tuple(exps))[1] == tuple(twist):
                out.append(tuple(exps))
            return
        g = gens[i]
        if g.degree == 0:
            for e in range(zero_budget + 1):
                exps[i] = e
                rec(i + 1, remaining, zero_budget - e)
        else:
            for e in range(remaining // g.degree + 1):
                exps[i] = e
                rec(i + 1, remaining - e * g.degree, zero_budget)
        exps[i] = 0

    rec(0, degree, cap0)
    out.sort(key=lambda m: tuple(-x for x in m))
    return out


class Realization:
    """The abelian group of one bidegree: scalar basis x monomials modulo the
    scalar-linearized relations."""

    def __init__(self, pres: RingPresentation, degree: int, twist: Twist):
        self.pres = pres
        self.degree = degree
        self.twist = twist
        alg = pres.algebra
        S = alg.scalars
        k = S.dim
        self.monomials = pres.monomials(degree, twist)
        self.col = {m: i for i, m in enumerate(self.monomials)}
        labels = []
        for m in self.monomials:
            ms = alg.mono_str(m)
            for b in S.basis:
                labels.append(ms if b == "1" else f"<{b}>{ms}")
        rows: list[Sparse] = []
        for m in self.monomials:
            base = self.col[m] * k
            for r in S.relations:
                rows.append({base + i: a for i, a in enumerate(r) if a})
        table = S.table
        for rel, (d_r, t_r) in pres.graded_relations:
            if d_r > degree:
                continue
            for mult in pres.monomials(degree - d_r, twist_add(twist, t_r)):
                v = self.vector(alg.mono_times(mult, rel), strict=False)
                if not v:
                    continue
                if k == 1:
                    rows.append(v)
                    continue
                for sc in range(k):
                    row: Sparse = {}
                    for j, a in v.items():
                        i, b = divmod(j, k)
                        for bb, c in enumerate(table[sc][b]):
                            if c:
                                row[i * k + bb] = row.get(i * k + bb, 0) + a * c
                    rows.append(row)
        self.group = FpAbGroup(len(self.monomials) * k, rows, labels)

    def vector(self, p: Poly, strict: bool = True) -> Sparse | None:
        """Coordinates of a polynomial of this bidegree; None when a monomial
        falls outside the enumerated (capped) set and strict is False."""
        k = self.pres.scalars.dim
        out: Sparse = {}
        for m, c in p.items():
            i = self.col.get(m)
            if i is None:
                if self.pres.is_zero_monomial(m):
                    continue
                if strict:
                    raise DegreeBoundExceeded(
                        f"monomial {self.pres.algebra.mono_str(m)} outside the enumerated range")
                return None
            for s, a in enumerate(c):
                if a:
                    out[i * k + s] = out.get(i * k + s, 0) + a
        return {j: a for j, a in out.items() if a}

    def column_poly(self, j: int) -> Poly:
        k = self.pres.scalars.dim
        m = self.monomials[j // k]
        return {m: self.pres.scalars.basis_vec(j % k)}

    @property
    def invariants(self):
        return self.group.invariants()


# ---------------------------------------------------------------------------
# Tensor products
# ---------------------------------------------------------------------------

def tensor_product(p1: RingPresentation, p2: RingPresentation,
                   rename1: Mapping[str, str] | None = None,
                   rename2: Mapping[str, str] | None = None,
                   name: str | None = None) -> RingPresentation:
    """Disjoint generators (p1's first), concatenated twists, union of
    relations.  Cross commutation follows the epsilon rule automatically."""
    if p1.scalars != p2.scalars:
        raise ValueError("tensor factors must share the scalar ring")
    rename1 = dict(rename1 or {})
    rename2 = dict(rename2 or {})
    b1, b2 = p1.nbits, p2.nbits
    gens = [Generator(rename1.get(g.name, g.name), g.degree, g.twist + (0,) * b2, g.annihilator)
            for g in p1.gens]
    gens += [Generator(rename2.get(g.name, g.name), g.degree, (0,) * b1 + g.twist, g.annihilator)
             for g in p2.gens]
    alg = GradedAlgebra(gens, p1.scalars)
    n1 = len(p1.gens)

    def lift(p: Poly, offset: int, size: int) -> Poly:
        out = {}
        for m, c in p.items():
            mm = [0] * len(gens)
            mm[offset:offset + size] = m
            out[tuple(mm)] = c
        return out

    rels = [lift(r, 0, n1) for r in p1.relations]
    rels += [lift(r, n1, len(p2.gens)) for r in p2.relations]
    return RingPresentation(name or f"({p1.name}) x ({p2.name})", alg, rels,
                            max(p1.degree0_cap, p2.degree0_cap))


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

def to_text(p: RingPresentation) -> str:
    alg = p.algebra
    lines = [f"presentation {p.name}",
             f"scalars {p.scalars.label}",
             f"twist_bits {p.nbits}",
             f"degree0_cap {p.degree0_cap}"]
    for g in alg.gens:
        lines.append(f"gen {g.name} {g.degree} {twist_str(g.twist)} {g.annihilator}")
    for r in p.relations:
        lines.append(f"rel {alg.format(r)}")
    return "\n".join(lines) + "\n"


def from_text(text: str, field_: FieldModel) -> RingPresentation:
    name, label, nbits, cap = "", "GW", 0, DEFAULT_DEGREE0_CAP
    gens: list[Generator] = []
    rel_lines: list[str] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, _, rest = line.partition(" ")
        if key == "presentation":
            name = rest
        elif key == "scalars":
            label = rest.strip()
        elif key == "twist_bits":
            nbits = int(rest)
        elif key == "degree0_cap":
            cap = int(rest)
        elif key == "gen":
            gname, deg, bits, ann = rest.split()
            tw = () if bits == "-" else tuple(int(b) for b in bits)
            if len(tw) != nbits:
                raise ValueError(f"generator {gname}: expected {nbits} twist bits")
            gens.append(Generator(gname, int(deg), tw, ann))
        elif key == "rel":
            rel_lines.append(rest)
        else:
            raise ValueError(f"unknown line {line!r}")
    alg = GradedAlgebra(gens, scalar_ring(field_, label))
    return RingPresentation(name, alg, [alg.parse(r) for r in rel_lines], cap)


def to_json(p: RingPresentation) -> str:
    alg = p.algebra
    doc = {
        "name": p.name,
        "scalars": p.scalars.label,
        "twist_bits": p.nbits,
        "degree0_cap": p.degree0_cap,
        "generators": [{"name": g.name, "degree": g.degree, "twist": list(g.twist),
                        "annihilator": g.annihilator} for g in alg.gens],
        "relations": [alg.format(r) for r in p.relations],
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def from_json(text: str, field_: FieldModel) -> RingPresentation:
    doc = json.loads(text)
    gens = [Generator(g["name"], g["degree"], tuple(g["twist"]), g["annihilator"])
            for g in doc["generators"]]
    alg = GradedAlgebra(gens, scalar_ring(field_, doc["scalars"]))
    return RingPresentation(doc["name"], alg, [alg.parse(r) for r in doc["relations"]],
                            doc.get("degree0_cap", DEFAULT_DEGREE0_CAP))


# ---------------------------------------------------------------------------
# Multiplication in a realization and comparison of presentations
# ---------------------------------------------------------------------------

def multiply(p: RingPresentation, x: Poly, y: Poly, bound: int | None = None) -> Poly:
    """Product of two homogeneous elements, in normal form at the target bidegree."""
    alg = p.algebra
    prod = alg.mul(x, y)
    bd = alg.poly_bidegree(prod)
    if bd is None:
        return {}
    R = p.realize(bd[0], bd[1], bound)
    vec = R.group.normal_form(_dense(R.vector(prod), R.group.n))
    out: Poly = {}
    for j, a in enumerate(vec):
        if a:
            out = alg.add(out, alg.smul(a, R.column_poly(j)))
    return out


def _dense(v: Mapping[int, int], n: int) -> list[int]:
    out = [0] * n
    for i, a in v.items():
        out[i] = a
    return out


class PresentationTarget:
    """Adapter giving a presentation the evaluation interface of a model, so
    one presentation can be compared against another."""

    collapsed: tuple[int, ...] = ()

    def __init__(self, pres: RingPresentation, bound: int | None = None):
        self.pres = pres
        self.algebra = pres.algebra
        self.nsides = pres.nbits
        self.gw = pres.scalars
        self.bound = bound

    def canonical(self, twist: Twist) -> Twist:
        return tuple(twist)

    def bidegree(self, p: Poly):
        return self.algebra.poly_bidegree(p)

    def evaluate(self, p: Poly) -> dict:
        out: dict = {}
        for m, c in p.items():
            for s, a in enumerate(c):
                if a:
                    key = ("m", m, s)
                    out[key] = out.get(key, 0) + a
        return {key: a for key, a in out.items() if a}

    def project(self, theory: str, x: dict) -> dict:
        return x

    def piece(self, theory: str, degree: int, twist: Twist):
        from .models import Piece
        R = self.pres.realize(degree, twist, self.bound)
        k = self.pres.scalars.dim
        keys = [("m", m, s) for m in R.monomials for s in range(k)]
        rels = []
        for row in R.group.relations:
            rels.append({keys[i]: a for i, a in row.items() if a})
        return Piece(keys, rels, [{key: 1} for key in keys], R.group.labels)


@dataclass
class BidegreeVerdict:
    degree: int
    twist: Twist
    source: str
    target: str
    injective: bool
    surjective: bool
    kernel: tuple[str, ...] = ()

    @property
    def verdict(self) -> str:
        return _verdict(self.injective, self.surjective)


@dataclass
class Comparison:
    name: str
    theory: str
    rows: list[BidegreeVerdict]

    @property
    def injective(self) -> bool:
        return all(r.injective for r in self.rows)

    @property
    def surjective(self) -> bool:
        return all(r.surjective for r in self.rows)

    @property
    def verdict(self) -> str:
        return _verdict(self.injective, self.surjective)

    def failures(self) -> list[BidegreeVerdict]:
        return [r for r in self.rows if r.verdict != "iso"]

    def table(self) -> str:
        lines = [f"{self.name} [{self.theory}]: {self.verdict}"]
        for r in self.rows:
            lines.append(f"  ({r.degree}, {twist_str(r.twist)})  {r.source:>18} -> "
                         f"{r.target:<18} {r.verdict}")
        return "\n".join(lines)


def _verdict(inj: bool, surj: bool) -> str:
    return {(True, True): "iso", (True, False): "inj-only",
            (False, True): "surj-only", (False, False): "neither"}[(inj, surj)]


def embed_twist(target, twist: Twist) -> Twist:
    """Place presentation twist bits on the target's uncollapsed sides."""
    free = [i for i in range(target.nsides) if i not in target.collapsed]
    out = [0] * target.nsides
    if len(twist) == 0:
        return tuple(out)
    if len(twist) != len(free):
        raise InvalidCorrespondence(
            f"presentation has {len(twist)} twist bits, target has {len(free)}")
    for i, b in zip(free, twist):
        out[i] = b
    return tuple(out)


def compare(p: RingPresentation, target, correspondence: Mapping[str, str | Poly] | None = None,
            theory: str = "CW", bound: int = 6, twist_map=None,
            name: str | None = None) -> Comparison:
    """Compare the ring map p -> target induced by a generator correspondence.

    ``target`` is a derived model (or a ``PresentationTarget``); generator
    images are polynomials in the target's symbol algebra, given as text or as
    polynomials, defaulting to the generator of the same name.  Every bidegree
    of p up to ``bound`` is realized and mapped into the target's graded
    piece for ``theory``.  Raises InvalidCorrespondence if a relation of p
    does not map to zero or an image falls outside the piece.
    """
    if isinstance(target, RingPresentation):
        target = PresentationTarget(target, bound)
    twist_free = theory in ("CH", "Ch")
    tmap = twist_map or (lambda t: embed_twist(target, t))
    if twist_free:
        tmap = lambda t: (0,) * target.nsides  # noqa: E731
    A, B = p.algebra, target.algebra
    gw = target.gw
    images: dict[str, Poly] = {}
    for g in A.gens:
        img = (correspondence or {}).get(g.name, g.name)
        poly = B.parse(img) if isinstance(img, str) else img
        bd = target.bidegree(poly) if poly else None
        want = (g.degree, target.canonical(tmap(g.twist)))
        if bd is not None and not twist_free and (bd[0], target.canonical(bd[1])) != want:
            raise InvalidCorrespondence(
                f"{g.name} has bidegree {want} but its image {B.format(poly)} has {bd}")
        images[g.name] = poly
    unit_cache: dict[Mono, dict] = {}

    def value(m: Mono) -> dict:
        if m not in unit_cache:
            q = A.substitute({m: gw.unit}, images, B)
            unit_cache[m] = target.evaluate(q)
        return unit_cache[m]

    rows: list[BidegreeVerdict] = []
    for degree, twist in p.bidegrees(bound):
        R = p.realize(degree, twist)
        ttw = target.canonical(tmap(twist))
        piece = target.piece(theory, degree, ttw)
        k = p.scalars.dim
        cols = []
        for j in range(R.group.n):
            m = R.monomials[j // k]
            s = _convert_scalar(p.scalars.basis_vec(j % k), p.scalars, gw)
            x = target.project(theory, _scalar_act(target, s, value(m)))
            cols.append(piece.vector(x))
        for j, v in enumerate(cols):
            if not piece.contains(dict(zip_keys(piece.keys, v))):
                raise InvalidCorrespondence(
                    f"image of {R.group.labels[j]} at ({degree}, {twist_str(twist)}) "
                    f"is outside the target piece")
        for row in R.group.relations:
            img: dict[int, int] = {}
            for j, a in row.items():
                for i, c in cols[j].items():
                    img[i] = img.get(i, 0) + a * c
            if not piece.ambient.is_zero(img):
                rel = {j: a for j, a in row.items() if a}
                raise InvalidCorrespondence(
                    f"relation {rel} at ({degree}, {twist_str(twist)}) does not map to zero")
        f = GroupHom(R.group, piece.ambient, cols)
        injective = f.is_injective()
        kernel = () if injective else _kernel_labels(f, R.group)
        span = FpAbGroup(len(piece.keys), list(piece.relations) + cols)
        surjective = all(span.is_zero(g) for g in piece.gens)
        rows.append(BidegreeVerdict(degree, tuple(twist), R.group.describe(),
                                    piece.describe(), injective, surjective, kernel))
    return Comparison(name or p.name, theory, rows)


def _kernel_labels(f: GroupHom, G: FpAbGroup) -> tuple[str, ...]:
    K, incl = f.kernel()
    out = []
    for v in incl.images:
        if G.is_zero(v):
            continue
        terms = [(G.labels[j] if a == 1 else f"{a}*{G.labels[j]}")
                 for j, a in sorted(v.items()) if a]
        out.append(" + ".join(terms))
    return tuple(out)


def zip_keys(keys, v: Mapping[int, int]):
    return ((keys[i], a) for i, a in v.items())


def _convert_scalar(v: Sequence[int], src: ScalarRing, dst: ScalarRing) -> tuple[int, ...]:
    from .scalars import convert
    return convert(v, src, dst)


def _scalar_act(target, s: Sequence[int], x: dict) -> dict:
    if isinstance(target, PresentationTarget):
        S = target.pres.scalars
        out: dict = {}
        for (tag, m, b), a in x.items():
            for bb, c in enumerate(S.mul(s, S.basis_vec(b))):
                if c:
                    key = (tag, m, bb)
                    out[key] = out.get(key, 0) + a * c
        return {key: a for key, a in out.items() if a}
    return target.scalar_act(s, x)
