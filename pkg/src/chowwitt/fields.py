"""Base fields: the catalog kinds and small finite-field arithmetic."""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from functools import cached_property

from .errors import ParamError, UnsupportedField

MAX_FINITE_Q = 13


def _factor_prime_power(q: int) -> tuple[int, int] | None:
    for p in range(2, q + 1):
        if q % p == 0:
            k, r = 0, q
            while r % p == 0:
                r //= p
                k += 1
            return (p, k) if r == 1 else None
    return None


class GF:
    """The field with q = p^k elements; elements are ints 0..q-1 read as
    base-p digit vectors of polynomials modulo a fixed irreducible."""

    def __init__(self, q: int):
        pk = _factor_prime_power(q)
        if pk is None:
            raise UnsupportedField(f"{q} is not a prime power")
        self.q = q
        self.p, self.k = pk
        self.modulus = self._irreducible()
        self._mul = [[self._mul_slow(a, b) for b in range(q)] for a in range(q)]
        self._add = [[self._add_slow(a, b) for b in range(q)] for a in range(q)]

    def _digits(self, a: int) -> list[int]:
        return [(a // self.p ** i) % self.p for i in range(self.k)]

    def _from_digits(self, d) -> int:
        return sum(c * self.p ** i for i, c in enumerate(d))

    def _irreducible(self) -> tuple[int, ...]:
        p, k = self.p, self.k
        if k == 1:
            return (0, 1)
        for tail in itertools.product(range(p), repeat=k):
            poly = tuple(tail) + (1,)
            if all(sum(c * x ** i for i, c in enumerate(poly)) % p for x in range(p)):
                return poly
        raise UnsupportedField(f"no irreducible of degree {k} over F_{p}")

    def _add_slow(self, a: int, b: int) -> int:
        return self._from_digits([(x + y) % self.p for x, y in zip(self._digits(a), self._digits(b))])

    def _mul_slow(self, a: int, b: int) -> int:
        p, k = self.p, self.k
        da, db = self._digits(a), self._digits(b)
        prod = [0] * (2 * k)
        for i, x in enumerate(da):
            for j, y in enumerate(db):
                prod[i + j] = (prod[i + j] + x * y) % p
        for deg in range(2 * k - 1, k - 1, -1):
            c = prod[deg]
            if c:
                for i, m in enumerate(self.modulus):
                    prod[deg - k + i] = (prod[deg - k + i] - c * m) % p
        return self._from_digits(prod[:k])

    def add(self, a: int, b: int) -> int:
        return self._add[a][b]

    def mul(self, a: int, b: int) -> int:
        return self._mul[a][b]

    def neg(self, a: int) -> int:
        return next(x for x in range(self.q) if self._add[a][x] == 0)

    @cached_property
    def units(self) -> tuple[int, ...]:
        return tuple(range(1, self.q))

    @cached_property
    def squares(self) -> frozenset[int]:
        return frozenset(self.mul(a, a) for a in self.units)

    @cached_property
    def nonsquare(self) -> int:
        return min(a for a in self.units if a not in self.squares)

    @property
    def minus_one(self) -> int:
        return self.neg(1)


@dataclass(frozen=True)
class FieldModel:
    """A supported base field: quadratically closed, real closed or F_q."""

    kind: str                      # "C", "R" or "F"
    q: int = 0
    # exclusions only validate parameters; two models of one field compare equal
    char_exclusions: frozenset[int] = field(default_factory=lambda: frozenset({2}),
                                            compare=False, hash=False)

    def __post_init__(self):
        if self.kind not in ("C", "R", "F"):
            raise UnsupportedField(f"unknown field kind {self.kind!r}")
        if self.kind == "F":
            pk = _factor_prime_power(self.q)
            if self.q < 3 or pk is None or pk[0] == 2:
                raise UnsupportedField(f"F{self.q}: need an odd prime power")
            if self.q > MAX_FINITE_Q:
                raise UnsupportedField(f"F{self.q}: finite fields are supported up to q = {MAX_FINITE_Q}")
            for n in self.char_exclusions:
                if n % self.characteristic == 0:
                    raise ParamError(
                        f"characteristic {self.characteristic} of F{self.q} divides {n}")

    @classmethod
    def parse(cls, text: str) -> FieldModel:
        t = text.strip()
        if t in ("C", "R"):
            return cls(t)
        m = re.fullmatch(r"F(?:q)?\(?(\d+)\)?", t)
        if m:
            return cls("F", int(m.group(1)))
        raise UnsupportedField(f"unknown field {text!r}")

    @property
    def name(self) -> str:
        return f"F{self.q}" if self.kind == "F" else self.kind

    @property
    def characteristic(self) -> int:
        if self.kind != "F":
            return 0
        return _factor_prime_power(self.q)[0]

    def excluding(self, *ns: int) -> FieldModel:
        """Same field with extra integers that must be prime to char(k)."""
        return FieldModel(self.kind, self.q, self.char_exclusions | {int(n) for n in ns})

    def allows(self, n: int) -> bool:
        p = self.characteristic
        return p == 0 or n % p != 0

    @cached_property
    def finite_field(self) -> GF:
        if self.kind != "F":
            raise UnsupportedField(f"{self.name} is not finite")
        return GF(self.q)

    def __str__(self) -> str:
        return self.name
