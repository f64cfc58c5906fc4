"""Closed-form presentations of the catalog rings, kept as data.

These are the statements the derived models are checked against.  Each
builder returns a ``RingPresentation``; parameters enter the relation text
directly.  Where a printed statement contains a coefficient that contradicts
the rest of the text, the consistent form is the default and the printed one
is available with ``literal=True``.
"""

from __future__ import annotations

from typing import Sequence

from .errors import ParamError, UnknownCase
from .fields import FieldModel
from .graded import GradedAlgebra, Generator, RingPresentation
from .scalars import scalar_ring

GenSpec = tuple[str, int, tuple[int, ...], str]

# H1 H2 H3 relations shared by every two-sided Chow-Witt ring
_J = ["H1^2 - 2*h", "H2^2 - 2*h", "H3^2 - 2*h",
      "H1*H2 - 2*H3", "H2*H3 - 2*H1", "H1*H3 - 2*H2",
      "2*e1 + H3*e2 - H2*e3", "H1*e1 + H2*e2 - H3*e3",
      "H2*e1 + H1*e2 - 2*e3", "H3*e1 + 2*e2 - H1*e3"]
_QUADRIC_CW = "e1^2 + e2^2 + H3*e1*e2 - e3^2"
_QUADRIC_W = "e1^2 + e2^2 - e3^2"


def _build(name: str, label: str, field: FieldModel, gens: Sequence[GenSpec],
           rels: Sequence[str], cap: int = 3, notes: str = "") -> RingPresentation:
    alg = GradedAlgebra([Generator(*g) for g in gens], scalar_ring(field, label))
    return RingPresentation(name, alg, [alg.parse(r) for r in rels], cap, notes)


def _need(cond: bool, msg: str) -> None:
    if not cond:
        raise ParamError(msg)


# ---------------------------------------------------------------------------
# Projective spaces and their products
# ---------------------------------------------------------------------------

def projective_witt(field: FieldModel, r: int) -> RingPresentation:
    """H(I) of P^r: W[e, R]/(I e, e^{r+1}, eR, R^2)."""
    _need(r >= 1, "r must be positive")
    return _build(f"H(I)(P^{r})", "W", field,
                  [("e", 1, (1,), "I"), ("R", r, ((r + 1) % 2,), "none")],
                  [f"e^{r + 1}", "e*R", "R^2"])


def projective_chow_mod2(field: FieldModel, r: int) -> RingPresentation:
    return _build(f"Ch(P^{r})", "Z2", field, [("c", 1, (), "none")], [f"c^{r + 1}"])


def projective_chow(field: FieldModel, dims: Sequence[int]) -> RingPresentation:
    """Z[c]/(c^{r+1}) or Z[c1, c2]/(c1^{q+1}, c2^{r+1})."""
    if len(dims) == 1:
        (r,) = dims
        return _build(f"CH(P^{r})", "Z", field, [("c", 1, (), "none")], [f"c^{r + 1}"])
    q, r = dims
    return _build(f"CH(P^{q} x P^{r})", "Z", field,
                  [("c1", 1, (), "none"), ("c2", 1, (), "none")],
                  [f"c1^{q + 1}", f"c2^{r + 1}"])


def product_chow_mod2(field: FieldModel, q: int, r: int) -> RingPresentation:
    return _build(f"Ch(P^{q} x P^{r})", "Z2", field,
                  [("c1", 1, (), "none"), ("c2", 1, (), "none")],
                  [f"c1^{q + 1}", f"c2^{r + 1}"])


def _r_gens(q: int, r: int) -> list[GenSpec]:
    return [("R1", q, ((q + 1) % 2, 0), "none"), ("R2", r, (0, (r + 1) % 2), "none")]


def _r_relations(q: int, r: int) -> list[str]:
    return [f"e1^{q + 1}", f"e2^{r + 1}", "e1*R1", "e2*R2", "R1^2", "R2^2",
            f"e1^{q}*e3 - e2*R1", f"e2^{r}*e3 - e1*R2",
            f"e3*R1 - e1^{q}*e2", f"e3*R2 - e1*e2^{r}"]


def product_witt(field: FieldModel, q: int, r: int) -> RingPresentation:
    """H(I) of P^q x P^r."""
    _need(q >= 1 and r >= 1, "q and r must be positive")
    gens = [("e1", 1, (1, 0), "I"), ("e2", 1, (0, 1), "I"), ("e3", 1, (1, 1), "I")]
    return _build(f"H(I)(P^{q} x P^{r})", "W", field, gens + _r_gens(q, r),
                  [_QUADRIC_W] + _r_relations(q, r))


def _hr_relations(q: int, r: int) -> list[str]:
    """H_L R_s = H_{L + delta_s} e_s^{dim}, with H_0 = h.

    Both sides are the hyperbolic image of c_s^{dim}; the printed statement
    leaves these out."""
    names = {(1, 0): "H1", (0, 1): "H2", (1, 1): "H3", (0, 0): "h"}
    out = []
    for s, (R, e, d) in enumerate((("R1", "e1", q), ("R2", "e2", r))):
        for L in ((0, 0), (1, 0), (0, 1), (1, 1)):
            M = tuple((x + int(i == s)) % 2 for i, x in enumerate(L))
            out.append(f"{names[L]}*{R} - {names[M]}*{e}^{d}")
    return out


def product_chow_witt(field: FieldModel, q: int, r: int,
                      literal: bool = False) -> RingPresentation:
    """CH~ of P^q x P^r."""
    _need(q >= 1 and r >= 1, "q and r must be positive")
    gens = [("H1", 0, (1, 0), "I"), ("H2", 0, (0, 1), "I"), ("H3", 0, (1, 1), "I"),
            ("e1", 1, (1, 0), "I"), ("e2", 1, (0, 1), "I"), ("e3", 1, (1, 1), "I")]
    rels = [_QUADRIC_CW] + _J + _r_relations(q, r)
    if not literal:
        rels += _hr_relations(q, r)
    return _build(f"CH~(P^{q} x P^{r})", "GW", field, gens + _r_gens(q, r), rels,
                  notes="printed form" if literal else "")


# ---------------------------------------------------------------------------
# BG_m and BG_m x BG_m
# ---------------------------------------------------------------------------

def bgm_chow_witt(field: FieldModel) -> RingPresentation:
    """GW[e, H]/(I e, I H, H^2 - 2h)."""
    return _build("CH~(BGm)", "GW", field,
                  [("H", 0, (1,), "I"), ("e", 1, (1,), "I")], ["H^2 - 2*h"])


def bgm_witt(field: FieldModel) -> RingPresentation:
    return _build("H(I)(BGm)", "W", field, [("e", 1, (1,), "I")], [])


def bgm2_chow_witt(field: FieldModel) -> RingPresentation:
    gens = [("H1", 0, (1, 0), "I"), ("H2", 0, (0, 1), "I"), ("H3", 0, (1, 1), "I"),
            ("e1", 1, (1, 0), "I"), ("e2", 1, (0, 1), "I"), ("e3", 1, (1, 1), "I")]
    return _build("CH~(BGm x BGm)", "GW", field, gens, [_QUADRIC_CW] + _J)


def bgm2_witt(field: FieldModel) -> RingPresentation:
    gens = [("e1", 1, (1, 0), "I"), ("e2", 1, (0, 1), "I"), ("e3", 1, (1, 1), "I")]
    return _build("H(I)(BGm x BGm)", "W", field, gens, [_QUADRIC_W])


def real_points_ring() -> RingPresentation:
    """Z[l, m, v]/(2l, 2m, 2v, v^2 + l^2 m + l m^2): the integral cohomology
    of RP^oo x RP^oo in the degrees it is generated."""
    return _build("H*(RPoo x RPoo; Z)", "Z", FieldModel("R"),
                  [("lam", 2, (), "none"), ("mu", 2, (), "none"), ("nu", 3, (), "none")],
                  ["2*lam", "2*mu", "2*nu", "nu^2 + lam^2*mu + lam*mu^2"])


# ---------------------------------------------------------------------------
# B mu_n
# ---------------------------------------------------------------------------

def bmu_chow_witt(field: FieldModel, n: int, literal: bool = False) -> RingPresentation:
    _need(n >= 1, "n must be positive")
    if n % 2:
        return _build(f"CH~(Bmu_{n})", "GW", field, [("e", 1, (), "I")], [f"{n}*e"])
    gens = [("H", 0, (1,), "I"), ("U", 0, (0,), "h"), ("e", 1, (1,), "I")]
    if literal:
        rels = ["H*U", f"{n}*H*e", "H^2 - 2*h", "U^2 + 2*U", f"U*e - {2 * n}*e"]
        notes = "printed form"
    else:
        rels = ["H*U", f"{n // 2}*H*e", "H^2 - 2*h", "U^2 + 2*U", f"U*e - {n}*e"]
        notes = ""
    return _build(f"CH~(Bmu_{n})", "GW", field, gens, rels, notes=notes)


def bmu_witt(field: FieldModel, n: int) -> RingPresentation:
    if n % 2:
        return _build(f"H(I)(Bmu_{n})", "W", field, [], [])
    return _build(f"H(I)(Bmu_{n})", "W", field,
                  [("U", 0, (0,), "none"), ("e", 1, (1,), "I")], ["U^2 + 2*U", "U*e"])


# ---------------------------------------------------------------------------
# BG_m x B mu_n and B mu_m x B mu_n
# ---------------------------------------------------------------------------

def bgm_bmu_chow_witt(field: FieldModel, n: int) -> RingPresentation:
    _need(n >= 1, "n must be positive")
    if n % 2:
        return _build(f"CH~(BGm x Bmu_{n})", "GW", field,
                      [("H1", 0, (1,), "I"), ("e1", 1, (1,), "I"), ("e2", 1, (0,), "I")],
                      ["H1^2 - 2*h", f"{n}*e2"])
    h = n // 2
    gens = [("H1", 0, (1, 0), "I"), ("H2", 0, (0, 1), "I"), ("H3", 0, (1, 1), "I"),
            ("U2", 0, (0, 0), "h"),
            ("e1", 1, (1, 0), "I"), ("e2", 1, (0, 1), "I"), ("e3", 1, (1, 1), "I")]
    rels = _J + [_QUADRIC_CW, f"{h}*H2*e2", "U2^2 + 2*U2",
                 "H1*U2", "H2*U2", "H3*U2",
                 f"U2*e1 - {h}*H3*e2", f"U2*e2 - {n}*e2", f"U2*e3 - {h}*H1*e2"]
    return _build(f"CH~(BGm x Bmu_{n})", "GW", field, gens, rels)


def bgm_bmu_witt(field: FieldModel, n: int) -> RingPresentation:
    if n % 2:
        return _build(f"H(I)(BGm x Bmu_{n})", "W", field, [("e1", 1, (1,), "I")], [])
    gens = [("U2", 0, (0, 0), "none"),
            ("e1", 1, (1, 0), "I"), ("e2", 1, (0, 1), "I"), ("e3", 1, (1, 1), "I")]
    return _build(f"H(I)(BGm x Bmu_{n})", "W", field, gens,
                  [_QUADRIC_W, "U2^2 + 2*U2", "U2*e1", "U2*e2", "U2*e3"])


def bmu_bmu_chow_witt(field: FieldModel, m: int, n: int,
                      literal: bool = False) -> RingPresentation:
    _need(m >= 1 and n >= 1, "m and n must be positive")
    name = f"CH~(Bmu_{m} x Bmu_{n})"
    if m % 2 and n % 2:
        return _build(name, "GW", field, [("e1", 1, (), "I"), ("e2", 1, (), "I")],
                      [f"{m}*e1", f"{n}*e2"])
    if m % 2:
        gens = [("H2", 0, (1,), "I"), ("U2", 0, (0,), "h"),
                ("e1", 1, (0,), "I"), ("e2", 1, (1,), "I")]
        rels = [f"{m}*e1", f"{n // 2}*H2*e2", "H2^2 - 2*h", "H2*U2", "U2^2 + 2*U2",
                "U2*e1", f"U2*e2 - {n}*e2"]
        return _build(name, "GW", field, gens, rels)
    if n % 2:
        raise UnknownCase("order the factors so that an odd one comes first")
    hm, hn = m // 2, n // 2
    gens = [("H1", 0, (1, 0), "I"), ("H2", 0, (0, 1), "I"), ("H3", 0, (1, 1), "I"),
            ("U1", 0, (0, 0), "h"), ("U2", 0, (0, 0), "h"),
            ("e1", 1, (1, 0), "I"), ("e2", 1, (0, 1), "I"), ("e3", 1, (1, 1), "I")]
    last = f"U2*e3 - {hm if literal else hn}*H1*e2"
    rels = _J + [_QUADRIC_CW, f"{hm}*H1*e1", f"{hn}*H2*e2",
                 "H1*U1", "H2*U1", "H3*U1", "H1*U2", "H2*U2", "H3*U2",
                 "U1^2 + 2*U1", "U2^2 + 2*U2",
                 f"U1*e1 - {m}*e1", f"U1*e2 - {hm}*H3*e1", f"U1*e3 - {hm}*H2*e1",
                 f"U2*e1 - {hn}*H3*e2", f"U2*e2 - {n}*e2", last]
    return _build(name, "GW", field, gens, rels, notes="printed form" if literal else "")


def bmu_bmu_witt(field: FieldModel, m: int, n: int) -> RingPresentation:
    name = f"H(I)(Bmu_{m} x Bmu_{n})"
    if m % 2 and n % 2:
        return _build(name, "W", field, [], [])
    if m % 2:
        return _build(name, "W", field, [("U2", 0, (0,), "none"), ("e2", 1, (1,), "I")],
                      ["U2^2 + 2*U2", "U2*e2"])
    if n % 2:
        raise UnknownCase("order the factors so that an odd one comes first")
    gens = [("U1", 0, (0, 0), "none"), ("U2", 0, (0, 0), "none"),
            ("e1", 1, (1, 0), "I"), ("e2", 1, (0, 1), "I"), ("e3", 1, (1, 1), "I")]
    rels = [_QUADRIC_W, "U1^2 + 2*U1", "U2^2 + 2*U2"]
    rels += [f"U{i}*e{j}" for i in (1, 2) for j in (1, 2, 3)]
    return _build(name, "W", field, gens, rels)


# ---------------------------------------------------------------------------
# Group tables
# ---------------------------------------------------------------------------

def projective_table(r: int, degree: int, twist: int) -> str | None:
    """CH~^i(P^r, O(twist)) as 'GW', 'Z', '2Z' or None (zero).

    '2Z' is an infinite cyclic group whose image in CH^i has index 2."""
    if degree < 0 or degree > r:
        return None
    if twist == 0:
        if degree == 0 or (degree == r and r % 2):
            return "GW"
        return "Z" if degree % 2 == 0 else "2Z"
    if degree == r and r % 2 == 0:
        return "GW"
    return "2Z" if degree % 2 == 0 else "Z"


def bgm_table(degree: int, twist: int) -> str:
    if twist == 0:
        return "GW" if degree == 0 else ("Z" if degree % 2 == 0 else "2Z")
    return "2Z" if degree % 2 == 0 else "Z"


def nondiagonal_witt_rank(q: int, r: int, degree: int, twist: tuple[int, int]) -> int:
    """Number of W(k) summands of H^i(P^q x P^r, I^j, L) for j < i."""
    tw = tuple(t % 2 for t in twist)
    if degree == 0:
        return 1 if tw == (0, 0) else 0
    count = 0
    if q == r and q % 2 and degree == q and tw == (0, 0):
        return 2
    if degree == r and tw == (0, (r - 1) % 2):
        count += 1
    if degree == q and tw == ((q - 1) % 2, 0):
        count += 1
    if degree == q + r and tw == ((q - 1) % 2, (r - 1) % 2):
        count += 1
    return count


# ---------------------------------------------------------------------------
# Lookup
# ---------------------------------------------------------------------------

def closed_form(case: str, field: FieldModel, theory: str = "CW",
                       literal: bool = False, **params: int) -> RingPresentation:
    """Look up a closed-form presentation.

    ``case`` is one of P, PxP, BGm, BGmxBGm, Bmu, BGmxBmu, BmuxBmu, RPxRP;
    ``theory`` is CW, hI, CH or Ch.  Parameters: r (and q), n (and m).
    """
    try:
        if case == "P":
            r = params["r"]
            return {"hI": lambda: projective_witt(field, r),
                    "CH": lambda: projective_chow(field, (r,)),
                    "Ch": lambda: projective_chow_mod2(field, r)}[theory]()
        if case == "PxP":
            q, r = params["q"], params["r"]
            return {"CW": lambda: product_chow_witt(field, q, r, literal),
                    "hI": lambda: product_witt(field, q, r),
                    "CH": lambda: projective_chow(field, (q, r)),
                    "Ch": lambda: product_chow_mod2(field, q, r)}[theory]()
        if case == "BGm":
            return {"CW": lambda: bgm_chow_witt(field), "hI": lambda: bgm_witt(field)}[theory]()
        if case == "BGmxBGm":
            return {"CW": lambda: bgm2_chow_witt(field), "hI": lambda: bgm2_witt(field)}[theory]()
        if case == "Bmu":
            n = params["n"]
            return {"CW": lambda: bmu_chow_witt(field, n, literal),
                    "hI": lambda: bmu_witt(field, n)}[theory]()
        if case == "BGmxBmu":
            n = params["n"]
            return {"CW": lambda: bgm_bmu_chow_witt(field, n),
                    "hI": lambda: bgm_bmu_witt(field, n)}[theory]()
        if case == "BmuxBmu":
            m, n = params["m"], params["n"]
            return {"CW": lambda: bmu_bmu_chow_witt(field, m, n, literal),
                    "hI": lambda: bmu_bmu_witt(field, m, n)}[theory]()
        if case == "RPxRP" and theory == "hI":
            return real_points_ring()
    except KeyError as exc:
        raise UnknownCase(f"no presentation for {case} / {theory} ({exc})") from None
    raise UnknownCase(f"no presentation for {case} / {theory}")


CASES = ("P", "PxP", "BGm", "BGmxBGm", "Bmu", "BGmxBmu", "BmuxBmu", "RPxRP")
