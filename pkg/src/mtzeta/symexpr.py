"""Canonical algebra for rational-linear combinations of products of
transcendental atoms, with one optional symbolic variable z in exponent slots.

Atoms
-----
* ``EvenZeta(n)``: zeta at an even integer n >= 0 (kept symbolic; n = 0 is
  legal and evaluates to -1/2).
* ``TildeZeta(n)``: zeta at n if n is even, 0 if n is odd.  Instances never
  survive normalization: odd kills the term, even rewrites to ``EvenZeta``.
* ``Lerch(e, color)``: sum over m >= 1 of e(color*m)/m^e (periodic zeta).
  With trivial color and an even integer exponent it canonicalizes to
  ``EvenZeta``.
* ``MTValue(exps, colors)``: a Mordell-Tornheim value of depth >= 2; the
  last slot is the total-sum slot.  The first-depth slots are sorted, since
  the underlying series is symmetric under permuting them jointly with
  their colors.  Depth-1 input collapses to ``Lerch``.
* ``MZValue(exps, colors)``: a (colored) multiple zeta value; slots are
  ordered leading-first and never sorted.

Colors are rationals reduced mod 1; color 0 is the trivial phase.
Exponents are affine in z with z-coefficient 0 or 1; a product term may
contain at most one z-bearing atom (constructions that would violate this
signal a bug and are rejected).

``Expr`` is a map from atom multisets to rational coefficients.  The map is
canonical: no zero coefficients, atoms sorted by a fixed total order, so
two expressions are equal iff their maps are equal.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Integral
from typing import Any, Iterable, Iterator, Mapping, Sequence, Union

__all__ = [
    "AffineExp",
    "EvenZeta",
    "TildeZeta",
    "Lerch",
    "MTValue",
    "MZValue",
    "NumLerch",
    "NumMT",
    "NumMZV",
    "Expr",
    "Z",
    "lerch",
    "mt_value",
    "mzv",
    "expr_to_json",
    "expr_from_json",
]


@dataclass(frozen=True)
class AffineExp:
    """Exponent const + z (when has_z) or plain integer const."""

    const: int
    has_z: bool = False

    def __add__(self, other: "AffineExp") -> "AffineExp":
        if self.has_z and other.has_z:
            raise ValueError("exponent would carry 2*z")
        return AffineExp(self.const + other.const, self.has_z or other.has_z)

    def shift(self, c: int) -> "AffineExp":
        return AffineExp(self.const + c, self.has_z)

    def substitute(self, z0: Any) -> Any:
        if not self.has_z:
            return self.const
        return _canon_number(self.const + z0)

    def key(self) -> tuple:
        return (1 if self.has_z else 0, self.const)

    def __str__(self) -> str:
        if self.has_z:
            return f"z+{self.const}" if self.const else "z"
        return str(self.const)


Z = AffineExp(0, True)


def as_exp(v: Union[int, AffineExp]) -> AffineExp:
    if isinstance(v, AffineExp):
        return v
    if isinstance(v, Integral):
        return AffineExp(int(v))
    raise TypeError(f"exponent slot needs an integer or AffineExp, got {v!r}")


def _canon_color(c: Union[int, Fraction]) -> Fraction:
    return Fraction(c) % 1


def _canon_number(v: Any) -> Any:
    """Collapse integral floats/Fractions to int; keep everything else."""
    if isinstance(v, Integral):
        return int(v)
    if isinstance(v, Fraction):
        return int(v) if v.denominator == 1 else v
    if isinstance(v, float):
        return int(v) if v.is_integer() else v
    if isinstance(v, complex):
        if v.imag == 0:
            return _canon_number(v.real)
        return v
    return v


def _number_key(v: Any) -> tuple[float, float]:
    c = complex(v)
    return (c.real, c.imag)


@dataclass(frozen=True)
class EvenZeta:
    n: int

    def __post_init__(self) -> None:
        if self.n < 0 or self.n % 2:
            raise ValueError(f"EvenZeta argument must be even >= 0, got {self.n}")

    def key(self) -> tuple:
        return (0, self.n)

    def __str__(self) -> str:
        return f"zeta({self.n})"


@dataclass(frozen=True)
class TildeZeta:
    """Parity-filtered zeta: zeta(n) for even n, 0 for odd n."""

    n: int

    def key(self) -> tuple:
        return (1, self.n)

    def __str__(self) -> str:
        return f"zeta~({self.n})"


@dataclass(frozen=True)
class Lerch:
    exp: AffineExp
    color: Fraction

    def key(self) -> tuple:
        return (2, self.exp.key(), self.color)

    def __str__(self) -> str:
        return f"phi({self.exp}; {self.color})"


@dataclass(frozen=True)
class MTValue:
    exps: tuple[AffineExp, ...]
    colors: tuple[Fraction, ...]

    def key(self) -> tuple:
        return (
            4,
            len(self.exps),
            tuple(e.key() for e in self.exps),
            self.colors,
        )

    @property
    def depth(self) -> int:
        return len(self.exps) - 1

    def __str__(self) -> str:
        args = ",".join(str(e) for e in self.exps)
        cols = ",".join(str(c) for c in self.colors)
        return f"mt({args}; {cols})"


@dataclass(frozen=True)
class MZValue:
    exps: tuple[AffineExp, ...]
    colors: tuple[Fraction, ...]

    def key(self) -> tuple:
        return (
            3,
            len(self.exps),
            tuple(e.key() for e in self.exps),
            self.colors,
        )

    @property
    def depth(self) -> int:
        return len(self.exps)

    def __str__(self) -> str:
        args = ",".join(str(e) for e in self.exps)
        cols = ",".join(str(c) for c in self.colors)
        return f"mzv({args}; {cols})"


# Numeric atoms produced by z-substitution; exponent slots hold numbers.


@dataclass(frozen=True)
class NumLerch:
    s: Any
    color: Fraction

    def key(self) -> tuple:
        return (5, _number_key(self.s), self.color)


@dataclass(frozen=True)
class NumMT:
    exps: tuple[Any, ...]
    colors: tuple[Fraction, ...]

    def key(self) -> tuple:
        return (7, len(self.exps), tuple(map(_number_key, self.exps)), self.colors)


@dataclass(frozen=True)
class NumMZV:
    exps: tuple[Any, ...]
    colors: tuple[Fraction, ...]

    def key(self) -> tuple:
        return (6, len(self.exps), tuple(map(_number_key, self.exps)), self.colors)


Atom = Union[EvenZeta, TildeZeta, Lerch, MTValue, MZValue, NumLerch, NumMT, NumMZV]


def atom_has_z(a: Atom) -> bool:
    if isinstance(a, Lerch):
        return a.exp.has_z
    if isinstance(a, (MTValue, MZValue)):
        return any(e.has_z for e in a.exps)
    return False


def lerch(exp: Union[int, AffineExp], color: Union[int, Fraction]) -> Atom:
    """Lerch atom; trivial-color even-integer exponents canonicalize."""
    e = as_exp(exp)
    c = _canon_color(color)
    if c == 0 and not e.has_z and e.const % 2 == 0:
        return EvenZeta(e.const)
    return Lerch(e, c)


def mt_value(
    exps: Sequence[Union[int, AffineExp]], colors: Sequence[Union[int, Fraction]]
) -> Atom:
    """MT atom with slot canonicalization; depth 1 collapses to Lerch."""
    es = tuple(as_exp(e) for e in exps)
    cs = tuple(_canon_color(c) for c in colors)
    if len(es) != len(cs):
        raise ValueError("exponent/color length mismatch")
    if len(es) < 2:
        raise ValueError("an MT value needs at least two slots")
    if sum(e.has_z for e in es) > 1:
        raise ValueError("at most one slot may carry z")
    if len(es) == 2:
        return lerch(es[0] + es[1], cs[0] + cs[1])
    head = sorted(zip(es[:-1], cs[:-1]), key=lambda p: (p[0].key(), p[1]))
    es = tuple(e for e, _ in head) + (es[-1],)
    cs = tuple(c for _, c in head) + (cs[-1],)
    return MTValue(es, cs)


def mzv(
    exps: Sequence[Union[int, AffineExp]], colors: Sequence[Union[int, Fraction]]
) -> Atom:
    """Colored MZV atom; depth 1 collapses to Lerch."""
    es = tuple(as_exp(e) for e in exps)
    cs = tuple(_canon_color(c) for c in colors)
    if len(es) != len(cs):
        raise ValueError("exponent/color length mismatch")
    if len(es) == 0:
        raise ValueError("empty MZV")
    if sum(e.has_z for e in es) > 1:
        raise ValueError("at most one slot may carry z")
    if len(es) == 1:
        return lerch(es[0], cs[0])
    return MZValue(es, cs)


def _normalize_atom(a: Atom) -> Union[Atom, None]:
    """Atom-level rewrite; None means the whole term vanishes."""
    if isinstance(a, TildeZeta):
        if a.n % 2:
            return None
        return EvenZeta(a.n)
    if isinstance(a, Lerch):
        return lerch(a.exp, a.color)
    return a


TermKey = tuple  # sorted tuple of atoms


class Expr:
    """Canonical rational-linear combination of products of atoms."""

    __slots__ = ("terms",)

    def __init__(self, raw: Mapping[TermKey, Fraction] | None = None):
        terms: dict[TermKey, Fraction] = {}
        if raw:
            for atoms, coeff in raw.items():
                coeff = Fraction(coeff)
                if not coeff:
                    continue
                norm: list[Atom] = []
                dead = False
                for a in atoms:
                    na = _normalize_atom(a)
                    if na is None:
                        dead = True
                        break
                    norm.append(na)
                if dead:
                    continue
                if sum(atom_has_z(a) for a in norm) > 1:
                    raise ValueError("term with two z-bearing atoms")
                key = tuple(sorted(norm, key=lambda a: a.key()))
                acc = terms.get(key, Fraction(0)) + coeff
                if acc:
                    terms[key] = acc
                else:
                    terms.pop(key, None)
        object.__setattr__(self, "terms", terms)

    # -- constructors -------------------------------------------------

    @staticmethod
    def zero() -> "Expr":
        return Expr()

    @staticmethod
    def constant(c: Union[int, Fraction]) -> "Expr":
        return Expr({(): Fraction(c)})

    @staticmethod
    def term(coeff: Union[int, Fraction], atoms: Iterable[Atom] = ()) -> "Expr":
        return Expr({tuple(atoms): Fraction(coeff)})

    @staticmethod
    def atom(a: Atom) -> "Expr":
        return Expr({(a,): Fraction(1)})

    # -- ring operations ----------------------------------------------

    def __add__(self, other: "Expr") -> "Expr":
        raw = dict(self.terms)
        for k, c in other.terms.items():
            raw[k] = raw.get(k, Fraction(0)) + c
        return Expr(raw)

    def __sub__(self, other: "Expr") -> "Expr":
        return self + other.scale(-1)

    def __neg__(self) -> "Expr":
        return self.scale(-1)

    def scale(self, c: Union[int, Fraction]) -> "Expr":
        c = Fraction(c)
        if not c:
            return Expr()
        return Expr({k: v * c for k, v in self.terms.items()})

    def __mul__(self, other: "Expr") -> "Expr":
        raw: dict[TermKey, Fraction] = {}
        for ka, ca in self.terms.items():
            for kb, cb in other.terms.items():
                key = ka + kb
                raw[key] = raw.get(key, Fraction(0)) + ca * cb
        return Expr(raw)

    # -- inspection ----------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Expr):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def items(self) -> Iterator[tuple[TermKey, Fraction]]:
        return iter(sorted(self.terms.items(), key=lambda kv: _term_sort_key(kv[0])))

    def atoms(self) -> Iterator[Atom]:
        for k in self.terms:
            yield from k

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        bits = []
        for atoms, c in self.items():
            prod = "*".join(str(a) for a in atoms) or "1"
            bits.append(f"({c})*{prod}")
        return " + ".join(bits)

    __repr__ = __str__

    # -- substitution ---------------------------------------------------

    def substitute(self, z0: Any) -> "Expr":
        """Replace z by a number everywhere; atoms re-tag where exponents
        become plain integers.  Requires Re(z0) >= 1 (evaluation domain)."""
        if complex(z0).real < 1:
            raise ValueError(f"substitution requires Re(z) >= 1, got {z0!r}")
        raw: dict[TermKey, Fraction] = {}
        for atoms, c in self.terms.items():
            new = tuple(_substitute_atom(a, z0) for a in atoms)
            key = tuple(sorted(new, key=lambda a: a.key()))
            raw[key] = raw.get(key, Fraction(0)) + c
        return Expr(raw)


def _substitute_atom(a: Atom, z0: Any) -> Atom:
    if isinstance(a, Lerch):
        s = a.exp.substitute(z0)
        if a.color == 0 and isinstance(s, int) and s >= 0 and s % 2 == 0:
            return EvenZeta(s)
        return NumLerch(s, a.color)
    if isinstance(a, MTValue):
        return NumMT(tuple(e.substitute(z0) for e in a.exps), a.colors)
    if isinstance(a, MZValue):
        return NumMZV(tuple(e.substitute(z0) for e in a.exps), a.colors)
    return a


def _term_sort_key(atoms: TermKey) -> tuple:
    return tuple(a.key() for a in atoms)


# -- JSON schema ------------------------------------------------------------
# Expr: [{"coeff": "p/q", "atoms": [atom, ...]}, ...] in canonical order.


def _frac_str(c: Fraction) -> str:
    return f"{c.numerator}/{c.denominator}" if c.denominator != 1 else str(c.numerator)


def _exp_json(e: AffineExp) -> Any:
    return {"const": e.const, "z": True} if e.has_z else e.const


def _exp_from_json(v: Any) -> AffineExp:
    if isinstance(v, dict):
        return AffineExp(int(v["const"]), bool(v.get("z")))
    return AffineExp(int(v))


def atom_to_json(a: Atom) -> dict:
    if isinstance(a, EvenZeta):
        return {"type": "even_zeta", "n": a.n}
    if isinstance(a, Lerch):
        return {"type": "lerch", "exp": _exp_json(a.exp), "color": _frac_str(a.color)}
    if isinstance(a, MTValue):
        return {
            "type": "mt",
            "exps": [_exp_json(e) for e in a.exps],
            "colors": [_frac_str(c) for c in a.colors],
        }
    if isinstance(a, MZValue):
        return {
            "type": "mzv",
            "exps": [_exp_json(e) for e in a.exps],
            "colors": [_frac_str(c) for c in a.colors],
        }
    raise TypeError(f"cannot serialize {a!r}")


def atom_from_json(d: dict) -> Atom:
    t = d["type"]
    if t == "even_zeta":
        return EvenZeta(int(d["n"]))
    if t == "lerch":
        return lerch(_exp_from_json(d["exp"]), Fraction(d["color"]))
    if t == "mt":
        return mt_value(
            [_exp_from_json(e) for e in d["exps"]],
            [Fraction(c) for c in d["colors"]],
        )
    if t == "mzv":
        return mzv(
            [_exp_from_json(e) for e in d["exps"]],
            [Fraction(c) for c in d["colors"]],
        )
    raise ValueError(f"unknown atom type {t!r}")


def expr_to_json(e: Expr) -> list[dict]:
    return [
        {"coeff": _frac_str(c), "atoms": [atom_to_json(a) for a in atoms]}
        for atoms, c in e.items()
    ]


def expr_from_json(data: Iterable[dict]) -> Expr:
    raw: dict[TermKey, Fraction] = {}
    for entry in data:
        atoms = tuple(atom_from_json(a) for a in entry["atoms"])
        raw[atoms] = raw.get(atoms, Fraction(0)) + Fraction(entry["coeff"])
    return Expr(raw)
