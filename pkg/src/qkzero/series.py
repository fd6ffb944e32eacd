"""Exact truncated multivariate power series and series-valued matrices.

Every series in this package lives over three variable groups:

* deformation coordinates ``t0 .. t{r}``,
* Novikov variables ``Q0 .. Q{s-1}`` recording curve degrees,
* a single auxiliary variable ``q`` for descendent expansions.

Truncation is tracked per group by total degree within the group, so a
series "knows" which coefficients it certifies.  Coefficients are
``fractions.Fraction``; an absent exponent is an exact zero.  All values
are exact rationals, never floats, and exponents are never negative.

Series objects are immutable: every operation returns a fresh object.
Arithmetic requires both operands to carry the same variable layout and
the same truncation orders; lowering a truncation is always an explicit
``truncated`` call, never an implicit coercion.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import (
    IncompatibleSeries,
    NotInvertible,
    SchemaError,
    SingularMetric,
    UnknownVariable,
)

Exponent = tuple[int, ...]

RationalLike = Fraction | int


def format_rational(x: Fraction) -> str:
    """Serialize a rational as "p/q" with q > 0, lowest terms."""
    return f"{x.numerator}/{x.denominator}"


_RATIONAL_RE = re.compile(r"^-?\d+(/\d+)?$")


def parse_rational(text: str) -> Fraction:
    """Parse "p/q" or plain integer strings; reject anything else."""
    if not isinstance(text, str) or not _RATIONAL_RE.match(text):
        raise SchemaError(f"rational values must look like p/q, got {text!r}")
    try:
        return Fraction(text)
    except ZeroDivisionError as exc:
        raise SchemaError(f"zero denominator in {text!r}") from exc


@dataclass(frozen=True)
class SeriesSpec:
    """Variable layout and per-group truncation orders.

    Variables are canonically named ``t0..t{num_t-1}``, ``Q0..Q{num_novikov-1}``
    and ``q``; exponent tuples list them in that order, ``q`` last.  An order
    may drop below zero after repeated differentiation, in which case no
    coefficient in that group is certified and the series stores no terms.
    """

    num_t: int
    num_novikov: int
    t_order: int
    novikov_order: int
    q_order: int

    def __post_init__(self) -> None:
        if self.num_t < 0 or self.num_novikov < 0:
            raise ValueError("variable counts must be non-negative")

    @property
    def t_vars(self) -> tuple[str, ...]:
        return tuple(f"t{i}" for i in range(self.num_t))

    @property
    def novikov_vars(self) -> tuple[str, ...]:
        return tuple(f"Q{i}" for i in range(self.num_novikov))

    @property
    def vars(self) -> tuple[str, ...]:
        return self.t_vars + self.novikov_vars + ("q",)

    @property
    def nvars(self) -> int:
        return self.num_t + self.num_novikov + 1

    def degrees(self, exp: Exponent) -> tuple[int, int, int]:
        td = sum(exp[: self.num_t])
        nd = sum(exp[self.num_t : self.num_t + self.num_novikov])
        return td, nd, exp[-1]

    def admits(self, exp: Exponent) -> bool:
        td, nd, qd = self.degrees(exp)
        return td <= self.t_order and nd <= self.novikov_order and qd <= self.q_order

    def var_position(self, name: str) -> int:
        if name == "q":
            return self.nvars - 1
        group, idx = name[:1], name[1:]
        if idx.isdigit():
            i = int(idx)
            if group == "t" and i < self.num_t:
                return i
            if group == "Q" and i < self.num_novikov:
                return self.num_t + i
        raise UnknownVariable(f"{name!r} not among {self.vars}")

    def group_of(self, name: str) -> str:
        pos = self.var_position(name)
        if pos < self.num_t:
            return "t"
        if pos < self.num_t + self.num_novikov:
            return "novikov"
        return "q"

    def after_derivative(self, name: str) -> "SeriesSpec":
        group = self.group_of(name)
        return SeriesSpec(
            self.num_t,
            self.num_novikov,
            self.t_order - (group == "t"),
            self.novikov_order - (group == "novikov"),
            self.q_order - (group == "q"),
        )

    def truncated(self, t_order: int | None = None, novikov_order: int | None = None,
                  q_order: int | None = None) -> "SeriesSpec":
        new = SeriesSpec(
            self.num_t,
            self.num_novikov,
            self.t_order if t_order is None else t_order,
            self.novikov_order if novikov_order is None else novikov_order,
            self.q_order if q_order is None else q_order,
        )
        if (new.t_order > self.t_order or new.novikov_order > self.novikov_order
                or new.q_order > self.q_order):
            raise IncompatibleSeries("truncation can only lower orders")
        return new

    def budget(self) -> int:
        """Largest total degree any stored monomial can have."""
        return max(self.t_order, 0) + max(self.novikov_order, 0) + max(self.q_order, 0)


def _as_fraction(value: RationalLike) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError(f"coefficients must be exact rationals, got {type(value).__name__}")


@dataclass(frozen=True)
class TruncatedSeries:
    """A sparse exact power series truncated per variable group."""

    spec: SeriesSpec
    coeffs: Mapping[Exponent, Fraction]

    def __post_init__(self) -> None:
        clean: dict[Exponent, Fraction] = {}
        for exp, value in self.coeffs.items():
            exp = tuple(exp)
            if len(exp) != self.spec.nvars:
                raise ValueError(f"exponent {exp} has wrong length for {self.spec.vars}")
            if any(e < 0 for e in exp):
                raise ValueError(f"negative exponent in {exp}")
            if not self.spec.admits(exp):
                continue
            v = _as_fraction(value)
            if v != 0:
                clean[exp] = v
        object.__setattr__(self, "coeffs", clean)

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, spec: SeriesSpec) -> "TruncatedSeries":
        return cls(spec, {})

    @classmethod
    def constant(cls, spec: SeriesSpec, value: RationalLike) -> "TruncatedSeries":
        return cls(spec, {(0,) * spec.nvars: _as_fraction(value)})

    @classmethod
    def one(cls, spec: SeriesSpec) -> "TruncatedSeries":
        return cls.constant(spec, 1)

    @classmethod
    def monomial(cls, spec: SeriesSpec, powers: Mapping[str, int],
                 value: RationalLike = 1) -> "TruncatedSeries":
        exp = [0] * spec.nvars
        for name, p in powers.items():
            exp[spec.var_position(name)] += p
        return cls(spec, {tuple(exp): _as_fraction(value)})

    @classmethod
    def geometric_q(cls, spec: SeriesSpec) -> "TruncatedSeries":
        """The truncation of 1/(1-q): sum of q^m for m up to the q order."""
        qpos = spec.nvars - 1
        terms: dict[Exponent, Fraction] = {}
        for m in range(spec.q_order + 1):
            exp = [0] * spec.nvars
            exp[qpos] = m
            terms[tuple(exp)] = Fraction(1)
        return cls(spec, terms)

    # -- inspection --------------------------------------------------------

    def coefficient(self, powers: Mapping[str, int]) -> Fraction:
        exp = [0] * self.spec.nvars
        for name, p in powers.items():
            exp[self.spec.var_position(name)] += p
        return self.coeffs.get(tuple(exp), Fraction(0))

    @property
    def constant_term(self) -> Fraction:
        return self.coeffs.get((0,) * self.spec.nvars, Fraction(0))

    def is_zero(self) -> bool:
        return not self.coeffs

    def max_abs_coefficient(self) -> tuple[Fraction, Exponent | None]:
        """Largest absolute coefficient and its exponent; ties go to the
        lexicographically smallest exponent so reports are deterministic."""
        best: Fraction = Fraction(0)
        where: Exponent | None = None
        for exp in sorted(self.coeffs):
            v = abs(self.coeffs[exp])
            if v > best:
                best, where = v, exp
        return best, where

    def monomial_dict(self, exp: Exponent) -> dict[str, int]:
        names = self.spec.vars
        return {names[i]: e for i, e in enumerate(exp) if e}

    # -- arithmetic --------------------------------------------------------

    def _require_same_spec(self, other: "TruncatedSeries") -> None:
        if self.spec != other.spec:
            raise IncompatibleSeries(f"{self.spec} vs {other.spec}")

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        self._require_same_spec(other)
        out = dict(self.coeffs)
        for exp, v in other.coeffs.items():
            out[exp] = out.get(exp, Fraction(0)) + v
        return TruncatedSeries(self.spec, out)

    def __neg__(self) -> "TruncatedSeries":
        return TruncatedSeries(self.spec, {e: -v for e, v in self.coeffs.items()})

    def __sub__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        return self + (-other)

    def __mul__(self, other: "TruncatedSeries | RationalLike") -> "TruncatedSeries":
        if isinstance(other, (Fraction, int)):
            return self.scaled(other)
        self._require_same_spec(other)
        spec = self.spec
        out: dict[Exponent, Fraction] = {}
        for ea, va in self.coeffs.items():
            for eb, vb in other.coeffs.items():
                exp = tuple(x + y for x, y in zip(ea, eb))
                if not spec.admits(exp):
                    continue
                out[exp] = out.get(exp, Fraction(0)) + va * vb
        return TruncatedSeries(spec, out)

    def __rmul__(self, other: RationalLike) -> "TruncatedSeries":
        return self.scaled(other)

    def scaled(self, value: RationalLike) -> "TruncatedSeries":
        f = _as_fraction(value)
        return TruncatedSeries(self.spec, {e: f * v for e, v in self.coeffs.items()})

    def derivative(self, name: str) -> "TruncatedSeries":
        """Formal partial derivative.  The truncation order of the variable's
        group drops by one: differentiating discards exactly one layer of
        certified coefficients."""
        pos = self.spec.var_position(name)
        spec = self.spec.after_derivative(name)
        out: dict[Exponent, Fraction] = {}
        for exp, v in self.coeffs.items():
            k = exp[pos]
            if k == 0:
                continue
            new = exp[:pos] + (k - 1,) + exp[pos + 1 :]
            out[new] = out.get(new, Fraction(0)) + k * v
        return TruncatedSeries(spec, out)

    def truncated(self, t_order: int | None = None, novikov_order: int | None = None,
                  q_order: int | None = None) -> "TruncatedSeries":
        spec = self.spec.truncated(t_order, novikov_order, q_order)
        return TruncatedSeries(spec, dict(self.coeffs))

    def reciprocal(self) -> "TruncatedSeries":
        """Multiplicative inverse, defined when the constant term is nonzero.

        With a = c(1 + f) and f having no constant term, 1/a is the geometric
        series (1/c) * sum of (-f)^k; f^k dies once k exceeds the total degree
        budget, so the loop terminates.
        """
        c = self.constant_term
        if c == 0:
            raise NotInvertible("constant term vanishes")
        if min(self.spec.t_order, self.spec.novikov_order, self.spec.q_order) < 0:
            raise NotInvertible("series certifies no coefficients in some group")
        inv_c = Fraction(1) / c
        f = self.scaled(inv_c) - TruncatedSeries.one(self.spec)
        acc = TruncatedSeries.one(self.spec)
        power = TruncatedSeries.one(self.spec)
        sign = 1
        for _ in range(self.spec.budget()):
            power = power * f
            if power.is_zero():
                break
            sign = -sign
            acc = acc + power.scaled(sign)
        return acc.scaled(inv_c)

    # -- serialization -----------------------------------------------------

    def to_json_dict(self) -> dict:
        terms = [
            {"exp": list(exp), "value": format_rational(self.coeffs[exp])}
            for exp in sorted(self.coeffs)
        ]
        return {
            "vars": {
                "t": list(self.spec.t_vars),
                "Q": list(self.spec.novikov_vars),
                "q": ["q"],
            },
            "trunc": {
                "t": self.spec.t_order,
                "Q": self.spec.novikov_order,
                "q": self.spec.q_order,
            },
            "terms": terms,
        }

    @classmethod
    def from_json_dict(cls, doc: object) -> "TruncatedSeries":
        if not isinstance(doc, dict):
            raise SchemaError("series document must be an object")
        try:
            vars_doc = doc["vars"]
            trunc = doc["trunc"]
            terms = doc["terms"]
        except (KeyError, TypeError) as exc:
            raise SchemaError(f"series document missing field: {exc}") from exc
        if not isinstance(vars_doc, dict) or set(vars_doc) != {"t", "Q", "q"}:
            raise SchemaError("vars must list the groups t, Q, q")
        t_vars, nov_vars = list(vars_doc["t"]), list(vars_doc["Q"])
        spec = SeriesSpec(len(t_vars), len(nov_vars),
                          int(trunc["t"]), int(trunc["Q"]), int(trunc["q"]))
        if t_vars != list(spec.t_vars) or nov_vars != list(spec.novikov_vars) \
                or list(vars_doc["q"]) != ["q"]:
            raise SchemaError("variables must be canonically named t0.., Q0.., q")
        coeffs: dict[Exponent, Fraction] = {}
        if not isinstance(terms, list):
            raise SchemaError("terms must be a list")
        for item in terms:
            if not isinstance(item, dict) or set(item) != {"exp", "value"}:
                raise SchemaError(f"malformed term: {item!r}")
            exp = tuple(int(e) for e in item["exp"])
            if len(exp) != spec.nvars or any(e < 0 for e in exp):
                raise SchemaError(f"bad exponent {item['exp']!r}")
            if not spec.admits(exp):
                raise SchemaError(f"exponent {item['exp']!r} exceeds stated truncation")
            if exp in coeffs:
                raise SchemaError(f"duplicate exponent {item['exp']!r}")
            coeffs[exp] = parse_rational(item["value"])
        return cls(spec, coeffs)


# -- exact linear algebra over the rationals -------------------------------


def try_rational_inverse(rows: Iterable[Iterable[RationalLike]]) -> list[list[Fraction]] | None:
    """Gauss-Jordan inverse of a rational matrix; None when singular."""
    a = [[_as_fraction(x) for x in row] for row in rows]
    n = len(a)
    if any(len(row) != n for row in a):
        raise ValueError("matrix must be square")
    aug = [row + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(a)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if pivot is None:
            return None
        aug[col], aug[pivot] = aug[pivot], aug[col]
        scale = aug[col][col]
        aug[col] = [x / scale for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                factor = aug[r][col]
                aug[r] = [x - factor * y for x, y in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


@dataclass(frozen=True)
class SeriesMatrix:
    """A square matrix whose entries share one variable layout and truncation."""

    entries: tuple[tuple[TruncatedSeries, ...], ...]

    def __post_init__(self) -> None:
        rows = tuple(tuple(row) for row in self.entries)
        object.__setattr__(self, "entries", rows)
        n = len(rows)
        if n == 0 or any(len(row) != n for row in rows):
            raise ValueError("matrix must be square and non-empty")
        spec = rows[0][0].spec
        for row in rows:
            for entry in row:
                if entry.spec != spec:
                    raise IncompatibleSeries("matrix entries disagree on spec")

    @property
    def dimension(self) -> int:
        return len(self.entries)

    @property
    def spec(self) -> SeriesSpec:
        return self.entries[0][0].spec

    @classmethod
    def identity(cls, spec: SeriesSpec, dim: int) -> "SeriesMatrix":
        return cls(tuple(
            tuple(TruncatedSeries.constant(spec, int(i == j)) for j in range(dim))
            for i in range(dim)
        ))

    @classmethod
    def zero(cls, spec: SeriesSpec, dim: int) -> "SeriesMatrix":
        z = TruncatedSeries.zero(spec)
        return cls(tuple(tuple(z for _ in range(dim)) for _ in range(dim)))

    @classmethod
    def from_rational_matrix(cls, spec: SeriesSpec,
                             rows: Iterable[Iterable[RationalLike]]) -> "SeriesMatrix":
        return cls(tuple(
            tuple(TruncatedSeries.constant(spec, x) for x in row) for row in rows
        ))

    def __add__(self, other: "SeriesMatrix") -> "SeriesMatrix":
        self._check(other)
        return SeriesMatrix(tuple(
            tuple(a + b for a, b in zip(ra, rb))
            for ra, rb in zip(self.entries, other.entries)
        ))

    def __sub__(self, other: "SeriesMatrix") -> "SeriesMatrix":
        self._check(other)
        return SeriesMatrix(tuple(
            tuple(a - b for a, b in zip(ra, rb))
            for ra, rb in zip(self.entries, other.entries)
        ))

    def __mul__(self, other: "SeriesMatrix") -> "SeriesMatrix":
        self._check(other)
        n = self.dimension
        zero = TruncatedSeries.zero(self.spec)
        rows = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = zero
                for k in range(n):
                    acc = acc + self.entries[i][k] * other.entries[k][j]
                row.append(acc)
            rows.append(tuple(row))
        return SeriesMatrix(tuple(rows))

    def _check(self, other: "SeriesMatrix") -> None:
        if self.dimension != other.dimension:
            raise IncompatibleSeries("matrix dimensions differ")
        if self.spec != other.spec:
            raise IncompatibleSeries("matrix specs differ")

    def scaled(self, series: TruncatedSeries) -> "SeriesMatrix":
        return SeriesMatrix(tuple(
            tuple(series * entry for entry in row) for row in self.entries
        ))

    def transpose(self) -> "SeriesMatrix":
        n = self.dimension
        return SeriesMatrix(tuple(
            tuple(self.entries[j][i] for j in range(n)) for i in range(n)
        ))

    def derivative(self, name: str) -> "SeriesMatrix":
        return SeriesMatrix(tuple(
            tuple(entry.derivative(name) for entry in row) for row in self.entries
        ))

    def truncated(self, t_order: int | None = None, novikov_order: int | None = None,
                  q_order: int | None = None) -> "SeriesMatrix":
        return SeriesMatrix(tuple(
            tuple(entry.truncated(t_order, novikov_order, q_order) for entry in row)
            for row in self.entries
        ))

    def constant_matrix(self) -> tuple[tuple[Fraction, ...], ...]:
        return tuple(tuple(entry.constant_term for entry in row) for row in self.entries)

    def is_zero(self) -> bool:
        return all(entry.is_zero() for row in self.entries for entry in row)

    def max_abs_coefficient(self) -> tuple[Fraction, tuple[int, int, Exponent] | None]:
        best: Fraction = Fraction(0)
        where: tuple[int, int, Exponent] | None = None
        for i, row in enumerate(self.entries):
            for j, entry in enumerate(row):
                v, exp = entry.max_abs_coefficient()
                if exp is not None and v > best:
                    best, where = v, (i, j, exp)
        return best, where


def matrix_inverse_geometric(mat: SeriesMatrix) -> SeriesMatrix:
    """Invert G = g + F (g the constant term, F without constant term) by the
    geometric series g^-1 - g^-1 F g^-1 + g^-1 F g^-1 F g^-1 - ...

    Each extra factor of F raises the minimal total degree, so the series
    terminates within the truncation budget.  Raises SingularMetric when the
    constant term g is not invertible.
    """
    g = mat.constant_matrix()
    g_inv = try_rational_inverse(g)
    if g_inv is None:
        raise SingularMetric("constant term of the matrix is singular")
    spec = mat.spec
    g_inv_m = SeriesMatrix.from_rational_matrix(spec, g_inv)
    f = mat - SeriesMatrix.from_rational_matrix(spec, g)
    minus_step = (g_inv_m * f).scaled(TruncatedSeries.constant(spec, -1))
    acc = g_inv_m
    term = g_inv_m
    for _ in range(spec.budget()):
        term = minus_step * term
        if term.is_zero():
            break
        acc = acc + term
    return acc


def matrix_inverse_direct(mat: SeriesMatrix) -> SeriesMatrix:
    """Invert a series matrix by Gauss-Jordan elimination over the series ring,
    pivoting on entries whose constant term is nonzero."""
    n = mat.dimension
    spec = mat.spec
    left = [list(row) for row in mat.entries]
    right = [list(row) for row in SeriesMatrix.identity(spec, n).entries]
    for col in range(n):
        pivot = next(
            (r for r in range(col, n) if left[r][col].constant_term != 0), None)
        if pivot is None:
            raise SingularMetric("no invertible pivot; constant term is singular")
        left[col], left[pivot] = left[pivot], left[col]
        right[col], right[pivot] = right[pivot], right[col]
        inv = left[col][col].reciprocal()
        left[col] = [inv * x for x in left[col]]
        right[col] = [inv * x for x in right[col]]
        for r in range(n):
            if r == col:
                continue
            factor = left[r][col]
            if factor.is_zero():
                continue
            left[r] = [x - factor * y for x, y in zip(left[r], left[col])]
            right[r] = [x - factor * y for x, y in zip(right[r], right[col])]
    return SeriesMatrix(tuple(tuple(row) for row in right))
