"""Tables of genus-zero correlator values, keyed by curve degree and insertions.

A table stores exact values for

    < u_1, ..., u_n >_{0,n,beta}           (plain entries)
    < u_1, ..., u_n, tau_d(e_j) >_{0,n+1,beta}   (entries with one marked
                                                  descendent insertion)

with u_i basis classes recorded as a sorted index multiset, so invariance
under permuting insertions holds by construction.  A missing key means the
value is unknown, never that it is zero.

Degree-zero correlators need no table: with no curve to correct for, the
virtual sheaf is trivial and the invariant collapses to the Euler
characteristic of the product of the insertions on the target, provided at
least three points keep the moduli space non-empty.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Iterable, Iterator

from .descendents import descendent_euler
from .errors import (
    DuplicateEntry,
    IneffectiveDegree,
    ModuliNonexistent,
    SchemaError,
)
from .kring import KRingPresentation, point_kring, projective_space_kring
from .series import format_rational, parse_rational

DegreeVector = tuple[int, ...]
PlainKey = tuple[DegreeVector, tuple[int, ...]]
MarkedKey = tuple[DegreeVector, tuple[int, ...], tuple[int, int]]


def validate_degree(beta: Iterable[int], degree_rank: int) -> DegreeVector:
    vec = tuple(int(b) for b in beta)
    if len(vec) != degree_rank:
        raise SchemaError(f"degree vector {list(vec)} has length != {degree_rank}")
    if any(b < 0 for b in vec):
        raise IneffectiveDegree(f"degree vector {list(vec)} has a negative component")
    return vec


def effective_degrees(degree_rank: int, bound: int) -> Iterator[DegreeVector]:
    """All componentwise non-negative vectors of total degree <= bound,
    in ascending total degree then lexicographic order."""
    def rec(slots: int, budget: int) -> Iterator[tuple[int, ...]]:
        if slots == 0:
            yield ()
            return
        for head in range(budget + 1):
            for tail in rec(slots - 1, budget - head):
                yield (head,) + tail

    for total in range(bound + 1):
        for vec in sorted(v for v in rec(degree_rank, total) if sum(v) == total):
            yield vec


def beta_zero_correlator(ring: KRingPresentation, insertions: Iterable[int]) -> Fraction:
    """chi of the product of basis insertions; needs n >= 3 marked points."""
    idx = tuple(int(i) for i in insertions)
    if len(idx) < 3:
        raise ModuliNonexistent(
            f"{len(idx)} insertions at degree zero: no stable curve exists")
    acc = ring.unit()
    for i in idx:
        acc = acc * ring.basis_class(i)
    return acc.chi()


@dataclass(frozen=True)
class CorrelatorTable:
    ring: KRingPresentation
    degree_rank: int
    target_doc: dict
    entries: dict[PlainKey, Fraction]
    descendent_entries: dict[MarkedKey, Fraction]

    @classmethod
    def empty(cls, ring: KRingPresentation, degree_rank: int,
              target_doc: dict) -> "CorrelatorTable":
        return cls(ring, degree_rank, dict(target_doc), {}, {})

    def value(self, beta: DegreeVector, insertions: tuple[int, ...]) -> Fraction | None:
        return self.entries.get((beta, tuple(sorted(insertions))))

    def descendent_value(self, beta: DegreeVector, insertions: tuple[int, ...],
                         marked: tuple[int, int]) -> Fraction | None:
        return self.descendent_entries.get((beta, tuple(sorted(insertions)), marked))

    def with_entry(self, beta: DegreeVector, insertions: tuple[int, ...],
                   value: Fraction) -> "CorrelatorTable":
        entries = dict(self.entries)
        entries[(beta, tuple(sorted(insertions)))] = Fraction(value)
        return replace(self, entries=entries)

    def with_descendent_entry(self, beta: DegreeVector, insertions: tuple[int, ...],
                              marked: tuple[int, int], value: Fraction) -> "CorrelatorTable":
        dentries = dict(self.descendent_entries)
        dentries[(beta, tuple(sorted(insertions)), marked)] = Fraction(value)
        return replace(self, descendent_entries=dentries)

    def to_json_dict(self) -> dict:
        plain = [
            {"beta": list(beta), "insertions": list(ins),
             "value": format_rational(self.entries[(beta, ins)])}
            for beta, ins in sorted(self.entries)
        ]
        marked = [
            {"beta": list(beta), "insertions": list(ins),
             "marked": {"class": cls_idx, "power": power},
             "value": format_rational(self.descendent_entries[(beta, ins, (cls_idx, power))])}
            for beta, ins, (cls_idx, power) in sorted(self.descendent_entries)
        ]
        return {
            "target": self.target_doc,
            "degree_rank": self.degree_rank,
            "correlators": plain,
            "descendent_correlators": marked,
        }


def ring_from_target(target_doc: object) -> KRingPresentation:
    if not isinstance(target_doc, dict) or "type" not in target_doc:
        raise SchemaError("target must be an object with a 'type' field")
    kind = target_doc["type"]
    if kind == "point":
        return point_kring()
    if kind == "projective":
        if "n" not in target_doc or not isinstance(target_doc["n"], int):
            raise SchemaError("projective target needs an integer field 'n'")
        return projective_space_kring(target_doc["n"])
    if kind == "custom":
        if "ring" not in target_doc:
            raise SchemaError("custom target needs an embedded 'ring' presentation")
        return KRingPresentation.from_json_dict(target_doc["ring"])
    raise SchemaError(f"unknown target type {kind!r}")


def _parse_insertions(raw: object, rank: int) -> tuple[int, ...]:
    if not isinstance(raw, list) or not all(isinstance(i, int) for i in raw):
        raise SchemaError(f"insertions must be a list of integers, got {raw!r}")
    if any(i < 0 or i >= rank for i in raw):
        raise SchemaError(f"insertion index out of range 0..{rank - 1}: {raw!r}")
    return tuple(sorted(raw))


def load_correlators(doc: object) -> CorrelatorTable:
    if not isinstance(doc, dict):
        raise SchemaError("correlator document must be an object")
    missing = {"target", "degree_rank", "correlators", "descendent_correlators"} - set(doc)
    if missing:
        raise SchemaError(f"correlator document missing fields: {sorted(missing)}")
    ring = ring_from_target(doc["target"])
    degree_rank = doc["degree_rank"]
    if not isinstance(degree_rank, int) or degree_rank < 0:
        raise SchemaError("degree_rank must be a non-negative integer")

    entries: dict[PlainKey, Fraction] = {}
    for item in doc["correlators"]:
        if not isinstance(item, dict) or set(item) != {"beta", "insertions", "value"}:
            raise SchemaError(f"malformed correlator entry: {item!r}")
        beta = validate_degree(item["beta"], degree_rank)
        ins = _parse_insertions(item["insertions"], ring.rank)
        if all(b == 0 for b in beta) and len(ins) < 3:
            raise SchemaError(
                f"degree-zero entry with {len(ins)} insertions: moduli space is empty")
        key = (beta, ins)
        if key in entries:
            raise DuplicateEntry(f"duplicate correlator key {key}")
        entries[key] = parse_rational(item["value"])

    descendent_entries: dict[MarkedKey, Fraction] = {}
    for item in doc["descendent_correlators"]:
        if not isinstance(item, dict) or set(item) != {"beta", "insertions", "marked", "value"}:
            raise SchemaError(f"malformed descendent entry: {item!r}")
        beta = validate_degree(item["beta"], degree_rank)
        ins = _parse_insertions(item["insertions"], ring.rank)
        marked_doc = item["marked"]
        if not isinstance(marked_doc, dict) or set(marked_doc) != {"class", "power"}:
            raise SchemaError(f"marked insertion must give 'class' and 'power': {item!r}")
        cls_idx, power = marked_doc["class"], marked_doc["power"]
        if not isinstance(cls_idx, int) or cls_idx < 0 or cls_idx >= ring.rank:
            raise SchemaError(f"marked class out of range: {cls_idx!r}")
        if not isinstance(power, int) or power < 0:
            raise SchemaError(f"marked power must be a non-negative integer: {power!r}")
        if all(b == 0 for b in beta) and len(ins) + 1 < 3:
            raise SchemaError(
                "degree-zero descendent entry with fewer than three total insertions")
        key = (beta, ins, (cls_idx, power))
        if key in descendent_entries:
            raise DuplicateEntry(f"duplicate descendent key {key}")
        descendent_entries[key] = parse_rational(item["value"])

    return CorrelatorTable(ring, degree_rank, dict(doc["target"]),
                           entries, descendent_entries)


@dataclass(frozen=True)
class ConsistencyReport:
    checked_pairs: int
    violations: tuple[dict, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json_dict(self) -> dict:
        return {
            "checked_pairs": self.checked_pairs,
            "violations": list(self.violations),
            # Permutation invariance cannot fail: keys are sorted multisets.
            "sn_covariance": "enforced by multiset keys",
        }


def table_consistency_check(table: CorrelatorTable) -> ConsistencyReport:
    """Compare every pair of plain entries that differ by one unit insertion.

    Appending the unit class costs nothing at degree zero or positive degree,
    so related entries must agree exactly; each disagreement becomes one
    violation record.  Pairs whose partner is absent are skipped: absence
    means unknown, not zero.
    """
    checked = 0
    violations: list[dict] = []
    for (beta, ins), value in sorted(table.entries.items()):
        if 0 not in ins:
            continue
        reduced = list(ins)
        reduced.remove(0)
        parent_key = (beta, tuple(reduced))
        parent = table.entries.get(parent_key)
        if parent is None:
            continue
        checked += 1
        if parent != value:
            violations.append({
                "beta": list(beta),
                "insertions": list(ins),
                "parent_insertions": list(parent_key[1]),
                "value": format_rational(value),
                "parent_value": format_rational(parent),
            })
    return ConsistencyReport(checked, tuple(violations))


def point_descendent_table(nmax: int, dmax: int) -> CorrelatorTable:
    """Single-descendent correlators of the point target.

    The entry with n-1 unit insertions plus one marked tau_d slot is exactly
    the cotangent Euler characteristic E(n; 0,...,0,d); the virtual sheaf is
    trivial at degree zero.
    """
    if nmax < 3:
        raise ValueError("need nmax >= 3")
    if dmax < 0:
        raise ValueError("need dmax >= 0")
    ring = point_kring()
    dentries: dict[MarkedKey, Fraction] = {}
    for n in range(3, nmax + 1):
        ins = (0,) * (n - 1)
        for d in range(dmax + 1):
            dentries[((), ins, (0, d))] = Fraction(
                descendent_euler((0,) * (n - 1) + (d,)))
    return CorrelatorTable(ring, 0, {"type": "point"}, {}, dentries)
