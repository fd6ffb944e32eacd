"""Potential, quantized metric, quantum product, and the identities they satisfy.

The potential collects the classical quadratic pairing term plus every
correlator weighted by Novikov monomials and divided by insertion
multiplicities.  Second derivatives give the quantized metric G_ij, third
derivatives contracted with the inverse metric give the structure constants
of the quantum product.  Everything here is exact; each report states the
window of orders on which its residual is certified.

Truncation bookkeeping: a potential assembled to t-order T certifies the
metric to T-2, third derivatives and the product to T-3, and the curvature
piece built from derivatives of the product to T-4.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement
from math import factorial

from .correlators import (
    CorrelatorTable,
    beta_zero_correlator,
    effective_degrees,
)
from .errors import IncompleteTable, RingMismatch
from .kring import KRingPresentation
from .series import (
    SeriesMatrix,
    SeriesSpec,
    TruncatedSeries,
    format_rational,
    matrix_inverse_direct,
    matrix_inverse_geometric,
)


@dataclass(frozen=True)
class Potential:
    ring: KRingPresentation
    degree_rank: int
    series: TruncatedSeries

    @property
    def t_order(self) -> int:
        return self.series.spec.t_order


@dataclass(frozen=True)
class ResidualSummary:
    """Largest absolute coefficient of a residual family, with its location."""

    max_abs: Fraction
    witness: dict | None
    window: dict[str, int]

    @property
    def is_zero(self) -> bool:
        return self.max_abs == 0

    def to_json_dict(self) -> dict:
        return {
            "max_residual": format_rational(self.max_abs),
            "witness": self.witness,
        }


def assemble_potential(ring: KRingPresentation, table: CorrelatorTable,
                       t_order: int, novikov_order: int,
                       q_order: int = 0) -> Potential:
    """Sum the classical quadratic term and all correlators the truncation
    demands.

    Degree-zero correlators absent from the table fall back to the Euler
    characteristic of the insertion product; positive-degree correlators
    must be supplied, and the first missing key aborts the assembly.  The
    potential itself never involves the descendent variable, so any q order
    is certified; carrying one lets downstream products meet descendent
    series without coercion.
    """
    if table.ring != ring:
        raise RingMismatch("table was built for a different ring presentation")
    rank = ring.rank
    spec = SeriesSpec(rank, table.degree_rank, t_order, novikov_order, q_order)
    acc: dict[tuple[int, ...], Fraction] = {}

    def bump(t_counts: tuple[int, ...], beta: tuple[int, ...], value: Fraction) -> None:
        exp = t_counts + beta + (0,)
        acc[exp] = acc.get(exp, Fraction(0)) + value

    if t_order >= 2:
        g = ring.pairing
        for i in range(rank):
            for j in range(i, rank):
                counts = [0] * rank
                counts[i] += 1
                counts[j] += 1
                value = g[i][j] if i != j else g[i][i] / 2
                if value != 0:
                    bump(tuple(counts), (0,) * table.degree_rank, value)

    for beta in effective_degrees(table.degree_rank, novikov_order):
        degree_zero = all(b == 0 for b in beta)
        n_min = 3 if degree_zero else 0
        for n in range(n_min, t_order + 1):
            for kappa in combinations_with_replacement(range(rank), n):
                value = table.value(beta, kappa)
                if value is None:
                    if degree_zero:
                        value = beta_zero_correlator(ring, kappa)
                    else:
                        raise IncompleteTable(beta, kappa)
                if value == 0:
                    continue
                counts = [0] * rank
                for idx in kappa:
                    counts[idx] += 1
                weight = Fraction(1)
                for m in counts:
                    weight /= factorial(m)
                bump(tuple(counts), beta, value * weight)

    return Potential(ring, table.degree_rank, TruncatedSeries(spec, acc))


def quantized_metric(potential: Potential) -> SeriesMatrix:
    """G_ij as the Hessian of the potential, certified to t-order T-2."""
    rank = potential.ring.rank
    first = [potential.series.derivative(f"t{i}") for i in range(rank)]
    return SeriesMatrix(tuple(
        tuple(first[i].derivative(f"t{j}") for j in range(rank))
        for i in range(rank)
    ))


@dataclass(frozen=True)
class FrobeniusData:
    """Metric, inverse metric, third derivatives, structure constants, and the
    multiplication-operator matrices assembled from one potential."""

    ring: KRingPresentation
    degree_rank: int
    t_order: int
    gmetric: SeriesMatrix
    ginv: SeriesMatrix
    third: tuple[tuple[tuple[TruncatedSeries, ...], ...], ...]
    product: tuple[tuple[tuple[TruncatedSeries, ...], ...], ...]
    a_matrices: tuple[SeriesMatrix, ...]


def _third_derivatives(gmetric: SeriesMatrix
                       ) -> tuple[tuple[tuple[TruncatedSeries, ...], ...], ...]:
    rank = gmetric.dimension
    return tuple(
        tuple(
            tuple(gmetric.entries[i][j].derivative(f"t{k}") for k in range(rank))
            for j in range(rank)
        )
        for i in range(rank)
    )


def product_tensor(gmetric: SeriesMatrix, ginv: SeriesMatrix,
                   potential: Potential
                   ) -> tuple[tuple[tuple[tuple[TruncatedSeries, ...], ...], ...],
                              tuple[SeriesMatrix, ...]]:
    """Structure constants c_{ij}^k and the matrices A_k of multiplication by
    e_k, both certified to t-order T-3."""
    rank = potential.ring.rank
    third = _third_derivatives(gmetric)
    spec3 = third[0][0][0].spec
    ginv3 = ginv.truncated(t_order=spec3.t_order)
    c = tuple(
        tuple(
            tuple(
                _sum_series(spec3, (third[i][j][mu] * ginv3.entries[mu][k]
                                    for mu in range(rank)))
                for k in range(rank)
            )
            for j in range(rank)
        )
        for i in range(rank)
    )
    a_matrices = tuple(
        SeriesMatrix(tuple(
            tuple(c[k][m][l] for m in range(rank))
            for l in range(rank)
        ))
        for k in range(rank)
    )
    return c, a_matrices


def _sum_series(spec: SeriesSpec, items) -> TruncatedSeries:
    acc = TruncatedSeries.zero(spec)
    for item in items:
        acc = acc + item
    return acc


def build_frobenius_data(potential: Potential) -> FrobeniusData:
    """Full pipeline from a potential.

    The inverse metric is produced by the geometric series in g^{-1} times
    the positive-degree part and cross-checked against direct elimination;
    the two routes share nothing beyond series arithmetic, so agreement
    certifies both.
    """
    gmetric = quantized_metric(potential)
    ginv = matrix_inverse_geometric(gmetric)
    ginv_direct = matrix_inverse_direct(gmetric)
    if ginv != ginv_direct:
        raise ArithmeticError(
            "geometric-series and elimination inverses disagree; "
            "series arithmetic is corrupted")
    c, a_matrices = product_tensor(gmetric, ginv, potential)
    third = _third_derivatives(gmetric)
    return FrobeniusData(
        ring=potential.ring,
        degree_rank=potential.degree_rank,
        t_order=potential.t_order,
        gmetric=gmetric,
        ginv=ginv,
        third=third,
        product=c,
        a_matrices=a_matrices,
    )


def window_dict(spec: SeriesSpec) -> dict[str, int]:
    return {"t": spec.t_order, "novikov": spec.novikov_order, "q": spec.q_order}


def residual_summary(pieces: list[tuple[dict, TruncatedSeries]],
               window: dict[str, int]) -> ResidualSummary:
    """Scan labeled residual series in order; report the largest coefficient.

    Ties keep the earliest label and smallest exponent, so reports are
    deterministic functions of the input.
    """
    best = Fraction(0)
    witness: dict | None = None
    for label, series in pieces:
        value, exp = series.max_abs_coefficient()
        if exp is not None and value > best:
            best = value
            witness = dict(label)
            witness["monomial"] = series.monomial_dict(exp)
            witness["value"] = format_rational(series.coeffs[exp])
    return ResidualSummary(best, witness, window)


def wdvv_residual(fd: FrobeniusData) -> ResidualSummary:
    """Associativity of the quantum product measured through the pairing:

        sum_nu c_{ij}^nu G_{nu k l}  -  (j <-> k)

    must vanish identically.  Certified to t-order T-3.
    """
    rank = fd.ring.rank
    spec3 = fd.product[0][0][0].spec
    pieces: list[tuple[dict, TruncatedSeries]] = []
    for i in range(rank):
        for j in range(rank):
            for k in range(j + 1, rank):
                for l in range(rank):
                    lhs = _sum_series(spec3, (fd.product[i][j][nu] * fd.third[nu][k][l]
                                              for nu in range(rank)))
                    rhs = _sum_series(spec3, (fd.product[i][k][nu] * fd.third[nu][j][l]
                                              for nu in range(rank)))
                    pieces.append(({"indices": [i, j, k, l]}, lhs - rhs))
    return residual_summary(pieces, window_dict(spec3))


def unit_residual(fd: FrobeniusData) -> ResidualSummary:
    """Multiplication by e_0 must be the identity at every order."""
    spec3 = fd.product[0][0][0].spec
    rank = fd.ring.rank
    identity = SeriesMatrix.identity(spec3, rank)
    diff = fd.a_matrices[0] - identity
    pieces = [({"entry": [i, j]}, diff.entries[i][j])
              for i in range(rank) for j in range(rank)]
    return residual_summary(pieces, window_dict(spec3))


def classical_limit_residual(fd: FrobeniusData) -> ResidualSummary:
    """At Novikov degree zero the product must reduce to the classical
    structure constants at every t-order."""
    rank = fd.ring.rank
    spec3 = fd.product[0][0][0].spec
    pieces: list[tuple[dict, TruncatedSeries]] = []
    for i in range(rank):
        for j in range(rank):
            for k in range(rank):
                sliced = {
                    exp: v for exp, v in fd.product[i][j][k].coeffs.items()
                    if spec3.degrees(exp)[1] == 0
                }
                diff = TruncatedSeries(spec3, sliced) - TruncatedSeries.constant(
                    spec3, fd.ring.mult[i][j][k])
                pieces.append(({"indices": [i, j, k]}, diff))
    return residual_summary(pieces, window_dict(spec3))


@dataclass(frozen=True)
class FlatnessReport:
    """Curvature of the one-parameter family of connections built from the
    product: the coefficient of z is the antisymmetrized derivative of the
    A-family, the coefficient of z^2 is its commutator family, and the
    Levi-Civita and metric checks are the two distinguished specializations.
    """

    r1: ResidualSummary
    r2: ResidualSummary
    levi_civita: ResidualSummary
    metric: ResidualSummary

    @property
    def is_zero(self) -> bool:
        return (self.r1.is_zero and self.r2.is_zero
                and self.levi_civita.is_zero and self.metric.is_zero)


def flatness_residuals(fd: FrobeniusData) -> FlatnessReport:
    rank = fd.ring.rank
    spec3 = fd.product[0][0][0].spec

    r1_pieces: list[tuple[dict, TruncatedSeries]] = []
    r2_pieces: list[tuple[dict, TruncatedSeries]] = []
    metric_pieces: list[tuple[dict, TruncatedSeries]] = []
    spec4 = None
    for i in range(rank):
        for j in range(i + 1, rank):
            r1 = (fd.a_matrices[j].derivative(f"t{i}")
                  - fd.a_matrices[i].derivative(f"t{j}"))
            r2 = fd.a_matrices[i] * fd.a_matrices[j] - fd.a_matrices[j] * fd.a_matrices[i]
            spec4 = r1.spec
            # Curvature at the metric specialization z = 1/2: -z R1 + z^2 R2.
            metric = (r1.scaled(TruncatedSeries.constant(spec4, Fraction(-1, 2)))
                      + r2.truncated(t_order=spec4.t_order).scaled(
                          TruncatedSeries.constant(spec4, Fraction(1, 4))))
            for a in range(rank):
                for b in range(rank):
                    r1_pieces.append(({"pair": [i, j], "entry": [a, b]},
                                      r1.entries[a][b]))
                    r2_pieces.append(({"pair": [i, j], "entry": [a, b]},
                                      r2.entries[a][b]))
                    metric_pieces.append(({"pair": [i, j], "entry": [a, b]},
                                          metric.entries[a][b]))

    lc_pieces: list[tuple[dict, TruncatedSeries]] = []
    g3 = fd.gmetric.truncated(t_order=spec3.t_order)
    half = Fraction(1, 2)
    for k in range(rank):
        for i in range(rank):
            for j in range(rank):
                lhs = fd.gmetric.entries[i][j].derivative(f"t{k}")
                rhs = _sum_series(spec3, (
                    (fd.product[k][i][mu] * g3.entries[mu][j]
                     + fd.product[k][j][mu] * g3.entries[i][mu]).scaled(half)
                    for mu in range(rank)))
                lc_pieces.append(({"indices": [k, i, j]}, lhs - rhs))

    if spec4 is None:  # rank-one rings have no antisymmetric pairs
        spec4 = spec3.truncated(t_order=spec3.t_order - 1)
    return FlatnessReport(
        r1=residual_summary(r1_pieces, window_dict(spec4)),
        r2=residual_summary(r2_pieces, window_dict(spec3)),
        levi_civita=residual_summary(lc_pieces, window_dict(spec3)),
        metric=residual_summary(metric_pieces, window_dict(spec4)),
    )
