"""Fundamental solution of the quantum differential equation and its residuals.

The solution matrix starts from the pairing and adds every correlator with
one marked descendent slot expanded as a geometric ladder in q:

    S_ij = g_ij + sum over degrees, insertions and powers of
           Q^beta q^d / n! * < e_i, t, ..., t, tau_d(e_j) >.

It must satisfy, column by column, the connection equation

    d S / d t_k = 1/(1-q) * (e_k *) S

together with the generalized associativity identity
(e_j *) dS/dt_k = (e_k *) dS/dt_j.  The first index of S is covariant
(it is paired, not raised), while the stored product matrices give the
action of (e_k *) on coordinates.  Conjugating by the metric turns one
into the other, and self-adjointness of the product collapses the
conjugation to a plain transpose, which is what the residuals use.
Both identities are checked exactly on the largest window the two
truncations certify jointly; the q window never shrinks because
multiplying by the truncated geometric series only consumes known q
coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement
from math import factorial

from .correlators import CorrelatorTable, effective_degrees
from .errors import IncompleteTable, RingMismatch, TruncationMismatch
from .frobenius import FrobeniusData, ResidualSummary, residual_summary, window_dict
from .kring import KRingPresentation
from .series import (
    SeriesMatrix,
    SeriesSpec,
    TruncatedSeries,
    try_rational_inverse,
)


@dataclass(frozen=True)
class QDESolution:
    ring: KRingPresentation
    degree_rank: int
    matrix: SeriesMatrix

    @property
    def spec(self) -> SeriesSpec:
        return self.matrix.spec


def assemble_fundamental_solution(ring: KRingPresentation, table: CorrelatorTable,
                                  t_order: int, novikov_order: int,
                                  q_order: int) -> QDESolution:
    """Build S entry by entry from marked descendent correlators.

    Every key the truncation demands must be present: at degree zero that
    means at least one plain insertion next to the two distinguished slots
    (three points keep the moduli space alive), at positive degree every
    insertion count from zero up to the t order.  The first missing key
    aborts with the key attached.
    """
    if table.ring != ring:
        raise RingMismatch("table was built for a different ring presentation")
    rank = ring.rank
    spec = SeriesSpec(rank, table.degree_rank, t_order, novikov_order, q_order)
    cells: list[list[dict[tuple[int, ...], Fraction]]] = [
        [dict() for _ in range(rank)] for _ in range(rank)
    ]
    zero_exp = (0,) * spec.nvars
    for i in range(rank):
        for j in range(rank):
            if ring.pairing[i][j] != 0:
                cells[i][j][zero_exp] = Fraction(ring.pairing[i][j])

    qpos = spec.nvars - 1
    for beta in effective_degrees(table.degree_rank, novikov_order):
        degree_zero = all(b == 0 for b in beta)
        n_min = 1 if degree_zero else 0
        for n in range(n_min, t_order + 1):
            for kappa in combinations_with_replacement(range(rank), n):
                counts = [0] * rank
                for idx in kappa:
                    counts[idx] += 1
                weight = Fraction(1)
                for m in counts:
                    weight /= factorial(m)
                for i in range(rank):
                    insertions = tuple(sorted((i,) + kappa))
                    for j in range(rank):
                        for d in range(q_order + 1):
                            value = table.descendent_value(beta, insertions, (j, d))
                            if value is None:
                                raise IncompleteTable(beta, insertions, (j, d))
                            if value == 0:
                                continue
                            exp = list(counts) + list(beta) + [0]
                            exp[qpos] = d
                            key = tuple(exp)
                            cells[i][j][key] = cells[i][j].get(key, Fraction(0)) \
                                + value * weight
    entries = tuple(
        tuple(TruncatedSeries(spec, cells[i][j]) for j in range(rank))
        for i in range(rank)
    )
    return QDESolution(ring, table.degree_rank, SeriesMatrix(entries))


def _aligned_window(solution: QDESolution, fd: FrobeniusData) -> int:
    if solution.ring != fd.ring:
        raise RingMismatch("solution and product data use different rings")
    s_spec = solution.spec
    a_spec = fd.a_matrices[0].spec
    if s_spec.num_novikov != a_spec.num_novikov \
            or s_spec.novikov_order != a_spec.novikov_order:
        raise TruncationMismatch("Novikov truncations differ")
    if s_spec.q_order != a_spec.q_order:
        raise TruncationMismatch(
            f"descendent orders differ: solution {s_spec.q_order}, "
            f"product {a_spec.q_order}")
    window = min(s_spec.t_order - 1, a_spec.t_order)
    if window < 0:
        raise TruncationMismatch("no common t window for the residual")
    return window


def qde_residual(solution: QDESolution, fd: FrobeniusData) -> list[ResidualSummary]:
    """dS/dt_k minus the truncated 1/(1-q) times (e_k *) S, one summary per k."""
    window = _aligned_window(solution, fd)
    rank = solution.ring.rank
    summaries = []
    for k in range(rank):
        ds = solution.matrix.derivative(f"t{k}").truncated(t_order=window)
        # transpose: the action on the covariant index of S
        a_k = fd.a_matrices[k].truncated(t_order=window).transpose()
        s_w = solution.matrix.truncated(t_order=window)
        spec_w = ds.spec
        geom = TruncatedSeries.geometric_q(spec_w)
        residual = ds - (a_k * s_w).scaled(geom)
        pieces = [
            ({"k": k, "entry": [i, j]}, residual.entries[i][j])
            for i in range(rank) for j in range(rank)
        ]
        summaries.append(residual_summary(pieces, window_dict(spec_w)))
    return summaries


def gwdvv_residuals(solution: QDESolution, fd: FrobeniusData
                    ) -> list[tuple[tuple[int, int], ResidualSummary]]:
    """(e_j *) dS/dt_k - (e_k *) dS/dt_j for every pair j < k; generalized
    associativity holds exactly when all of them vanish."""
    window = _aligned_window(solution, fd)
    rank = solution.ring.rank
    partials = [
        solution.matrix.derivative(f"t{k}").truncated(t_order=window)
        for k in range(rank)
    ]
    a_trunc = [
        fd.a_matrices[k].truncated(t_order=window).transpose()
        for k in range(rank)
    ]
    summaries = []
    for j in range(rank):
        for k in range(j + 1, rank):
            residual = a_trunc[j] * partials[k] - a_trunc[k] * partials[j]
            pieces = [
                ({"pair": [j, k], "entry": [a, b]}, residual.entries[a][b])
                for a in range(rank) for b in range(rank)
            ]
            summaries.append(
                ((j, k), residual_summary(pieces, window_dict(residual.spec))))
    return summaries


def is_complete(solution: QDESolution) -> bool:
    """Invertibility of the solution at the origin of deformation space."""
    return try_rational_inverse(solution.matrix.constant_matrix()) is not None
