"""Independent oracles the test suite checks the library against.

Each oracle reaches its value by a route the library does not use: closed
forms, brute-force enumeration over all reduction orders, direct Euler
characteristic expansion, order-by-order integration of the differential
equation, and a sympy re-implementation of the associativity residual.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations_with_replacement, product
from math import comb, factorial

from qkzero import CorrelatorTable, KRingPresentation


# -- descendent oracles ------------------------------------------------------


def closed_form_single(n: int, d: int) -> int:
    """E(n; 0,...,0,d) = binom(n+d-3, d): stars and bars from integrating the
    single-variable solution of the differential equation."""
    return comb(n + d - 3, d)


def riemann_roch_n4(exponents) -> int:
    """Four points: the moduli space is a line, each cotangent line has
    degree one, so the Euler characteristic is total degree plus one."""
    assert len(exponents) == 4
    return sum(exponents) + 1


_branch_memo: dict[tuple[int, ...], frozenset[int]] = {}


def branching_values(exponents) -> frozenset[int]:
    """Values reachable by every admissible reduction order.

    The library fixes one canonical reduction point; this oracle follows all
    of them and returns the full set of outcomes.  Confluence of the
    reduction is the statement that the set is a singleton.
    """
    key = tuple(sorted(exponents))
    cached = _branch_memo.get(key)
    if cached is not None:
        return cached
    n = len(key)
    if n == 3:
        result = frozenset({1})
    else:
        outcomes: set[int] = set()
        seen_kinds: set[int] = set()
        for j, dj in enumerate(key):
            if dj > 1 or dj in seen_kinds:
                continue  # same exponent value: identical branch by symmetry
            seen_kinds.add(dj)
            rest = key[:j] + key[j + 1 :]
            children = [branching_values(rest)]
            for i, di in enumerate(rest):
                for k in range(1, di + 1):
                    lowered = rest[:i] + (di - k,) + rest[i + 1 :]
                    children.append(branching_values(lowered))
            head = n - 2 if dj == 1 else 1
            for combo in product(*children):
                outcomes.add(head * combo[0] + sum(combo[1:]))
        result = frozenset(outcomes)
    _branch_memo[key] = result
    return result


def is_reducible(exponents) -> bool:
    exps = tuple(sorted(exponents))
    return len(exps) == 3 or exps[0] <= 1


# -- Euler characteristic series oracle --------------------------------------


def chi_exponential_series(ring: KRingPresentation, fixed: tuple[int, ...],
                           order: int) -> dict[tuple[int, ...], Fraction]:
    """Coefficients of chi(e_{fixed} * exp(t)) by direct multiset expansion.

    Returns a map from t-exponent tuples to exact values; this is the
    degree-zero quantized metric (two fixed insertions) or third-derivative
    tensor (three fixed insertions) computed without any series machinery.
    """
    rank = ring.rank
    base = ring.unit()
    for i in fixed:
        base = base * ring.basis_class(i)

    out: dict[tuple[int, ...], Fraction] = {}

    def visit(counts: tuple[int, ...]) -> None:
        cls = base
        weight = Fraction(1)
        for i, c in enumerate(counts):
            for _ in range(c):
                cls = cls * ring.basis_class(i)
            weight /= factorial(c)
        value = cls.chi() * weight
        if value != 0:
            out[counts] = value

    def rec(pos: int, prefix: tuple[int, ...], left: int) -> None:
        if pos == rank - 1:
            visit(prefix + (left,))
            return
        for c in range(left + 1):
            rec(pos + 1, prefix + (c,), left - c)

    for total in range(order + 1):
        rec(0, (), total)
    return out


# -- degree-zero descendent correlators for any target ------------------------


def degree_zero_descendent_table(ring: KRingPresentation, target_doc: dict,
                                 t_order: int, q_order: int) -> CorrelatorTable:
    """Descendent correlators at degree zero from the product splitting.

    At degree zero the moduli space is the product of the pointed-curve
    space with the target, the obstruction space vanishes in genus zero,
    evaluation maps are projections and cotangent lines pull back from the
    curve factor.  The Euler characteristic therefore factors into a
    pointed-curve piece, binom(m+d-3, d) for a single descendent at m
    points, times chi of the product of all inserted classes.
    """
    entries: dict = {}
    beta = (0,)
    for n in range(1, t_order + 1):
        for ins in combinations_with_replacement(range(ring.rank), n + 1):
            cls = ring.unit()
            for idx in ins:
                cls = cls * ring.basis_class(idx)
            for j in range(ring.rank):
                chi_val = (cls * ring.basis_class(j)).chi()
                for d in range(q_order + 1):
                    value = Fraction(comb(n + d - 1, d)) * chi_val
                    entries[(beta, ins, (j, d))] = value
    return CorrelatorTable(ring, 1, target_doc, {}, entries)


# -- point differential equation oracle --------------------------------------


def integrate_point_qde(t_order: int, q_order: int) -> dict[tuple[int, int], Fraction]:
    """Solve dS/dt = (1 + q + ... + q^M) S, S(0) = 1, order by order in t.

    Writing S = sum over n of t^n/n! u_n(q), the recursion is
    u_0 = 1 and u_{n+1} = geometric * u_n truncated at q^M.
    Returns the coefficient of t^n q^d for all certified (n, d).
    """
    geom = [Fraction(1)] * (q_order + 1)
    u = [Fraction(0)] * (q_order + 1)
    u[0] = Fraction(1)
    table: dict[tuple[int, int], Fraction] = {}
    for n in range(t_order + 1):
        for d in range(q_order + 1):
            table[(n, d)] = u[d] / factorial(n)
        u = [
            sum((geom[m] * u[d - m] for m in range(d + 1)), Fraction(0))
            for d in range(q_order + 1)
        ]
    return table


# -- sympy re-implementation of the associativity residual -------------------


def sympy_wdvv_tensor(coeffs: dict[tuple[int, ...], Fraction], num_t: int,
                      t_order: int):
    """Recompute the full WDVV residual tensor with sympy polynomials.

    Input: potential coefficients over t variables only (exponent tuples of
    length num_t, trailing groups already stripped).  Output: nested dict
    (i, j, k, l) -> {t-exponent: Fraction} truncated at total degree
    t_order - 3, computed entirely inside sympy so the only shared code is
    the statement of the identity.
    """
    import sympy

    ts = sympy.symbols(f"x0:{num_t}")

    def truncate(expr, bound):
        poly = sympy.Poly(sympy.expand(expr), *ts)
        kept = sympy.Integer(0)
        for monom, coeff in poly.terms():
            if sum(monom) <= bound:
                kept += coeff * sympy.prod(
                    [ts[i] ** e for i, e in enumerate(monom)])
        return sympy.expand(kept)

    G = sum(
        (sympy.Rational(v.numerator, v.denominator)
         * sympy.prod([ts[i] ** e for i, e in enumerate(exp)])
         for exp, v in coeffs.items()),
        sympy.Integer(0),
    )
    hess = [[sympy.diff(G, ts[i], ts[j]) for j in range(num_t)]
            for i in range(num_t)]
    third = [[[sympy.diff(hess[i][j], ts[k]) for k in range(num_t)]
              for j in range(num_t)] for i in range(num_t)]

    bound = t_order - 3
    h0 = sympy.Matrix([[hess[i][j].subs({t: 0 for t in ts})
                        for j in range(num_t)] for i in range(num_t)])
    h0_inv = h0.inv()
    f = sympy.Matrix([[sympy.expand(hess[i][j] - h0[i, j])
                       for j in range(num_t)] for i in range(num_t)])
    inv = sympy.Matrix(h0_inv)
    term = sympy.Matrix(h0_inv)
    step = -h0_inv * f
    for _ in range(bound):
        term = step * term
        term = term.applyfunc(lambda e: truncate(e, bound))
        inv = inv + term

    tensor: dict[tuple[int, int, int, int], dict[tuple[int, ...], Fraction]] = {}
    for i in range(num_t):
        for j in range(num_t):
            for k in range(j + 1, num_t):
                for l in range(num_t):
                    lhs = sympy.Integer(0)
                    rhs = sympy.Integer(0)
                    for nu in range(num_t):
                        c_ij = sum(
                            truncate(third[i][j][mu] * inv[mu, nu], bound)
                            for mu in range(num_t))
                        c_ik = sum(
                            truncate(third[i][k][mu] * inv[mu, nu], bound)
                            for mu in range(num_t))
                        lhs += truncate(c_ij * third[nu][k][l], bound)
                        rhs += truncate(c_ik * third[nu][j][l], bound)
                    diff = sympy.expand(lhs - rhs)
                    entry: dict[tuple[int, ...], Fraction] = {}
                    if diff != 0:
                        poly = sympy.Poly(diff, *ts)
                        for monom, coeff in poly.terms():
                            if sum(monom) <= bound:
                                entry[tuple(monom)] = Fraction(
                                    int(sympy.numer(coeff)),
                                    int(sympy.denom(coeff)))
                    tensor[(i, j, k, l)] = entry
    return tensor
