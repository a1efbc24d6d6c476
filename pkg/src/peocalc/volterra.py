"""Iterative solvers: Volterra-Neumann expansions and time-ordered series.

The pattern shared by everything here: an evolution equation whose time
derivative is a pseudo-derivative gets rewritten as a fixed-point problem
Y = Y0 + K[f Y], with K the matching antiderivative (the inverse Laguerre
derivative, or the Riemann-Liouville integral of order alpha).  Iterating
from Y0 produces a sequence whose valuations strictly climb, so any finite
truncation order is reached after finitely many rounds.  Each solver
records the iterates and their partial sum in a VNState so tests can
check the fixed-point residual rather than trusting the loop.

The time-ordered (Dyson-style) expansion does the same with a matrix
kernel, where operator ordering matters: the generator always multiplies
from the left at the latest time.  Matrix series reuse FracSeries
entrywise, one engine for all exponent bookkeeping.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import DomainError
from .gammafn import beta, recip_gamma
from .series import (
    FracSeries,
    laguerre_antiderivative,
    rl_integral,
    series_mul,
)


def _clip(s: FracSeries, order) -> FracSeries:
    cap = float(order)
    return s.map_terms(
        lambda e, c: (e, c) if float(e) <= cap + 1e-12 else None,
        truncation_order=order,
        truncated=True,
    )


@dataclass(frozen=True)
class VNState:
    """Iterates of one Volterra-Neumann run plus their accumulated sum."""

    iterates: tuple
    partial_sum: object

    def iterate(self, n: int):
        return self.iterates[n]


def _check_valuation_growth(prev, new, gain, label: str):
    # Each iteration must raise the valuation by at least `gain`; a
    # violation means the kernel lost its smoothing and the expansion is
    # not converging formally.
    pv, nv = prev.valuation(), new.valuation()
    if math.isinf(float(nv)):
        return
    if float(nv) < float(pv) + float(gain) - 1e-12:
        raise ArithmeticError(
            f"{label}: iterate valuation {nv} grew less than {gain} over {pv}"
        )


def laguerre_vn_solve(f: FracSeries, y0, n_iter: int, order) -> VNState:
    """Neumann iteration for the Laguerre-derivative growth problem.

    Solves (t d/dt t d/dt-style) Y' = f Y, Y(0) = y0, by iterating
    Y_{n+1} = inverse-Laguerre-derivative of (f Y_n).  Exact in rationals
    for rational f.  Stops early once an iterate's valuation passes
    `order`; the partial sum is truncated there as well.
    """
    if not float(f.valuation()) > -1.0:
        raise DomainError("laguerre_vn_solve needs f exponents > -1")
    current = FracSeries.constant(y0, order)
    iterates = [current]
    total = current
    gain = 1 + f.valuation() if not math.isinf(float(f.valuation())) else 1
    for _ in range(n_iter):
        nxt = _clip(laguerre_antiderivative(series_mul(f, current)), order)
        _check_valuation_growth(current, nxt, gain, "laguerre_vn_solve")
        iterates.append(nxt)
        if nxt.is_zero() or float(nxt.valuation()) > float(order):
            break
        total = total + nxt
        current = nxt
    return VNState(tuple(iterates), _clip(total, order))


def fractional_vn_solve(f: FracSeries, alpha, y0, n_iter: int, order) -> VNState:
    """Neumann iteration for the fractional relaxation problem.

    Solves D^alpha Y = f Y with memory of Y(0) = y0, iterating
    Y_{n+1} = I^alpha (f Y_n), where I^alpha is the Riemann-Liouville
    integral.  The convolution kernel (t - tau)^(alpha-1)/Gamma(alpha)
    acting on a power is exactly the termwise Gamma-quotient rule.
    """
    if not 0.0 < float(alpha) <= 1.0:
        raise DomainError(f"fractional_vn_solve needs alpha in (0, 1], got {alpha}")
    if not float(f.valuation()) > -1.0:
        raise DomainError("fractional_vn_solve needs f exponents > -1")
    current = FracSeries.constant(y0, order)
    iterates = [current]
    total = current
    fval = float(f.valuation())
    gain = float(alpha) + (fval if math.isfinite(fval) else 0.0)
    for _ in range(n_iter):
        nxt = _clip(rl_integral(series_mul(f, current), alpha), order)
        _check_valuation_growth(current, nxt, gain, "fractional_vn_solve")
        iterates.append(nxt)
        if nxt.is_zero() or float(nxt.valuation()) > float(order):
            break
        total = total + nxt
        current = nxt
    return VNState(tuple(iterates), _clip(total, order))


def fractional_vn_monomial_closed_form(n: int, alpha, t):
    """Iterate n for the kernel f = -t, in closed form.

    (-t^(alpha+1)/Gamma(alpha))^n prod_{k<n} B(k (alpha+1) + 2, alpha).
    The empty product makes n = 0 the constant 1.
    """
    if n < 0:
        raise DomainError(f"iterate index must be >= 0, got {n}")
    a = float(alpha)
    if not 0.0 < a <= 1.0:
        raise DomainError(f"needs alpha in (0, 1], got {alpha}")
    if n == 0:
        return 1.0
    base = -(float(t) ** (a + 1.0)) * recip_gamma(a)
    prod = 1.0
    for k in range(n):
        prod *= beta(k * (a + 1.0) + 2.0, a)
    return base**n * prod


# -- cosine-kernel recursion -----------------------------------------------------


def cosine_series(order) -> FracSeries:
    """Maclaurin cosine as a FracSeries, exact rationals, through `order`."""
    terms = []
    j = 0
    while 2 * j <= float(order):
        terms.append((2 * j, Fraction((-1) ** j, math.factorial(2 * j))))
        j += 1
    return FracSeries(terms, order, truncated=True)


def cos_recursion_coeffs(n: int, r_max: int) -> list[Fraction]:
    """Coefficient table row n for the cosine-kernel Neumann iterates.

    Row 1 is a_r = 1/(2r)!; each later row folds the previous one against
    the cosine coefficients:

        a_r(n) = sum_{k<=r} a_k(n-1) / ((2k + n - 1)^2 (2(r-k))!)

    All exact rationals.
    """
    if n < 1:
        raise DomainError(f"row index must be >= 1, got {n}")
    row = [Fraction(1, math.factorial(2 * r)) for r in range(r_max + 1)]
    for m in range(2, n + 1):
        row = [
            sum(
                (
                    row[k]
                    / ((2 * k + m - 1) ** 2 * math.factorial(2 * (r - k)))
                    for k in range(r + 1)
                ),
                Fraction(0),
            )
            for r in range(r_max + 1)
        ]
    return row


def cos_recursion_iterate(n: int, r_max: int) -> FracSeries:
    """Iterate n assembled from the coefficient table:

    Y_n(t) = sum_r (-1)^r t^(2r+n) a_r(n) / (2r + n)^2
    """
    coeffs = cos_recursion_coeffs(n, r_max)
    terms = [
        (2 * r + n, Fraction((-1) ** r) * c / (2 * r + n) ** 2)
        for r, c in enumerate(coeffs)
    ]
    return FracSeries(terms, 2 * r_max + n, truncated=True)


# -- matrix series ---------------------------------------------------------------


class MatrixSeries:
    """Square matrix whose entries are FracSeries in t.

    All exponent merging, truncation, and termwise calculus is delegated
    to the scalar series engine, entry by entry.
    """

    __slots__ = ("grid", "n")

    def __init__(self, grid: Sequence[Sequence[FracSeries]]):
        rows = [list(row) for row in grid]
        n = len(rows)
        if any(len(row) != n for row in rows):
            raise DomainError("MatrixSeries needs a square grid")
        for row in rows:
            for s in row:
                if not isinstance(s, FracSeries):
                    raise DomainError("MatrixSeries entries must be FracSeries")
        self.grid = rows
        self.n = n

    @classmethod
    def constant(cls, matrix, order=math.inf) -> "MatrixSeries":
        return cls(
            [[FracSeries.constant(c, order) for c in row] for row in matrix]
        )

    @classmethod
    def identity(cls, n: int, order=math.inf) -> "MatrixSeries":
        return cls.constant(
            [[1 if i == j else 0 for j in range(n)] for i in range(n)], order
        )

    def entry(self, i: int, j: int) -> FracSeries:
        return self.grid[i][j]

    def __add__(self, other):
        if self.n != other.n:
            raise DomainError("size mismatch")
        return MatrixSeries(
            [
                [self.grid[i][j] + other.grid[i][j] for j in range(self.n)]
                for i in range(self.n)
            ]
        )

    def scale(self, c) -> "MatrixSeries":
        return MatrixSeries([[s.scale(c) for s in row] for row in self.grid])

    def __matmul__(self, other):
        if self.n != other.n:
            raise DomainError("size mismatch")
        out = []
        for i in range(self.n):
            row = []
            for j in range(self.n):
                acc = FracSeries.zero()
                for k in range(self.n):
                    acc = acc + series_mul(self.grid[i][k], other.grid[k][j])
                row.append(acc)
            out.append(row)
        return MatrixSeries(out)

    def rl_integral(self, alpha) -> "MatrixSeries":
        return MatrixSeries(
            [[rl_integral(s, alpha) for s in row] for row in self.grid]
        )

    def clip(self, order) -> "MatrixSeries":
        return MatrixSeries([[_clip(s, order) for s in row] for row in self.grid])

    def valuation(self):
        return min(s.valuation() for row in self.grid for s in row)

    def is_zero(self) -> bool:
        return all(s.is_zero() for row in self.grid for s in row)

    def coeff_matrix(self, exponent):
        return [
            [self.grid[i][j].coeff(exponent) for j in range(self.n)]
            for i in range(self.n)
        ]

    def eval(self, t):
        from .series import series_eval

        return [
            [series_eval(self.grid[i][j], t) for j in range(self.n)]
            for i in range(self.n)
        ]

    def __repr__(self):
        return f"MatrixSeries(n={self.n}, valuation={self.valuation()})"


def matrix_series_max_deviation(a: MatrixSeries, b: MatrixSeries, up_to=None) -> float:
    from .series import series_max_deviation

    worst = 0.0
    for i in range(a.n):
        for j in range(a.n):
            x, y = a.entry(i, j), b.entry(i, j)
            if up_to is not None:
                x, y = _clip(x, up_to), _clip(y, up_to)
            worst = max(worst, series_max_deviation(x, y))
    return worst


# -- time-ordered evolution operator ----------------------------------------------


def dyson_evolution_operator(
    m: MatrixSeries,
    alpha,
    n_iter: int,
    order,
    variant: str = "recursion",
) -> MatrixSeries:
    """Time-ordered evolution operator for D^alpha Y = M(t) Y.

    variant="recursion" iterates the fixed-point form

        U_{n+1}(t) = I^alpha [ M U_n ](t),   U_0 = 1,

    which keeps the generator at the latest time on the left and, for
    constant M, telescopes to the Mittag-Leffler matrix function of
    M t^alpha (the classical exponential at alpha = 1).

    variant="literal" instead nests every convolution kernel with the
    OUTER time, (t - t_k)^(alpha-1) for all k.  That reading is not the
    fixed-point iteration and the two disagree for alpha < 1 (they
    coincide at alpha = 1); it is kept so the discrepancy can be measured
    rather than argued about.  It requires integer exponents in M.
    """
    if not 0.0 < float(alpha) <= 1.0:
        raise DomainError(f"dyson needs alpha in (0, 1], got {alpha}")
    if variant == "recursion":
        return _dyson_recursion(m, alpha, n_iter, order)
    if variant == "literal":
        return _dyson_literal(m, alpha, n_iter, order)
    raise DomainError(f"unknown dyson variant {variant!r}")


def _dyson_recursion(m: MatrixSeries, alpha, n_iter: int, order) -> MatrixSeries:
    if float(m.valuation()) < 0.0:
        raise DomainError("dyson needs M exponents >= 0")
    gain = float(alpha) + max(0.0, float(m.valuation()))
    current = MatrixSeries.identity(m.n, order)
    total = current
    prev_val = 0.0
    for _ in range(n_iter):
        nxt = (m @ current).rl_integral(alpha).clip(order)
        if nxt.is_zero():
            break
        if float(nxt.valuation()) < prev_val + gain - 1e-12:
            raise ArithmeticError("dyson iterate valuation failed to grow")
        prev_val = float(nxt.valuation())
        total = total + nxt
        if prev_val > float(order):
            break
        current = nxt
    return total.clip(order)


def _mat_add(a, b):
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def _mat_scale(a, c):
    return [[x * c for x in row] for row in a]


def _mat_mul(a, b):
    n = len(a)
    return [
        [sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)]
        for i in range(n)
    ]


def _dyson_literal(m: MatrixSeries, alpha, n_iter: int, order) -> MatrixSeries:
    """Nested-kernel reading: every factor carries (t - t_k)^(alpha-1).

    Integrands live in the two-parameter basis t^a (t - s)^q, which is
    closed under the three moves needed: multiplying by integer powers of
    s, convolving against (t - s)^(alpha-1), and evaluating at s = t.
    """
    af = Fraction(alpha)
    inv_g = Fraction(1) if af == 1 else recip_gamma(float(alpha))
    # integer-exponent monomials of M, as matrices
    monomials = {}
    for i in range(m.n):
        for j in range(m.n):
            for e, c in m.entry(i, j).terms:
                ef = float(e)
                if ef < 0 or ef != math.floor(ef):
                    raise DomainError(
                        "the literal dyson variant needs integer exponents in M"
                    )
                k = int(ef)
                mat = monomials.setdefault(
                    k, [[0 for _ in range(m.n)] for _ in range(m.n)]
                )
                mat[i][j] = mat[i][j] + c

    def integrate(state):
        # t^a (t-s)^q  ->  inv_g/(alpha+q) * [ t^(a+alpha+q) - t^a (t-s)^(alpha+q) ]
        out = {}
        for (a, q), mat in state.items():
            w = inv_g / (af + q)
            for key, sgn in (((a + af + q, Fraction(0)), 1), ((a, af + q), -1)):
                if float(key[0] + key[1]) > float(order) + 1e-12:
                    continue
                cur = out.get(key)
                add = _mat_scale(mat, sgn * w)
                out[key] = add if cur is None else _mat_add(cur, add)
        return out

    def left_multiply(state):
        # s^k expands as sum_i C(k,i) (-1)^i t^(k-i) (t-s)^i
        out = {}
        for k, mk in monomials.items():
            for (a, q), mat in state.items():
                prod = _mat_mul(mk, mat)
                for i in range(k + 1):
                    key = (a + k - i, q + i)
                    if float(key[0] + key[1]) > float(order) + 1e-12:
                        continue
                    add = _mat_scale(prod, math.comb(k, i) * Fraction((-1) ** i))
                    cur = out.get(key)
                    out[key] = add if cur is None else _mat_add(cur, add)
        return out

    def top_exponents(state):
        # evaluate at s = t: only q = 0 survives
        rows = {}
        for (a, q), mat in state.items():
            if q == 0:
                rows[a] = mat
        return rows

    ident = [[Fraction(1) if i == j else Fraction(0) for j in range(m.n)] for i in range(m.n)]
    collected = {Fraction(0): ident}
    state = {(Fraction(0), Fraction(0)): ident}
    for _ in range(n_iter):
        state = integrate(left_multiply(state))
        if not state:
            break
        for a, mat in top_exponents(state).items():
            cur = collected.get(a)
            collected[a] = mat if cur is None else _mat_add(cur, mat)

    grids = [[[] for _ in range(m.n)] for _ in range(m.n)]
    for a, mat in collected.items():
        for i in range(m.n):
            for j in range(m.n):
                if mat[i][j] != 0:
                    grids[i][j].append((a, mat[i][j]))
    return MatrixSeries(
        [
            [FracSeries(grids[i][j], order, truncated=True) for j in range(m.n)]
            for i in range(m.n)
        ]
    )
