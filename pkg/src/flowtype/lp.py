"""Exact linear programming over the rationals.

Systems are conjunctions of linear constraints over named, unrestricted
variables.  Optimisation uses a two-phase simplex with Bland's rule on an
integer-preserving tableau, so there are no tolerances anywhere.

The solver works on the dual.  For ``max c.x subject to A x <= b`` it runs
the simplex on ``min b.y subject to A^T y = c, y >= 0`` whose tableau has one
row per variable and one column per constraint.  Our systems have few
variables and many constraints, so this keeps the tableau short.  The
optimal simplex multipliers of the dual are an optimal primal point.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations, product
from math import lcm

from .errors import LpError, UnboundedDirection
from .intervals import Interval
from .rationals import as_fraction, pretty_fraction

RELATIONS = (">=", "<=", "==")

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


def _terms_from(source):
    if hasattr(source, "items"):
        source = source.items()
    merged = {}
    for name, coef in source:
        merged[name] = merged.get(name, Fraction(0)) + as_fraction(coef)
    return tuple(sorted((n, c) for n, c in merged.items() if c != 0))


@dataclass(frozen=True)
class LinearExpr:
    """``sum(coef * var) + constant`` with exact coefficients."""

    terms: tuple = ()
    constant: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "terms", _terms_from(self.terms))
        object.__setattr__(self, "constant", as_fraction(self.constant))

    @classmethod
    def of(cls, plus=(), minus=(), constant=0):
        return cls([(a, 1) for a in plus] + [(a, -1) for a in minus], constant)

    @classmethod
    def var(cls, name):
        return cls({name: 1})

    @property
    def coeffs(self):
        return dict(self.terms)

    @property
    def variables(self):
        return tuple(n for n, _ in self.terms)

    def coefficient(self, name):
        return self.coeffs.get(name, Fraction(0))

    def evaluate(self, point):
        return self.constant + sum((c * as_fraction(point[n]) for n, c in self.terms), Fraction(0))

    def __add__(self, other):
        if not isinstance(other, LinearExpr):
            return LinearExpr(self.terms, self.constant + as_fraction(other))
        return LinearExpr(self.terms + other.terms, self.constant + other.constant)

    __radd__ = __add__

    def __neg__(self):
        return LinearExpr([(n, -c) for n, c in self.terms], -self.constant)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, k):
        k = as_fraction(k)
        return LinearExpr([(n, c * k) for n, c in self.terms], self.constant * k)

    __rmul__ = __mul__

    def substitute(self, mapping):
        """Rename variables; several names may map onto one."""
        return LinearExpr([(mapping.get(n, n), c) for n, c in self.terms], self.constant)

    def __str__(self):
        parts = []
        for name, coef in self.terms:
            sign = "-" if coef < 0 else "+"
            mag = abs(coef)
            body = name if mag == 1 else f"{pretty_fraction(mag)}*{name}"
            parts.append((sign, body))
        if self.constant != 0 or not parts:
            sign = "-" if self.constant < 0 else "+"
            parts.append((sign, pretty_fraction(abs(self.constant))))
        first_sign, first = parts[0]
        text = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text


@dataclass(frozen=True)
class Constraint:
    expr: LinearExpr
    rel: str
    bound: Fraction

    def __post_init__(self):
        if self.rel not in RELATIONS:
            raise LpError(f"unknown relation {self.rel!r}", "bad-relation")
        expr = self.expr
        bound = as_fraction(self.bound)
        if expr.constant:
            bound -= expr.constant
            expr = LinearExpr(expr.terms)
        object.__setattr__(self, "expr", expr)
        object.__setattr__(self, "bound", bound)

    def holds(self, point):
        value = self.expr.evaluate(point)
        if self.rel == ">=":
            return value >= self.bound
        if self.rel == "<=":
            return value <= self.bound
        return value == self.bound

    def __str__(self):
        return f"{self.expr} {self.rel} {pretty_fraction(self.bound)}"


@dataclass(frozen=True)
class LinearSystem:
    variables: tuple
    constraints: tuple = ()

    def __post_init__(self):
        variables = tuple(self.variables)
        constraints = tuple(self.constraints)
        if len(set(variables)) != len(variables):
            raise LpError("duplicate variable names", "duplicate-variable")
        known = set(variables)
        for con in constraints:
            unknown = set(con.expr.variables) - known
            if unknown:
                raise LpError(f"constraint {con} uses unknown variables {sorted(unknown)}",
                              "unknown-variable")
        object.__setattr__(self, "variables", variables)
        object.__setattr__(self, "constraints", constraints)

    def extended(self, constraints=(), variables=()):
        return LinearSystem(self.variables + tuple(v for v in variables if v not in self.variables),
                            self.constraints + tuple(constraints))

    def contains(self, point):
        return all(con.holds(point) for con in self.constraints)

    @cached_property
    def _rows(self):
        """Inequality form ``A x <= b`` as dense rows."""
        index = {v: k for k, v in enumerate(self.variables)}
        rows, rhs = [], []
        for con in self.constraints:
            row = [Fraction(0)] * len(self.variables)
            for name, coef in con.expr.terms:
                row[index[name]] = coef
            if con.rel in ("<=", "=="):
                rows.append(row)
                rhs.append(con.bound)
            if con.rel in (">=", "=="):
                rows.append([-c for c in row])
                rhs.append(-con.bound)
        return rows, rhs

    @cached_property
    def _transposed(self):
        rows, _ = self._rows
        return [[row[k] for row in rows] for k in range(len(self.variables))]

    def _dense(self, expr):
        index = {v: k for k, v in enumerate(self.variables)}
        dense = [Fraction(0)] * len(self.variables)
        for name, coef in expr.terms:
            if name not in index:
                raise LpError(f"objective uses unknown variable {name!r}", "unknown-variable")
            dense[index[name]] = coef
        return dense

    @cached_property
    def feasible_point(self):
        """Some point of the system, or None when it is empty."""
        _, rhs = self._rows
        status, _, duals = _standard_simplex(self._transposed, [0] * len(self.variables), rhs)
        if status != OPTIMAL:
            return None
        return dict(zip(self.variables, duals))

    def __str__(self):
        head = "vars: " + ", ".join(self.variables)
        return "\n".join([head] + [f"  {con}" for con in self.constraints])


@dataclass(frozen=True)
class LpResult:
    status: str
    value: Fraction = None
    witness: dict = None


def lp_optimize(system, objective, sense="max"):
    """Optimise a linear objective exactly over ``system``."""
    if sense not in ("max", "min"):
        raise LpError(f"unknown sense {sense!r}", "bad-sense")
    c = system._dense(objective)
    if sense == "min":
        c = [-v for v in c]
    _, rhs = system._rows
    status, _, duals = _standard_simplex(system._transposed, c, rhs)
    if status == UNBOUNDED:
        return LpResult(INFEASIBLE)
    if status == INFEASIBLE:
        # dual infeasible: the primal is empty or unbounded
        point = system.feasible_point
        if point is None:
            return LpResult(INFEASIBLE)
        return LpResult(UNBOUNDED, witness=point)
    witness = dict(zip(system.variables, duals))
    return LpResult(OPTIMAL, objective.evaluate(witness), witness)


def is_empty(system):
    return system.feasible_point is None


def project_interval(system, expr):
    """Exact ``[min, max]`` of ``expr`` over the system (empty if infeasible)."""
    if system.feasible_point is None:
        return Interval.empty()
    low = lp_optimize(system, expr, "min")
    high = lp_optimize(system, expr, "max")
    if low.status == UNBOUNDED or high.status == UNBOUNDED:
        raise UnboundedDirection(f"{expr} is unbounded over the system")
    return Interval(low.value, high.value)


# -- simplex core --------------------------------------------------------


def _scaled(values):
    den = lcm(*(v.denominator for v in values))
    return [v.numerator * (den // v.denominator) for v in values], den


def _pivot(table, det, r, s):
    """Fraction-free pivot; every division below is exact."""
    piv = table[r][s]
    prow = table[r]
    for i, row in enumerate(table):
        if i == r:
            continue
        f = row[s]
        if f:
            table[i] = [(x * piv - f * y) // det for x, y in zip(row, prow)]
        elif piv != det:
            table[i] = [x * piv // det for x in row]
    if piv < 0:
        for i, row in enumerate(table):
            table[i] = [-x for x in row]
        piv = -piv
    return piv


def _iterate(table, basis, det, zrow, ncols):
    """Bland's rule until optimal or unbounded."""
    nrows = len(basis)
    z = table[zrow]
    while True:
        enter = next((j for j in range(ncols) if z[j] < 0), None)
        if enter is None:
            return OPTIMAL, det
        leave = None
        for i in range(nrows):
            a = table[i][enter]
            if a <= 0:
                continue
            if leave is None:
                leave = i
                continue
            lhs = table[i][-1] * table[leave][enter]
            rhs = table[leave][-1] * a
            if lhs < rhs or (lhs == rhs and basis[i] < basis[leave]):
                leave = i
        if leave is None:
            return UNBOUNDED, det
        det = _pivot(table, det, leave, enter)
        basis[leave] = enter
        z = table[zrow]


def _standard_simplex(matrix, rhs, cost):
    """Solve ``min cost.y  s.t.  matrix y = rhs, y >= 0``.

    Returns ``(status, y, duals)``.  At optimality the duals ``pi`` satisfy
    ``pi . column_j <= cost_j`` for every column and ``pi . rhs`` equals
    the optimum.
    """
    p, q = len(matrix), len(cost)
    rhs = [as_fraction(v) for v in rhs]
    cost = [as_fraction(v) for v in cost]
    table, factors = [], []
    for i in range(p):
        ints, den = _scaled(list(matrix[i]) + [rhs[i]])
        sign = -1 if rhs[i] < 0 else 1
        row = [sign * v for v in ints[:q]] + [0] * p + [sign * ints[q]]
        row[q + i] = 1
        table.append(row)
        factors.append(sign * den)
    cost_ints, mu = _scaled(cost)
    table.append(cost_ints + [0] * (p + 1))
    table.append([-sum(table[i][j] for i in range(p)) for j in range(q)]
                 + [0] * p + [-sum(table[i][-1] for i in range(p))])
    basis = [q + i for i in range(p)]
    det = 1

    if any(table[-1]):
        _, det = _iterate(table, basis, det, p + 1, q)
        if table[p + 1][-1] != 0:
            return INFEASIBLE, None, None
    table.pop()

    # artificials left in the basis sit at zero; swap them out where possible
    for i in range(p):
        if basis[i] >= q:
            j = next((j for j in range(q) if table[i][j] != 0), None)
            if j is not None:
                det = _pivot(table, det, i, j)
                basis[i] = j

    status, det = _iterate(table, basis, det, p, q)
    if status == UNBOUNDED:
        return UNBOUNDED, None, None
    y = [Fraction(0)] * q
    for i, col in enumerate(basis):
        if col < q:
            y[col] = Fraction(table[i][-1], det)
    z = table[p]
    duals = [Fraction(-z[q + i] * factors[i], det * mu) for i in range(p)]
    return OPTIMAL, y, duals


# -- vertex enumeration --------------------------------------------------


def _rref(rows, width):
    """Reduced row echelon form in place; returns pivot columns."""
    pivots = []
    r = 0
    for col in range(width):
        pick = next((i for i in range(r, len(rows)) if rows[i][col] != 0), None)
        if pick is None:
            continue
        rows[r], rows[pick] = rows[pick], rows[r]
        lead = rows[r][col]
        rows[r] = [v / lead for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
        if r == len(rows):
            break
    return pivots


def _inverse(matrix):
    d = len(matrix)
    rows = [list(matrix[i]) + [Fraction(int(i == j)) for j in range(d)] for i in range(d)]
    if len(_rref(rows, d)) < d:
        return None
    return [row[d:] for row in rows]


def enumerate_vertices(system, max_dim=8):
    """All vertices of the system, by brute force over active sets.

    Equalities are eliminated first; then every choice of ``d`` linearly
    independent hyperplane directions (``d`` the remaining dimension) is
    solved and kept when feasible.  Meant as an oracle for small systems.
    """
    n = len(system.variables)
    if n > max_dim:
        raise LpError(f"vertex enumeration limited to {max_dim} variables, got {n}",
                      "dimension-guard")
    eq_rows, ineq = [], []
    for con in system.constraints:
        dense = system._dense(con.expr)
        if con.rel == "==":
            eq_rows.append(dense + [con.bound])
        elif con.rel == "<=":
            ineq.append((dense, con.bound))
        else:
            ineq.append(([-c for c in dense], -con.bound))

    # affine parametrisation x = origin + sum(z_k * direction_k)
    pivots = _rref(eq_rows, n)
    for row in eq_rows[len(pivots):]:
        if row[n] != 0:
            return []
    origin = [Fraction(0)] * n
    for r, col in enumerate(pivots):
        origin[col] = eq_rows[r][n]
    free = [c for c in range(n) if c not in pivots]
    directions = []
    for f in free:
        vec = [Fraction(0)] * n
        vec[f] = Fraction(1)
        for r, col in enumerate(pivots):
            vec[col] = -eq_rows[r][f]
        directions.append(vec)
    d = len(free)

    def lift(z):
        return [origin[k] + sum((z[j] * directions[j][k] for j in range(d)), Fraction(0))
                for k in range(n)]

    reduced = []
    for a, beta in ineq:
        g = [sum((a[k] * vec[k] for k in range(n)), Fraction(0)) for vec in directions]
        offset = beta - sum((a[k] * origin[k] for k in range(n)), Fraction(0))
        if not any(g):
            if offset < 0:
                return []
            continue
        reduced.append((g, offset))

    def feasible(z):
        return all(sum((gi * zi for gi, zi in zip(g, z)), Fraction(0)) <= off for g, off in reduced)

    if d == 0:
        return [dict(zip(system.variables, origin))]

    # group parallel hyperplanes so each direction set is inverted once
    groups = {}
    for g, off in reduced:
        lead = next(v for v in g if v != 0)
        key = tuple(v / lead for v in g)
        groups.setdefault(key, set()).add(off / lead)
    keys = list(groups)

    found = {}
    for chosen in combinations(keys, d):
        inv = _inverse([list(k) for k in chosen])
        if inv is None:
            continue
        for offsets in product(*(sorted(groups[k]) for k in chosen)):
            z = [sum((inv[i][j] * offsets[j] for j in range(d)), Fraction(0)) for i in range(d)]
            if feasible(z):
                x = tuple(lift(z))
                found.setdefault(x, None)
    return [dict(zip(system.variables, x)) for x in found]
