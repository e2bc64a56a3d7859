"""Exact two-phase simplex over ``fractions.Fraction`` with Bland's rule.

Every answer comes with a certificate that :func:`verify_certificate`
re-checks from scratch against the problem data:

* optimal    -- primal point and dual multipliers with equal objectives,
* unbounded  -- a feasible point and an improving recession ray,
* infeasible -- a Farkas combination of the rows.

Dual sign convention (per original row, for a maximisation problem):
``<=`` rows carry ``y >= 0``, ``>=`` rows carry ``y <= 0`` and
``A^T y >= c``. For minimisation both inequalities flip.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

__all__ = [
    "LE",
    "GE",
    "Constraint",
    "LpProblem",
    "LpCertificate",
    "CertificateError",
    "solve",
    "verify_certificate",
    "format_lp",
    "parse_lp",
    "parse_rational",
    "format_rational",
]

LE = "<="
GE = ">="

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


class CertificateError(RuntimeError):
    """The solver produced a certificate that does not verify."""


def parse_rational(text: str) -> Fraction:
    return Fraction(text.strip())


def format_rational(x: Fraction | int) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class Constraint:
    coefs: tuple[Fraction, ...]
    relation: str
    rhs: Fraction

    def __post_init__(self):
        if self.relation not in (LE, GE):
            raise ValueError(f"relation must be '<=' or '>=', got {self.relation!r}")


@dataclass(frozen=True)
class LpProblem:
    """``max`` (or ``min``) ``objective . x`` subject to the rows, ``x >= 0``."""

    objective: tuple[Fraction, ...]
    constraints: tuple[Constraint, ...]
    maximize: bool = True

    def __post_init__(self):
        if not self.constraints:
            raise ValueError("an LP needs at least one constraint")
        nv = len(self.objective)
        for k, row in enumerate(self.constraints):
            if len(row.coefs) != nv:
                raise ValueError(f"row {k} has {len(row.coefs)} coefficients, expected {nv}")

    @classmethod
    def build(
        cls,
        objective: Iterable,
        rows: Iterable[tuple[Iterable, str, object]],
        maximize: bool = True,
    ) -> "LpProblem":
        obj = tuple(Fraction(c) for c in objective)
        cons = tuple(Constraint(tuple(Fraction(a) for a in coefs), rel, Fraction(rhs)) for coefs, rel, rhs in rows)
        return cls(obj, cons, maximize)

    @property
    def num_vars(self) -> int:
        return len(self.objective)


@dataclass(frozen=True)
class LpCertificate:
    status: str
    value: Fraction | None = None
    primal: tuple[Fraction, ...] | None = None
    dual: tuple[Fraction, ...] | None = None
    ray: tuple[Fraction, ...] | None = None
    farkas: tuple[Fraction, ...] | None = None


def _dot(a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction:
    return sum((x * y for x, y in zip(a, b) if x and y), Fraction(0))


class _Tableau:
    """Dense tableau ``B^-1 [A | S | R] | B^-1 b`` for rows with ``b >= 0``."""

    def __init__(self, problem: LpProblem):
        nv = problem.num_vars
        m = len(problem.constraints)
        self.nv = nv
        self.flipped = []
        rels = []
        rows = []
        rhs = []
        for con in problem.constraints:
            coefs, rel, b = list(con.coefs), con.relation, con.rhs
            flip = b < 0
            if flip:
                coefs = [-a for a in coefs]
                rel = GE if rel == LE else LE
                b = -b
            self.flipped.append(flip)
            rels.append(rel)
            rows.append(coefs)
            rhs.append(b)
        # slack/surplus column nv+i per row, artificials appended for >= rows
        n_art = sum(rel == GE for rel in rels)
        self.ncols = nv + m + n_art
        self.art_start = nv + m
        self.identity_col = []
        self.T: list[list[Fraction]] = []
        self.basis: list[int] = []
        zero = Fraction(0)
        a = self.art_start
        for i, (coefs, rel) in enumerate(zip(rows, rels)):
            row = coefs + [zero] * (m + n_art)
            if rel == LE:
                row[nv + i] = Fraction(1)
                self.basis.append(nv + i)
                self.identity_col.append(nv + i)
            else:
                row[nv + i] = Fraction(-1)
                row[a] = Fraction(1)
                self.basis.append(a)
                self.identity_col.append(a)
                a += 1
            self.T.append(row)
        self.b = rhs
        self.rels = rels

    def pivot(self, r: int, c: int) -> None:
        T, b = self.T, self.b
        prow = T[r]
        inv = 1 / prow[c]
        if inv != 1:
            T[r] = prow = [x * inv if x else x for x in prow]
            b[r] *= inv
        nz = [j for j, x in enumerate(prow) if x]
        br = b[r]
        for i in range(len(T)):
            if i == r:
                continue
            row = T[i]
            f = row[c]
            if f:
                for j in nz:
                    row[j] -= f * prow[j]
                b[i] -= f * br
        self.basis[r] = c

    def reduced_costs(self, cost: Sequence[Fraction]) -> list[Fraction]:
        """``c_j - c_B B^-1 A_j`` for every column (maximisation sense)."""
        red = list(cost)
        for i, row in enumerate(self.T):
            cb = cost[self.basis[i]]
            if cb:
                for j, x in enumerate(row):
                    if x:
                        red[j] -= cb * x
        return red

    def multipliers(self, cost: Sequence[Fraction]) -> list[Fraction]:
        """``c_B B^-1`` read off the identity columns of the start basis."""
        out = []
        for col in self.identity_col:
            out.append(sum((cost[self.basis[i]] * self.T[i][col] for i in range(len(self.T)) if self.T[i][col]), Fraction(0)))
        return out

    def run(self, cost: Sequence[Fraction], allowed: int) -> int | None:
        """Maximise ``cost``; columns ``>= allowed`` never enter.

        Returns ``None`` at optimality or the entering column of an
        unbounded direction.
        """
        red = self.reduced_costs(cost)
        while True:
            enter = next((j for j in range(allowed) if red[j] > 0), None)
            if enter is None:
                return None
            best = None
            leave = None
            for i, row in enumerate(self.T):
                a = row[enter]
                if a > 0:
                    ratio = self.b[i] / a
                    if best is None or ratio < best or (ratio == best and self.basis[i] < self.basis[leave]):
                        best, leave = ratio, i
            if leave is None:
                return enter
            self.pivot(leave, enter)
            # keep the reduced-cost row in step with the tableau
            f = red[enter]
            for j, x in enumerate(self.T[leave]):
                if x:
                    red[j] -= f * x

    def point(self) -> list[Fraction]:
        x = [Fraction(0)] * self.ncols
        for i, j in enumerate(self.basis):
            x[j] = self.b[i]
        return x


def solve(problem: LpProblem) -> LpCertificate:
    """Solve exactly; the returned certificate has already been verified.

    Raises :class:`CertificateError` if verification fails, which would
    indicate a solver bug rather than a property of the input.
    """
    tab = _Tableau(problem)
    nv, ncols, art = tab.nv, tab.ncols, tab.art_start
    zero = Fraction(0)

    def to_original(mult: list[Fraction]) -> tuple[Fraction, ...]:
        return tuple(-y if flip else y for y, flip in zip(mult, tab.flipped))

    if art < ncols:
        phase1 = [zero] * art + [Fraction(-1)] * (ncols - art)
        tab.run(phase1, ncols)
        if _dot(phase1, tab.point()) < 0:
            farkas = to_original(tab.multipliers(phase1))
            cert = LpCertificate(INFEASIBLE, farkas=farkas)
            return _checked(problem, cert)
        for i in range(len(tab.T)):
            if tab.basis[i] >= art:
                col = next((j for j in range(art) if tab.T[i][j]), None)
                if col is not None:
                    tab.pivot(i, col)

    cost = [c if problem.maximize else -c for c in problem.objective] + [zero] * (ncols - nv)
    enter = tab.run(cost, art)
    x = tab.point()
    primal = tuple(x[:nv])
    if enter is not None:
        d = [zero] * ncols
        d[enter] = Fraction(1)
        for i, j in enumerate(tab.basis):
            d[j] = -tab.T[i][enter]
        cert = LpCertificate(UNBOUNDED, primal=primal, ray=tuple(d[:nv]))
        return _checked(problem, cert)
    dual = to_original(tab.multipliers(cost))
    if not problem.maximize:
        dual = tuple(-y for y in dual)
    value = _dot(problem.objective, primal)
    return _checked(problem, LpCertificate(OPTIMAL, value=value, primal=primal, dual=dual))


def _checked(problem: LpProblem, cert: LpCertificate) -> LpCertificate:
    if not verify_certificate(problem, cert):
        raise CertificateError(f"simplex produced an invalid {cert.status} certificate")
    return cert


def _primal_feasible(problem: LpProblem, x: Sequence[Fraction]) -> bool:
    if len(x) != problem.num_vars or any(v < 0 for v in x):
        return False
    for con in problem.constraints:
        lhs = _dot(con.coefs, x)
        if (con.relation == LE and lhs > con.rhs) or (con.relation == GE and lhs < con.rhs):
            return False
    return True


def _combination(problem: LpProblem, y: Sequence[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * problem.num_vars
    for yi, con in zip(y, problem.constraints):
        if yi:
            for j, a in enumerate(con.coefs):
                if a:
                    out[j] += yi * a
    return out


def _max_signs_ok(problem: LpProblem, y: Sequence[Fraction]) -> bool:
    return all((yi >= 0) if con.relation == LE else (yi <= 0) for yi, con in zip(y, problem.constraints))


def verify_certificate(problem: LpProblem, cert: LpCertificate) -> bool:
    """Check a certificate against the problem using only exact arithmetic."""
    m = len(problem.constraints)
    if cert.status == OPTIMAL:
        if cert.primal is None or cert.dual is None or cert.value is None or len(cert.dual) != m:
            return False
        x, y = cert.primal, cert.dual
        if not _primal_feasible(problem, x):
            return False
        ymax = y if problem.maximize else [-v for v in y]
        cmax = problem.objective if problem.maximize else [-c for c in problem.objective]
        if not _max_signs_ok(problem, ymax):
            return False
        if any(a < c for a, c in zip(_combination(problem, ymax), cmax)):
            return False
        primal_value = _dot(problem.objective, x)
        dual_value = _dot([con.rhs for con in problem.constraints], y)
        return primal_value == dual_value == cert.value
    if cert.status == UNBOUNDED:
        if cert.primal is None or cert.ray is None:
            return False
        x, d = cert.primal, cert.ray
        if not _primal_feasible(problem, x) or len(d) != problem.num_vars or any(v < 0 for v in d):
            return False
        for con in problem.constraints:
            ad = _dot(con.coefs, d)
            if (con.relation == LE and ad > 0) or (con.relation == GE and ad < 0):
                return False
        gain = _dot(problem.objective, d)
        return gain > 0 if problem.maximize else gain < 0
    if cert.status == INFEASIBLE:
        y = cert.farkas
        if y is None or len(y) != m or not _max_signs_ok(problem, y):
            return False
        if any(a < 0 for a in _combination(problem, y)):
            return False
        return _dot([con.rhs for con in problem.constraints], y) < 0
    return False


# text format ----------------------------------------------------------


def format_lp(problem: LpProblem) -> str:
    """``max|min c...`` then one ``coef... REL rhs`` line per row."""
    lines = [("max " if problem.maximize else "min ") + " ".join(map(format_rational, problem.objective))]
    for con in problem.constraints:
        lines.append(" ".join(map(format_rational, con.coefs)) + f" {con.relation} {format_rational(con.rhs)}")
    return "\n".join(lines) + "\n"


def parse_lp(text: str) -> LpProblem:
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise ValueError("empty LP text")
    head = lines[0].split()
    if head[0] not in ("max", "min"):
        raise ValueError("first line must start with 'max' or 'min'")
    objective = [parse_rational(t) for t in head[1:]]
    rows = []
    for k, ln in enumerate(lines[1:], 2):
        parts = ln.split()
        if len(parts) < 2 or parts[-2] not in (LE, GE):
            raise ValueError(f"line {k}: expected 'coef... <=|>= rhs'")
        rows.append(([parse_rational(t) for t in parts[:-2]], parts[-2], parse_rational(parts[-1])))
    return LpProblem.build(objective, rows, maximize=head[0] == "max")
