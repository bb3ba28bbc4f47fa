"""Expressing a Hasse-Schmidt derivation through a generating family.

Given a family D^1, .., D^n whose degree-1 parts form a basis of the
derivation module (equivalently: the matrix of their values on the
variables has unit determinant), every Hasse-Schmidt derivation of the
same length is reproduced by a unique coefficient table, computed level
by level: at level N the target component minus the already-determined
composite terms is again an ordinary derivation (the residual), and its
coordinates in the degree-1 basis fill row N of the table.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ComponentOutOfRange, IncompatibleAmbient, NotABasis, PrecisionExhausted
from .series import Series, min_prec
from .derivations import HSDerivation, compose_multi
from .formula import CoeffTable, apply_table, weighted_terms


@dataclass
class Degree1Matrix:
    """The values D^d_1(X_j) as a matrix: entries[j][d], with determinant."""

    entries: list  # entries[j][d] : Series
    det: Series
    det_unit: bool


def _det(rows) -> Series:
    """Exact determinant by Laplace expansion (small n only)."""
    n = len(rows)
    if n == 1:
        return rows[0][0]
    first = rows[0][0]
    out = Series.zero(first.nvars, first.field)
    for col in range(n):
        entry = rows[0][col]
        if entry.is_zero():
            continue
        minor = [[r[c] for c in range(n) if c != col] for r in rows[1:]]
        cofactor = entry * _det(minor)
        out = out + (cofactor if col % 2 == 0 else -cofactor)
    return out


def degree1_matrix(family) -> Degree1Matrix:
    """Evaluate every member's degree-1 component on every variable."""
    family = list(family)
    n = family[0].nvars
    field = family[0].field
    entries = [
        [family[d].apply_component(1, Series.variable(n, field, j)) for d in range(n)]
        for j in range(n)
    ]
    det = _det(entries)
    return Degree1Matrix(entries, det, bool(det.constant_term()))


def residual(target: HSDerivation, family, table: CoeffTable, level: int, f: Series) -> Series:
    """The level-N residual applied to f: the target component minus every
    composite term with at least two factors.

    The single-factor terms are excluded because their coefficients are
    exactly the unknowns of level N.  When the table already reproduces
    the target below N, this map is an ordinary derivation.
    """
    if level < 1 or level > target.length:
        raise ComponentOutOfRange(f"level {level} outside 1..{target.length}")
    if table.levels < level - 1:
        raise ValueError(f"table has {table.levels} levels, need {level - 1}")
    out = target.apply_component(level, f)
    family = list(family)
    for coeff, mu in weighted_terms(table, level, min_parts=2):
        out = out - coeff * compose_multi(family, mu, f)
    return out


def solve_derivation_coords(values, matrix: Degree1Matrix, out_precision: int) -> list:
    """Coordinates (C_d) with values[j] = sum_d C_d * entries[j][d].

    Solved by Cramer's rule.  When the determinant is a nonzero constant
    the answer is exact; otherwise the determinant is inverted as a
    series and the coordinates are trusted to out_precision.
    """
    if not matrix.det_unit:
        raise NotABasis("degree-1 values have non-unit determinant")
    n = len(matrix.entries)
    values = list(values)
    if len(values) != n:
        raise ValueError(f"expected {n} values, got {len(values)}")
    det = matrix.det
    if det.degree() <= 0:
        det_inv = Series.constant(det.nvars, det.field, det.field.inv(det.constant_term()))
    else:
        det_inv = det.inverse(out_precision)
    coords = []
    for d in range(n):
        replaced = [
            [values[j] if c == d else matrix.entries[j][c] for c in range(n)]
            for j in range(n)
        ]
        coords.append(_det(replaced) * det_inv)
    return coords


@dataclass
class Witness:
    """A reconstruction failure: weight, monomial exponent, both sides."""

    i: int
    beta: tuple
    lhs: Series
    rhs: Series


@dataclass
class VerificationReport:
    passed: bool
    verified_to_degree: int
    max_degree: int
    witness: Witness | None

    def summary(self) -> str:
        if self.passed:
            return f"reconstruction: pass on all monomials of degree <= {self.max_degree}"
        w = self.witness
        return (
            f"reconstruction: FAIL at weight {w.i} on X^{w.beta}: "
            f"target gives {w.lhs}, table gives {w.rhs}"
        )


@dataclass
class DecompositionResult:
    table: CoeffTable
    verified_to_degree: int
    basis_order: list
    witness: Witness | None = None

    @property
    def passed(self) -> bool:
        return self.witness is None


def _monomials_up_to(nvars: int, max_degree: int):
    out = [()]
    for _ in range(nvars):
        out = [e + (k,) for e in out for k in range(max_degree + 1)]
    out = [e for e in out if sum(e) <= max_degree]
    out.sort(key=lambda e: (sum(e), tuple(-x for x in e)))
    return out


def _agree_to_trusted(a: Series, b: Series) -> bool:
    p = min_prec(a.precision, b.precision)
    return a.truncate(p) == b.truncate(p)


def verify_decomposition(
    target: HSDerivation, family, table: CoeffTable, max_degree: int, dmu_cache=None
) -> VerificationReport:
    """Compare the target's components against the table reconstruction on
    every monomial of total degree <= max_degree, for every weight.

    Comparison happens at the weaker of the two precisions.  Reports the
    largest degree below the first failure, with a witness.
    """
    family = list(family)
    n, field = target.nvars, target.field
    verified = -1
    for degree in range(max_degree + 1):
        for beta in _monomials_up_to(n, degree):
            if sum(beta) != degree:
                continue
            f = Series.monomial(n, field, beta)
            for i in range(1, target.length + 1):
                lhs = target.apply_component(i, f)
                rhs = apply_table(table, family, i, f, dmu_cache=dmu_cache)
                if not _agree_to_trusted(lhs, rhs):
                    return VerificationReport(False, verified, max_degree, Witness(i, beta, lhs, rhs))
        verified = degree
    return VerificationReport(True, verified, max_degree, None)


def decompose(
    target: HSDerivation, family, out_precision: int, verify_degree: int = 6
) -> DecompositionResult:
    """Compute the coefficient table expressing target through the family.

    Proceeds level by level:  the residual at level N, evaluated on the
    variables, is solved against the degree-1 matrix; its coordinates
    are row N.  The filled table is then checked by reconstruction up to
    verify_degree.  The family's degree-1 parts must form a basis
    (NotABasis otherwise) and out_precision must exceed the length
    (PrecisionExhausted otherwise); the result is unique, hence
    deterministic.
    """
    family = list(family)
    n, field, m = target.nvars, target.field, target.length
    if len(family) != n:
        raise NotABasis(f"need exactly {n} derivations for {n} variables, got {len(family)}")
    for D in family:
        if D.nvars != n or D.field != field or D.length != m:
            raise IncompatibleAmbient(
                "family members must share the target's ambient, field and length"
            )
    if out_precision - m <= 0:
        raise PrecisionExhausted(
            f"out_precision {out_precision} leaves no trusted digits after {m} levels"
        )
    matrix = degree1_matrix(family)
    if not matrix.det_unit:
        raise NotABasis("degree-1 values have non-unit determinant")
    variables = [Series.variable(n, field, j) for j in range(n)]
    table = CoeffTable.empty(n, field)
    for level in range(1, m + 1):
        values = [residual(target, family, table, level, x) for x in variables]
        row = solve_derivation_coords(values, matrix, out_precision)
        table = table.extended(row)
    report = verify_decomposition(target, family, table, verify_degree)
    names = [D.name or f"D{d + 1}" for d, D in enumerate(family)]
    return DecompositionResult(table, report.verified_to_degree, names, report.witness)
