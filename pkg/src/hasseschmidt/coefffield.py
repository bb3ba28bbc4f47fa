"""Components as linear maps on truncated quotients, and their joint kernels.

The completion k[[X]] is only ever touched through its finite quotients
k[X]/(X)^N.  A weight-i component induces a k-linear map from the order-N
quotient to the order-(N-i) quotient; stacking such matrices and
computing an exact nullspace yields the elements killed by every chosen
component.  With a family whose degree-1 parts form a basis, the joint
kernel of all components of all weights 1..N-1 is one-dimensional (the
constants): a coefficient field seen at level N.  Keeping only the
weight-1 components leaves a strictly larger kernel in positive
characteristic (the p-th powers survive), which is the phenomenon this
module makes checkable.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ComponentOutOfRange, IncompatibleAmbient, NotABasis, PrecisionExhausted
from .fields import FieldSpec
from .series import Series, grlex_key
from .derivations import HSDerivation
from .decompose import _det, degree1_matrix


class QuotientBasis:
    """The monomials of total degree < N in graded-lex order."""

    __slots__ = ("nvars", "order", "monomials", "index")

    def __init__(self, nvars: int, order: int):
        if order < 0:
            raise ValueError("order must be >= 0")
        self.nvars = nvars
        self.order = order
        monomials = [()]
        for _ in range(nvars):
            monomials = [e + (k,) for e in monomials for k in range(order)]
        monomials = [e for e in monomials if sum(e) < order]
        monomials.sort(key=grlex_key)
        self.monomials = tuple(monomials)
        self.index = {e: i for i, e in enumerate(monomials)}

    def __len__(self):
        return len(self.monomials)

    def __eq__(self, other):
        if not isinstance(other, QuotientBasis):
            return NotImplemented
        return self.nvars == other.nvars and self.order == other.order

    def coords(self, f: Series) -> list:
        """Coordinates of f modulo (X)^order in this basis."""
        if f.nvars != self.nvars:
            raise IncompatibleAmbient(f"series has {f.nvars} variables, basis has {self.nvars}")
        zero = f.field.zero()
        out = [zero] * len(self.monomials)
        for e, c in f.terms.items():
            i = self.index.get(e)
            if i is not None:
                out[i] = c
        return out

    def from_coords(self, coords, field: FieldSpec, precision=None) -> Series:
        terms = {e: c for e, c in zip(self.monomials, coords) if c}
        return Series(self.nvars, field, terms, precision)


@dataclass
class ComponentMatrix:
    """Matrix of a weight-i component from the order-N quotient to the
    order-(N-i) quotient; rows[r][c] over the shared field."""

    rows: list
    source: QuotientBasis
    target: QuotientBasis
    weight: int
    field: FieldSpec
    label: str = ""

    def apply_coords(self, coords):
        field = self.field
        out = []
        for row in self.rows:
            acc = field.zero()
            for a, x in zip(row, coords):
                if a and x:
                    acc = field.add(acc, field.mul(a, x))
            out.append(acc)
        return out


def component_matrix(D: HSDerivation, i: int, order: int) -> ComponentMatrix:
    """Materialize D_i as a matrix k[X]/(X)^order -> k[X]/(X)^(order-i).

    Column for the monomial X^beta holds the coordinates of D_i(X^beta)
    truncated below degree order - i.
    """
    if i > D.length or i < 0:
        raise ComponentOutOfRange(f"component {i} of a length-{D.length} derivation")
    if i >= order:
        raise PrecisionExhausted(f"weight {i} leaves nothing of a degree-{order} quotient")
    source = QuotientBasis(D.nvars, order)
    target = QuotientBasis(D.nvars, order - i)
    field = D.field
    columns = []
    for beta in source.monomials:
        value = D.apply_component(i, Series.monomial(D.nvars, field, beta))
        columns.append(target.coords(value.truncate(order - i)))
    rows = [[columns[c][r] for c in range(len(source))] for r in range(len(target))]
    label = f"{D.name or 'D'}_{i}"
    return ComponentMatrix(rows, source, target, i, field, label)


def nullspace(rows, ncols: int, field: FieldSpec) -> list:
    """Basis of the right nullspace by Gauss-Jordan elimination.

    Returns the canonical vectors obtained from the reduced row echelon
    form: one per free column, with a 1 in that column.
    """
    rows = [list(r) for r in rows]
    nrows = len(rows)
    pivot_cols = []
    r = 0
    for c in range(ncols):
        pivot = None
        for rr in range(r, nrows):
            if rows[rr][c]:
                pivot = rr
                break
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = field.inv(rows[r][c])
        rows[r] = [field.mul(inv, x) for x in rows[r]]
        for rr in range(nrows):
            if rr != r and rows[rr][c]:
                factor = rows[rr][c]
                rows[rr] = [
                    field.sub(x, field.mul(factor, y)) for x, y in zip(rows[rr], rows[r])
                ]
        pivot_cols.append(c)
        r += 1
        if r == nrows:
            break
    free_cols = [c for c in range(ncols) if c not in pivot_cols]
    basis = []
    for fc in free_cols:
        v = [field.zero()] * ncols
        v[fc] = field.one()
        for rr, pc in enumerate(pivot_cols):
            v[pc] = field.neg(rows[rr][fc])
        basis.append(v)
    return basis


@dataclass
class KernelReport:
    dimension: int
    basis: list  # list of Series
    operators_used: str
    order: int

    def summary(self) -> str:
        members = ", ".join(str(b) for b in self.basis)
        return (
            f"kernel at order {self.order}: dimension {self.dimension} "
            f"[{members}] ({self.operators_used})"
        )


def joint_kernel(mats, source: QuotientBasis | None = None, field: FieldSpec | None = None) -> KernelReport:
    """Basis of the intersection of the kernels of the given matrices.

    All matrices must share the source basis.  An empty list returns the
    whole quotient (source and field must then be supplied).
    """
    mats = list(mats)
    if mats:
        source = mats[0].source
        field = mats[0].field
        for mat in mats[1:]:
            if mat.source != source or mat.field != field:
                raise IncompatibleAmbient("kernel matrices disagree on source basis or field")
    elif source is None or field is None:
        raise ValueError("an empty matrix list needs explicit source basis and field")
    stacked = [row for mat in mats for row in mat.rows]
    vectors = nullspace(stacked, len(source), field)
    basis = [source.from_coords(v, field) for v in vectors]
    used = ", ".join(mat.label for mat in mats) if mats else "none"
    return KernelReport(len(basis), basis, used, source.order)


def coefficient_field(family, order: int, degree1_only: bool = False) -> KernelReport:
    """Joint kernel of the family's components on the order-N quotient.

    Uses every weight 1..N-1 of every member (each member must be long
    enough); with ``degree1_only`` only the weight-1 components enter,
    which in characteristic p leaves the p-th powers in the kernel.  The
    family's degree-1 parts must form a basis.
    """
    family = list(family)
    if not degree1_matrix(family).det_unit:
        raise NotABasis("degree-1 values have non-unit determinant")
    max_weight = 1 if degree1_only else order - 1
    for D in family:
        if D.length < max_weight:
            raise ComponentOutOfRange(
                f"derivation of length {D.length} has no component {max_weight}"
            )
    mats = [
        component_matrix(D, i, order)
        for D in family
        for i in range(1, max_weight + 1)
    ]
    report = joint_kernel(mats)
    which = "weight-1 components only" if degree1_only else f"all weights 1..{max_weight}"
    report.operators_used = f"{which} of {len(family)} derivation(s)"
    return report


def nomura_unit_test(family, points) -> bool:
    """Whether det(D^d_1(a_j)) has a nonzero constant term.

    ``points`` supplies the elements a_j; with a_j = X_j this is the unit
    test for the degree-1 matrix itself.
    """
    family = list(family)
    points = list(points)
    n = family[0].nvars
    if len(points) != n:
        raise IncompatibleAmbient(f"expected {n} points, got {len(points)}")
    entries = [
        [family[d].apply_component(1, points[j]) for d in range(n)] for j in range(n)
    ]
    return bool(_det(entries).constant_term())
