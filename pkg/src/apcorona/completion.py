"""Completing an n x (n-1) matrix to determinant 1.

The maximal minors (signed so that appending a last column c gives
``det = sum_i c_i * m_i`` by Laplace expansion) reduce the completion
problem to a scalar Bezout identity on the minors: any partners g with
``sum g_i m_i = 1`` form the missing column.  The corona condition on the
minors is exactly the solvability hypothesis, and the determinant residual
of the completed matrix *is* the Bezout residual, identically.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .algebra import APPolynomial
from .corona import (
    BezoutSolution,
    CoronaCertificate,
    CoronaConfig,
    certify_infimum,
    solve_bezout,
)
from .errors import (
    CoronaConditionError,
    InsufficientDegreeError,
    ShapeError,
    SpectrumViolationError,
)
from .semigroup import Semigroup


class APMatrix:
    """Rectangular matrix with almost periodic polynomial entries over a
    shared semigroup."""

    def __init__(self, entries: Sequence[Sequence[APPolynomial]],
                 sg: Semigroup, validate: bool = True):
        if not entries or not entries[0]:
            raise ShapeError("empty matrix")
        self.rows = len(entries)
        self.cols = len(entries[0])
        self.semigroup = sg
        self.basis = sg.basis
        grid = []
        for row in entries:
            if len(row) != self.cols:
                raise ShapeError("ragged rows")
            out = []
            for e in row:
                if not isinstance(e, APPolynomial):
                    e = APPolynomial.constant(sg.basis, e)
                if e.basis is not sg.basis:
                    raise ShapeError("entry over a different basis")
                out.append(e)
            grid.append(tuple(out))
        self.entries: tuple[tuple[APPolynomial, ...], ...] = tuple(grid)
        if validate:
            bad = self.spectrum_violation()
            if bad is not None:
                i, j, freq = bad
                raise SpectrumViolationError(
                    f"entry ({i},{j}) leaves the semigroup at {freq.as_text()}",
                    violation=freq)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def spectrum_violation(self):
        for i, row in enumerate(self.entries):
            for j, e in enumerate(row):
                check = self.semigroup.validate_spectrum(e)
                if not check.contained:
                    return i, j, check.violation
        return None

    def drop_row(self, i: int) -> "APMatrix":
        rows = [r for k, r in enumerate(self.entries) if k != i]
        return APMatrix(rows, self.semigroup, validate=False)

    def append_column(self, column: Sequence[APPolynomial]) -> "APMatrix":
        if len(column) != self.rows:
            raise ShapeError("column length mismatch")
        rows = [list(r) + [c] for r, c in zip(self.entries, column)]
        return APMatrix(rows, self.semigroup, validate=False)

    def determinant(self) -> APPolynomial:
        """Exact cofactor expansion along the first row; fine for the
        desk-scale orders this module targets."""
        if self.rows != self.cols:
            raise ShapeError("determinant of a non-square matrix")
        return _det(self.entries, self.basis)


def _det(rows, basis) -> APPolynomial:
    n = len(rows)
    if n == 1:
        return rows[0][0]
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    total = APPolynomial.zero(basis)
    for j, head in enumerate(rows[0]):
        if head.is_zero:
            continue
        minor = [tuple(r[k] for k in range(n) if k != j) for r in rows[1:]]
        cofactor = _det(minor, basis)
        term = head * cofactor
        total = total + term if j % 2 == 0 else total - term
    return total


def maximal_minors(a: APMatrix) -> list[APPolynomial]:
    """Signed order-(n-1) minors: ``m_i = (-1)**(i+n) det(A without row i)``,
    so appending a column c yields ``det = sum_i c_i m_i``."""
    if a.cols != a.rows - 1:
        raise ShapeError(
            f"need shape n x (n-1), got {a.rows} x {a.cols}")
    n = a.rows
    minors = []
    for i in range(n):
        d = a.drop_row(i).determinant()
        # cofactor sign (-1)**(i+n) with 1-indexed rows
        if (i + 1 + n) % 2 == 1:
            d = -d
        minors.append(d)
    return minors


@dataclass(frozen=True)
class CompletionResult:
    completed: APMatrix
    bezout: BezoutSolution
    certificate: CoronaCertificate
    det_residual: float


@dataclass(frozen=True)
class CompletionReport:
    original_columns_intact: bool
    determinant_residual: float
    determinant_ok: bool
    spectra_ok: bool
    spectrum_violation: str | None
    tolerance: float

    @property
    def passed(self) -> bool:
        return (self.original_columns_intact and self.determinant_ok
                and self.spectra_ok)


def complete_matrix(a: APMatrix, tol: float = 1e-10,
                    degree_bound: int | None = None,
                    config: CoronaConfig | None = None,
                    degree_cap: int = 512) -> CompletionResult:
    """Append a last column making the determinant 1 up to ``tol``.

    Requires shape n x (n-1) and a positive certified corona bound on the
    maximal minors (the solvability hypothesis).  With no explicit degree
    bound, the Bezout truncation grows geometrically until the solver
    succeeds or hits ``degree_cap``.
    """
    minors = maximal_minors(a)
    cert = certify_infimum(minors, a.semigroup, config)
    if cert.infimum_zero or cert.lower_bound <= 0.0:
        raise CoronaConditionError(
            "maximal minors fail the corona condition "
            f"(certified lower bound {cert.lower_bound:.3g}, mode {cert.mode})")
    degrees = [degree_bound] if degree_bound is not None else \
        [d for d in (4, 8, 16, 32, 64, 128, 256, 512) if d <= degree_cap]
    last_error: InsufficientDegreeError | None = None
    for degree in degrees:
        try:
            bezout = solve_bezout(minors, a.semigroup, degree, tol)
            break
        except InsufficientDegreeError as exc:
            last_error = exc
    else:
        raise last_error or InsufficientDegreeError("no degree attempted")
    completed = a.append_column(list(bezout.partners))
    det_residual = (completed.determinant() - 1).l1_norm()
    return CompletionResult(completed, bezout, cert, det_residual)


def verify_completion(a: APMatrix, completed: APMatrix | CompletionResult,
                      tol: float = 1e-10) -> CompletionReport:
    """Independent check of a claimed completion: original columns must be
    bit-identical, the recomputed symbolic determinant within ``tol`` of 1,
    and every entry spectrum-valid."""
    if isinstance(completed, CompletionResult):
        completed = completed.completed
    if completed.rows != a.rows or completed.cols != a.rows:
        raise ShapeError("completed matrix must be square of matching size")
    intact = all(
        completed[i, j] == a[i, j]
        for i in range(a.rows) for j in range(a.cols))
    residual = (completed.determinant() - 1).l1_norm()
    bad = completed.spectrum_violation()
    return CompletionReport(
        original_columns_intact=intact,
        determinant_residual=residual,
        determinant_ok=residual <= tol,
        spectra_ok=bad is None,
        spectrum_violation=(
            None if bad is None else
            f"entry ({bad[0]},{bad[1]}) at frequency {bad[2].as_text()}"),
        tolerance=tol,
    )
