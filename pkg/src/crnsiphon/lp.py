"""Exact rational linear-program feasibility with verified outcomes.

The only solver exposed is phase-one simplex over Fractions with Bland's
anti-cycling rule, so every run terminates and every answer is exact.  A
feasible system returns a basic feasible point; an infeasible one returns
a Farkas certificate: multipliers that combine the equality rows into a
linear form which is zero on free variables, non-positive on the
variables constrained to be non-negative, yet has a positive right-hand
side.  Both kinds of answer are re-verified before being returned.

Systems are stated as ``A x = b`` plus per-variable domains: each variable
is free, constrained ``>= 0``, or pinned to ``0`` (pinning dominates).  An
optional extra row requires a designated linear form to equal 1, which is
how strict-positivity questions are asked (scale invariance turns
"exists x with f(x) > 0" into "exists x with f(x) = 1").
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from crnsiphon.linalg import RationalMatrix, dot, row_reduce

__all__ = [
    "LinearSystem",
    "FeasibilityResult",
    "feasible",
    "affine_dim",
    "verify_witness",
    "verify_certificate",
]

Vec = tuple[Fraction, ...]


def _frac_row(row: Sequence) -> Vec:
    return tuple(x if isinstance(x, Fraction) else Fraction(x) for x in row)


@dataclass(frozen=True)
class LinearSystem:
    num_vars: int
    eq_coeffs: tuple[Vec, ...]
    eq_rhs: Vec
    nonneg: frozenset[int]
    zero: frozenset[int]
    normalization: Vec | None = None  # extra row: normalization . x == 1

    def __post_init__(self):
        if len(self.eq_coeffs) != len(self.eq_rhs):
            raise ValueError("row/rhs count mismatch")
        for row in self.eq_coeffs:
            if len(row) != self.num_vars:
                raise ValueError("row length does not match num_vars")
        if self.normalization is not None and len(self.normalization) != self.num_vars:
            raise ValueError("normalization length does not match num_vars")
        for i in self.nonneg | self.zero:
            if not 0 <= i < self.num_vars:
                raise ValueError("variable index out of range")

    @classmethod
    def build(
        cls,
        num_vars: int,
        eq_rows: Sequence[tuple[Sequence, object]] = (),
        nonneg: Sequence[int] = (),
        zero: Sequence[int] = (),
        normalization: Sequence | None = None,
    ) -> "LinearSystem":
        coeffs = tuple(_frac_row(row) for row, _ in eq_rows)
        rhs = tuple(Fraction(b) for _, b in eq_rows)
        norm = _frac_row(normalization) if normalization is not None else None
        return cls(num_vars, coeffs, rhs, frozenset(nonneg), frozenset(zero), norm)

    def all_rows(self) -> tuple[tuple[Vec, ...], Vec]:
        """Equality rows with the normalization row (rhs 1) folded in last."""
        coeffs = self.eq_coeffs
        rhs = self.eq_rhs
        if self.normalization is not None:
            coeffs = coeffs + (self.normalization,)
            rhs = rhs + (Fraction(1),)
        return coeffs, rhs


@dataclass(frozen=True)
class FeasibilityResult:
    feasible: bool
    witness: Vec | None = None
    certificate: Vec | None = None  # one multiplier per row (normalization last)

    @property
    def status(self) -> str:
        return "Feasible" if self.feasible else "Infeasible"


def verify_witness(system: LinearSystem, witness: Sequence[Fraction]) -> bool:
    if len(witness) != system.num_vars:
        return False
    coeffs, rhs = system.all_rows()
    for row, b in zip(coeffs, rhs):
        if dot(row, witness) != b:
            return False
    for i in range(system.num_vars):
        if i in system.zero:
            if witness[i] != 0:
                return False
        elif i in system.nonneg and witness[i] < 0:
            return False
    return True


def verify_certificate(system: LinearSystem, certificate: Sequence[Fraction]) -> bool:
    """Exact check that the multipliers prove infeasibility."""
    coeffs, rhs = system.all_rows()
    if len(certificate) != len(coeffs):
        return False
    if dot(certificate, rhs) <= 0:
        return False
    for j in range(system.num_vars):
        if j in system.zero:
            continue
        combined = sum((certificate[i] * coeffs[i][j] for i in range(len(coeffs))), Fraction(0))
        if j in system.nonneg:
            if combined > 0:
                return False
        elif combined != 0:
            return False
    return True


def feasible(system: LinearSystem) -> FeasibilityResult:
    """Decide feasibility; the returned witness/certificate re-verifies."""
    coeffs, rhs = system.all_rows()
    m = len(coeffs)

    # Internal columns: one per non-negative variable, a split pair per
    # free variable; pinned variables are dropped entirely.
    col_map: list[tuple[int, int]] = []  # (original var, sign)
    for j in range(system.num_vars):
        if j in system.zero:
            continue
        col_map.append((j, 1))
        if j not in system.nonneg:
            col_map.append((j, -1))
    k = len(col_map)

    # Tableau rows with rhs made non-negative; remember flips so the
    # certificate can be mapped back to the original row orientation.
    tab: list[list[Fraction]] = []
    flips: list[int] = []
    for i in range(m):
        sign = -1 if rhs[i] < 0 else 1
        row = [sign * coeffs[i][v] * s for v, s in col_map]
        row.extend(Fraction(1) if t == i else Fraction(0) for t in range(m))
        row.append(sign * rhs[i])
        tab.append(row)
        flips.append(sign)

    # Phase-one objective: minimize the sum of the artificial variables.
    ncols = k + m
    obj = [Fraction(0)] * (ncols + 1)
    for j in range(ncols):
        obj[j] = (Fraction(1) if j >= k else Fraction(0)) - sum(
            (tab[i][j] for i in range(m)), Fraction(0)
        )
    obj[ncols] = -sum((tab[i][ncols] for i in range(m)), Fraction(0))

    basis = list(range(k, k + m))
    while True:
        enter = next((j for j in range(ncols) if obj[j] < 0), None)
        if enter is None:
            break
        leave_row = None
        best = None
        for i in range(m):
            a = tab[i][enter]
            if a > 0:
                ratio = tab[i][ncols] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave_row]):
                    best = ratio
                    leave_row = i
        if leave_row is None:
            raise AssertionError("phase-one objective is bounded; no leaving row found")
        piv = tab[leave_row][enter]
        tab[leave_row] = [x / piv for x in tab[leave_row]]
        prow = tab[leave_row]
        for i in range(m):
            if i != leave_row and tab[i][enter] != 0:
                f = tab[i][enter]
                tab[i] = [x - f * p for x, p in zip(tab[i], prow)]
        if obj[enter] != 0:
            f = obj[enter]
            obj = [x - f * p for x, p in zip(obj, prow)]
        basis[leave_row] = enter

    residual = sum((tab[i][ncols] for i in range(m) if basis[i] >= k), Fraction(0))

    if residual == 0:
        x = [Fraction(0)] * system.num_vars
        for i in range(m):
            if basis[i] < k:
                v, s = col_map[basis[i]]
                x[v] += s * tab[i][ncols]
        witness = tuple(x)
        if not verify_witness(system, witness):
            raise AssertionError("internal error: witness failed exact re-verification")
        return FeasibilityResult(True, witness=witness)

    # Multiplier of internal row i is 1 - (reduced cost of artificial i);
    # undo the rhs sign flips to express it over the original rows.
    cert = tuple(flips[i] * (Fraction(1) - obj[k + i]) for i in range(m))
    if not verify_certificate(system, cert):
        raise AssertionError("internal error: certificate failed exact re-verification")
    return FeasibilityResult(False, certificate=cert)


def _positivity_probe(system: LinearSystem, var: int) -> LinearSystem:
    """System deciding whether `var` takes a positive value somewhere on the
    (nonempty) feasible set: homogenize with a ray variable t >= 0 and
    normalize var = 1."""
    coeffs, rhs = system.all_rows()
    n = system.num_vars
    rows = [(row + (-b,), Fraction(0)) for row, b in zip(coeffs, rhs)]
    norm = tuple(Fraction(1) if j == var else Fraction(0) for j in range(n)) + (Fraction(0),)
    return LinearSystem.build(
        n + 1,
        eq_rows=rows,
        nonneg=tuple(system.nonneg) + (n,),
        zero=tuple(system.zero),
        normalization=norm,
    )


def affine_dim(system: LinearSystem) -> int | None:
    """Dimension of the affine hull of the feasible set, or None if empty.

    Sign constraints that hold with equality across the whole set are
    detected one by one with a positivity probe, then the dimension is a
    rank computation over the equality rows plus those implicit pins.
    """
    if not feasible(system).feasible:
        return None
    n = system.num_vars
    pinned = set(system.zero)
    for j in sorted(system.nonneg - system.zero):
        if not feasible(_positivity_probe(system, j)).feasible:
            pinned.add(j)
    coeffs, _ = system.all_rows()
    rows = [list(r) for r in coeffs]
    for j in sorted(pinned):
        unit = [Fraction(0)] * n
        unit[j] = Fraction(1)
        rows.append(unit)
    if not rows:
        return n
    rank = row_reduce(RationalMatrix.from_rows(rows, cols=n)).rank
    return n - rank
