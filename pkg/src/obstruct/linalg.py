"""Exact linear algebra over Q and GF(p).

Vectors are plain dicts ``{index: coefficient}`` with no stored zeros.  Rational
coefficients are ``int`` or ``fractions.Fraction``; prime-field coefficients
are ``int`` reduced into ``range(p)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple


class InputError(ValueError):
    """Malformed or inconsistent user input."""


class ComplexConsistencyError(ArithmeticError):
    """A composite of differentials that should vanish does not."""


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    k = 2
    while k * k <= p:
        if p % k == 0:
            return False
        k += 1
    return True


@dataclass(frozen=True)
class Field:
    """Ground field descriptor: ``Field(0)`` is Q, ``Field(p)`` is GF(p)."""

    characteristic: int = 0

    def __post_init__(self):
        if self.characteristic != 0 and not _is_prime(self.characteristic):
            raise InputError(f"characteristic {self.characteristic} is not prime")

    @classmethod
    def parse(cls, text) -> "Field":
        if isinstance(text, Field):
            return text
        t = str(text).strip().upper()
        if t in ("Q", "QQ", "RATIONALS", "0"):
            return cls(0)
        if t.startswith("GF(") and t.endswith(")"):
            t = t[3:-1]
        elif t.startswith("GF"):
            t = t[2:]
        try:
            return cls(int(t))
        except ValueError:
            raise InputError(f"unknown field descriptor {text!r}") from None

    @property
    def name(self) -> str:
        return "Q" if self.characteristic == 0 else f"GF({self.characteristic})"

    def __repr__(self):
        return f"Field({self.name})"

    def reduce(self, x):
        p = self.characteristic
        if p:
            if isinstance(x, Fraction):
                return (x.numerator * pow(x.denominator, -1, p)) % p
            return x % p
        if isinstance(x, Fraction) and x.denominator == 1:
            return x.numerator
        return x

    def coerce(self, value):
        """Parse a user-supplied scalar (int, Fraction, or ``"a/b"`` string)."""
        if isinstance(value, str):
            value = Fraction(value)
        elif isinstance(value, float):
            raise InputError("floating point coefficients are not exact")
        return self.reduce(value)

    def inv(self, x):
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        p = self.characteristic
        if p:
            return pow(x, -1, p)
        return self.reduce(Fraction(1) / x)

    def neg(self, x):
        return self.reduce(-x)

    def encode(self, x) -> object:
        """JSON-friendly rendering of a reduced scalar."""
        if isinstance(x, Fraction):
            return f"{x.numerator}/{x.denominator}"
        return x


def vec_add(target: dict, key, coeff, field: Field) -> None:
    """``target[key] += coeff`` in place, dropping zeros."""
    v = field.reduce(target.get(key, 0) + coeff)
    if v == 0:
        target.pop(key, None)
    else:
        target[key] = v


def vec_axpy(target: dict, coeff, source: dict, field: Field) -> None:
    for k, v in source.items():
        vec_add(target, k, coeff * v, field)


@dataclass
class SparseMatrix:
    """Sparse ``rows x cols`` matrix stored row-wise."""

    rows: int
    cols: int
    field: Field
    data: Dict[int, Dict[int, object]] = dc_field(default_factory=dict)

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise InputError("matrix dimensions must be nonnegative")
        clean: Dict[int, Dict[int, object]] = {}
        for i, row in self.data.items():
            for j, v in row.items():
                self._check(i, j)
                v = self.field.reduce(v)
                if v != 0:
                    clean.setdefault(i, {})[j] = v
        self.data = clean

    def _check(self, i, j):
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise InputError(f"entry ({i}, {j}) outside {self.rows}x{self.cols}")

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence], field: Field, cols: Optional[int] = None):
        n = len(rows)
        m = cols if cols is not None else (len(rows[0]) if n else 0)
        data = {i: {j: v for j, v in enumerate(r) if v != 0} for i, r in enumerate(rows)}
        return cls(n, m, field, data)

    @classmethod
    def from_columns(cls, columns: Sequence[dict], rows: int, field: Field):
        data: Dict[int, Dict[int, object]] = {}
        for j, col in enumerate(columns):
            for i, v in col.items():
                data.setdefault(i, {})[j] = v
        return cls(rows, len(columns), field, data)

    @classmethod
    def identity(cls, n: int, field: Field):
        return cls(n, n, field, {i: {i: 1} for i in range(n)})

    def add_entry(self, i: int, j: int, v) -> None:
        self._check(i, j)
        row = self.data.setdefault(i, {})
        vec_add(row, j, v, self.field)
        if not row:
            del self.data[i]

    def entries(self) -> Dict[Tuple[int, int], object]:
        return {(i, j): v for i, row in self.data.items() for j, v in row.items()}

    def to_dense(self) -> List[List]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for i, row in self.data.items():
            for j, v in row.items():
                out[i][j] = v
        return out

    def transpose(self) -> "SparseMatrix":
        data: Dict[int, Dict[int, object]] = {}
        for i, row in self.data.items():
            for j, v in row.items():
                data.setdefault(j, {})[i] = v
        return SparseMatrix(self.cols, self.rows, self.field, data)

    def apply(self, x) -> Dict[int, object]:
        """Matrix times vector; ``x`` is a dict or a dense sequence."""
        xd = x if isinstance(x, dict) else {j: v for j, v in enumerate(x) if v != 0}
        out: Dict[int, object] = {}
        for i, row in self.data.items():
            s = 0
            for j, v in row.items():
                xj = xd.get(j)
                if xj is not None:
                    s += v * xj
            s = self.field.reduce(s)
            if s != 0:
                out[i] = s
        return out

    def matmul(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.cols != other.rows:
            raise InputError("dimension mismatch in product")
        data: Dict[int, Dict[int, object]] = {}
        for i, row in self.data.items():
            acc: Dict[int, object] = {}
            for k, v in row.items():
                orow = other.data.get(k)
                if orow:
                    for j, w in orow.items():
                        acc[j] = acc.get(j, 0) + v * w
            acc = {j: self.field.reduce(w) for j, w in acc.items()}
            acc = {j: w for j, w in acc.items() if w != 0}
            if acc:
                data[i] = acc
        return SparseMatrix(self.rows, other.cols, self.field, data)

    def is_zero(self) -> bool:
        return not self.data


# -- elimination ---------------------------------------------------------------

@dataclass
class _Echelon:
    """Reduced row echelon form of a matrix, augmented by tracked right sides."""

    pivots: List[int]          # pivot column of each reduced row, increasing
    rows: List[Dict[int, object]]
    rhs: List[Dict[int, object]]


def _rref(matrix: SparseMatrix, rhs: Optional[List[Dict[int, object]]] = None) -> Tuple[_Echelon, List[Dict[int, object]]]:
    """Gauss-Jordan elimination in fixed column order.

    Pivot choice: for each column left to right, the lowest-index remaining row
    with a nonzero entry.  ``rhs`` is a per-row payload (dict) transformed along.
    Returns the echelon and the payloads of rows reduced to zero.
    """
    f = matrix.field
    n = matrix.rows
    work = [dict(matrix.data.get(i, {})) for i in range(n)]
    pay = [dict(rhs[i]) if rhs is not None else {} for i in range(n)]
    # bucket rows by leading column
    remaining = list(range(n))
    pivots: List[int] = []
    prow: List[Dict[int, object]] = []
    ppay: List[Dict[int, object]] = []
    active = [i for i in remaining if work[i]]
    zero_rows = [i for i in remaining if not work[i]]
    while active:
        col = min(min(work[i]) for i in active)
        cand = [i for i in active if col in work[i]]
        r = cand[0]
        inv = f.inv(work[r][col])
        row = {j: f.reduce(v * inv) for j, v in work[r].items()}
        pr = {j: f.reduce(v * inv) for j, v in pay[r].items()}
        nxt = []
        for i in active:
            if i == r:
                continue
            c = work[i].get(col)
            if c is not None:
                vec_axpy(work[i], -c, row, f)
                vec_axpy(pay[i], -c, pr, f)
            if work[i]:
                nxt.append(i)
            else:
                zero_rows.append(i)
        # back-substitute into earlier pivot rows
        for k in range(len(prow)):
            c = prow[k].get(col)
            if c is not None:
                vec_axpy(prow[k], -c, row, f)
                vec_axpy(ppay[k], -c, pr, f)
        pivots.append(col)
        prow.append(row)
        ppay.append(pr)
        active = nxt
    zero_rows.sort()
    return _Echelon(pivots, prow, ppay), [pay[i] for i in zero_rows]


def rank(matrix: SparseMatrix) -> int:
    return len(_rref(matrix)[0].pivots)


def _kernel_from_echelon(ech: _Echelon, cols: int, field: Field) -> List[Dict[int, object]]:
    pivset = set(ech.pivots)
    basis = []
    for free in range(cols):
        if free in pivset:
            continue
        v = {free: 1}
        for pc, row in zip(ech.pivots, ech.rows):
            c = row.get(free)
            if c is not None:
                v[pc] = field.neg(c)
        basis.append(v)
    return basis


def kernel_basis(matrix: SparseMatrix) -> List[Dict[int, object]]:
    ech, _ = _rref(matrix)
    return _kernel_from_echelon(ech, matrix.cols, matrix.field)


NO_SOLUTION = None


def solve_linear(matrix: SparseMatrix, b) -> Tuple[Optional[Dict[int, object]], List[Dict[int, object]]]:
    """Solve ``matrix @ x = b`` exactly.

    Returns ``(x, kernel)`` where ``x`` is the particular solution with every
    free variable set to zero, or ``NO_SOLUTION`` (``None``) if the system is
    inconsistent.  ``kernel`` spans the null space in either case.
    """
    f = matrix.field
    bd = b if isinstance(b, dict) else {i: v for i, v in enumerate(b) if v != 0}
    if isinstance(b, dict):
        if any(not 0 <= i < matrix.rows for i in bd):
            raise InputError("right-hand side index outside matrix rows")
    elif len(b) != matrix.rows:
        raise InputError(f"right-hand side has length {len(b)}, expected {matrix.rows}")
    bd = {i: f.reduce(v) for i, v in bd.items()}
    payload = [{0: bd[i]} if bd.get(i, 0) != 0 else {} for i in range(matrix.rows)]
    ech, zero_payloads = _rref(matrix, payload)
    kernel = _kernel_from_echelon(ech, matrix.cols, f)
    if any(p for p in zero_payloads):
        return NO_SOLUTION, kernel
    x = {}
    for pc, pr in zip(ech.pivots, ech.rhs):
        v = pr.get(0, 0)
        if v != 0:
            x[pc] = v
    return x, kernel


def left_kernel_witness(matrix: SparseMatrix, b: Dict[int, object]) -> Optional[Dict[int, object]]:
    """A row vector ``y`` with ``y @ matrix = 0`` and ``y . b != 0``, if any."""
    f = matrix.field
    for y in kernel_basis(matrix.transpose()):
        s = f.reduce(sum(v * b.get(i, 0) for i, v in y.items()))
        if s != 0:
            inv = f.inv(s)
            return {i: f.reduce(v * inv) for i, v in y.items()}
    return None


def in_span(vectors: Iterable[Dict[int, object]], v: Dict[int, object], dim: int, field: Field) -> bool:
    cols = list(vectors)
    m = SparseMatrix.from_columns(cols, dim, field)
    x, _ = solve_linear(m, v)
    return x is not NO_SOLUTION


@dataclass
class Subquotient:
    dim_kernel: int
    dim_image: int
    dim_quotient: int
    representatives: List[Dict[int, object]]
    kernel: List[Dict[int, object]]
    image: List[Dict[int, object]]


def subquotient_dims(d_out: SparseMatrix, d_in: SparseMatrix) -> Subquotient:
    """Dimensions of ``ker(d_out) / im(d_in)`` with deterministic representatives."""
    if d_out.cols != d_in.rows:
        raise InputError(
            f"middle dimensions disagree: d_out has {d_out.cols} columns, d_in has {d_in.rows} rows"
        )
    f = d_out.field
    if not d_out.matmul(d_in).is_zero():
        raise ComplexConsistencyError("d_out . d_in != 0")
    ker = kernel_basis(d_out)
    # image basis: pivot columns of d_in
    ech, _ = _rref(d_in.transpose())
    image = [dict(r) for r in ech.rows]
    # extend the image basis to a kernel basis greedily in kernel order
    reps: List[Dict[int, object]] = []
    span_rows = list(image)
    current = len(span_rows)
    for v in ker:
        trial = SparseMatrix(len(span_rows) + 1, d_out.cols, f,
                             {i: r for i, r in enumerate(span_rows + [v])})
        r = rank(trial)
        if r > current:
            reps.append(v)
            span_rows.append(v)
            current = r
    return Subquotient(len(ker), len(image), len(ker) - len(image), reps, ker, image)
