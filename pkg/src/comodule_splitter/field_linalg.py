"""Exact linear algebra over prime fields.

Matrices over F_2 store each row bit-packed in a Python integer (bit j of a
row is the entry in column j), so a row operation is a single big-int XOR.
For odd primes rows are tuples of residues and elimination uses modular
inverses via pow(x, -1, p).  Everything is exact; there are no floats
anywhere in this module.

Subspaces are always held in canonical reduced row echelon form: pivot
entries are 1, pivot columns are cleared above and below, and rows are
ordered by pivot column.  Equal subspaces therefore have identical
representations, and subspace equality is a tuple comparison.

Tensor index convention used by the whole package: the basis vector
e_i (x) e_j of F^m (x) F^n sits at position i * n + j.  ``FieldMatrix.kron``
and ``Subspace.tensor`` both follow it.
"""

from __future__ import annotations

from bisect import bisect_left
from typing import Iterable, Sequence

from .errors import ShapeError

Vector = Sequence[int]


def _pack(vec: Vector) -> int:
    """Pack a 0/1 vector into an int, bit j = entry j."""
    mask = 0
    for j, x in enumerate(vec):
        if x % 2:
            mask |= 1 << j
    return mask


def _unpack(mask: int, n: int) -> tuple[int, ...]:
    return tuple((mask >> j) & 1 for j in range(n))


def _tuple_mod(vec: Vector, p: int) -> tuple[int, ...]:
    return tuple(x % p for x in vec)


def _first_nonzero(row: Sequence[int]) -> int | None:
    for j, x in enumerate(row):
        if x:
            return j
    return None


def _insert_row(p: int, ncols: int, rows: list, pivots: list[int], row) -> bool:
    """Insert an internal-representation row into a canonical RREF list.

    Mutates ``rows`` and ``pivots`` in place, keeping the list canonical.
    Returns True when the rank grew.
    """
    if p == 2:
        v = row
        for idx, pv in enumerate(pivots):
            if (v >> pv) & 1:
                v ^= rows[idx]
                if v == 0:
                    return False
        if v == 0:
            return False
        lead = (v & -v).bit_length() - 1
        for idx in range(len(rows)):
            if (rows[idx] >> lead) & 1:
                rows[idx] ^= v
        pos = bisect_left(pivots, lead)
        rows.insert(pos, v)
        pivots.insert(pos, lead)
        return True
    v = list(row)
    for idx, pv in enumerate(pivots):
        c = v[pv]
        if c:
            other = rows[idx]
            for j in range(pv, ncols):
                if other[j]:
                    v[j] = (v[j] - c * other[j]) % p
    lead = _first_nonzero(v)
    if lead is None:
        return False
    inv = pow(v[lead], -1, p)
    if inv != 1:
        v = [(x * inv) % p for x in v]
    vt = tuple(v)
    for idx in range(len(rows)):
        c = rows[idx][lead]
        if c:
            old = rows[idx]
            rows[idx] = tuple((old[j] - c * vt[j]) % p for j in range(ncols))
    pos = bisect_left(pivots, lead)
    rows.insert(pos, vt)
    pivots.insert(pos, lead)
    return True


class FieldMatrix:
    """Immutable exact matrix over F_p.

    Vectors are column vectors; ``matvec`` computes A*v and ``__matmul__``
    composes maps, so the column j of a matrix is the image of e_j.
    """

    __slots__ = ("p", "nrows", "ncols", "_rows")

    def __init__(self, p: int, rows: Iterable[Vector], ncols: int | None = None):
        rows = [tuple(r) for r in rows]
        if ncols is None:
            if not rows:
                raise ShapeError("ncols is required for a matrix with no rows")
            ncols = len(rows[0])
        for r in rows:
            if len(r) != ncols:
                raise ShapeError(f"ragged rows: expected {ncols} columns, got {len(r)}")
        self.p = p
        self.nrows = len(rows)
        self.ncols = ncols
        if p == 2:
            self._rows = tuple(_pack(r) for r in rows)
        else:
            self._rows = tuple(_tuple_mod(r, p) for r in rows)

    @classmethod
    def _raw(cls, p: int, nrows: int, ncols: int, rows: tuple) -> "FieldMatrix":
        """Trusted constructor; ``rows`` must already be in internal form."""
        m = object.__new__(cls)
        m.p = p
        m.nrows = nrows
        m.ncols = ncols
        m._rows = rows
        return m

    @classmethod
    def zeros(cls, p: int, nrows: int, ncols: int) -> "FieldMatrix":
        if p == 2:
            return cls._raw(p, nrows, ncols, (0,) * nrows)
        return cls._raw(p, nrows, ncols, ((0,) * ncols,) * nrows)

    @classmethod
    def identity(cls, p: int, n: int) -> "FieldMatrix":
        if p == 2:
            return cls._raw(p, n, n, tuple(1 << j for j in range(n)))
        rows = tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))
        return cls._raw(p, n, n, rows)

    @classmethod
    def from_cols(cls, p: int, cols: Iterable[Vector], nrows: int | None = None) -> "FieldMatrix":
        cols = [tuple(c) for c in cols]
        if nrows is None:
            if not cols:
                raise ShapeError("nrows is required for a matrix with no columns")
            nrows = len(cols[0])
        rows = [[c[i] for c in cols] for i in range(nrows)]
        return cls(p, rows, ncols=len(cols))

    # -- accessors ---------------------------------------------------------

    def row(self, i: int) -> tuple[int, ...]:
        if self.p == 2:
            return _unpack(self._rows[i], self.ncols)
        return self._rows[i]

    def col(self, j: int) -> tuple[int, ...]:
        if self.p == 2:
            return tuple((r >> j) & 1 for r in self._rows)
        return tuple(r[j] for r in self._rows)

    def entry(self, i: int, j: int) -> int:
        if self.p == 2:
            return (self._rows[i] >> j) & 1
        return self._rows[i][j]

    def rows_as_lists(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.nrows)]

    def packed_rows(self) -> tuple[int, ...]:
        """Bit-packed rows; only meaningful for p = 2."""
        if self.p != 2:
            raise ShapeError("packed rows are only available over F_2")
        return self._rows

    def packed_cols(self) -> list[int]:
        """Bit-packed columns (bit i = row i); only for p = 2."""
        if self.p != 2:
            raise ShapeError("packed columns are only available over F_2")
        cols = [0] * self.ncols
        for i, r in enumerate(self._rows):
            t = r
            while t:
                j = (t & -t).bit_length() - 1
                cols[j] |= 1 << i
                t &= t - 1
        return cols

    def is_zero(self) -> bool:
        if self.p == 2:
            return all(r == 0 for r in self._rows)
        return all(all(x == 0 for x in r) for r in self._rows)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FieldMatrix)
            and self.p == other.p
            and self.nrows == other.nrows
            and self.ncols == other.ncols
            and self._rows == other._rows
        )

    def __hash__(self) -> int:
        return hash((self.p, self.nrows, self.ncols, self._rows))

    def __repr__(self) -> str:
        return f"FieldMatrix(p={self.p}, {self.nrows}x{self.ncols})"

    # -- arithmetic --------------------------------------------------------

    def _check_same_shape(self, other: "FieldMatrix") -> None:
        if self.p != other.p:
            raise ShapeError("mixed characteristics")
        if self.nrows != other.nrows or self.ncols != other.ncols:
            raise ShapeError(
                f"shape mismatch: {self.nrows}x{self.ncols} vs {other.nrows}x{other.ncols}"
            )

    def __add__(self, other: "FieldMatrix") -> "FieldMatrix":
        self._check_same_shape(other)
        if self.p == 2:
            rows = tuple(a ^ b for a, b in zip(self._rows, other._rows))
        else:
            rows = tuple(
                tuple((x + y) % self.p for x, y in zip(a, b))
                for a, b in zip(self._rows, other._rows)
            )
        return FieldMatrix._raw(self.p, self.nrows, self.ncols, rows)

    def __neg__(self) -> "FieldMatrix":
        if self.p == 2:
            return self
        rows = tuple(tuple((-x) % self.p for x in r) for r in self._rows)
        return FieldMatrix._raw(self.p, self.nrows, self.ncols, rows)

    def __sub__(self, other: "FieldMatrix") -> "FieldMatrix":
        return self + (-other)

    def __matmul__(self, other: "FieldMatrix") -> "FieldMatrix":
        if self.p != other.p:
            raise ShapeError("mixed characteristics")
        if self.ncols != other.nrows:
            raise ShapeError(f"cannot compose {self.nrows}x{self.ncols} with {other.nrows}x{other.ncols}")
        if self.p == 2:
            orows = other._rows
            rows = []
            for a in self._rows:
                acc = 0
                t = a
                while t:
                    j = (t & -t).bit_length() - 1
                    acc ^= orows[j]
                    t &= t - 1
                rows.append(acc)
            return FieldMatrix._raw(2, self.nrows, other.ncols, tuple(rows))
        p = self.p
        rows = []
        for a in self._rows:
            acc = [0] * other.ncols
            for j, x in enumerate(a):
                if x:
                    orow = other._rows[j]
                    for k in range(other.ncols):
                        if orow[k]:
                            acc[k] = (acc[k] + x * orow[k]) % p
            rows.append(tuple(acc))
        return FieldMatrix._raw(p, self.nrows, other.ncols, tuple(rows))

    def matvec(self, v: Vector) -> tuple[int, ...]:
        if len(v) != self.ncols:
            raise ShapeError(f"vector has length {len(v)}, expected {self.ncols}")
        if self.p == 2:
            w = _pack(v)
            return tuple((r & w).bit_count() & 1 for r in self._rows)
        p = self.p
        return tuple(sum(x * y for x, y in zip(r, v)) % p for r in self._rows)

    def transpose(self) -> "FieldMatrix":
        return FieldMatrix.from_cols(self.p, [self.row(i) for i in range(self.nrows)], nrows=self.ncols)

    def vstack(self, other: "FieldMatrix") -> "FieldMatrix":
        if self.p != other.p or self.ncols != other.ncols:
            raise ShapeError("vstack needs matching column counts")
        return FieldMatrix._raw(self.p, self.nrows + other.nrows, self.ncols, self._rows + other._rows)

    def kron(self, other: "FieldMatrix") -> "FieldMatrix":
        """Kronecker product; block (i, j) of the result is a_ij * other."""
        if self.p != other.p:
            raise ShapeError("mixed characteristics")
        nc = self.ncols * other.ncols
        if self.p == 2:
            rows = []
            for a in self._rows:
                for b in other._rows:
                    acc = 0
                    t = a
                    while t:
                        s = (t & -t).bit_length() - 1
                        acc |= b << (s * other.ncols)
                        t &= t - 1
                    rows.append(acc)
            return FieldMatrix._raw(2, self.nrows * other.nrows, nc, tuple(rows))
        p = self.p
        rows = []
        for a in self._rows:
            for b in other._rows:
                acc = [0] * nc
                for s, x in enumerate(a):
                    if x:
                        off = s * other.ncols
                        for j, y in enumerate(b):
                            if y:
                                acc[off + j] = (x * y) % p
                rows.append(tuple(acc))
        return FieldMatrix._raw(p, self.nrows * other.nrows, nc, tuple(rows))

    # -- elimination -------------------------------------------------------

    def rref(self) -> "FieldMatrix":
        """The unique reduced row echelon form, same shape, zero rows at the bottom."""
        rows: list = []
        pivots: list[int] = []
        for r in self._rows:
            _insert_row(self.p, self.ncols, rows, pivots, r)
        pad = self.nrows - len(rows)
        if self.p == 2:
            full = tuple(rows) + (0,) * pad
        else:
            full = tuple(rows) + ((0,) * self.ncols,) * pad
        return FieldMatrix._raw(self.p, self.nrows, self.ncols, full)

    def rank(self) -> int:
        rows: list = []
        pivots: list[int] = []
        for r in self._rows:
            _insert_row(self.p, self.ncols, rows, pivots, r)
        return len(rows)

    def row_space(self) -> "Subspace":
        rows: list = []
        pivots: list[int] = []
        for r in self._rows:
            _insert_row(self.p, self.ncols, rows, pivots, r)
        return Subspace._raw(self.p, self.ncols, tuple(rows), tuple(pivots))

    def column_space(self) -> "Subspace":
        return self.transpose().row_space()

    def kernel(self) -> "Subspace":
        """Null space {v : A v = 0} as a canonical subspace of F^ncols."""
        if self.p == 2:
            return _kernel_packed(self.ncols, self.packed_cols())
        cols = [list(self.col(j)) for j in range(self.ncols)]
        return _kernel_dense(self.p, self.ncols, cols)

    def solve(self, rhs: "FieldMatrix") -> "FieldMatrix | None":
        """A particular X with self @ X = rhs, or None when unsolvable.

        Free variables are set to zero, so the answer is deterministic.
        """
        if self.p != rhs.p:
            raise ShapeError("mixed characteristics")
        if self.nrows != rhs.nrows:
            raise ShapeError("solve needs matching row counts")
        nA, nB = self.ncols, rhs.ncols
        rows: list = []
        pivots: list[int] = []
        if self.p == 2:
            for a, b in zip(self._rows, rhs._rows):
                _insert_row(2, nA + nB, rows, pivots, a | (b << nA))
        else:
            for i in range(self.nrows):
                _insert_row(self.p, nA + nB, rows, pivots, self._rows[i] + rhs._rows[i])
        if any(pv >= nA for pv in pivots):
            return None
        out = FieldMatrix.zeros(self.p, nA, nB)
        xrows = list(out._rows)
        mask = (1 << nB) - 1
        for t, pv in enumerate(pivots):
            if self.p == 2:
                xrows[pv] = (rows[t] >> nA) & mask
            else:
                xrows[pv] = rows[t][nA:]
        return FieldMatrix._raw(self.p, nA, nB, tuple(xrows))

    def inverse(self) -> "FieldMatrix":
        """Inverse of a square matrix; raises ShapeError when singular."""
        n = self.nrows
        if n != self.ncols:
            raise ShapeError("only square matrices can be inverted")
        rows: list = []
        pivots: list[int] = []
        ident = FieldMatrix.identity(self.p, n)
        if self.p == 2:
            for a, b in zip(self._rows, ident._rows):
                _insert_row(2, 2 * n, rows, pivots, a | (b << n))
        else:
            for i in range(n):
                _insert_row(self.p, 2 * n, rows, pivots, self._rows[i] + ident._rows[i])
        if pivots[:n] != list(range(n)) or len(pivots) < n:
            raise ShapeError("matrix is singular")
        if self.p == 2:
            inv_rows = tuple(r >> n for r in rows[:n])
        else:
            inv_rows = tuple(r[n:] for r in rows[:n])
        return FieldMatrix._raw(self.p, n, n, inv_rows)


def _kernel_packed(ncols: int, cols: list[int]) -> "Subspace":
    """Kernel over F_2 from bit-packed columns (bit i of a column = row i)."""
    table: dict[int, tuple[int, int]] = {}
    vectors: list[int] = []
    for j, c in enumerate(cols):
        a = 1 << j
        while c:
            lead = (c & -c).bit_length() - 1
            hit = table.get(lead)
            if hit is None:
                table[lead] = (c, a)
                a = 0
                break
            c ^= hit[0]
            a ^= hit[1]
        if c == 0:
            vectors.append(a)
    rows: list = []
    pivots: list[int] = []
    for v in vectors:
        _insert_row(2, ncols, rows, pivots, v)
    return Subspace._raw(2, ncols, tuple(rows), tuple(pivots))


def kernel_from_sparse_cols(p: int, ncols: int, cols: list[dict[int, int]]) -> "Subspace":
    """Kernel of a matrix given as sparse columns (dicts row -> coeff).

    The row count never has to be materialized, which is what makes the
    iterated-coproduct and cotensor kernels affordable at tensor-cube sizes.
    """
    table: dict[int, tuple[dict[int, int], dict[int, int]]] = {}
    vectors: list[list[int]] = []

    def sub_scaled(x: dict[int, int], y: dict[int, int], f: int) -> dict[int, int]:
        out = dict(x)
        for k, v in y.items():
            nv = (out.get(k, 0) - f * v) % p
            if nv:
                out[k] = nv
            else:
                out.pop(k, None)
        return out

    for j, col in enumerate(cols):
        c = {k: v % p for k, v in col.items() if v % p}
        a = {j: 1}
        placed = False
        while c:
            lead = min(c)
            hit = table.get(lead)
            if hit is None:
                inv = pow(c[lead], -1, p)
                table[lead] = (
                    {k: v * inv % p for k, v in c.items()},
                    {k: v * inv % p for k, v in a.items()},
                )
                placed = True
                break
            f = c[lead]
            c = sub_scaled(c, hit[0], f)
            a = sub_scaled(a, hit[1], f)
        if not placed:
            vec = [0] * ncols
            for k, v in a.items():
                vec[k] = v
            vectors.append(vec)
    rows: list = []
    pivots: list[int] = []
    for v in vectors:
        _insert_row(p, ncols, rows, pivots, _pack(v) if p == 2 else tuple(v))
    return Subspace._raw(p, ncols, tuple(rows), tuple(pivots))


def _kernel_dense(p: int, ncols: int, cols: list[list[int]]) -> "Subspace":
    """Kernel over F_p from dense columns, by column elimination."""
    table: dict[int, tuple[list[int], list[int]]] = {}
    vectors: list[list[int]] = []
    for j, c in enumerate(cols):
        c = [x % p for x in c]
        a = [0] * ncols
        a[j] = 1
        while True:
            lead = _first_nonzero(c)
            if lead is None:
                vectors.append(a)
                break
            hit = table.get(lead)
            if hit is None:
                inv = pow(c[lead], -1, p)
                table[lead] = ([x * inv % p for x in c], [x * inv % p for x in a])
                break
            f = c[lead]
            hc, ha = hit
            c = [(x - f * y) % p for x, y in zip(c, hc)]
            a = [(x - f * y) % p for x, y in zip(a, ha)]
    rows: list = []
    pivots: list[int] = []
    for v in vectors:
        _insert_row(p, ncols, rows, pivots, tuple(v))
    return Subspace._raw(p, ncols, tuple(rows), tuple(pivots))


class Subspace:
    """A subspace of F_p^n held in canonical reduced row echelon form."""

    __slots__ = ("p", "ambient_dim", "_rows", "_pivots")

    def __init__(self, p: int, ambient_dim: int, vectors: Iterable[Vector] = ()):
        rows: list = []
        pivots: list[int] = []
        for v in vectors:
            if len(v) != ambient_dim:
                raise ShapeError(f"vector has length {len(v)}, expected {ambient_dim}")
            if p == 2:
                _insert_row(2, ambient_dim, rows, pivots, _pack(v))
            else:
                _insert_row(p, ambient_dim, rows, pivots, _tuple_mod(v, p))
        self.p = p
        self.ambient_dim = ambient_dim
        self._rows = tuple(rows)
        self._pivots = tuple(pivots)

    @classmethod
    def _raw(cls, p: int, ambient_dim: int, rows: tuple, pivots: tuple) -> "Subspace":
        s = object.__new__(cls)
        s.p = p
        s.ambient_dim = ambient_dim
        s._rows = rows
        s._pivots = pivots
        return s

    @classmethod
    def from_vectors(cls, p: int, ambient_dim: int, vectors: Iterable[Vector]) -> "Subspace":
        return cls(p, ambient_dim, vectors)

    @classmethod
    def zero(cls, p: int, ambient_dim: int) -> "Subspace":
        return cls._raw(p, ambient_dim, (), ())

    @classmethod
    def full(cls, p: int, ambient_dim: int) -> "Subspace":
        ident = FieldMatrix.identity(p, ambient_dim)
        return cls._raw(p, ambient_dim, ident._rows, tuple(range(ambient_dim)))

    # -- basic queries -----------------------------------------------------

    @property
    def dim(self) -> int:
        return len(self._rows)

    @property
    def pivots(self) -> tuple[int, ...]:
        return self._pivots

    def nonpivots(self) -> tuple[int, ...]:
        pivs = set(self._pivots)
        return tuple(j for j in range(self.ambient_dim) if j not in pivs)

    def basis_matrix(self) -> FieldMatrix:
        return FieldMatrix._raw(self.p, len(self._rows), self.ambient_dim, self._rows)

    def basis_vectors(self) -> list[tuple[int, ...]]:
        m = self.basis_matrix()
        return [m.row(i) for i in range(m.nrows)]

    def is_zero(self) -> bool:
        return not self._rows

    def is_full(self) -> bool:
        return len(self._rows) == self.ambient_dim

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Subspace)
            and self.p == other.p
            and self.ambient_dim == other.ambient_dim
            and self._rows == other._rows
        )

    def __hash__(self) -> int:
        return hash((self.p, self.ambient_dim, self._rows))

    def __repr__(self) -> str:
        return f"Subspace(p={self.p}, dim={self.dim} of {self.ambient_dim})"

    # -- membership and reduction ------------------------------------------

    def _reduce_packed(self, w: int) -> int:
        for idx, pv in enumerate(self._pivots):
            if (w >> pv) & 1:
                w ^= self._rows[idx]
        return w

    def reduce(self, v: Vector) -> tuple[int, ...]:
        """Canonical representative of v modulo this subspace."""
        if len(v) != self.ambient_dim:
            raise ShapeError(f"vector has length {len(v)}, expected {self.ambient_dim}")
        if self.p == 2:
            return _unpack(self._reduce_packed(_pack(v)), self.ambient_dim)
        w = list(_tuple_mod(v, self.p))
        for idx, pv in enumerate(self._pivots):
            c = w[pv]
            if c:
                row = self._rows[idx]
                for j in range(pv, self.ambient_dim):
                    if row[j]:
                        w[j] = (w[j] - c * row[j]) % self.p
        return tuple(w)

    def contains(self, v: Vector) -> bool:
        if self.p == 2:
            return self._reduce_packed(_pack(v)) == 0
        return all(x == 0 for x in self.reduce(v))

    __contains__ = contains

    def contains_subspace(self, other: "Subspace") -> bool:
        if self.p != other.p or self.ambient_dim != other.ambient_dim:
            raise ShapeError("subspaces live in different ambient spaces")
        if other.dim > self.dim:
            return False
        if self.p == 2:
            return all(self._reduce_packed(r) == 0 for r in other._rows)
        return all(self.contains(r) for r in other._rows)

    # -- lattice operations --------------------------------------------------

    def add(self, other: "Subspace") -> "Subspace":
        """Subspace sum, computed by inserting the smaller basis into the larger."""
        if self.p != other.p or self.ambient_dim != other.ambient_dim:
            raise ShapeError("subspaces live in different ambient spaces")
        big, small = (self, other) if self.dim >= other.dim else (other, self)
        rows = list(big._rows)
        pivots = list(big._pivots)
        for r in small._rows:
            _insert_row(self.p, self.ambient_dim, rows, pivots, r)
        return Subspace._raw(self.p, self.ambient_dim, tuple(rows), tuple(pivots))

    def intersect(self, other: "Subspace") -> "Subspace":
        """Zassenhaus: echelonize [a | a] and [b | 0]; rows supported on the
        right half span the intersection."""
        if self.p != other.p or self.ambient_dim != other.ambient_dim:
            raise ShapeError("subspaces live in different ambient spaces")
        n = self.ambient_dim
        rows: list = []
        pivots: list[int] = []
        if self.p == 2:
            for a in self._rows:
                _insert_row(2, 2 * n, rows, pivots, a | (a << n))
            for b in other._rows:
                _insert_row(2, 2 * n, rows, pivots, b)
            vecs = [r >> n for t, r in zip(pivots, rows) if t >= n]
            out_rows: list = []
            out_pivots: list[int] = []
            for v in vecs:
                _insert_row(2, n, out_rows, out_pivots, v)
            return Subspace._raw(2, n, tuple(out_rows), tuple(out_pivots))
        for a in self._rows:
            _insert_row(self.p, 2 * n, rows, pivots, a + a)
        for b in other._rows:
            _insert_row(self.p, 2 * n, rows, pivots, b + (0,) * n)
        vecs = [r[n:] for t, r in zip(pivots, rows) if t >= n]
        out: list = []
        outp: list[int] = []
        for v in vecs:
            _insert_row(self.p, n, out, outp, v)
        return Subspace._raw(self.p, n, tuple(out), tuple(outp))

    def tensor(self, other: "Subspace") -> "Subspace":
        """The subspace self (x) other of F^(m*n).

        The Kronecker products of two canonical bases are again a canonical
        basis (pivot of a_i (x) b_j is pivot(a_i)*n + pivot(b_j)), so no
        elimination is needed.
        """
        if self.p != other.p:
            raise ShapeError("mixed characteristics")
        n = other.ambient_dim
        amb = self.ambient_dim * n
        rows: list = []
        pivots: list[int] = []
        if self.p == 2:
            for a, pa in zip(self._rows, self._pivots):
                for b, pb in zip(other._rows, other._pivots):
                    acc = 0
                    t = a
                    while t:
                        s = (t & -t).bit_length() - 1
                        acc |= b << (s * n)
                        t &= t - 1
                    rows.append(acc)
                    pivots.append(pa * n + pb)
        else:
            for a, pa in zip(self._rows, self._pivots):
                for b, pb in zip(other._rows, other._pivots):
                    acc = [0] * amb
                    for s, x in enumerate(a):
                        if x:
                            off = s * n
                            for j, y in enumerate(b):
                                if y:
                                    acc[off + j] = (x * y) % self.p
                    rows.append(tuple(acc))
                    pivots.append(pa * n + pb)
        return Subspace._raw(self.p, amb, tuple(rows), tuple(pivots))

    def quotient_matrix(self) -> FieldMatrix:
        """Matrix of the quotient map F^n -> F^n / self.

        Coordinates on the quotient are the non-pivot coordinates of the
        canonical representative; the matrix has ambient_dim - dim rows.
        """
        n = self.ambient_dim
        nps = self.nonpivots()
        if self.p == 2:
            rows = []
            for t, npc in enumerate(nps):
                acc = 1 << npc
                for i, pv in enumerate(self._pivots):
                    if (self._rows[i] >> npc) & 1:
                        acc |= 1 << pv
                rows.append(acc)
            return FieldMatrix._raw(2, len(nps), n, tuple(rows))
        p = self.p
        rows = []
        for npc in nps:
            acc = [0] * n
            acc[npc] = 1
            for i, pv in enumerate(self._pivots):
                c = self._rows[i][npc]
                if c:
                    acc[pv] = (-c) % p
            rows.append(tuple(acc))
        return FieldMatrix._raw(p, len(nps), n, tuple(rows))


# -- spec-level operation names ---------------------------------------------


def rref(m: FieldMatrix) -> FieldMatrix:
    return m.rref()


def kernel(m: FieldMatrix) -> Subspace:
    return m.kernel()


def kron(a: FieldMatrix, b: FieldMatrix) -> FieldMatrix:
    return a.kron(b)


def subspace_sum(a: Subspace, b: Subspace) -> Subspace:
    return a.add(b)


def subspace_intersect(a: Subspace, b: Subspace) -> Subspace:
    return a.intersect(b)


def member(v: Vector, s: Subspace) -> bool:
    return s.contains(v)


def preimage(m: FieldMatrix, s: Subspace) -> Subspace:
    """{v : m v in s}, the preimage of a subspace of the codomain."""
    if m.p != s.p:
        raise ShapeError("mixed characteristics")
    if s.ambient_dim != m.nrows:
        raise ShapeError("subspace must live in the codomain of the matrix")
    if m.p == 2:
        cols = [s._reduce_packed(c) for c in m.packed_cols()]
        return _kernel_packed(m.ncols, cols)
    cols = [list(s.reduce(m.col(j))) for j in range(m.ncols)]
    return _kernel_dense(m.p, m.ncols, cols)


def image(m: FieldMatrix, s: Subspace | None = None) -> Subspace:
    """Image of a subspace (default: the whole domain) under m."""
    if s is None:
        vecs = [m.col(j) for j in range(m.ncols)]
    else:
        if s.ambient_dim != m.ncols:
            raise ShapeError("subspace must live in the domain of the matrix")
        vecs = [m.matvec(b) for b in s.basis_vectors()]
    return Subspace.from_vectors(m.p, m.nrows, vecs)


# -- staircase tensor sums ----------------------------------------------------


class StaircaseMembership:
    """Membership test for A_1 (x) B_1 + ... + A_r (x) B_r.

    Requires a staircase: A_1 >= A_2 >= ... >= A_r and B_1 <= ... <= B_r.
    Such a sum is the intersection of the corner conditions

        w  in  A_{i+1} (x) F^n  +  F^m (x) B_i      for i = 0..r

    (with A_{r+1} = 0 and B_0 = 0), and each corner condition says that the
    sandwich  q_{A_{i+1}} W q_{B_i}^T  of the coefficient matrix W of w
    vanishes.  That turns a huge subspace sum into a few small products.
    """

    def __init__(self, terms: Sequence[tuple[Subspace, Subspace]]):
        if not terms:
            raise ShapeError("at least one term is required")
        self.p = terms[0][0].p
        self.left_dim = terms[0][0].ambient_dim
        self.right_dim = terms[0][1].ambient_dim
        for a, b in terms:
            if a.p != self.p or b.p != self.p:
                raise ShapeError("mixed characteristics")
            if a.ambient_dim != self.left_dim or b.ambient_dim != self.right_dim:
                raise ShapeError("terms live in different ambient spaces")
        for i in range(len(terms) - 1):
            if not terms[i][0].contains_subspace(terms[i + 1][0]):
                raise ShapeError("left factors must decrease along the staircase")
            if not terms[i + 1][1].contains_subspace(terms[i][1]):
                raise ShapeError("right factors must increase along the staircase")
        r = len(terms)
        zero_l = Subspace.zero(self.p, self.left_dim)
        zero_r = Subspace.zero(self.p, self.right_dim)
        self._conds: list[tuple[FieldMatrix, FieldMatrix]] = []
        for i in range(r + 1):
            a_next = terms[i][0] if i < r else zero_l
            b_cur = terms[i - 1][1] if i >= 1 else zero_r
            qa = a_next.quotient_matrix()
            qb = b_cur.quotient_matrix()
            if qa.nrows == 0 or qb.nrows == 0:
                continue
            self._conds.append((qa, qb))

    def contains(self, vec: Vector) -> bool:
        m, n = self.left_dim, self.right_dim
        if len(vec) != m * n:
            raise ShapeError(f"vector has length {len(vec)}, expected {m * n}")
        if self.p == 2:
            w = _pack(vec)
            nmask = (1 << n) - 1
            wrows = [(w >> (i * n)) & nmask for i in range(m)]
            for qa, qb in self._conds:
                for qarow in qa._rows:
                    acc = 0
                    t = qarow
                    while t:
                        i = (t & -t).bit_length() - 1
                        acc ^= wrows[i]
                        t &= t - 1
                    if acc:
                        for qbrow in qb._rows:
                            if (acc & qbrow).bit_count() & 1:
                                return False
            return True
        p = self.p
        wrows = [[vec[i * n + j] % p for j in range(n)] for i in range(m)]
        for qa, qb in self._conds:
            for qarow in qa._rows:
                acc = [0] * n
                for i, x in enumerate(qarow):
                    if x:
                        wi = wrows[i]
                        for j in range(n):
                            if wi[j]:
                                acc[j] = (acc[j] + x * wi[j]) % p
                if any(acc):
                    for qbrow in qb._rows:
                        if sum(x * y for x, y in zip(acc, qbrow)) % p:
                            return False
        return True


def staircase_sum(terms: Sequence[tuple[Subspace, Subspace]]) -> Subspace:
    """The literal subspace A_1 (x) B_1 + ... + A_r (x) B_r.

    Fine for small ambient spaces; the membership class above is the scalable
    route and the two are cross-checked in the test suite.
    """
    out: Subspace | None = None
    for a, b in terms:
        t = a.tensor(b)
        out = t if out is None else out.add(t)
    if out is None:
        raise ShapeError("at least one term is required")
    return out
