"""Exact scalars in Q or a quadratic extension Q(sqrt(d)), and dense exact
linear algebra over them.

Scalars are kept in a canonical form: fractions reduced, the radicand d a
squarefree integer (square parts are folded into the rational coefficient),
and b = 0 scalars stored with d = 0.  Scalars from different extensions may
not be mixed; plain rationals coerce into any extension.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .errors import (
    DimensionMismatchError,
    ExtensionMismatchError,
    NonRationalError,
)

_SMALL_PRIMES_LIMIT = 1_000_000


def _squarefree_split(n: int) -> tuple[int, int]:
    # n = s^2 * d with d squarefree (sign kept on d); trial division is fine
    # at desk scale, radicands here come from small module parameters
    if n == 0:
        return 1, 0
    sign = 1 if n > 0 else -1
    n = abs(n)
    s, d, p = 1, 1, 2
    while p * p <= n and p <= _SMALL_PRIMES_LIMIT:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        s *= p ** (e // 2)
        if e % 2:
            d *= p
        p += 1 if p == 2 else 2
    d *= n
    return s, sign * d


class ExactScalar:
    """A number a + b*sqrt(d) with a, b rational and d a squarefree integer.

    d = 0 encodes a plain rational.  Negative d is allowed (imaginary
    quadratic extension); ordering is then undefined.
    """

    __slots__ = ("a", "b", "d")

    def __init__(self, a, b=0, d=0):
        a = Fraction(a)
        b = Fraction(b)
        if b == 0:
            d = 0
        else:
            d = Fraction(d)
            if d == 0:
                b = Fraction(0)
            else:
                # fold square factors of the radicand into b
                s_num, d_num = _squarefree_split(d.numerator)
                s_den, d_den = _squarefree_split(d.denominator)
                # sqrt(p/q) = sqrt(p*q)/q
                b = b * Fraction(s_num, s_den) / d_den
                dd = d_num * d_den
                if dd == 1:
                    a, b, dd = a + b, Fraction(0), 0
                d = dd
        if b == 0:
            d = 0
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "d", int(d))

    def __setattr__(self, *args):
        raise AttributeError("ExactScalar is immutable")

    @classmethod
    def sqrt_of(cls, radicand) -> "ExactScalar":
        return cls(0, 1, Fraction(radicand))

    # -- coercion ---------------------------------------------------------

    @staticmethod
    def _coerce(x) -> "ExactScalar":
        if isinstance(x, ExactScalar):
            return x
        if isinstance(x, (int, Fraction)):
            return ExactScalar(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to ExactScalar")

    def _join_d(self, other: "ExactScalar") -> int:
        if self.d == 0:
            return other.d
        if other.d == 0 or other.d == self.d:
            return self.d
        raise ExtensionMismatchError(
            f"cannot mix sqrt({self.d}) and sqrt({other.d}) values"
        )

    # -- ring operations --------------------------------------------------

    def __add__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        d = self._join_d(o)
        return ExactScalar(self.a + o.a, self.b + o.b, d)

    __radd__ = __add__

    def __neg__(self):
        return ExactScalar(-self.a, -self.b, self.d)

    def __sub__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        d = self._join_d(o)
        a = self.a * o.a + self.b * o.b * d
        b = self.a * o.b + self.b * o.a
        return ExactScalar(a, b, d)

    __rmul__ = __mul__

    def inverse(self) -> "ExactScalar":
        if not self:
            raise ZeroDivisionError("inverse of zero scalar")
        if self.b == 0:
            return ExactScalar(1 / self.a)
        # conjugate over the norm; the norm is nonzero since d is not a square
        n = self.a * self.a - self.b * self.b * self.d
        return ExactScalar(self.a / n, -self.b / n, self.d)

    def __truediv__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        out = ExactScalar(1)
        for _ in range(n):
            out = out * self
        return out

    # -- predicates and conversions ---------------------------------------

    def __bool__(self):
        return self.a != 0 or self.b != 0

    def is_rational(self) -> bool:
        return self.b == 0

    def as_fraction(self) -> Fraction:
        if self.b != 0:
            raise NonRationalError(f"{self} has an irrational part")
        return self.a

    def is_integer(self) -> bool:
        return self.b == 0 and self.a.denominator == 1

    def conjugate(self) -> "ExactScalar":
        return ExactScalar(self.a, -self.b, self.d)

    def __eq__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self.a == o.a and self.b == o.b and (self.b == 0 or self.d == o.d)

    def __hash__(self):
        return hash((self.a, self.b, self.d))

    def _sign(self) -> int:
        if self.b == 0:
            return (self.a > 0) - (self.a < 0)
        if self.d < 0:
            raise NonRationalError(f"{self} is not real, no ordering")
        if self.a >= 0 and self.b > 0:
            return 1
        if self.a <= 0 and self.b < 0:
            return -1
        # a and b have opposite signs; compare a^2 with b^2 d
        lhs, rhs = self.a * self.a, self.b * self.b * self.d
        if lhs == rhs:
            return 0
        big_is_a = lhs > rhs
        return 1 if (self.a > 0) == big_is_a else -1

    def __lt__(self, other):
        return (self - self._coerce(other))._sign() < 0

    def __le__(self, other):
        return (self - self._coerce(other))._sign() <= 0

    def __gt__(self, other):
        return (self - self._coerce(other))._sign() > 0

    def __ge__(self, other):
        return (self - self._coerce(other))._sign() >= 0

    # -- formatting --------------------------------------------------------

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        if self.b == 1:
            root = f"sqrt({self.d})"
        elif self.b == -1:
            root = f"-sqrt({self.d})"
        else:
            root = f"{self.b}*sqrt({self.d})"
        if self.a == 0:
            return root
        sign = "+" if not root.startswith("-") else ""
        return f"{self.a}{sign}{root}"

    def __repr__(self):
        return f"ExactScalar({self})"


ZERO = ExactScalar(0)
ONE = ExactScalar(1)

_SQRT_RE = re.compile(
    r"^(?P<a>[+-]?\d+(?:/\d+)?)?"
    r"(?P<sign>[+-])?"
    r"(?:(?P<b>\d+(?:/\d+)?)\*)?"
    r"sqrt\((?P<d>[+-]?\d+(?:/\d+)?)\)$"
)


def parse_scalar(text: str) -> ExactScalar:
    """Parse 'p/q' or 'a+b*sqrt(d)' (and obvious variants) into a scalar."""
    s = text.strip().replace(" ", "")
    try:
        return ExactScalar(Fraction(s))
    except ValueError:
        pass
    m = _SQRT_RE.match(s)
    if not m:
        raise ValueError(f"cannot parse scalar literal {text!r}")
    if m.group("a") and m.group("sign") is None:
        # forms like "3sqrt(2)" are ambiguous; reject
        raise ValueError(f"cannot parse scalar literal {text!r}")
    a = Fraction(m.group("a")) if m.group("a") else Fraction(0)
    b = Fraction(m.group("b")) if m.group("b") else Fraction(1)
    if m.group("sign") == "-":
        b = -b
    return ExactScalar(a, b, Fraction(m.group("d")))


def scalar(x) -> ExactScalar:
    """Convenience coercion from int/Fraction/str/ExactScalar."""
    if isinstance(x, ExactScalar):
        return x
    if isinstance(x, str):
        return parse_scalar(x)
    return ExactScalar(Fraction(x))


class GenericLevel:
    """Marker for a transcendental level.

    Membership tests in (level + 2)Z+ are vacuously false and obstruction
    scans come back empty at a generic level; no exact arithmetic with the
    level itself is possible in this mode.
    """

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "generic"


GENERIC_LEVEL = GenericLevel()


def is_generic(level) -> bool:
    return isinstance(level, GenericLevel)


def in_positive_multiples(x, step) -> bool:
    """Decide x in step*Z+, i.e. x/step is an integer >= 1.  Exact."""
    x = scalar(x)
    step = scalar(step)
    if not step:
        raise ValueError("step must be nonzero")
    if not (x.is_rational() and step.is_rational()):
        raise NonRationalError("membership test needs plain rationals")
    q = x.as_fraction() / step.as_fraction()
    return q.denominator == 1 and q >= 1


# ---------------------------------------------------------------------------
# dense exact matrices


class ExactMatrix:
    """Dense rectangular matrix of ExactScalar entries.

    Zero-row matrices keep an explicit column count (ncols argument) so
    blockwise code can multiply through empty weight blocks.
    """

    __slots__ = ("rows", "_ncols")

    def __init__(self, rows, ncols=None):
        rows = tuple(tuple(scalar(x) for x in r) for r in rows)
        if rows:
            w = len(rows[0])
            if any(len(r) != w for r in rows):
                raise DimensionMismatchError("ragged rows")
        else:
            w = 0 if ncols is None else int(ncols)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "_ncols", w)

    def __setattr__(self, *args):
        raise AttributeError("ExactMatrix is immutable")

    @classmethod
    def zeros(cls, n, m):
        if n == 0:
            return cls([], ncols=m)
        return cls([[ZERO] * m for _ in range(n)])

    @classmethod
    def identity(cls, n):
        return cls([[ONE if i == j else ZERO for j in range(n)] for i in range(n)]) \
            if n else cls([], ncols=0)

    @property
    def nrows(self):
        return len(self.rows)

    @property
    def ncols(self):
        return self._ncols

    @property
    def shape(self):
        return self.nrows, self.ncols

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other):
        return (isinstance(other, ExactMatrix) and self.rows == other.rows
                and self.ncols == other.ncols)

    def __hash__(self):
        return hash((self.rows, self._ncols))

    def __repr__(self):
        body = "; ".join(" ".join(str(x) for x in r) for r in self.rows)
        return f"ExactMatrix[{body}]"

    def is_zero(self):
        return all(not x for r in self.rows for x in r)

    def __add__(self, other):
        if self.shape != other.shape:
            raise DimensionMismatchError("shape mismatch in add")
        return ExactMatrix(
            [[x + y for x, y in zip(r, s)] for r, s in zip(self.rows, other.rows)],
            ncols=self.ncols,
        )

    def __sub__(self, other):
        if self.shape != other.shape:
            raise DimensionMismatchError("shape mismatch in sub")
        return ExactMatrix(
            [[x - y for x, y in zip(r, s)] for r, s in zip(self.rows, other.rows)],
            ncols=self.ncols,
        )

    def scale(self, c):
        c = scalar(c)
        return ExactMatrix([[c * x for x in r] for r in self.rows], ncols=self.ncols)

    def __neg__(self):
        return self.scale(-1)

    def __matmul__(self, other):
        if isinstance(other, ExactMatrix):
            if self.ncols != other.nrows:
                raise DimensionMismatchError("shape mismatch in matmul")
            cols = other.transpose().rows
            return ExactMatrix(
                [[_dot(r, c) for c in cols] for r in self.rows], ncols=other.ncols
            )
        # vector (sequence of scalars)
        v = tuple(scalar(x) for x in other)
        if self.ncols != len(v):
            raise DimensionMismatchError("shape mismatch in matvec")
        return tuple(_dot(r, v) for r in self.rows)

    def transpose(self):
        if not self.rows:
            return ExactMatrix([[]] * self.ncols, ncols=0) if self.ncols \
                else ExactMatrix([], ncols=0)
        return ExactMatrix(list(zip(*self.rows)), ncols=self.nrows)

    def kron(self, other: "ExactMatrix") -> "ExactMatrix":
        out = []
        for r in self.rows:
            for s in other.rows:
                out.append([x * y for x in r for y in s])
        return ExactMatrix(out)

    # -- elimination -------------------------------------------------------

    def rref(self):
        """Reduced row echelon form; returns (matrix, pivot column list)."""
        rows = [list(r) for r in self.rows]
        n, m = self.nrows, self.ncols
        pivots = []
        prow = 0
        for col in range(m):
            pr = None
            for i in range(prow, n):
                if rows[i][col]:
                    pr = i
                    break
            if pr is None:
                continue
            rows[prow], rows[pr] = rows[pr], rows[prow]
            inv = rows[prow][col].inverse()
            rows[prow] = [inv * x for x in rows[prow]]
            for i in range(n):
                if i != prow and rows[i][col]:
                    f = rows[i][col]
                    rows[i] = [x - f * y for x, y in zip(rows[i], rows[prow])]
            pivots.append(col)
            prow += 1
            if prow == n:
                break
        return ExactMatrix(rows, ncols=m), pivots

    def rank(self):
        return len(self.rref()[1])

    def kernel_basis(self):
        """Basis of the null space, in reduced-echelon convention."""
        r, pivots = self.rref()
        pivset = set(pivots)
        free = [j for j in range(self.ncols) if j not in pivset]
        basis = []
        for f in free:
            v = [ZERO] * self.ncols
            v[f] = ONE
            for i, p in enumerate(pivots):
                v[p] = -r[i, f]
            basis.append(tuple(v))
        return basis

    def solve(self, rhs):
        """Solve self @ x = rhs; returns LinearSolution."""
        rhs = tuple(scalar(x) for x in rhs)
        if len(rhs) != self.nrows:
            raise DimensionMismatchError("rhs length mismatch")
        if self.nrows == 0:
            return LinearSolution(True, tuple([ZERO] * self.ncols), self.kernel_basis())
        aug = ExactMatrix([list(r) + [b] for r, b in zip(self.rows, rhs)])
        r, pivots = aug.rref()
        if self.ncols in pivots:
            return LinearSolution(False, None, [])
        x = [ZERO] * self.ncols
        for i, p in enumerate(pivots):
            x[p] = r[i, self.ncols]
        return LinearSolution(True, tuple(x), self.kernel_basis())

    def solve_matrix(self, rhs: "ExactMatrix") -> "ExactMatrix":
        """Solve self @ X = rhs for a unique X; raises if singular."""
        if self.nrows != self.ncols or self.nrows != rhs.nrows:
            raise DimensionMismatchError("solve_matrix needs square system")
        n, m = self.nrows, rhs.ncols
        aug = ExactMatrix([list(r) + list(s) for r, s in zip(self.rows, rhs.rows)])
        red, pivots = aug.rref()
        if len(pivots) < n or pivots[:n] != list(range(n)):
            raise ZeroDivisionError("singular matrix in solve_matrix")
        return ExactMatrix([[red[i, n + j] for j in range(m)] for i in range(n)])

    def inverse(self) -> "ExactMatrix":
        return self.solve_matrix(ExactMatrix.identity(self.nrows))

    def eigenspace(self, mu):
        """Exact basis of ker(self - mu*I); empty when mu is no eigenvalue."""
        if self.nrows != self.ncols:
            raise DimensionMismatchError("eigenspace needs a square matrix")
        mu = scalar(mu)
        shifted = self - ExactMatrix.identity(self.nrows).scale(mu)
        return shifted.kernel_basis()


class LinearSolution:
    """Solution set of a linear system: x0 + span(kernel)."""

    __slots__ = ("consistent", "particular", "kernel")

    def __init__(self, consistent, particular, kernel):
        self.consistent = consistent
        self.particular = particular
        self.kernel = kernel

    def __repr__(self):
        if not self.consistent:
            return "LinearSolution(inconsistent)"
        return f"LinearSolution(x0={self.particular}, kernel dim {len(self.kernel)})"


def _dot(r, c):
    out = ZERO
    for x, y in zip(r, c):
        if x and y:
            out = out + x * y
    return out


def solve_linear(system: ExactMatrix, rhs) -> LinearSolution:
    return system.solve(rhs)


def eigenspace(m: ExactMatrix, mu) -> list[tuple]:
    return m.eigenspace(mu)


def vec_add(u, v):
    return tuple(x + y for x, y in zip(u, v))


def vec_scale(c, v):
    c = scalar(c)
    return tuple(c * x for x in v)


def vec_is_zero(v):
    return all(not x for x in v)
