"""Finite-dimensional simple Lie algebras given by structure constants.

An algebra is described by a basis, a bracket table, an invariant-form Gram
matrix and the dual Coxeter number.  Only sl2 ships as a validated built-in;
other algebras may be loaded from JSON/TOML config files and are trusted to
the extent that validate() can check them.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .errors import DomainError, KzFusionError
from .exact import ONE, ZERO, ExactMatrix, ExactScalar, scalar


class SimpleLieAlgebra:
    def __init__(self, names, brackets, gram, dual_coxeter,
                 weight_shifts=None, transpose_perm=None,
                 long_root_normalized=True):
        """brackets: {(i, j): ((k, coeff), ...)} for basis indices i, j.

        weight_shifts: rational ad-h weight of each basis element (needed by
        the weight-module layer).  transpose_perm: basis permutation giving
        the Cartan anti-involution (needed by the contravariant form).
        """
        self.names = tuple(names)
        self.dim = len(self.names)
        self._brackets = {
            (i, j): tuple((k, scalar(c)) for k, c in terms if scalar(c))
            for (i, j), terms in brackets.items()
        }
        self.gram = gram
        self.dual_coxeter = scalar(dual_coxeter)
        self.weight_shifts = (
            tuple(Fraction(w) for w in weight_shifts) if weight_shifts else None
        )
        self.transpose_perm = tuple(transpose_perm) if transpose_perm else None
        self.long_root_normalized = long_root_normalized
        self._gram_inv = None
        self._casimir_pairs = None

    def index(self, name: str) -> int:
        return self.names.index(name)

    def bracket_basis(self, i: int, j: int):
        """[x_i, x_j] as a sparse list of (index, coeff)."""
        return self._brackets.get((i, j), ())

    def bracket(self, x, y):
        """Bracket of coefficient vectors, bilinear extension."""
        out = [ZERO] * self.dim
        for i, ci in enumerate(x):
            if not ci:
                continue
            for j, cj in enumerate(y):
                if not cj:
                    continue
                for k, c in self.bracket_basis(i, j):
                    out[k] = out[k] + ci * cj * c
        return tuple(out)

    def pairing(self, x, y) -> ExactScalar:
        """Invariant form of two coefficient vectors."""
        out = ZERO
        for i, ci in enumerate(x):
            if not ci:
                continue
            for j, cj in enumerate(y):
                if cj and self.gram[i, j]:
                    out = out + ci * cj * self.gram[i, j]
        return out

    def basis_vector(self, i: int):
        return tuple(ONE if j == i else ZERO for j in range(self.dim))

    def gram_inverse(self) -> ExactMatrix:
        if self._gram_inv is None:
            self._gram_inv = self.gram.inverse()
        return self._gram_inv

    def dual_pairs(self):
        """Pairs (x_a, x^a) with <x_a, x^b> = delta, as coefficient vectors."""
        inv = self.gram_inverse()
        return [
            (self.basis_vector(a), tuple(inv[a, b] for b in range(self.dim)))
            for a in range(self.dim)
        ]

    def casimir_pairs(self):
        """Sparse expansion of sum_a x_a (x^a .) as triples (i, j, coeff).

        Everything written with an orthonormal basis, sum_i g_i(..) g_i(..),
        is evaluated as sum_{i,j} coeff_{ij} x_i(..) x_j(..) with these
        coefficients (the inverse Gram matrix); the two expressions agree as
        tensors and stay rational.
        """
        if self._casimir_pairs is None:
            inv = self.gram_inverse()
            self._casimir_pairs = tuple(
                (i, j, inv[i, j])
                for i in range(self.dim)
                for j in range(self.dim)
                if inv[i, j]
            )
        return self._casimir_pairs

    def shift(self, i: int) -> Fraction:
        if self.weight_shifts is None:
            raise DomainError("algebra carries no weight grading data")
        return self.weight_shifts[i]

    def transpose_index(self, i: int) -> int:
        if self.transpose_perm is None:
            raise DomainError("algebra carries no transpose involution")
        return self.transpose_perm[i]

    # -- validation ---------------------------------------------------------

    def validate(self):
        """Check antisymmetry, Jacobi, form symmetry/invariance/nondegeneracy.

        Raises KzFusionError with a description of the first failure.
        """
        n = self.dim
        basis = [self.basis_vector(i) for i in range(n)]
        for i in range(n):
            for j in range(n):
                lhs = self.bracket(basis[i], basis[j])
                rhs = self.bracket(basis[j], basis[i])
                if any(a + b for a, b in zip(lhs, rhs)):
                    raise KzFusionError(
                        f"bracket not antisymmetric at ({self.names[i]},{self.names[j]})"
                    )
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    acc = [ZERO] * n
                    for x, y, z in ((i, j, k), (j, k, i), (k, i, j)):
                        term = self.bracket(basis[x], self.bracket(basis[y], basis[z]))
                        acc = [a + t for a, t in zip(acc, term)]
                    if any(acc):
                        raise KzFusionError(
                            f"Jacobi identity fails at "
                            f"({self.names[i]},{self.names[j]},{self.names[k]})"
                        )
        if self.gram.shape != (n, n):
            raise KzFusionError("Gram matrix has wrong shape")
        if self.gram != self.gram.transpose():
            raise KzFusionError("invariant form is not symmetric")
        if self.gram.rank() != n:
            raise KzFusionError("invariant form is degenerate")
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    lhs = self.pairing(self.bracket(basis[i], basis[j]), basis[k])
                    rhs = self.pairing(basis[i], self.bracket(basis[j], basis[k]))
                    if lhs != rhs:
                        raise KzFusionError(
                            f"form not invariant at "
                            f"({self.names[i]},{self.names[j]},{self.names[k]})"
                        )
        if self.transpose_perm is not None:
            p = self.transpose_perm
            if sorted(p) != list(range(n)):
                raise KzFusionError("transpose map is not a basis permutation")
            for i in range(n):
                if p[p[i]] != i:
                    raise KzFusionError("transpose map is not an involution")
                for j in range(n):
                    # anti-automorphism: sigma([x,y]) = [sigma(y), sigma(x)]
                    lhs = [ZERO] * n
                    for k, c in self.bracket_basis(i, j):
                        lhs[p[k]] = lhs[p[k]] + c
                    rhs = self.bracket(basis[p[j]], basis[p[i]])
                    if tuple(lhs) != tuple(rhs):
                        raise KzFusionError("transpose map is not an anti-automorphism")
        return True


def sl2() -> SimpleLieAlgebra:
    """The built-in sl2 with basis (e, h, f), <h,h> = 2, <e,f> = 1, hvee = 2."""
    e, h, f = 0, 1, 2
    brackets = {
        (e, f): ((h, 1),),
        (f, e): ((h, -1),),
        (h, e): ((e, 2),),
        (e, h): ((e, -2),),
        (h, f): ((f, -2),),
        (f, h): ((f, 2),),
    }
    gram = ExactMatrix([[0, 0, 1], [0, 2, 0], [1, 0, 0]])
    return SimpleLieAlgebra(
        names=("e", "h", "f"),
        brackets=brackets,
        gram=gram,
        dual_coxeter=2,
        weight_shifts=(2, 0, -2),
        transpose_perm=(2, 1, 0),
    )


# ---------------------------------------------------------------------------
# probe representations, used to verify operator identities on modules


class ProbeRep:
    """A representation given by one exact matrix per basis element."""

    def __init__(self, name, matrices):
        self.name = name
        self.matrices = tuple(matrices)
        self.dim = self.matrices[0].nrows if self.matrices else 0

    def validate(self, alg: SimpleLieAlgebra):
        for i in range(alg.dim):
            for j in range(alg.dim):
                comm = self.matrices[i] @ self.matrices[j] - self.matrices[j] @ self.matrices[i]
                want = ExactMatrix.zeros(self.dim, self.dim)
                for k, c in alg.bracket_basis(i, j):
                    want = want + self.matrices[k].scale(c)
                if comm != want:
                    raise KzFusionError(
                        f"probe {self.name}: commutator mismatch at "
                        f"({alg.names[i]},{alg.names[j]})"
                    )
        return True

    def act_element(self, coeffs) -> ExactMatrix:
        out = ExactMatrix.zeros(self.dim, self.dim)
        for i, c in enumerate(coeffs):
            if c:
                out = out + self.matrices[i].scale(c)
        return out


def adjoint_probe(alg: SimpleLieAlgebra) -> ProbeRep:
    mats = []
    for i in range(alg.dim):
        rows = [[ZERO] * alg.dim for _ in range(alg.dim)]
        for j in range(alg.dim):
            for k, c in alg.bracket_basis(i, j):
                rows[k][j] = rows[k][j] + c
        mats.append(ExactMatrix(rows))
    return ProbeRep("adjoint", mats)


def casimir_on_probe(alg: SimpleLieAlgebra, probe: ProbeRep) -> ExactMatrix:
    out = ExactMatrix.zeros(probe.dim, probe.dim)
    for i, j, c in alg.casimir_pairs():
        out = out + (probe.matrices[i] @ probe.matrices[j]).scale(c)
    return out


def check_lemma1(alg: SimpleLieAlgebra, g, probes) -> bool:
    """sum_a [g,x_a] (x) x^a = -sum_a x_a (x) [g,x^a], tested on U (x) U."""
    g = tuple(scalar(c) for c in g)
    for probe in probes:
        n = probe.dim
        lhs = ExactMatrix.zeros(n * n, n * n)
        rhs = ExactMatrix.zeros(n * n, n * n)
        for i, j, c in alg.casimir_pairs():
            gi = alg.bracket(g, alg.basis_vector(i))
            gj = alg.bracket(g, alg.basis_vector(j))
            lhs = lhs + probe.act_element(gi).kron(probe.matrices[j]).scale(c)
            rhs = rhs + probe.matrices[i].kron(probe.act_element(gj)).scale(c)
        if not (lhs + rhs).is_zero():
            return False
    return True


def check_lemma2(alg: SimpleLieAlgebra, g, probes) -> bool:
    """sum_a [g,x_a] x^a = hvee * g as operators on each probe."""
    g = tuple(scalar(c) for c in g)
    for probe in probes:
        acc = ExactMatrix.zeros(probe.dim, probe.dim)
        for i, j, c in alg.casimir_pairs():
            gi = alg.bracket(g, alg.basis_vector(i))
            acc = acc + (probe.act_element(gi) @ probe.matrices[j]).scale(c)
        want = probe.act_element(g).scale(alg.dual_coxeter)
        if acc != want:
            return False
    return True


# ---------------------------------------------------------------------------
# config loading


def algebra_from_dict(data: dict) -> SimpleLieAlgebra:
    names = list(data["basis"])
    idx = {n: i for i, n in enumerate(names)}

    def _key(x):
        return idx[x] if isinstance(x, str) else int(x)

    brackets: dict = {}
    for a, b, c, value in data["brackets"]:
        i, j, k = _key(a), _key(b), _key(c)
        brackets.setdefault((i, j), []).append((k, scalar(str(value))))
    # fill missing opposite orders by antisymmetry
    for (i, j), terms in list(brackets.items()):
        if (j, i) not in brackets and i != j:
            brackets[(j, i)] = [(k, -c) for k, c in terms]
    gram = ExactMatrix([[scalar(str(x)) for x in row] for row in data["gram"]])
    return SimpleLieAlgebra(
        names=names,
        brackets={k: tuple(v) for k, v in brackets.items()},
        gram=gram,
        dual_coxeter=scalar(str(data["dual_coxeter"])),
        weight_shifts=[Fraction(str(w)) for w in data["weights"]]
        if "weights" in data
        else None,
        transpose_perm=[_key(x) for x in data["transpose"]]
        if "transpose" in data
        else None,
        long_root_normalized=bool(data.get("long_root_normalized", True)),
    )


def load_algebra(source: str | Path) -> SimpleLieAlgebra:
    """Load 'builtin:sl2' or an algebra definition file (.json or .toml)."""
    if isinstance(source, str) and source.startswith("builtin:"):
        name = source.split(":", 1)[1]
        if name != "sl2":
            raise DomainError(f"unknown builtin algebra {name!r}")
        return sl2()
    path = Path(source)
    text = path.read_text()
    if path.suffix == ".toml":
        try:
            import tomllib
        except ModuleNotFoundError:
            import tomli as tomllib

        data = tomllib.loads(text)
    else:
        data = json.loads(text)
    return algebra_from_dict(data)


def algebra_to_dict(alg: SimpleLieAlgebra) -> dict:
    triples = []
    for (i, j), terms in sorted(alg._brackets.items()):
        for k, c in terms:
            triples.append([alg.names[i], alg.names[j], alg.names[k], str(c)])
    out = {
        "basis": list(alg.names),
        "brackets": triples,
        "gram": [[str(x) for x in row] for row in alg.gram.rows],
        "dual_coxeter": str(alg.dual_coxeter),
    }
    if alg.weight_shifts is not None:
        out["weights"] = [str(w) for w in alg.weight_shifts]
    if alg.transpose_perm is not None:
        out["transpose"] = [alg.names[i] for i in alg.transpose_perm]
    return out
