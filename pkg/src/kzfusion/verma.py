"""Generalized Verma modules for the affine algebra at a fixed level.

Vectors are combinations of PBW monomials g_1(-n_1)...g_k(-n_k) u with
depths weakly decreasing and ties broken by the basis order, applied to a
base-module weight line u.  The normal-ordering engine rewrites any mode
application into this canonical form using the affine commutation relation
[g(m), h(n)] = [g,h](m+n) + m <g,h> delta_{m+n,0} * level.

Also here: the two Sugawara operators that the construction needs (degree
weights and the derivative direction), the contravariant form and its
radical, and the canonical degree-wise pairing against the Verma module of
the dual base weight (the contragredient machinery).
"""

from __future__ import annotations

from fractions import Fraction

from .errors import (
    CriticalLevelError,
    CutoffExceededError,
    DomainError,
    WindowEscapeError,
)
from .exact import ONE, ZERO, ExactMatrix, ExactScalar, is_generic, scalar
from .gmodules import GHom, WeightModule, hom_space
from .liealg import SimpleLieAlgebra

Monomial = tuple  # tuple of (basis_index, depth) pairs in canonical order


def monomial_degree(mono: Monomial) -> int:
    return sum(n for _, n in mono)


def monomial_key(a: int, depth: int):
    return (-depth, a)


def monomial_str(mono: Monomial, alg: SimpleLieAlgebra) -> str:
    return "".join(f"{alg.names[a]}(-{n})" for a, n in mono) or "1"


class GradedVector:
    """Finite combination of (monomial, base weight line) with exact coeffs."""

    __slots__ = ("module", "terms")

    def __init__(self, module: "GeneralizedVermaModule", terms: dict):
        self.module = module
        self.terms = {
            (mono, Fraction(w)): scalar(c)
            for (mono, w), c in terms.items()
            if scalar(c)
        }

    def __add__(self, other: "GradedVector") -> "GradedVector":
        if other.module is not self.module:
            raise DomainError("vectors live in different modules")
        out = dict(self.terms)
        for key, c in other.terms.items():
            out[key] = out.get(key, ZERO) + c
        return GradedVector(self.module, out)

    def scale(self, c) -> "GradedVector":
        c = scalar(c)
        return GradedVector(self.module, {k: c * v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + other.scale(-1)

    def is_zero(self) -> bool:
        return not self.terms

    def degrees(self):
        return sorted({monomial_degree(m) for m, _ in self.terms})

    def weights(self):
        alg = self.module.alg
        return sorted({
            sum((alg.shift(a) for a, _ in mono), Fraction(0)) + w
            for mono, w in self.terms
        })

    def degree(self) -> int:
        ds = self.degrees()
        if len(ds) != 1:
            raise DomainError(f"vector is degree-mixed: {ds}")
        return ds[0]

    def weight(self) -> Fraction:
        ws = self.weights()
        if len(ws) != 1:
            raise DomainError(f"vector is weight-mixed: {ws}")
        return ws[0]

    def __eq__(self, other):
        return (
            isinstance(other, GradedVector)
            and self.module is other.module
            and self.terms == other.terms
        )

    def __repr__(self):
        alg = self.module.alg
        bits = [
            f"({c})*{monomial_str(m, alg)}[w={w}]"
            for (m, w), c in sorted(self.terms.items())
        ]
        return " + ".join(bits) or "0"

    def to_json(self) -> list:
        alg = self.module.alg
        out = []
        for (mono, w), c in sorted(self.terms.items()):
            out.append({
                "monomial": [[alg.names[a], n] for a, n in mono],
                "base": str(w),
                "coeff": str(c),
            })
        return out


class GeneralizedVermaModule:
    """Degree-truncated Verma module induced from a weight module base."""

    def __init__(self, alg: SimpleLieAlgebra, level, base: WeightModule,
                 cutoff: int = 6):
        level = scalar(level)
        if level == -alg.dual_coxeter:
            raise CriticalLevelError("level equals -hvee")
        self.alg = alg
        self.level = level
        self.base = base
        self.cutoff = cutoff
        self._insert_cache: dict = {}
        self._ann_cache: dict = {}
        self._basis_cache: dict = {}
        self._mono_cache: dict = {}

    # -- construction of vectors ---------------------------------------------

    def zero(self) -> GradedVector:
        return GradedVector(self, {})

    def vector(self, mono: Monomial, base_w) -> GradedVector:
        return GradedVector(self, {(tuple(mono), Fraction(base_w)): ONE})

    def base_conformal_weight(self) -> ExactScalar:
        return conformal_weight_from_casimir(
            self.alg, self.base.casimir_scalar, self.level
        )

    # -- normal ordering -------------------------------------------------------

    def _insert_creation(self, a: int, depth: int, mono: Monomial) -> dict:
        """Canonical form of x_a(-depth) * mono as {monomial: coeff}."""
        key = (a, depth, mono)
        hit = self._insert_cache.get(key)
        if hit is not None:
            return hit
        if not mono or monomial_key(a, depth) <= monomial_key(*mono[0]):
            out = {((a, depth),) + mono: ONE}
        else:
            (b, n1), tail = mono[0], mono[1:]
            out: dict = {}
            for m2, c2 in self._insert_creation(a, depth, tail).items():
                for m3, c3 in self._insert_creation(b, n1, m2).items():
                    out[m3] = out.get(m3, ZERO) + c2 * c3
            for k, c in self.alg.bracket_basis(a, b):
                for m2, c2 in self._insert_creation(k, depth + n1, tail).items():
                    out[m2] = out.get(m2, ZERO) + c * c2
            out = {m: c for m, c in out.items() if c}
        self._insert_cache[key] = out
        return out

    def _apply_ann(self, a: int, n: int, mono: Monomial, base_w: Fraction) -> dict:
        """Canonical form of x_a(n), n >= 0, on mono (x) u_{base_w}."""
        key = (a, n, mono, base_w)
        hit = self._ann_cache.get(key)
        if hit is not None:
            return hit
        out: dict = {}
        if not mono:
            if n == 0:
                tgt, c = self.base.act_coeff(a, base_w)
                if c:
                    out[((), tgt)] = c
        else:
            (b, n1), tail = mono[0], mono[1:]
            for (m2, w2), c2 in self._apply_ann(a, n, tail, base_w).items():
                for m3, c3 in self._insert_creation(b, n1, m2).items():
                    k2 = (m3, w2)
                    out[k2] = out.get(k2, ZERO) + c2 * c3
            mode2 = n - n1
            for k, c in self.alg.bracket_basis(a, b):
                if mode2 >= 0:
                    for (m2, w2), c2 in self._apply_ann(k, mode2, tail, base_w).items():
                        k2 = (m2, w2)
                        out[k2] = out.get(k2, ZERO) + c * c2
                else:
                    for m2, c2 in self._insert_creation(k, -mode2, tail).items():
                        k2 = (m2, base_w)
                        out[k2] = out.get(k2, ZERO) + c * c2
            if n == n1:
                central = self.alg.gram[a, b]
                if central:
                    coeff = central * n * self.level
                    k2 = (tail, base_w)
                    out[k2] = out.get(k2, ZERO) + coeff
        out = {k: c for k, c in out.items() if c}
        self._ann_cache[key] = out
        return out

    def apply(self, a_idx: int, mode: int, vec: GradedVector) -> GradedVector:
        """Exact action of x_a(mode) in canonical PBW form."""
        if vec.is_zero():
            return vec
        if mode < 0 and max(vec.degrees()) - mode > self.cutoff:
            raise CutoffExceededError(
                f"degree {max(vec.degrees()) - mode} exceeds cutoff {self.cutoff}"
            )
        out: dict = {}
        for (mono, w), c in vec.terms.items():
            if mode < 0:
                for m2, c2 in self._insert_creation(a_idx, -mode, mono).items():
                    k2 = (m2, w)
                    out[k2] = out.get(k2, ZERO) + c * c2
            else:
                for k2, c2 in self._apply_ann(a_idx, mode, mono, w).items():
                    out[k2] = out.get(k2, ZERO) + c * c2
        return GradedVector(self, out)

    def apply_element(self, coeffs, mode: int, vec: GradedVector) -> GradedVector:
        out = self.zero()
        for a_idx, c in enumerate(coeffs):
            c = scalar(c)
            if c:
                out = out + self.apply(a_idx, mode, vec).scale(c)
        return out

    # -- graded bases -----------------------------------------------------------

    def monomials(self, degree: int):
        """All canonical monomials of the given total depth."""
        if degree in self._mono_cache:
            return self._mono_cache[degree]
        from itertools import combinations_with_replacement

        def partitions(n, maxpart):
            if n == 0:
                yield ()
                return
            for p in range(min(n, maxpart), 0, -1):
                for rest in partitions(n - p, p):
                    yield (p,) + rest

        out = []
        for part in partitions(degree, degree):
            # group equal depths and decorate with weakly increasing basis idx
            groups = []
            i = 0
            while i < len(part):
                j = i
                while j < len(part) and part[j] == part[i]:
                    j += 1
                groups.append((part[i], j - i))
                i = j
            choices = [
                list(combinations_with_replacement(range(self.alg.dim), cnt))
                for _, cnt in groups
            ]

            def expand(gi, prefix):
                if gi == len(groups):
                    out.append(tuple(prefix))
                    return
                depth, _ = groups[gi]
                for combo in choices[gi]:
                    expand(gi + 1, prefix + [(a, depth) for a in combo])

            expand(0, [])
        out.sort()
        self._mono_cache[degree] = tuple(out)
        return self._mono_cache[degree]

    def degree_basis(self, degree: int, weight) -> tuple:
        """Deterministic ordered basis of the (degree, weight) subspace."""
        if degree > self.cutoff:
            raise CutoffExceededError(f"degree {degree} exceeds cutoff {self.cutoff}")
        weight = Fraction(weight)
        key = (degree, weight)
        if key in self._basis_cache:
            return self._basis_cache[key]
        out = []
        for mono in self.monomials(degree):
            shift = sum((self.alg.shift(a) for a, _ in mono), Fraction(0))
            bw = weight - shift
            status = self.base.weight_status(bw)
            if status == "present":
                out.append((mono, bw))
            elif status == "truncated":
                raise WindowEscapeError(
                    f"base window of {self.base.label()} misses weight {bw} "
                    f"needed by degree-{degree} weight-{weight} basis"
                )
        self._basis_cache[key] = tuple(out)
        return self._basis_cache[key]

    def expand(self, vec: GradedVector, degree: int, weight) -> tuple:
        """Coefficient column of vec against degree_basis(degree, weight)."""
        basis = self.degree_basis(degree, weight)
        index = {b: i for i, b in enumerate(basis)}
        col = [ZERO] * len(basis)
        for key, c in vec.terms.items():
            if key not in index:
                raise DomainError(f"term {key} outside block ({degree},{weight})")
            col[index[key]] = c
        return tuple(col)

    def from_column(self, degree: int, weight, col) -> GradedVector:
        basis = self.degree_basis(degree, weight)
        return GradedVector(self, {b: c for b, c in zip(basis, col)})

    # -- mode matrices ---------------------------------------------------------

    def mode_matrix(self, a_idx: int, mode: int, degree: int, weight) -> ExactMatrix:
        """Matrix of x_a(mode) from block (degree, weight) to its target block."""
        src = self.degree_basis(degree, weight)
        tgt_degree = degree - mode
        tgt_weight = Fraction(weight) + self.alg.shift(a_idx)
        tgt = self.degree_basis(tgt_degree, tgt_weight) if 0 <= tgt_degree <= self.cutoff \
            else ()
        index = {b: i for i, b in enumerate(tgt)}
        rows = [[ZERO] * len(src) for _ in tgt]
        for col, (mono, bw) in enumerate(src):
            img = self.apply(a_idx, mode, self.vector(mono, bw))
            for key, c in img.terms.items():
                rows[index[key]][col] = c
        return ExactMatrix(rows, ncols=len(src))

    # -- Sugawara operators ------------------------------------------------------

    def _sugawara_norm(self) -> ExactScalar:
        return (self.level + self.alg.dual_coxeter).inverse()

    def sugawara_l0(self, vec: GradedVector) -> GradedVector:
        """Degree-grading operator; acts on block (m, lam) by h_base + m."""
        if vec.is_zero():
            return vec
        inv = self._sugawara_norm()
        deg = max(vec.degrees())
        out = self.zero()
        for i, j, c in self.alg.casimir_pairs():
            t = self.apply(i, 0, self.apply(j, 0, vec))
            out = out + t.scale(c * inv / 2)
            for n in range(1, deg + 1):
                t = self.apply(i, -n, self.apply(j, n, vec))
                out = out + t.scale(c * inv)
        return out

    def sugawara_lminus1(self, vec: GradedVector) -> GradedVector:
        """The derivative-direction operator; raises degree by one."""
        if vec.is_zero():
            return vec
        inv = self._sugawara_norm()
        deg = max(vec.degrees())
        out = self.zero()
        for i, j, c in self.alg.casimir_pairs():
            for n in range(0, deg + 1):
                t = self.apply(i, -n - 1, self.apply(j, n, vec))
                out = out + t.scale(c * inv)
        return out

    def label(self) -> str:
        return f"V({self.level},{self.base.label()})"


def conformal_weight_from_casimir(alg, casimir, level) -> ExactScalar:
    if is_generic(level):
        raise DomainError("conformal weights are level-dependent; "
                          "not available at a generic level")
    level = scalar(level)
    if level == -alg.dual_coxeter:
        raise CriticalLevelError("level equals -hvee")
    return casimir / (2 * (level + alg.dual_coxeter))


def sl2_conformal_weight(lam, level) -> ExactScalar:
    """Closed form lam(lam+2)/(4(level+2)) for sl2 weight labels."""
    lam = Fraction(lam)
    if is_generic(level):
        raise DomainError("not available at a generic level")
    level = scalar(level)
    if level == scalar(-2):
        raise CriticalLevelError("level equals -hvee")
    return scalar(lam * (lam + 2)) / (4 * (level + 2))


# ---------------------------------------------------------------------------
# contravariant form and radical


def base_contravariant_diag(base: WeightModule, w) -> ExactScalar:
    """Diagonal of the contravariant form on the base, anchored to 1."""
    w = Fraction(w)
    if base.kind in ("finite", "highest"):
        top = Fraction(base.params["p"] if base.kind == "finite"
                       else base.params["lam"])
        k = (top - w) / 2
        if k.denominator != 1 or k < 0:
            raise DomainError(f"no weight {w} in {base.label()}")
        out = ONE
        for i in range(1, int(k) + 1):
            out = out * scalar(i * (top - i + 1))
        return out
    # dense: anchor at the representative weight; f-coefficients never vanish
    lam = base.params["lam"]
    out = ONE
    mu = lam
    while mu < w:
        mu += 2
        out = out * base._coeff(base.alg.index("f"), mu)
    while mu > w:
        out = out / base._coeff(base.alg.index("f"), mu)
        mu -= 2
    return out


def _transpose_ops(module: GeneralizedVermaModule, mono: Monomial):
    alg = module.alg
    return [(alg.transpose_index(a), n) for a, n in mono]


def contravariant_pairing(module: GeneralizedVermaModule,
                          x: GradedVector, y: GradedVector) -> ExactScalar:
    """Shapovalov-type form <x, y> induced by the Cartan anti-involution."""
    out = ZERO
    for (mono, bw), cx in x.terms.items():
        reduced = y
        for a, n in _transpose_ops(module, mono):
            reduced = module.apply(a, n, reduced)
            if reduced.is_zero():
                break
        for (mono2, bw2), cy in reduced.terms.items():
            if mono2 == () and bw2 == bw:
                out = out + cx * cy * base_contravariant_diag(module.base, bw)
    return out


def contravariant_gram(module: GeneralizedVermaModule, degree: int, weight) \
        -> ExactMatrix:
    basis = module.degree_basis(degree, weight)
    vecs = [module.vector(m, w) for m, w in basis]
    return ExactMatrix([
        [contravariant_pairing(module, x, y) for y in vecs] for x in vecs
    ])


def contravariant_radical(module_or_factory, degree: int, level=None, alg=None,
                          base_descriptor=None) -> dict:
    """Radical of the contravariant form at a degree, per weight block.

    Called with a concrete module for an exact level.  For the generic level
    pass level=GENERIC_LEVEL together with alg and a base descriptor; Gram
    minors are polynomials in the level of degree at most degree*blockdim,
    so evaluating at enough sample levels determines the generic rank
    exactly (a nonzero polynomial of degree D cannot vanish at D+1 points).
    """
    if not is_generic(level):
        module = module_or_factory
        out = {}
        for w in _block_weights(module, degree):
            gram = contravariant_gram(module, degree, w)
            kernel = gram.kernel_basis()
            if kernel:
                out[w] = [module.from_column(degree, w, v) for v in kernel]
        return out
    # generic level: sample
    if alg is None or base_descriptor is None:
        raise DomainError("generic radical needs alg and base descriptor")
    base0 = WeightModule.from_descriptor(alg, base_descriptor)
    probe_module = GeneralizedVermaModule(alg, scalar(1), base0, cutoff=degree)
    weights = _block_weights(probe_module, degree)
    for w in weights:
        dim = len(probe_module.degree_basis(degree, w))
        bound = degree * dim + 1
        samples = []
        s = 1
        while len(samples) < bound:
            if scalar(s) != -alg.dual_coxeter:
                samples.append(s)
            s += 1
        best = 0
        for s in samples:
            base = WeightModule.from_descriptor(alg, base_descriptor)
            mod = GeneralizedVermaModule(alg, scalar(s), base, cutoff=degree)
            best = max(best, contravariant_gram(mod, degree, w).rank())
            if best == dim:
                break
        if best < dim:
            raise DomainError(
                "the contravariant form is generically degenerate here; "
                "exact radical vectors are unavailable in generic mode"
            )
    return {}


def _block_weights(module: GeneralizedVermaModule, degree: int):
    seen = set()
    for mono in module.monomials(degree):
        shift = sum((module.alg.shift(a) for a, _ in mono), Fraction(0))
        for bw in module.base.weights():
            seen.add(shift + bw)
    return sorted(
        (w for w in seen if module.degree_basis(degree, w)),
        reverse=True,
    )


# ---------------------------------------------------------------------------
# contragredient side


def invariant_base_pairing(alg, lam3: int) -> dict:
    """Invariant pairing on L_{lam3} x L_{lam3}, per weight: w paired with -w.

    Normalized so that the pairing of the highest and lowest lines is 1.
    """
    fin = WeightModule.finite_irreducible(alg, lam3)
    triv = WeightModule.finite_irreducible(alg, 0)
    homs = hom_space(fin, fin, triv, expected_dim=1)
    hom = homs[0]
    row = hom.block(Fraction(0))
    pairs = hom.tensor.block(Fraction(0))
    table = {w1: c for (w1, _), c in zip(pairs, row)}
    norm = table[Fraction(lam3)].inverse()
    return {w: c * norm for w, c in table.items()}


class ContragredientModule:
    """Graded dual of V(level, lam3*), with lam3* = lam3 for sl2.

    Elements at degree m are functionals on the degree-m blocks of the
    underlying Verma module, stored as coefficient rows against its
    degree bases.  The action is <g(n) phi, w> = -<phi, g(-n) w>.
    """

    def __init__(self, alg, level, lam3: int, cutoff: int = 6):
        if not (isinstance(lam3, int) and lam3 >= 0):
            raise DomainError("contragredient targets need lam3 in N")
        self.alg = alg
        self.lam3 = lam3
        base = WeightModule.finite_irreducible(alg, lam3)
        self.dual_verma = GeneralizedVermaModule(alg, level, base, cutoff)
        self.base_pairing = invariant_base_pairing(alg, lam3)
        self.level = self.dual_verma.level
        self.cutoff = cutoff

    def label(self) -> str:
        return f"V({self.level},L_{self.lam3})'"

    def block_dim(self, degree: int, weight) -> int:
        """Dimension of the contragredient (degree, weight) block."""
        return len(self.dual_verma.degree_basis(degree, -Fraction(weight)))

    def mode_matrix(self, a_idx: int, mode: int, degree: int, weight) -> ExactMatrix:
        """x_a(mode) on functionals from block (degree, weight).

        Equals minus the transpose of x_a(-mode) on the underlying Verma
        module between the mirrored blocks.
        """
        w = Fraction(weight)
        tgt_degree = degree - mode
        under = self.dual_verma.mode_matrix(
            a_idx, -mode, tgt_degree, -(w + self.alg.shift(a_idx))
        )
        return under.transpose().scale(-1)

    def seed_row(self, weight, value_coeff) -> tuple:
        """Functional at degree 0 representing value_coeff * u_{weight}."""
        w = Fraction(weight)
        basis = self.dual_verma.degree_basis(0, -w)
        p = self.base_pairing.get(w, ZERO)
        return tuple(value_coeff * p for _ in basis) if basis else ()


def canonical_pairing(module: GeneralizedVermaModule,
                      dual: GeneralizedVermaModule,
                      x: GradedVector, y: GradedVector,
                      base_pairing: dict, reduce_right: bool = False) -> ExactScalar:
    """Degree-wise pairing P with P(g(n) x, y) = -P(x, g(-n) y).

    base_pairing maps base weight w (left side) to P_0(u_w, u_{-w}).  The
    left reduction peels creation modes off x; reduce_right peels off y
    instead, giving an independent evaluation order.
    """
    if not reduce_right:
        out = ZERO
        for (mono, bw), cx in x.terms.items():
            reduced = y
            for a, n in mono:
                reduced = dual.apply(a, n, reduced).scale(-1)
                if reduced.is_zero():
                    break
            for (mono2, bw2), cy in reduced.terms.items():
                if mono2 == () and bw2 == -bw:
                    out = out + cx * cy * base_pairing.get(bw, ZERO)
        return out
    out = ZERO
    for (mono, bw), cy in y.terms.items():
        reduced = x
        for a, n in mono:
            reduced = module.apply(a, n, reduced).scale(-1)
            if reduced.is_zero():
                break
        for (mono2, bw2), cx in reduced.terms.items():
            if mono2 == () and bw2 == -bw:
                out = out + cx * cy * base_pairing.get(bw2, ZERO)
    return out
