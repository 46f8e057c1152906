"""Weight modules for sl2-type algebras with exact actions.

Three kinds are supported, all with one-dimensional weight spaces:

* finite irreducibles of highest weight p (dimension p+1),
* irreducible highest-weight modules of weight lam not in N, materialized
  down to a depth cutoff,
* dense modules with weight support lam + 2Z inside a finite window, Casimir
  eigenvalue delta and no highest or lowest weight vector.

Weights are rationals in units of alpha/2.  Infinite modules are windows
with explicit truncation flags: any nonzero action leaving the window raises
WindowEscapeError, nothing is silently dropped.

Gauge for dense modules: the raising generator acts with coefficient 1 and
the lowering generator carries delta - lam(lam-2)/2 over 2; any other gauge
is an isomorphic rescaling, this one is fixed so matrices are reproducible.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import DomainError, UnsupportedShapeError, WindowEscapeError
from .exact import ONE, ZERO, ExactMatrix, ExactScalar, scalar
from .liealg import ProbeRep, SimpleLieAlgebra


class WeightModule:
    """Multiplicity-free weight module over a window of weights."""

    def __init__(self, alg: SimpleLieAlgebra, kind: str, params: dict,
                 weights, casimir, boundary):
        self.alg = alg
        self.kind = kind
        self.params = params
        self._weights = tuple(sorted(weights, reverse=True))
        self._weight_set = frozenset(self._weights)
        self.casimir_scalar = casimir
        self._boundary = frozenset(boundary)

    # -- constructors -------------------------------------------------------

    @classmethod
    def finite_irreducible(cls, alg, p: int) -> "WeightModule":
        if p < 0 or int(p) != p:
            raise DomainError("finite irreducible needs p in N")
        p = int(p)
        weights = [Fraction(p - 2 * k) for k in range(p + 1)]
        cas = scalar(Fraction(p * (p + 2), 2))
        return cls(alg, "finite", {"p": p}, weights, cas, boundary=())

    @classmethod
    def highest_weight(cls, alg, lam, depth: int = 12) -> "WeightModule":
        lam = Fraction(lam)
        if lam.denominator == 1 and lam >= 0:
            raise DomainError("highest-weight kind needs lam not in N; "
                              "use finite_irreducible instead")
        weights = [lam - 2 * k for k in range(depth + 1)]
        cas = scalar(lam * (lam + 2) / 2)
        return cls(alg, "highest", {"lam": lam, "depth": depth}, weights, cas,
                   boundary=(lam - 2 * depth,))

    @classmethod
    def dense(cls, alg, lam, delta, radius: int = 4) -> "WeightModule":
        lam = Fraction(lam)
        delta = scalar(delta)
        # no highest or lowest weight vector: delta != mu(mu-2)/2 on the coset
        for mu in _coset_casimir_roots(delta):
            if (mu - lam) % 2 == 0:
                raise DomainError(
                    f"delta={delta} admits a highest/lowest weight at mu={mu}; "
                    "not a dense module"
                )
        weights = [lam + 2 * j for j in range(-radius, radius + 1)]
        return cls(alg, "dense", {"lam": lam, "delta": delta, "radius": radius},
                   weights, delta,
                   boundary=(lam - 2 * radius, lam + 2 * radius))

    @classmethod
    def from_descriptor(cls, alg, desc: dict) -> "WeightModule":
        kind = desc["kind"]
        if kind == "finite":
            return cls.finite_irreducible(alg, int(desc["p"]))
        if kind == "highest":
            return cls.highest_weight(alg, Fraction(str(desc["lam"])),
                                      int(desc.get("depth", 12)))
        if kind == "dense":
            return cls.dense(alg, Fraction(str(desc["lam"])),
                             scalar(str(desc["delta"])),
                             int(desc.get("radius", 4)))
        raise UnsupportedShapeError(f"unknown module kind {kind!r}")

    def descriptor(self) -> dict:
        out = {"kind": self.kind}
        for k, v in self.params.items():
            out[k] = str(v) if not isinstance(v, int) else v
        return out

    # -- structure ----------------------------------------------------------

    def weights(self):
        return self._weights

    def has_weight(self, w) -> bool:
        return Fraction(w) in self._weight_set

    def weight_status(self, w) -> str:
        """'present', 'absent' (true zero space), or 'truncated' (a weight
        of the actual module that the window does not materialize)."""
        w = Fraction(w)
        if w in self._weight_set:
            return "present"
        if self.kind == "finite":
            return "absent"
        lam = self.params["lam"]
        if (lam - w) % 2 != 0:
            return "absent"
        if self.kind == "highest" and w > lam:
            return "absent"
        return "truncated"

    def is_boundary(self, w) -> bool:
        return Fraction(w) in self._boundary

    def dim(self):
        return len(self._weights)

    def is_finite(self) -> bool:
        return self.kind == "finite"

    def label(self) -> str:
        if self.kind == "finite":
            return f"L_{self.params['p']}"
        if self.kind == "highest":
            return f"L_{self.params['lam']}"
        return f"E({self.params['lam']}+2Z,{self.params['delta']})"

    # -- action -------------------------------------------------------------

    def act_coeff(self, a_idx: int, w) -> tuple[Fraction, ExactScalar]:
        """Coefficient of x_a mapping the weight-w line to weight w+shift.

        Returns (target_weight, coeff); coeff may be zero.  Raises
        WindowEscapeError when a nonzero action leaves the window.
        """
        w = Fraction(w)
        if not self.has_weight(w):
            raise DomainError(f"{self.label()} has no weight {w}")
        s = self.alg.shift(a_idx)
        tgt = w + s
        c = self._coeff(a_idx, w)
        if c and not self.has_weight(tgt):
            raise WindowEscapeError(
                f"{self.label()}: action {self.alg.names[a_idx]} escapes the "
                f"window at weight {w}"
            )
        return tgt, c

    def _coeff(self, a_idx: int, w: Fraction) -> ExactScalar:
        name = self.alg.names[a_idx]
        if self.kind == "finite":
            p = self.params["p"]
            k = (p - w) / 2
            if name == "h":
                return scalar(w)
            if name == "e":
                return scalar(k * (p - k + 1))
            if name == "f":
                return ONE if k < p else ZERO
        elif self.kind == "highest":
            lam = self.params["lam"]
            k = (lam - w) / 2
            if name == "h":
                return scalar(w)
            if name == "e":
                return scalar(k * (lam - k + 1))
            if name == "f":
                return ONE
        elif self.kind == "dense":
            delta = self.params["delta"]
            if name == "h":
                return scalar(w)
            if name == "e":
                return ONE
            if name == "f":
                return (delta - scalar(Fraction(w * (w - 2), 2))) / 2
        raise DomainError(f"no action rule for basis element {name!r}")

    def act(self, g, v: "ModuleVector") -> "ModuleVector":
        """Exact action of the element with coefficients g on a vector."""
        out: dict = {}
        for w, c in v.terms.items():
            for a_idx, ga in enumerate(g):
                ga = scalar(ga)
                if not ga:
                    continue
                tgt, coeff = self.act_coeff(a_idx, w)
                if coeff:
                    out[tgt] = out.get(tgt, ZERO) + ga * c * coeff
        return ModuleVector(self, {w: c for w, c in out.items() if c})

    def vector(self, w) -> "ModuleVector":
        w = Fraction(w)
        if not self.has_weight(w):
            raise DomainError(f"{self.label()} has no weight {w}")
        return ModuleVector(self, {w: ONE})

    def conformal_weight(self, level) -> ExactScalar:
        from .verma import conformal_weight_from_casimir

        return conformal_weight_from_casimir(self.alg, self.casimir_scalar, level)

    def to_probe(self) -> ProbeRep:
        """Full action matrices; only possible for finite modules."""
        if not self.is_finite():
            raise DomainError("only finite modules can serve as probes")
        ws = self._weights
        index = {w: i for i, w in enumerate(ws)}
        mats = []
        for a_idx in range(self.alg.dim):
            rows = [[ZERO] * len(ws) for _ in ws]
            for w in ws:
                tgt, c = self.act_coeff(a_idx, w)
                if c:
                    rows[index[tgt]][index[w]] = c
            mats.append(ExactMatrix(rows))
        return ProbeRep(self.label(), mats)


def _coset_casimir_roots(delta: ExactScalar):
    """Solutions mu of mu(mu-2)/2 = delta, when they are rational."""
    # mu = 1 +- sqrt(1 + 2 delta)
    disc = ONE + delta + delta
    if not disc.is_rational():
        return []
    root = ExactScalar.sqrt_of(disc.as_fraction())
    if not root.is_rational():
        return []
    r = root.as_fraction()
    return [Fraction(1) + r, Fraction(1) - r]


class ModuleVector:
    """A vector in a WeightModule, one coefficient per weight line."""

    def __init__(self, module: WeightModule, terms: dict):
        self.module = module
        self.terms = {Fraction(w): scalar(c) for w, c in terms.items() if scalar(c)}

    def __add__(self, other):
        if other.module is not self.module:
            raise DomainError("vectors live in different modules")
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, ZERO) + c
        return ModuleVector(self.module, out)

    def scale(self, c):
        c = scalar(c)
        return ModuleVector(self.module, {w: c * x for w, x in self.terms.items()})

    def is_zero(self):
        return not self.terms

    def coeff(self, w) -> ExactScalar:
        return self.terms.get(Fraction(w), ZERO)

    def __eq__(self, other):
        return isinstance(other, ModuleVector) and self.terms == other.terms

    def __repr__(self):
        body = " + ".join(f"({c})*v[{w}]" for w, c in sorted(self.terms.items()))
        return body or "0"


# ---------------------------------------------------------------------------
# tensor products


class TensorModule:
    """U1 (x) U2 with weight blocks spanned by pairs of factor lines."""

    def __init__(self, u1: WeightModule, u2: WeightModule):
        if u1.alg is not u2.alg:
            raise DomainError("tensor factors over different algebras")
        self.alg = u1.alg
        self.u1 = u1
        self.u2 = u2
        blocks: dict = {}
        for w1 in u1.weights():
            for w2 in u2.weights():
                blocks.setdefault(w1 + w2, []).append((w1, w2))
        # deterministic: factor-1 weight descending within each block
        self._blocks = {
            w: tuple(sorted(pairs, key=lambda p: -p[0]))
            for w, pairs in blocks.items()
        }

    def block_weights(self):
        return tuple(sorted(self._blocks, reverse=True))

    def has_block(self, w) -> bool:
        return Fraction(w) in self._blocks

    def block(self, w):
        """Ordered basis of the weight-w block as (w1, w2) pairs."""
        w = Fraction(w)
        if w not in self._blocks:
            raise DomainError(f"tensor has no weight-{w} block")
        return self._blocks[w]

    def label(self) -> str:
        return f"{self.u1.label()} (x) {self.u2.label()}"

    def act_block(self, a_idx: int, w) -> tuple[Fraction, ExactMatrix]:
        """Matrix of x_a (coproduct action) from block w to block w+shift."""
        w = Fraction(w)
        src = self.block(w)
        s = self.alg.shift(a_idx)
        tgt_w = w + s
        tgt = self.block(tgt_w) if self.has_block(tgt_w) else ()
        index = {p: i for i, p in enumerate(tgt)}
        rows = [[ZERO] * len(src) for _ in tgt]
        for col, (w1, w2) in enumerate(src):
            t1, c1 = self.u1.act_coeff(a_idx, w1)
            if c1:
                key = (t1, w2)
                if key not in index:
                    raise WindowEscapeError(
                        f"{self.label()}: block {w} action escapes at {key}"
                    )
                rows[index[key]][col] = rows[index[key]][col] + c1
            t2, c2 = self.u2.act_coeff(a_idx, w2)
            if c2:
                key = (w1, t2)
                if key not in index:
                    raise WindowEscapeError(
                        f"{self.label()}: block {w} action escapes at {key}"
                    )
                rows[index[key]][col] = rows[index[key]][col] + c2
        return tgt_w, ExactMatrix(rows, ncols=len(src))

    def act_factor1_block(self, a_idx: int, w) -> tuple[Fraction, ExactMatrix]:
        """Matrix of x_a (x) 1 from block w to block w+shift."""
        w = Fraction(w)
        src = self.block(w)
        s = self.alg.shift(a_idx)
        tgt_w = w + s
        tgt = self.block(tgt_w) if self.has_block(tgt_w) else ()
        index = {p: i for i, p in enumerate(tgt)}
        rows = [[ZERO] * len(src) for _ in tgt]
        for col, (w1, w2) in enumerate(src):
            t1, c1 = self.u1.act_coeff(a_idx, w1)
            if c1:
                key = (t1, w2)
                if key not in index:
                    raise WindowEscapeError(
                        f"{self.label()}: factor-1 action escapes block {w} at {key}"
                    )
                rows[index[key]][col] = c1
        return tgt_w, ExactMatrix(rows, ncols=len(src))


# ---------------------------------------------------------------------------
# Casimir operators


def casimir_block(obj, w) -> ExactMatrix:
    """Matrix of the Casimir element on the weight-w block of obj.

    obj is a WeightModule (block size 1) or a TensorModule.  Needs the
    neighbouring blocks materialized; raises WindowEscapeError otherwise.
    """
    alg = obj.alg
    if isinstance(obj, WeightModule):
        w = Fraction(w)
        out = ZERO
        for i, j, c in alg.casimir_pairs():
            mid, cj = obj.act_coeff(j, w)
            if not cj:
                continue
            back, ci = obj.act_coeff(i, mid)
            if back != w:
                raise DomainError("casimir term does not preserve weight")
            out = out + c * ci * cj
        return ExactMatrix([[out]])
    n = len(obj.block(w))
    out = ExactMatrix.zeros(n, n)
    for i, j, c in alg.casimir_pairs():
        mid_w, mj = obj.act_block(j, w)
        if mj.is_zero():
            continue
        back_w, mi = obj.act_block(i, mid_w)
        if back_w != Fraction(w):
            raise DomainError("casimir term does not preserve weight")
        out = out + (mi @ mj).scale(c)
    return out


def casimir_matrix(obj, weights=None) -> dict:
    """Casimir blocks per weight; on finite irreducibles the scalar s(s+2)/2."""
    if weights is None:
        weights = obj.weights() if isinstance(obj, WeightModule) else obj.block_weights()
    return {Fraction(w): casimir_block(obj, w) for w in weights}


def pair_casimir_block(tensor: TensorModule, w) -> ExactMatrix:
    """Block of sum_a (x_a . u1) (x) (x^a . u2) at tensor weight w."""
    alg = tensor.alg
    src = tensor.block(w)
    n = len(src)
    index = {p: i for i, p in enumerate(src)}
    out = [[ZERO] * n for _ in range(n)]
    for i, j, c in alg.casimir_pairs():
        for col, (w1, w2) in enumerate(src):
            t1, c1 = tensor.u1.act_coeff(i, w1)
            if not c1:
                continue
            t2, c2 = tensor.u2.act_coeff(j, w2)
            if not c2:
                continue
            key = (t1, t2)
            if key not in index:
                raise WindowEscapeError(
                    f"{tensor.label()}: pair casimir escapes block {w} at {key}"
                )
            out[index[key]][col] = out[index[key]][col] + c * c1 * c2
    return ExactMatrix(out)


def pair_casimir(tensor: TensorModule, weights=None) -> dict:
    if weights is None:
        weights = tensor.block_weights()
    return {Fraction(w): pair_casimir_block(tensor, w) for w in weights}


# ---------------------------------------------------------------------------
# decomposition metadata


class Summand:
    def __init__(self, kind, param, casimir, multiplicity=1):
        self.kind = kind
        self.param = param
        self.casimir = casimir
        self.multiplicity = multiplicity

    def __repr__(self):
        return f"Summand({self.kind}, {self.param}, C={self.casimir})"


class Decomposition:
    def __init__(self, summands, diagonalizable=True):
        self.summands = tuple(summands)
        self.diagonalizable = diagonalizable

    def eigenvalues(self):
        return [s.casimir for s in self.summands]


def decompose(u1: WeightModule, u2: WeightModule) -> Decomposition:
    """Complete Casimir eigenvalue data of U1 (x) U2.

    Supported shapes: finite (x) finite, finite (x) highest-weight, and
    L_1 (x) dense (either factor order for the mixed shapes).
    """
    kinds = (u1.kind, u2.kind)
    if kinds == ("finite", "finite"):
        p, q = u1.params["p"], u2.params["p"]
        out = []
        for k in range(min(p, q) + 1):
            s = p + q - 2 * k
            out.append(Summand("finite", s, scalar(Fraction(s * (s + 2), 2))))
        dec = Decomposition(out)
    elif "finite" in kinds and "highest" in kinds:
        fin = u1 if u1.kind == "finite" else u2
        hw = u2 if u1.kind == "finite" else u1
        p, lam = fin.params["p"], hw.params["lam"]
        if (p + lam).denominator == 1 and p + lam >= 0:
            raise UnsupportedShapeError("need lam and p+lam outside N")
        out = []
        for k in range(p + 1):
            mu = p + lam - 2 * k
            out.append(Summand("highest", mu, scalar(mu * (mu + 2) / 2)))
        dec = Decomposition(out)
    elif "finite" in kinds and "dense" in kinds:
        fin = u1 if u1.kind == "finite" else u2
        den = u2 if u1.kind == "finite" else u1
        if fin.params["p"] != 1:
            raise UnsupportedShapeError("only L_1 (x) dense is supported")
        delta = den.params["delta"]
        lam1 = den.params["lam"] + 1
        disc = ONE + delta + delta
        half = (disc) / 2
        root = _sqrt_scalar(disc)
        lo, hi = half - root, half + root
        diag = bool(root)
        out = [Summand("dense", (lam1, lo), lo, 1 if diag else 2)]
        if diag:
            out.append(Summand("dense", (lam1, hi), hi))
        dec = Decomposition(out, diagonalizable=diag)
    else:
        raise UnsupportedShapeError(
            f"decompose does not handle {u1.kind} (x) {u2.kind}"
        )
    _crosscheck_blocks(u1, u2, dec)
    return dec


def _sqrt_scalar(x: ExactScalar) -> ExactScalar:
    if not x.is_rational():
        raise DomainError("nested radicals are out of scope")
    return ExactScalar.sqrt_of(x.as_fraction())


def _crosscheck_blocks(u1, u2, dec: Decomposition):
    # the eigenvalue list annihilates the Casimir on explicit blocks:
    # prod_k (C - mu_k) = 0 wherever the blocks are materialized
    tensor = TensorModule(u1, u2)
    checked = 0
    for w in tensor.block_weights():
        try:
            blk = casimir_block(tensor, w)
        except WindowEscapeError:
            continue
        acc = ExactMatrix.identity(blk.nrows)
        for s in dec.summands:
            for _ in range(s.multiplicity):
                acc = acc @ (blk - ExactMatrix.identity(blk.nrows).scale(s.casimir))
        if not acc.is_zero():
            raise DomainError(
                f"decomposition cross-check failed on block {w} of {tensor.label()}"
            )
        checked += 1
    if checked == 0:
        raise WindowEscapeError(
            f"{tensor.label()}: no block wide enough to cross-check decomposition"
        )


# ---------------------------------------------------------------------------
# g-homomorphism spaces


class GHom:
    """Weight-blockwise matrix of a g-homomorphism U1 (x) U2 -> U3."""

    def __init__(self, tensor: TensorModule, target: WeightModule, blocks: dict):
        self.tensor = tensor
        self.target = target
        self.blocks = {Fraction(w): row for w, row in blocks.items()}

    def block(self, w):
        w = Fraction(w)
        n = len(self.tensor.block(w))
        return self.blocks.get(w, tuple([ZERO] * n))

    def apply_block(self, w, col):
        """Value on a coefficient column in block w (scalar, target is a line)."""
        row = self.block(w)
        out = ZERO
        for r, c in zip(row, col):
            if r and c:
                out = out + r * c
        return out

    def scale(self, c):
        c = scalar(c)
        return GHom(self.tensor, self.target,
                    {w: tuple(c * x for x in row) for w, row in self.blocks.items()})

    def add(self, other: "GHom") -> "GHom":
        out = dict(self.blocks)
        for w, row in other.blocks.items():
            if w in out:
                out[w] = tuple(a + b for a, b in zip(out[w], row))
            else:
                out[w] = row
        return GHom(self.tensor, self.target, out)


def hom_space(u1: WeightModule, u2: WeightModule, target: WeightModule,
              expected_dim=None) -> list[GHom]:
    """Exact basis of Hom_g(U1 (x) U2, U3) on the materialized windows.

    The equivariance equations over all block pairs inside the windows are
    solved exactly; when the decomposition metadata pins the expected
    dimension, a mismatch raises (window too small / under-determined).
    """
    tensor = TensorModule(u1, u2)
    alg = tensor.alg
    # unknowns: one row per tensor block whose weight is materialized in the
    # target; blocks the target truncates away stay out of the system and
    # equations touching them are skipped (never silently zeroed)
    var_blocks = [w for w in tensor.block_weights()
                  if target.weight_status(w) == "present"]
    offsets, nvars = {}, 0
    for w in var_blocks:
        offsets[w] = nvars
        nvars += len(tensor.block(w))
    if nvars == 0:
        if expected_dim not in (None, 0):
            raise WindowEscapeError("no overlap between tensor and target windows")
        return []

    rows = []
    for w in tensor.block_weights():
        status_w = target.weight_status(w)
        if status_w == "truncated":
            continue
        for a_idx in range(alg.dim):
            try:
                tgt_w, act = tensor.act_block(a_idx, w)
            except WindowEscapeError:
                continue
            if target.weight_status(tgt_w) == "truncated":
                continue
            # target side: phi(g x) = g phi(x)
            if status_w == "present":
                try:
                    _, t_coeff = target.act_coeff(a_idx, w)
                except WindowEscapeError:
                    continue
            else:
                t_coeff = ZERO
            src_n = len(tensor.block(w))
            tgt_n = act.nrows
            for col in range(src_n):
                row = [ZERO] * nvars
                touched = False
                if tgt_w in offsets:
                    for r in range(tgt_n):
                        if act[r, col]:
                            row[offsets[tgt_w] + r] = act[r, col]
                            touched = True
                if w in offsets and t_coeff:
                    row[offsets[w] + col] = row[offsets[w] + col] - t_coeff
                    touched = True
                if touched:
                    rows.append(row)
    kernel = ExactMatrix(rows, ncols=nvars).kernel_basis()
    if expected_dim is not None and len(kernel) != expected_dim:
        raise WindowEscapeError(
            f"hom space dimension {len(kernel)} != expected {expected_dim}; "
            "the windows under- or over-determine the map, enlarge them"
        )
    homs = []
    for vec in kernel:
        blocks = {}
        for w in var_blocks:
            off = offsets[w]
            n = len(tensor.block(w))
            row = tuple(vec[off + i] for i in range(n))
            if any(row):
                blocks[w] = row
        homs.append(GHom(tensor, target, blocks))
    return homs


def expected_hom_dim(u1: WeightModule, u2: WeightModule,
                     target: WeightModule):
    """Multiplicity of the target's parameters in decompose(U1, U2).

    Returns None when the decomposition is not diagonalizable (the count is
    then not a reliable hom dimension).
    """
    dec = decompose(u1, u2)
    if not dec.diagonalizable:
        return None
    count = 0
    for s in dec.summands:
        if s.kind != target.kind:
            continue
        if s.kind == "finite" and s.param == target.params["p"]:
            count += 1
        elif s.kind == "highest" and s.param == target.params["lam"]:
            count += 1
        elif s.kind == "dense":
            lam1, delta = s.param
            if (Fraction(lam1) - target.params["lam"]) % 2 == 0 \
                    and delta == target.params["delta"]:
                count += 1
    return count
