"""Construction of intertwiner prefixes by the recursion on series
coefficients, obstruction scans, and singular-vector candidates.

A prefix is the family of maps Y_0..Y_N from U1 (x) U2 into the graded
pieces of the target, Y_0 being a g-homomorphism seed, in which the full
series Y(u1, x)u2 = sum_m Y_m(u1 (x) u2) x^{h+m} has its coefficients.
Degree m is obstructed when (level + hvee)(h + m) - C_{U1,U2} fails to be
invertible; the scan lists all obstructed degrees exactly from the tensor
decomposition.  Building into the graded dual of a Verma module is
unconditional and handled by a separate recursion on pairings.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import DomainError, ObstructionError, WindowEscapeError
from .exact import (
    ONE,
    ZERO,
    ExactMatrix,
    is_generic,
    scalar,
    vec_is_zero,
)
from .gmodules import (
    GHom,
    TensorModule,
    WeightModule,
    decompose,
    pair_casimir_block,
)
from .verma import (
    ContragredientModule,
    GeneralizedVermaModule,
    GradedVector,
    canonical_pairing,
    conformal_weight_from_casimir,
    contravariant_gram,
    contravariant_radical,
)


class ObstructionEntry:
    """One obstructed degree: N, the matching eigenvalues, eigenvectors."""

    def __init__(self, degree, pair_eigenvalue, tensor_eigenvalue, eigenvectors):
        self.degree = degree
        self.pair_eigenvalue = pair_eigenvalue
        self.tensor_eigenvalue = tensor_eigenvalue
        # {weight: [coefficient columns in the tensor block basis]}
        self.eigenvectors = eigenvectors

    def __repr__(self):
        return (f"ObstructionEntry(N={self.degree}, "
                f"pair={self.pair_eigenvalue}, tensor={self.tensor_eigenvalue})")

    def to_json(self):
        return {
            "N": self.degree,
            "pair_eigenvalue": str(self.pair_eigenvalue),
            "tensor_eigenvalue": str(self.tensor_eigenvalue),
            "eigenvectors": {
                str(w): [[str(c) for c in v] for v in vs]
                for w, vs in sorted(self.eigenvectors.items())
            },
        }


class ObstructionReport:
    def __init__(self, entries, generic=False):
        self.entries = tuple(sorted(entries, key=lambda e: e.degree))
        self.generic = generic

    def is_empty(self) -> bool:
        return not self.entries

    def first(self):
        return self.entries[0] if self.entries else None

    def first_at_or_below(self, n: int):
        for e in self.entries:
            if e.degree <= n:
                return e
        return None

    def to_json(self):
        return {"generic": self.generic,
                "entries": [e.to_json() for e in self.entries]}


def obstruction_scan(u1: WeightModule, u2: WeightModule, level, h3,
                     with_eigenvectors: bool = True,
                     weights=None) -> ObstructionReport:
    """All degrees N >= 1 where 2(level+hvee)(h3+N) hits a Casimir eigenvalue
    of U1 (x) U2.  Complete, because the eigenvalue list from the
    decomposition is.  Empty at a generic level.
    """
    if is_generic(level):
        return ObstructionReport([], generic=True)
    alg = u1.alg
    level = scalar(level)
    shifted = level + alg.dual_coxeter
    if not shifted:
        raise DomainError("critical level")
    h3 = scalar(h3)
    dec = decompose(u1, u2)
    tensor = TensorModule(u1, u2)
    entries = []
    for summand in dec.summands:
        mu = summand.casimir
        n_val = mu / (2 * shifted) - h3
        if not (n_val.is_rational() and n_val.is_integer() and n_val >= ONE):
            continue
        degree = int(n_val.as_fraction())
        pair_mu = (mu - u1.casimir_scalar - u2.casimir_scalar) / 2
        eigenvectors = {}
        if with_eigenvectors:
            scan_weights = weights if weights is not None else tensor.block_weights()
            for w in scan_weights:
                try:
                    blk = pair_casimir_block(tensor, w)
                except WindowEscapeError:
                    continue
                vecs = blk.eigenspace(pair_mu)
                if vecs:
                    eigenvectors[Fraction(w)] = vecs
        entries.append(ObstructionEntry(degree, pair_mu, mu, eigenvectors))
    return ObstructionReport(entries)


# ---------------------------------------------------------------------------
# targets


class VermaTarget:
    kind = "verma"

    def __init__(self, verma: GeneralizedVermaModule):
        self.verma = verma
        self.level = verma.level

    def label(self):
        return self.verma.label()

    def h3(self):
        return self.verma.base_conformal_weight()

    def block_dim(self, degree: int, weight) -> int:
        return len(self.verma.degree_basis(degree, weight))

    def mode_matrix(self, a_idx: int, mode: int, degree: int, weight) -> ExactMatrix:
        return self.verma.mode_matrix(a_idx, mode, degree, weight)

    def seed_matrix(self, f: GHom, weight, src_dim: int) -> ExactMatrix:
        n = self.block_dim(0, weight)
        if n == 0:
            return ExactMatrix.zeros(0, src_dim)
        return ExactMatrix([list(f.block(weight))])


class ContragredientTarget:
    kind = "contragredient"

    def __init__(self, module: ContragredientModule):
        self.module = module
        self.level = module.level

    def label(self):
        return self.module.label()

    def h3(self):
        base = self.module.dual_verma.base
        return conformal_weight_from_casimir(
            self.module.alg, base.casimir_scalar, self.level
        )

    def block_dim(self, degree: int, weight) -> int:
        return self.module.block_dim(degree, weight)

    def mode_matrix(self, a_idx: int, mode: int, degree: int, weight) -> ExactMatrix:
        return self.module.mode_matrix(a_idx, mode, degree, weight)

    def seed_matrix(self, f: GHom, weight, src_dim: int) -> ExactMatrix:
        n = self.block_dim(0, weight)
        if n == 0:
            return ExactMatrix.zeros(0, src_dim)
        p = self.module.base_pairing.get(Fraction(weight), ZERO)
        return ExactMatrix([[p * c for c in f.block(weight)]])


class IntertwinerPrefix:
    """The maps Y_0..Y_N as exact weight-block matrices, plus the report."""

    def __init__(self, f: GHom, target, built_to: int, requested: int,
                 obstruction: ObstructionEntry | None, report: ObstructionReport):
        self.seed = f
        self.tensor = f.tensor
        self.target = target
        self.level = target.level
        self.built_to = built_to
        self.requested = requested
        self.obstruction = obstruction
        self.report = report
        u1, u2 = self.tensor.u1, self.tensor.u2
        self.h = (target.h3()
                  - u1.conformal_weight(self.level)
                  - u2.conformal_weight(self.level))
        self.blocks: dict = {}

    def has_block(self, degree: int, weight) -> bool:
        return (degree, Fraction(weight)) in self.blocks

    def block(self, degree: int, weight) -> ExactMatrix:
        return self.blocks[(degree, Fraction(weight))]

    def degrees(self):
        return sorted({m for m, _ in self.blocks})

    def block_weights(self, degree: int):
        return sorted((w for m, w in self.blocks if m == degree), reverse=True)

    def resolvent_block(self, degree: int, weight) -> ExactMatrix:
        """(level + hvee)(h + degree) - C_{U1,U2} on the given block."""
        alg = self.tensor.alg
        shifted = scalar(self.level) + alg.dual_coxeter
        coef = shifted * (self.h + degree)
        blk = pair_casimir_block(self.tensor, weight)
        return ExactMatrix.identity(blk.nrows).scale(coef) - blk

    def to_json(self):
        maps = {}
        for (m, w), mat in sorted(self.blocks.items()):
            maps.setdefault(str(m), {})[str(w)] = [
                [str(c) for c in row] for row in mat.rows
            ]
        return {
            "target": self.target.label(),
            "level": str(self.level),
            "series_exponent_base": str(self.h),
            "built_to": self.built_to,
            "requested": self.requested,
            "obstructions": self.report.to_json(),
            "maps": maps,
        }


def build_prefix(f: GHom, cutoff: int, target, request_weights=None,
                 allow_partial: bool = False) -> IntertwinerPrefix:
    """Construct Y_0..Y_cutoff from the seed by the degree recursion.

    Below the first obstructed degree the resolvent blocks are invertible
    and the construction is unique; at an obstruction the partial prefix up
    to N-1 is either returned (allow_partial) or raised inside
    ObstructionError together with the scan entry.
    """
    tensor = f.tensor
    u1, u2 = tensor.u1, tensor.u2
    level = target.level
    if is_generic(level):
        raise DomainError("prefix construction needs an exact level")
    report = obstruction_scan(u1, u2, level, target.h3())
    entry = report.first_at_or_below(cutoff)
    built_to = cutoff if entry is None else entry.degree - 1
    prefix = IntertwinerPrefix(f, target, built_to, cutoff, entry, report)

    if request_weights is None:
        if not (u1.is_finite() and u2.is_finite()):
            raise DomainError(
                "infinite tensor factors need an explicit request_weights list"
            )
        request_weights = tensor.block_weights()
    for m in range(built_to + 1):
        for w in request_weights:
            if tensor.has_block(w):
                _materialize_block(prefix, m, Fraction(w))
    if entry is not None and not allow_partial:
        raise ObstructionError(
            f"recursion obstructed at degree {entry.degree} "
            f"(eigenvalue {entry.pair_eigenvalue})",
            prefix=prefix,
            entry=entry,
        )
    return prefix


def _materialize_block(prefix: IntertwinerPrefix, m: int, w: Fraction) -> ExactMatrix:
    key = (m, w)
    if key in prefix.blocks:
        return prefix.blocks[key]
    tensor = prefix.tensor
    target = prefix.target
    alg = tensor.alg
    src_dim = len(tensor.block(w))
    tgt_dim = target.block_dim(m, w)
    if m == 0:
        blk = target.seed_matrix(prefix.seed, w, src_dim)
    elif tgt_dim == 0:
        blk = ExactMatrix.zeros(0, src_dim)
    else:
        gm = prefix.resolvent_block(m, w)
        try:
            gm_inv = gm.inverse()
        except ZeroDivisionError:
            raise ObstructionError(
                f"resolvent singular at degree {m}, weight {w}", prefix=prefix
            )
        acc = ExactMatrix.zeros(tgt_dim, src_dim)
        for i, j, c in alg.casimir_pairs():
            wj, actj = tensor.act_factor1_block(j, w)
            if actj.nrows == 0:
                continue
            for k in range(1, m + 1):
                prev = _materialize_block(prefix, m - k, wj)
                if prev.nrows == 0:
                    continue
                create = target.mode_matrix(i, -k, m - k, wj)
                acc = acc + (create @ prev @ actj).scale(c)
        blk = acc @ gm_inv
    prefix.blocks[key] = blk
    return blk


def build_prefix_contragredient(f: GHom, cutoff: int, level, lam3: int,
                                ) -> IntertwinerPrefix:
    """Construct Y_0..Y_cutoff into the graded dual of V(level, lam3).

    Unconditional: the defining pairings against g(-n)w3 always determine
    the next map uniquely, obstructed Verma side or not.
    """
    tensor = f.tensor
    u1, u2 = tensor.u1, tensor.u2
    if not (u1.is_finite() and u2.is_finite()):
        raise DomainError("contragredient targets support finite factors only")
    alg = tensor.alg
    module = ContragredientModule(alg, level, lam3, cutoff=max(cutoff, 1))
    target = ContragredientTarget(module)
    report = obstruction_scan(u1, u2, level, target.h3())
    prefix = IntertwinerPrefix(f, target, cutoff, cutoff,
                               report.first_at_or_below(cutoff), report)
    dual = module.dual_verma
    for w in tensor.block_weights():
        src_dim = len(tensor.block(w))
        prefix.blocks[(0, w)] = target.seed_matrix(f, w, src_dim)
    for m in range(1, cutoff + 1):
        for w in tensor.block_weights():
            src_dim = len(tensor.block(w))
            tdim = target.block_dim(m, w)
            if tdim == 0:
                prefix.blocks[(m, w)] = ExactMatrix.zeros(0, src_dim)
                continue
            rows, rhs_rows = [], []
            for a_idx in range(alg.dim):
                s = alg.shift(a_idx)
                for n in range(1, m + 1):
                    lower = dual.degree_basis(m - n, -(w + s))
                    if not lower:
                        continue
                    # expansions of g(-n) w3 in the degree-m basis
                    creation = dual.mode_matrix(a_idx, -n, m - n, -(w + s))
                    wj = w + s
                    if tensor.has_block(wj):
                        _, act1 = tensor.act_factor1_block(a_idx, w)
                        prev = prefix.blocks[(m - n, wj)]
                        rhs_block = (prev @ act1).scale(-1)
                    else:
                        rhs_block = ExactMatrix.zeros(len(lower), src_dim)
                    for idx in range(len(lower)):
                        rows.append([creation[r, idx] for r in range(tdim)])
                        rhs_rows.append([rhs_block[idx, col] for col in range(src_dim)])
            system = ExactMatrix(rows, ncols=tdim)
            rhs = ExactMatrix(rhs_rows, ncols=src_dim)
            cols = []
            for col in range(src_dim):
                sol = system.solve([rhs[r, col] for r in range(rhs.nrows)])
                if not sol.consistent or sol.kernel:
                    raise DomainError(
                        f"contragredient recursion not uniquely solvable at "
                        f"degree {m}, weight {w}"
                    )
                cols.append(sol.particular)
            prefix.blocks[(m, w)] = ExactMatrix(list(zip(*cols)), ncols=src_dim)
    return prefix


# ---------------------------------------------------------------------------
# independent verification


class CheckResult:
    def __init__(self, ok: bool, counterexample=None, checked: int = 0):
        self.ok = ok
        self.counterexample = counterexample
        self.checked = checked

    def __bool__(self):
        return self.ok

    def __repr__(self):
        if self.ok:
            return f"CheckResult(ok, {self.checked} identities)"
        return f"CheckResult(FAIL at {self.counterexample})"


def verify_commcomp(prefix: IntertwinerPrefix) -> CheckResult:
    """Check g(n) Y_m = Y_{m-n} o (g (x) 1) + [n=0] Y_m o (1 (x) g) exactly.

    Implemented through the annihilation action on the target, independent
    of the recursion that produced the maps.
    """
    tensor = prefix.tensor
    target = prefix.target
    alg = tensor.alg
    checked = 0
    for (m, w), ym in sorted(prefix.blocks.items()):
        for a_idx in range(alg.dim):
            s = alg.shift(a_idx)
            for n in range(0, m + 1):
                lhs = target.mode_matrix(a_idx, n, m, w) @ ym
                if n == 0:
                    if not tensor.has_block(w + s):
                        rhs = ExactMatrix.zeros(lhs.nrows, lhs.ncols)
                        try:
                            _, act = tensor.act_block(a_idx, w)
                        except WindowEscapeError:
                            continue
                        if act.nrows:
                            raise DomainError("action into missing block")
                    else:
                        if not prefix.has_block(m, w + s):
                            continue
                        try:
                            _, act = tensor.act_block(a_idx, w)
                        except WindowEscapeError:
                            continue
                        rhs = prefix.block(m, w + s) @ act
                else:
                    if not tensor.has_block(w + s):
                        try:
                            _, act1 = tensor.act_factor1_block(a_idx, w)
                        except WindowEscapeError:
                            continue
                        rhs = ExactMatrix.zeros(lhs.nrows, lhs.ncols)
                    else:
                        if not prefix.has_block(m - n, w + s):
                            continue
                        try:
                            _, act1 = tensor.act_factor1_block(a_idx, w)
                        except WindowEscapeError:
                            continue
                        rhs = prefix.block(m - n, w + s) @ act1
                if lhs != rhs:
                    return CheckResult(False, {
                        "degree": m, "mode": n, "element": alg.names[a_idx],
                        "weight": w,
                    }, checked)
                checked += 1
    if checked == 0:
        raise DomainError("no identities could be checked; materialize blocks")
    return CheckResult(True, None, checked)


def kz_residual(prefix: IntertwinerPrefix) -> CheckResult:
    """Check Y_m((resolvent_m) x) = sum over creations of lower maps, all m.

    Degree 0 is the seed identity: f kills ((level+hvee)h - C_{U1,U2}).
    """
    tensor = prefix.tensor
    target = prefix.target
    alg = tensor.alg
    checked = 0
    for (m, w), ym in sorted(prefix.blocks.items()):
        gm = prefix.resolvent_block(m, w)
        lhs = ym @ gm
        src_dim = len(tensor.block(w))
        rhs = ExactMatrix.zeros(target.block_dim(m, w), src_dim)
        for i, j, c in alg.casimir_pairs():
            try:
                wj, actj = tensor.act_factor1_block(j, w)
            except WindowEscapeError:
                rhs = None
                break
            if actj.nrows == 0:
                continue
            for k in range(1, m + 1):
                if not prefix.has_block(m - k, wj):
                    rhs = None
                    break
                prev = prefix.block(m - k, wj)
                if prev.nrows == 0:
                    continue
                create = target.mode_matrix(i, -k, m - k, wj)
                rhs = rhs + (create @ prev @ actj).scale(c)
            if rhs is None:
                break
        if rhs is None:
            continue
        if lhs != rhs:
            return CheckResult(False, {"degree": m, "weight": w}, checked)
        checked += 1
    if checked == 0:
        raise DomainError("no identities could be checked; materialize blocks")
    return CheckResult(True, None, checked)


# ---------------------------------------------------------------------------
# singular-vector candidates


def singular_candidate(f: GHom, target_verma: GeneralizedVermaModule,
                       eigvec_weight, eigvec_col,
                       report: ObstructionReport | None = None) -> GradedVector:
    """Degree-N candidate built from the partial prefix at the first
    obstruction, evaluated on a verified eigenvector of the pair Casimir."""
    tensor = f.tensor
    u1, u2 = tensor.u1, tensor.u2
    target = VermaTarget(target_verma)
    if report is None:
        report = obstruction_scan(u1, u2, target_verma.level, target.h3())
    entry = report.first()
    if entry is None:
        raise DomainError("no obstruction; nothing to build a candidate from")
    n_deg = entry.degree
    w = Fraction(eigvec_weight)
    col = tuple(scalar(c) for c in eigvec_col)
    blk = pair_casimir_block(tensor, w)
    image = blk @ col
    expected = tuple(entry.pair_eigenvalue * c for c in col)
    if image != expected or vec_is_zero(col):
        raise DomainError(
            f"supplied vector is not a {entry.pair_eigenvalue}-eigenvector "
            f"of the pair Casimir on block {w}"
        )
    prefix = build_prefix(f, n_deg - 1, target, allow_partial=False) \
        if u1.is_finite() and u2.is_finite() else None
    if prefix is None:
        raise DomainError("candidates are computed for finite factors")
    alg = tensor.alg
    out = target_verma.zero()
    for i, j, c in alg.casimir_pairs():
        wj, actj = tensor.act_factor1_block(j, w)
        if actj.nrows == 0:
            continue
        shifted_col = actj @ col
        for k in range(1, n_deg + 1):
            prev = prefix.block(n_deg - k, wj)
            if prev.nrows == 0:
                continue
            coeffs = prev @ shifted_col
            vec = target_verma.from_column(n_deg - k, wj, coeffs)
            out = out + target_verma.apply(i, -k, vec).scale(c)
    return out


class CandidateDiagnostics:
    def __init__(self, is_zero, in_radical, annihilated):
        self.is_zero = is_zero
        self.in_radical = in_radical
        self.annihilated_by_positive_modes = annihilated

    def to_json(self):
        return {
            "is_zero": self.is_zero,
            "in_radical": self.in_radical,
            "annihilated_by_positive_modes": self.annihilated_by_positive_modes,
        }

    def __repr__(self):
        return (f"CandidateDiagnostics(zero={self.is_zero}, "
                f"radical={self.in_radical}, "
                f"annihilated={self.annihilated_by_positive_modes})")


def candidate_diagnostics(module: GeneralizedVermaModule,
                          vec: GradedVector) -> CandidateDiagnostics:
    """Exact flags: vanishing, contravariant-radical membership, and
    annihilation by all positive modes up to the vector's degree."""
    if vec.is_zero():
        return CandidateDiagnostics(True, True, True)
    degree = vec.degree()
    weight = vec.weight()
    basis = module.degree_basis(degree, weight)
    from .verma import contravariant_pairing

    in_radical = all(
        not contravariant_pairing(module, module.vector(m, bw), vec)
        for m, bw in basis
    )
    annihilated = True
    for a_idx in range(module.alg.dim):
        for n in range(1, degree + 1):
            if not module.apply(a_idx, n, vec).is_zero():
                annihilated = False
                break
        if not annihilated:
            break
    return CandidateDiagnostics(False, in_radical, annihilated)


# ---------------------------------------------------------------------------
# natural comparison between the two target kinds


def pairing_matrix(verma: GeneralizedVermaModule,
                   dual_verma: GeneralizedVermaModule,
                   base_pairing: dict, degree: int, weight) -> ExactMatrix:
    """Matrix of the canonical pairing between mirrored degree blocks."""
    w = Fraction(weight)
    left = verma.degree_basis(degree, w)
    right = dual_verma.degree_basis(degree, -w)
    rows = []
    for lm, lw in left:
        x = verma.vector(lm, lw)
        rows.append([
            canonical_pairing(verma, dual_verma, x,
                              dual_verma.vector(rm, rw), base_pairing)
            for rm, rw in right
        ])
    return ExactMatrix(rows, ncols=len(right))


def compare_with_canonical_pairing(verma_prefix: IntertwinerPrefix,
                                   dual_prefix: IntertwinerPrefix) -> bool:
    """Exact equality of the Verma prefix composed with the canonical
    degree-wise pairing against the contragredient prefix."""
    target_v = verma_prefix.target
    target_c = dual_prefix.target
    if not isinstance(target_v, VermaTarget) or \
            not isinstance(target_c, ContragredientTarget):
        raise DomainError("expected a Verma prefix and a contragredient prefix")
    verma = target_v.verma
    dual = target_c.module.dual_verma
    base_pairing = target_c.module.base_pairing
    for (m, w), yv in sorted(verma_prefix.blocks.items()):
        if not dual_prefix.has_block(m, w):
            continue
        yc = dual_prefix.block(m, w)
        pm = pairing_matrix(verma, dual, base_pairing, m, w)
        if pm.transpose() @ yv != yc:
            return False
    return True
