"""Hecke operators on level-one q-expansions and Eisenstein localization.

Operators act on coefficients through the divisor-sum rule
a(m; f|T(n)) = sum over d | gcd(m, n) of d^(k-1) a(mn/d^2; f); at level one
the diamond action is trivial and T(m, m) is the scalar m^(k-2).  Matrices
are taken in the echelon basis of a FormSpace by membership solving, the
full Hecke algebra is the linear closure of T(n) for n up to the weight's
coefficient bound, and the localization at the Eisenstein maximal ideal is
the common generalized kernel of the operators T(n) - sigma_(k-1)(n).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import PrecisionError
from .linalg import (
    MatFp,
    algebra_closure,
    generalized_eigenspace,
    kernel,
    rref,
    solve,
    stable_idempotent,
)
from .qexp import FormSpace, QSeries, membership, miller_basis, sturm


def sigma_eigenvalue(p: int, k: int, n: int, digits: int = 1) -> int:
    """sigma_(k-1)(n) mod p^digits: the Eisenstein eigenvalue of T(n)."""
    m = p**digits
    s = 0
    for d in range(1, n + 1):
        if n % d == 0:
            s += pow(d, k - 1, m)
    return s % m


@dataclass(frozen=True)
class EisensteinSystem:
    """The eigenvalue system n -> sigma_(k-1)(n) mod p."""

    p: int
    k: int

    def eigenvalue(self, n: int) -> int:
        return sigma_eigenvalue(self.p, self.k, n)


def hecke_action(f: QSeries, n: int) -> QSeries:
    """f | T(n) on q-expansions, using f's weight tag.

    The output keeps floor((prec-1)/n) + 1 coefficients: coefficient m of
    the image needs coefficient m*n of the input.
    """
    if n < 1:
        raise ValueError("operator index must be positive")
    from math import gcd

    k, m = f.weight, f.modulus
    out_prec = (f.prec - 1) // n + 1 if f.prec else 0
    out = [0] * out_prec
    for i in range(out_prec):
        g = gcd(i, n) if i else n
        acc = 0
        for d in range(1, g + 1):
            if g % d == 0:
                acc += pow(d, k - 1, m) * f.coeffs[i * n // (d * d)]
        out[i] = acc % m
    return QSeries(f.p, out, k, f.digits)


@dataclass(frozen=True)
class HeckeOp:
    """T(n) as a matrix in a FormSpace's echelon basis."""

    n: int
    k: int
    p: int
    mat: MatFp


def hecke_matrix(space: FormSpace, n: int) -> HeckeOp:
    """Matrix of T(n): column j holds the coordinates of T(n) row_j.

    Requires space.prec >= n * sturm(k) so the images keep enough
    coefficients for sound membership solving.  Non-membership of an image
    would mean the basis is not Hecke-stable, i.e. an internal bug, and is
    surfaced loudly.
    """
    if space.digits != 1:
        raise ValueError("operator matrices are computed over F_p")
    if space.prec < n * sturm(space.k):
        raise PrecisionError(
            f"T({n}) at weight {space.k} needs precision {n * sturm(space.k)}, "
            f"space has {space.prec}"
        )
    cols = []
    for row in space.rows:
        image = hecke_action(row, n)
        coords = membership(image, space)
        if coords is None:
            raise AssertionError(
                f"T({n}) image of a basis row left M_{space.k}; basis corrupt"
            )
        cols.append(coords)
    mat = MatFp(space.p, [[cols[j][i] for j in range(space.dim)] for i in range(space.dim)], space.dim)
    return HeckeOp(n=n, k=space.k, p=space.p, mat=mat)


@dataclass
class HeckeAlgebra:
    """Linear basis (identity first) of the algebra generated by T(n)."""

    space: FormSpace
    basis: list[MatFp]
    generator_indices: list[int]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def structure_constants(self) -> list[list[list[int]]]:
        """c[i][j] = coordinates of basis[i] * basis[j] in the basis."""
        stacked = MatFp(
            self.space.p,
            [[b.flat()[r] for b in self.basis] for r in range(len(self.basis[0].flat()))],
            len(self.basis),
        )
        table = []
        for bi in self.basis:
            row = []
            for bj in self.basis:
                coords = solve(stacked, (bi * bj).flat())
                if coords is None:
                    raise AssertionError("algebra closure is not closed")
                row.append(coords)
            table.append(row)
        return table


def full_hecke_algebra(space: FormSpace) -> HeckeAlgebra:
    """Closure of {T(n) : n <= sturm(k)}.

    By duality the functionals f -> a(1; f|t) realize a(n; f) for these n,
    which pin forms down, so this generating set spans the algebra's dual.
    """
    bound = sturm(space.k)
    gens = [hecke_matrix(space, n).mat for n in range(2, bound + 1)]
    basis = algebra_closure(gens, p=space.p, dim=space.dim)
    return HeckeAlgebra(space=space, basis=basis, generator_indices=list(range(2, bound + 1)))


def duality_pairing_matrix(space: FormSpace, algebra: HeckeAlgebra) -> tuple[MatFp, int]:
    """The pairing matrix [a(1; f_j | t_i)] and its rank.

    Full rank is the perfect-duality statement, valid for 2 <= k not
    divisible by p-1; outside that range the rank is reported, not
    asserted.
    """
    if space.prec < 2:
        raise PrecisionError("pairing against a(1) needs at least two coefficients")
    a1 = [row.coeffs[1] for row in space.rows]  # a(1) of each basis row
    p = space.p
    entries = []
    for t in algebra.basis:
        entries.append(
            [sum(a1[r] * t.rows[r][j] for r in range(space.dim)) % p for j in range(space.dim)]
        )
    mat = MatFp(p, entries, space.dim)
    return mat, rref(mat)[2]


def ordinary_projector(space: FormSpace) -> MatFp:
    """The idempotent attached to T(p): projector onto its invertible part."""
    return stable_idempotent(hecke_matrix(space, space.p).mat)


def ordinary_dim(p: int, k: int) -> int:
    """Rank of the ordinary projector on M_k(F_p); 0 for empty weights."""
    from .qexp import space_dim

    if space_dim(k) == 0:
        return 0
    space = miller_basis(p, k, p * sturm(k))
    return rref(ordinary_projector(space))[2]


@dataclass
class EisLocalPiece:
    """The generalized eigenspace at the Eisenstein maximal ideal.

    `basis` rows are vectors in the ambient FormSpace's coordinates;
    `restricted` maps n to the matrix of T(n) on the piece.  Every
    restricted T(n) - sigma_(k-1)(n) is nilpotent here.
    """

    space: FormSpace
    basis: MatFp  # rows = piece basis vectors, in space coordinates
    restricted: dict[int, MatFp]
    system: EisensteinSystem
    cuspidal: bool = field(default=False)

    @property
    def p(self) -> int:
        return self.space.p

    @property
    def k(self) -> int:
        return self.space.k

    @property
    def dim(self) -> int:
        return self.basis.nrows

    def eta_restricted(self, n: int) -> MatFp:
        """(T(n) - sigma_(k-1)(n)) on the piece."""
        lam = self.system.eigenvalue(n)
        return self.restricted[n] - MatFp.identity(self.p, self.dim).scaled(lam)

    def vector_series(self, coords: list[int], prec: int) -> QSeries:
        """Expand a piece vector to a q-series at any requested precision."""
        high = miller_basis(self.p, self.k, max(prec, self.space.prec))
        ambient = self.basis.transpose().apply(coords)
        return high.coords_to_series(ambient).truncate(prec)

    def basis_series(self, prec: int) -> list[QSeries]:
        eye = MatFp.identity(self.p, self.dim)
        return [self.vector_series(eye.row(i), prec) for i in range(self.dim)]

    def contains_ambient(self, vec: list[int]) -> bool:
        return solve(self.basis.transpose(), vec) is not None

    def cuspidal_subpiece(self) -> "EisLocalPiece":
        """The intersection with the cuspidal subspace (constant term zero).

        In echelon coordinates the constant term of a vector is its
        pivot-0 entry, so one linear condition cuts the subspace out.
        """
        p = self.p
        condition = MatFp(p, [self.basis.col(0)], self.dim)  # wants c . B[:,0] = 0
        ker = kernel(condition)  # rows = piece-coordinates of cuspidal vectors
        amb = ker * self.basis  # back to ambient coordinates
        sub_restricted = {}
        for n, op in self.restricted.items():
            sub_restricted[n] = _restrict_operator(op, ker)
        return EisLocalPiece(
            space=self.space,
            basis=amb,
            restricted=sub_restricted,
            system=self.system,
            cuspidal=True,
        )


def _restrict_operator(op: MatFp, basis_rows: MatFp) -> MatFp:
    """Matrix of op on the span of basis_rows (which must be op-stable)."""
    p = op.p
    bt = basis_rows.transpose()
    cols = []
    for i in range(basis_rows.nrows):
        image = op.apply(basis_rows.row(i))
        coords = solve(bt, image)
        if coords is None:
            raise AssertionError("subspace is not stable under the operator")
        cols.append(coords)
    n = basis_rows.nrows
    return MatFp(p, [[cols[j][i] for j in range(n)] for i in range(n)], n)


def eisenstein_localize(space: FormSpace) -> EisLocalPiece:
    """Localize M_k at the Eisenstein maximal ideal.

    The piece is the common generalized kernel of the generators
    T(n) - sigma_(k-1)(n), n up to the coefficient bound, with the
    ambient dimension as the nilpotency exponent.  The Eisenstein series
    itself always lies inside; the piece exceeds its span exactly when a
    congruent cusp form exists.
    """
    p, k = space.p, space.k
    bound = sturm(k)
    system = EisensteinSystem(p, k)
    ops = {n: hecke_matrix(space, n).mat for n in range(1, bound + 1)}
    etas = [
        ops[n] - MatFp.identity(p, space.dim).scaled(system.eigenvalue(n))
        for n in range(2, bound + 1)
    ]
    basis = (
        generalized_eigenspace(etas, space.dim)
        if etas
        else MatFp.identity(p, space.dim)
    )
    restricted = {n: _restrict_operator(ops[n], basis) for n in ops}
    piece = EisLocalPiece(space=space, basis=basis, restricted=restricted, system=system)
    for n in range(2, bound + 1):
        if not (piece.eta_restricted(n) ** piece.dim).is_zero():
            raise AssertionError("localization generator fails to be nilpotent")
    return piece


@dataclass(frozen=True)
class TpRedundancy:
    """Outcome of the prime-to-p generation check."""

    checked: bool
    redundant: bool | None
    reason: str


def t_p_redundancy_check(space: FormSpace) -> TpRedundancy:
    """Does dropping T(p) lose anything from the Hecke algebra?

    Compares the closure of {T(n) : n <= bound, p does not divide n} with
    the closure of the same set plus T(p); the prime-to-p operators are
    expected to generate everything when 2 <= k <= p-2.  Weights outside
    that window are reported as skipped.
    """
    p, k = space.p, space.k
    if not (2 <= k <= p - 2):
        return TpRedundancy(checked=False, redundant=None, reason=f"weight {k} outside [2, {p - 2}]")
    if space.dim == 0:
        return TpRedundancy(checked=True, redundant=True, reason="zero space")
    bound = sturm(k)
    prime_to_p = [
        hecke_matrix(space, n).mat for n in range(2, bound + 1) if n % p != 0
    ]
    without = algebra_closure(prime_to_p, p=p, dim=space.dim)
    with_tp = algebra_closure(
        prime_to_p + [hecke_matrix(space, p).mat], p=p, dim=space.dim
    )
    return TpRedundancy(
        checked=True,
        redundant=len(without) == len(with_tp),
        reason="compared closures with and without T(p)",
    )


def hecke_report(p: int, k: int) -> dict:
    """Summary of the weight-k picture at p, as a plain dict."""
    prec = max(sturm(k) ** 2, p * sturm(k))
    space = miller_basis(p, k, prec)
    algebra = full_hecke_algebra(space)
    _, dual_rank = duality_pairing_matrix(space, algebra)
    piece = eisenstein_localize(space)
    tp = t_p_redundancy_check(space)
    return {
        "p": p,
        "k": k,
        "dim": space.dim,
        "eis_local_dim": piece.dim,
        "ordinary_dim": rref(ordinary_projector(space))[2],
        "duality_rank": dual_rank,
        "algebra_dim": algebra.dim,
        "tp_redundant": tp.redundant,
        "tp_checked": tp.checked,
        "precision": prec,
    }
