"""Structure theory of the Eisenstein-local Hecke algebras.

An Eisenstein-local piece carries a finite commutative F_p-algebra: the
closure of the restricted T(n).  It is local, with maximal ideal generated
by the restricted T(n) - sigma_(k-1)(n) (all nilpotent), and the image of
the Eisenstein ideal in it coincides with that maximal ideal.  This module
computes socle dimensions (Gorenstein = socle dimension one), minimal
generator counts of the ideal image, cyclicity of the cuspidal piece as a
module, and cross-checks the equivalences these are expected to satisfy
when the mirror companion dimension is one.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .companions import companion_dimension, localized_pieces
from .errors import NotLocalError
from .hecke import EisLocalPiece
from .linalg import EchelonSpace, MatFp, algebra_closure, kernel, solve
from .qexp import PrecisionPlan, plan_companion, sturm


@dataclass
class LocalAlgebra:
    """A finite-dimensional commutative local F_p-algebra.

    Elements are coordinate vectors in a fixed basis; `table[i][j]` holds
    the coordinates of e_i * e_j.  The maximal ideal is recorded through a
    generating set of coordinates.
    """

    p: int
    dim: int
    table: list[list[list[int]]]
    identity: list[int]
    maxideal_gens: list[list[int]]

    def multiply(self, x: list[int], y: list[int]) -> list[int]:
        p = self.p
        out = [0] * self.dim
        for i, xi in enumerate(x):
            if xi % p == 0:
                continue
            for j, yj in enumerate(y):
                if yj % p == 0:
                    continue
                c = xi * yj
                for r, t in enumerate(self.table[i][j]):
                    out[r] = (out[r] + c * t) % p
        return out

    def mult_matrix(self, g: list[int]) -> MatFp:
        """Matrix of x -> g*x in the algebra's basis."""
        cols = []
        eye = MatFp.identity(self.p, self.dim)
        for i in range(self.dim):
            cols.append(self.multiply(g, eye.row(i)))
        return MatFp(
            self.p,
            [[cols[j][i] for j in range(self.dim)] for i in range(self.dim)],
            self.dim,
        )

    def ideal_span(self, gens: list[list[int]]) -> list[list[int]]:
        """Echelon basis of the ideal generated by the given elements."""
        ech = EchelonSpace(self.p, self.dim)
        frontier = []
        for g in gens:
            row = ech.insert(g)
            if row is not None:
                frontier.append(row)
        eye = MatFp.identity(self.p, self.dim)
        while frontier:
            nxt = []
            for x in frontier:
                for i in range(self.dim):
                    prod = self.multiply(x, eye.row(i))
                    row = ech.insert(prod)
                    if row is not None:
                        nxt.append(row)
            frontier = nxt
        return [r[:] for r in ech.rows]

    def verify_local(self) -> None:
        """Confirm the recorded maximal ideal is nilpotent of codimension 1."""
        for g in self.maxideal_gens:
            m = self.mult_matrix(g)
            if not (m**self.dim * MatFp(self.p, [g], self.dim).transpose()).is_zero():
                raise NotLocalError("a maximal-ideal generator is not nilpotent")
        ideal = self.ideal_span(self.maxideal_gens)
        if len(ideal) != self.dim - 1:
            raise NotLocalError(
                f"ideal of generators has dimension {len(ideal)}, expected {self.dim - 1}"
            )

    def spot_check_associativity(self) -> None:
        eye = MatFp.identity(self.p, self.dim)
        gens = self.maxideal_gens[:2] + [self.identity]
        for a in gens:
            for b in gens:
                for c in [eye.row(self.dim - 1), self.identity]:
                    lhs = self.multiply(self.multiply(a, b), c)
                    rhs = self.multiply(a, self.multiply(b, c))
                    if lhs != rhs:
                        raise AssertionError("structure constants not associative")


def restrict_algebra(piece: EisLocalPiece) -> LocalAlgebra:
    """The local Hecke algebra acting on an Eisenstein-local piece.

    Basis from the closure of the restricted T(n); maximal ideal generated
    by the restricted T(n) - sigma_(k-1)(n).  A non-local outcome (which a
    semisimple, non-localized input would produce) is rejected.
    """
    if piece.dim == 0:
        raise ValueError("zero piece carries the zero ring")
    p = piece.p
    bound = sturm(piece.k)
    ops = [piece.restricted[n] for n in range(2, bound + 1)]
    basis_mats = algebra_closure(ops, p=p, dim=piece.dim)
    # coordinates: stack the flattened basis as columns
    width = piece.dim * piece.dim
    stacked = MatFp(
        p, [[b.flat()[r] for b in basis_mats] for r in range(width)], len(basis_mats)
    )

    def coords_of(mat: MatFp) -> list[int]:
        c = solve(stacked, mat.flat())
        if c is None:
            raise AssertionError("operator outside its own closure")
        return c

    dim = len(basis_mats)
    table = [
        [coords_of(basis_mats[i] * basis_mats[j]) for j in range(dim)]
        for i in range(dim)
    ]
    alg = LocalAlgebra(
        p=p,
        dim=dim,
        table=table,
        identity=coords_of(MatFp.identity(p, piece.dim)),
        maxideal_gens=[coords_of(piece.eta_restricted(n)) for n in range(2, bound + 1)],
    )
    alg.verify_local()
    alg.spot_check_associativity()
    return alg


def socle_dim(alg: LocalAlgebra) -> int:
    """Dimension of the annihilator of the maximal ideal.

    x kills the whole ideal as soon as it kills the generators, so the
    socle is the common kernel of the multiplication maps by generators.
    The unit algebra (zero maximal ideal) has socle dimension equal to its
    own dimension, which is 1 in the local case.
    """
    alg.verify_local()
    if not alg.maxideal_gens or alg.dim == 1:
        return alg.dim
    stacked = MatFp.vstack([alg.mult_matrix(g) for g in alg.maxideal_gens])
    return kernel(stacked).nrows


def gorenstein(alg: LocalAlgebra) -> bool:
    """Gorenstein for an Artinian local algebra: one-dimensional socle."""
    return socle_dim(alg) == 1


def eis_ideal_min_gens(cusp_alg: LocalAlgebra | None, full_alg: LocalAlgebra) -> int:
    """Minimal generator count of the Eisenstein-ideal image.

    In the mod-p local algebra the image of the Eisenstein ideal is the
    ideal generated by the T(n) - sigma_(k-1)(n), which is the whole
    maximal ideal; graded Nakayama counts its minimal generators as
    dim I / (m I).  A zero cuspidal piece short-circuits to 0: the ideal
    image is zero exactly when no congruent cusp form exists.
    """
    if cusp_alg is None:
        return 0
    ideal = full_alg.ideal_span(full_alg.maxideal_gens)
    if not ideal:
        return 0
    ech = EchelonSpace(full_alg.p, full_alg.dim)
    for x in ideal:
        for g in full_alg.maxideal_gens:
            ech.insert(full_alg.multiply(x, g))
    mi_rows = [r[:] for r in ech.rows]
    # m*I spanned by products of ideal elements with the generators; close as ideal
    mi = full_alg.ideal_span(mi_rows) if mi_rows else []
    return len(ideal) - len(mi)


def module_cyclic_dim(piece_cusp: EisLocalPiece) -> int:
    """dim of (cuspidal piece) / (maximal ideal * cuspidal piece).

    One means the piece is cyclic over its local Hecke algebra, by
    Nakayama.  Computed from the nilpotent generators acting on the piece.
    """
    if piece_cusp.dim == 0:
        return 0
    p = piece_cusp.p
    bound = sturm(piece_cusp.k)
    ech = EchelonSpace(p, piece_cusp.dim)
    eye = MatFp.identity(p, piece_cusp.dim)
    for n in range(2, bound + 1):
        eta = piece_cusp.eta_restricted(n)
        for i in range(piece_cusp.dim):
            ech.insert(eta.apply(eye.row(i)))
    return piece_cusp.dim - ech.dim


def check_equivalences(gor_h: bool, cyclic: bool, min_gens_one: bool) -> list[str]:
    """Pairwise-equivalence failures among the three structure conditions."""
    failures = []
    if gor_h != cyclic:
        failures.append("gorenstein(h) and cyclicity of the cuspidal piece disagree")
    if gor_h != min_gens_one:
        failures.append("gorenstein(h) and principality of the ideal image disagree")
    if cyclic != min_gens_one:
        failures.append("cyclicity and principality disagree")
    return failures


@dataclass
class StructureReport:
    """Structure verdicts for one (p, k) with cross-checked equivalences."""

    p: int
    k: int
    dim_m_local: int
    dim_s_local: int
    c_m_prime: int
    gorenstein_full: bool
    gorenstein_cusp: bool | None
    socle_full: int
    socle_cusp: int | None
    min_gens: int
    cyclic_cusp: bool | None
    dim_identity_ok: bool
    zero_cuspidal: bool
    equivalence_failures: list[str] = field(default_factory=list)
    complete_intersection: str = "not evaluated"
    plan: PrecisionPlan | None = None

    @property
    def all_asserted_hold(self) -> bool:
        ok = not self.equivalence_failures and self.dim_identity_ok
        if self.c_m_prime == 1:
            ok = ok and self.gorenstein_full
        return ok

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "k": self.k,
            "dim_m_local": self.dim_m_local,
            "dim_s_local": self.dim_s_local,
            "c_m_prime": self.c_m_prime,
            "gorenstein_full": self.gorenstein_full,
            "gorenstein_cusp": self.gorenstein_cusp,
            "socle_full": self.socle_full,
            "socle_cusp": self.socle_cusp,
            "eis_ideal_min_gens": self.min_gens,
            "cyclic_cuspidal": self.cyclic_cusp,
            "dim_identity_ok": self.dim_identity_ok,
            "zero_cuspidal": self.zero_cuspidal,
            "equivalence_failures": self.equivalence_failures,
            "complete_intersection": self.complete_intersection,
            "all_asserted_hold": self.all_asserted_hold,
            "plan": self.plan.to_json() if self.plan else None,
        }

    def csv_row(self) -> str:
        gh = "" if self.gorenstein_cusp is None else str(self.gorenstein_cusp).lower()
        return (
            f"{self.p},{self.k},{self.dim_m_local},{self.dim_s_local},"
            f"{self.c_m_prime},{str(self.gorenstein_full).lower()},{gh},{self.min_gens}"
        )


CSV_HEADER = "p,k,dimM_m,dimS_m,c_m_prime,gor_H,gor_h,min_gens"


def dim_identity_holds(piece: EisLocalPiece, piece_cusp: EisLocalPiece) -> bool:
    """dim(M-local) - 1 = dim(S-local): the Eisenstein line survives."""
    return piece.dim - 1 == piece_cusp.dim


def structure_report(p: int, k: int) -> StructureReport:
    """Full structure suite for one (p, k): the finite-weight equivalences.

    Under c(m') = 1 the localized full algebra is asserted Gorenstein, the
    cuspidal-side conditions (Gorenstein, cyclic piece, principal ideal
    image) are asserted pairwise equivalent, and the dimension identity
    dim(M-local) = dim(S-local) + 1 is asserted.  Complete-intersection
    status is reported as not evaluated.
    """
    piece, piece_prime = localized_pieces(p, k)
    cusp = piece.cuspidal_subpiece()
    c_m_prime = companion_dimension(piece_prime)
    full_alg = restrict_algebra(piece)
    zero_cusp = cusp.dim == 0
    if zero_cusp:
        cusp_alg = None
        gor_h: bool | None = None
        socle_h: int | None = None
        cyclic: bool | None = None
    else:
        cusp_alg = restrict_algebra(cusp)
        socle_h = socle_dim(cusp_alg)
        gor_h = socle_h == 1
        cyclic = module_cyclic_dim(cusp) == 1
    min_gens = eis_ideal_min_gens(cusp_alg, full_alg)
    failures: list[str] = []
    if c_m_prime == 1 and not zero_cusp:
        failures = check_equivalences(bool(gor_h), bool(cyclic), min_gens == 1)
    report = StructureReport(
        p=p,
        k=k,
        dim_m_local=piece.dim,
        dim_s_local=cusp.dim,
        c_m_prime=c_m_prime,
        gorenstein_full=gorenstein(full_alg),
        gorenstein_cusp=gor_h,
        socle_full=socle_dim(full_alg),
        socle_cusp=socle_h,
        min_gens=min_gens,
        cyclic_cusp=cyclic,
        dim_identity_ok=dim_identity_holds(piece, cusp),
        zero_cuspidal=zero_cusp,
        equivalence_failures=failures,
        plan=plan_companion(p, k),
    )
    return report
