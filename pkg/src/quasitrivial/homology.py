"""Ext dimensions, cohomology of kernel sheaves and tangent spaces.

Ext groups between finite-length modules over Q[x, y, z] are computed from
the Koszul complex of the three commuting operators
``delta_X(g) = g X_M - X_N g`` acting on Hom_Q(M, N).  The quotients live in
one affine chart, where these agree with the global Ext groups on P^3.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .linalg import Matrix, rank_of_rows
from .quot import Module, QuotPoint, _as_module, commutator_witness


class NonCommutingError(ValueError):
    pass


class FormulaPreconditionError(ValueError):
    pass


@dataclass(frozen=True)
class ExtTable:
    hom: int
    ext1: int
    ext2: int
    ext3: int
    source: str = "computed-koszul"

    @property
    def dims(self) -> tuple[int, int, int, int]:
        return self.hom, self.ext1, self.ext2, self.ext3

    @property
    def euler_characteristic(self) -> int:
        return self.hom - self.ext1 + self.ext2 - self.ext3

    def __add__(self, other: "ExtTable") -> "ExtTable":
        return ExtTable(*(a + b for a, b in zip(self.dims, other.dims)), source=self.source)

    def to_json(self) -> dict:
        return {"hom": self.hom, "ext1": self.ext1, "ext2": self.ext2, "ext3": self.ext3,
                "source": self.source}


@dataclass(frozen=True)
class CohomologyTable:
    h0: int
    h1: int
    h2: int = 0
    h3: int = 0

    def to_json(self) -> dict:
        return {"h0": self.h0, "h1": self.h1, "h2": self.h2, "h3": self.h3}


def _delta(XM: Matrix, XN: Matrix) -> list[list[Fraction]]:
    """Matrix of g -> g XM - XN g on row-major vec(g), g of shape (nN, nM)."""
    m, k = XN.nrows, XM.nrows
    size = m * k
    D = [[Fraction(0)] * size for _ in range(size)]
    for i in range(m):
        for j in range(k):
            row = D[i * k + j]
            # (g XM)[i, j] = sum_l g[i, l] XM[l, j]
            for l in range(k):
                c = XM[l, j]
                if c:
                    row[i * k + l] += c
            # (XN g)[i, j] = sum_l XN[i, l] g[l, j]
            for l in range(m):
                c = XN[i, l]
                if c:
                    row[l * k + j] -= c
    return D


def _koszul_ranks(M: Module, N: Module) -> tuple[int, int, int, int]:
    dA, dB, dC = (_delta(XM, XN) for XM, XN in zip(M.operators, N.operators))
    size = M.n * N.n
    zero = [Fraction(0)] * size

    def hcat(*blocks):
        # blocks: list of square size x size matrices (or None for zero)
        return [sum(((b[i] if b is not None else zero) for b in blocks), []) for i in range(size)]

    def neg(D):
        return [[-x for x in row] for row in D]

    # d0: g -> (dA g, dB g, dC g); rows stacked
    d0 = dA + dB + dC
    # d1: (g1,g2,g3) -> (dB g1 - dA g2, dC g1 - dA g3, dC g2 - dB g3)
    d1 = (hcat(dB, neg(dA), None) + hcat(dC, None, neg(dA)) + hcat(None, dC, neg(dB)))
    # d2: (h1,h2,h3) -> dC h1 - dB h2 + dA h3
    d2 = hcat(dC, neg(dB), dA)
    r0 = rank_of_rows(d0, size)
    r1 = rank_of_rows(d1, 3 * size)
    r2 = rank_of_rows(d2, 3 * size)
    return size, r0, r1, r2


def koszul_ext(M, N) -> ExtTable:
    """dim Ext^i(M, N), i = 0..3, for finite modules given by commuting triples."""
    M, N = _as_module(M), _as_module(N)
    for mod in (M, N):
        if commutator_witness(*mod.operators) is not None:
            raise NonCommutingError("module operators do not commute")
    size, r0, r1, r2 = _koszul_ranks(M, N)
    return ExtTable(
        hom=size - r0,
        ext1=3 * size - r1 - r0,
        ext2=3 * size - r2 - r1,
        ext3=size - r2,
    )


def cohomology_of_kernel(qp: QuotPoint) -> CohomologyTable:
    """h^i(E) for E = ker(O^r -> Q) on P^3.

    H^0(E) is the kernel of the framing map Q^r -> Q^n and the long exact
    sequence gives h^1(E) = n - r + h^0(E); higher cohomology vanishes.
    """
    h0 = qp.r - rank_of_rows(qp.framing.rows, qp.r)
    return CohomologyTable(h0, qp.n - qp.r + h0)


def hom_E_Q(qp: QuotPoint, ext_qq: ExtTable | None = None) -> int:
    """hom(E, Q_E) = r n + ext^1(Q, Q) - hom(Q, Q)."""
    t = ext_qq or koszul_ext(qp, qp)
    return qp.r * qp.n + t.ext1 - t.hom


def ext1_E_E(qp: QuotPoint, verdict=None) -> int:
    """ext^1(E, E) = hom(E, Q_E) - r^2 + 1; only valid for stable E."""
    from .stability import STABLE, check_stability

    if verdict is None:
        verdict = check_stability(qp)
    if verdict.status != STABLE or not verdict.certified:
        raise FormulaPreconditionError(
            f"formula requires stability (got {verdict.status}, certified={verdict.certified})")
    return hom_E_Q(qp) - qp.r ** 2 + 1


def hom_IZ_OZ(Q) -> int:
    """hom(I_Z, O_Z) = n + ext^1(Q, Q) - hom(Q, Q) for a finite module Q = O_Z."""
    mod = _as_module(Q)
    t = koszul_ext(mod, mod)
    return mod.n + t.ext1 - t.hom


def linearized_commutator_rows(A: Matrix, B: Matrix, C: Matrix, extra: int = 0):
    """Rows of the linearized equations [dA,B]+[A,dB] = 0 (and the other two pairs).

    Unknowns are vec(dA), vec(dB), vec(dC) (row-major) followed by ``extra``
    unconstrained coordinates.
    """
    n = A.nrows
    nn = n * n
    width = 3 * nn + extra
    rows = []
    ops = (A, B, C)
    for a, b in ((0, 1), (0, 2), (1, 2)):
        X, Y = ops[a], ops[b]
        # [dX, Y] + [X, dY] = dX Y - Y dX + X dY - dY X
        for i in range(n):
            for j in range(n):
                row = [Fraction(0)] * width
                for l in range(n):
                    # dX Y: dX[i,l] Y[l,j]
                    if Y[l, j]:
                        row[a * nn + i * n + l] += Y[l, j]
                    # - Y dX: Y[i,l] dX[l,j]
                    if Y[i, l]:
                        row[a * nn + l * n + j] -= Y[i, l]
                    # X dY
                    if X[i, l]:
                        row[b * nn + l * n + j] += X[i, l]
                    # - dY X
                    if X[l, j]:
                        row[b * nn + i * n + l] -= X[l, j]
                rows.append(row)
    return rows, width


def adhm_tangent(qp: QuotPoint) -> int:
    """Zariski tangent dimension of the Quot scheme at ``qp`` from the matrix model.

    Solutions (dA, dB, dC, dv_1..dv_r) of the linearized commutator equations,
    minus the n^2 directions of the (free, by cyclicity) GL_n action.
    """
    n = qp.n
    rows, width = linearized_commutator_rows(*qp.operators, extra=qp.r * n)
    return width - rank_of_rows(rows, width) - n * n


def commuting_tangent_dim(A: Matrix, B: Matrix, C: Matrix) -> int:
    """Dimension of the linearized commuting-variety equations at (A, B, C)."""
    rows, width = linearized_commutator_rows(A, B, C)
    return width - rank_of_rows(rows, width)


# ---------------------------------------------------------------------------
# closed formulas


def formula_ext1_component(r: int, n: int, d: int = 3) -> int:
    """Dimension n(d + r - 1) - r^2 + 1 of the constructed component."""
    return n * (d + r - 1) - r * r + 1


def formula_disjoint_ext(rk_F: int, rk_G: int, h1_G: int, h0_QF: int) -> tuple[int, int, int]:
    """(ext^1, ext^2, ext^3)(F, G) for quasi-trivial F, G with disjoint supports."""
    for x in (rk_F, rk_G, h1_G, h0_QF):
        if x < 0:
            raise ValueError("inputs must be nonnegative")
    return rk_F * h1_G, rk_G * h0_QF, 0


def formula_dim_family(hom_iz_oz: int, r: int, n: int) -> int:
    """ext^1(E, E) = hom(I_Z, O_Z) + (n - r - 1)(r - 1)."""
    return hom_iz_oz + (n - r - 1) * (r - 1)


def formula_dim_family_variant(hom_iz_oz: int, r: int, n: int) -> int:
    """The variant hom(I_Z, O_Z) + (r - 1)(n - 1); disagrees with the derivation for r > 1."""
    return hom_iz_oz + (r - 1) * (n - 1)
