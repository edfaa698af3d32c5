"""Exact integer homology: Smith normal form, chain complexes, normalized bar
complexes of finite groups (and their union subcomplexes over a family of
subgroups), and order complexes of finite posets.

All arithmetic is on Python ints, so intermediate growth is never truncated.
"""

from __future__ import annotations

import itertools
import operator
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Sequence

from .core import CantorError
from .groups import FiniteGroup, GroupError


class HomologyError(CantorError):
    pass


# -- matrices -----------------------------------------------------------------------

@dataclass
class IntMatrix:
    """Sparse integer matrix: ``entries[i][j]`` for the nonzero entries only."""

    nrows: int
    ncols: int
    entries: dict = field(default_factory=dict)

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence[int]], ncols: int | None = None) -> "IntMatrix":
        rows = [list(r) for r in rows]
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise HomologyError("ragged matrix")
        ent = {}
        for i, r in enumerate(rows):
            nz = {j: int(v) for j, v in enumerate(r) if v}
            if nz:
                ent[i] = nz
        return cls(len(rows), ncols, ent)

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "IntMatrix":
        return cls(nrows, ncols, {})

    def to_dense(self) -> list:
        out = [[0] * self.ncols for _ in range(self.nrows)]
        for i, row in self.entries.items():
            for j, v in row.items():
                out[i][j] = v
        return out

    def add(self, i: int, j: int, v: int) -> None:
        if not v:
            return
        row = self.entries.setdefault(i, {})
        nv = row.get(j, 0) + v
        if nv:
            row[j] = nv
        else:
            del row[j]
            if not row:
                del self.entries[i]

    def nnz(self) -> int:
        return sum(len(r) for r in self.entries.values())

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.ncols != other.nrows:
            raise HomologyError("shape mismatch in product")
        out = IntMatrix(self.nrows, other.ncols)
        for i, row in self.entries.items():
            acc: dict = {}
            for k, a in row.items():
                orow = other.entries.get(k)
                if orow:
                    for j, b in orow.items():
                        acc[j] = acc.get(j, 0) + a * b
            acc = {j: v for j, v in acc.items() if v}
            if acc:
                out.entries[i] = acc
        return out

    def is_zero(self) -> bool:
        return not self.entries


def matmul(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]]) -> list:
    Bt = list(zip(*B)) if B and B[0] else []
    ncols = len(B[0]) if B else 0
    if not Bt:
        return [[0] * ncols for _ in A]
    return [[sum(map(operator.mul, row, col)) for col in Bt] for row in A]


def determinant(M: Sequence[Sequence[int]]) -> int:
    """Fraction-free (Bareiss) determinant."""
    n = len(M)
    if n == 0:
        return 1
    A = [list(r) for r in M]
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k]:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = A[k][k]
        rowk = A[k]
        for i in range(k + 1, n):
            rowi = A[i]
            aik = rowi[k]
            for j in range(k + 1, n):
                rowi[j] = (rowi[j] * akk - aik * rowk[j]) // prev
        prev = akk
    return sign * A[n - 1][n - 1]


# -- Smith normal form ----------------------------------------------------------------

def _rquot(b: int, p: int) -> int:
    """Quotient of b by p rounded to the nearest integer."""
    q, r = divmod(b, p)
    if 2 * abs(r) > abs(p):
        q += 1
    return q


@dataclass
class SNFResult:
    """U * M * V = D with D diagonal (divisibility chain).  ``U_inv`` and
    ``V_inv`` are integer inverses of U and V, which certifies det = ±1."""

    D: list
    U: list | None = None
    V: list | None = None
    U_inv: list | None = None
    V_inv: list | None = None

    @property
    def diagonal(self) -> list:
        return [self.D[i][i] for i in range(min(len(self.D), len(self.D[0]) if self.D else 0))]

    @property
    def invariant_factors(self) -> list:
        return [d for d in self.diagonal if d]


class _Elim:
    """Integer matrix under elementary operations, optionally recording the
    transformations and their inverses."""

    def __init__(self, M, certificates: bool):
        self.A = [[int(x) for x in row] for row in M]
        self.m = m = len(self.A)
        self.n = n = len(self.A[0]) if m else 0
        self.cert = certificates
        if certificates:
            eye = lambda k: [[int(i == j) for j in range(k)] for i in range(k)]
            self.U, self.UinvT = eye(m), eye(m)  # U rows; U^-1 stored transposed
            self.Vt, self.Vinv = eye(n), eye(n)  # V stored transposed; V^-1 rows

    def row_add(self, i: int, t: int, c: int) -> None:
        """row_i += c * row_t"""
        ri, rt = self.A[i], self.A[t]
        self.A[i] = [x + c * y for x, y in zip(ri, rt)]
        if self.cert:
            self.U[i] = [x + c * y for x, y in zip(self.U[i], self.U[t])]
            self.UinvT[t] = [x - c * y for x, y in zip(self.UinvT[t], self.UinvT[i])]

    def col_add(self, j: int, t: int, c: int) -> None:
        """col_j += c * col_t"""
        for row in self.A:
            if row[t]:
                row[j] += c * row[t]
        if self.cert:
            self.Vt[j] = [x + c * y for x, y in zip(self.Vt[j], self.Vt[t])]
            self.Vinv[t] = [x - c * y for x, y in zip(self.Vinv[t], self.Vinv[j])]

    def row_swap(self, i: int, j: int) -> None:
        if i == j:
            return
        A = self.A
        A[i], A[j] = A[j], A[i]
        if self.cert:
            self.U[i], self.U[j] = self.U[j], self.U[i]
            self.UinvT[i], self.UinvT[j] = self.UinvT[j], self.UinvT[i]

    def col_swap(self, i: int, j: int) -> None:
        if i == j:
            return
        for row in self.A:
            row[i], row[j] = row[j], row[i]
        if self.cert:
            self.Vt[i], self.Vt[j] = self.Vt[j], self.Vt[i]
            self.Vinv[i], self.Vinv[j] = self.Vinv[j], self.Vinv[i]

    def row_negate(self, i: int) -> None:
        self.A[i] = [-x for x in self.A[i]]
        if self.cert:
            self.U[i] = [-x for x in self.U[i]]
            self.UinvT[i] = [-x for x in self.UinvT[i]]


def snf(M: Sequence[Sequence[int]], certificates: bool = True) -> SNFResult:
    """Smith normal form of a dense integer matrix by Euclidean elimination
    with smallest-entry pivots.  With ``certificates`` the unimodular U and V
    with U M V = D are returned, together with their integer inverses."""
    E = _Elim(M, certificates)
    A, m, n = E.A, E.m, E.n
    for t in range(min(m, n)):
        # smallest |entry|, ties broken by fewest nonzeros in its row and column
        rcount = [sum(1 for v in A[i][t:] if v) for i in range(m)]
        ccount = [sum(1 for i in range(t, m) if A[i][j]) for j in range(n)]
        best = None
        for i in range(t, m):
            if not rcount[i]:
                continue
            row = A[i]
            for j in range(t, n):
                v = row[j]
                if v:
                    key = (abs(v), (rcount[i] - 1) * (ccount[j] - 1))
                    if best is None or key < best[0]:
                        best = (key, i, j)
        if best is None:
            break
        E.row_swap(t, best[1])
        E.col_swap(t, best[2])
        while True:
            p = A[t][t]
            for i in range(t + 1, m):
                if A[i][t]:
                    E.row_add(i, t, -_rquot(A[i][t], p))
            for j in range(t + 1, n):
                if A[t][j]:
                    E.col_add(j, t, -_rquot(A[t][j], p))
            # leftover remainders are smaller than the pivot: move the smallest in
            col = [(abs(A[i][t]), i) for i in range(t + 1, m) if A[i][t]]
            row = [(abs(A[t][j]), j) for j in range(t + 1, n) if A[t][j]]
            if col or row:
                if col and (not row or min(col)[0] <= min(row)[0]):
                    E.row_swap(t, min(col)[1])
                else:
                    E.col_swap(t, min(row)[1])
                continue
            bad = next((i for i in range(t + 1, m) if any(v % p for v in A[i][t + 1:])), None)
            if bad is None:
                break
            E.row_add(t, bad, 1)
        if A[t][t] < 0:
            E.row_negate(t)
    if not certificates:
        return SNFResult(A)
    V = [list(c) for c in zip(*E.Vt)] if n else []
    U_inv = [list(c) for c in zip(*E.UinvT)] if m else []
    return SNFResult(A, E.U, V, U_inv, E.Vinv)


def is_smith_form(D: Sequence[Sequence[int]]) -> bool:
    m = len(D)
    n = len(D[0]) if m else 0
    for i in range(m):
        for j in range(n):
            if i != j and D[i][j]:
                return False
    diag = [D[i][i] for i in range(min(m, n))]
    if any(d < 0 for d in diag):
        return False
    for a, b in zip(diag, diag[1:]):
        if a == 0 and b != 0:
            return False
        if a and b % a:
            return False
    return True


def verify_snf(M: Sequence[Sequence[int]], res: SNFResult) -> bool:
    """Check U M V = D with D in Smith form, and U U^-1 = I, V V^-1 = I for the
    returned integer inverses (so det U and det V are ±1)."""
    m = len(M)
    n = len(M[0]) if m else 0
    if res.U is None or res.V is None or res.U_inv is None or res.V_inv is None:
        raise HomologyError("no certificates to verify")
    if not is_smith_form(res.D):
        return False
    if m and n:
        if matmul(matmul(res.U, M), res.V) != res.D:
            return False
    eye = lambda k: [[int(i == j) for j in range(k)] for i in range(k)]
    return matmul(res.U, res.U_inv) == eye(m) and matmul(res.V, res.V_inv) == eye(n)


def invariant_factors(M: IntMatrix) -> list:
    """Nonzero invariant factors of a sparse matrix.  Unit pivots are eliminated
    sparsely (each removes a row and a column and contributes a factor 1); the
    remainder goes through the dense Smith normal form."""
    rows = {i: dict(r) for i, r in M.entries.items() if r}
    cols: dict = {}
    for i, r in rows.items():
        for j in r:
            cols.setdefault(j, set()).add(i)
    units = 0
    while True:
        best = None
        for i, r in rows.items():
            lr = len(r) - 1
            for j, v in r.items():
                if v == 1 or v == -1:
                    cost = lr * (len(cols[j]) - 1)
                    if best is None or cost < best[0]:
                        best = (cost, i, j)
                        if cost == 0:
                            break
            if best is not None and best[0] == 0:
                break
        if best is None:
            break
        _, pi, pj = best
        prow = rows.pop(pi)
        p = prow[pj]
        for j in prow:
            cols[j].discard(pi)
        for i in list(cols[pj]):
            r = rows[i]
            f = r[pj] * p
            for j, v in prow.items():
                nv = r.get(j, 0) - f * v
                if nv:
                    if j not in r:
                        cols[j].add(i)
                    r[j] = nv
                elif j in r:
                    del r[j]
                    cols[j].discard(i)
            if not r:
                del rows[i]
        del cols[pj]
        units += 1
    live_cols = sorted({j for r in rows.values() for j in r})
    if not live_cols:
        return [1] * units
    cidx = {j: k for k, j in enumerate(live_cols)}
    dense = []
    for i in sorted(rows):
        row = [0] * len(live_cols)
        for j, v in rows[i].items():
            row[cidx[j]] = v
        dense.append(row)
    return [1] * units + snf(dense, certificates=False).invariant_factors


# -- chain complexes ----------------------------------------------------------------------

@dataclass
class HomologyGroup:
    betti: int
    torsion: tuple = ()

    def is_zero(self) -> bool:
        return self.betti == 0 and not self.torsion

    def __str__(self):
        parts = []
        if self.betti:
            parts.append("Z" if self.betti == 1 else f"Z^{self.betti}")
        parts.extend(f"Z/{t}" for t in self.torsion)
        return " + ".join(parts) if parts else "0"

    def to_json(self) -> dict:
        return {"betti": self.betti, "torsion": list(self.torsion), "text": str(self)}


@dataclass
class HomologyResult:
    groups: list

    def __getitem__(self, k: int) -> HomologyGroup:
        return self.groups[k]

    def __len__(self):
        return len(self.groups)

    def reduced(self) -> "HomologyResult":
        if not self.groups:
            return self
        h0 = self.groups[0]
        if h0.betti < 1:
            raise HomologyError("reduced homology of the empty complex")
        return HomologyResult([HomologyGroup(h0.betti - 1, h0.torsion)] + self.groups[1:])

    def vanishes(self, through: int | None = None) -> bool:
        gs = self.groups if through is None else self.groups[:through + 1]
        return all(g.is_zero() for g in gs)

    def signature(self) -> tuple:
        return tuple((g.betti, tuple(g.torsion)) for g in self.groups)

    def __str__(self):
        return ", ".join(f"H{k}={g}" for k, g in enumerate(self.groups))

    def to_json(self) -> list:
        return [g.to_json() for g in self.groups]


@dataclass
class ChainComplex:
    """``dims[k]`` = rank of C_k; ``boundaries[k]``: C_k -> C_{k-1} for k >= 1,
    a dims[k-1] x dims[k] matrix.  Homology is exact in degrees 0..top; chain
    groups beyond top only serve to compute the image in degree top."""

    dims: list
    boundaries: dict
    top: int

    def __post_init__(self):
        for k, B in self.boundaries.items():
            if (B.nrows, B.ncols) != (self.dims[k - 1], self.dims[k]):
                raise HomologyError(f"boundary {k} has shape {B.nrows}x{B.ncols}")

    def boundary(self, k: int) -> IntMatrix:
        if k <= 0 or k >= len(self.dims):
            rows = self.dims[k - 1] if 0 < k <= len(self.dims) else 0
            cols = self.dims[k] if 0 <= k < len(self.dims) else 0
            return IntMatrix.zeros(rows, cols)
        return self.boundaries[k]

    def check(self) -> bool:
        """∂_{k-1} ∘ ∂_k = 0 for all k."""
        return all((self.boundary(k - 1) @ self.boundary(k)).is_zero()
                   for k in range(2, len(self.dims)))


def complex_homology(C: ChainComplex, check: bool = True) -> HomologyResult:
    if check and not C.check():
        raise HomologyError("boundary of boundary is not zero")
    factors = {}
    for k in range(1, min(C.top + 1, len(C.dims) - 1) + 1):
        factors[k] = invariant_factors(C.boundary(k))
    groups = []
    for k in range(C.top + 1):
        dim = C.dims[k] if k < len(C.dims) else 0
        rank_out = len(factors.get(k, []))
        incoming = factors.get(k + 1, [])
        betti = dim - rank_out - len(incoming)
        torsion = tuple(sorted(d for d in incoming if d > 1))
        groups.append(HomologyGroup(betti, torsion))
    return HomologyResult(groups)


# -- bar complexes -------------------------------------------------------------------------

def _check_subgroups(G: FiniteGroup, S: Iterable) -> list:
    out = []
    for H in S:
        H = frozenset(H)
        if not G.is_subgroup(H):
            raise GroupError(f"{G.subgroup_label(H)} is not a subgroup of {G.name}")
        out.append(H)
    return out


def bar_chains(G: FiniteGroup, S: Iterable, p: int) -> list:
    """Normalized p-chains [h1|...|hp] with every h_i in one member of S."""
    e = G.identity
    cells = set()
    for H in S:
        nontriv = sorted(h for h in H if h != e)
        cells.update(itertools.product(nontriv, repeat=p))
    return sorted(cells)


def bar_boundary(G: FiniteGroup, chain: tuple) -> dict:
    """Bar differential with trivial coefficients; degenerate faces dropped."""
    e = G.identity
    p = len(chain)
    out: dict = {}

    def put(face, sign):
        if e in face:
            return
        out[face] = out.get(face, 0) + sign

    put(chain[1:], 1)
    for i in range(p - 1):
        merged = chain[:i] + (G.mul(chain[i], chain[i + 1]),) + chain[i + 2:]
        put(merged, (-1) ** (i + 1))
    put(chain[:-1], (-1) ** p)
    return {f: c for f, c in out.items() if c}


def bar_subcomplex(G: FiniteGroup, S: Iterable, d: int) -> ChainComplex:
    """Union of the classifying spaces BS (S in the collection) inside BG, as a
    normalized chain complex through degree d+1.  With S = [G] this is the full
    bar complex."""
    members = _check_subgroups(G, S)
    cells = [bar_chains(G, members, p) for p in range(d + 2)]
    index = [{c: i for i, c in enumerate(cs)} for cs in cells]
    boundaries = {}
    for p in range(1, d + 2):
        B = IntMatrix(len(cells[p - 1]), len(cells[p]))
        for j, c in enumerate(cells[p]):
            for face, coeff in bar_boundary(G, c).items():
                B.add(index[p - 1][face], j, coeff)
        boundaries[p] = B
    return ChainComplex([len(cs) for cs in cells], boundaries, d)


def group_homology(G: FiniteGroup, d: int) -> HomologyResult:
    return complex_homology(bar_subcomplex(G, [frozenset(range(G.order))], d))


# -- posets and nerves ------------------------------------------------------------------------

@dataclass
class Poset:
    """A finite strict partial order: ``less`` holds the pairs (a, b) with a < b."""

    elements: list
    less: set

    def __post_init__(self):
        els = set(self.elements)
        if len(els) != len(self.elements):
            raise HomologyError("poset has repeated elements")
        for a, b in self.less:
            if a not in els or b not in els:
                raise HomologyError("relation mentions unknown element")
            if a == b:
                raise HomologyError(f"relation is not irreflexive at {a!r}")
            if (b, a) in self.less:
                raise HomologyError(f"relation is not antisymmetric at {a!r}, {b!r}")
        for a, b in self.less:
            for c in self.above(b):
                if (a, c) not in self.less:
                    raise HomologyError(f"relation is not transitive at {a!r} < {b!r} < {c!r}")

    @classmethod
    def from_function(cls, elements: Iterable[Hashable],
                      lt: Callable[[Hashable, Hashable], bool]) -> "Poset":
        els = list(elements)
        return cls(els, {(a, b) for a in els for b in els if a != b and lt(a, b)})

    def above(self, a) -> list:
        return [b for (x, b) in self.less if x == a]


def order_complex_simplices(P: Poset, max_dim: int) -> list:
    """Chains x0 < x1 < ... < xp of P, for p = 0..max_dim."""
    pos = {x: i for i, x in enumerate(P.elements)}
    up: dict = {x: [] for x in P.elements}
    for a, b in P.less:
        up[a].append(b)
    for a in up:
        up[a].sort(key=pos.__getitem__)
    simplices = [[(x,) for x in P.elements]]
    for _ in range(max_dim):
        nxt = [s + (b,) for s in simplices[-1] for b in up[s[-1]]]
        simplices.append(nxt)
    return simplices


def nerve_complex(P: Poset, d: int) -> ChainComplex:
    """Simplicial chain complex of the order complex of P through degree d+1."""
    simplices = order_complex_simplices(P, d + 1)
    index = [{s: i for i, s in enumerate(level)} for level in simplices]
    boundaries = {}
    for p in range(1, d + 2):
        B = IntMatrix(len(simplices[p - 1]), len(simplices[p]))
        for j, s in enumerate(simplices[p]):
            for i in range(p + 1):
                B.add(index[p - 1][s[:i] + s[i + 1:]], j, (-1) ** i)
        boundaries[p] = B
    return ChainComplex([len(level) for level in simplices], boundaries, d)


def simplicial_complex(facets: Iterable[Sequence], d: int) -> ChainComplex:
    """Chain complex of the simplicial complex generated by ``facets`` (vertices
    sortable), through degree d+1."""
    faces: list = [set() for _ in range(d + 2)]
    for f in facets:
        f = tuple(sorted(f))
        for k in range(min(len(f), d + 2)):
            faces[k].update(itertools.combinations(f, k + 1))
    levels = [sorted(fs) for fs in faces]
    index = [{s: i for i, s in enumerate(level)} for level in levels]
    boundaries = {}
    for p in range(1, d + 2):
        B = IntMatrix(len(levels[p - 1]), len(levels[p]))
        for j, s in enumerate(levels[p]):
            for i in range(p + 1):
                B.add(index[p - 1][s[:i] + s[i + 1:]], j, (-1) ** i)
        boundaries[p] = B
    return ChainComplex([len(level) for level in levels], boundaries, d)
