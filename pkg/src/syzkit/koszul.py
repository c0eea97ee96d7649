"""Koszul complex matrices, linear-strand cocycles, and graded Betti tables.

For an embedded scheme X in P^n with coordinate ring S = R/I (graded pieces
S_q spanned by standard monomials), the strand differentials are

    delta_{p,q} : Lambda^p V (x) S_q  ->  Lambda^{p-1} V (x) S_{q+1}
    delta(e_I (x) f) = sum_k  sign_k  e_{I minus i_k} (x) (x_{i_k} * f)

with V the degree-one piece and the sign for dropping the k-th (1-based)
index of an increasing tuple fixed by `removal_sign` below — the single
source of truth for every sign in this package (contraction in syzgeo uses
the same function).  The table entry is computed by ranks alone:

    b_{p,q} = dim(Lambda^p V (x) S_q) - rank delta_{p,q} - rank delta_{p+1,q-1}

Bases are canonical: wedge tuples in lexicographic order (index-major),
monomials degrevlex-descending; matrices act on column vectors, rows are
the target basis.

`minimal_free_resolution` is an independent oracle: it resolves R/I degree
by degree with graded kernels and minimal generator selection, never
touching the Koszul code path, and certifies completeness against the
exact Hilbert series numerator.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb

import numpy as np

from .errors import BudgetError, ConsistencyError, InputError
from .exactalg import complement_basis, kernel_basis, rref
from .polyring import DRL, EmbeddedScheme, Ideal, Polynomial

DEFAULT_ENTRY_BUDGET = 16_000_000


def removal_sign(position: int) -> int:
    """Sign carried by removing the index at `position` (0-based) from an
    increasing wedge tuple: (-1)^(position+1)."""
    return -1 if position % 2 == 0 else 1


@lru_cache(maxsize=None)
def exterior_basis(nvars: int, p: int) -> tuple[tuple[int, ...], ...]:
    """Increasing p-tuples from range(nvars), lexicographically ordered."""
    if p < 0 or p > nvars:
        return ()
    return tuple(itertools.combinations(range(nvars), p))


def koszul_space_dim(scheme: EmbeddedScheme, p: int, q: int) -> int:
    """dim Lambda^p V (x) S_q."""
    nv = scheme.ring.nvars
    if p < 0 or p > nv or q < 0:
        return 0
    return comb(nv, p) * scheme.ideal.hilbert_function(q)


def _check_budget(rows: int, cols: int, p: int, q: int, entry_budget: int | None):
    budget = DEFAULT_ENTRY_BUDGET if entry_budget is None else entry_budget
    if rows * cols > budget:
        raise BudgetError(
            f"koszul matrix delta_({p},{q}) has {rows} x {cols} = {rows * cols} "
            f"entries, over the budget of {budget}"
        )


def koszul_matrix(
    scheme: EmbeddedScheme, p: int, q: int, entry_budget: int | None = None
) -> np.ndarray:
    """The matrix of delta_{p,q} in the documented bases (int64 mod p).

    Columns: (I, m) with I in exterior_basis(n+1, p) major, m running over
    standard_monomials(q).  Rows: (J, m') with J in exterior_basis(n+1, p-1)
    and m' over standard_monomials(q+1).
    """
    ring = scheme.ring
    nv = ring.nvars
    char = ring.char
    rows = koszul_space_dim(scheme, p - 1, q + 1)
    cols = koszul_space_dim(scheme, p, q)
    _check_budget(rows, cols, p, q, entry_budget)
    mat = np.zeros((rows, cols), dtype=np.int64)
    if rows == 0 or cols == 0:
        return mat
    src_wedges = exterior_basis(nv, p)
    tgt_wedges = exterior_basis(nv, p - 1)
    tgt_index = {w: i for i, w in enumerate(tgt_wedges)}
    src_monos = scheme.ideal.standard_monomials(q)
    tgt_monos_index = scheme.ideal.standard_index(q + 1)
    width = len(tgt_monos_index)
    ci = 0
    for wedge in src_wedges:
        for m in src_monos:
            for k, i in enumerate(wedge):
                sign = removal_sign(k)
                j_row = tgt_index[wedge[:k] + wedge[k + 1 :]] * width
                for m2, c in scheme.ideal.nf_times_var(m, i).items():
                    mat[j_row + tgt_monos_index[m2], ci] += sign * c
            ci += 1
    return mat % char


def koszul_rank(
    scheme: EmbeddedScheme, p: int, q: int, entry_budget: int | None = None
) -> int:
    """rank of delta_{p,q}, cached on the scheme.

    The budget is enforced before the cache is consulted, so a budgeted run
    fails the same way whether or not earlier calls warmed the cache."""
    rows = koszul_space_dim(scheme, p - 1, q + 1)
    cols = koszul_space_dim(scheme, p, q)
    _check_budget(rows, cols, p, q, entry_budget)
    got = scheme._koszul_ranks.get((p, q))
    if got is None:
        if rows == 0 or cols == 0:
            got = 0
        else:
            mat = koszul_matrix(scheme, p, q, entry_budget)
            got = len(rref(mat, scheme.char)[1])
        scheme._koszul_ranks[(p, q)] = got
    return got


def koszul_dim(
    scheme: EmbeddedScheme, p: int, q: int, entry_budget: int | None = None
) -> int:
    """b_{p,q} = dim of the (p,q) Koszul cohomology of the coordinate ring."""
    if q < 0 or p < 0:
        return 0
    src = koszul_space_dim(scheme, p, q)
    b = (
        src
        - koszul_rank(scheme, p, q, entry_budget)
        - koszul_rank(scheme, p + 1, q - 1, entry_budget)
    )
    if b < 0:
        raise ConsistencyError(
            f"negative strand dimension at (p={p}, q={q}): {b}; sign bug?"
        )
    return b


# ---------------------------------------------------------------------------
# Betti tables


@dataclass
class BettiTable:
    """b_{p,q} for 0 <= p <= pmax, 0 <= q <= qmax over F_char."""

    char: int
    pmax: int
    qmax: int
    entries: dict = field(default_factory=dict)

    def entry(self, p: int, q: int) -> int:
        return self.entries.get((p, q), 0)

    def text(self) -> str:
        cols = range(self.pmax + 1)
        head = ["      "] + [f"{p:>6}" for p in cols]
        lines = ["".join(head)]
        totals = ["total:"] + [
            f"{sum(self.entry(p, q) for q in range(self.qmax + 1)):>6}" for p in cols
        ]
        lines.append("".join(totals))
        for q in range(self.qmax + 1):
            row = [f"{q:>5}:"]
            for p in cols:
                v = self.entry(p, q)
                row.append(f"{v if v else '.':>6}")
            lines.append("".join(row))
        return "\n".join(lines)

    def to_json_dict(self) -> dict:
        return {
            "char": self.char,
            "pmax": self.pmax,
            "qmax": self.qmax,
            "entries": [
                {"p": p, "q": q, "value": self.entry(p, q)}
                for p in range(self.pmax + 1)
                for q in range(self.qmax + 1)
            ],
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "BettiTable":
        t = cls(char=int(d["char"]), pmax=int(d["pmax"]), qmax=int(d["qmax"]))
        for e in d["entries"]:
            v = int(e["value"])
            if v:
                t.entries[(int(e["p"]), int(e["q"]))] = v
        return t


def betti_table(
    scheme: EmbeddedScheme, pmax: int, qmax: int, entry_budget: int | None = None
) -> BettiTable:
    """Graded Betti numbers of the coordinate ring by the rank formula."""
    if pmax < 0 or qmax < 0:
        raise InputError("pmax and qmax must be non-negative")
    table = BettiTable(char=scheme.char, pmax=pmax, qmax=qmax)
    for p in range(pmax + 1):
        for q in range(qmax + 1):
            v = koszul_dim(scheme, p, q, entry_budget)
            if v:
                table.entries[(p, q)] = v
    return table


# ---------------------------------------------------------------------------
# linear-strand cocycles


@dataclass
class KoszulCocycle:
    """A cocycle in Lambda^p V (x) V for a scheme: a linear syzygy class
    representative.  coeffs maps (wedge tuple, variable index) to a nonzero
    coefficient mod char."""

    scheme: EmbeddedScheme
    p: int
    coeffs: dict

    def __post_init__(self):
        nv = self.scheme.ring.nvars
        if not (1 <= self.p <= nv):
            raise InputError(f"cocycle wedge degree p={self.p} out of range")
        clean = {}
        for (wedge, var), c in self.coeffs.items():
            wedge = tuple(int(i) for i in wedge)
            if list(wedge) != sorted(set(wedge)) or len(wedge) != self.p:
                raise InputError(f"bad wedge tuple {wedge} for p={self.p}")
            if not all(0 <= i < nv for i in wedge) or not (0 <= var < nv):
                raise InputError(f"index out of range in ({wedge}, {var})")
            c %= self.scheme.char
            if c:
                clean[(wedge, int(var))] = c
        self.coeffs = clean

    # -- vector layout (matches koszul_matrix columns for q = 1) ------------

    def to_vector(self) -> np.ndarray:
        nv = self.scheme.ring.nvars
        wedges = exterior_basis(nv, self.p)
        widx = {w: i for i, w in enumerate(wedges)}
        monos = self.scheme.ideal.standard_monomials(1)
        vmap = {}
        for i, m in enumerate(monos):
            vmap[m.index(1)] = i
        vec = np.zeros(len(wedges) * len(monos), dtype=np.int64)
        for (wedge, var), c in self.coeffs.items():
            vec[widx[wedge] * len(monos) + vmap[var]] = c
        return vec

    @classmethod
    def from_vector(cls, scheme: EmbeddedScheme, p: int, vec) -> "KoszulCocycle":
        nv = scheme.ring.nvars
        wedges = exterior_basis(nv, p)
        monos = scheme.ideal.standard_monomials(1)
        vars_of = [m.index(1) for m in monos]
        coeffs = {}
        vec = np.asarray(vec).reshape(-1)
        for idx, c in enumerate(vec):
            c = int(c) % scheme.char
            if c:
                w = wedges[idx // len(monos)]
                coeffs[(w, vars_of[idx % len(monos)])] = c
        return cls(scheme, p, coeffs)

    def is_cocycle(self, entry_budget: int | None = None) -> bool:
        mat = koszul_matrix(self.scheme, self.p, 1, entry_budget)
        if mat.shape[1] == 0:
            return True
        return not np.any((mat @ self.to_vector()) % self.scheme.char)

    def add(self, other: "KoszulCocycle") -> "KoszulCocycle":
        if other.scheme is not self.scheme or other.p != self.p:
            raise InputError("cocycles live in different spaces")
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            v = (out.get(k, 0) + c) % self.scheme.char
            if v:
                out[k] = v
            elif k in out:
                del out[k]
        return KoszulCocycle(self.scheme, self.p, out)

    def scale(self, c: int) -> "KoszulCocycle":
        c %= self.scheme.char
        return KoszulCocycle(
            self.scheme, self.p, {k: (v * c) % self.scheme.char for k, v in self.coeffs.items()}
        )

    def to_json_dict(self) -> dict:
        return {
            "p": self.p,
            "terms": [
                {"wedge": list(w), "var": v, "coeff": c}
                for (w, v), c in sorted(self.coeffs.items())
            ],
        }

    @classmethod
    def from_json_dict(cls, scheme: EmbeddedScheme, d: dict) -> "KoszulCocycle":
        try:
            p = int(d["p"])
            coeffs = {
                (tuple(t["wedge"]), int(t["var"])): int(t["coeff"]) for t in d["terms"]
            }
        except (KeyError, TypeError) as exc:
            raise InputError(f"malformed cocycle JSON: {exc}") from exc
        return cls(scheme, p, coeffs)


def coboundary_rows(scheme: EmbeddedScheme, p: int, entry_budget: int | None = None):
    """Image of delta_{p+1,0} as row vectors in the (wedge, var) layout."""
    mat = koszul_matrix(scheme, p + 1, 0, entry_budget)
    return mat.T % scheme.char


def k_p1_cocycle_basis(
    scheme: EmbeddedScheme, p: int, entry_budget: int | None = None
) -> list[KoszulCocycle]:
    """Canonical representatives of a basis of the (p,1) strand cohomology.

    Kernel of delta_{p,1} modulo the image of delta_{p+1,0}; representatives
    come from the canonical complement construction, so a fixed scheme and p
    always produce the same list.
    """
    mat = koszul_matrix(scheme, p, 1, entry_budget)
    ker = kernel_basis(mat, scheme.char)
    cob = coboundary_rows(scheme, p, entry_budget)
    reps = complement_basis(cob, ker, scheme.char)
    return [KoszulCocycle.from_vector(scheme, p, row) for row in reps]


def cocycle_class_is_zero(cocycle: KoszulCocycle, entry_budget: int | None = None) -> bool:
    """Does the cocycle represent the zero cohomology class?"""
    from .exactalg import in_span

    scheme = cocycle.scheme
    vec = cocycle.to_vector()
    if not np.any(vec):
        return True
    cob = coboundary_rows(scheme, cocycle.p, entry_budget)
    ok, _ = in_span(vec, cob.T, scheme.char)
    return ok


def res_map(target: EmbeddedScheme, cocycle: KoszulCocycle) -> KoszulCocycle:
    """Push a linear-strand cocycle along a surjection of coordinate rings.

    Requires I(source) contained in I(target) (same ambient ring); the same
    tensor then represents a cocycle for the target, because its pure
    differential lands in I(source)_2 which sits inside I(target)_2."""
    source = cocycle.scheme
    if target.ring != source.ring:
        raise InputError("res_map needs schemes in the same ambient ring")
    for g in source.ideal.gens:
        if not target.ideal.contains(g):
            raise InputError("res_map: source ideal is not contained in target ideal")
    out = KoszulCocycle(target, cocycle.p, dict(cocycle.coeffs))
    if not out.is_cocycle():
        raise ConsistencyError("res_map produced a non-cocycle; this is a bug")
    return out


# ---------------------------------------------------------------------------
# independent route: the quadratic strand from the ideal itself


def linear_strand_dim_from_ideal(scheme: EmbeddedScheme, p: int) -> int:
    """b_{p,1} computed without the coordinate ring: the kernel dimension of
    Lambda^{p-1} V (x) I_2 -> Lambda^{p-2} V (x) I_3 (p >= 1).

    Independent cross-check for the rank-formula route (they share only the
    base linear algebra)."""
    if p < 1:
        raise InputError("the ideal route computes b_{p,1} for p >= 1 only")
    ring = scheme.ring
    nv = ring.nvars
    char = ring.char
    ideal = scheme.ideal
    quad_basis = ideal.graded_basis(2)
    if not quad_basis:
        return 0
    nonstd3 = ideal.nonstandard_monomials(3)
    pos3 = {m: i for i, m in enumerate(nonstd3)}
    src_wedges = exterior_basis(nv, p - 1)
    tgt_wedges = exterior_basis(nv, p - 2)
    tgt_index = {w: i for i, w in enumerate(tgt_wedges)}
    cols = len(src_wedges) * len(quad_basis)
    rows = len(tgt_wedges) * len(nonstd3)
    mat = np.zeros((rows, cols), dtype=np.int64)
    ci = 0
    for wedge in src_wedges:
        for f in quad_basis:
            for k, i in enumerate(wedge):
                sign = removal_sign(k)
                base = tgt_index[wedge[:k] + wedge[k + 1 :]] * len(nonstd3)
                prod = f * ring.var(i)
                # coordinates of an element of I_3 on the graded basis are
                # its coefficients at the nonstandard monomials
                for m, c in prod.terms.items():
                    j = pos3.get(m)
                    if j is not None:
                        mat[base + j, ci] += sign * c
            ci += 1
    mat %= char
    if rows == 0:
        return cols
    return cols - len(rref(mat, char)[1])


# ---------------------------------------------------------------------------
# minimal free resolution (independent oracle)


@dataclass
class Resolution:
    """A minimal graded free resolution of R/I, possibly truncated.

    modules[s] lists the generator degrees of F_s (modules[0] == [0]);
    maps[s] presents the generators of F_{s+1} as vectors of polynomials
    over the generators of F_s.  `truncated` is False only when the
    alternating sum of generator degrees reproduces the exact Hilbert
    series numerator of R/I — a completeness certificate independent of the
    degree bound heuristics."""

    ideal: Ideal
    degree_bound: int
    modules: list
    maps: list
    truncated: bool

    def graded_betti(self) -> dict:
        """{(homological index, internal degree): count}, beta_{0,0} = 1."""
        out = {(0, 0): 1}
        for s, degs in enumerate(self.modules):
            if s == 0:
                continue
            for d in degs:
                out[(s, d)] = out.get((s, d), 0) + 1
        return out

    def strand_entry(self, p: int, q: int) -> int:
        """b_{p,q} in the Koszul indexing: generators of F_p in degree p+q."""
        return self.graded_betti().get((p, p + q), 0)

    def length(self) -> int:
        return len(self.modules) - 1


def _module_monomials(ring, d: int):
    return ring.monomials_of_degree(d)


def minimal_free_resolution(
    ideal: Ideal, degree_bound: int = 10, length_bound: int | None = None
) -> Resolution:
    """Resolve R/I minimally, degree by degree, over the ambient ring.

    Fully independent of the Koszul machinery: each step computes graded
    kernels of the presentation matrix and picks minimal new generators as
    the canonical complement of (degree-one) x (previous kernel piece).
    Raises ConsistencyError if a purportedly minimal map acquires a unit
    entry or consecutive maps fail to compose to zero."""
    ring = ideal.ring
    char = ring.char
    nv = ring.nvars
    if length_bound is None:
        length_bound = nv
    modules: list[list[int]] = [[0]]
    maps: list[list[list[Polynomial]]] = []

    # generator vectors of F_s over F_{s-1}, as lists of Polynomials
    prev_gen_vectors: list[list[Polynomial]] | None = None

    for step in range(1, length_bound + 1):
        prev_degrees = modules[step - 1]
        if step == 1:
            # kernel pieces are just the graded pieces of the ideal,
            # in coordinates over the full monomial basis of R_d
            def kernel_piece(d: int) -> np.ndarray:
                monos = _module_monomials(ring, d)
                pos = {m: i for i, m in enumerate(monos)}
                basis = ideal.graded_basis(d)
                out = np.zeros((len(basis), len(monos)), dtype=np.int64)
                for r, g in enumerate(basis):
                    for m, c in g.terms.items():
                        out[r, pos[m]] = c
                return out

            def coord_layout(d: int):
                return [(0, m) for m in _module_monomials(ring, d)]

        else:
            gen_vectors = prev_gen_vectors

            def kernel_piece(d: int, _gv=gen_vectors, _pd=prev_degrees, _ppd=modules[step - 2]) -> np.ndarray:
                cols = []
                col_entries = []
                for j, dj in enumerate(_pd):
                    for m in _module_monomials(ring, d - dj):
                        cols.append((j, m))
                row_pos = {}
                for i, di in enumerate(_ppd):
                    for m in _module_monomials(ring, d - di):
                        row_pos[(i, m)] = len(row_pos)
                mat = np.zeros((len(row_pos), len(cols)), dtype=np.int64)
                for ci, (j, m) in enumerate(cols):
                    mono = ring.monomial(m)
                    for i, entry in enumerate(_gv[j]):
                        if not entry:
                            continue
                        prod = entry * mono
                        for mm, c in prod.terms.items():
                            mat[row_pos[(i, mm)], ci] = c
                return kernel_basis(mat, char)

            def coord_layout(d: int, _pd=prev_degrees):
                out = []
                for j, dj in enumerate(_pd):
                    for m in _module_monomials(ring, d - dj):
                        out.append((j, m))
                return out

        dmin = min(prev_degrees) + 1
        if step == 1:
            gb = ideal.groebner()
            if not gb:
                break
            # minimal generators of I are bounded by the top GB degree
            scan_max = min(degree_bound, max(sum(max(g, key=DRL.key)) for g in gb))
        else:
            # syzygies of a minimal presentation are found well below twice
            # the top generator degree on this corpus; the Hilbert-series
            # certificate below flags any truncation this cap would cause
            scan_max = min(degree_bound, 2 * max(prev_degrees))
        new_degrees: list[int] = []
        new_vectors: list[list[Polynomial]] = []
        prev_kernel_rows: np.ndarray | None = None
        prev_layout = None
        for d in range(dmin, scan_max + 1):
            layout = coord_layout(d)
            ker = kernel_piece(d)
            # span of lower-degree kernel elements, shifted by each variable
            old_rows = []
            if prev_kernel_rows is not None and prev_kernel_rows.shape[0]:
                pos = {key: i for i, key in enumerate(layout)}
                for row in prev_kernel_rows:
                    for v in range(nv):
                        shifted = np.zeros(len(layout), dtype=np.int64)
                        for idx, c in enumerate(row):
                            if c:
                                j, m = prev_layout[idx]
                                e = list(m)
                                e[v] += 1
                                shifted[pos[(j, tuple(e))]] = c
                        old_rows.append(shifted)
            old = (
                np.array(old_rows, dtype=np.int64)
                if old_rows
                else np.zeros((0, len(layout)), dtype=np.int64)
            )
            new = complement_basis(old, ker, char) if ker.shape[0] else np.zeros((0, len(layout)), dtype=np.int64)
            for row in new:
                vec: list[Polynomial] = []
                for j in range(len(prev_degrees)):
                    vec.append(ring.zero())
                for idx, c in enumerate(row):
                    if c:
                        j, m = layout[idx]
                        vec[j] = vec[j] + ring.monomial(m, int(c))
                new_degrees.append(d)
                new_vectors.append(vec)
            # the full kernel piece (not just new gens) feeds the next degree
            if ker.shape[0]:
                prev_kernel_rows = ker
                prev_layout = layout
            else:
                prev_kernel_rows = np.zeros((0, len(layout)), dtype=np.int64)
                prev_layout = layout
        if not new_degrees:
            break
        # minimality check: no unit (degree-zero) entries
        for dg, vec in zip(new_degrees, new_vectors):
            for dj, entry in zip(prev_degrees, vec):
                if entry and dg - dj == 0:
                    raise ConsistencyError("resolution map acquired a unit entry")
        # composition check: image of each new generator is zero in F_{s-2}
        if step >= 2:
            for vec in new_vectors:
                image = [ring.zero() for _ in modules[step - 2]]
                for j, entry in enumerate(vec):
                    if not entry:
                        continue
                    for i, prev_entry in enumerate(prev_gen_vectors[j]):
                        image[i] = image[i] + entry * prev_entry
                if any(image_entry.terms for image_entry in image):
                    raise ConsistencyError("resolution maps do not compose to zero")
        else:
            for vec in new_vectors:
                if ideal.normal_form(vec[0]).terms:
                    raise ConsistencyError("step-1 generator is not in the ideal")
        modules.append(new_degrees)
        maps.append(new_vectors)
        prev_gen_vectors = new_vectors

    # completeness certificate: alternating degree sum == Hilbert numerator
    euler: dict[int, int] = {0: 1}
    for s in range(1, len(modules)):
        for d in modules[s]:
            euler[d] = euler.get(d, 0) + (-1) ** s
    euler = {d: c for d, c in euler.items() if c}
    numer = ideal.hilbert_series_numerator()
    numer_dict = {d: c for d, c in enumerate(numer) if c}
    truncated = euler != numer_dict
    return Resolution(
        ideal=ideal,
        degree_bound=degree_bound,
        modules=modules,
        maps=maps,
        truncated=truncated,
    )
