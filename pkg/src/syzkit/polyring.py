"""Graded polynomial rings over F_p and homogeneous ideals.

Monomials are exponent tuples; polynomials are dicts mapping exponent
tuples to nonzero coefficients in [1, p).  The default term order is
degree-reverse-lexicographic with x0 > x1 > ... ; elimination uses block
orders (degrevlex inside each block).  All bases handed out (standard
monomials, graded ideal pieces, Groebner bases) are sorted canonically so
downstream matrix layouts are reproducible.

Groebner bases are computed by Buchberger's algorithm with the coprime and
chain criteria, then inter-reduced: the reduced GB is unique for a given
order, which several equality tests below rely on.  Inhomogeneous inputs
are supported (needed for ideal intersection via the t-trick); everything
else in the package is graded.
"""

from __future__ import annotations

import heapq
import itertools
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import ConsistencyError, InputError
from .exactalg import FieldSpec, rank as matrix_rank

Mono = tuple  # exponent tuple


# ---------------------------------------------------------------------------
# term orders


class DegRevLex:
    """Degree reverse lexicographic order, x0 > x1 > ... > xn."""

    name = "degrevlex"

    @staticmethod
    def key(e: Mono):
        return (sum(e), tuple(-x for x in reversed(e)))


class BlockOrder:
    """Eliminination order: variables in `first` dominate the rest.

    Both blocks are compared by degrevlex.  A Groebner basis w.r.t. this
    order intersected with the subring on the remaining variables is a
    Groebner basis of the elimination ideal.
    """

    def __init__(self, first: tuple[int, ...], nvars: int):
        self.first = tuple(sorted(first))
        self.rest = tuple(i for i in range(nvars) if i not in set(first))
        self.name = f"elim{self.first}"

    def key(self, e: Mono):
        a = tuple(e[i] for i in self.first)
        b = tuple(e[i] for i in self.rest)
        return (DegRevLex.key(a), DegRevLex.key(b))


DRL = DegRevLex()


# ---------------------------------------------------------------------------
# dict-level polynomial arithmetic (hot paths)


def _add_into(acc: dict, other: dict, scale: int, p: int) -> None:
    if scale % p == 0:
        return
    for m, c in other.items():
        v = (acc.get(m, 0) + scale * c) % p
        if v:
            acc[m] = v
        elif m in acc:
            del acc[m]

def _mul_dict(f: dict, g: dict, p: int) -> dict:
    out: dict = {}
    for mf, cf in f.items():
        for mg, cg in g.items():
            m = tuple(a + b for a, b in zip(mf, mg))
            v = (out.get(m, 0) + cf * cg) % p
            if v:
                out[m] = v
            elif m in out:
                del out[m]
    return out


def _term_mul(f: dict, mono: Mono, coeff: int, p: int) -> dict:
    return {
        tuple(a + b for a, b in zip(m, mono)): (c * coeff) % p
        for m, c in f.items()
        if (c * coeff) % p
    }


def _divides(a: Mono, b: Mono) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _mono_sub(a: Mono, b: Mono) -> Mono:
    return tuple(x - y for x, y in zip(a, b))


def _mono_lcm(a: Mono, b: Mono) -> Mono:
    return tuple(max(x, y) for x, y in zip(a, b))


# ---------------------------------------------------------------------------
# ring and polynomials


_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z_0-9]*")
_TOKEN_RE = re.compile(r"\s*(\d+|[A-Za-z_][A-Za-z_0-9]*|\^|\*|\+|-)")


class PolyRing:
    """F_p[x_0..x_n] with named variables and the degrevlex order."""

    __slots__ = ("field", "names", "nvars", "_index")

    def __init__(self, char: int | FieldSpec, names):
        self.field = char if isinstance(char, FieldSpec) else FieldSpec(char)
        names = tuple(names)
        if len(set(names)) != len(names):
            raise InputError(f"duplicate variable names in {names}")
        for nm in names:
            if not _NAME_RE.fullmatch(nm):
                raise InputError(f"bad variable name {nm!r}")
        self.names = names
        self.nvars = len(names)
        self._index = {nm: i for i, nm in enumerate(names)}

    @property
    def char(self) -> int:
        return self.field.char

    def __eq__(self, other):
        return (
            isinstance(other, PolyRing)
            and self.char == other.char
            and self.names == other.names
        )

    def __hash__(self):
        return hash((self.char, self.names))

    def __repr__(self):
        return f"PolyRing(char={self.char}, names={self.names})"

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return Polynomial(self, {(0,) * self.nvars: 1})

    def var(self, i: int) -> "Polynomial":
        e = [0] * self.nvars
        e[i] = 1
        return Polynomial(self, {tuple(e): 1})

    def gens(self) -> list["Polynomial"]:
        return [self.var(i) for i in range(self.nvars)]

    def monomial(self, exps, coeff: int = 1) -> "Polynomial":
        c = coeff % self.char
        return Polynomial(self, {tuple(exps): c} if c else {})

    def from_terms(self, terms: dict) -> "Polynomial":
        clean = {}
        for m, c in terms.items():
            c %= self.char
            if c:
                if len(m) != self.nvars:
                    raise InputError(f"exponent tuple {m} has wrong length")
                clean[tuple(m)] = c
        return Polynomial(self, clean)

    def monomials_of_degree(self, d: int) -> list[Mono]:
        """All degree-d monomials, sorted degrevlex-descending."""
        if d < 0:
            return []
        out = []
        for combo in itertools.combinations_with_replacement(range(self.nvars), d):
            e = [0] * self.nvars
            for i in combo:
                e[i] += 1
            out.append(tuple(e))
        out.sort(key=DRL.key, reverse=True)
        return out

    # -- parsing / printing ------------------------------------------------

    def parse(self, text: str) -> "Polynomial":
        """Parse an expanded polynomial: terms joined by + or -, factors are
        integers or names with optional ^power; '*' between factors is
        optional."""
        s = text.strip()
        if not s:
            raise InputError("empty polynomial")
        pos = 0
        tokens = []
        while pos < len(s):
            m = _TOKEN_RE.match(s, pos)
            if not m:
                raise InputError(f"cannot tokenize {s[pos:pos+10]!r} in {text!r}")
            tokens.append(m.group(1))
            pos = m.end()
        terms: dict = {}
        i = 0
        n = len(tokens)
        while i < n:
            sign = 1
            while i < n and tokens[i] in "+-":
                if tokens[i] == "-":
                    sign = -sign
                i += 1
            if i >= n:
                raise InputError(f"dangling sign in {text!r}")
            coeff = sign
            exps = [0] * self.nvars
            saw_factor = False
            while i < n and tokens[i] not in "+-":
                t = tokens[i]
                if t == "*":
                    i += 1
                    continue
                if t == "^":
                    raise InputError(f"misplaced '^' in {text!r}")
                if t.isdigit():
                    coeff *= int(t)
                    i += 1
                else:
                    if t not in self._index:
                        raise InputError(f"unknown variable {t!r} in {text!r}")
                    v = self._index[t]
                    i += 1
                    power = 1
                    if i < n and tokens[i] == "^":
                        if i + 1 >= n or not tokens[i + 1].isdigit():
                            raise InputError(f"bad exponent in {text!r}")
                        power = int(tokens[i + 1])
                        i += 2
                    exps[v] += power
                saw_factor = True
            if not saw_factor:
                raise InputError(f"empty term in {text!r}")
            m = tuple(exps)
            v = (terms.get(m, 0) + coeff) % self.char
            if v:
                terms[m] = v
            elif m in terms:
                del terms[m]
        return Polynomial(self, terms)

    def format_mono(self, m: Mono) -> str:
        parts = []
        for i, e in enumerate(m):
            if e == 1:
                parts.append(self.names[i])
            elif e > 1:
                parts.append(f"{self.names[i]}^{e}")
        return "*".join(parts) if parts else "1"

    def format(self, f: "Polynomial") -> str:
        if not f.terms:
            return "0"
        out = []
        for m in sorted(f.terms, key=DRL.key, reverse=True):
            c = f.terms[m]
            mono = self.format_mono(m)
            if mono == "1":
                chunk = str(c)
            elif c == 1:
                chunk = mono
            else:
                chunk = f"{c}*{mono}"
            out.append(chunk)
        return " + ".join(out)


class Polynomial:
    """Immutable-by-convention polynomial: a ring plus a terms dict."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: PolyRing, terms: dict):
        self.ring = ring
        self.terms = terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return (
            isinstance(other, Polynomial)
            and self.ring == other.ring
            and self.terms == other.terms
        )

    def __repr__(self):
        return self.ring.format(self)

    def __add__(self, other):
        out = dict(self.terms)
        _add_into(out, other.terms, 1, self.ring.char)
        return Polynomial(self.ring, out)

    def __sub__(self, other):
        out = dict(self.terms)
        _add_into(out, other.terms, -1, self.ring.char)
        return Polynomial(self.ring, out)

    def __neg__(self):
        p = self.ring.char
        return Polynomial(self.ring, {m: (-c) % p for m, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        return Polynomial(self.ring, _mul_dict(self.terms, other.terms, self.ring.char))

    __rmul__ = __mul__

    def scale(self, c: int) -> "Polynomial":
        p = self.ring.char
        c %= p
        if not c:
            return self.ring.zero()
        return Polynomial(self.ring, {m: (v * c) % p for m, v in self.terms.items()})

    def __pow__(self, k: int):
        out = self.ring.one()
        for _ in range(k):
            out = out * self
        return out

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(m) for m in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        degs = {sum(m) for m in self.terms}
        return len(degs) <= 1

    def homogeneous_components(self) -> list["Polynomial"]:
        """Graded pieces, by increasing degree."""
        by_deg: dict[int, dict] = {}
        for m, c in self.terms.items():
            by_deg.setdefault(sum(m), {})[m] = c
        return [Polynomial(self.ring, by_deg[d]) for d in sorted(by_deg)]

    def lead_monomial(self, order=DRL) -> Mono:
        return max(self.terms, key=order.key)

    def monic(self, order=DRL) -> "Polynomial":
        if not self.terms:
            return self
        inv = self.ring.field.inv(self.terms[self.lead_monomial(order)])
        return self.scale(inv)

    def evaluate(self, point) -> int:
        """Evaluate at a tuple of field elements."""
        p = self.ring.char
        total = 0
        for m, c in self.terms.items():
            v = c
            for x, e in zip(point, m):
                if e:
                    v = v * pow(int(x) % p, e, p) % p
            total = (total + v) % p
        return total

    def substitute_linear(self, matrix) -> "Polynomial":
        """Substitute x_i -> sum_j matrix[i][j] * x_j."""
        ring = self.ring
        p = ring.char
        a = np.asarray(matrix, dtype=np.int64) % p
        if a.shape != (ring.nvars, ring.nvars):
            raise InputError(f"substitution matrix must be {ring.nvars}x{ring.nvars}")
        lin = []
        for i in range(ring.nvars):
            row = {}
            for j in range(ring.nvars):
                c = int(a[i, j])
                if c:
                    e = [0] * ring.nvars
                    e[j] = 1
                    row[tuple(e)] = c
            lin.append(row)
        # cache powers of each linear form as needed
        powers: dict[tuple[int, int], dict] = {}

        def lin_pow(i, k):
            if k == 0:
                return {(0,) * ring.nvars: 1}
            got = powers.get((i, k))
            if got is None:
                got = _mul_dict(lin_pow(i, k - 1), lin[i], p)
                powers[(i, k)] = got
            return got

        out: dict = {}
        for m, c in self.terms.items():
            term = {(0,) * ring.nvars: c}
            for i, e in enumerate(m):
                if e:
                    term = _mul_dict(term, lin_pow(i, e), p)
            _add_into(out, term, 1, p)
        return Polynomial(ring, out)

    def map_to(self, other: PolyRing, var_map: dict[int, int]) -> "Polynomial":
        """Reindex variables into another ring of the same characteristic.

        var_map sends this ring's variable indices to the target's; every
        variable actually appearing must be mapped."""
        out = {}
        for m, c in self.terms.items():
            e = [0] * other.nvars
            for i, x in enumerate(m):
                if x:
                    if i not in var_map:
                        raise InputError(
                            f"variable {self.ring.names[i]} has no image in target ring"
                        )
                    e[var_map[i]] += x
            out[tuple(e)] = c
        return other.from_terms(out)


# ---------------------------------------------------------------------------
# normal forms and Buchberger


def _normal_form_dict(h: dict, gb: list[tuple[Mono, dict]], order, p: int) -> dict:
    """Fully reduce h against a list of monic polynomials (lead, terms)."""
    rem: dict = {}
    work = dict(h)
    while work:
        m = max(work, key=order.key)
        c = work.pop(m)
        hit = None
        for lm, g in gb:
            if _divides(lm, m):
                hit = (lm, g)
                break
        if hit is None:
            rem[m] = c
            continue
        lm, g = hit
        q = _mono_sub(m, lm)
        work[m] = c
        for mg, cg in g.items():
            mm = tuple(a + b for a, b in zip(mg, q))
            v = (work.get(mm, 0) - c * cg) % p
            if v:
                work[mm] = v
            elif mm in work:
                del work[mm]
    return rem


def buchberger(gens: list[dict], order, p: int) -> list[dict]:
    """Reduced Groebner basis (list of monic dicts, sorted by lead term).

    Classic Buchberger with the coprime-lead and chain criteria.  Accepts
    inhomogeneous input.  The reduced basis is unique for the order, so
    callers may compare ideals by comparing these lists.
    """
    inv = lambda c: pow(c, -1, p)
    basis: list[tuple[Mono, dict]] = []
    for g in gens:
        g = {m: c % p for m, c in g.items() if c % p}
        if not g:
            continue
        lm = max(g, key=order.key)
        ci = inv(g[lm])
        basis.append((lm, {m: (c * ci) % p for m, c in g.items()}))
    # deterministic starting order
    basis.sort(key=lambda t: order.key(t[0]))

    pairs: list = []
    done: set[tuple[int, int]] = set()

    def push_pair(i, j):
        lcm = _mono_lcm(basis[i][0], basis[j][0])
        heapq.heappush(pairs, (order.key(lcm), i, j, lcm))

    for i in range(len(basis)):
        for j in range(i):
            push_pair(j, i)

    while pairs:
        _, i, j, lcm = heapq.heappop(pairs)
        done.add((i, j))
        lmi, lmj = basis[i][0], basis[j][0]
        # coprime criterion
        if all(a == 0 or b == 0 for a, b in zip(lmi, lmj)):
            continue
        # chain criterion
        skip = False
        for k in range(len(basis)):
            if k in (i, j):
                continue
            if _divides(basis[k][0], lcm):
                a = (min(i, k), max(i, k))
                b = (min(j, k), max(j, k))
                if a in done and b in done:
                    skip = True
                    break
        if skip:
            continue
        fi, fj = basis[i][1], basis[j][1]
        s: dict = {}
        _add_into(s, _term_mul(fi, _mono_sub(lcm, lmi), 1, p), 1, p)
        _add_into(s, _term_mul(fj, _mono_sub(lcm, lmj), 1, p), -1, p)
        r = _normal_form_dict(s, basis, order, p)
        if not r:
            continue
        lm = max(r, key=order.key)
        ci = inv(r[lm])
        basis.append((lm, {m: (c * ci) % p for m, c in r.items()}))
        new = len(basis) - 1
        for k in range(new):
            push_pair(k, new)

    # reduce to the unique reduced basis: first minimalize by lead
    # divisibility (a degree-compatible order sorted ascending guarantees a
    # potential divisor is seen before its multiple), then tail-reduce
    basis.sort(key=lambda t: order.key(t[0]))
    minimal: list[tuple[Mono, dict]] = []
    for lm, g in basis:
        if not any(_divides(h_lm, lm) for h_lm, _ in minimal):
            minimal.append((lm, g))
    polys = []
    for idx, (lm, g) in enumerate(minimal):
        others = [minimal[k] for k in range(len(minimal)) if k != idx]
        r = _normal_form_dict(g, others, order, p)
        ci = inv(r[lm])
        polys.append({m: (c * ci) % p for m, c in r.items()})
    polys.sort(key=lambda g: order.key(max(g, key=order.key)))
    return polys


# ---------------------------------------------------------------------------
# Hilbert series of a monomial ideal (pivot recursion)


def _minimalize(gens: list[Mono]) -> tuple[Mono, ...]:
    gens = sorted(set(gens), key=lambda m: (sum(m), m))
    out = []
    for g in gens:
        if not any(_divides(h, g) for h in out):
            out.append(g)
    return tuple(out)


def _hilbert_numerator(gens: tuple[Mono, ...], memo: dict) -> dict[int, int]:
    """Numerator of the Hilbert series of R/(gens) over (1-t)^nvars,
    as a dict degree -> coefficient."""
    if not gens:
        return {0: 1}
    if any(sum(g) == 0 for g in gens):
        return {}  # unit ideal: series 0
    got = memo.get(gens)
    if got is not None:
        return got
    # pure powers of distinct variables: product formula
    supports = [tuple(i for i, e in enumerate(g) if e) for g in gens]
    if all(len(s) == 1 for s in supports) and len({s[0] for s in supports}) == len(gens):
        out = {0: 1}
        for g in gens:
            d = sum(g)
            nxt: dict[int, int] = {}
            for k, c in out.items():
                nxt[k] = nxt.get(k, 0) + c
                nxt[k + d] = nxt.get(k + d, 0) - c
            out = {k: c for k, c in nxt.items() if c}
        memo[gens] = out
        return out
    # pivot on the most frequent variable among generators of support >= 2:
    # both branches then strictly drop the total degree, so the recursion
    # terminates (a pivot from a pure power can reproduce the same set)
    nvars = len(gens[0])
    counts = [0] * nvars
    eligible = set()
    for g in gens:
        sup = [i for i, e in enumerate(g) if e]
        for i in sup:
            counts[i] += 1
        if len(sup) >= 2:
            eligible.update(sup)
    j = max(eligible, key=lambda i: (counts[i], -i))
    unit = tuple(1 if i == j else 0 for i in range(nvars))
    plus = _minimalize([g for g in gens if g[j] == 0] + [unit])
    colon = _minimalize(
        [tuple(e - 1 if i == j and e else e for i, e in enumerate(g)) for g in gens]
    )
    n_plus = _hilbert_numerator(plus, memo)
    n_colon = _hilbert_numerator(colon, memo)
    out = dict(n_plus)
    for k, c in n_colon.items():
        out[k + 1] = out.get(k + 1, 0) + c
    out = {k: c for k, c in out.items() if c}
    memo[gens] = out
    return out


@dataclass(frozen=True)
class HilbertData:
    """dimension = dim of the projective zero set (-1 if empty),
    degree = its degree (0 if empty), coeffs = the Hilbert polynomial
    HP(d) = sum coeffs[k] d^k as exact fractions."""

    dimension: int
    degree: int
    coeffs: tuple[Fraction, ...]

    def __call__(self, d: int) -> int:
        v = sum(c * d**k for k, c in enumerate(self.coeffs))
        if v.denominator != 1:
            raise ConsistencyError(f"Hilbert polynomial non-integral at {d}: {v}")
        return int(v)


def _poly_from_binomials(numer: list[int], dim_plus1: int) -> tuple[Fraction, ...]:
    """Expand HP(d) = sum_k numer[k] * C(d - k + D - 1, D - 1), D = dim_plus1,
    into coefficients of powers of d (exact fractions)."""
    D = dim_plus1
    total = [Fraction(0)] * D
    fact = Fraction(1, math.factorial(D - 1))
    for k, c in enumerate(numer):
        if not c:
            continue
        # C(d - k + D - 1, D - 1) = prod_{j=1..D-1} (d + (D - j - k)) / (D-1)!
        poly = [Fraction(1)]
        for j in range(1, D):
            const = Fraction(D - j - k)
            poly = [Fraction(0)] + poly  # multiply by d
            for idx in range(len(poly) - 1):
                poly[idx] += const * poly[idx + 1]
        for idx, v in enumerate(poly):
            total[idx] += c * fact * v
    while len(total) > 1 and total[-1] == 0:
        total.pop()
    return tuple(total)


# ---------------------------------------------------------------------------
# ideals


class Ideal:
    """A finitely generated ideal in a PolyRing.

    Generators are stored as given (zero generators dropped).  Groebner
    bases, standard monomials and Hilbert data are cached.  Most methods
    require homogeneous generators; `buchberger` itself does not.
    """

    def __init__(self, ring: PolyRing, gens, require_homogeneous: bool = True):
        self.ring = ring
        polys = []
        for g in gens:
            if isinstance(g, str):
                g = ring.parse(g)
            if g.ring != ring:
                raise InputError("generator from a different ring")
            if require_homogeneous and not g.is_homogeneous():
                raise InputError(f"inhomogeneous generator: {g!r}")
            if g:
                polys.append(g)
        self.gens = tuple(polys)
        self._gb: dict[str, list[dict]] = {}
        self._std: dict[int, list[Mono]] = {}
        self._std_index: dict[int, dict[Mono, int]] = {}
        self._nf_cache: dict = {}
        self._hilbert: HilbertData | None = None

    def __repr__(self):
        return f"Ideal({len(self.gens)} gens in {self.ring!r})"

    # -- Groebner ----------------------------------------------------------

    def groebner(self, order=DRL) -> list[dict]:
        got = self._gb.get(order.name)
        if got is None:
            got = buchberger([g.terms for g in self.gens], order, self.ring.char)
            self._gb[order.name] = got
        return got

    def groebner_polys(self, order=DRL) -> list[Polynomial]:
        return [Polynomial(self.ring, dict(g)) for g in self.groebner(order)]

    def lead_monomials(self, order=DRL) -> list[Mono]:
        return [max(g, key=order.key) for g in self.groebner(order)]

    def is_unit_ideal(self) -> bool:
        gb = self.groebner()
        return any(sum(max(g, key=DRL.key)) == 0 for g in gb)

    def normal_form(self, f: Polynomial, order=DRL) -> Polynomial:
        gb = [(max(g, key=order.key), g) for g in self.groebner(order)]
        return Polynomial(self.ring, _normal_form_dict(f.terms, gb, order, self.ring.char))

    def contains(self, f: Polynomial) -> bool:
        return not self.normal_form(f).terms

    def contains_ideal(self, other: "Ideal") -> bool:
        return all(self.contains(g) for g in other.gens)

    def same_ideal(self, other: "Ideal") -> bool:
        """Exact ideal equality via uniqueness of the reduced GB."""
        if self.ring != other.ring:
            return False
        return self.groebner() == other.groebner()

    # -- graded pieces ------------------------------------------------------

    def standard_monomials(self, d: int) -> list[Mono]:
        """Monomials of degree d not divisible by any GB lead term, sorted
        degrevlex-descending.  These represent a basis of (R/I)_d."""
        got = self._std.get(d)
        if got is None:
            leads = self.lead_monomials()
            got = [
                m
                for m in self.ring.monomials_of_degree(d)
                if not any(_divides(l, m) for l in leads)
            ]
            self._std[d] = got
            self._std_index[d] = {m: i for i, m in enumerate(got)}
        return got

    def standard_index(self, d: int) -> dict[Mono, int]:
        self.standard_monomials(d)
        return self._std_index[d]

    def hilbert_function(self, d: int) -> int:
        """h(d) = dim_k (R/I)_d, by counting standard monomials."""
        if d < 0:
            return 0
        return len(self.standard_monomials(d))

    def nonstandard_monomials(self, d: int) -> list[Mono]:
        leads = self.lead_monomials()
        return [
            m
            for m in self.ring.monomials_of_degree(d)
            if any(_divides(l, m) for l in leads)
        ]

    def graded_basis(self, d: int) -> list[Polynomial]:
        """Basis of the degree-d piece I_d: {m - NF(m)} over nonstandard m.

        Each element has a single nonstandard monomial (its own m), so the
        coefficient vector of any element of I_d on this basis is just its
        coefficients at the nonstandard monomials (see graded_coordinates).
        """
        out = []
        for m in self.nonstandard_monomials(d):
            nf = self.normal_form(self.ring.monomial(m))
            out.append(self.ring.monomial(m) - nf)
        return out

    def graded_coordinates(self, f: Polynomial, d: int) -> list[int]:
        """Coordinates of f in the graded_basis(d) layout.  f must lie in
        I_d (checked)."""
        if f and (not f.is_homogeneous() or f.degree() != d):
            raise InputError(f"not homogeneous of degree {d}: {f!r}")
        if self.normal_form(f).terms:
            raise InputError("polynomial is not in the ideal")
        nonstd = self.nonstandard_monomials(d)
        return [f.terms.get(m, 0) for m in nonstd]

    def nf_times_var(self, mono: Mono, var: int) -> dict:
        """Cached normal form of x_var * mono (mono given as an exponent
        tuple).  Hot path for Koszul matrix assembly."""
        key = (mono, var)
        got = self._nf_cache.get(key)
        if got is None:
            e = list(mono)
            e[var] += 1
            m2 = tuple(e)
            leads = self.lead_monomials()
            if not any(_divides(l, m2) for l in leads):
                got = {m2: 1}
            else:
                got = self.normal_form(self.ring.monomial(m2)).terms
            self._nf_cache[key] = got
        return got

    # -- Hilbert data --------------------------------------------------------

    def hilbert_series_numerator(self) -> list[int]:
        """Numerator of the Hilbert series of R/I over (1-t)^nvars (exact,
        from the lead-term ideal)."""
        num = _hilbert_numerator(_minimalize(self.lead_monomials()), {})
        if not num:
            return [0]
        top = max(num)
        return [num.get(k, 0) for k in range(top + 1)]

    def hilbert_data(self) -> HilbertData:
        """Dimension, degree and Hilbert polynomial of Proj(R/I).

        Computed exactly from the Hilbert series, then cross-checked by
        Newton interpolation on enumerated Hilbert function values beyond
        the numerator degree (finite differences must stabilize; any
        disagreement raises ConsistencyError)."""
        if self._hilbert is not None:
            return self._hilbert
        nv = self.ring.nvars
        num = self.hilbert_series_numerator()
        if all(c == 0 for c in num):
            data = HilbertData(-1, 0, (Fraction(0),))
            self._hilbert = data
            return data
        # cancel (1 - t)^s
        s = 0
        reduced = list(num)
        while sum(reduced) == 0:
            acc = 0
            quot = []
            for c in reduced[:-1]:
                acc += c
                quot.append(acc)
            reduced = quot if quot else [0]
            s += 1
        D = nv - s  # Krull dimension of R/I
        if D <= 0:
            data = HilbertData(-1, 0, (Fraction(0),))
            self._hilbert = data
            return data
        degree = sum(reduced)
        coeffs = _poly_from_binomials(reduced, D)
        data = HilbertData(D - 1, degree, coeffs)
        # independent route: interpolate enumerated h(d) beyond numerator deg
        d0 = len(num)  # strictly beyond the numerator degree
        samples = [self.hilbert_function(d) for d in range(d0, d0 + D + 1)]
        diffs = list(samples)
        for _ in range(D - 1):
            diffs = [b - a for a, b in zip(diffs, diffs[1:])]
        if len(diffs) >= 2 and diffs[0] != diffs[1]:
            raise ConsistencyError(
                f"Hilbert function not stabilized at degree {d0}: differences {diffs}"
            )
        for d, h in zip(range(d0, d0 + D + 1), samples):
            if data(d) != h:
                raise ConsistencyError(
                    f"Hilbert polynomial/function mismatch at degree {d}: {data(d)} vs {h}"
                )
        self._hilbert = data
        return data

    # -- ideal operations ----------------------------------------------------

    def permute_variables(self, perm: tuple[int, ...]) -> "Ideal":
        """New ideal with variables reordered: position j of the new ring is
        old variable perm[j]."""
        names = tuple(self.ring.names[i] for i in perm)
        ring2 = PolyRing(self.ring.field, names)
        var_map = {old: new for new, old in enumerate(perm)}
        gens2 = [g.map_to(ring2, var_map) for g in self.gens]
        return Ideal(ring2, gens2, require_homogeneous=False)

    def colon_var_saturation(self, i: int) -> "Ideal":
        """I : x_i^infinity for a homogeneous ideal, via the degrevlex
        last-variable division trick."""
        n = self.ring.nvars
        for g in self.gens:
            if not g.is_homogeneous():
                raise InputError("colon_var_saturation needs a homogeneous ideal")
        perm = tuple([j for j in range(n) if j != i] + [i])
        moved = self.permute_variables(perm)
        gb = moved.groebner()
        stripped = []
        for g in gb:
            k = min(m[n - 1] for m in g)
            if k:
                g = {m[: n - 1] + (m[n - 1] - k,): c for m, c in g.items()}
            stripped.append(dict(g))
        back = tuple(perm.index(j) for j in range(n))
        ring_moved = moved.ring
        result_moved = Ideal(ring_moved, [Polynomial(ring_moved, g) for g in stripped])
        return result_moved.permute_variables(back)

    def intersect(self, other: "Ideal") -> "Ideal":
        """I cap J via the t-trick: eliminate t from t*I + (1-t)*J."""
        if self.ring != other.ring:
            raise InputError("intersection needs a common ring")
        ring = self.ring
        tname = "t_"
        while tname in ring.names:
            tname += "_"
        big = PolyRing(ring.field, (tname,) + ring.names)
        shift = {i: i + 1 for i in range(ring.nvars)}
        t = big.var(0)
        one = big.one()
        gens = [t * g.map_to(big, shift) for g in self.gens]
        gens += [(one - t) * g.map_to(big, shift) for g in other.gens]
        order = BlockOrder((0,), big.nvars)
        gb = buchberger([g.terms for g in gens], order, ring.char)
        kept = []
        for g in gb:
            if all(m[0] == 0 for m in g):
                kept.append(Polynomial(ring, {m[1:]: c for m, c in g.items()}))
        return Ideal(ring, kept, require_homogeneous=False)

    def saturate_irrelevant(self) -> "Ideal":
        """Saturation with respect to (x_0, ..., x_n): the largest ideal
        with the same graded pieces in all high degrees.

        Computed as the intersection of the single-variable saturations
        I : x_i^infty; if all of them equal I, I is already saturated and
        is returned as-is."""
        cols = [self.colon_var_saturation(i) for i in range(self.ring.nvars)]
        if all(c.same_ideal(self) for c in cols):
            return self
        out = cols[0]
        for c in cols[1:]:
            out = out.intersect(c)
        # t-trick generators of a homogeneous ideal need not be homogeneous;
        # their graded components generate the same ideal
        parts = [comp for g in out.gens for comp in g.homogeneous_components()]
        return Ideal(self.ring, parts)

    def equal_as_schemes(self, other: "Ideal") -> bool:
        """Do the two homogeneous ideals cut out the same closed subscheme,
        i.e. are their saturations equal?"""
        if self.ring != other.ring:
            raise InputError("scheme comparison needs a common ring")
        a = self.saturate_irrelevant()
        b = other.saturate_irrelevant()
        return a.same_ideal(b)

    def eliminate(self, drop: tuple[int, ...]) -> "Ideal":
        """Intersection with the subring omitting the `drop` variables,
        returned in the smaller ring (names preserved)."""
        drop = tuple(sorted(set(drop)))
        keep = [i for i in range(self.ring.nvars) if i not in drop]
        order = BlockOrder(drop, self.ring.nvars)
        gb = buchberger([g.terms for g in self.gens], order, self.ring.char)
        ring2 = PolyRing(self.ring.field, tuple(self.ring.names[i] for i in keep))
        kept = []
        for g in gb:
            if all(all(m[i] == 0 for i in drop) for m in g):
                kept.append(
                    Polynomial(ring2, {tuple(m[i] for i in keep): c for m, c in g.items()})
                )
        return Ideal(ring2, kept, require_homogeneous=False)

    def change_coordinates(self, matrix) -> "Ideal":
        """Apply the substitution x_i -> sum_j matrix[i][j] x_j to every
        generator.  The matrix must be invertible mod p."""
        a = np.asarray(matrix, dtype=np.int64) % self.ring.char
        n = self.ring.nvars
        if a.shape != (n, n):
            raise InputError(f"coordinate change must be {n}x{n}")
        if matrix_rank(a, self.ring.char) != n:
            raise InputError("coordinate change matrix is singular")
        return Ideal(self.ring, [g.substitute_linear(a) for g in self.gens])

    def extend_ring(self, new_name: str) -> "Ideal":
        """The same generators viewed in a ring with one extra (last)
        variable: the ideal of the cone with the new coordinate as vertex
        direction."""
        ring2 = PolyRing(self.ring.field, self.ring.names + (new_name,))
        gens2 = [
            Polynomial(ring2, {m + (0,): c for m, c in g.terms.items()})
            for g in self.gens
        ]
        return Ideal(ring2, gens2)


# ---------------------------------------------------------------------------
# embedded schemes


class EmbeddedScheme:
    """A closed subscheme of P^n over F_p presented by a homogeneous ideal.

    Validation: generators homogeneous, the ideal is not the unit ideal,
    and the scheme is nondegenerate (no linear forms in the ideal).  The
    `labels` dict carries provenance (builder recipe, expected invariants)
    and is purely informational.
    """

    def __init__(self, ideal: Ideal, labels: dict | None = None):
        for g in ideal.gens:
            if not g.is_homogeneous():
                raise InputError(f"scheme ideal has inhomogeneous generator {g!r}")
        if ideal.is_unit_ideal():
            raise InputError("unit ideal does not define a subscheme of P^n")
        for lm in ideal.lead_monomials():
            if sum(lm) == 1:
                raise InputError(
                    "ideal contains a linear form; the scheme is degenerate "
                    f"(lead monomial {ideal.ring.format_mono(lm)})"
                )
        self.ideal = ideal
        self.ring = ideal.ring
        self.labels = dict(labels or {})
        self._parametrization = None  # set by builders for point sampling
        self._koszul_ranks: dict = {}

    @property
    def ambient_dim(self) -> int:
        return self.ring.nvars - 1

    @property
    def char(self) -> int:
        return self.ring.char

    def __repr__(self):
        kind = self.labels.get("kind", "scheme")
        return f"<{kind} in P^{self.ambient_dim} over F_{self.char}>"

    def hilbert_function(self, d: int) -> int:
        return self.ideal.hilbert_function(d)

    def hilbert_data(self) -> HilbertData:
        return self.ideal.hilbert_data()

    def quadrics(self) -> list[Polynomial]:
        return self.ideal.graded_basis(2)

    def contains(self, coords) -> bool:
        p = self.char
        pt = [int(c) % p for c in coords]
        if all(c == 0 for c in pt):
            raise InputError("all-zero coordinates do not define a point")
        return all(g.evaluate(pt) == 0 for g in self.ideal.gens)


# ---------------------------------------------------------------------------
# ideal text format


def parse_ideal_text(text: str) -> Ideal:
    """Parse the plain-text ideal format:

        # comment
        field 32003
        ring x0 x1 x2 x3
        ideal
        x0*x2 - x1^2
        ...

    Returns an Ideal (its ring carries the field and variable names).
    """
    lines = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append(line)
    if len(lines) < 3:
        raise InputError("ideal text needs 'field', 'ring' and 'ideal' lines")
    if not lines[0].startswith("field"):
        raise InputError(f"expected 'field <p>' first, got {lines[0]!r}")
    try:
        char = int(lines[0].split()[1])
    except (IndexError, ValueError):
        raise InputError(f"bad field line {lines[0]!r}") from None
    if not lines[1].startswith("ring"):
        raise InputError(f"expected 'ring <names...>', got {lines[1]!r}")
    names = tuple(lines[1].split()[1:])
    if not names:
        raise InputError("ring line lists no variables")
    if lines[2] != "ideal":
        raise InputError(f"expected 'ideal' line, got {lines[2]!r}")
    ring = PolyRing(char, names)
    gens = [ring.parse(s) for s in lines[3:]]
    return Ideal(ring, gens)


def format_ideal_text(ideal: Ideal, comments=()) -> str:
    out = [f"# {c}" for c in comments]
    out.append(f"field {ideal.ring.char}")
    out.append("ring " + " ".join(ideal.ring.names))
    out.append("ideal")
    for g in ideal.gens:
        out.append(ideal.ring.format(g))
    return "\n".join(out) + "\n"
