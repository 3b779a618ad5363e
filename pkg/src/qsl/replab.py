"""Brute-force stability analysis of quiver representations over small
prime fields.

The stability notions here are the slope conditions of King: a weight per
vertex, the slope of a representation is the weighted dimension divided by
the total dimension, and semistability bounds the slope of every nonzero
proper subrepresentation.  Over F_p with p in {2, 3, 5} the full lattice of
subrepresentations is finite and can be enumerated outright, which turns
semistability, Harder-Narasimhan and Jordan-Hoelder filtrations and
S-equivalence into exact finite computations.  This is a desk-scale
surrogate: the notions themselves are field-agnostic combinatorics of
invariant subspaces.

Witnesses are canonical: every subspace is presented by its reduced row
echelon basis, so equality of witnesses is equality of matrices.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Optional, Sequence

import numpy as np

from . import linalg
from .errors import DomainError
from .quiver import LabeledQuiver, Relation

SUPPORTED_PRIMES = (2, 3, 5)
DEFAULT_CAP = 10 ** 6

STABLE = "stable"
STRICTLY_SEMISTABLE = "strictly-semistable"
UNSTABLE = "unstable"


# ---------------------------------------------------------------------------
# representations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FiniteFieldRep:
    prime: int
    quiver: LabeledQuiver
    dims: tuple[int, ...]                     # aligned with quiver.vertices
    matrices: Mapping[str, np.ndarray]        # arrow id -> d_dst x d_src

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    def dim_of(self, vertex: str) -> int:
        return self.dims[self.quiver.vertex_index[vertex]]

    @property
    def is_zero(self) -> bool:
        return self.total_dim == 0


def make_rep(prime: int, quiver: LabeledQuiver, dims,
             matrices: Mapping[str, Sequence]) -> FiniteFieldRep:
    """Validate shapes and the declared relations, then freeze."""
    if prime not in SUPPORTED_PRIMES:
        raise DomainError("bad-prime", f"supported primes are {SUPPORTED_PRIMES}")
    if not quiver.is_unlabeled:
        raise DomainError("labeled-source",
                          "matrix representations need an unlabeled (or expanded) quiver")
    if isinstance(dims, Mapping):
        dims = [dims.get(v, 0) for v in quiver.vertices]
    dims = tuple(int(d) for d in dims)
    if len(dims) != len(quiver.vertices) or any(d < 0 for d in dims):
        raise DomainError("bad-dimension", "one non-negative dimension per vertex")
    mats = {}
    for arrow in quiver.arrows:
        shape = (dims[quiver.vertex_index[arrow.dst]],
                 dims[quiver.vertex_index[arrow.src]])
        given = matrices.get(arrow.id)
        if given is None:
            m = np.zeros(shape, dtype=np.int64)
        else:
            try:
                m = np.array(given, dtype=np.int64).reshape(shape) % prime
            except ValueError:
                raise DomainError("shape-mismatch",
                                  f"arrow {arrow.id!r} needs a {shape} matrix") from None
        mats[arrow.id] = m
    rep = FiniteFieldRep(prime, quiver, dims, mats)
    ok, violated = check_relations(rep, quiver.relations)
    if not ok:
        raise DomainError("relation-violated",
                          f"matrices violate a declared relation: {violated}")
    return rep


def path_matrix(rep: FiniteFieldRep, path) -> np.ndarray:
    """Product of arrow matrices along a path (identity for e_i)."""
    src = rep.dim_of(path.source)
    m = np.eye(src, dtype=np.int64)
    for aid in path.arrows:
        if aid not in rep.matrices:
            raise DomainError("unknown-arrow", f"path uses unknown arrow {aid!r}")
        m = rep.matrices[aid] @ m % rep.prime
    return m


def check_relations(rep: FiniteFieldRep,
                    relations: Sequence[Relation]) -> tuple[bool, Optional[Relation]]:
    """True iff every relation's signed sum of path matrices vanishes;
    on failure the first violated relation is returned."""
    for rel in relations:
        first = rel.terms[0][1]
        acc = np.zeros((rep.dim_of(first.target), rep.dim_of(first.source)),
                       dtype=np.int64)
        for coeff, path in rel.terms:
            if coeff.denominator % rep.prime == 0:
                raise DomainError("bad-coefficient",
                                  "relation coefficient has p in the denominator")
            c = coeff.numerator * pow(coeff.denominator, rep.prime - 2, rep.prime)
            acc = (acc + c * path_matrix(rep, path)) % rep.prime
        if acc.any():
            return False, rel
    return True, None


# ---------------------------------------------------------------------------
# subspace and subrepresentation enumeration
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def subspaces(prime: int, dim: int) -> tuple[np.ndarray, ...]:
    """All subspaces of F_p^dim as RREF bases, every dimension, canonically
    ordered (by dimension, then pivot columns, then free entries)."""
    out = []
    for k in range(dim + 1):
        for pivots in itertools.combinations(range(dim), k):
            free_cells = [(r, c) for r in range(k)
                          for c in range(pivots[r] + 1, dim) if c not in pivots]
            for values in itertools.product(range(prime), repeat=len(free_cells)):
                m = np.zeros((k, dim), dtype=np.int64)
                for r, pc in enumerate(pivots):
                    m[r, pc] = 1
                for (r, c), val in zip(free_cells, values):
                    m[r, c] = val
                m.setflags(write=False)
                out.append(m)
    return tuple(out)


@lru_cache(maxsize=None)
def count_subspaces(prime: int, dim: int) -> int:
    """Galois number: total count of subspaces of F_p^dim."""
    def gaussian(n, k):
        num = den = 1
        for i in range(k):
            num *= prime ** (n - i) - 1
            den *= prime ** (i + 1) - 1
        return num // den
    return sum(gaussian(dim, k) for k in range(dim + 1))


@lru_cache(maxsize=None)
def _containment_table(prime: int, dim: int) -> np.ndarray:
    """table[a, b] == 1 iff subspace a contains subspace b."""
    spaces = subspaces(prime, dim)
    n = len(spaces)
    table = np.zeros((n, n), dtype=bool)
    for a in range(n):
        for b in range(n):
            if spaces[b].shape[0] <= spaces[a].shape[0]:
                table[a, b] = linalg.fp_row_space_leq(spaces[b], spaces[a], prime)
    return table


@dataclass(frozen=True)
class Witness:
    """A subrepresentation, one echelon basis per vertex."""

    spaces: tuple[np.ndarray, ...]

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(s.shape[0] for s in self.spaces)

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    def key(self) -> tuple:
        return tuple(tuple(map(tuple, s.tolist())) for s in self.spaces)


@dataclass
class SubrepLattice:
    """The finite lattice of subrepresentations, with containment tables."""

    rep: FiniteFieldRep
    witnesses: list[Witness]
    indices: list[tuple[int, ...]]            # per-vertex subspace index tuples
    _tables: list[np.ndarray]

    def contains(self, a: int, b: int) -> bool:
        return all(t[ia, ib] for t, ia, ib in
                   zip(self._tables, self.indices[a], self.indices[b]))

    @property
    def zero_index(self) -> int:
        return next(i for i, w in enumerate(self.witnesses) if w.total_dim == 0)

    @property
    def full_index(self) -> int:
        return next(i for i, w in enumerate(self.witnesses)
                    if w.dims == self.rep.dims)


def subrep_lattice(rep: FiniteFieldRep, cap: int = DEFAULT_CAP) -> SubrepLattice:
    """Enumerate every arrow-invariant tuple of subspaces.

    Raises when the product of per-vertex subspace counts exceeds the cap,
    naming the count.
    """
    p = rep.prime
    total = 1
    for d in rep.dims:
        total *= count_subspaces(p, d)
    if total > cap:
        raise DomainError(
            "cap-exceeded",
            f"instance too large: {total} subspace tuples exceed the cap {cap}")

    per_vertex = [subspaces(p, d) for d in rep.dims]
    reduced = []  # (basis, pivots) per subspace per vertex, for closure tests
    for spaces in per_vertex:
        reduced.append([linalg.fp_rref(s, p) for s in spaces])
    arrows = [(rep.quiver.vertex_index[a.src], rep.quiver.vertex_index[a.dst],
               rep.matrices[a.id]) for a in rep.quiver.arrows]

    witnesses, indices = [], []
    for combo in itertools.product(*(range(len(s)) for s in per_vertex)):
        ok = True
        for (si, ti, mat) in arrows:
            basis = per_vertex[si][combo[si]]
            tgt, piv = reduced[ti][combo[ti]]
            for row in basis:
                image = mat @ row % p
                if not linalg.fp_in_row_space(tgt, piv, image, p):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            witnesses.append(Witness(tuple(per_vertex[i][c]
                                           for i, c in enumerate(combo))))
            indices.append(combo)
    tables = [_containment_table(p, d) for d in rep.dims]
    return SubrepLattice(rep, witnesses, indices, tables)


def enumerate_subreps(rep: FiniteFieldRep, cap: int = DEFAULT_CAP,
                      jobs: int = 1) -> list[Witness]:
    """All subrepresentations (including 0 and the whole representation).

    ``jobs`` splits the subspace-tuple scan across threads; results are
    identical regardless of the partitioning.
    """
    if jobs <= 1:
        return subrep_lattice(rep, cap).witnesses
    return _enumerate_parallel(rep, cap, jobs)


def _enumerate_parallel(rep: FiniteFieldRep, cap: int, jobs: int) -> list[Witness]:
    from concurrent.futures import ThreadPoolExecutor

    p = rep.prime
    total = 1
    for d in rep.dims:
        total *= count_subspaces(p, d)
    if total > cap:
        raise DomainError(
            "cap-exceeded",
            f"instance too large: {total} subspace tuples exceed the cap {cap}")
    per_vertex = [subspaces(p, d) for d in rep.dims]
    reduced = [[linalg.fp_rref(s, p) for s in spaces] for spaces in per_vertex]
    arrows = [(rep.quiver.vertex_index[a.src], rep.quiver.vertex_index[a.dst],
               rep.matrices[a.id]) for a in rep.quiver.arrows]
    combos = list(itertools.product(*(range(len(s)) for s in per_vertex)))

    def closed(combo):
        for (si, ti, mat) in arrows:
            tgt, piv = reduced[ti][combo[ti]]
            for row in per_vertex[si][combo[si]]:
                if not linalg.fp_in_row_space(tgt, piv, mat @ row % p, p):
                    return False
        return True

    chunk = max(1, len(combos) // jobs)
    parts = [combos[i:i + chunk] for i in range(0, len(combos), chunk)]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        flags = list(pool.map(lambda part: [closed(c) for c in part], parts))
    out = []
    for part, part_flags in zip(parts, flags):
        for combo, keep in zip(part, part_flags):
            if keep:
                out.append(Witness(tuple(per_vertex[i][c]
                                         for i, c in enumerate(combo))))
    return out


# ---------------------------------------------------------------------------
# slopes and semistability
# ---------------------------------------------------------------------------

def _theta_tuple(quiver: LabeledQuiver, theta) -> tuple[Fraction, ...]:
    if isinstance(theta, Mapping):
        theta = [theta[v] for v in quiver.vertices]
    theta = tuple(Fraction(x) for x in theta)
    if len(theta) != len(quiver.vertices):
        raise DomainError("shape-mismatch", "one weight per vertex required")
    return theta


def slope_of_dims(dims: Sequence[int], theta: Sequence[Fraction]) -> Fraction:
    total = sum(dims)
    if total == 0:
        raise DomainError("zero-representation", "the zero object has no slope")
    return sum((t * d for t, d in zip(theta, dims)), Fraction(0)) / total


def slope_theta(obj, theta) -> Fraction:
    """King slope of a representation or a subrepresentation witness."""
    if isinstance(obj, FiniteFieldRep):
        return slope_of_dims(obj.dims, _theta_tuple(obj.quiver, theta))
    if isinstance(obj, Witness):
        theta = tuple(Fraction(x) for x in theta)
        return slope_of_dims(obj.dims, theta)
    raise DomainError("bad-argument", "expected a representation or a witness")


@dataclass(frozen=True)
class Verdict:
    kind: str                     # stable | strictly-semistable | unstable
    witness: Optional[Witness]    # maximal-slope proper subrep when not stable

    @property
    def semistable(self) -> bool:
        return self.kind != UNSTABLE


def is_semistable(rep: FiniteFieldRep, theta, cap: int = DEFAULT_CAP) -> Verdict:
    """Compare the representation's slope against every nonzero proper
    subrepresentation; the witness is the maximal destabilizer (maximal
    slope, then maximal total dimension, then least echelon key)."""
    theta_t = _theta_tuple(rep.quiver, theta)
    if rep.is_zero:
        raise DomainError("zero-representation", "the zero object has no verdict")
    mu = slope_of_dims(rep.dims, theta_t)
    lattice = subrep_lattice(rep, cap)
    best: Optional[Witness] = None
    best_key = None
    for w in lattice.witnesses:
        if w.total_dim == 0 or w.dims == rep.dims:
            continue
        s = slope_of_dims(w.dims, theta_t)
        key = (s, w.total_dim, tuple(-x for x in _flat_key(w)))
        if best_key is None or key > best_key:
            best, best_key = w, key
    if best is None:
        return Verdict(STABLE, None)  # simple representation
    best_slope = best_key[0]
    if best_slope > mu:
        return Verdict(UNSTABLE, best)
    if best_slope == mu:
        return Verdict(STRICTLY_SEMISTABLE, best)
    return Verdict(STABLE, None)


def _flat_key(w: Witness) -> tuple:
    return tuple(x for s in w.spaces for x in np.asarray(s).flat)


# ---------------------------------------------------------------------------
# Harder-Narasimhan
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Filtration:
    """Strictly increasing chain ending at the full representation.

    ``steps[k]`` is the k-th nonzero stage; ``slopes[k]`` is the slope of the
    subquotient steps[k]/steps[k-1].
    """

    steps: tuple[Witness, ...]
    slopes: tuple[Fraction, ...]

    def __len__(self) -> int:
        return len(self.steps)


def _step_slope(upper: Witness, lower_dims: Sequence[int],
                theta: Sequence[Fraction]) -> Fraction:
    diff = [u - l for u, l in zip(upper.dims, lower_dims)]
    return slope_of_dims(diff, theta)


def hn_filtration(rep: FiniteFieldRep, theta, cap: int = DEFAULT_CAP) -> Filtration:
    """Unique filtration with semistable subquotients of strictly decreasing
    slopes, built by repeatedly extracting the maximal destabilizer of the
    current quotient.  Subquotient slopes only depend on dimension vectors,
    so the search runs entirely inside the subrepresentation lattice."""
    theta_t = _theta_tuple(rep.quiver, theta)
    if rep.is_zero:
        raise DomainError("zero-representation", "the zero object has no filtration")
    lattice = subrep_lattice(rep, cap)
    current = lattice.zero_index
    steps: list[Witness] = []
    slopes: list[Fraction] = []
    while lattice.witnesses[current].dims != rep.dims:
        cur_dims = lattice.witnesses[current].dims
        best, best_key = None, None
        for idx, w in enumerate(lattice.witnesses):
            if idx == current or not lattice.contains(idx, current):
                continue
            if w.total_dim == lattice.witnesses[current].total_dim:
                continue
            s = _step_slope(w, cur_dims, theta_t)
            key = (s, w.total_dim, tuple(-x for x in _flat_key(w)))
            if best_key is None or key > best_key:
                best, best_key = idx, key
        steps.append(lattice.witnesses[best])
        slopes.append(best_key[0])
        current = best
    return Filtration(tuple(steps), tuple(slopes))


# ---------------------------------------------------------------------------
# subquotients, Jordan-Hoelder, S-equivalence
# ---------------------------------------------------------------------------

def subrep_to_rep(rep: FiniteFieldRep, w: Witness) -> FiniteFieldRep:
    """The subrepresentation itself, in the coordinates of its echelon basis."""
    return subquotient_rep(rep, Witness(tuple(
        np.zeros((0, d), dtype=np.int64) for d in rep.dims)), w)


def subquotient_rep(rep: FiniteFieldRep, lower: Witness,
                    upper: Witness) -> FiniteFieldRep:
    """The representation upper/lower for nested witnesses."""
    p = rep.prime
    bases = []      # complement rows spanning upper modulo lower, per vertex
    lowers = []
    for lo, up in zip(lower.spaces, upper.spaces):
        lo_red, lo_piv = linalg.fp_rref(lo, p)
        comp = []
        for row in up:
            resid = linalg.fp_residual(lo_red, lo_piv, row, p)
            if resid.any():
                comp.append(resid)
        comp_red, comp_piv = linalg.fp_rref(
            np.array(comp, dtype=np.int64).reshape(len(comp), lo.shape[1]), p)
        bases.append((comp_red, comp_piv))
        lowers.append((lo_red, lo_piv))
    dims = tuple(b[0].shape[0] for b in bases)

    def quotient_coords(vi, vec):
        lo_red, lo_piv = lowers[vi]
        comp_red, comp_piv = bases[vi]
        resid = linalg.fp_residual(lo_red, lo_piv, vec, p)
        return linalg.fp_coords(comp_red, comp_piv, resid, p)

    matrices = {}
    for arrow in rep.quiver.arrows:
        si = rep.quiver.vertex_index[arrow.src]
        ti = rep.quiver.vertex_index[arrow.dst]
        m = np.zeros((dims[ti], dims[si]), dtype=np.int64)
        for col, row in enumerate(bases[si][0]):
            image = rep.matrices[arrow.id] @ row % p
            m[:, col] = quotient_coords(ti, image)
        matrices[arrow.id] = m
    return FiniteFieldRep(p, rep.quiver, dims, matrices)


def direct_sum(a: FiniteFieldRep, b: FiniteFieldRep) -> FiniteFieldRep:
    if a.prime != b.prime or a.quiver is not b.quiver and a.quiver != b.quiver:
        raise DomainError("ambient-mismatch", "summands must share prime and quiver")
    dims = tuple(x + y for x, y in zip(a.dims, b.dims))
    mats = {}
    for arrow in a.quiver.arrows:
        si = a.quiver.vertex_index[arrow.src]
        ti = a.quiver.vertex_index[arrow.dst]
        m = np.zeros((dims[ti], dims[si]), dtype=np.int64)
        m[:a.dims[ti], :a.dims[si]] = a.matrices[arrow.id]
        m[a.dims[ti]:, a.dims[si]:] = b.matrices[arrow.id]
        mats[arrow.id] = m
    return FiniteFieldRep(a.prime, a.quiver, dims, mats)


def jh_filtration(rep: FiniteFieldRep, theta, cap: int = DEFAULT_CAP) -> Filtration:
    """A maximal chain of equal-slope subrepresentations; subquotients are
    stable.  Input must be semistable."""
    theta_t = _theta_tuple(rep.quiver, theta)
    verdict = is_semistable(rep, theta, cap)
    if verdict.kind == UNSTABLE:
        raise DomainError("not-semistable", "Jordan-Hoelder needs a semistable input")
    mu = slope_of_dims(rep.dims, theta_t)
    lattice = subrep_lattice(rep, cap)
    current = lattice.zero_index
    steps, slopes = [], []
    while lattice.witnesses[current].dims != rep.dims:
        cur = lattice.witnesses[current]
        best, best_key = None, None
        for idx, w in enumerate(lattice.witnesses):
            if idx == current or not lattice.contains(idx, current):
                continue
            if w.total_dim == cur.total_dim:
                continue
            if _step_slope(w, cur.dims, theta_t) != mu:
                continue
            key = (w.total_dim, _flat_key(w))
            if best_key is None or key < best_key:
                best, best_key = idx, key
        steps.append(lattice.witnesses[best])
        slopes.append(mu)
        current = best
    return Filtration(tuple(steps), tuple(slopes))


def stable_subquotients(rep: FiniteFieldRep, theta,
                        cap: int = DEFAULT_CAP) -> list[FiniteFieldRep]:
    filt = jh_filtration(rep, theta, cap)
    zero = Witness(tuple(np.zeros((0, d), dtype=np.int64) for d in rep.dims))
    pieces = []
    prev = zero
    for step in filt.steps:
        pieces.append(subquotient_rep(rep, prev, step))
        prev = step
    return pieces


def gr(rep: FiniteFieldRep, theta, cap: int = DEFAULT_CAP) -> FiniteFieldRep:
    """Direct sum of the stable Jordan-Hoelder subquotients."""
    pieces = stable_subquotients(rep, theta, cap)
    out = pieces[0]
    for piece in pieces[1:]:
        out = direct_sum(out, piece)
    return out


def hom_space(a: FiniteFieldRep, b: FiniteFieldRep) -> np.ndarray:
    """Basis of the space of morphisms a -> b (rows are flattened tuples of
    per-vertex matrices, vertex blocks concatenated)."""
    p = a.prime
    offsets = []
    pos = 0
    for da, db in zip(a.dims, b.dims):
        offsets.append(pos)
        pos += da * db
    nvars = pos
    rows = []
    for arrow in a.quiver.arrows:
        si = a.quiver.vertex_index[arrow.src]
        ti = a.quiver.vertex_index[arrow.dst]
        ma, mb = a.matrices[arrow.id], b.matrices[arrow.id]
        # condition: T_t a_alpha = b_alpha T_s, entrywise linear in T
        for r in range(b.dims[ti]):
            for c in range(a.dims[si]):
                row = np.zeros(nvars, dtype=np.int64)
                for k in range(a.dims[ti]):  # (T_t)_{r,k} * (ma)_{k,c}
                    row[offsets[ti] + r * a.dims[ti] + k] += ma[k, c]
                for k in range(b.dims[si]):  # -(mb)_{r,k} * (T_s)_{k,c}
                    row[offsets[si] + k * a.dims[si] + c] -= mb[r, k]
                rows.append(row % p)
    if not rows:
        return linalg.fp_rref(np.eye(nvars, dtype=np.int64), p)[0]
    return linalg.fp_column_kernel(np.array(rows, dtype=np.int64), p)


def is_isomorphic(a: FiniteFieldRep, b: FiniteFieldRep,
                  search_cap: int = 10 ** 5) -> bool:
    """Exact isomorphism test: search the finite morphism space for an
    element that is invertible at every vertex."""
    if a.dims != b.dims:
        return False
    if a.total_dim == 0:
        return True
    basis = hom_space(a, b)
    k = basis.shape[0]
    if a.prime ** k > search_cap:
        raise DomainError("iso-search-too-large",
                          f"morphism space has {a.prime}**{k} elements")
    offsets = []
    pos = 0
    for da, db in zip(a.dims, b.dims):
        offsets.append(pos)
        pos += da * db
    for coeffs in itertools.product(range(a.prime), repeat=k):
        if not any(coeffs):
            continue
        flat = np.zeros(basis.shape[1] if k else 0, dtype=np.int64)
        for c, row in zip(coeffs, basis):
            flat = (flat + c * row) % a.prime
        good = True
        for vi, (da, db) in enumerate(zip(a.dims, b.dims)):
            block = flat[offsets[vi]:offsets[vi] + da * db].reshape(db, da)
            if da and linalg.fp_rank(block, a.prime) != da:
                good = False
                break
        if good:
            return True
    return False


def s_equivalent(a: FiniteFieldRep, b: FiniteFieldRep, theta,
                 cap: int = DEFAULT_CAP) -> bool:
    """Both inputs must be semistable; compares the multisets of stable
    Jordan-Hoelder subquotients up to isomorphism."""
    pieces_a = stable_subquotients(a, theta, cap)
    pieces_b = stable_subquotients(b, theta, cap)
    if len(pieces_a) != len(pieces_b):
        return False
    remaining = list(pieces_b)
    for x in pieces_a:
        for i, y in enumerate(remaining):
            if is_isomorphic(x, y):
                remaining.pop(i)
                break
        else:
            return False
    return True
