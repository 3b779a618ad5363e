"""Multi-Gieseker polynomials, numerical quiver sheaves, and the split model
on the projective line.

A quiver sheaf enters these computations only through numerical data: for
every vertex i and every ample bundle index j the coefficients
alpha_d^{L_j}(E_i), ..., alpha_0^{L_j}(E_i) of the Hilbert polynomial
P^{L_j}_{E_i}(T) = sum_k alpha_k T^k / k!.  All arithmetic is exact
rational; comparisons of reduced polynomials use the lexicographic order on
coefficients from the top degree down.

The split model on the line (every vertex a direct sum of line bundles
O(a), every arrow a matrix of homogeneous polynomials) provides genuine
sheaves for which the numerical data is computed rather than postulated.
Deciding semistability against *all* subsheaves is only offered for
symmetric weights, where it reduces to a finite per-vertex criterion; the
general case is intentionally out of scope (the saturated subsheaf lattice
is infinite and no enumeration bound is available at this level).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Mapping, Optional, Sequence

from .errors import DomainError, InputError
from .quiver import LabeledQuiver

F0 = Fraction(0)
F1 = Fraction(1)

LESS, EQUAL, GREATER = -1, 0, 1


# ---------------------------------------------------------------------------
# exact polynomials
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RationalPolynomial:
    """Polynomial with Fraction coefficients, stored low degree first."""

    coeffs: tuple[Fraction, ...]

    @staticmethod
    def make(coeffs: Sequence) -> "RationalPolynomial":
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        return RationalPolynomial(tuple(cs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    def __add__(self, other: "RationalPolynomial") -> "RationalPolynomial":
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [F0] * (n - len(self.coeffs))
        b = list(other.coeffs) + [F0] * (n - len(other.coeffs))
        return RationalPolynomial.make([x + y for x, y in zip(a, b)])

    def __sub__(self, other: "RationalPolynomial") -> "RationalPolynomial":
        return self + other.scale(Fraction(-1))

    def scale(self, c: Fraction) -> "RationalPolynomial":
        return RationalPolynomial.make([c * x for x in self.coeffs])

    def __call__(self, t: Fraction) -> Fraction:
        acc = F0
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    def coefficient(self, k: int) -> Fraction:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else F0

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            term = "" if (abs(c) == 1 and k > 0) else str(abs(c)) + ("*" if k else "")
            if k > 1:
                term += f"T^{k}"
            elif k == 1:
                term += "T"
            parts.append(("- " if c < 0 else "+ " if parts else "") + term)
        out = " ".join(parts)
        return out[2:] if out.startswith("+ ") else out


ZERO_POLY = RationalPolynomial(())


def lex_compare(p: RationalPolynomial, q: RationalPolynomial) -> int:
    """-1, 0 or +1 by comparing coefficients from the highest degree down;
    this is the eventual pointwise order for large arguments."""
    top = max(len(p.coeffs), len(q.coeffs))
    for k in range(top - 1, -1, -1):
        a, b = p.coefficient(k), q.coefficient(k)
        if a != b:
            return LESS if a < b else GREATER
    return EQUAL


# ---------------------------------------------------------------------------
# stability weights and numerical quiver sheaves
# ---------------------------------------------------------------------------

def _as_rows(matrix, vertices: Sequence[str], n_bundles: int,
             what: str) -> tuple[tuple[Fraction, ...], ...]:
    """Accept either a row list aligned with ``vertices`` or a mapping
    vertex -> row, and freeze it into Fractions."""
    if isinstance(matrix, Mapping):
        try:
            rows = [matrix[v] for v in vertices]
        except KeyError as exc:
            raise DomainError("shape-mismatch", f"{what} misses vertex {exc}") from None
    else:
        rows = list(matrix)
    if len(rows) != len(vertices) or any(len(r) != n_bundles for r in rows):
        raise DomainError("shape-mismatch",
                          f"{what} must be a {len(vertices)}x{n_bundles} matrix")
    return tuple(tuple(Fraction(x) for x in row) for row in rows)


@dataclass(frozen=True)
class StabilityPair:
    """The weight tuples (sigma, rho), non-negative with no all-zero row."""

    vertices: tuple[str, ...]
    n_bundles: int
    sigma: tuple[tuple[Fraction, ...], ...]
    rho: tuple[tuple[Fraction, ...], ...]

    @staticmethod
    def make(vertices: Sequence[str], sigma, rho=None) -> "StabilityPair":
        vertices = tuple(vertices)
        sig_rows = _as_rows(sigma, vertices, len(_first_row(sigma)), "sigma")
        n = len(sig_rows[0]) if sig_rows else 0
        rho_rows = sig_rows if rho is None else _as_rows(rho, vertices, n, "rho")
        for name, rows in (("sigma", sig_rows), ("rho", rho_rows)):
            for v, row in zip(vertices, rows):
                if any(x < 0 for x in row):
                    raise DomainError("negative-weight", f"{name} must be non-negative")
                if all(x == 0 for x in row):
                    raise DomainError("zero-weight-row",
                                      f"{name} vanishes identically at vertex {v!r}")
        return StabilityPair(vertices, n, sig_rows, rho_rows)

    @property
    def positive(self) -> bool:
        return all(x > 0 for row in self.sigma for x in row)

    @property
    def symmetric(self) -> bool:
        return all(row == self.sigma[0] for row in self.sigma)

    def sigma_row(self, vertex: str) -> tuple[Fraction, ...]:
        return self.sigma[self.vertices.index(vertex)]


def _first_row(matrix):
    if isinstance(matrix, Mapping):
        return next(iter(matrix.values()))
    return matrix[0]


def symmetric_sigma(vertices: Sequence[str], sigma_hat: Sequence) -> list[list[Fraction]]:
    """Expand an N-vector of weights to the symmetric vertex-by-bundle matrix."""
    row = [Fraction(x) for x in sigma_hat]
    return [list(row) for _ in vertices]


@dataclass(frozen=True)
class NumericalQuiverSheaf:
    """Hilbert-polynomial coefficients per vertex and bundle.

    ``coeffs[i][j]`` lists (alpha_d, ..., alpha_0) for vertex i and bundle j.
    ``ranks`` is optional and only needed for the torsion-free (linear wall)
    machinery.  Purity is a declaration: the numbers cannot certify it.
    """

    vertices: tuple[str, ...]
    n_bundles: int
    dim: int
    coeffs: tuple[tuple[tuple[Fraction, ...], ...], ...]
    ranks: Optional[tuple[Fraction, ...]] = None

    @staticmethod
    def make(vertices: Sequence[str], dim: int, coeffs, ranks=None) -> "NumericalQuiverSheaf":
        vertices = tuple(str(v) for v in vertices)
        if isinstance(coeffs, Mapping):
            rows = [coeffs[v] for v in vertices]
        else:
            rows = list(coeffs)
        if len(rows) != len(vertices):
            raise DomainError("shape-mismatch", "one coefficient row per vertex required")
        frozen = []
        for v, row in zip(vertices, rows):
            entry = tuple(tuple(Fraction(c) for c in vec) for vec in row)
            if any(len(vec) != dim + 1 for vec in entry):
                raise DomainError("shape-mismatch",
                                  f"vertex {v!r}: need d+1 coefficients per bundle")
            frozen.append(entry)
        nb = {len(e) for e in frozen}
        if len(nb) != 1:
            raise DomainError("shape-mismatch", "bundle count differs between vertices")
        n_bundles = nb.pop()
        for v, entry in zip(vertices, frozen):
            leads = [vec[0] for vec in entry]
            if any(x < 0 for x in leads):
                raise DomainError("negative-leading",
                                  f"vertex {v!r}: leading coefficients must be >= 0")
            if any(x == 0 for x in leads) and any(x > 0 for x in leads):
                raise DomainError(
                    "mixed-leading",
                    f"vertex {v!r}: leading coefficients must all vanish or all be positive")
        rk = None if ranks is None else tuple(Fraction(r) for r in ranks)
        return NumericalQuiverSheaf(vertices, n_bundles, dim, tuple(frozen), rk)

    def alpha(self, vertex: str, j: int, k: int) -> Fraction:
        """alpha_k with respect to bundle j (both 0-based except k counts degree)."""
        return self.coeffs[self.vertices.index(vertex)][j][self.dim - k]

    def vertex_is_zero(self, vertex: str) -> bool:
        entry = self.coeffs[self.vertices.index(vertex)]
        return all(c == 0 for vec in entry for c in vec)

    @property
    def is_zero(self) -> bool:
        return all(self.vertex_is_zero(v) for v in self.vertices)


def multi_hilbert_raw(sheaf: NumericalQuiverSheaf, sigma) -> RationalPolynomial:
    """P^sigma as a polynomial in T; ``sigma`` is any rational matrix (the
    King special case at dimension zero needs possibly negative entries)."""
    rows = _as_rows(sigma, sheaf.vertices, sheaf.n_bundles, "sigma")
    coeffs = [F0] * (sheaf.dim + 1)
    for i in range(len(sheaf.vertices)):
        for j in range(sheaf.n_bundles):
            w = rows[i][j]
            if w == 0:
                continue
            vec = sheaf.coeffs[i][j]
            for k in range(sheaf.dim + 1):
                coeffs[k] += w * vec[sheaf.dim - k] / math.factorial(k)
    return RationalPolynomial.make(coeffs)


def multi_hilbert(sheaf: NumericalQuiverSheaf, sigma) -> RationalPolynomial:
    return multi_hilbert_raw(sheaf, sigma)


def multi_rank(sheaf: NumericalQuiverSheaf, rho) -> Fraction:
    rows = _as_rows(rho, sheaf.vertices, sheaf.n_bundles, "rho")
    return sum((rows[i][j] * sheaf.coeffs[i][j][0]
                for i in range(len(sheaf.vertices))
                for j in range(sheaf.n_bundles)), F0)


def reduced_poly_raw(sheaf: NumericalQuiverSheaf, sigma, rho) -> RationalPolynomial:
    rk = multi_rank(sheaf, rho)
    if rk == 0:
        raise DomainError("zero-rank", "reduced polynomial needs positive multi-rank")
    return multi_hilbert_raw(sheaf, sigma).scale(F1 / rk)


def reduced_poly(sheaf: NumericalQuiverSheaf, sp: StabilityPair) -> RationalPolynomial:
    return reduced_poly_raw(sheaf, sp.sigma, sp.rho)


def slope_sigma(sheaf: NumericalQuiverSheaf, sigma) -> Fraction:
    """Ratio of the two top sigma-weighted coefficients; invariant under
    positive scaling of sigma."""
    rows = _as_rows(sigma, sheaf.vertices, sheaf.n_bundles, "sigma")
    top = sum((rows[i][j] * sheaf.coeffs[i][j][0]
               for i in range(len(sheaf.vertices)) for j in range(sheaf.n_bundles)), F0)
    if top == 0:
        raise DomainError("zero-leading", "slope needs a positive leading coefficient")
    if sheaf.dim == 0:
        raise DomainError("zero-dimensional", "slope undefined in dimension zero")
    sub = sum((rows[i][j] * sheaf.coeffs[i][j][1]
               for i in range(len(sheaf.vertices)) for j in range(sheaf.n_bundles)), F0)
    return sub / top


def delta_vertex(vertices: Sequence[str], i0: str,
                 sheaf_coeffs: Sequence[Sequence], dim: int,
                 rank: Optional[Fraction] = None) -> NumericalQuiverSheaf:
    """Place a single sheaf (given by its per-bundle coefficient vectors) at
    the vertex i0 and zero everywhere else, with zero arrows."""
    vertices = tuple(str(v) for v in vertices)
    if i0 not in vertices:
        raise DomainError("unknown-vertex", f"vertex {i0!r} not declared")
    n_bundles = len(sheaf_coeffs)
    zero_entry = tuple((F0,) * (dim + 1) for _ in range(n_bundles))
    rows = []
    for v in vertices:
        if v == i0:
            rows.append(tuple(tuple(Fraction(c) for c in vec) for vec in sheaf_coeffs))
        else:
            rows.append(zero_entry)
    ranks = None
    if rank is not None:
        ranks = tuple(Fraction(rank) if v == i0 else F0 for v in vertices)
    return NumericalQuiverSheaf.make(vertices, dim, rows, ranks)


def single_sheaf(sheaf_coeffs: Sequence[Sequence], dim: int,
                 rank: Optional[Fraction] = None) -> NumericalQuiverSheaf:
    """The one-vertex wrapper used to talk about a plain sheaf."""
    return delta_vertex(("*",), "*", sheaf_coeffs, dim, rank)


def destabilizer_vertex_witness(sheaf: NumericalQuiverSheaf, sigma,
                                mu: Fraction) -> tuple[str, int]:
    """A pair (vertex, bundle index) with positive weight whose single-bundle
    slope already reaches mu; exists whenever the global slope does."""
    rows = _as_rows(sigma, sheaf.vertices, sheaf.n_bundles, "sigma")
    if slope_sigma(sheaf, sigma) < mu:
        raise DomainError("precondition", "global slope below the requested bound")
    for i, v in enumerate(sheaf.vertices):
        for j in range(sheaf.n_bundles):
            if rows[i][j] == 0:
                continue
            lead = sheaf.coeffs[i][j][0]
            sub = sheaf.coeffs[i][j][1]
            if lead > 0 and sub / lead >= mu:
                return (v, j)
            if lead == 0 and sub > 0:  # infinite single-bundle slope
                return (v, j)
    raise DomainError("witness-missing",
                      "no single-vertex witness found; input data is not pure")


# ---------------------------------------------------------------------------
# homogeneous polynomials in two variables (sections on the line)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HomPoly:
    """Homogeneous polynomial in x, y; coefficients in the monomial order
    x^e, x^(e-1) y, ..., y^e.  The zero polynomial has empty coefficients
    and works in any degree."""

    coeffs: tuple[Fraction, ...]

    @staticmethod
    def make(coeffs: Sequence) -> "HomPoly":
        cs = tuple(Fraction(c) for c in coeffs)
        if all(c == 0 for c in cs):
            return HomPoly(())
        return HomPoly(cs)

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        if self.is_zero:
            raise DomainError("zero-degree", "the zero polynomial has no degree")
        return len(self.coeffs) - 1

    def __add__(self, other: "HomPoly") -> "HomPoly":
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        if len(self.coeffs) != len(other.coeffs):
            raise DomainError("degree-mismatch", "cannot add different degrees")
        return HomPoly.make([a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __mul__(self, other: "HomPoly") -> "HomPoly":
        if self.is_zero or other.is_zero:
            return ZERO_HOM
        out = [F0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for s, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for t, b in enumerate(other.coeffs):
                out[s + t] += a * b
        return HomPoly.make(out)

    def scale(self, c: Fraction) -> "HomPoly":
        return HomPoly.make([c * x for x in self.coeffs])


ZERO_HOM = HomPoly(())


def monomial_basis(e: int) -> list[tuple[int, int]]:
    """Exponent pairs of x^e, x^(e-1)y, ..., y^e; empty when e < 0."""
    if e < 0:
        return []
    return [(e - t, t) for t in range(e + 1)]


# ---------------------------------------------------------------------------
# the split model on the line
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class P1SheafModel:
    """Split quiver sheaf on the line: E_i = O(a_1) + ... + O(a_r) per vertex,
    arrows given by matrices of homogeneous polynomials (entry (t, s) has
    degree twist_target[t] - twist_source[s], or is zero)."""

    quiver: "LabeledQuiver"
    bundle_degrees: tuple[int, ...]
    twists: Mapping[str, tuple[int, ...]]
    arrow_maps: Mapping[str, tuple[tuple[HomPoly, ...], ...]]

    @property
    def n_bundles(self) -> int:
        return len(self.bundle_degrees)

    def vertex_rank(self, v: str) -> int:
        return len(self.twists[v])

    @cached_property
    def max_twist(self) -> int:
        values = [a for tw in self.twists.values() for a in tw]
        return max(values) if values else 0


def make_p1_model(quiver, bundle_degrees: Sequence[int],
                  twists: Mapping[str, Sequence[int]],
                  arrow_maps: Optional[Mapping[str, Sequence[Sequence]]] = None) -> P1SheafModel:
    """Validate degrees and relation compatibility and freeze the model."""
    degrees = tuple(int(b) for b in bundle_degrees)
    if not degrees or any(b <= 0 for b in degrees):
        raise InputError("bad-bundle-degrees", "bundle degrees must be positive integers")
    tw = {}
    for v in quiver.vertices:
        tw[v] = tuple(int(a) for a in twists.get(v, ()))
    unknown = set(twists) - set(quiver.vertices)
    if unknown:
        raise InputError("unknown-vertex", f"twists given for unknown vertices {sorted(unknown)}")

    maps = {}
    arrow_maps = arrow_maps or {}
    for arrow in quiver.arrows:
        rows_t = tw[arrow.dst]
        cols_s = tw[arrow.src]
        given = arrow_maps.get(arrow.id)
        if given is not None and (len(given) != len(rows_t) or
                                  any(len(r) != len(cols_s) for r in given)):
            raise InputError("shape-mismatch",
                             f"arrow {arrow.id!r} matrix must be {len(rows_t)}x{len(cols_s)}")
        matrix = []
        for t in range(len(rows_t)):
            row = []
            for s in range(len(cols_s)):
                need = rows_t[t] - cols_s[s]
                poly = ZERO_HOM
                if given is not None:
                    entry = given[t][s]
                    poly = entry if isinstance(entry, HomPoly) else HomPoly.make(entry)
                if not poly.is_zero:
                    if need < 0:
                        raise InputError(
                            "degree-mismatch",
                            f"arrow {arrow.id!r} entry ({t},{s}) must be zero (degree {need})")
                    if poly.degree != need:
                        raise InputError(
                            "degree-mismatch",
                            f"arrow {arrow.id!r} entry ({t},{s}): degree {poly.degree}, "
                            f"need {need}")
                row.append(poly)
            matrix.append(tuple(row))
        maps[arrow.id] = tuple(matrix)
    model = P1SheafModel(quiver, degrees, tw, maps)
    _check_model_relations(model)
    return model


def _poly_mat_mul(a, b):
    rows, inner, cols = len(a), len(b), (len(b[0]) if b else 0)
    out = []
    for i in range(rows):
        row = []
        for j in range(cols):
            acc = ZERO_HOM
            for k in range(inner):
                acc = acc + (a[i][k] * b[k][j])
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def _path_matrix(model: P1SheafModel, path) -> tuple:
    """Matrix of homogeneous polynomials realizing a path of arrows."""
    mat = None
    src = path.source
    if not path.arrows:
        n = model.vertex_rank(src)
        return tuple(tuple(HomPoly.make([1]) if t == s else ZERO_HOM
                           for s in range(n)) for t in range(n))
    for aid in path.arrows:
        step = model.arrow_maps[aid]
        mat = step if mat is None else _poly_mat_mul(step, mat)
    return mat


def _check_model_relations(model: P1SheafModel) -> None:
    for rel in model.quiver.relations:
        if rel.kind != "plain":
            raise InputError("labeled-relation-shape",
                             "split models live over unlabeled quivers")
        acc = None
        for coeff, path in rel.terms:
            term = tuple(tuple(p.scale(coeff) for p in row)
                         for row in _path_matrix(model, path))
            if acc is None:
                acc = term
            else:
                acc = tuple(tuple(a + b for a, b in zip(ra, rb))
                            for ra, rb in zip(acc, term))
        if acc is not None and any(not p.is_zero for row in acc for p in row):
            raise InputError("relation-violated",
                             "arrow matrices do not satisfy the declared relations")


def p1_sheaf_to_numeric(model: P1SheafModel) -> NumericalQuiverSheaf:
    """Euler characteristics of O(a + T b) give alpha_1 = rank * b and
    alpha_0 = sum (a_s + 1); dimension 1, ranks recorded."""
    rows = []
    ranks = []
    for v in model.quiver.vertices:
        tw = model.twists[v]
        ranks.append(Fraction(len(tw)))
        entry = []
        for b in model.bundle_degrees:
            alpha1 = Fraction(len(tw) * b)
            alpha0 = Fraction(sum(a + 1 for a in tw))
            entry.append((alpha1, alpha0))
        rows.append(tuple(entry))
    return NumericalQuiverSheaf.make(model.quiver.vertices, 1, rows, ranks)


def is_n_regular_p1(model: P1SheafModel, n: int) -> bool:
    """Regularity with respect to every chosen bundle: on the line this is
    the first-cohomology vanishing a + (n-1) b >= -1 for every summand."""
    for v in model.quiver.vertices:
        for a in model.twists[v]:
            for b in model.bundle_degrees:
                if a + (n - 1) * b < -1:
                    return False
    return True


def submodel(model: P1SheafModel, picks: Mapping[str, Sequence[int]]) -> P1SheafModel:
    """Coordinate subsheaf: keep the chosen summand indices at every vertex.
    Raises unless the arrow matrices respect the choice."""
    twists = {}
    for v in model.quiver.vertices:
        chosen = tuple(sorted(picks.get(v, ())))
        twists[v] = tuple(model.twists[v][s] for s in chosen)
    maps = {}
    for arrow in model.quiver.arrows:
        src_keep = sorted(picks.get(arrow.src, ()))
        dst_keep = sorted(picks.get(arrow.dst, ()))
        dst_drop = [t for t in range(model.vertex_rank(arrow.dst)) if t not in dst_keep]
        full = model.arrow_maps[arrow.id]
        for t in dst_drop:
            for s in src_keep:
                if not full[t][s].is_zero:
                    raise DomainError("not-a-subsheaf",
                                      f"arrow {arrow.id!r} leaks out of the chosen summands")
        maps[arrow.id] = tuple(tuple(full[t][s] for s in src_keep) for t in dst_keep)
    return P1SheafModel(model.quiver, model.bundle_degrees, twists, maps)


def coordinate_subsheaves(model: P1SheafModel, proper: bool = True):
    """All arrow-closed coordinate subtuples (choices of summands per vertex).

    Yields (picks, submodel).  With ``proper`` the zero and full choices are
    skipped.  Only meaningful at desk scale.
    """
    import itertools
    per_vertex = []
    for v in model.quiver.vertices:
        r = model.vertex_rank(v)
        per_vertex.append([tuple(c) for k in range(r + 1)
                           for c in itertools.combinations(range(r), k)])
    for combo in itertools.product(*per_vertex):
        picks = dict(zip(model.quiver.vertices, combo))
        total = sum(len(c) for c in combo)
        full = sum(model.vertex_rank(v) for v in model.quiver.vertices)
        if proper and (total == 0 or total == full):
            continue
        try:
            sub = submodel(model, picks)
        except DomainError:
            continue
        yield picks, sub


# ---------------------------------------------------------------------------
# the symmetric semistability decision
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SymmetricVerdict:
    semistable: bool
    reason: str                      # "ok" | "vertex-unstable" | "polynomial-mismatch" | "purity"
    witness_vertex: Optional[str] = None
    witness_poly: Optional[RationalPolynomial] = None
    ambient_poly: Optional[RationalPolynomial] = None


def symmetric_semistable(model: P1SheafModel, sigma_hat: Sequence) -> SymmetricVerdict:
    """Tuple-criterion semistability for symmetric weights: every nonzero
    vertex must be semistable on its own (all summand twists equal for a
    split bundle on the line) and all per-vertex reduced polynomials must
    agree with the global one; a zero vertex next to a nonzero one breaks
    purity.  The witness is the offending vertex or the single-vertex
    subobject with the larger reduced polynomial."""
    weights = [Fraction(x) for x in sigma_hat]
    if len(weights) != model.n_bundles:
        raise DomainError("shape-mismatch", "one weight per bundle required")
    if any(w < 0 for w in weights) or all(w == 0 for w in weights):
        raise DomainError("bad-weights", "weights must be non-negative and not all zero")

    nonzero = [v for v in model.quiver.vertices if model.twists[v]]
    if not nonzero:
        raise DomainError("zero-sheaf", "all vertices are zero")
    numeric = p1_sheaf_to_numeric(model)
    sigma = symmetric_sigma(model.quiver.vertices, weights)
    if len(nonzero) != len(model.quiver.vertices):
        empty = next(v for v in model.quiver.vertices if not model.twists[v])
        return SymmetricVerdict(False, "purity", witness_vertex=empty)

    ambient = reduced_poly_raw(numeric, sigma, sigma)

    # (a) per-vertex check: a split bundle is semistable iff all twists agree,
    #     and then its maximal destabilizer O(max a) has the same polynomial.
    for v in model.quiver.vertices:
        tw = model.twists[v]
        if min(tw) != max(tw):
            best = delta_vertex(model.quiver.vertices, v,
                                [(Fraction(b), Fraction(max(tw) + 1))
                                 for b in model.bundle_degrees], 1)
            return SymmetricVerdict(
                False, "vertex-unstable", witness_vertex=v,
                witness_poly=reduced_poly_raw(best, sigma, sigma),
                ambient_poly=ambient)

    # (b) equal reduced polynomials across vertices (and hence equal to the
    #     ambient one, which is their rank-weighted convex combination)
    worst_v, worst_p = None, None
    for v in model.quiver.vertices:
        single = delta_vertex(model.quiver.vertices, v,
                              numeric.coeffs[model.quiver.vertex_index[v]], 1)
        p_v = reduced_poly_raw(single, sigma, sigma)
        if worst_p is None or lex_compare(p_v, worst_p) == GREATER:
            worst_v, worst_p = v, p_v
    if lex_compare(worst_p, ambient) == GREATER:
        return SymmetricVerdict(False, "polynomial-mismatch", witness_vertex=worst_v,
                                witness_poly=worst_p, ambient_poly=ambient)
    return SymmetricVerdict(True, "ok", ambient_poly=ambient)
