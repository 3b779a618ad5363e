"""Labeled quivers, paths, relations, and the auxiliary/twisted constructions.

A labeled quiver attaches a vector space to each arrow; we only track the
dimension of that space together with a canonical basis convention (for
section spaces on the projective line: monomials x^e, x^(e-1)y, ..., y^e).
An arrow with label dimension 1 is the ordinary unlabeled case, and label
dimension 0 is allowed: the arrow stays in the quiver but every
representation assigns it the zero map.

Paths are stored in application order: ``arrows[0]`` acts first.  Labeled
relations are restricted to the commuting-square shape with the same label
on opposite sides; arbitrary labeled relations are rejected at validation.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import gcd, lcm
from typing import Iterable, Mapping, Optional, Sequence

from .errors import DomainError, InputError


@dataclass(frozen=True)
class Arrow:
    id: str
    src: str
    dst: str
    label_dim: int = 1


@dataclass(frozen=True)
class Path:
    """Composable arrow sequence; ``arrows`` is empty for the idle path e_i."""

    arrows: tuple[str, ...]
    source: str
    target: str

    def __len__(self) -> int:
        return len(self.arrows)


@dataclass(frozen=True)
class Relation:
    kind: str  # "plain" | "labeled-square"
    terms: tuple[tuple[Fraction, Path], ...]

    @property
    def source(self) -> str:
        return self.terms[0][1].source

    @property
    def target(self) -> str:
        return self.terms[0][1].target


@dataclass(frozen=True)
class LabeledQuiver:
    vertices: tuple[str, ...]
    arrows: tuple[Arrow, ...]
    relations: tuple[Relation, ...] = ()

    @cached_property
    def arrow_by_id(self) -> dict[str, Arrow]:
        return {a.id: a for a in self.arrows}

    @cached_property
    def vertex_index(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    def arrow(self, aid: str) -> Arrow:
        try:
            return self.arrow_by_id[aid]
        except KeyError:
            raise DomainError("unknown-arrow", f"arrow {aid!r} not in quiver") from None

    @property
    def is_unlabeled(self) -> bool:
        return all(a.label_dim == 1 for a in self.arrows)

    def path(self, arrow_ids: Sequence[str], at: Optional[str] = None) -> Path:
        """Build a path from arrow ids in application order."""
        if not arrow_ids:
            if at is None:
                raise InputError("path-empty", "length-zero path needs a base vertex")
            if at not in self.vertex_index:
                raise InputError("dangling-vertex", f"vertex {at!r} not declared")
            return Path((), at, at)
        prev = None
        for aid in arrow_ids:
            a = self.arrow(aid)
            if prev is not None and prev.dst != a.src:
                raise InputError(
                    "path-not-composable",
                    f"arrow {aid!r} starts at {a.src!r}, expected {prev.dst!r}")
            prev = a
        return Path(tuple(arrow_ids), self.arrow(arrow_ids[0]).src, prev.dst)


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------

def _normalize_terms(terms: Sequence[tuple[Fraction, Path]]) -> tuple[tuple[Fraction, Path], ...]:
    """Clear denominators, divide by the gcd, sort terms by arrow sequence."""
    denom = lcm(*(c.denominator for c, _ in terms)) if terms else 1
    ints = [(c * denom, p) for c, p in terms]
    g = 0
    for c, _ in ints:
        g = gcd(g, abs(c.numerator))
    if g > 1:
        ints = [(c / g, p) for c, p in ints]
    return tuple(sorted(ints, key=lambda t: (t[1].arrows, t[1].source)))


def make_relation(quiver: LabeledQuiver, kind: str,
                  terms: Sequence[tuple[Fraction, Path]]) -> Relation:
    if kind not in ("plain", "labeled-square"):
        raise InputError("relation-kind", f"unknown relation kind {kind!r}")
    if not terms:
        raise InputError("relation-empty", "a relation needs at least one term")
    src = terms[0][1].source
    dst = terms[0][1].target
    for _, p in terms:
        if p.source != src or p.target != dst:
            raise InputError("relation-endpoints",
                             "all paths in a relation must share source and target")
    if kind == "plain":
        for _, p in terms:
            for aid in p.arrows:
                if quiver.arrow(aid).label_dim != 1:
                    raise InputError(
                        "labeled-relation-shape",
                        f"plain relations may only use unlabeled arrows (got {aid!r})")
    else:
        _check_square_shape(quiver, terms)
    return Relation(kind, _normalize_terms(terms))


def _check_square_shape(quiver: LabeledQuiver, terms) -> None:
    """The only supported labeled relation: g a - d b with equal labels on
    opposite sides of a square (a labeled then unlabeled vs unlabeled then
    labeled)."""
    if len(terms) != 2:
        raise InputError("labeled-relation-shape", "labeled-square needs exactly two terms")
    (c1, p1), (c2, p2) = terms
    if len(p1) != 2 or len(p2) != 2:
        raise InputError("labeled-relation-shape", "labeled-square paths must have length 2")
    if c1 + c2 != 0 or c1 == 0:
        raise InputError("labeled-relation-shape",
                         "labeled-square coefficients must be c and -c")
    dims1 = [quiver.arrow(a).label_dim for a in p1.arrows]
    dims2 = [quiver.arrow(a).label_dim for a in p2.arrows]
    ok = (dims1[0] == dims2[1] and dims1[1] == 1 and dims2[0] == 1) or \
         (dims1[1] == dims2[0] and dims1[0] == 1 and dims2[1] == 1)
    if not ok:
        raise InputError(
            "labeled-relation-shape",
            "labeled-square needs the same label on opposite sides and unlabeled companions")


def validate_quiver(spec: Mapping) -> LabeledQuiver:
    """Build a LabeledQuiver from the parsed file format, checking all invariants."""
    try:
        vertex_list = list(spec["vertices"])
        arrow_list = list(spec.get("arrows", []))
        relation_list = list(spec.get("relations", []))
    except (KeyError, TypeError) as exc:
        raise InputError("malformed-quiver", f"missing quiver field: {exc}") from None

    vertices = tuple(str(v) for v in vertex_list)
    if len(set(vertices)) != len(vertices):
        raise InputError("duplicate-id", "duplicate vertex id")
    vset = set(vertices)
    arrows = []
    seen = set(vertices)
    for a in arrow_list:
        try:
            aid, src, dst = str(a["id"]), str(a["src"]), str(a["dst"])
        except (KeyError, TypeError) as exc:
            raise InputError("malformed-quiver", f"bad arrow entry: {exc}") from None
        ld = int(a.get("label_dim", 1))
        if ld < 0:
            raise InputError("malformed-quiver", f"arrow {aid!r} has negative label_dim")
        if aid in seen:
            raise InputError("duplicate-id", f"duplicate id {aid!r}")
        seen.add(aid)
        if src not in vset or dst not in vset:
            raise InputError("dangling-vertex",
                             f"arrow {aid!r} references an undeclared vertex")
        arrows.append(Arrow(aid, src, dst, ld))
    quiver = LabeledQuiver(vertices, tuple(arrows))

    relations = []
    for r in relation_list:
        kind = r.get("kind", "plain")
        terms = []
        for t in r.get("terms", []):
            coeff = Fraction(str(t.get("coeff", "1")))
            path = quiver.path([str(x) for x in t["path"]], at=t.get("at"))
            terms.append((coeff, path))
        relations.append(make_relation(quiver, kind, terms))
    return LabeledQuiver(vertices, tuple(arrows), tuple(relations))


# ---------------------------------------------------------------------------
# the path algebra product
# ---------------------------------------------------------------------------

def compose_paths(quiver: LabeledQuiver, p: Path, q: Path,
                  h_p: Sequence[int] = (), h_q: Sequence[int] = ()):
    """Product p*q ("first q, then p") in the path algebra of the labeled quiver.

    ``h_p`` and ``h_q`` pick label basis vectors, one index per arrow
    (index 0 for unlabeled arrows).  Returns ``(path, labels)`` with the
    combined label tuple in application order, or ``None`` for the zero
    product of non-composable paths.
    """
    for path, labels in ((p, h_p), (q, h_q)):
        if len(labels) != len(path):
            raise DomainError("label-indices", "one label index per arrow is required")
        for aid, h in zip(path.arrows, labels):
            dim = quiver.arrow(aid).label_dim
            if not 0 <= h < max(dim, 1) or (dim == 0):
                raise DomainError("label-indices",
                                  f"label index {h} invalid for arrow {aid!r} (dim {dim})")
    if q.target != p.source:
        return None
    return quiver.path(q.arrows + p.arrows, at=q.source if len(q) + len(p) == 0 else None), \
        tuple(h_q) + tuple(h_p)


# ---------------------------------------------------------------------------
# expansion to an unlabeled quiver
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Expansion:
    """Unlabeled quiver obtained by replacing every arrow with label_dim
    parallel copies, together with the arrow correspondence."""

    quiver: LabeledQuiver
    arrow_map: Mapping[str, tuple[str, ...]]  # original arrow -> parallel copies

    def push_rep(self, matrices: Mapping[str, Sequence]) -> dict[str, object]:
        """Send per-arrow matrix lists (one matrix per label basis vector)
        to a plain per-arrow assignment on the expansion."""
        flat = {}
        for aid, copies in self.arrow_map.items():
            mats = matrices[aid]
            if len(mats) != len(copies):
                raise DomainError("label-indices",
                                  f"arrow {aid!r} expects {len(copies)} matrices")
            for cid, m in zip(copies, mats):
                flat[cid] = m
        return flat

    def pull_rep(self, flat: Mapping[str, object]) -> dict[str, list]:
        return {aid: [flat[cid] for cid in copies]
                for aid, copies in self.arrow_map.items()}


def _copy_id(aid: str, k: int) -> str:
    return f"{aid}#{k}"


def expand_labeled(quiver: LabeledQuiver) -> Expansion:
    """Replace each arrow by label_dim parallel arrows; labeled-square
    relations with label dimension h expand into h plain square relations.
    Unlabeled arrows keep their ids, so a fully unlabeled quiver expands to
    itself."""
    arrows = []
    arrow_map: dict[str, tuple[str, ...]] = {}
    for a in quiver.arrows:
        if a.label_dim == 1:
            arrows.append(Arrow(a.id, a.src, a.dst, 1))
            arrow_map[a.id] = (a.id,)
        else:
            copies = tuple(_copy_id(a.id, k) for k in range(1, a.label_dim + 1))
            arrow_map[a.id] = copies
            arrows.extend(Arrow(c, a.src, a.dst, 1) for c in copies)
    expanded = LabeledQuiver(quiver.vertices, tuple(arrows))

    relations = []
    for rel in quiver.relations:
        if rel.kind == "plain":
            terms = [(c, expanded.path(p.arrows, at=p.source if len(p) == 0 else None))
                     for c, p in rel.terms]
            relations.append(make_relation(expanded, "plain", terms))
            continue
        # labeled square: pair the k-th copies on both labeled arrows
        (c1, p1), (c2, p2) = rel.terms
        labeled_pos1 = 0 if quiver.arrow(p1.arrows[0]).label_dim != 1 else 1
        labeled_pos2 = 1 - labeled_pos1
        h = quiver.arrow(p1.arrows[labeled_pos1]).label_dim
        for k in range(1, h + 1):
            def subst(path: Path, pos: int) -> Path:
                ids = list(path.arrows)
                ids[pos] = arrow_map[ids[pos]][k - 1]
                return expanded.path(ids)
            relations.append(make_relation(
                expanded, "plain",
                [(c1, subst(p1, labeled_pos1)), (c2, subst(p2, labeled_pos2))]))
    final = LabeledQuiver(quiver.vertices, tuple(arrows), tuple(relations))
    return Expansion(final, arrow_map)


# ---------------------------------------------------------------------------
# auxiliary and twisted quivers
# ---------------------------------------------------------------------------

def aux_vertex(kind: str, k: int) -> str:
    return f"{kind}:{k}"


def twisted_vertex(kind: str, i: str, k: int) -> str:
    return f"{kind}:{i}:{k}"


def phi_id(i: str, k: int, l: int) -> str:
    return f"phi:{i}:{k}:{l}"


def side_id(alpha: str, side: str, k: int) -> str:
    return f"{alpha}:{side}:{k}"


def build_auxiliary(n_rows: int, label_dims: Sequence[Sequence[int]]) -> LabeledQuiver:
    """The bipartite quiver with rows v_1..v_N, w_1..w_N and one labeled
    arrow v_k -> w_l for every pair (k, l)."""
    if n_rows < 1:
        raise DomainError("bad-rows", "the auxiliary quiver needs at least one row")
    if len(label_dims) != n_rows or any(len(r) != n_rows for r in label_dims):
        raise DomainError("shape-mismatch", "label_dims must be an NxN matrix")
    vertices = tuple(aux_vertex("v", k) for k in range(1, n_rows + 1)) + \
        tuple(aux_vertex("w", k) for k in range(1, n_rows + 1))
    arrows = tuple(
        Arrow(f"phi:{k}:{l}", aux_vertex("v", k), aux_vertex("w", l),
              int(label_dims[k - 1][l - 1]))
        for k in range(1, n_rows + 1) for l in range(1, n_rows + 1))
    return LabeledQuiver(vertices, arrows)


@dataclass(frozen=True)
class TwistedQuiver:
    """One copy of the auxiliary quiver per vertex of the source quiver,
    with left/right copies of every source arrow and the commuting-square
    relations between them."""

    quiver: LabeledQuiver            # all vertices/arrows, relations = I1 + I2
    source: LabeledQuiver
    n_rows: int
    label_dims: tuple[tuple[int, ...], ...]
    relations_i1: tuple[Relation, ...]
    relations_i2: tuple[Relation, ...]

    def v_id(self, i: str, k: int) -> str:
        return twisted_vertex("v", i, k)

    def w_id(self, i: str, k: int) -> str:
        return twisted_vertex("w", i, k)

    @property
    def vertex_pairs(self) -> list[tuple[str, int]]:
        """(source vertex, row) pairs in the canonical flattening order."""
        return [(i, k) for i in self.source.vertices
                for k in range(1, self.n_rows + 1)]


def build_twisted(source: LabeledQuiver, n_rows: int,
                  label_dims: Sequence[Sequence[int]]) -> TwistedQuiver:
    """Twist the auxiliary quiver by an unlabeled source quiver with relations."""
    if not source.is_unlabeled:
        raise DomainError("labeled-source", "the source quiver must be unlabeled")
    if n_rows < 1:
        raise DomainError("bad-rows", "need at least one row")
    dims = tuple(tuple(int(x) for x in row) for row in label_dims)
    if len(dims) != n_rows or any(len(r) != n_rows for r in dims):
        raise DomainError("shape-mismatch", "label_dims must be an NxN matrix")

    rng = range(1, n_rows + 1)
    vertices = tuple(twisted_vertex("v", i, k) for i in source.vertices for k in rng) + \
        tuple(twisted_vertex("w", i, k) for i in source.vertices for k in rng)
    arrows = [Arrow(phi_id(i, k, l), twisted_vertex("v", i, k), twisted_vertex("w", i, l),
                    dims[k - 1][l - 1])
              for i in source.vertices for k in rng for l in rng]
    arrows += [Arrow(side_id(a.id, "left", k), twisted_vertex("v", a.src, k),
                     twisted_vertex("v", a.dst, k), 1)
               for a in source.arrows for k in rng]
    arrows += [Arrow(side_id(a.id, "right", k), twisted_vertex("w", a.src, k),
                     twisted_vertex("w", a.dst, k), 1)
               for a in source.arrows for k in rng]
    bare = LabeledQuiver(vertices, tuple(arrows))

    one = Fraction(1)
    i1 = []
    for a in source.arrows:
        for k in rng:
            for l in rng:
                p_first = bare.path([phi_id(a.src, k, l), side_id(a.id, "right", l)])
                p_second = bare.path([side_id(a.id, "left", k), phi_id(a.dst, k, l)])
                i1.append(make_relation(bare, "labeled-square",
                                        [(one, p_first), (-one, p_second)]))
    i2 = []
    for rel in source.relations:
        for k in rng:
            for side in ("left", "right"):
                terms = []
                for c, p in rel.terms:
                    ids = [side_id(aid, side, k) for aid in p.arrows]
                    base = twisted_vertex("v" if side == "left" else "w", p.source, k)
                    terms.append((c, bare.path(ids, at=base if not ids else None)))
                i2.append(make_relation(bare, "plain", terms))

    full = LabeledQuiver(vertices, tuple(arrows), tuple(i1) + tuple(i2))
    return TwistedQuiver(full, source, n_rows, dims, tuple(i1), tuple(i2))


# ---------------------------------------------------------------------------
# structural queries
# ---------------------------------------------------------------------------

def is_acyclic(quiver: LabeledQuiver | TwistedQuiver) -> bool:
    """True iff the quiver contains no oriented cycle (iterative DFS)."""
    if isinstance(quiver, TwistedQuiver):
        quiver = quiver.quiver
    adjacency: dict[str, list[str]] = {v: [] for v in quiver.vertices}
    for a in quiver.arrows:
        adjacency[a.src].append(a.dst)
    WHITE, GRAY, BLACK = 0, 1, 2
    color = {v: WHITE for v in quiver.vertices}
    for start in quiver.vertices:
        if color[start] != WHITE:
            continue
        stack: list[tuple[str, int]] = [(start, 0)]
        color[start] = GRAY
        while stack:
            v, idx = stack[-1]
            if idx < len(adjacency[v]):
                stack[-1] = (v, idx + 1)
                nxt = adjacency[v][idx]
                if color[nxt] == GRAY:
                    return False
                if color[nxt] == WHITE:
                    color[nxt] = GRAY
                    stack.append((nxt, 0))
            else:
                color[v] = BLACK
                stack.pop()
    return True


def rep_variety_dims(quiver: LabeledQuiver, d: Mapping[str, int] | Sequence[int]) -> tuple[int, int]:
    """Dimensions (dim R_d, dim G_d) of the representation variety and of
    the base-change group for dimension vector d."""
    if not isinstance(d, Mapping):
        if len(d) != len(quiver.vertices):
            raise DomainError("shape-mismatch", "dimension vector length mismatch")
        d = dict(zip(quiver.vertices, d))
    missing = [v for v in quiver.vertices if v not in d]
    if missing:
        raise DomainError("shape-mismatch", f"dimension vector misses {missing}")
    if any(int(d[v]) < 0 for v in quiver.vertices):
        raise DomainError("bad-dimension", "dimension vector entries must be >= 0")
    dim_r = sum(int(d[a.src]) * int(d[a.dst]) * a.label_dim for a in quiver.arrows)
    dim_g = sum(int(d[v]) ** 2 for v in quiver.vertices)
    return dim_r, dim_g


# ---------------------------------------------------------------------------
# small builders used across tests and demos
# ---------------------------------------------------------------------------

def a_n_quiver(n: int) -> LabeledQuiver:
    """The linearly oriented A_n quiver 1 -> 2 -> ... -> n."""
    vertices = tuple(str(i) for i in range(1, n + 1))
    arrows = tuple(Arrow(f"a{i}", str(i), str(i + 1)) for i in range(1, n))
    return LabeledQuiver(vertices, arrows)


def jordan_quiver(nilpotent: bool = False) -> LabeledQuiver:
    """One vertex with a loop; optionally with the square-zero relation."""
    q = LabeledQuiver(("1",), (Arrow("f", "1", "1"),))
    if not nilpotent:
        return q
    rel = make_relation(q, "plain", [(Fraction(1), q.path(["f", "f"]))])
    return LabeledQuiver(q.vertices, q.arrows, (rel,))


def random_quiver(rng: random.Random, max_vertices: int = 6,
                  max_arrows: int = 10) -> LabeledQuiver:
    """A random quiver (possibly cyclic) for property tests."""
    nv = rng.randint(1, max_vertices)
    vertices = tuple(str(i) for i in range(1, nv + 1))
    na = rng.randint(0, max_arrows)
    arrows = tuple(
        Arrow(f"a{t}", rng.choice(vertices), rng.choice(vertices))
        for t in range(na))
    return LabeledQuiver(vertices, arrows)
