"""Independent oracles shared by the unit tests and the acceptance suite.

Everything here recomputes expected values from first principles (raw
exhaustion over vectors, dimension arithmetic) without going through the
library code paths under test.
"""

import itertools
from fractions import Fraction

import numpy as np

from qsl.quiver import LabeledQuiver
from qsl.replab import FiniteFieldRep, make_rep


def all_vectors(p, d):
    return [np.array(v, dtype=np.int64) for v in itertools.product(range(p), repeat=d)]


def span_of(p, vectors, d):
    """Set of all vectors in the span, as tuples (raw exhaustion)."""
    out = {tuple([0] * d)}
    for _ in range(d):
        new = set(out)
        for v in list(out):
            for w in vectors:
                for c in range(p):
                    new.add(tuple((np.array(v) + c * w) % p))
        out = new
    return out


def brute_force_subrep_dimsets(rep: FiniteFieldRep):
    """All arrow-invariant subspace tuples found by raw exhaustion over
    vector subsets; returns the set of (frozenset per vertex) tuples."""
    p = rep.prime
    per_vertex_spans = []
    for d in rep.dims:
        vecs = all_vectors(p, d)
        spans = set()
        for r in range(d + 1):
            for basis in itertools.combinations(vecs, r):
                spans.add(frozenset(span_of(p, list(basis), d)))
        per_vertex_spans.append(sorted(spans, key=lambda s: (len(s), sorted(s))))
    found = set()
    for combo in itertools.product(*per_vertex_spans):
        ok = True
        for arrow in rep.quiver.arrows:
            si = rep.quiver.vertex_index[arrow.src]
            ti = rep.quiver.vertex_index[arrow.dst]
            for v in combo[si]:
                image = tuple(rep.matrices[arrow.id] @ np.array(v) % p)
                if image not in combo[ti]:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            found.add(tuple(combo))
    return found


def king_slope(dims, theta):
    total = sum(dims)
    return sum((Fraction(t) * d for t, d in zip(theta, dims)), Fraction(0)) / total


def definitional_verdict(rep, theta, witnesses):
    """Semistability straight from the definition over an enumerated lattice:
    unstable iff some nonzero proper witness has a strictly bigger slope."""
    mu = king_slope(rep.dims, theta)
    strictly = False
    for w in witnesses:
        if w.total_dim == 0 or w.dims == rep.dims:
            continue
        s = king_slope(w.dims, theta)
        if s > mu:
            return "unstable"
        if s == mu:
            strictly = True
    return "strictly-semistable" if strictly else "stable"


def subquotient_semistable_in_lattice(lattice, lower, upper, theta):
    """Semistability of upper/lower read off from dimension vectors of the
    intermediate lattice elements."""
    up_dims = lattice.witnesses[upper].dims
    lo_dims = lattice.witnesses[lower].dims
    mu = king_slope([u - l for u, l in zip(up_dims, lo_dims)], theta)
    for idx in range(len(lattice.witnesses)):
        if idx in (lower, upper):
            continue
        if not (lattice.contains(upper, idx) and lattice.contains(idx, lower)):
            continue
        mid = lattice.witnesses[idx].dims
        diff = [m - l for m, l in zip(mid, lo_dims)]
        if sum(diff) == 0:
            continue
        if king_slope(diff, theta) > mu:
            return False
    return True


def all_hn_chains(lattice, theta):
    """Every chain 0 = S_0 < ... < S_r = M with semistable subquotients and
    strictly decreasing subquotient slopes (exhaustive)."""
    zero, full = lattice.zero_index, lattice.full_index
    chains = []

    def extend(chain, last_slope):
        head = chain[-1]
        if head == full:
            chains.append(list(chain))
            return
        for idx in range(len(lattice.witnesses)):
            if idx == head or not lattice.contains(idx, head):
                continue
            diff = [a - b for a, b in zip(lattice.witnesses[idx].dims,
                                          lattice.witnesses[head].dims)]
            if sum(diff) == 0:
                continue
            s = king_slope(diff, theta)
            if last_slope is not None and s >= last_slope:
                continue
            if not subquotient_semistable_in_lattice(lattice, head, idx, theta):
                continue
            chain.append(idx)
            extend(chain, s)
            chain.pop()

    extend([zero], None)
    return chains


def random_rep(rng, quiver: LabeledQuiver, prime, max_dim=2, allow_zero=False):
    """Random representation satisfying the quiver's relations (rejection)."""
    while True:
        dims = [rng.randint(0, max_dim) for _ in quiver.vertices]
        if not allow_zero and sum(dims) == 0:
            continue
        mats = {}
        for a in quiver.arrows:
            si = quiver.vertex_index[a.src]
            ti = quiver.vertex_index[a.dst]
            mats[a.id] = [[rng.randrange(prime) for _ in range(dims[si])]
                          for _ in range(dims[ti])]
        try:
            return make_rep(prime, quiver, dims, mats)
        except Exception:
            continue
