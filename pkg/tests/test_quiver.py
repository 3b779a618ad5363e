import random
from fractions import Fraction

import pytest

from qsl.errors import DomainError, InputError
from qsl.quiver import (
    Arrow,
    LabeledQuiver,
    a_n_quiver,
    build_auxiliary,
    build_twisted,
    compose_paths,
    expand_labeled,
    is_acyclic,
    jordan_quiver,
    make_relation,
    random_quiver,
    rep_variety_dims,
    validate_quiver,
)


A2_SPEC = {
    "vertices": ["1", "2"],
    "arrows": [{"id": "a", "src": "1", "dst": "2", "label_dim": 1}],
    "relations": [],
}


def test_validate_a2():
    q = validate_quiver(A2_SPEC)
    assert len(q.vertices) == 2 and len(q.arrows) == 1
    assert q.is_unlabeled


def test_validate_dangling_vertex():
    bad = {"vertices": ["1"], "arrows": [{"id": "a", "src": "1", "dst": "3"}]}
    with pytest.raises(InputError) as exc:
        validate_quiver(bad)
    assert exc.value.code == "dangling-vertex"


def test_validate_duplicate_ids():
    bad = {"vertices": ["1", "1"], "arrows": []}
    with pytest.raises(InputError):
        validate_quiver(bad)
    bad = {"vertices": ["1"], "arrows": [{"id": "1", "src": "1", "dst": "1"}]}
    with pytest.raises(InputError):
        validate_quiver(bad)


def test_validate_jordan_nilpotency_relation():
    spec = {
        "vertices": ["1"],
        "arrows": [{"id": "f", "src": "1", "dst": "1"}],
        "relations": [{"kind": "plain",
                       "terms": [{"coeff": "1", "path": ["f", "f"]}]}],
    }
    q = validate_quiver(spec)
    assert len(q.relations) == 1
    (coeff, path), = q.relations[0].terms
    assert coeff == 1 and len(path) == 2


def test_relation_endpoint_mismatch():
    q = a_n_quiver(3)
    with pytest.raises(InputError) as exc:
        make_relation(q, "plain", [
            (Fraction(1), q.path(["a1"])),
            (Fraction(1), q.path(["a2"])),
        ])
    assert exc.value.code == "relation-endpoints"


def test_plain_relation_rejects_labeled_arrows():
    q = LabeledQuiver(("1", "2"), (Arrow("a", "1", "2", 3),))
    with pytest.raises(InputError) as exc:
        make_relation(q, "plain", [(Fraction(1), q.path(["a"]))])
    assert exc.value.code == "labeled-relation-shape"


def _square_quiver(h):
    return LabeledQuiver(
        ("1", "2", "3", "4"),
        (Arrow("a", "1", "2", h), Arrow("g", "2", "4", 1),
         Arrow("b", "1", "3", 1), Arrow("d", "3", "4", h)))


def test_labeled_square_accepted_and_bad_shape_rejected():
    q = _square_quiver(3)
    rel = make_relation(q, "labeled-square", [
        (Fraction(1), q.path(["a", "g"])),
        (Fraction(-1), q.path(["b", "d"])),
    ])
    assert rel.kind == "labeled-square"
    # unequal labels on the two labeled arrows -> rejected
    bad = LabeledQuiver(
        ("1", "2", "3", "4"),
        (Arrow("a", "1", "2", 3), Arrow("g", "2", "4", 1),
         Arrow("b", "1", "3", 1), Arrow("d", "3", "4", 2)))
    with pytest.raises(InputError):
        make_relation(bad, "labeled-square", [
            (Fraction(1), bad.path(["a", "g"])),
            (Fraction(-1), bad.path(["b", "d"])),
        ])


def test_compose_paths():
    q = a_n_quiver(4)
    a1, a2 = q.path(["a1"]), q.path(["a2"])
    # identity path acts trivially on both sides
    e2 = q.path([], at="2")
    p, labels = compose_paths(q, e2, a1, (), (0,))
    assert p == a1 and labels == (0,)
    p, labels = compose_paths(q, a1, q.path([], at="1"), (0,), ())
    assert p == a1
    # composable pair: first a1 then a2
    p, labels = compose_paths(q, a2, a1, (0,), (0,))
    assert p.arrows == ("a1", "a2")
    # non-composable pair is zero
    assert compose_paths(q, q.path(["a3"]), a1, (0,), (0,)) is None


def test_compose_paths_label_ordering():
    q = LabeledQuiver(("1", "2", "3"),
                      (Arrow("a", "1", "2", 2), Arrow("b", "2", "3", 3)))
    p, labels = compose_paths(q, q.path(["b"]), q.path(["a"]), (2,), (1,))
    assert p.arrows == ("a", "b")
    assert labels == (1, 2)  # application order: a's index first


def test_compose_paths_associative_property():
    rng = random.Random(5)
    q = a_n_quiver(5)
    segs = [q.path([f"a{i}"]) for i in range(1, 5)]
    for _ in range(50):
        i = rng.randint(0, 1)
        p1, p2, p3 = segs[i], segs[i + 1], segs[i + 2]
        left = compose_paths(q, compose_paths(q, p3, p2, (0,), (0,))[0], p1,
                             (0, 0), (0,))
        right = compose_paths(q, p3, compose_paths(q, p2, p1, (0,), (0,))[0],
                              (0,), (0, 0))
        assert left == right


def test_expand_labeled_parallel_arrows():
    q = LabeledQuiver(("1", "2"), (Arrow("a", "1", "2", 4),))
    ex = expand_labeled(q)
    assert len(ex.quiver.arrows) == 4
    assert all(a.label_dim == 1 for a in ex.quiver.arrows)
    assert ex.arrow_map["a"] == ("a#1", "a#2", "a#3", "a#4")


def test_expand_unlabeled_identity():
    q = a_n_quiver(3)
    ex = expand_labeled(q)
    assert ex.quiver.vertices == q.vertices
    assert ex.quiver.arrows == q.arrows


def test_expand_labeled_square_to_three_relations():
    q = _square_quiver(3)
    rel = make_relation(q, "labeled-square", [
        (Fraction(1), q.path(["a", "g"])),
        (Fraction(-1), q.path(["b", "d"])),
    ])
    q = LabeledQuiver(q.vertices, q.arrows, (rel,))
    ex = expand_labeled(q)
    assert len(ex.quiver.relations) == 3
    for k, r in enumerate(ex.quiver.relations, start=1):
        paths = sorted(p.arrows for _, p in r.terms)
        assert paths == sorted([(f"a#{k}", "g"), ("b", f"d#{k}")])


def test_expand_rep_roundtrip():
    q = LabeledQuiver(("1", "2"), (Arrow("a", "1", "2", 2), Arrow("b", "1", "2", 1)))
    ex = expand_labeled(q)
    rep = {"a": ["M0", "M1"], "b": ["K"]}
    flat = ex.push_rep(rep)
    assert flat == {"a#1": "M0", "a#2": "M1", "b": "K"}
    assert ex.pull_rep(flat) == rep


def test_build_auxiliary_counts():
    aux = build_auxiliary(3, [[1] * 3] * 3)
    assert len(aux.vertices) == 6 and len(aux.arrows) == 9
    aux = build_auxiliary(1, [[5]])
    assert len(aux.vertices) == 2 and len(aux.arrows) == 1
    with pytest.raises(DomainError):
        build_auxiliary(0, [])


def test_build_auxiliary_p1_label_dims():
    # oracle: sections of O(e) on the line have dimension e+1
    b, n, m = (1, 1), 2, 5
    dims = [[m * bl - n * bk + 1 for bl in b] for bk in b]
    assert dims == [[4, 4], [4, 4]]
    aux = build_auxiliary(2, dims)
    assert all(a.label_dim == 4 for a in aux.arrows)


def test_build_twisted_a2():
    tq = build_twisted(a_n_quiver(2), 2, [[1, 1], [1, 1]])
    assert len(tq.quiver.vertices) == 8
    assert len(tq.quiver.arrows) == 12
    assert len(tq.relations_i1) == 4
    assert len(tq.relations_i2) == 0


def test_build_twisted_jordan_relations():
    tq = build_twisted(jordan_quiver(nilpotent=True), 1, [[1]])
    assert len(tq.relations_i2) == 2  # a left and a right copy


def test_build_twisted_trivial_source():
    q = LabeledQuiver(("1",), ())
    tq = build_twisted(q, 2, [[2, 3], [0, 1]])
    assert len(tq.quiver.vertices) == 4
    assert len(tq.quiver.arrows) == 4
    assert tq.relations_i1 == ()


def test_twisted_counts_randomized():
    rng = random.Random(42)
    for _ in range(25):
        q = random_quiver(rng)
        n = rng.randint(1, 3)
        dims = [[rng.randint(0, 3) for _ in range(n)] for _ in range(n)]
        tq = build_twisted(q, n, dims)
        nv, na, ni = len(q.vertices), len(q.arrows), len(q.relations)
        assert len(tq.quiver.vertices) == 2 * n * nv
        assert len(tq.quiver.arrows) == n * n * nv + 2 * n * na
        assert len(tq.relations_i1) == n * n * na
        assert len(tq.relations_i2) == 2 * n * ni


def test_is_acyclic():
    assert is_acyclic(a_n_quiver(2))
    assert not is_acyclic(jordan_quiver())
    assert is_acyclic(build_twisted(a_n_quiver(2), 2, [[1, 1], [1, 1]]))
    assert not is_acyclic(build_twisted(jordan_quiver(), 1, [[1]]))


def test_acyclicity_preserved_by_twisting():
    rng = random.Random(123)
    for _ in range(120):
        q = random_quiver(rng)
        n = rng.randint(1, 3)
        dims = [[rng.randint(0, 2) for _ in range(n)] for _ in range(n)]
        assert is_acyclic(build_twisted(q, n, dims)) == is_acyclic(q)


def test_rep_variety_dims():
    assert rep_variety_dims(a_n_quiver(2), (1, 1)) == (1, 2)
    assert rep_variety_dims(a_n_quiver(2), (0, 0)) == (0, 0)
    q = LabeledQuiver(("1", "2"), (Arrow("a", "1", "2", 4),))
    assert rep_variety_dims(q, (2, 3))[0] == 24
    with pytest.raises(DomainError):
        rep_variety_dims(q, (1,))
