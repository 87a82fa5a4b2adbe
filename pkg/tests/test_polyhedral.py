from fractions import Fraction

import pytest

from trophodge import InputFormatError, NotAFanError, NotCodimOneError
from trophodge.polyhedral import (
    build_complex,
    compactify,
    complex_from_json,
    complex_to_json,
    recession_fan,
    star_fan,
)

F = Fraction


def faces_by_dim(cx):
    return {k: len(cx.faces_of_dim(k)) for k in range(cx.dim + 1)}


def test_recession_fan_of_fixe(fixe):
    rec = recession_fan(fixe)
    rays = sorted(f.rays[0] for f in rec.faces if f.dim == 1)
    assert rays == [(-1,), (1,)]


def test_recession_fan_of_bounded_complex():
    seg = build_complex(1, [[0], [1]], [], [([0], []), ([1], []), ([0, 1], [])])
    rec = recession_fan(seg)
    assert faces_by_dim(rec) == {0: 1}


def test_recession_fan_of_product(fixf):
    rec = recession_fan(fixf)
    assert faces_by_dim(rec) == {0: 1, 1: 4, 2: 4}


def test_recession_fan_rejects_improper_overlap():
    # Two disjoint unbounded 2-faces in parallel planes whose recession
    # cones overlap without a common face.
    bad = build_complex(
        3,
        [[0, 0, 0], [0, 0, 1]],
        [[1, 0, 0], [1, 2, 0], [1, 1, 0], [-1, 1, 0]],
        [([0], []), ([1], []),
         ([0], [0]), ([0], [1]), ([0], [0, 1]),
         ([1], [2]), ([1], [3]), ([1], [2, 3])])
    with pytest.raises(NotAFanError):
        recession_fan(bad)


def test_star_fan_at_origin_is_fan_itself(fixa):
    origin = next(f.index for f in fixa.faces if f.dim == 0)
    sf = star_fan(fixa, origin)
    assert sorted(sf.ray_vectors) == [(-1, -1), (0, 1), (1, 0)]
    assert len([c for c in sf.cones if len(c[1]) == 1]) == 3


def test_star_fan_at_interior_vertex(fixe):
    v1 = next(f.index for f in fixe.faces if f.dim == 0 and f.vertices[0][0] == 1)
    sf = star_fan(fixe, v1)
    assert sorted(sf.ray_vectors) == [(-1,), (1,)]


def test_star_fan_at_infinity_point(comp_b):
    # The point at infinity of the compactified line has no coface of its
    # own sedentarity, so its star fan is the trivial fan in rank zero.
    vp = next(f.index for f in comp_b.faces if f.dim == 0 and f.sedentarity == ((1,),))
    sf = star_fan(comp_b, vp)
    assert sf.rank == 0
    assert sf.ray_vectors == ()


def test_compactify_fixd(comp_d):
    assert len(comp_d.faces) == 5
    seds = sorted(f.sedentarity for f in comp_d.faces)
    assert seds == [(), (), (), ((-1,),), ((1,),)]
    # Euler characteristic of a closed segment
    assert len(comp_d.faces_of_dim(0)) - len(comp_d.faces_of_dim(1)) == 1


def test_compactify_fixa(comp_a):
    finite_v = [f for f in comp_a.faces if f.dim == 0 and not f.sedentarity]
    inf_v = [f for f in comp_a.faces if f.dim == 0 and f.sedentarity]
    edges = comp_a.faces_of_dim(1)
    assert (len(finite_v), len(inf_v), len(edges)) == (1, 3, 3)


def test_compactify_bounded_complex_is_itself():
    seg = build_complex(1, [[0], [1]], [], [([0], []), ([1], []), ([0, 1], [])])
    comp = compactify(seg)
    assert faces_by_dim(comp) == faces_by_dim(seg)
    assert all(f.sedentarity == () for f in comp.faces)


def test_sedentarity_zero_subcomplex_matches_input(fixe, comp_e):
    open_faces = [f for f in comp_e.faces if f.sedentarity == ()]
    assert len(open_faces) == len(fixe.faces)
    by_dim_open = {}
    for f in open_faces:
        by_dim_open[f.dim] = by_dim_open.get(f.dim, 0) + 1
    assert by_dim_open == faces_by_dim(fixe)


def test_product_poset_counts(fixd, fixf, comp_d, comp_f):
    # Convolution square of the line complex counts.
    assert faces_by_dim(fixf) == {0: 1, 1: 4, 2: 4}
    assert faces_by_dim(comp_f) == {0: 9, 1: 12, 2: 4}
    d_counts = [len(comp_d.faces_of_dim(k)) for k in (0, 1)]
    conv = {
        0: d_counts[0] ** 2,
        1: 2 * d_counts[0] * d_counts[1],
        2: d_counts[1] ** 2,
    }
    assert faces_by_dim(comp_f) == conv


def test_sign_of_segment_endpoints():
    seg = build_complex(1, [[0], [1]], [], [([0], []), ([1], []), ([0, 1], [])])
    v0 = next(f.index for f in seg.faces if f.dim == 0 and f.vertices[0][0] == 0)
    v1 = next(f.index for f in seg.faces if f.dim == 0 and f.vertices[0][0] == 1)
    e = next(f.index for f in seg.faces if f.dim == 1)
    s0, s1 = seg.sign(v0, e), seg.sign(v1, e)
    assert {s0, s1} == {1, -1}
    assert s0 * s0 == 1


def test_sign_squares_to_one(comp_f):
    for a, b in comp_f.same_sed_cover_pairs():
        assert comp_f.sign(a, b) in (1, -1)


def test_boundary_of_boundary_signs_vanish(comp_f):
    # Cellular d^2 = 0 sign identity through every (vertex, 2-face) interval.
    for q in comp_f.faces_of_dim(2):
        for v in comp_f.faces_of_dim(0):
            if (v.index, q.index) not in comp_f.order:
                continue
            total = 0
            for e in comp_f.covers_of(v.index):
                if (e, q.index) in comp_f.order:
                    total += comp_f.incidence_sign(v.index, e) * comp_f.incidence_sign(e, q.index)
            assert total == 0


def test_primitive_normal_examples(fixa, fixe):
    origin = next(f.index for f in fixa.faces if f.dim == 0)
    ray10 = next(f.index for f in fixa.faces if f.dim == 1 and f.rays[0] == (1, 0))
    assert fixa.primitive_normal(origin, ray10) == (1, 0)
    v0 = next(f.index for f in fixe.faces if f.dim == 0 and f.vertices[0][0] == 0)
    e01 = next(f.index for f in fixe.faces if f.dim == 1 and not f.rays)
    assert fixe.primitive_normal(v0, e01) == (1,)


def test_primitive_normal_quotient_case():
    # Unimodular triangle over a segment: the normal is the image of the
    # third vertex direction in the rank-one quotient.
    tri = build_complex(2, [[0, 0], [1, 0], [0, 1]], [],
                        [([0], []), ([1], []), ([2], []),
                         ([0, 1], []), ([0, 2], []), ([1, 2], []),
                         ([0, 1, 2], [])])
    seg = next(f.index for f in tri.faces
               if f.dim == 1 and all(v[1] == 0 for v in f.vertices))
    top = next(f.index for f in tri.faces if f.dim == 2)
    normal = tri.primitive_normal(seg, top)
    assert normal in ((1,), (-1,))


def test_primitive_normal_requires_codim_one(fixa):
    origin = next(f.index for f in fixa.faces if f.dim == 0)
    with pytest.raises(NotCodimOneError):
        fixa.primitive_normal(origin, origin)


def test_closure_validation_rejects_missing_face():
    with pytest.raises(InputFormatError):
        build_complex(1, [[0], [1]], [], [([0, 1], []), ([0], [])])


def test_intersection_validation_rejects_overlap():
    # Two segments crossing in their interiors.
    with pytest.raises(InputFormatError):
        build_complex(2, [[0, 0], [2, 2], [0, 2], [2, 0]], [],
                      [([0], []), ([1], []), ([2], []), ([3], []),
                       ([0, 1], []), ([2, 3], [])])


def test_json_round_trip(fixe):
    data = complex_to_json(fixe)
    back = complex_from_json(data)
    assert faces_by_dim(back) == faces_by_dim(fixe)
    assert complex_to_json(back) == data


def test_fan_json_uses_implicit_origin(fixa):
    data = complex_to_json(fixa)
    assert data["vertices"] == [["0", "0"]]
    back = complex_from_json(data)
    assert faces_by_dim(back) == faces_by_dim(fixa)
