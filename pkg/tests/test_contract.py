import pytest

from operadic.cli import parse
from operadic.contract import FaceError, components, face, interchange_failures, shapes
from operadic.omega import tree2


def tm(text):
    return parse("tm", text)


def test_faces_of_a_single_white():
    x = tm("tm{tree: t2:[1];colors=[1];out=1, lat: (w1 *)}")
    assert face(x, 1, 0) == tm("tm{tree: t2:[1];colors=[0];out=1, lat: (b * (w1))}")
    assert face(x, 1, 1) == tm("tm{tree: t2:[1];colors=[0];out=1, lat: (b (w1) *)}")


def test_face_merges_into_black_parent():
    x = tm("tm{tree: t2:[1,1];colors=[1,0];out=1, lat: (b (w1 *) (w2))}")
    assert face(x, 1, 0).tree == parse("lat", "(b * (w1) (w2))")
    assert face(x, 1, 1).tree == parse("lat", "(b (w1) * (w2))")


def test_face_needs_color_one():
    x = tm("tm{tree: t2:[1];colors=[0];out=0, lat: (w1)}")
    with pytest.raises(FaceError):
        face(x, 1, 0)


def test_small_shapes_have_one_class():
    for T in shapes(2, 2):
        for n in range(3):
            classes, elems, _ = components(T, n)
            assert classes == 1 and elems > 0, (T, n)


def test_no_whites_is_a_single_element():
    for n in range(4):
        assert components(tree2([], n1=n), 2) == (1, 1, 0)


def test_uncontracted_faces_split_classes():
    classes, elems, edges = components(tree2([1]), 2, contract=False)
    assert edges > 0 and classes > 1


def test_faces_commute():
    bad, checked = interchange_failures(tree2([1, 1]), 2)
    assert checked > 0 and not bad
    bad, checked = interchange_failures(tree2([2, 2]), 1)
    assert checked > 0 and not bad
