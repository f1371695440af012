"""Workspace parsing, validation errors, and serialization round trips."""

import pytest

from tautilt import modules as md
from tautilt import tauops as to
from tautilt import workspace as wk
from tautilt.errors import InvalidRepresentation, ParseError
from tautilt.linalg import QQ

CYC3 = """
# three-cycle with radical square zero
field Q
vertex 1 2 3
arrow a3 1 2
arrow a1 2 3
arrow a2 3 1
relation a1*a2
relation a2*a3
relation a3*a1

module Zero
dim 0 0 0

pair PairP1 : M = P1 ; P = 0
pair PairS3 : M = S3 ; P = P1 P2
pair Top : M = P1 P2 P3 ; P = 0
pair Bottom : M = 0 ; P = P1 P2 P3

complex C1
deg -1 0 1 0
deg 0 1 0 0
diff [[a3]]
"""

A2 = "vertex 1 2\narrow a 1 2\n"


def test_parse_cyc3_workspace():
    ws = wk.parse_workspace(CYC3)
    assert ws.algebra.dim == 6
    assert ws.algebra.n == 3
    assert ws.algebra.field == QQ
    assert sorted(ws.pairs) == ["Bottom", "PairP1", "PairS3", "Top"]
    assert md.describe_pair(ws.pairs["PairS3"]) == "(S3 | P1+P2)"
    assert ws.modules["Zero"].is_zero()
    # built-ins registered in vertex order
    for i in range(3):
        assert md.is_isomorphic(ws.modules[f"P{i + 1}"], md.projective(ws.algebra, i))
        assert md.is_isomorphic(ws.modules[f"S{i + 1}"], md.simple(ws.algebra, i))
    c1 = ws.complexes["C1"]
    assert c1.terms == {-1: [1], 0: [0]}


def test_parse_module_with_maps():
    ws = wk.parse_workspace(A2 + "module X\ndim 1 1\nmap a [[1]]")
    assert md.is_isomorphic(ws.modules["X"], ws.modules["P1"])


def test_multiline_matrix():
    text = A2 + "module W\ndim 2 2\nmap a [[1,0],\n       [0,1]]"
    ws = wk.parse_workspace(text)
    assert ws.modules["W"].dims == (2, 2)


def test_prime_field_and_coefficients():
    text = (
        "field F 5\nvertex 1 2 3\narrow a 1 2\narrow b 2 3\narrow c 1 2\n"
        "relation a*b - 2*c*b\n"
    )
    ws = wk.parse_workspace(text)
    assert ws.algebra.field.char == 5
    assert ws.algebra.dim == 7


def test_fraction_scalar_in_map():
    ws = wk.parse_workspace(A2 + "module X\ndim 1 1\nmap a [[1/2]]")
    k = next(iter(ws.modules["X"].mats))
    assert str(ws.modules["X"].mats[k][0][0]) == "1/2"


def test_comments_and_blanks():
    ws = wk.parse_workspace("# header\n\nvertex 1   # trailing\n\n# done\n")
    assert ws.algebra.n == 1
    assert ws.algebra.dim == 1


def test_pair_sides_may_be_empty():
    ws = wk.parse_workspace(A2 + "pair B : M = 0 ; P = P1 P2")
    assert ws.pairs["B"].m.is_zero()
    assert ws.pairs["B"].size() == 2


parse_failures = [
    ("wrong shape", "module Y\ndim 1 1\nmap a [[1],[2]]", "must be 1 x 1"),
    ("unknown arrow", "module Y\ndim 1 1\nmap b [[1]]", "unknown arrow"),
    ("map before dim", "module Y\nmap a [[1]]", "before the dim"),
    ("dim twice", "module Y\ndim 1 1\ndim 1 1", "twice"),
    ("dim count", "module Y\ndim 1", "needs 2"),
    ("taken name", "module P1\ndim 1 1", "already taken"),
    ("late directive", "module Y\ndim 1 1\nvertex 3", "must precede"),
    ("unknown name in pair", "pair Z : M = QQQ ; P = 0", "unknown module"),
    ("nonprojective P", "pair Z : M = 0 ; P = S1", "not projective"),
    ("pair grammar", "pair Z = P1", "pair needs"),
    ("unknown directive", "frob 1 2", "unknown directive"),
    ("bad field", "field R", "field must be"),
    ("bad bound", "bound 1", "bound must be"),
    ("scalar element", "complex C\ndeg -1 1 0\ndeg 0 1 0\ndiff [[2]]", "scalar alone"),
    ("diff shape", "complex C\ndeg -1 1 0\ndeg 0 1 0\ndiff [[a,a]]", "must be 1 x 1"),
    ("deg count", "complex C\ndeg -1 1", "multiplicities"),
]


@pytest.mark.parametrize("label,frag,needle", parse_failures)
def test_parse_errors(label, frag, needle):
    with pytest.raises(ParseError) as err:
        wk.parse_workspace(A2 + frag)
    assert needle in str(err.value)
    assert "line" in str(err.value)


def test_parse_error_line_number():
    with pytest.raises(ParseError) as err:
        wk.parse_workspace("vertex 1 2\narrow a 1 2\nmodule Y\ndim 1 1\nmap a [[7],[9]]")
    assert str(err.value).startswith("line 5:")


def test_field_twice():
    with pytest.raises(ParseError):
        wk.parse_workspace("field Q\nfield Q\nvertex 1")
    with pytest.raises(ParseError):
        wk.parse_workspace("vertex 1\nvertex 2")


def test_unbalanced_eof():
    with pytest.raises(ParseError):
        wk.parse_workspace(A2 + "module Y\ndim 1 1\nmap a [[1")


def test_invalid_action_surfaces():
    # a3*a1 = 0 in the algebra but these matrices compose to something nonzero
    text = (
        "vertex 1 2\narrow a 1 2\narrow b 2 1\nrelation a*b\n"
        "module Y\ndim 1 1\nmap a [[1]]\nmap b [[1]]"
    )
    with pytest.raises(InvalidRepresentation):
        wk.parse_workspace(text)


def test_module_round_trip():
    ws = wk.parse_workspace(CYC3)
    x = md.ar_translate(md.simple(ws.algebra, 2))
    text = CYC3 + "\n" + wk.module_block("T", x)
    again = wk.parse_workspace(text)
    assert md.is_isomorphic(again.modules["T"], x)


def test_pair_round_trip():
    ws = wk.parse_workspace(CYC3)
    got = to.left_bongartz(ws.pairs["PairP1"], ws.pairs["PairS3"])
    text = CYC3 + "\n" + wk.pair_block("Out", got)
    again = wk.parse_workspace(text)
    assert again.pairs["Out"].fingerprint() == got.fingerprint()


def test_pair_round_trip_with_shifts():
    ws = wk.parse_workspace(CYC3)
    low = to.left_bongartz(ws.pairs["PairP1"], ws.pairs["Bottom"])
    assert md.describe_pair(low) == "(P1+S1 | P3)"
    text = CYC3 + "\n" + wk.pair_block("Low", low)
    again = wk.parse_workspace(text)
    assert again.pairs["Low"].fingerprint() == low.fingerprint()


def test_load_workspace(tmp_path):
    f = tmp_path / "ws.alg"
    f.write_text(CYC3, encoding="utf-8")
    ws = wk.load_workspace(str(f))
    assert ws.algebra.dim == 6
