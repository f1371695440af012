import pytest

from tautilt.algebra import Quiver, Relation, compile_bound_quiver
from tautilt.linalg import QQ


@pytest.fixture(scope="session")
def a2():
    """Linear A2 quiver 1 -> 2, no relations, over Q."""
    q = Quiver(["1", "2"], [("a", "1", "2")])
    return compile_bound_quiver(q, [], QQ)


@pytest.fixture(scope="session")
def a3():
    """Linear A3 quiver 1 -> 2 -> 3, no relations, over Q."""
    q = Quiver(["1", "2", "3"], [("a", "1", "2"), ("b", "2", "3")])
    return compile_bound_quiver(q, [], QQ)


@pytest.fixture(scope="session")
def cyc3():
    """Oriented 3-cycle with all length-two paths killed.

    Arrows a3: 1 -> 2, a1: 2 -> 3, a2: 3 -> 1 and relations
    a1*a2 = a2*a3 = a3*a1 = 0.  Self-injective Nakayama, dimension 6.
    """
    q = Quiver(["1", "2", "3"], [("a3", "1", "2"), ("a1", "2", "3"), ("a2", "3", "1")])
    rels = [
        Relation(q, [(1, ("a1", "a2"))]),
        Relation(q, [(1, ("a2", "a3"))]),
        Relation(q, [(1, ("a3", "a1"))]),
    ]
    return compile_bound_quiver(q, rels, QQ)


@pytest.fixture(scope="session")
def point():
    """One vertex, no arrows: the ground field as an algebra."""
    return compile_bound_quiver(Quiver(["1"], []), [], QQ)
