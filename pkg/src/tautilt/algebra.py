"""Bound quivers and finite-dimensional basic algebras over an exact field.

An algebra is stored by structure constants on a Peirce-adapted basis: the
first n basis elements are the primitive orthogonal idempotents e_1..e_n (one
per vertex), every later basis element lies in the radical and carries a
Peirce pair (i, j), meaning e_i * b * e_j = b.  Paths compose left to right:
for arrows p: u -> v and q: v -> w the product p*q is a path u -> w.
"""

from . import linalg
from .errors import (
    MalformedRelation,
    NotBasic,
    NotFiniteDimensional,
    SearchBudgetExceeded,
    TautiltError,
)

PATH_CAP = 1500


class Quiver:
    """Finite quiver with labelled vertices and arrows."""

    def __init__(self, vertices, arrows):
        """Args:
        vertices: list of distinct vertex labels.
        arrows: list of (label, source, target) triples using vertex labels.
        """
        self.vertices = list(vertices)
        if len(set(self.vertices)) != len(self.vertices):
            raise TautiltError("duplicate vertex labels")
        self.vertex_index = {v: i for i, v in enumerate(self.vertices)}
        self.arrows = []
        seen = set()
        for label, src, tgt in arrows:
            if label in seen:
                raise TautiltError(f"duplicate arrow label {label!r}")
            if src not in self.vertex_index or tgt not in self.vertex_index:
                raise TautiltError(f"arrow {label!r} uses unknown vertex")
            seen.add(label)
            self.arrows.append((label, src, tgt))
        self.arrow_index = {a[0]: i for i, a in enumerate(self.arrows)}

    def opposite(self):
        return Quiver(self.vertices, [(lbl, tgt, src) for lbl, src, tgt in self.arrows])


class Relation:
    """Linear combination of parallel paths of length >= 2 in a quiver."""

    def __init__(self, quiver, terms):
        """Args:
        terms: list of (coefficient, path) with each path a sequence of
            arrow labels, composed left to right.
        """
        if not terms:
            raise MalformedRelation("empty relation")
        self.terms = []
        endpoints = None
        for coeff, path in terms:
            path = tuple(path)
            if len(path) < 2:
                raise MalformedRelation(f"path {path} has length < 2")
            for lbl in path:
                if lbl not in quiver.arrow_index:
                    raise MalformedRelation(f"unknown arrow {lbl!r}")
            for first, second in zip(path, path[1:]):
                if quiver.arrows[quiver.arrow_index[first]][2] != (
                    quiver.arrows[quiver.arrow_index[second]][1]
                ):
                    raise MalformedRelation(f"path {path} is not composable")
            src = quiver.arrows[quiver.arrow_index[path[0]]][1]
            tgt = quiver.arrows[quiver.arrow_index[path[-1]]][2]
            if endpoints is None:
                endpoints = (src, tgt)
            elif endpoints != (src, tgt):
                raise MalformedRelation("relation mixes non-parallel paths")
            self.terms.append((coeff, path))
        self.source, self.target = endpoints


class AlgebraElement:
    """Element of a BasicAlgebra, stored as dense coefficients over its basis."""

    __slots__ = ("algebra", "coeffs")

    def __init__(self, algebra, coeffs):
        self.algebra = algebra
        self.coeffs = tuple(coeffs)

    def __add__(self, other):
        return AlgebraElement(self.algebra, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other):
        return AlgebraElement(self.algebra, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self):
        return AlgebraElement(self.algebra, [-a for a in self.coeffs])

    def scale(self, c):
        return AlgebraElement(self.algebra, [c * a for a in self.coeffs])

    def __mul__(self, other):
        alg = self.algebra
        out = [alg.field.zero] * alg.dim
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                if not b:
                    continue
                for k, c in alg.mult.get((i, j), ()):
                    out[k] = out[k] + a * b * c
        return AlgebraElement(alg, out)

    def is_zero(self):
        return not any(self.coeffs)

    def __bool__(self):
        return any(self.coeffs)

    def __eq__(self, other):
        return (
            isinstance(other, AlgebraElement)
            and self.algebra is other.algebra
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash(self.coeffs)

    def support(self):
        return [i for i, c in enumerate(self.coeffs) if c]

    def peirce_type(self):
        """The common Peirce pair of the support, or None if mixed or zero."""
        types = {self.algebra.peirce[i] for i in self.support()}
        if len(types) == 1:
            return next(iter(types))
        return None

    def peirce_component(self, i, j):
        coeffs = [
            c if self.algebra.peirce[k] == (i, j) else self.algebra.field.zero
            for k, c in enumerate(self.coeffs)
        ]
        return AlgebraElement(self.algebra, coeffs)

    def scalar_part(self, vertex):
        """Coefficient of the idempotent e_vertex."""
        return self.coeffs[vertex]

    def __repr__(self):
        alg = self.algebra
        bits = []
        for i, c in enumerate(self.coeffs):
            if c:
                bits.append(alg.names[i] if c == alg.field.one else f"({c})*{alg.names[i]}")
        return " + ".join(bits) if bits else "0"


class BasicAlgebra:
    """Finite-dimensional basic algebra with a Peirce-adapted basis."""

    def __init__(self, field, vertex_labels, names, peirce, mult, words=None, arrows=None):
        """Args:
        field: ground Field.
        vertex_labels: display labels, one per idempotent.
        names: display names of basis elements; names[i] for i < n are the
            idempotents in vertex order.
        peirce: Peirce pair (i, j) of each basis element, vertex indices.
        mult: dict (i, j) -> tuple of (k, coeff) giving basis products.
        words: optional arrow-index word per basis element (quiver algebras).
        arrows: optional list of (label, src_index, tgt_index).
        """
        self.field = field
        self.vertex_labels = list(vertex_labels)
        self.n = len(self.vertex_labels)
        self.names = list(names)
        self.dim = len(self.names)
        self.peirce = list(peirce)
        self.mult = mult
        self.words = words
        self.arrows = arrows
        self.cache = {}
        for i in range(self.n):
            if self.peirce[i] != (i, i):
                raise TautiltError("basis is not adapted: idempotents must come first")

    # -- element constructors -------------------------------------------

    def element(self, coeffs):
        return AlgebraElement(self, [self.field(c) if not _is_field_elt(c) else c for c in coeffs])

    def zero_element(self):
        return AlgebraElement(self, [self.field.zero] * self.dim)

    def basis_element(self, k):
        coeffs = [self.field.zero] * self.dim
        coeffs[k] = self.field.one
        return AlgebraElement(self, coeffs)

    def e(self, i):
        return self.basis_element(i)

    def one(self):
        coeffs = [self.field.zero] * self.dim
        for i in range(self.n):
            coeffs[i] = self.field.one
        return AlgebraElement(self, coeffs)

    def path_element(self, arrow_labels):
        """Residue of a path given by arrow labels (left-to-right order)."""
        if self.arrows is None:
            raise TautiltError("algebra was not built from a quiver")
        index = {lbl: k for k, (lbl, _, _) in enumerate(self.arrows)}
        elt = None
        for lbl in arrow_labels:
            if lbl not in index:
                raise TautiltError(f"unknown arrow {lbl!r}")
            step = self._arrow_element(index[lbl])
            elt = step if elt is None else elt * step
        if elt is None:
            raise TautiltError("empty path needs a vertex; use e(i)")
        return elt

    def _arrow_element(self, arrow_pos):
        key = ("arrow_elt", arrow_pos)
        if key not in self.cache:
            for k, w in enumerate(self.words or []):
                if w is not None and w == (arrow_pos,):
                    self.cache[key] = self.basis_element(k)
                    break
            else:
                raise TautiltError("arrow is not a basis element")
        return self.cache[key]

    # -- structure ---------------------------------------------------------

    def peirce_basis(self, i, j):
        """Basis indices with Peirce pair (i, j)."""
        key = ("peirce", i, j)
        if key not in self.cache:
            self.cache[key] = tuple(k for k, p in enumerate(self.peirce) if p == (i, j))
        return self.cache[key]

    def peirce_dim(self, i, j):
        return len(self.peirce_basis(i, j))

    def radical_indices(self):
        return range(self.n, self.dim)

    def radical_nilpotency(self):
        """Smallest m with rad^m = 0; raises NotBasic if the span never dies."""
        key = "rad_nilpotency"
        if key not in self.cache:
            span = [self._basis_vec(k) for k in self.radical_indices()]
            m = 1
            while span:
                if m > self.dim + 1:
                    raise NotBasic("radical span is not nilpotent")
                nxt = []
                for vec in span:
                    for k in self.radical_indices():
                        prod = AlgebraElement(self, vec) * self.basis_element(k)
                        if prod:
                            nxt.append(list(prod.coeffs))
                span = linalg.row_space_basis(nxt, self.field) if nxt else []
                m += 1
            self.cache[key] = m
        return self.cache[key]

    def _basis_vec(self, k):
        vec = [self.field.zero] * self.dim
        vec[k] = self.field.one
        return vec

    def validate(self):
        """Checks unit laws, Peirce consistency, associativity, basicness."""
        zero, one = self.field.zero, self.field.one
        for (i, j), entries in self.mult.items():
            pi, pj = self.peirce[i], self.peirce[j]
            if pi[1] != pj[0] and entries:
                raise TautiltError(f"product of non-composable basis elements {i},{j} is nonzero")
            for k, c in entries:
                if not c:
                    raise TautiltError("explicit zero stored in structure constants")
                if self.peirce[k] != (pi[0], pj[1]):
                    raise TautiltError(f"product {i}*{j} leaves its Peirce block")
                if i >= self.n or j >= self.n:
                    if k < self.n:
                        raise NotBasic("radical product has an idempotent component")
        unit = self.one()
        for k in range(self.dim):
            b = self.basis_element(k)
            if unit * b != b or b * unit != b:
                raise TautiltError("sum of idempotents is not a unit")
        for i in range(self.dim):
            bi = self.basis_element(i)
            for j in range(self.dim):
                bij = bi * self.basis_element(j)
                for k in range(self.dim):
                    left = bij * self.basis_element(k)
                    right = bi * (self.basis_element(j) * self.basis_element(k))
                    if left != right:
                        raise TautiltError(
                            f"associativity fails on basis triple ({i},{j},{k})"
                        )
        self.radical_nilpotency()
        return True

    def opposite(self):
        """The opposite algebra on the same basis with reversed products."""
        if "opposite" not in self.cache:
            mult_op = {}
            for (i, j), entries in self.mult.items():
                mult_op[(j, i)] = entries
            words = None
            arrows = None
            if self.arrows is not None:
                arrows = [(lbl, tgt, src) for lbl, src, tgt in self.arrows]
                words = [tuple(reversed(w)) if w is not None else None for w in self.words]
            op = BasicAlgebra(
                self.field,
                self.vertex_labels,
                self.names,
                [(j, i) for (i, j) in self.peirce],
                mult_op,
                words=words,
                arrows=arrows,
            )
            op.cache["opposite"] = self
            self.cache["opposite"] = op
        return self.cache["opposite"]

    def __repr__(self):
        return f"BasicAlgebra(n={self.n}, dim={self.dim}, field={self.field})"


def _is_field_elt(x):
    from fractions import Fraction

    return isinstance(x, (Fraction, linalg.PrimeFieldElement))


def local_inverse(x, vertex):
    """Inverse of x in e_v A e_v assuming x = c*e_v + nilpotent with c != 0.

    Uses the geometric series (e + n)^-1 = e - n + n^2 - ...
    """
    alg = x.algebra
    c = x.scalar_part(vertex)
    if not c:
        raise TautiltError("element has no invertible scalar part")
    n = x.scale(alg.field.one / c) - alg.e(vertex)
    inv = alg.e(vertex)
    power = alg.e(vertex)
    sign = alg.field.one
    for _ in range(alg.dim + 1):
        power = power * n
        if not power:
            break
        sign = -sign
        inv = inv + power.scale(sign)
    if not (x * inv.scale(alg.field.one / c) == alg.e(vertex)):
        raise TautiltError("element is not invertible in its corner")
    return inv.scale(alg.field.one / c)


def compile_bound_quiver(quiver, relations, field, length_bound=12):
    """Quotient of the path algebra by the two-sided ideal of the relations.

    Paths are enumerated up to length_bound; relation instances are the
    relations pre- and post-composed with all paths that fit inside the
    window, eliminated by row echelon with longer paths preferred as pivots.
    Finite-dimensionality is certified by stabilization: every path of length
    exactly length_bound must reduce to shorter ones.

    Raises:
        NotFiniteDimensional: if reduction leaves a path of maximal length
            alive (raise the bound if the algebra is genuinely small).
        MalformedRelation: if a relation term does not fit in the window.
    """
    if length_bound < 2:
        raise TautiltError("length_bound must be at least 2")
    nverts = len(quiver.vertices)
    arrows = quiver.arrows
    arrow_src = [quiver.vertex_index[a[1]] for a in arrows]
    arrow_tgt = [quiver.vertex_index[a[2]] for a in arrows]

    # all paths up to the bound: (source vertex, word of arrow indices)
    paths = [[(v, ())] for v in range(nverts)]
    by_length = [[(v, ()) for v in range(nverts)]]
    for length in range(1, length_bound + 1):
        layer = []
        for src, word in by_length[-1]:
            end = arrow_tgt[word[-1]] if word else src
            for a in range(len(arrows)):
                if arrow_src[a] == end:
                    layer.append((src, word + (a,)))
        by_length.append(layer)
        if sum(len(lv) for lv in by_length) > PATH_CAP:
            raise NotFiniteDimensional(
                f"more than {PATH_CAP} paths below length {length_bound}; "
                "the quiver is too wild for this tool or the bound is too large"
            )
    all_paths = [p for layer in by_length for p in layer]
    all_paths.sort(key=lambda p: (len(p[1]), p[1]))
    path_pos = {p: i for i, p in enumerate(all_paths)}
    npaths = len(all_paths)

    def path_endpoints(p):
        src, word = p
        return src, (arrow_tgt[word[-1]] if word else src)

    # relation instances inside the window, as vectors over all paths
    rel_rows = []
    for rel in relations:
        max_len = max(len(path) for _, path in rel.terms)
        if max_len > length_bound:
            raise MalformedRelation("relation term longer than length bound")
        rsrc = quiver.vertex_index[rel.source]
        rtgt = quiver.vertex_index[rel.target]
        term_words = [
            (field(c) if not _is_field_elt(c) else c, tuple(quiver.arrow_index[l] for l in path))
            for c, path in rel.terms
        ]
        for p in all_paths:
            psrc, pend = path_endpoints(p)
            if pend != rsrc:
                continue
            for q in all_paths:
                qsrc, qend = path_endpoints(q)
                if qsrc != rtgt:
                    continue
                if len(p[1]) + max_len + len(q[1]) > length_bound:
                    continue
                row = [field.zero] * npaths
                for coeff, word in term_words:
                    full = (psrc, p[1] + word + q[1])
                    row[path_pos[full]] = row[path_pos[full]] + coeff
                if any(row):
                    rel_rows.append(row)

    # eliminate with longest paths as pivots: reverse the column order
    rev_rows = [list(reversed(row)) for row in rel_rows]
    reduced, pivots = linalg.rref(rev_rows, field) if rev_rows else ([], [])
    pivot_paths = {npaths - 1 - c for c in pivots}
    basis_positions = [i for i in range(npaths) if i not in pivot_paths]

    expansions = {}
    for r, c in enumerate(pivots):
        pos = npaths - 1 - c
        expansion = {}
        for c2 in range(c + 1, npaths):
            val = reduced[r][c2]
            if val:
                expansion[npaths - 1 - c2] = -val
        expansions[pos] = expansion

    for pos in basis_positions:
        if len(all_paths[pos][1]) == length_bound:
            raise NotFiniteDimensional(
                f"path of length {length_bound} survives reduction; "
                "the algebra is infinite-dimensional or the bound is too small"
            )

    basis_paths = [all_paths[pos] for pos in basis_positions]
    basis_index = {p: k for k, p in enumerate(basis_paths)}
    dim = len(basis_paths)

    def reduce_position(pos):
        """Residue of a path position as {basis index: coeff}."""
        if pos in expansions:
            out = {}
            for pos2, c in expansions[pos].items():
                for k, c2 in reduce_position(pos2).items():
                    out[k] = out.get(k, field.zero) + c * c2
            return {k: v for k, v in out.items() if v}
        return {basis_index[all_paths[pos]]: field.one}

    # one-arrow extension table drives all products
    arrow_step = {}
    for k, (src, word) in enumerate(basis_paths):
        end = arrow_tgt[word[-1]] if word else src
        for a in range(len(arrows)):
            if arrow_src[a] != end:
                continue
            full = (src, word + (a,))
            arrow_step[(k, a)] = reduce_position(path_pos[full])

    mult = {}
    for i, pi in enumerate(basis_paths):
        for j, pj in enumerate(basis_paths):
            isrc, iend = path_endpoints(pi)
            jsrc, _ = path_endpoints(pj)
            if iend != jsrc:
                continue
            acc = {i: field.one}
            for a in pj[1]:
                nxt = {}
                for k, c in acc.items():
                    for k2, c2 in arrow_step.get((k, a), {}).items():
                        nxt[k2] = nxt.get(k2, field.zero) + c * c2
                acc = {k: v for k, v in nxt.items() if v}
            if acc:
                mult[(i, j)] = tuple(sorted(acc.items()))

    names = []
    peirce = []
    words = []
    for src, word in basis_paths:
        end = arrow_tgt[word[-1]] if word else src
        peirce.append((src, end))
        words.append(word)
        if word:
            names.append("*".join(arrows[a][0] for a in word))
        else:
            names.append(f"e_{quiver.vertices[src]}")

    algebra = BasicAlgebra(
        field,
        quiver.vertices,
        names,
        peirce,
        mult,
        words=words,
        arrows=[(lbl, quiver.vertex_index[s], quiver.vertex_index[t]) for lbl, s, t in arrows],
    )
    algebra.validate()
    return algebra


def find_vertex_matchings(a, b):
    """Vertex bijections preserving all Peirce block dimensions."""
    if a.n != b.n or a.dim != b.dim:
        return []
    import itertools

    out = []
    for perm in itertools.permutations(range(b.n)):
        if all(
            a.peirce_dim(i, j) == b.peirce_dim(perm[i], perm[j])
            for i in range(a.n)
            for j in range(a.n)
        ):
            out.append(perm)
    return out


def is_isomorphic_algebra(a, b):
    """Isomorphism test adequate for desk-scale algebras.

    Complete when both radicals square to zero (Peirce dimensions determine
    the algebra), and when all radical Peirce blocks are at most one
    dimensional.  Anything richer raises SearchBudgetExceeded rather than
    guessing.
    """
    if a.field != b.field:
        return False
    matchings = find_vertex_matchings(a, b)
    if not matchings:
        return False

    def rad_square_zero(alg):
        for i in alg.radical_indices():
            for j in alg.radical_indices():
                if alg.mult.get((i, j)):
                    return False
        return True

    if rad_square_zero(a) and rad_square_zero(b):
        return True
    if rad_square_zero(a) != rad_square_zero(b):
        return False
    small_blocks = all(
        a.peirce_dim(i, j) <= (1 if i != j else 2) for i in range(a.n) for j in range(a.n)
    )
    if not small_blocks:
        raise SearchBudgetExceeded("algebra isomorphism test beyond desk scale")
    for perm in matchings:
        if _match_structure_constants(a, b, perm):
            return True
    return False


def _match_structure_constants(a, b, perm):
    """Try to rescale one-dimensional radical blocks to align products."""
    map_idx = {}
    for i in range(a.n):
        map_idx[i] = perm[i]
    for k in a.radical_indices():
        i, j = a.peirce[k]
        cands = [m for m in b.radical_indices() if b.peirce[m] == (perm[i], perm[j])]
        if len(cands) != 1:
            return False
        map_idx[k] = cands[0]
    # scales mu_k with mu_i*mu_j*c_b = c_a patterns; try all-ones first
    for k1 in range(a.dim):
        for k2 in range(a.dim):
            prods_a = dict(a.mult.get((k1, k2), ()))
            prods_b = dict(b.mult.get((map_idx[k1], map_idx[k2]), ()))
            remapped = {map_idx[k]: c for k, c in prods_a.items()}
            if remapped != prods_b:
                return False
    return True
