"""Exchange graphs, green sequences, and reduction at a rigid pair.

The graph walker enumerates every basic support tilting pair of a
tau-tilting-finite algebra together with the left-mutation order.  On top
of it sit maximal green sequence search, reduction of the ambient algebra
at a rigid pair (endomorphism algebra modulo the trace ideal), transport
of green sequences through the reduction, and the verification sweeps
used by the command line driver.
"""

from collections import deque

from . import linalg, modules, tauops, twoterm
from .errors import (
    CertificateFailure,
    IncompleteGraph,
    MatchFailure,
    NotBasic,
    NotInWide,
    PreconditionViolated,
    TautiltError,
)


# -- the exchange graph -------------------------------------------------------


class ExchangeGraph:
    """Directed graph of basic support tilting pairs under left mutation.

    Nodes are keyed by canonical fingerprint (sorted multiset of summand
    g-vectors with dimension data) and stored in discovery order.  Every
    edge (source, target, slot) points from the larger torsion class to
    the smaller one; slot is the g-sorted summand index exchanged on the
    source side.
    """

    def __init__(self, algebra, nodes, edges, budget, complete, seed=0):
        self.algebra = algebra
        self.nodes = nodes
        self.edges = edges
        self.budget = budget
        self.complete = complete
        self.seed = seed
        self._edge_set = None
        self._up = None
        self._index = None

    def __len__(self):
        return len(self.nodes)

    def node_list(self):
        return list(self.nodes.values())

    def node_index(self, fp):
        if self._index is None:
            self._index = {f: k for k, f in enumerate(self.nodes)}
        return self._index[fp]

    def edge_set(self):
        if self._edge_set is None:
            self._edge_set = {(s, t) for s, t, _ in self.edges}
        return self._edge_set

    def up_neighbours(self, fp):
        """Fingerprints covering fp (sources of edges into fp)."""
        if self._up is None:
            up = {f: [] for f in self.nodes}
            for s, t, _ in self.edges:
                up[t].append(s)
            for f in up:
                up[f].sort(key=self.node_index)
            self._up = up
        return self._up[fp]

    def incident_count(self, fp):
        return sum(1 for s, t, _ in self.edges if s == fp or t == fp)


def _summand_token(kind, rep):
    # mirror of TauPair.summand_fingerprints for a single slot
    if kind == "m":
        return ("mod", modules.g_vector(rep), rep.dims)
    v = modules._projective_vertex(rep)
    n = rep.algebra.n
    return ("shift", tuple(-1 if w == v else 0 for w in range(n)), (0,) * n)


def build_exchange_graph(algebra, budget=10000, seed=0):
    """Breadth-first mutation closure starting from the free pair.

    Hitting the node budget returns the partial graph with the complete
    flag unset; no exception is raised.
    """
    if budget <= 0:
        raise PreconditionViolated("graph budget must be positive")
    top = tauops.free_pair(algebra)
    nodes = {top.fingerprint(): top}
    edges = []
    queue = deque([top])
    complete = True
    while queue:
        pair = queue.popleft()
        src_fp = pair.fingerprint()
        for slot in range(len(tauops.pair_summand_list(pair))):
            neighbour, direction = tauops.mutate_pair(pair, slot, seed=seed)
            fp = neighbour.fingerprint()
            if fp not in nodes:
                if len(nodes) >= budget:
                    complete = False
                    continue
                nodes[fp] = neighbour
                queue.append(neighbour)
            if direction == "left":
                edges.append((src_fp, fp, slot))
    graph = ExchangeGraph(algebra, nodes, edges, budget, complete, seed)
    if complete:
        _certify_graph(graph)
    return graph


def _certify_graph(graph):
    """Structural invariants of a complete graph; raises on violation."""
    alg = graph.algebra
    n = alg.n
    incoming = {fp: 0 for fp in graph.nodes}
    outgoing = {fp: 0 for fp in graph.nodes}
    for s, t, _ in graph.edges:
        outgoing[s] += 1
        incoming[t] += 1
    for fp in graph.nodes:
        if incoming[fp] + outgoing[fp] != n:
            raise CertificateFailure("a node does not have exactly n incident edges")
    sources = [fp for fp in graph.nodes if incoming[fp] == 0]
    sinks = [fp for fp in graph.nodes if outgoing[fp] == 0]
    top = tauops.free_pair(alg).fingerprint()
    bottom = tauops.shifted_pair(alg).fingerprint()
    if sources != [top] or sinks != [bottom]:
        raise CertificateFailure("graph extremes are not the free and shifted pairs")


def maximal_green_sequences(graph, target, seed=0):
    """All maximal chains of left-mutation edges from the shifted pair up
    to the target, each returned as an ascending list of pairs.

    The chain for the shifted pair itself is the single trivial chain.
    """
    if not graph.complete:
        raise IncompleteGraph("green sequence search needs a complete graph")
    tfp = target.fingerprint()
    if tfp not in graph.nodes:
        raise MatchFailure("target pair is not a node of the graph")
    bottom = tauops.shifted_pair(graph.algebra).fingerprint()
    found = []
    stack = [(bottom, (bottom,))]
    while stack:
        cur, path = stack.pop()
        if cur == tfp:
            found.append(path)
            continue
        for nxt in reversed(graph.up_neighbours(cur)):
            stack.append((nxt, path + (nxt,)))
    found.sort(key=lambda p: (len(p), tuple(graph.node_index(f) for f in p)))
    return [[graph.nodes[fp] for fp in path] for path in found]


def graph_dot(graph, bricks=True, seed=0):
    """DOT rendering; node labels carry summand names and the g-matrix,
    edge labels the dimension vector of the exchange brick."""
    ids = {fp: f"n{k}" for k, fp in enumerate(graph.nodes)}
    lines = ["digraph exchange {"]
    for fp, pair in graph.nodes.items():
        rows = tauops.pair_summand_list(pair)
        gmat = ";".join(
            "(" + ",".join(str(c) for c in tauops.summand_g_vector(k, r)) + ")"
            for k, r in rows
        )
        label = f"{modules.describe_pair(pair)}\\ng=[{gmat}]"
        lines.append(f'  {ids[fp]} [label="{label}"];')
    for s, t, slot in graph.edges:
        if bricks:
            d = tauops.brick_label(graph.nodes[s], graph.nodes[t], seed)
            dims = ",".join(str(x) for x in d.dims)
            lines.append(f'  {ids[s]} -> {ids[t]} [label="({dims})"];')
        else:
            lines.append(f"  {ids[s]} -> {ids[t]};")
    lines.append("}")
    return "\n".join(lines) + "\n"


# -- reduction at a rigid pair --------------------------------------------------


def _map_vec(f):
    return [x for m in f.mats for row in m for x in row]


def _hom_width(src, tgt):
    return sum(src.dims[v] * tgt.dims[v] for v in range(src.algebra.n))


def _local_scalar(f):
    """Residue-field scalar of an endomorphism of an indecomposable."""
    x = f.source
    field = x.field
    v = next(v for v in range(x.algebra.n) if x.dims[v])
    ident = modules.identity_map(x)
    for c in linalg.rational_roots(linalg.charpoly(f.mats[v], field), field):
        if (f - ident.scale(c)).power(x.total_dim()).is_zero():
            return c
    raise NotBasic("endomorphism ring of a summand is not split local")


class ReductionData:
    """Outcome of reducing the ambient algebra at a rigid pair (U, Q).

    Carries the completion (M, P) with Fac M the largest window torsion
    class, the endomorphism algebra B = End(M) with its basis realized by
    module maps, the idempotent e_U projecting onto the U-part, and the
    quotient algebra by the two-sided ideal the idempotent generates.
    """

    def __init__(
        self,
        pair,
        bongartz,
        endo,
        basis_maps,
        e_u,
        ideal_dim,
        quotient,
        quotient_maps,
        parts,
        u_slots,
        kept_slots,
        idempotents,
    ):
        self.pair = pair
        self.bongartz = bongartz
        self.endo = endo
        self.basis_maps = basis_maps
        self.e_u = e_u
        self.ideal_dim = ideal_dim
        self.quotient = quotient
        self.quotient_maps = quotient_maps
        self.parts = parts
        self.u_slots = u_slots
        self.kept_slots = kept_slots
        self.idempotents = idempotents

    def __repr__(self):
        return (
            f"ReductionData(pair={modules.describe_pair(self.pair)}, "
            f"dim B={self.endo.dim}, dim quotient={self.quotient.dim})"
        )


def _build_basic(field, labels, names, peirce, mult):
    from .algebra import BasicAlgebra

    alg = BasicAlgebra(field, labels, names, peirce, mult)
    alg.validate()
    return alg


def tau_reduction(pair, seed=0, budget=10000):
    """Reduce the ambient algebra at a rigid pair.

    Builds B = End(M) for the maximal completion (M, P), with basis the
    identity projections of the indecomposable summands followed by a
    radical basis, then quotients by the ideal generated by e_U.  The
    quotient basis keeps one representative map per coset.
    """
    alg = pair.algebra
    field = alg.field
    bon = tauops.right_bongartz(pair, seed=seed, budget=budget)
    own = sorted(
        modules._projective_vertex(rep)
        for rep, mult in pair.p_summands()
        for _ in range(mult)
    )
    got = sorted(
        modules._projective_vertex(rep)
        for rep, mult in bon.p_summands()
        for _ in range(mult)
    )
    if own != got:
        raise CertificateFailure("completion changed the projective leg of the pair")

    parts = [rep for rep, mult in bon.m_summands() for _ in range(mult)]
    parts.sort(key=lambda r: (modules.g_vector(r), r.dims))
    s = len(parts)

    u_slots = set()
    for rep, mult in pair.m_summands():
        hits = 0
        for i in range(s):
            if i not in u_slots and modules.is_isomorphic(parts[i], rep, seed=seed):
                u_slots.add(i)
                hits += 1
                if hits == mult:
                    break
        if hits != mult:
            raise CertificateFailure("completion lost a summand of the input pair")
    kept_slots = [i for i in range(s) if i not in u_slots]

    cells = {}
    for i in range(s):
        for j in range(s):
            cells[(i, j)] = modules.hom_basis(parts[j], parts[i])

    # basis: identity projections first, then a radical basis per block
    elements = [(i, i, modules.identity_map(parts[i])) for i in range(s)]
    for i in range(s):
        ident = modules.identity_map(parts[i])
        width = _hom_width(parts[i], parts[i])
        rows = [_map_vec(ident)]
        kept = []
        for f in cells[(i, i)]:
            g = f - ident.scale(_local_scalar(f))
            vec = _map_vec(g)
            if any(vec) and not linalg.RowSolver(rows, field, width).contains(vec):
                rows.append(vec)
                kept.append(g)
        if len(kept) != len(cells[(i, i)]) - 1:
            raise NotBasic("endomorphism ring of a summand is not split local")
        elements.extend((i, i, g) for g in kept)
    for i in range(s):
        for j in range(s):
            if i != j:
                elements.extend((i, j, f) for f in cells[(i, j)])

    names = [f"E{i + 1}" for i in range(s)]
    names += [f"w{t + 1}" for t in range(len(elements) - s)]
    peirce = [(i, j) for i, j, _ in elements]
    labels = [modules.describe_module(p) for p in parts]

    members = {}
    for k, (i, j, _) in enumerate(elements):
        members.setdefault((i, j), []).append(k)
    solvers = {
        key: linalg.RowSolver(
            [_map_vec(elements[k][2]) for k in idx],
            field,
            _hom_width(parts[key[1]], parts[key[0]]),
        )
        for key, idx in members.items()
    }

    mult = {}
    for a, (i, j, fa) in enumerate(elements):
        for b, (k, l, fb) in enumerate(elements):
            if j != k:
                continue
            vec = _map_vec(fb.then(fa))
            if not any(vec):
                continue
            cell = members.get((i, l))
            coeffs = solvers[(i, l)].express(vec) if cell else None
            if coeffs is None:
                raise CertificateFailure("composite escaped its hom block")
            entries = tuple((cell[t], c) for t, c in enumerate(coeffs) if c)
            if entries:
                mult[(a, b)] = entries

    endo = _build_basic(field, labels, names, peirce, mult)
    basis_maps = elements
    e_u = endo.element(
        [field.one if k in u_slots else field.zero for k in range(s)]
        + [field.zero] * (len(elements) - s)
    )

    # trace ideal B e_U B, block by block
    ideal_dim = 0
    block_ideal = {}
    for (i, j), idx in members.items():
        if i in u_slots or j in u_slots:
            ideal_dim += len(idx)
            continue
        vecs = []
        for t in u_slots:
            for g in cells[(t, j)]:
                for f in cells[(i, t)]:
                    vecs.append(_map_vec(g.then(f)))
        basis = linalg.row_space_basis(vecs, field) if vecs else []
        block_ideal[(i, j)] = basis
        ideal_dim += len(basis)

    # quotient basis: surviving idempotents, then reduced radical maps
    vmap = {orig: new for new, orig in enumerate(kept_slots)}
    q_elements = []
    for i in kept_slots:
        ident = modules.identity_map(parts[i])
        width = _hom_width(parts[i], parts[i])
        idl = block_ideal.get((i, i), [])
        if linalg.RowSolver(idl, field, width).contains(_map_vec(ident)):
            raise CertificateFailure("reduction collapsed a non-U idempotent")
        q_elements.append((i, i, ident))
    for i in kept_slots:
        for j in kept_slots:
            width = _hom_width(parts[j], parts[i])
            rows = [list(v) for v in block_ideal.get((i, j), [])]
            if i == j:
                rows.append(_map_vec(modules.identity_map(parts[i])))
            for a, b, g in elements[s:]:
                if (a, b) != (i, j):
                    continue
                vec = _map_vec(g)
                if not linalg.RowSolver(rows, field, width).contains(vec):
                    rows.append(vec)
                    q_elements.append((i, j, g))

    q_names = [f"E{vmap[i] + 1}" for i, _, _ in q_elements[: len(kept_slots)]]
    q_names += [f"w{t + 1}" for t in range(len(q_elements) - len(kept_slots))]
    q_peirce = [(vmap[i], vmap[j]) for i, j, _ in q_elements]
    q_labels = []
    for i in kept_slots:
        base = labels[i]
        if base.startswith("P") and base[1:].isdigit():
            base = base[1:]  # the projective prefix is redundant on a vertex
        q_labels.append(base + "'")

    q_members = {}
    for k, (i, j, _) in enumerate(q_elements):
        q_members.setdefault((i, j), []).append(k)
    q_solvers = {}
    for key, idx in q_members.items():
        rows = [_map_vec(q_elements[k][2]) for k in idx]
        rows += [list(v) for v in block_ideal.get(key, [])]
        q_solvers[key] = linalg.RowSolver(
            rows, field, _hom_width(parts[key[1]], parts[key[0]])
        )

    q_mult = {}
    for a, (i, j, fa) in enumerate(q_elements):
        for b, (k, l, fb) in enumerate(q_elements):
            if j != k:
                continue
            vec = _map_vec(fb.then(fa))
            if not any(vec):
                continue
            cell = q_members.get((i, l), [])
            solver = q_solvers.get((i, l))
            if solver is None:
                # whole block died; the composite must lie in the ideal
                solver = linalg.RowSolver(
                    [list(v) for v in block_ideal.get((i, l), [])],
                    field,
                    _hom_width(parts[l], parts[i]),
                )
            coeffs = solver.express(vec)
            if coeffs is None:
                raise CertificateFailure("composite escaped its hom block")
            entries = tuple(
                (cell[t], c) for t, c in enumerate(coeffs[: len(cell)]) if c
            )
            if entries:
                q_mult[(a, b)] = entries

    quotient = _build_basic(field, q_labels, q_names, q_peirce, q_mult)
    if quotient.dim != endo.dim - ideal_dim:
        raise CertificateFailure("quotient dimension disagrees with the ideal rank")

    idempotents = [
        endo.element(
            [field.one if k == i else field.zero for k in range(s)]
            + [field.zero] * (len(elements) - s)
        )
        for i in kept_slots
    ]
    return ReductionData(
        pair,
        bon,
        endo,
        basis_maps,
        e_u,
        ideal_dim,
        quotient,
        q_elements,
        parts,
        u_slots,
        kept_slots,
        idempotents,
    )


def reduction_functor(rd, x, seed=0):
    """Image of a wide-subcategory module over the reduced algebra.

    The underlying spaces are Hom(M_i, x) at the surviving vertices; the
    radical basis acts by precomposition.  Maps factoring through the
    U-part act as zero because x has no maps from U.
    """
    pair = rd.pair
    if not modules.in_wide(pair.m, pair.p, x):
        raise NotInWide("module lies outside the wide subcategory of the pair")
    for i in rd.u_slots:
        if modules.dim_hom(rd.parts[i], x):
            raise CertificateFailure("U-part maps survived on a window module")
    alg = rd.quotient
    field = alg.field
    bases = [modules.hom_basis(rd.parts[i], x) for i in rd.kept_slots]
    dims = tuple(len(b) for b in bases)
    solvers = [
        linalg.RowSolver(
            [_map_vec(f) for f in bases[v]],
            field,
            _hom_width(rd.parts[rd.kept_slots[v]], x),
        )
        for v in range(alg.n)
    ]
    rad_mats = {}
    for kq in alg.radical_indices():
        i, j = alg.peirce[kq]
        g = rd.quotient_maps[kq][2]
        rows = []
        for phi in bases[i]:
            vec = _map_vec(g.then(phi))
            if not any(vec):
                rows.append([field.zero] * dims[j])
                continue
            coeffs = solvers[j].express(vec)
            if coeffs is None:
                raise CertificateFailure("image map escaped its hom space")
            rows.append(list(coeffs))
        rad_mats[kq] = rows
    return modules.Representation(alg, dims, rad_mats, check=True)


def _same_torsion(a, b):
    return modules.in_fac(a, b) and modules.in_fac(b, a)


def _reduced_pairs(rd, seed=0, budget=10000):
    if rd.quotient.n == 0:
        zero = modules.zero_rep(rd.quotient)
        return [modules.TauPair(zero, zero)]
    return tauops.all_pairs(rd.quotient, seed=seed, budget=budget)


def reduce_pair(rd, apair, seed=0, budget=10000):
    """The reduced-side pair whose torsion class matches the image of
    Fac(apair) under the reduction; apair must contain the rigid pair."""
    if not tauops.contains_pair(apair, rd.pair):
        raise PreconditionViolated("pair does not contain the reduction pair")
    q = tauops._star_quotient(rd.pair, apair.m)
    y = reduction_functor(rd, q, seed=seed)
    hits = [
        c
        for c in _reduced_pairs(rd, seed, budget)
        if _same_torsion(c.m, y)
    ]
    if len(hits) != 1:
        raise MatchFailure(
            f"expected one reduced partner, found {len(hits)} for "
            f"{modules.describe_pair(apair)}"
        )
    return hits[0]


def reduction_bijection_check(rd, seed=0, budget=10000):
    """Certify the order bijection between pairs over the rigid pair and
    pairs of the reduced algebra; returns a JSON-ready report."""
    ambient = [
        p
        for p in tauops.all_pairs(rd.pair.algebra, seed=seed, budget=budget)
        if tauops.contains_pair(p, rd.pair)
    ]
    reduced = _reduced_pairs(rd, seed, budget)
    images = [reduce_pair(rd, p, seed=seed, budget=budget) for p in ambient]
    image_fps = [im.fingerprint() for im in images]
    bijective = len(set(image_fps)) == len(ambient) == len(reduced)
    failures = []
    for a in range(len(ambient)):
        for b in range(len(ambient)):
            if a == b:
                continue
            if tauops.pair_leq(ambient[a], ambient[b]) != tauops.pair_leq(
                images[a], images[b]
            ):
                failures.append(
                    {
                        "check": "order",
                        "left": modules.describe_pair(ambient[a]),
                        "right": modules.describe_pair(ambient[b]),
                    }
                )
    return {
        "pair": modules.describe_pair(rd.pair),
        "ambient_count": len(ambient),
        "reduced_count": len(reduced),
        "bijective": bijective,
        "order_preserved": not failures,
        "failures": failures,
        "pass": bijective and not failures,
    }


# -- transport of green sequences ------------------------------------------------


def _check_green_chain(chain, seed=0):
    """Each ascending step must be a reversed left-mutation edge."""
    for k in range(len(chain) - 1):
        tauops._require_tilting(chain[k])
        try:
            tauops.brick_label(chain[k + 1], chain[k], seed=seed)
        except TautiltError as exc:
            raise PreconditionViolated(
                f"step {k} of the chain is not a left mutation: {exc}"
            )
    tauops._require_tilting(chain[-1])


def transport_mgs(rd, mgs, seed=0, budget=10000):
    """Push a maximal green sequence for the window torsion class down to
    the reduced algebra.

    Applies the left completion pointwise, drops consecutive duplicates,
    maps the strict chain through the reduction bijection, and certifies
    every step against the reduced exchange graph.
    """
    alg = rd.pair.algebra
    if not mgs:
        raise PreconditionViolated("empty chain")
    if mgs[0].fingerprint() != tauops.shifted_pair(alg).fingerprint():
        raise PreconditionViolated("chain must start at the zero torsion class")
    if mgs[-1].fingerprint() != rd.bongartz.fingerprint():
        raise PreconditionViolated("chain must end at the window torsion class")
    _check_green_chain(mgs, seed)

    completions = [
        tauops.left_bongartz(rd.pair, node, seed=seed, budget=budget) for node in mgs
    ]
    chain = [completions[0]]
    for c in completions[1:]:
        if c.fingerprint() != chain[-1].fingerprint():
            chain.append(c)

    images = [reduce_pair(rd, c, seed=seed, budget=budget) for c in chain]
    if not images[0].m.is_zero():
        raise CertificateFailure("transported chain does not start at zero")
    if rd.quotient.n:
        top = tauops.free_pair(rd.quotient).fingerprint()
        if images[-1].fingerprint() != top:
            raise CertificateFailure("transported chain misses the full module class")
        reduced_graph = build_exchange_graph(rd.quotient, budget=budget, seed=seed)
        edge_set = reduced_graph.edge_set()
        for k in range(len(images) - 1):
            key = (images[k + 1].fingerprint(), images[k].fingerprint())
            if key not in edge_set:
                raise CertificateFailure("a transported step is not a cover")
    elif len(images) != 1:
        raise CertificateFailure("zero algebra admits only the trivial chain")
    return images


def connect_fixed_summand(path, rel_u, seed=0, budget=10000):
    """Rewrite a mutation path so a fixed projective pair survives it.

    rel_u must be (U, 0) with U projective; the completion is then defined
    at every node.  Identity steps produced by the completion are removed
    and the result is certified to be a mutation path through pairs
    containing rel_u.
    """
    if not rel_u.p.is_zero():
        raise PreconditionViolated("fixed summand must have the form (U, 0)")
    if not rel_u.m.is_zero() and not modules.is_projective(rel_u.m):
        raise PreconditionViolated("fixed summand must be projective")
    tauops._require_rigid(rel_u)
    if not path:
        raise PreconditionViolated("empty path")
    for node in path:
        tauops._require_tilting(node)
    for k in range(len(path) - 1):
        gone, new = tauops.exchanged_summands(path[k], path[k + 1])
        if len(gone) != 1 or len(new) != 1:
            raise PreconditionViolated("input is not a mutation path")

    completions = [
        tauops.left_bongartz(rel_u, node, seed=seed, budget=budget) for node in path
    ]
    out = [completions[0]]
    for c in completions[1:]:
        if c.fingerprint() != out[-1].fingerprint():
            out.append(c)
    for node in out:
        if not tauops.contains_pair(node, rel_u):
            raise CertificateFailure("a rewritten node lost the fixed summand")
    for k in range(len(out) - 1):
        gone, new = tauops.exchanged_summands(out[k], out[k + 1])
        if len(gone) != 1 or len(new) != 1:
            raise CertificateFailure("rewritten path is not a mutation path")
    return out


# -- verification sweeps ----------------------------------------------------------


def _det_pm_one(pair):
    rows = tauops.pair_summand_list(pair)
    mat = [
        [linalg.QQ(c) for c in tauops.summand_g_vector(kind, rep)]
        for kind, rep in rows
    ]
    d = linalg.det(mat, linalg.QQ)
    return d == linalg.QQ(1) or d == linalg.QQ(-1)


def verify_exchange(algebra, seed=0, budget=10000):
    """Structural sweep of the exchange graph: degree counts, extremes,
    two completions per almost pair, unimodular g-matrices, and (on small
    graphs) fingerprint soundness against explicit isomorphism tests."""
    graph = build_exchange_graph(algebra, budget=budget, seed=seed)
    failures = []
    if not graph.complete:
        failures.append({"check": "complete"})
    incoming = {fp: 0 for fp in graph.nodes}
    outgoing = {fp: 0 for fp in graph.nodes}
    for s, t, _ in graph.edges:
        outgoing[s] += 1
        incoming[t] += 1
    for fp, pair in graph.nodes.items():
        if incoming[fp] + outgoing[fp] != algebra.n:
            failures.append(
                {"check": "degree", "node": modules.describe_pair(pair)}
            )
        if not _det_pm_one(pair):
            failures.append(
                {"check": "unimodular", "node": modules.describe_pair(pair)}
            )
    sources = [fp for fp in graph.nodes if incoming[fp] == 0]
    sinks = [fp for fp in graph.nodes if outgoing[fp] == 0]
    if sources != [tauops.free_pair(algebra).fingerprint()]:
        failures.append({"check": "unique-source"})
    if sinks != [tauops.shifted_pair(algebra).fingerprint()]:
        failures.append({"check": "unique-sink"})
    buckets = {}
    for fp, pair in graph.nodes.items():
        tokens = [_summand_token(k, r) for k, r in tauops.pair_summand_list(pair)]
        for slot in range(len(tokens)):
            key = tuple(sorted(tokens[:slot] + tokens[slot + 1 :]))
            buckets.setdefault(key, set()).add(fp)
    for key, holders in sorted(buckets.items()):
        if len(holders) != 2:
            failures.append({"check": "two-completions", "count": len(holders)})
    if len(graph.nodes) <= 24:
        pairs = graph.node_list()
        for a in range(len(pairs)):
            for b in range(a + 1, len(pairs)):
                same_m = modules.is_isomorphic(pairs[a].m, pairs[b].m, seed=seed)
                same_p = modules.is_isomorphic(pairs[a].p, pairs[b].p, seed=seed)
                if same_m and same_p:
                    failures.append({"check": "fingerprint-soundness"})
    return {
        "suite": "exchange",
        "nodes": len(graph.nodes),
        "edges": len(graph.edges),
        "complete": graph.complete,
        "failures": failures,
        "pass": not failures,
    }


def verify_mutation_compat(rel_u, graph, seed=0, budget=10000):
    """Sweep the completion dichotomy over every left edge in the window.

    Per edge the exchange brick predicts whether the two completions
    coincide or differ by one left mutation; the completion computed on
    the complex side must agree with the module side at every node."""
    tauops._require_rigid(rel_u)
    if not graph.complete:
        raise IncompleteGraph("compatibility sweep needs a complete graph")
    u_c = twoterm.from_tau_pair(rel_u)
    failures = []
    window = {}
    completion = {}
    for fp, node in graph.nodes.items():
        w_mod = tauops.left_precondition(rel_u, node)
        w_sil = twoterm.hom_k(u_c, twoterm.from_tau_pair(node), 1) == 0
        if w_mod != w_sil:
            failures.append(
                {"check": "window", "node": modules.describe_pair(node)}
            )
        window[fp] = w_mod
        if not w_mod:
            continue
        bp = tauops.left_bongartz(rel_u, node, seed=seed, budget=budget)
        completion[fp] = bp
        sc = twoterm.left_completion_silting(u_c, twoterm.from_tau_pair(node))
        if twoterm.to_tau_pair(sc).fingerprint() != bp.fingerprint():
            failures.append(
                {"check": "route", "node": modules.describe_pair(node)}
            )
    identity_steps = 0
    mutation_steps = 0
    skipped = 0
    edge_set = graph.edge_set()
    for s, t, _ in graph.edges:
        if not window[s]:
            skipped += 1
            continue
        if not window[t]:
            failures.append({"check": "window-shrink"})
            continue
        src, tgt = graph.nodes[s], graph.nodes[t]
        d = tauops.brick_label(src, tgt, seed=seed)
        bs, bt = completion[s], completion[t]
        if modules.dim_hom(rel_u.m, d) == 0:
            mutation_steps += 1
            ok = (
                bs.fingerprint() != bt.fingerprint()
                and tauops.pair_leq(bt, bs)
                and (bs.fingerprint(), bt.fingerprint()) in edge_set
            )
            if not ok:
                failures.append(
                    {
                        "check": "mutation-branch",
                        "edge": f"{modules.describe_pair(src)} -> "
                        f"{modules.describe_pair(tgt)}",
                    }
                )
        else:
            identity_steps += 1
            if bs.fingerprint() != bt.fingerprint():
                failures.append(
                    {
                        "check": "identity-branch",
                        "edge": f"{modules.describe_pair(src)} -> "
                        f"{modules.describe_pair(tgt)}",
                    }
                )
    return {
        "suite": "compat",
        "pair": modules.describe_pair(rel_u),
        "edges_checked": identity_steps + mutation_steps,
        "identity_steps": identity_steps,
        "mutation_steps": mutation_steps,
        "skipped": skipped,
        "failures": failures,
        "pass": not failures,
    }


def _common_summand_count(a, b, seed=0):
    fps_a = [
        twoterm.complex_fingerprint(c, seed)
        for c, m in twoterm.decompose_complex(a, seed)
        for _ in range(m)
    ]
    fps_b = [
        twoterm.complex_fingerprint(c, seed)
        for c, m in twoterm.decompose_complex(b, seed)
        for _ in range(m)
    ]
    count = 0
    rest = list(fps_b)
    for fp in fps_a:
        if fp in rest:
            rest.remove(fp)
            count += 1
    return count


def verify_silting_compat(rel_u, graph, seed=0, budget=10000):
    """Left-mutation compatibility on the complex side: the completion of
    the smaller node stays silting, sits below, and shares all but at
    most one summand with the completion of the larger node."""
    tauops._require_rigid(rel_u)
    if not graph.complete:
        raise IncompleteGraph("compatibility sweep needs a complete graph")
    u_c = twoterm.from_tau_pair(rel_u)
    n = graph.algebra.n
    cx = {fp: twoterm.from_tau_pair(node) for fp, node in graph.nodes.items()}
    failures = []
    identity_steps = 0
    mutation_steps = 0
    skipped = 0
    for s, t, _ in graph.edges:
        ts, tt = cx[s], cx[t]
        if twoterm.hom_k(u_c, ts, 1):
            skipped += 1
            continue
        edge_name = (
            f"{modules.describe_pair(graph.nodes[s])} -> "
            f"{modules.describe_pair(graph.nodes[t])}"
        )
        if twoterm.hom_k(u_c, tt, 1):
            failures.append({"check": "window-shrink", "edge": edge_name})
            continue
        if twoterm.hom_k(u_c, ts, 2) or twoterm.hom_k(u_c, tt, 2):
            failures.append({"check": "higher-ext", "edge": edge_name})
        ss = twoterm.left_completion_silting(u_c, ts)
        st = twoterm.left_completion_silting(u_c, tt)
        if not (twoterm.is_silting(ss, seed) and twoterm.is_silting(st, seed)):
            failures.append({"check": "silting", "edge": edge_name})
            continue
        common = _common_summand_count(ss, st, seed)
        if twoterm.is_isomorphic_complex(ss, st, seed=seed):
            identity_steps += 1
            continue
        mutation_steps += 1
        if common != n - 1 or not twoterm.silting_leq(st, ss):
            failures.append({"check": "mutation-branch", "edge": edge_name})
    return {
        "suite": "silting-compat",
        "pair": modules.describe_pair(rel_u),
        "identity_steps": identity_steps,
        "mutation_steps": mutation_steps,
        "skipped": skipped,
        "failures": failures,
        "pass": not failures,
    }


def verify_route(rel_u, graph, seed=0, budget=10000):
    """The cone construction and the fan search must return the same
    completion at every node inside the window."""
    tauops._require_rigid(rel_u)
    if not graph.complete:
        raise IncompleteGraph("route sweep needs a complete graph")
    failures = []
    checked = 0
    for fp, node in graph.nodes.items():
        if not tauops.left_precondition(rel_u, node):
            continue
        checked += 1
        via_cone = tauops.left_bongartz(rel_u, node, seed=seed, budget=budget)
        via_fan = tauops.fan_left_completion(rel_u, node, seed=seed, budget=budget)
        if via_cone.fingerprint() != via_fan.fingerprint():
            failures.append(
                {"check": "route", "node": modules.describe_pair(node)}
            )
    return {
        "suite": "route",
        "pair": modules.describe_pair(rel_u),
        "nodes_checked": checked,
        "failures": failures,
        "pass": not failures,
    }


def verify_dagger(algebra, seed=0, budget=10000):
    """The duality must map the graph to the opposite-algebra graph with
    all edges reversed and the order flipped."""
    graph = build_exchange_graph(algebra, budget=budget, seed=seed)
    op_graph = build_exchange_graph(algebra.opposite(), budget=budget, seed=seed)
    failures = []
    if not (graph.complete and op_graph.complete):
        failures.append({"check": "complete"})
    dags = {}
    for fp, pair in graph.nodes.items():
        d = tauops.dagger_pair(pair)
        dags[fp] = d
        if tauops.dagger_pair(d).fingerprint() != fp:
            failures.append(
                {"check": "involution", "node": modules.describe_pair(pair)}
            )
    image_fps = {d.fingerprint() for d in dags.values()}
    if image_fps != set(op_graph.nodes) or len(dags) != len(op_graph.nodes):
        failures.append({"check": "node-bijection"})
    op_edges = op_graph.edge_set()
    for s, t, _ in graph.edges:
        if (dags[t].fingerprint(), dags[s].fingerprint()) not in op_edges:
            failures.append({"check": "edge-reversal"})
    if len(graph.edges) != len(op_graph.edges):
        failures.append({"check": "edge-count"})
    node_list = graph.node_list()
    for a in node_list:
        for b in node_list:
            lhs = tauops.pair_leq(a, b)
            rhs = tauops.pair_leq(
                dags[b.fingerprint()], dags[a.fingerprint()]
            )
            if lhs != rhs:
                failures.append({"check": "order-reversal"})
    return {
        "suite": "dagger",
        "nodes": len(graph.nodes),
        "failures": failures,
        "pass": not failures,
    }


def rigid_subpairs(graph, max_size, seed=0):
    """All rigid subpairs of graph nodes with at most max_size summands,
    one representative per fingerprint, in deterministic order."""
    out = {}
    for node in graph.node_list():
        rows = tauops.pair_summand_list(node)
        for mask in range(1 << len(rows)):
            picked = [rows[k] for k in range(len(rows)) if mask >> k & 1]
            if len(picked) > max_size:
                continue
            sub = modules.pair_from_summands(
                node.algebra,
                [r for kind, r in picked if kind == "m"],
                [r for kind, r in picked if kind == "p"],
            )
            out.setdefault(sub.fingerprint(), sub)
    return [out[fp] for fp in sorted(out)]


def verify_reduction(algebra, seed=0, budget=10000):
    """Reduce at the empty pair, the free pair, and every one-summand
    rigid pair, certifying the order bijection each time."""
    graph = build_exchange_graph(algebra, budget=budget, seed=seed)
    if not graph.complete:
        raise IncompleteGraph("reduction sweep needs a complete graph")
    candidates = rigid_subpairs(graph, 1, seed)
    top = tauops.free_pair(algebra)
    if top.fingerprint() not in {c.fingerprint() for c in candidates}:
        candidates.append(top)
    failures = []
    reports = []
    for cand in candidates:
        rd = tau_reduction(cand, seed=seed, budget=budget)
        rep = reduction_bijection_check(rd, seed=seed, budget=budget)
        reports.append(
            {
                "pair": rep["pair"],
                "ambient_count": rep["ambient_count"],
                "reduced_count": rep["reduced_count"],
                "pass": rep["pass"],
            }
        )
        if not rep["pass"]:
            failures.append({"check": "bijection", "pair": rep["pair"]})
    return {
        "suite": "reduction",
        "candidates": len(candidates),
        "reports": reports,
        "failures": failures,
        "pass": not failures,
    }


def verify_order_criteria(algebra, seed=0, budget=10000):
    """Equivalence of the window tests: vanishing of positive-shift maps
    against the node complex, against its module part, the two module
    side conditions, and the torsion class inclusion."""
    graph = build_exchange_graph(algebra, budget=budget, seed=seed)
    if not graph.complete:
        raise IncompleteGraph("order-criteria sweep needs a complete graph")
    subs = rigid_subpairs(graph, algebra.n, seed)
    cx = {fp: twoterm.from_tau_pair(node) for fp, node in graph.nodes.items()}
    part_cx = {
        fp: twoterm.from_tau_pair(
            modules.TauPair(node.m, modules.zero_rep(algebra))
        )
        for fp, node in graph.nodes.items()
    }
    failures = []
    checked = 0
    for u in subs:
        u_c = twoterm.from_tau_pair(u)
        tau_um = None if u.m.is_zero() else modules.ar_translate(u.m)
        for fp, node in graph.nodes.items():
            checked += 1
            b = twoterm.hom_k(u_c, cx[fp], 1) == 0
            a = b and twoterm.hom_k(u_c, cx[fp], 2) == 0
            c = twoterm.hom_k(u_c, part_cx[fp], 1) == 0
            d = modules.dim_hom(u.p, node.m) == 0 and (
                tau_um is None
                or tau_um.is_zero()
                or modules.dim_hom(node.m, tau_um) == 0
            )
            e = tauops.left_precondition(u, node)
            if not a == b == c == d == e:
                failures.append(
                    {
                        "check": "criteria",
                        "pair": modules.describe_pair(u),
                        "node": modules.describe_pair(node),
                        "flags": [a, b, c, d, e],
                    }
                )
    return {
        "suite": "order-criteria",
        "pairs": len(subs),
        "checked": checked,
        "failures": failures,
        "pass": not failures,
    }
