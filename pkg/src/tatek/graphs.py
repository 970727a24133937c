"""Finite graphs with a free Z/p rotation, equivariant moves, and normal forms.

Graphs are stored combinatorially with half-edges: a fixed-point-free
involution pairs the two half-edges of each geometric edge, an attachment map
sends half-edges to vertices, and the Z/p action is a pair of permutations
(vertices, half-edges) commuting with both.  All moves are whole-orbit and
atomic: a single call collapses or slides an entire Z/p-orbit of edges, so
equivariance can never be transiently broken.  Graphs are immutable; moves
return new graphs.

The normal form is the rose-cycle graph: p vertices in a single orbit, one
edge orbit forming a p-cycle compatible with the rotation, and k loop orbits
(k loops at each vertex), of rank p*k + 1.  ``normalize`` reduces any valid
graph to this shape by collapsing inter-orbit edge orbits and sliding, and
returns a move log that replays the reduction step by step.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from random import Random
from typing import Iterable, Sequence

from .modp import check_prime


class GraphStructureError(ValueError):
    """Malformed graph data: sizes, ranges, or non-permutation maps."""


class NotAForest(ValueError):
    """The edge orbit to collapse contains a loop or closes a cycle."""


class SameOrbit(ValueError):
    """Slide source and target lie in the same geometric edge orbit."""


class NotComposable(ValueError):
    """Slide endpoints do not match: need tau(s) = iota(t) for the given reps."""


class InvalidGraph(ValueError):
    """An operation that requires a valid graph received an invalid one."""

    def __init__(self, report: "ValidityReport"):
        lines = "; ".join(f"{code}: {msg}" for code, msg in report.violations)
        super().__init__(f"graph fails validation: {lines}")
        self.report = report


class NormalizationError(RuntimeError):
    """The graph admits no move sequence to the rose-cycle normal form."""


def _check_perm(perm: Sequence[int], size: int, name: str) -> tuple[int, ...]:
    values = tuple(int(x) for x in perm)
    if len(values) != size or sorted(values) != list(range(size)):
        raise GraphStructureError(f"{name} is not a permutation of 0..{size - 1}")
    return values


@dataclass(frozen=True)
class EquivariantGraph:
    """A finite graph together with a Z/p action given by two permutations."""

    p: int
    n_vertices: int
    involution: tuple[int, ...]
    attach: tuple[int, ...]
    vertex_action: tuple[int, ...]
    half_edge_action: tuple[int, ...]

    def __post_init__(self) -> None:
        check_prime(self.p)
        if self.n_vertices < 1:
            raise GraphStructureError("graph needs at least one vertex")
        h = len(self.involution)
        object.__setattr__(self, "involution", _check_perm(self.involution, h, "involution"))
        object.__setattr__(
            self, "half_edge_action", _check_perm(self.half_edge_action, h, "half_edge_action")
        )
        object.__setattr__(
            self,
            "vertex_action",
            _check_perm(self.vertex_action, self.n_vertices, "vertex_action"),
        )
        attach = tuple(int(x) for x in self.attach)
        if len(attach) != h:
            raise GraphStructureError("attach must assign a vertex to every half-edge")
        for v in attach:
            if not (0 <= v < self.n_vertices):
                raise GraphStructureError(f"attach value {v} out of range")
        object.__setattr__(self, "attach", attach)

    # -- basic shape -------------------------------------------------------

    @property
    def n_half_edges(self) -> int:
        return len(self.involution)

    @property
    def n_edges(self) -> int:
        return self.n_half_edges // 2

    def half_edges_at(self, v: int) -> list[int]:
        return [h for h in range(self.n_half_edges) if self.attach[h] == v]

    def act_vertex(self, v: int, k: int = 1) -> int:
        for _ in range(k % self.p):
            v = self.vertex_action[v]
        return v

    def act_half_edge(self, h: int, k: int = 1) -> int:
        for _ in range(k % self.p):
            h = self.half_edge_action[h]
        return h

    # -- orbits ------------------------------------------------------------

    def vertex_orbit(self, v: int) -> tuple[int, ...]:
        orbit = [v]
        x = self.vertex_action[v]
        while x != v:
            orbit.append(x)
            x = self.vertex_action[x]
        return tuple(orbit)

    def vertex_orbits(self) -> list[tuple[int, ...]]:
        seen: set[int] = set()
        orbits = []
        for v in range(self.n_vertices):
            if v not in seen:
                orbit = self.vertex_orbit(v)
                seen.update(orbit)
                orbits.append(orbit)
        return orbits

    def vertex_orbit_rep(self, v: int) -> int:
        return min(self.vertex_orbit(v))

    def geometric_orbit(self, h: int) -> tuple[int, ...]:
        """All half-edges of the Z/p-orbit of the geometric edge through h."""
        out: set[int] = set()
        for start in (h, self.involution[h]):
            x = start
            while x not in out:
                out.add(x)
                x = self.half_edge_action[x]
        return tuple(sorted(out))

    def orbit_rep(self, h: int) -> int:
        return self.geometric_orbit(h)[0]


@dataclass(frozen=True)
class EdgeOrbitRef:
    """A Z/p-orbit of edges, named by one half-edge; the index also fixes an
    orientation (iota = attach[half_edge], tau = attach[involution[half_edge]])."""

    half_edge: int


def edge_orbit_refs(g: EquivariantGraph) -> list[EdgeOrbitRef]:
    """Canonical representatives (minimal half-edge index) of all edge orbits."""
    reps = sorted({g.orbit_rep(h) for h in range(g.n_half_edges)})
    return [EdgeOrbitRef(r) for r in reps]


# ---------------------------------------------------------------------------
# Validation


@dataclass(frozen=True)
class ValidityReport:
    ok: bool
    violations: tuple[tuple[str, str], ...]


def _connected(g: EquivariantGraph) -> bool:
    seen = {0}
    stack = [0]
    while stack:
        v = stack.pop()
        for h in range(g.n_half_edges):
            if g.attach[h] == v:
                w = g.attach[g.involution[h]]
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
    return len(seen) == g.n_vertices


def validate(g: EquivariantGraph) -> ValidityReport:
    """Check the action axioms; each violated invariant is named individually.

    Codes: InvolutionViolation, ActionOrderViolation, EquivarianceViolation,
    FreenessViolation, ConnectivityViolation.
    """
    violations: list[tuple[str, str]] = []
    for h in range(g.n_half_edges):
        if g.involution[h] == h:
            violations.append(("InvolutionViolation", f"half-edge {h} is its own partner"))
            break
        if g.involution[g.involution[h]] != h:
            violations.append(("InvolutionViolation", f"pairing broken at half-edge {h}"))
            break

    v = list(range(g.n_vertices))
    hh = list(range(g.n_half_edges))
    for _ in range(g.p):
        v = [g.vertex_action[x] for x in v]
        hh = [g.half_edge_action[x] for x in hh]
    if v != list(range(g.n_vertices)) or hh != list(range(g.n_half_edges)):
        violations.append(("ActionOrderViolation", f"action order does not divide p = {g.p}"))

    for h in range(g.n_half_edges):
        if g.attach[g.half_edge_action[h]] != g.vertex_action[g.attach[h]]:
            violations.append(
                ("EquivarianceViolation", f"attach not equivariant at half-edge {h}")
            )
            break
    for h in range(g.n_half_edges):
        if g.involution[g.half_edge_action[h]] != g.half_edge_action[g.involution[h]]:
            violations.append(
                ("EquivarianceViolation", f"involution not equivariant at half-edge {h}")
            )
            break

    for k in range(1, g.p):
        fixed = [v0 for v0 in range(g.n_vertices) if g.act_vertex(v0, k) == v0]
        if fixed:
            violations.append(
                ("FreenessViolation", f"power {k} of the action fixes vertex {fixed[0]}")
            )
            break
    else:
        # For p = 2 a rotation may map an edge to itself reversed, fixing its
        # midpoint geometrically; combinatorially: some power sends a
        # half-edge to its partner.  Disallowed alongside vertex freeness.
        stop = False
        for k in range(1, g.p):
            for h in range(g.n_half_edges):
                if g.act_half_edge(h, k) == g.involution[h]:
                    violations.append(
                        (
                            "FreenessViolation",
                            f"power {k} maps half-edge {h} to its own partner "
                            "(fixed edge midpoint)",
                        )
                    )
                    stop = True
                    break
            if stop:
                break

    if not _connected(g):
        violations.append(("ConnectivityViolation", "graph is not connected"))

    return ValidityReport(ok=not violations, violations=tuple(violations))


def rank(g: EquivariantGraph) -> int:
    """First Betti number of a connected graph: edges - vertices + 1."""
    return g.n_edges - g.n_vertices + 1


def has_fixed_vertex(g: EquivariantGraph) -> bool:
    """True iff some nontrivial power of the action fixes a vertex."""
    for k in range(1, g.p):
        if any(g.act_vertex(v, k) == v for v in range(g.n_vertices)):
            return True
    return False


# ---------------------------------------------------------------------------
# Moves


def collapse_orbit(g: EquivariantGraph, e: EdgeOrbitRef) -> EquivariantGraph:
    """Collapse an equivariant forest: one edge orbit joining two vertex orbits.

    The p edges of the orbit are pairwise disjoint (free action), each is
    contracted, and the vertex count drops by p while the rank is unchanged.
    Raises :class:`NotAForest` if the orbit contains a loop or joins a vertex
    orbit to itself (contracting it would close a cycle).
    """
    h0 = e.half_edge
    u = g.attach[h0]
    w = g.attach[g.involution[h0]]
    if u == w:
        raise NotAForest(f"edge orbit of half-edge {h0} consists of loops")
    if g.vertex_orbit_rep(u) == g.vertex_orbit_rep(w):
        raise NotAForest(
            f"edge orbit of half-edge {h0} joins vertex orbit {g.vertex_orbit_rep(u)} "
            "to itself and is not a forest"
        )
    removed_half_edges = set(g.geometric_orbit(h0))
    # Merge each w_k = action^k(w) into u_k = action^k(u).
    merge: dict[int, int] = {}
    uk, wk = u, w
    for _ in range(g.p):
        merge[wk] = uk
        uk = g.vertex_action[uk]
        wk = g.vertex_action[wk]
    kept_vertices = [v for v in range(g.n_vertices) if v not in merge]
    new_vertex = {v: i for i, v in enumerate(kept_vertices)}
    kept_half = [h for h in range(g.n_half_edges) if h not in removed_half_edges]
    new_half = {h: i for i, h in enumerate(kept_half)}

    def vert(v: int) -> int:
        return new_vertex[merge.get(v, v)]

    return EquivariantGraph(
        p=g.p,
        n_vertices=len(kept_vertices),
        involution=tuple(new_half[g.involution[h]] for h in kept_half),
        attach=tuple(vert(g.attach[h]) for h in kept_half),
        vertex_action=tuple(new_vertex[g.vertex_action[v]] for v in kept_vertices),
        half_edge_action=tuple(new_half[g.half_edge_action[h]] for h in kept_half),
    )


def expand_orbit(
    g: EquivariantGraph, vertex: int, moved: Iterable[int]
) -> tuple[EquivariantGraph, EdgeOrbitRef]:
    """Equivariant expansion, the inverse of a collapse.

    Splits the vertex orbit through ``vertex``: a new vertex orbit w_k is
    introduced together with an edge orbit joining old to new, and the
    half-edges in ``moved`` (all attached at ``vertex``) are re-attached to
    the new vertex, replicated across the orbit.  Returns the new graph and a
    reference to the fresh edge orbit, oriented old -> new.
    """
    moved_set = sorted(set(int(h) for h in moved))
    for h in moved_set:
        if g.attach[h] != vertex:
            raise GraphStructureError(
                f"half-edge {h} is attached to {g.attach[h]}, not to {vertex}"
            )
    V, H, p = g.n_vertices, g.n_half_edges, g.p

    new_attach = list(g.attach)
    # w_k gets index V + k; the connecting half-edges are H + 2k (at the old
    # orbit) and H + 2k + 1 (at w_k).
    for k in range(p):
        new_attach.append(g.act_vertex(vertex, k))
        new_attach.append(V + k)
        for h in moved_set:
            new_attach[g.act_half_edge(h, k)] = V + k

    involution = list(g.involution) + [0] * (2 * p)
    half_action = list(g.half_edge_action) + [0] * (2 * p)
    for k in range(p):
        a, b = H + 2 * k, H + 2 * k + 1
        involution[a] = b
        involution[b] = a
        a2 = H + 2 * ((k + 1) % p)
        half_action[a] = a2
        half_action[b] = a2 + 1

    vertex_action = list(g.vertex_action) + [V + (k + 1) % p for k in range(p)]

    expanded = EquivariantGraph(
        p=p,
        n_vertices=V + p,
        involution=tuple(involution),
        attach=tuple(new_attach),
        vertex_action=tuple(vertex_action),
        half_edge_action=tuple(half_action),
    )
    return expanded, EdgeOrbitRef(H)


def _single_vertex_orbit(g: EquivariantGraph) -> bool:
    return len(g.vertex_orbits()) == 1


def slide(g: EquivariantGraph, s: EdgeOrbitRef, t: EdgeOrbitRef) -> EquivariantGraph:
    """Equivariant Whitehead slide of orbit s across orbit t.

    Requires a single vertex orbit, distinct orbits, and representatives that
    form a coherently oriented length-2 path: tau(s) = iota(t).  The result
    differs only in that tau(s) becomes tau(t), replicated across the orbit;
    rank, freeness, connectivity and all orbit sizes are preserved.
    """
    if not _single_vertex_orbit(g):
        raise GraphStructureError("slide requires a single vertex orbit")
    hs, ht = s.half_edge, t.half_edge
    if g.orbit_rep(hs) == g.orbit_rep(ht):
        raise SameOrbit(
            f"half-edges {hs} and {ht} lie in the same geometric edge orbit"
        )
    if g.attach[g.involution[hs]] != g.attach[ht]:
        raise NotComposable(
            f"tau(s) = {g.attach[g.involution[hs]]} differs from iota(t) = {g.attach[ht]}"
        )
    new_attach = list(g.attach)
    for k in range(g.p):
        src = g.act_half_edge(g.involution[hs], k)
        dst = g.act_half_edge(g.involution[ht], k)
        new_attach[src] = g.attach[dst]
    return EquivariantGraph(
        p=g.p,
        n_vertices=g.n_vertices,
        involution=g.involution,
        attach=tuple(new_attach),
        vertex_action=g.vertex_action,
        half_edge_action=g.half_edge_action,
    )


# ---------------------------------------------------------------------------
# Single-orbit structure helpers


def oriented_step(g: EquivariantGraph, h: int) -> int:
    """j with tau(h) = action^j(iota(h)); defined when one vertex orbit."""
    src = g.attach[h]
    dst = g.attach[g.involution[h]]
    x = src
    for j in range(g.p):
        if x == dst:
            return j
        x = g.vertex_action[x]
    raise GraphStructureError("endpoints lie in different vertex orbits")


def unoriented_step(g: EquivariantGraph, h: int) -> int:
    j = oriented_step(g, h)
    return min(j, g.p - j)


def orbit_step_multiset(g: EquivariantGraph) -> list[int]:
    """Sorted unoriented steps of all edge orbits (single vertex orbit only)."""
    return sorted(unoriented_step(g, r.half_edge) for r in edge_orbit_refs(g))


def isomorphic_single_orbit(g1: EquivariantGraph, g2: EquivariantGraph) -> bool:
    """Equivariant isomorphism test for free single-vertex-orbit graphs.

    Such a graph is determined up to equivariant isomorphism by p and the
    multiset of unoriented orbit steps: every orbit has exactly one half-edge
    pair based at each vertex, and matching orbits of equal step (choosing
    orientations) extends uniquely to an equivariant isomorphism.
    """
    if g1.p != g2.p:
        return False
    if not (_single_vertex_orbit(g1) and _single_vertex_orbit(g2)):
        raise GraphStructureError("isomorphism test requires single vertex orbits")
    return orbit_step_multiset(g1) == orbit_step_multiset(g2)


def canonical_graph(p: int, k: int) -> EquivariantGraph:
    """The rose-cycle normal form: a p-cycle orbit plus k loop orbits per vertex."""
    check_prime(p)
    if k < 0:
        raise ValueError("loop count must be >= 0")
    involution: list[int] = []
    attach: list[int] = []
    half_action: list[int] = []
    # Cycle half-edges: 2i from vertex i, 2i+1 from vertex i+1.
    for i in range(p):
        involution += [2 * i + 1, 2 * i]
        attach += [i, (i + 1) % p]
        nxt = (i + 1) % p
        half_action += [2 * nxt, 2 * nxt + 1]
    base = 2 * p
    for j in range(k):
        for i in range(p):
            a = base + 2 * (j * p + i)
            involution += [a + 1, a]
            attach += [i, i]
            ni = base + 2 * (j * p + (i + 1) % p)
            half_action += [ni, ni + 1]
    return EquivariantGraph(
        p=p,
        n_vertices=p,
        involution=tuple(involution),
        attach=tuple(attach),
        vertex_action=tuple((i + 1) % p for i in range(p)),
        half_edge_action=tuple(half_action),
    )


def is_canonical_form(g: EquivariantGraph) -> bool:
    """Structurally the rose-cycle graph: one vertex orbit, one cycle orbit of
    unoriented step 1, and loops otherwise."""
    if not validate(g).ok or not _single_vertex_orbit(g):
        return False
    steps = orbit_step_multiset(g)
    return steps.count(1) == 1 and all(s in (0, 1) for s in steps)


# ---------------------------------------------------------------------------
# Normal form


@dataclass(frozen=True)
class NormalForm:
    """Rose-cycle shape: rank = p * loops_per_vertex + 1."""

    p: int
    loops_per_vertex: int
    rank: int

    def __post_init__(self) -> None:
        if self.rank != self.p * self.loops_per_vertex + 1:
            raise ValueError(
                f"rank {self.rank} != p*k + 1 with p={self.p}, k={self.loops_per_vertex}"
            )


@dataclass(frozen=True)
class Move:
    """One whole-orbit move, referring to half-edge indices of the graph it is
    applied to (indices shift across collapses, so logs replay sequentially)."""

    op: str  # "collapse" | "slide"
    source: int
    target: int | None = None


def apply_move(g: EquivariantGraph, move: Move) -> EquivariantGraph:
    if move.op == "collapse":
        return collapse_orbit(g, EdgeOrbitRef(move.source))
    if move.op == "slide":
        if move.target is None:
            raise ValueError("slide move needs a target half-edge")
        return slide(g, EdgeOrbitRef(move.source), EdgeOrbitRef(move.target))
    raise ValueError(f"unknown move op: {move.op!r}")


def replay(g: EquivariantGraph, moves: Iterable[Move]) -> EquivariantGraph:
    for move in moves:
        g = apply_move(g, move)
    return g


def _bfs_path(g: EquivariantGraph, start: int, goal: int) -> list[int]:
    """Shortest half-edge path start -> goal, ties broken by lowest index."""
    at: dict[int, list[int]] = {v: [] for v in range(g.n_vertices)}
    for h in range(g.n_half_edges):
        at[g.attach[h]].append(h)
    parent: dict[int, tuple[int, int] | None] = {start: None}
    queue = [start]
    while queue:
        nxt: list[int] = []
        for x in queue:
            for h in at[x]:
                y = g.attach[g.involution[h]]
                if y not in parent:
                    parent[y] = (x, h)
                    nxt.append(y)
        if goal in parent:
            break
        queue = nxt
    if goal not in parent:
        raise GraphStructureError("graph is not connected")
    path: list[int] = []
    node = goal
    while parent[node] is not None:
        prev, h = parent[node]
        path.append(h)
        node = prev
    path.reverse()
    return path


def _halfedge_of_family_at(g: EquivariantGraph, family_rep: int, vertex: int) -> int:
    """The unique half-edge of {action^k(family_rep)} attached at vertex."""
    h = family_rep
    for _ in range(g.p):
        if g.attach[h] == vertex:
            return h
        h = g.half_edge_action[h]
    raise GraphStructureError(
        f"no half-edge of the family of {family_rep} is attached at {vertex}"
    )


def _slide_to_step(
    g: EquivariantGraph,
    moving: int,
    over_family: int,
    target_step: int,
    moves: list[Move],
) -> EquivariantGraph:
    """Slide the orbit of ``moving`` along the family of ``over_family`` until
    its oriented step equals ``target_step``; picks the cheaper direction."""
    p = g.p
    j = oriented_step(g, over_family)
    if j == 0:
        raise GraphStructureError("cannot slide along a loop orbit")
    i = oriented_step(g, moving)
    if i == target_step:
        return g
    j_inv = pow(j, p - 2, p)
    forward = ((target_step - i) * j_inv) % p
    backward = ((i - target_step) * j_inv) % p
    if forward <= backward:
        count, family = forward, over_family
    else:
        count, family = backward, g.involution[over_family]
    for _ in range(count):
        tau = g.attach[g.involution[moving]]
        t_half = _halfedge_of_family_at(g, family, tau)
        g = slide(g, EdgeOrbitRef(moving), EdgeOrbitRef(t_half))
        moves.append(Move("slide", moving, t_half))
    return g


def normalize(g: EquivariantGraph) -> tuple[NormalForm, tuple[Move, ...]]:
    """Reduce a valid graph to the rose-cycle normal form.

    Three phases: collapse edge orbits joining distinct vertex orbits until a
    single orbit remains; arrange an edge orbit forming a p-cycle compatible
    with the rotation (shortest-path slides, lowest half-edge index first);
    slide every other orbit along that cycle until it consists of loops.
    The returned move log replays to a canonical graph; the input rank is
    preserved and equals p * k + 1.
    """
    report = validate(g)
    if not report.ok:
        raise InvalidGraph(report)
    input_rank = rank(g)
    moves: list[Move] = []

    # Phase 1: one vertex orbit.  A connected graph with several vertex
    # orbits always has an edge orbit joining two of them, and that orbit is
    # an equivariant forest.
    while len(g.vertex_orbits()) > 1:
        for ref in edge_orbit_refs(g):
            u = g.attach[ref.half_edge]
            w = g.attach[g.involution[ref.half_edge]]
            if g.vertex_orbit_rep(u) != g.vertex_orbit_rep(w):
                moves.append(Move("collapse", ref.half_edge))
                g = collapse_orbit(g, ref)
                break
        else:
            raise AssertionError("connected graph with no inter-orbit edge orbit")

    # Phase 2: find or build an edge orbit of oriented step 1 (an edge from
    # v to its rotate, whose orbit is then automatically a p-cycle).
    base = 0
    cycle_half: int | None = None
    while True:
        path = _bfs_path(g, base, g.vertex_action[base])
        if len(path) == 1:
            cycle_half = path[0]
            break
        slid = False
        for i in range(len(path) - 1):
            if g.orbit_rep(path[i]) != g.orbit_rep(path[i + 1]):
                moves.append(Move("slide", path[i], path[i + 1]))
                g = slide(g, EdgeOrbitRef(path[i]), EdgeOrbitRef(path[i + 1]))
                slid = True
                break
        if slid:
            continue
        # The whole shortest path lies in one orbit, which therefore forms a
        # p-cycle of some step j.  Slide any other orbit along it to step 1;
        # with only one orbit in the whole graph there is nothing to slide
        # and no move sequence can reach the normal form.
        cycle_orbit = g.orbit_rep(path[0])
        others = [r for r in edge_orbit_refs(g) if r.half_edge != cycle_orbit]
        if not others:
            raise NormalizationError(
                f"the only edge orbit is a cycle of step {unoriented_step(g, path[0])}; "
                "no equivariant move can change it into the standard p-cycle"
            )
        g = _slide_to_step(g, others[0].half_edge, path[0], 1, moves)

    # Phase 3: every other orbit becomes loops (step 0).
    for ref in edge_orbit_refs(g):
        if g.orbit_rep(ref.half_edge) == g.orbit_rep(cycle_half):
            continue
        g = _slide_to_step(g, ref.half_edge, cycle_half, 0, moves)

    steps = orbit_step_multiset(g)
    loops = steps.count(0)
    if not is_canonical_form(g):
        raise AssertionError(f"normalization ended off normal form: steps {steps}")
    if rank(g) != input_rank:
        raise AssertionError("normalization changed the rank")
    return NormalForm(p=g.p, loops_per_vertex=loops, rank=input_rank), tuple(moves)


# ---------------------------------------------------------------------------
# Randomized valid inputs (inverse moves from canonical forms)


def scramble_graph(
    g: EquivariantGraph,
    rng: Random,
    max_slides: int = 6,
    max_expansions: int = 4,
) -> tuple[EquivariantGraph, list[EquivariantGraph]]:
    """Apply random inverse moves: slides (while a single vertex orbit with at
    least two edge orbits allows them), then equivariant expansions.  Every
    intermediate graph is valid by construction; the trace is returned oldest
    first."""
    trace = [g]
    if len(g.vertex_orbits()) == 1 and len(edge_orbit_refs(g)) >= 2:
        for _ in range(rng.randrange(0, max_slides + 1)):
            refs = edge_orbit_refs(g)
            s_ref, t_ref = rng.sample(refs, 2)
            hs = s_ref.half_edge if rng.random() < 0.5 else g.involution[s_ref.half_edge]
            t_family = t_ref.half_edge if rng.random() < 0.5 else g.involution[t_ref.half_edge]
            ht = _halfedge_of_family_at(g, t_family, g.attach[g.involution[hs]])
            g = slide(g, EdgeOrbitRef(hs), EdgeOrbitRef(ht))
            trace.append(g)
    for _ in range(rng.randrange(0, max_expansions + 1)):
        vertex = rng.randrange(g.n_vertices)
        candidates = g.half_edges_at(vertex)
        moved = [h for h in candidates if rng.random() < 0.5]
        g, _ = expand_orbit(g, vertex, moved)
        trace.append(g)
    return g, trace


def random_valid_graph(
    p: int,
    max_rank: int,
    rng: Random,
    max_slides: int = 6,
    max_expansions: int = 4,
    return_trace: bool = False,
):
    """A valid graph generated by inverse moves from a random canonical form.

    Moves preserve the rank, so the rank is fixed by the chosen canonical
    form and stays within ``max_rank``.
    """
    if max_rank < 1:
        raise ValueError("max_rank must be >= 1")
    k = rng.randrange(0, (max_rank - 1) // p + 1)
    g, trace = scramble_graph(
        canonical_graph(p, k), rng, max_slides=max_slides, max_expansions=max_expansions
    )
    if return_trace:
        return g, trace
    return g


# ---------------------------------------------------------------------------
# File format


def to_json_obj(g: EquivariantGraph) -> dict:
    return {
        "p": g.p,
        "vertices": g.n_vertices,
        "half_edges": [
            {"id": h, "partner": g.involution[h], "vertex": g.attach[h]}
            for h in range(g.n_half_edges)
        ],
        "vertex_action": list(g.vertex_action),
        "half_edge_action": list(g.half_edge_action),
    }


def from_json_obj(obj: dict) -> EquivariantGraph:
    try:
        records = sorted(obj["half_edges"], key=lambda r: r["id"])
        ids = [r["id"] for r in records]
        if ids != list(range(len(ids))):
            raise GraphStructureError("half_edge ids must be exactly 0..H-1")
        return EquivariantGraph(
            p=obj["p"],
            n_vertices=obj["vertices"],
            involution=tuple(r["partner"] for r in records),
            attach=tuple(r["vertex"] for r in records),
            vertex_action=tuple(obj["vertex_action"]),
            half_edge_action=tuple(obj["half_edge_action"]),
        )
    except KeyError as exc:
        raise GraphStructureError(f"missing graph field: {exc}") from exc


def dumps(g: EquivariantGraph) -> str:
    return json.dumps(to_json_obj(g), indent=2, sort_keys=True) + "\n"


def loads(text: str) -> EquivariantGraph:
    return from_json_obj(json.loads(text))
