"""Generators for bound-achieving instances.

The incremental-crossing generator emits node encodings in increasing order of
crossing number until the arbitrary-routing bound is met, then turns them into
a topology by letting path i traverse every node whose encoding has bit i set
and linking consecutive path nodes. The other generators (staircase half-grid,
monitoring trees, fat-trees) realize the consistent-routing and client/server
bounds structurally.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Mapping, Sequence

from .bounds import Rational, bound_from_nmax, bound_single_server, i_max
from .identifiability import Encoding
from .model import Graph, MonitoringPath, PathSet, build_graph

_ENUMERATION_GUARD = 2_000_000  # candidate subsets examined per emitted encoding


class ConstructionError(RuntimeError):
    """The generator could not realize the requested instance."""


@dataclass(frozen=True)
class EncodingSet:
    """A set of distinct node encodings over m paths."""

    m: int
    members: frozenset[int]

    def __post_init__(self) -> None:
        limit = 1 << self.m
        for b in self.members:
            if not 0 < b < limit:
                raise ValueError(f"encoding {b:#x} out of range for m={self.m} (or zero)")

    def loads(self) -> tuple[int, ...]:
        """Per-path load: how many member encodings have bit i set."""
        return tuple(
            sum(1 for b in self.members if b >> i & 1) for i in range(self.m)
        )


@dataclass(frozen=True)
class ConstructedInstance:
    """A generated topology with its monitoring paths and per-node encodings."""

    graph: Graph
    paths: PathSet
    encodings: tuple[int, ...]
    meta: Mapping[str, object]

    def encoding_strings(self) -> tuple[str, ...]:
        m = self.paths.m
        return tuple(Encoding(b, m).to01() for b in self.encodings)


def _bit_positions(bits: int) -> tuple[int, ...]:
    return tuple(i for i in range(bits.bit_length()) if bits >> i & 1)


def _canonical_key(bits: int) -> tuple[int, tuple[int, ...]]:
    # crossing number first, then the sorted path indices of the ones
    return (bits.bit_count(), _bit_positions(bits))


def _layer(m: int, k: int) -> list[int]:
    """All encodings with exactly k ones, in ascending-path-index (combination) order."""
    out = []
    for subset in combinations(range(m), k):
        bits = 0
        for i in subset:
            bits |= 1 << i
        out.append(bits)
    return out


def path_completion(b_v: EncodingSet, d: Sequence[int]) -> EncodingSet:
    """Fix up overlength paths by swapping one encoding for a heavier one.

    With S the set of paths whose load sits one short of its target length,
    pick an encoding b' that avoids all of S, drawn from the members with |S|
    fewer ones than the heaviest layer, and replace it by b' with the S bits
    added. The swap exists whenever the members include the complete layers
    below the heaviest one; the candidate scan follows ascending path-index
    order, so the choice is deterministic.
    """
    m = b_v.m
    loads = b_v.loads()
    short = [k for k in range(m) if loads[k] == d[k] - 1]
    if not short:
        return b_v
    over = [k for k in range(m) if loads[k] > d[k]]
    if over:
        raise ConstructionError(f"paths {over} already exceed their target lengths")
    top = max(b.bit_count() for b in b_v.members)
    want = top + 1 - len(short)
    if want < 1:
        raise ConstructionError(
            f"{len(short)} overlength paths cannot be completed from crossing-{top} members"
        )
    s_mask = 0
    for k in short:
        s_mask |= 1 << k
    for candidate in _layer(m, want):
        if candidate & s_mask:
            continue
        if candidate not in b_v.members:
            continue
        swapped = candidate | s_mask
        if swapped in b_v.members:
            continue
        members = set(b_v.members)
        members.remove(candidate)
        members.add(swapped)
        return EncodingSet(m=m, members=frozenset(members))
    raise ConstructionError("no eligible encoding found for path completion")


def _arrange_top_layer(
    m: int, imax: int, residual: list[int], taken: set[int], target: int
) -> list[int]:
    """Emit ``target`` distinct crossing-(imax+1) encodings without exceeding
    any path's residual target length.

    Candidates at each step are ordered by largest residual profile, ties by
    path index, and the search backtracks on dead ends (greedy alone can trap
    itself, e.g. six paths of residual 2 where the lexicographic choice leaves
    only an already-used pair). The first solution in this order is returned,
    so the result is deterministic.
    """
    width = imax + 1
    picked: list[int] = []
    examined = 0

    def step() -> bool:
        nonlocal examined
        if len(picked) == target:
            return True
        eligible = [k for k in range(m) if residual[k] >= 1]
        if len(eligible) < width:
            return False
        candidates = []
        for subset in combinations(eligible, width):
            bits = 0
            for k in subset:
                bits |= 1 << k
            if bits in taken:
                continue
            profile = tuple(sorted((residual[k] for k in subset), reverse=True))
            candidates.append((tuple(-x for x in profile), subset, bits))
        candidates.sort()
        for _, subset, bits in candidates:
            examined += 1
            if examined > _ENUMERATION_GUARD:
                raise ConstructionError(
                    "crossing-arrangement search space too large; "
                    "reduce m or the requested average length"
                )
            for k in subset:
                residual[k] -= 1
            taken.add(bits)
            picked.append(bits)
            if step():
                return True
            picked.pop()
            taken.discard(bits)
            for k in subset:
                residual[k] += 1
        return False

    if not step():
        raise ConstructionError(
            f"arrangement cannot place {target} distinct top-layer encodings "
            "within the per-path length targets"
        )
    return picked


def _instance_from_encodings(
    encodings: Sequence[int], m: int, meta: dict[str, object]
) -> ConstructedInstance:
    ordered = sorted(encodings, key=_canonical_key)
    index_of = {bits: j for j, bits in enumerate(ordered)}
    paths = []
    for i in range(m):
        members = [b for b in ordered if b >> i & 1]
        paths.append(MonitoringPath(tuple(index_of[b] for b in members)))
    path_set = PathSet(tuple(paths))
    edges = set()
    for p in path_set.paths:
        edges.update(
            (min(u, v), max(u, v)) for u, v in zip(p.nodes, p.nodes[1:])
        )
    labels = {j: Encoding(b, m).to01() for j, b in enumerate(ordered)}
    graph = build_graph(sorted(edges), labels=labels, node_count=len(ordered))
    return ConstructedInstance(
        graph=graph, paths=path_set, encodings=tuple(ordered), meta=meta
    )


def ica(m: int, dbar: Rational) -> ConstructedInstance:
    """Incremental crossing arrangement: a topology meeting the arbitrary-routing
    bound exactly, with m paths of average length dbar.

    Complete crossing layers are taken up to the largest layer the budget
    admits, the remaining budget is spent greedily on the next layer, and a
    final completion swap settles paths left one node short of their target.
    """
    if m < 2:
        raise ValueError("m must be >= 2")
    dbar = Fraction(dbar)
    if dbar < 1:
        raise ValueError("average path length must be >= 1")
    if dbar > (1 << (m - 1)):
        raise ValueError(
            f"average length {dbar} > 2^(m-1) = {1 << (m - 1)}: "
            "longer paths would be forced to revisit duplicate encodings, "
            "so the bound cannot be met tightly"
        )
    nmax = m * dbar
    if nmax.denominator != 1:
        raise ValueError(f"m*dbar = {nmax} is not an integer")
    nmax = int(nmax)
    imax = i_max(m, nmax)
    psi = bound_from_nmax(m, None, nmax)

    floor_d = int(dbar)
    m1 = int(m * (dbar - floor_d))
    lengths = [floor_d + 1 if i < m1 else floor_d for i in range(m)]

    taken: set[int] = set()
    for k in range(1, imax + 1):
        taken.update(_layer(m, k))
    per_path_base = sum(comb(m - 1, k - 1) for k in range(1, imax + 1))
    residual = [lengths[k] - per_path_base for k in range(m)]
    if any(r < 0 for r in residual):
        raise ConstructionError("complete layers already exceed a path's target length")

    target = psi - sum(comb(m, k) for k in range(1, imax + 1))
    if imax < m and target > 0:
        _arrange_top_layer(m, imax, residual, taken, target)
    elif target > 0:
        raise ConstructionError("budget demands encodings beyond the all-paths layer")

    b_v = EncodingSet(m=m, members=frozenset(taken))
    completed = False
    replaced: tuple[str, str] | None = None
    loads = b_v.loads()
    if any(loads[k] == lengths[k] - 1 for k in range(m)):
        before = set(b_v.members)
        b_v = path_completion(b_v, lengths)
        removed = before - set(b_v.members)
        added = set(b_v.members) - before
        completed = True
        replaced = (
            Encoding(next(iter(removed)), m).to01(),
            Encoding(next(iter(added)), m).to01(),
        )
    loads = b_v.loads()
    if list(loads) != lengths:
        raise ConstructionError(
            f"arrangement finished with per-path loads {loads}, wanted {lengths}"
        )
    if len(b_v.members) != psi:
        raise ConstructionError(
            f"arrangement produced {len(b_v.members)} encodings, bound value is {psi}"
        )
    meta: dict[str, object] = {
        "kind": "ica",
        "m": m,
        "dbar": str(dbar),
        "lengths": tuple(lengths),
        "n_max": nmax,
        "i_max": imax,
        "bound": psi,
        "path_completion": completed,
    }
    if replaced:
        meta["replaced"] = replaced
    return _instance_from_encodings(sorted(b_v.members), m, meta)


# ---------------------------------------------------------------------------
# Half-grid
# ---------------------------------------------------------------------------


def _half_grid_ids(m: int) -> dict[tuple[int, int], int]:
    """Node ids for the half-grid: key (i, j) with i < j is the node shared by
    paths i and j, key (i, i) the private node of path i (0-based paths)."""
    ids: dict[tuple[int, int], int] = {}
    next_id = 0
    for i in range(m):
        for j in range(i + 1, m):
            ids[(i, j)] = next_id
            next_id += 1
        ids[(i, i)] = next_id
        next_id += 1
    return ids


def half_grid(m: int) -> ConstructedInstance:
    """Staircase topology with one node per path pair and per path: m(m+1)/2
    nodes, every path of length m, consistent routing, all nodes identifiable.

    Path i starts at its private node and then meets the other paths in
    descending index order, which stacks the shared nodes into the staircase.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    ids = _half_grid_ids(m)
    paths = []
    for i in range(m):
        seq = [ids[(i, i)]]
        for j in range(m - 1, -1, -1):
            if j == i:
                continue
            seq.append(ids[(min(i, j), max(i, j))])
        paths.append(MonitoringPath(tuple(seq)))
    path_set = PathSet(tuple(paths))
    edges = set()
    for p in path_set.paths:
        edges.update((min(u, v), max(u, v)) for u, v in zip(p.nodes, p.nodes[1:]))
    n = m * (m + 1) // 2
    encodings = [0] * n
    labels = {}
    for (i, j), node in ids.items():
        encodings[node] = (1 << i) | (1 << j)
        labels[node] = f"p{i + 1}" if i == j else f"p{i + 1}*p{j + 1}"
    graph = build_graph(sorted(edges), labels=labels, node_count=n)
    meta = {"kind": "half-grid", "m": m, "dbar": str(m), "bound": n}
    return ConstructedInstance(graph=graph, paths=path_set, encodings=tuple(encodings), meta=meta)


# ---------------------------------------------------------------------------
# Monitoring trees (single server)
# ---------------------------------------------------------------------------


def _grow_full_binary(parent: list[int], root: int, leaves: int) -> list[int]:
    """Attach a minimum-depth full binary tree with the given leaf count under
    ``root``; returns the leaf node ids. Splitting ceil/floor keeps the depth
    at ceil(log2 leaves)."""
    if leaves == 1:
        return [root]
    left = (leaves + 1) // 2
    right = leaves - left
    out = []
    for count in (left, right):
        child = len(parent)
        parent.append(root)
        out.extend(_grow_full_binary(parent, child, count))
    return out


def monitoring_tree(m: int, d_max: int) -> ConstructedInstance:
    """Root-anchored tree of m leaf-to-root paths maximizing identifiable nodes
    under the path-length cap; matches the single-server bound exactly.

    When the cap allows, this is a full binary tree with m leaves; otherwise a
    common root joins floor(m / 2^(d_max-2)) perfect subtrees of maximal depth
    plus one smaller full subtree for the leftover leaves.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    if d_max < 2 and m > 1:
        raise ValueError("d_max must be >= 2 when m > 1")
    parent: list[int] = [0]  # node 0 is the root, its own parent
    cap_ok = d_max >= (m - 1).bit_length() + 1
    if cap_ok:
        if m == 1:
            leaves = [0]
        else:
            leaves = _grow_full_binary(parent, 0, m)
    else:
        width = 1 << (d_max - 2)
        leaves = []
        for _ in range(m // width):
            sub = len(parent)
            parent.append(0)
            leaves.extend(_grow_full_binary(parent, sub, width))
        rest = m % width
        if rest:
            sub = len(parent)
            parent.append(0)
            leaves.extend(_grow_full_binary(parent, sub, rest))
    paths = []
    for leaf in leaves:
        seq = [leaf]
        node = leaf
        while node != 0:
            node = parent[node]
            seq.append(node)
        paths.append(MonitoringPath(tuple(seq)))
    path_set = PathSet(tuple(paths))
    n = len(parent)
    edges = [(min(child, parent[child]), max(child, parent[child])) for child in range(1, n)]
    graph = build_graph(edges, node_count=n)
    cols = [0] * n
    for i, p in enumerate(path_set.paths):
        for u in p.nodes:
            cols[u] |= 1 << i
    expected = bound_single_server(m, None, d_max).bound
    if n != expected:
        raise ConstructionError(f"tree has {n} nodes, single-server bound is {expected}")
    meta = {"kind": "monitoring-tree", "m": m, "d_max": d_max, "bound": expected}
    return ConstructedInstance(graph=graph, paths=path_set, encodings=tuple(cols), meta=meta)


# ---------------------------------------------------------------------------
# Fat-trees
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FatTree:
    """Three-layer fat-tree of k-port switches with the usual pod addressing:
    edge/aggregation switches are 10.pod.switch.1, cores 10.k.j.i, hosts
    10.pod.switch.{2..k/2+1}."""

    k: int
    graph: Graph
    core: tuple[int, ...]
    aggregation: tuple[int, ...]
    edge: tuple[int, ...]
    hosts: tuple[int, ...]
    ids: Mapping[str, int]  # address -> node id

    @property
    def address_of(self) -> Mapping[int, str]:
        return self.graph.labels or {}

    def id_of(self, address: str) -> int:
        return self.ids[address]

    def node_for(self, which: int | str) -> int:
        return which if isinstance(which, int) else self.ids[which]


def fat_tree(k: int) -> FatTree:
    """Build the k-ary three-layer fat-tree: k pods of k/2 edge and k/2
    aggregation switches, (k/2)^2 cores, and k/2 hosts per edge switch."""
    if k < 2 or k % 2:
        raise ValueError("k must be an even integer >= 2")
    half = k // 2
    labels: dict[int, str] = {}
    core: list[int] = []
    agg: list[int] = []
    edge_sw: list[int] = []
    hosts: list[int] = []
    next_id = 0

    def add(label: str) -> int:
        nonlocal next_id
        node = next_id
        labels[node] = label
        next_id += 1
        return node

    core_id: dict[tuple[int, int], int] = {}
    for j in range(1, half + 1):
        for i in range(1, half + 1):
            node = add(f"10.{k}.{j}.{i}")
            core_id[(j, i)] = node
            core.append(node)
    agg_id: dict[tuple[int, int], int] = {}
    edge_id: dict[tuple[int, int], int] = {}
    host_id: dict[tuple[int, int, int], int] = {}
    for pod in range(k):
        for sw in range(half, k):
            agg_id[(pod, sw)] = add(f"10.{pod}.{sw}.1")
            agg.append(agg_id[(pod, sw)])
        for sw in range(half):
            edge_id[(pod, sw)] = add(f"10.{pod}.{sw}.1")
            edge_sw.append(edge_id[(pod, sw)])
        for sw in range(half):
            for h in range(2, half + 2):
                host_id[(pod, sw, h)] = add(f"10.{pod}.{sw}.{h}")
                hosts.append(host_id[(pod, sw, h)])

    edges: list[tuple[int, int]] = []
    for pod in range(k):
        for sw in range(half):
            for a in range(half, k):
                edges.append((edge_id[(pod, sw)], agg_id[(pod, a)]))
            for h in range(2, half + 2):
                edges.append((edge_id[(pod, sw)], host_id[(pod, sw, h)]))
        for a in range(half, k):
            j = a - half + 1  # aggregation row: connects to cores 10.k.j.*
            for i in range(1, half + 1):
                edges.append((agg_id[(pod, a)], core_id[(j, i)]))
    graph = build_graph(edges, labels=labels, node_count=next_id)
    return FatTree(
        k=k,
        graph=graph,
        core=tuple(core),
        aggregation=tuple(agg),
        edge=tuple(edge_sw),
        hosts=tuple(hosts),
        ids={addr: node for node, addr in labels.items()},
    )


def _host_parts(ft: FatTree, node: int) -> tuple[int, int, int]:
    pod, sw, h = (int(x) for x in ft.address_of[node].split(".")[1:])
    return pod, sw, h


def fat_tree_route(ft: FatTree, src: int | str, dst: int | str) -> MonitoringPath:
    """Shortest host-to-host route under two-level suffix forwarding.

    On the way up, each switch picks its uplink from the destination host's
    last address byte offset by the switch's own position, which spreads
    traffic over aggregation and core switches exactly as the fat-tree's
    two-level routing tables do; the downward part of the route is forced by
    the topology.
    """
    s = ft.node_for(src)
    t = ft.node_for(dst)
    host_set = frozenset(ft.hosts)
    if s not in host_set or t not in host_set:
        raise ValueError("both endpoints must be hosts")
    if s == t:
        raise ValueError("source and destination hosts coincide")
    half = ft.k // 2
    sp, se, _ = _host_parts(ft, s)
    tp, te, th = _host_parts(ft, t)

    def edge_sw(pod: int, sw: int) -> int:
        return ft.ids[f"10.{pod}.{sw}.1"]

    def agg_sw(pod: int, sw: int) -> int:
        return ft.ids[f"10.{pod}.{sw}.1"]

    def core_sw(j: int, i: int) -> int:
        return ft.ids[f"10.{ft.k}.{j}.{i}"]

    if sp == tp and se == te:
        return MonitoringPath((s, edge_sw(sp, se), t))
    a_byte = half + (th - 2 + se) % half
    if sp == tp:
        return MonitoringPath((s, edge_sw(sp, se), agg_sw(sp, a_byte), edge_sw(tp, te), t))
    core_i = 1 + (th - 2 + a_byte) % half
    core_j = a_byte - half + 1
    return MonitoringPath(
        (
            s,
            edge_sw(sp, se),
            agg_sw(sp, a_byte),
            core_sw(core_j, core_i),
            agg_sw(tp, a_byte),
            edge_sw(tp, te),
            t,
        )
    )


def fat_tree_all_pair_paths(ft: FatTree) -> PathSet:
    """Routes for every unordered host pair, in ascending (src, dst) id order."""
    pairs = [
        (a, b)
        for idx, a in enumerate(ft.hosts)
        for b in ft.hosts[idx + 1 :]
    ]
    return PathSet(tuple(fat_tree_route(ft, a, b) for a, b in pairs))
