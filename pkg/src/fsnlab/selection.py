"""Reduced-network construction from eigenvector entry ratios.

Each agent keeps only the neighbors whose eigenvector entry is smaller than
its own (the "slower" neighbors); ties are dropped on both sides so that
mutually symmetric agents never follow each other.  The fully-autonomous
variant works blockwise on the Fiedler vector and keeps the core region
bidirectional; the signed variant compares entry magnitudes.
"""

from __future__ import annotations

import math
from collections import deque
from typing import Iterable, Optional

import numpy as np

from .graphs import (Arc, DirectedNetwork, GraphError, Network,
                     SemiAutonomousConfig, augmented_signed_network,
                     reduced_laplacian, signed_reduced_laplacian,
                     structural_balance_partition)
from .blocks import FiedlerClassification
from .spectral import jacobi_eigh

EPS_TIE = 1e-10


def _follows(vi: float, vj: float, eps_tie: float) -> bool:
    """Strictly-greater ratio test with a symmetric tie guard."""
    if vj == 0:
        return False
    r = vi / vj
    if abs(r - 1.0) < eps_tie:
        return False
    return r > 1.0


def _checked_positive_vector(net: Network, cfg: SemiAutonomousConfig,
                             v1: np.ndarray) -> np.ndarray:
    v1 = np.asarray(v1, dtype=float)
    if len(v1) != net.n:
        raise GraphError(f"eigenvector length {len(v1)} != n={net.n}")
    if float(v1.min()) <= 0:
        raise GraphError("principal eigenvector must be strictly positive")
    for node in cfg.leader_nodes:
        if node > net.n:
            raise GraphError(f"leader node {node} outside 1..{net.n}")
    return v1


def fsn_san(net: Network, cfg: SemiAutonomousConfig, v1: np.ndarray,
            eps_tie: float = EPS_TIE) -> DirectedNetwork:
    """Keep the slower neighbors of a leader-driven network.

    ``v1`` is the positive principal eigenvector of the perturbed
    Laplacian; the arc (i <- j) survives exactly when v1[i]/v1[j] > 1.
    The result is acyclic because retained arcs strictly descend in v1.
    """
    v1 = _checked_positive_vector(net, cfg, v1)
    arcs = []
    for e in net.edges:
        if _follows(v1[e.i - 1], v1[e.j - 1], eps_tie):
            arcs.append(Arc(e.i, e.j, e.w))
        if _follows(v1[e.j - 1], v1[e.i - 1], eps_tie):
            arcs.append(Arc(e.j, e.i, e.w))
    return DirectedNetwork(net.n, tuple(arcs), name=f"{net.name}-fsn")


def ffn_san(net: Network, cfg: SemiAutonomousConfig, v1: np.ndarray,
            eps_tie: float = EPS_TIE) -> DirectedNetwork:
    """Keep the faster neighbors instead: the arc reversal of the slower rule.

    Isolates followers from the external inputs; ties are dropped on both
    sides exactly as in :func:`fsn_san`.
    """
    v1 = _checked_positive_vector(net, cfg, v1)
    arcs = []
    for e in net.edges:
        if _follows(v1[e.j - 1], v1[e.i - 1], eps_tie):
            arcs.append(Arc(e.i, e.j, e.w))
        if _follows(v1[e.i - 1], v1[e.j - 1], eps_tie):
            arcs.append(Arc(e.j, e.i, e.w))
    return DirectedNetwork(net.n, tuple(arcs), name=f"{net.name}-ffn")


def fsn_fan(net: Network, v2: np.ndarray, cls: FiedlerClassification,
            eps_tie: float = EPS_TIE) -> DirectedNetwork:
    """Slower-neighbor reduction of an autonomous network via its Fiedler vector.

    Edges of the core block and of zero blocks stay bidirectional; inside a
    positive or negative block the arc (i <- j) survives when the entry
    ratio exceeds 1 or is negative.  A neighbor sitting exactly at zero (a
    core node) is always retained by its nonzero neighbors, never the other
    way around.
    """
    v2 = np.asarray(v2, dtype=float)
    if len(v2) != net.n:
        raise GraphError(f"eigenvector length {len(v2)} != n={net.n}")
    decomp = cls.decomposition
    arcs = []
    for e in net.edges:
        label = cls.block_labels[decomp.block_of_edge(e.i, e.j)]
        if label in ("core", "zero"):
            arcs.append(Arc(e.i, e.j, e.w))
            arcs.append(Arc(e.j, e.i, e.w))
            continue
        for a, b in ((e.i, e.j), (e.j, e.i)):
            sa, sb = cls.sign_of(a), cls.sign_of(b)
            if sb == 0 and sa != 0:
                arcs.append(Arc(a, b, e.w))  # ratio diverges: retained
                continue
            if sa == 0:
                continue  # ratio 0 lies in [0, 1]: dropped
            r = v2[a - 1] / v2[b - 1]
            if r < 0 or (r > 1.0 and abs(r - 1.0) >= eps_tie):
                arcs.append(Arc(a, b, e.w))
    return DirectedNetwork(net.n, tuple(arcs), name=f"{net.name}-fsn")


def fsn_signed_san(net: Network, cfg: SemiAutonomousConfig, v1s: np.ndarray,
                   eps_tie: float = EPS_TIE) -> DirectedNetwork:
    """Slower-neighbor reduction of a signed leader-driven network.

    Requires the network plus its input wiring to be structurally balanced;
    retention compares entry magnitudes, which matches gauging the signs
    away and applying the unsigned rule.
    """
    v1s = np.asarray(v1s, dtype=float)
    if len(v1s) != net.n:
        raise GraphError(f"eigenvector length {len(v1s)} != n={net.n}")
    if structural_balance_partition(augmented_signed_network(net, cfg)) is None:
        raise GraphError("network plus input wiring is not structurally balanced")
    arcs = []
    for e in net.edges:
        if _follows(abs(v1s[e.i - 1]), abs(v1s[e.j - 1]), eps_tie):
            arcs.append(Arc(e.i, e.j, e.w))
        if _follows(abs(v1s[e.j - 1]), abs(v1s[e.i - 1]), eps_tie):
            arcs.append(Arc(e.j, e.i, e.w))
    return DirectedNetwork(net.n, tuple(arcs), name=f"{net.name}-fsn")


def reachable_from(dnet: DirectedNetwork, sources: Iterable[int]) -> dict[int, bool]:
    """Which nodes the given sources influence through retained arcs.

    Influence travels from a followed node to its follower.
    """
    influence: dict[int, list[int]] = {i: [] for i in range(1, dnet.n + 1)}
    for a in dnet.arcs:
        influence[a.followed].append(a.follower)
    seen = set()
    queue = deque()
    for s in sources:
        if not 1 <= s <= dnet.n:
            raise GraphError(f"source {s} outside 1..{dnet.n}")
        if s not in seen:
            seen.add(s)
            queue.append(s)
    while queue:
        u = queue.popleft()
        for v in influence[u]:
            if v not in seen:
                seen.add(v)
                queue.append(v)
    return {i: i in seen for i in range(1, dnet.n + 1)}


def reachable_from_inputs(dnet: DirectedNetwork,
                          cfg: SemiAutonomousConfig) -> dict[int, bool]:
    """Which agents the external inputs still influence after reduction."""
    return reachable_from(dnet, cfg.leader_nodes)


def _strong_components(dnet: DirectedNetwork) -> list[list[int]]:
    """Strongly connected components of the arc digraph (iterative Tarjan)."""
    out = dnet.retained
    index: dict[int, int] = {}
    low: dict[int, int] = {}
    on_stack: set[int] = set()
    comp_stack: list[int] = []
    comps: list[list[int]] = []
    counter = 0
    for start in range(1, dnet.n + 1):
        if start in index:
            continue
        work = [(start, iter(out[start]))]
        index[start] = low[start] = counter
        counter += 1
        comp_stack.append(start)
        on_stack.add(start)
        while work:
            u, it = work[-1]
            advanced = False
            for v in it:
                if v not in index:
                    index[v] = low[v] = counter
                    counter += 1
                    comp_stack.append(v)
                    on_stack.add(v)
                    work.append((v, iter(out[v])))
                    advanced = True
                    break
                elif v in on_stack:
                    low[u] = min(low[u], index[v])
            if advanced:
                continue
            work.pop()
            if work:
                p = work[-1][0]
                low[p] = min(low[p], low[u])
            if low[u] == index[u]:
                comp = []
                while True:
                    w = comp_stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == u:
                        break
                comps.append(sorted(comp))
    return comps


def reduced_spectrum(dnet: DirectedNetwork,
                     cfg: Optional[SemiAutonomousConfig] = None,
                     signed: bool = False) -> np.ndarray:
    """Eigenvalues of the reduced generator, read off its block structure.

    After condensing strongly connected components the generator is block
    triangular, so its spectrum is the union of the diagonal blocks'
    spectra; every nontrivial component our constructions produce is
    symmetric, so no general non-symmetric solve is ever needed.
    """
    L = signed_reduced_laplacian(dnet) if signed else reduced_laplacian(dnet)
    if cfg is not None:
        for link in cfg.leader_links:
            L[link.node - 1, link.node - 1] += 1.0
    values: list[float] = []
    for comp in _strong_components(dnet):
        idx = np.array([c - 1 for c in comp])
        block = L[np.ix_(idx, idx)]
        if len(comp) == 1:
            values.append(float(block[0, 0]))
        else:
            sym_defect = float(np.abs(block - block.T).max())
            if sym_defect > 1e-9 * max(1.0, float(np.abs(block).max())):
                raise GraphError(
                    "strongly connected component has an asymmetric generator "
                    "block; spectrum cannot be read structurally")
            w, _ = jacobi_eigh(block)
            values.extend(float(x) for x in w)
    return np.sort(np.array(values))


def reduced_symmetric_fiedler(dnet: DirectedNetwork,
                              signed: bool = False) -> tuple[float, np.ndarray]:
    """Second eigenvalue of the symmetrized reduced generator, and the
    mean-free unit vector minimizing its quadratic form.

    The minimizer over vectors orthogonal to the all-ones direction is the
    certificate the convergence lower bound is evaluated on; for a symmetric
    reduced generator it coincides with the ordinary Fiedler vector.
    """
    n = dnet.n
    if n < 2:
        raise GraphError("symmetrized Fiedler data needs at least two nodes")
    L = signed_reduced_laplacian(dnet) if signed else reduced_laplacian(dnet)
    M = (L + L.T) / 2.0
    w, _ = jacobi_eigh(M)
    lam2 = float(w[1])
    # Orthonormal basis of the mean-free subspace, from Householder applied
    # to the all-ones direction: columns 2..n of the reflector.
    e = np.zeros(n)
    e[0] = 1.0
    ones = np.ones(n) / math.sqrt(n)
    u = ones - e
    H = np.eye(n) - 2.0 * np.outer(u, u) / float(u @ u)
    P = H[:, 1:]
    wq, Vq = jacobi_eigh(P.T @ M @ P)
    vbar = P @ Vq[:, 0]
    vbar = vbar / np.linalg.norm(vbar)
    return lam2, vbar


def fiedler_lower_bound(L: np.ndarray, dnet: DirectedNetwork,
                        vbar: np.ndarray) -> float:
    """Lower bound on the reduced network's algebraic connectivity.

    Adds, over every dropped neighbor choice (i, j), the weighted term
    w_ij * vbar[i] * (vbar[j] - vbar[i]) to the original second eigenvalue.
    With nothing dropped the bound is that eigenvalue itself.
    """
    L = np.asarray(L, dtype=float)
    vbar = np.asarray(vbar, dtype=float)
    n = dnet.n
    w, _ = jacobi_eigh(L)
    lam2 = float(w[1])
    total = 0.0
    kept = dnet.arc_set
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i == j or L[i - 1, j - 1] == 0.0:
                continue
            if (i, j) in kept:
                continue
            w_ij = -float(L[i - 1, j - 1])
            total += w_ij * vbar[i - 1] * (vbar[j - 1] - vbar[i - 1])
    return lam2 + total


def tree_diameter_bound(diam: int) -> float:
    """Upper bound on a tree's algebraic connectivity from its diameter."""
    if diam < 1:
        raise ValueError(f"diameter must be at least 1, got {diam}")
    return 2.0 * (1.0 - math.cos(math.pi / (diam + 1)))
