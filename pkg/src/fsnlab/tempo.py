"""Relative-tempo estimation and distributed neighbor selection.

The relative tempo of two agent groups is the limiting ratio of their
state-derivative norms; it equals the corresponding entry-norm ratio of the
eigenvector that dominates the derivative decay.  Agents can therefore rank
their neighbors from sampled data alone: each agent keeps a per-neighbor
ratio of successive sample differences and freezes its choice once the
estimates stop moving.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np

from .dynamics import Trajectory, step_rk4
from .graphs import (Arc, DirectedNetwork, Network, SemiAutonomousConfig,
                     is_connected, laplacian, perturbed_laplacian)
from .spectral import default_eps_gap, fiedler_pair, jacobi_eigh

EPS_STILL = 1e-14      # below this difference norm an agent counts as stalled
DEFAULT_DELTA = 0.01
DEFAULT_EPS = 1e-4
DEFAULT_TIE_MARGIN = 0.02
DEFAULT_PERSISTENCE = 25
ROUND_CAP = 100_000


class TempoError(ValueError):
    """Tempo estimation failed or a precondition is violated."""


def tempo_limit_from_eigvec(v: np.ndarray, group1: Iterable[int],
                            group2: Iterable[int]) -> float:
    """Entry-norm ratio ||v[group1]|| / ||v[group2]|| with 1-based groups."""
    v = np.asarray(v, dtype=float)
    idx1 = [i - 1 for i in group1]
    idx2 = [j - 1 for j in group2]
    if not idx1 or not idx2:
        raise TempoError("both groups must be nonempty")
    den = float(np.linalg.norm(v[idx2]))
    if den <= 1e-12 * float(np.abs(v).max()):
        raise TempoError("second group selects only zero entries")
    return float(np.linalg.norm(v[idx1])) / den


def g_ratio_series(traj: Trajectory, i: int, j: int,
                   eps_still: float = EPS_STILL) -> np.ndarray:
    """Per-sample ratio of difference norms between agents i and j.

    Entry k compares the step into sample k+1.  Rounds where agent j moved
    less than ``eps_still`` produce NaN (the stalled sentinel).
    """
    if len(traj.times) < 2:
        raise TempoError("trajectory too short for difference ratios")
    di = np.diff(traj.states[:, i - 1, :], axis=0)
    dj = np.diff(traj.states[:, j - 1, :], axis=0)
    num = np.linalg.norm(di, axis=1)
    den = np.linalg.norm(dj, axis=1)
    out = np.full(len(num), np.nan)
    ok = den >= eps_still
    out[ok] = num[ok] / den[ok]
    return out


def first_component_ratio(traj: Trajectory, u: int, v: int,
                          eps_still: float = EPS_STILL) -> np.ndarray:
    """Signed ratio of first-coordinate differences between agents u and v.

    Unlike the norm ratio this preserves sign, so opposite-moving agents
    (the two ends of a core pair) show a negative limit.
    """
    if len(traj.times) < 2:
        raise TempoError("trajectory too short for difference ratios")
    du = np.diff(traj.states[:, u - 1, 0])
    dv = np.diff(traj.states[:, v - 1, 0])
    out = np.full(len(du), np.nan)
    ok = np.abs(dv) >= eps_still
    out[ok] = du[ok] / dv[ok]
    return out


def _change_settled(change: Optional[float], prev_change: Optional[float],
                    eps: float) -> bool:
    """Whether one per-round estimate change looks like a converged tail.

    Small alone is not enough: an estimate crawling through a flat local
    extremum also changes slowly, but there the change flips sign and then
    grows again.  A genuine exponential tail keeps a constant sign with a
    non-increasing magnitude, which is what we insist on (deeply
    sub-threshold noise is exempt from the sign test).
    """
    if change is None or prev_change is None:
        return False
    if abs(change) >= eps:
        return False
    if abs(change) <= 1e-3 * eps:
        return True
    if abs(change) > abs(prev_change) + 1e-18:
        return False
    return change == 0.0 or prev_change == 0.0 or change * prev_change > 0.0


@dataclass
class AgentState:
    """Bookkeeping one agent carries while ranking its neighbors.

    The agent only ever sees its own samples and its neighbors' samples;
    ``g`` holds the latest ratio per neighbor (None until both difference
    norms were usable at least once).
    """

    id: int
    neighbors: tuple[int, ...]
    eps: float
    g: dict[int, Optional[float]] = field(default_factory=dict)
    change: dict[int, Optional[float]] = field(default_factory=dict)
    prev_change: dict[int, Optional[float]] = field(default_factory=dict)
    streak: int = 0
    done: bool = False
    done_round: Optional[int] = None

    def observe(self, diffs: dict[int, float], own: float, k: int,
                eps_still: float, persistence: int) -> None:
        if self.done:
            return
        settled = True
        for j in self.neighbors:
            old = self.g.get(j)
            if diffs[j] >= eps_still:
                self.g[j] = own / diffs[j]
            # else: stalled, keep the last finite estimate
            new = self.g.get(j)
            self.prev_change[j] = self.change.get(j)
            self.change[j] = (new - old) if (new is not None
                                             and old is not None) else None
            if not _change_settled(self.change[j], self.prev_change[j],
                                   self.eps):
                settled = False
        self.streak = self.streak + 1 if settled else 0
        if self.streak >= persistence:
            self.done = True
            self.done_round = k


@dataclass(frozen=True)
class TempoEstimate:
    follower: int
    followed: int
    g: Optional[float]
    rounds: int
    retained: bool


@dataclass(frozen=True)
class TempoReport:
    entries: tuple[TempoEstimate, ...]

    def by_pair(self) -> dict[tuple[int, int], TempoEstimate]:
        return {(e.follower, e.followed): e for e in self.entries}


def run_algorithm1(net: Network, cfg: SemiAutonomousConfig, x0: np.ndarray,
                   delta: float = DEFAULT_DELTA,
                   eps: float | dict[int, float] = DEFAULT_EPS,
                   round_cap: int = ROUND_CAP,
                   tie_margin: float = DEFAULT_TIE_MARGIN,
                   persistence: int = DEFAULT_PERSISTENCE,
                   eps_still: float = EPS_STILL,
                   ) -> tuple[DirectedNetwork, TempoReport]:
    """Distributed slower-neighbor selection from sampled state data.

    Rounds are synchronous: every ``delta`` of simulated time each agent
    receives its neighbors' new samples, updates the difference-norm ratio
    per neighbor, and stops once all its ratios have stayed put (change
    below its threshold) for ``persistence`` consecutive rounds.  An agent
    then keeps exactly the neighbors whose final ratio exceeds
    1 + ``tie_margin``; the margin absorbs the finite termination accuracy
    so symmetric pairs (true ratio 1) are dropped from both sides.

    Raises when some agent has not settled after ``round_cap`` rounds.
    """
    if not is_connected(net):
        raise TempoError("distributed selection requires a connected network")
    L_B = perturbed_laplacian(net, cfg)
    u = cfg.input_vectors()
    B = cfg.input_matrix(net.n)
    forcing = B @ u
    x0 = np.asarray(x0, dtype=float)
    if x0.ndim == 1:
        x0 = x0[:, None]
    if x0.shape != (net.n, u.shape[1]):
        raise TempoError(f"x0 shape {x0.shape} does not match "
                         f"(n={net.n}, d={u.shape[1]})")

    eps_map = eps if isinstance(eps, dict) else {i: eps for i in range(1, net.n + 1)}
    agents = {i: AgentState(i, net.neighbors[i], eps_map[i])
              for i in range(1, net.n + 1)}

    prev = x0.copy()
    cur = step_rk4(L_B, forcing, prev, delta)
    k = 1
    _exchange_round(agents, prev, cur, k, eps_still, persistence)
    while not all(a.done for a in agents.values()):
        if k >= round_cap:
            undone = sorted(i for i, a in agents.items() if not a.done)
            raise TempoError(
                f"agents {undone} did not settle within {round_cap} rounds "
                f"(delta={delta}, eps={eps_map})")
        k += 1
        nxt = step_rk4(L_B, forcing, cur, delta)
        _exchange_round(agents, cur, nxt, k, eps_still, persistence)
        prev, cur = cur, nxt

    return _harvest(net, agents, tie_margin)


def _exchange_round(agents: dict[int, AgentState], prev: np.ndarray,
                    cur: np.ndarray, k: int, eps_still: float,
                    persistence: int) -> None:
    """Synchronous round barrier: each agent sees only its neighbors."""
    diff = np.linalg.norm(cur - prev, axis=1)
    for agent in agents.values():
        visible = {j: float(diff[j - 1]) for j in agent.neighbors}
        agent.observe(visible, float(diff[agent.id - 1]), k, eps_still,
                      persistence)


def _harvest(net: Network, agents: dict[int, AgentState],
             tie_margin: float) -> tuple[DirectedNetwork, TempoReport]:
    arcs = []
    entries = []
    for i in sorted(agents):
        agent = agents[i]
        for j in agent.neighbors:
            g = agent.g.get(j)
            retained = g is not None and g > 1.0 + tie_margin
            entries.append(TempoEstimate(i, j, g, agent.done_round or 0, retained))
            if retained:
                arcs.append(Arc(i, j, net.weights[(i, j)]))
    dnet = DirectedNetwork(net.n, tuple(arcs), name=f"{net.name}-fsn-distributed")
    return dnet, TempoReport(tuple(entries))


def run_distributed_fan_tree(net: Network, x0: np.ndarray,
                             delta: float = DEFAULT_DELTA,
                             eps: float | dict[int, float] = DEFAULT_EPS,
                             round_cap: int = 2 * ROUND_CAP,
                             tie_margin: float = DEFAULT_TIE_MARGIN,
                             persistence: int = DEFAULT_PERSISTENCE,
                             eps_still: float = EPS_STILL,
                             divergence_threshold: float = 1e3,
                             ) -> tuple[DirectedNetwork, TempoReport]:
    """Distributed slower-neighbor selection on an autonomous tree.

    Agents track the signed first-coordinate difference ratio per neighbor
    and keep those with a settled ratio above 1 + ``tie_margin`` or below
    -``tie_margin``.  A ratio whose magnitude keeps growing past
    ``divergence_threshold`` marks a neighbor that is about to stop moving
    altogether (a zero-entry core node): the pair is flagged as divergent
    and retained without waiting for the estimate to settle.

    Restricted to trees whose Laplacian has a well-separated second
    eigenvalue and no edge joining two zero-entry nodes; stars and other
    repeated-eigenvalue trees are rejected.
    """
    if len(net.edges) != net.n - 1 or not is_connected(net):
        raise TempoError("distributed autonomous selection needs a tree")
    L = laplacian(net)
    pair = fiedler_pair(L)
    if not pair.is_simple:
        raise TempoError("second Laplacian eigenvalue is repeated; "
                         "the selection rule is undefined on this tree")
    eps_zero = 1e-8 * float(np.abs(pair.vector).max())
    for e in net.edges:
        if (abs(pair.vector[e.i - 1]) <= eps_zero
                and abs(pair.vector[e.j - 1]) <= eps_zero):
            raise TempoError(f"edge ({e.i},{e.j}) joins two zero entries "
                             "(zero block); not supported distributively")

    x0 = np.asarray(x0, dtype=float)
    if x0.ndim == 1:
        x0 = x0[:, None]
    if x0.shape[0] != net.n:
        raise TempoError(f"x0 has {x0.shape[0]} rows, tree has n={net.n}")
    eps_map = eps if isinstance(eps, dict) else {i: eps for i in range(1, net.n + 1)}

    ratio: dict[tuple[int, int], Optional[float]] = {}
    change: dict[tuple[int, int], Optional[float]] = {}
    prev_change: dict[tuple[int, int], Optional[float]] = {}
    divergent: dict[tuple[int, int], bool] = {}
    growth: dict[tuple[int, int], int] = {}
    for i in range(1, net.n + 1):
        for j in net.neighbors[i]:
            ratio[(i, j)] = None
            change[(i, j)] = None
            prev_change[(i, j)] = None
            divergent[(i, j)] = False
            growth[(i, j)] = 0
    streak = {i: 0 for i in range(1, net.n + 1)}
    done = {i: False for i in range(1, net.n + 1)}
    done_round = {i: 0 for i in range(1, net.n + 1)}
    forcing = np.zeros_like(x0)

    prev = x0.copy()
    cur = step_rk4(L, forcing, prev, delta)
    k = 1
    while True:
        d1 = cur[:, 0] - prev[:, 0]
        for i in range(1, net.n + 1):
            if done[i]:
                continue
            settled = True
            for j in net.neighbors[i]:
                key = (i, j)
                if divergent[key]:
                    continue
                old = ratio[key]
                if abs(d1[j - 1]) >= eps_still:
                    ratio[key] = float(d1[i - 1] / d1[j - 1])
                new = ratio[key]
                if (new is not None and old is not None
                        and abs(new) > divergence_threshold
                        and abs(new) > abs(old)):
                    growth[key] += 1
                    if growth[key] >= 3:
                        divergent[key] = True
                        continue
                else:
                    growth[key] = 0
                prev_change[key] = change[key]
                change[key] = (new - old) if (new is not None
                                              and old is not None) else None
                if not _change_settled(change[key], prev_change[key],
                                       eps_map[i]):
                    settled = False
            streak[i] = streak[i] + 1 if settled else 0
            if streak[i] >= persistence:
                done[i] = True
                done_round[i] = k
        if all(done.values()):
            break
        if k >= round_cap:
            undone = sorted(i for i in done if not done[i])
            raise TempoError(
                f"agents {undone} did not settle within {round_cap} rounds; "
                "the ratio sign may not be separating on this tree")
        k += 1
        prev, cur = cur, step_rk4(L, forcing, cur, delta)

    arcs = []
    entries = []
    for i in range(1, net.n + 1):
        for j in net.neighbors[i]:
            key = (i, j)
            r = ratio[key]
            if divergent[key]:
                retained = True
            else:
                retained = r is not None and (r > 1.0 + tie_margin
                                              or r < -tie_margin)
            entries.append(TempoEstimate(i, j, r, done_round[i], retained))
            if retained:
                arcs.append(Arc(i, j, net.weights[(i, j)]))
    dnet = DirectedNetwork(net.n, tuple(arcs), name=f"{net.name}-fsn-distributed")
    return dnet, TempoReport(tuple(entries))


def tempo_limit_oracle(M: np.ndarray, x0: np.ndarray, group1: Iterable[int],
                       group2: Iterable[int],
                       eps_gap: float | None = None,
                       min_projection: float = 1e-6) -> float:
    """Closed-form limit of the difference-norm ratio for x' = M x.

    Works directly from the eigendecomposition of the symmetric generator:
    only the eigenspace of the largest nonzero eigenvalue survives in the
    derivative as t grows, and the limit is a quadratic-form ratio over
    that eigenspace.  Serves as an independent check on simulated ratios,
    including the case of a repeated dominant eigenvalue.
    """
    M = np.asarray(M, dtype=float)
    x0 = np.asarray(x0, dtype=float).ravel()
    if eps_gap is None:
        eps_gap = default_eps_gap(M)
    w, V = jacobi_eigh(M)
    nonzero = [i for i in range(len(w)) if abs(w[i]) > eps_gap]
    if not nonzero:
        raise TempoError("generator has no nonzero eigenvalue")
    lam_dom = max(w[i] for i in nonzero)
    dom = [i for i in nonzero if abs(w[i] - lam_dom) <= eps_gap]

    beta = V.T @ x0
    proj = math.sqrt(sum(beta[i] ** 2 for i in dom))
    if proj <= min_projection * max(1.0, float(np.linalg.norm(x0))):
        raise TempoError("initial state is orthogonal to the dominant "
                         "eigenspace; the limit formula degenerates")

    idx1 = [i - 1 for i in group1]
    idx2 = [j - 1 for j in group2]
    if not idx1 or not idx2:
        raise TempoError("both groups must be nonempty")

    def quad(rows: list[int]) -> float:
        total = 0.0
        for a in dom:
            for b in dom:
                inner = float(V[rows, a] @ V[rows, b])
                total += w[a] * w[b] * inner * beta[a] * beta[b]
        return total

    num = quad(idx1)
    den = quad(idx2)
    if den <= 0.0 or den < 1e-24 * max(num, 1.0):
        raise TempoError("second group has no component on the dominant "
                         "eigenspace; the limit formula degenerates")
    return math.sqrt(num / den)
