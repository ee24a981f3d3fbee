"""Command-line front end.

Subcommands: analyze, select, simulate, tempo, distributed-select, compare.
Network arguments accept a file path or the name of a bundled fixture
(g6, g8, g8-signed, g12, t12).  Random initial states, used whenever a file
carries no x0, derive from the FSNLAB_SEED environment variable (default 7).

Exit codes: 0 success and all requested verifications passed, 1 a
verification failed or a computation could not complete, 2 bad usage or an
unreadable/invalid input file.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import Optional

import numpy as np

from . import __version__
from .blocks import ClassificationError, block_cut_tree, classify_fiedler
from .dynamics import (SimulationConfig, SimulationError, Trajectory,
                       empirical_rate, fan_fsn_consensus_value, simulate,
                       steady_state_san)
from .graphs import (DirectedNetwork, GraphError, Network,
                     SemiAutonomousConfig, is_connected, laplacian,
                     perturbed_laplacian, reduced_laplacian, signed_laplacian,
                     signed_perturbed_laplacian, signed_reduced_laplacian,
                     structural_balance_partition)
from .netfile import (FIXTURE_NAMES, NetworkFileError, emit_trajectory,
                      fixture_text, parse_arc_file, parse_network_file,
                      serialize_arcs)
from .selection import (ffn_san, fsn_fan, fsn_san, fsn_signed_san,
                        reachable_from, reachable_from_inputs,
                        reduced_spectrum)
from .spectral import (SpectralError, fiedler_pair, principal_pair_perturbed,
                       principal_pair_signed, smallest_eigenpairs)
from .tempo import (TempoError, first_component_ratio, g_ratio_series,
                    run_algorithm1, run_distributed_fan_tree,
                    tempo_limit_from_eigvec)

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_INPUT = 2

EIG_TOL = 1e-8          # eigen residual bound the solver enforces
SIM_TOL = 1e-3          # convergence verification threshold
RATE_TOL = 0.10         # relative tolerance on fitted rates
TEMPO_TOL = 0.02        # tolerance on sampled tempo vs eigen ratio


def _seed() -> int:
    return int(os.environ.get("FSNLAB_SEED", "7"))


def _load(source: str):
    """Load a network from a path or a bundled fixture name."""
    path = Path(source)
    if path.exists():
        return parse_network_file(path.read_text())
    if source in FIXTURE_NAMES:
        return parse_network_file(fixture_text(source))
    raise NetworkFileError(
        f"{source!r} is neither a readable file nor a bundled fixture "
        f"({', '.join(FIXTURE_NAMES)})")


def _resolve_x0(net: Network, cfg: Optional[SemiAutonomousConfig],
                x0: Optional[np.ndarray]) -> np.ndarray:
    if x0 is not None:
        return x0 if x0.ndim == 2 else x0[:, None]
    d = cfg.d if cfg is not None and cfg.d is not None else 1
    rng = np.random.default_rng(_seed())
    return rng.random((net.n, d))


def _q(value: float, tol: float) -> dict:
    return {"value": float(value), "tolerance": float(tol)}


def _fmt(value: float, tol: float) -> str:
    return f"{value:.6g} (tol {tol:g})"


def _print_arcs(dnet: DirectedNetwork) -> None:
    for a in dnet.arcs:
        print(f"  {a.follower} <- {a.followed}   w={a.w:g}")


def _generator(net: Network, cfg: Optional[SemiAutonomousConfig],
               dnet: Optional[DirectedNetwork]):
    """Pick the dynamics matrix for the given model and optional reduction."""
    signed = net.is_signed or (cfg is not None and cfg.is_signed)
    if dnet is None:
        if cfg is None:
            G = signed_laplacian(net) if signed else laplacian(net)
        else:
            G = (signed_perturbed_laplacian(net, cfg) if signed
                 else perturbed_laplacian(net, cfg))
    else:
        G = (signed_reduced_laplacian(dnet) if signed
             else reduced_laplacian(dnet))
        if cfg is not None:
            for link in cfg.leader_links:
                G[link.node - 1, link.node - 1] += 1.0
    drive = None
    if cfg is not None:
        drive = (cfg.input_matrix(net.n), cfg.input_vectors())
    tag = ("signed-" if signed else "") + ("SAN" if cfg is not None else "FAN")
    if dnet is not None:
        tag += "-reduced"
    return G, drive, tag


# ---------------------------------------------------------------- analyze


def cmd_analyze(args) -> int:
    net, cfg, _ = _load(args.network)
    print(f"network {net.name or args.network}: n={net.n}, "
          f"{len(net.edges)} edges, {'signed' if net.is_signed else 'unsigned'}")
    connected = is_connected(net)
    print(f"connected: {connected}")

    matrix = signed_laplacian(net) if net.is_signed else laplacian(net)
    pairs = smallest_eigenpairs(matrix, min(net.n, 3))
    label = "signed Laplacian" if net.is_signed else "Laplacian"
    vals = ", ".join(f"{p.value:.6g}" for p in pairs)
    print(f"{label} spectrum (smallest {len(pairs)}): {vals}  "
          f"(residual tol {EIG_TOL:g})")

    if net.is_signed and connected:
        part = structural_balance_partition(net)
        if part is None:
            print("structural balance: unbalanced")
        else:
            v1s = sorted(part[0])
            v2s = sorted(part[1])
            print(f"structural balance: balanced, partition {v1s} | {v2s}")

    if cfg is not None:
        signed = net.is_signed or cfg.is_signed
        M = (signed_perturbed_laplacian(net, cfg) if signed
             else perturbed_laplacian(net, cfg))
        pair = (principal_pair_signed(M) if signed
                else principal_pair_perturbed(M))
        print(f"leaders {sorted(cfg.leader_nodes)}; "
              f"smallest perturbed eigenvalue {pair.value:.6g}")
        print("principal eigenvector: "
              + " ".join(f"{v:.4f}" for v in pair.vector))

    if connected:
        decomp = block_cut_tree(net)
        print(f"blocks ({len(decomp.blocks)}): "
              + "; ".join(str(sorted(b)) for b in decomp.blocks))
        print(f"cut nodes: {sorted(decomp.cut_nodes)}")
        base = net.absolute() if net.is_signed else net
        fied = fiedler_pair(laplacian(base))
        print(f"Fiedler value {fied.value:.6g}, "
              f"{'simple' if fied.is_simple else 'repeated (flagged)'}")
        if fied.is_simple:
            try:
                cls = classify_fiedler(decomp, fied.vector)
            except ClassificationError as exc:
                print(f"Fiedler classification failed: {exc}")
                return EXIT_VERIFY
            if cls.case == "core-block":
                core = sorted(decomp.blocks[cls.core_block])
                print(f"Fiedler classification: core block {core}")
            else:
                print(f"Fiedler classification: core node {cls.core_node}")
    return EXIT_OK


# ---------------------------------------------------------------- select


def _select(net: Network, cfg: Optional[SemiAutonomousConfig], mode: str):
    """Build the reduced network plus its before/after report."""
    report: dict = {"mode": mode, "network": net.name, "checks": {}}
    if mode in ("san-fsn", "san-ffn"):
        if cfg is None:
            raise GraphError(f"mode {mode} needs leaders in the input file")
        L_B = perturbed_laplacian(net, cfg)
        pair = principal_pair_perturbed(L_B)
        dnet = (fsn_san if mode == "san-fsn" else ffn_san)(net, cfg, pair.vector)
        reduced = reduced_spectrum(dnet, cfg=cfg)
        report["original"] = {"lambda1": _q(pair.value, EIG_TOL)}
        report["reduced"] = {"lambda1": _q(float(reduced[0]), EIG_TOL)}
        report["eigenvector"] = {"entries": [float(v) for v in pair.vector],
                                 "tolerance": EIG_TOL}
        reach = reachable_from_inputs(dnet, cfg)
        report["reachable"] = {str(k): bool(v) for k, v in reach.items()}
        if mode == "san-fsn":
            report["checks"]["all_reachable"] = all(reach.values())
            report["checks"]["rate_not_worse"] = (
                float(reduced[0]) >= pair.value - EIG_TOL)
    elif mode == "fan-fsn":
        base = net.absolute() if net.is_signed else net
        pair = fiedler_pair(laplacian(base))
        if not pair.is_simple:
            raise SpectralError("second eigenvalue repeated; selection undefined")
        decomp = block_cut_tree(base)
        cls = classify_fiedler(decomp, pair.vector)
        dnet = fsn_fan(net, pair.vector, cls)
        reduced = reduced_spectrum(dnet)
        report["original"] = {"lambda2": _q(pair.value, EIG_TOL)}
        report["reduced"] = {"lambda2": _q(float(reduced[1]), EIG_TOL)}
        report["eigenvector"] = {"entries": [float(v) for v in pair.vector],
                                 "tolerance": EIG_TOL}
        report["classification"] = (
            {"case": "core-block",
             "core": sorted(decomp.blocks[cls.core_block])}
            if cls.case == "core-block"
            else {"case": "core-node", "core": [cls.core_node]})
        reach = reachable_from(dnet, cls.core_nodes)
        report["reachable"] = {str(k): bool(v) for k, v in reach.items()}
        report["checks"]["all_reachable_from_core"] = all(reach.values())
    elif mode == "signed-san-fsn":
        if cfg is None:
            raise GraphError("mode signed-san-fsn needs leaders in the input file")
        M = signed_perturbed_laplacian(net, cfg)
        pair = principal_pair_signed(M)
        dnet = fsn_signed_san(net, cfg, pair.vector)
        reduced = reduced_spectrum(dnet, cfg=cfg, signed=True)
        report["original"] = {"lambda1": _q(pair.value, EIG_TOL)}
        report["reduced"] = {"lambda1": _q(float(reduced[0]), EIG_TOL)}
        report["eigenvector"] = {"entries": [float(v) for v in pair.vector],
                                 "tolerance": EIG_TOL}
        reach = reachable_from_inputs(dnet, cfg)
        report["reachable"] = {str(k): bool(v) for k, v in reach.items()}
        report["checks"]["all_reachable"] = all(reach.values())
        report["checks"]["rate_not_worse"] = (
            float(reduced[0]) >= pair.value - EIG_TOL)
    else:
        raise GraphError(f"unknown mode {mode!r}")

    kept = dnet.arc_set
    removed = []
    for e in net.edges:
        for a, b in ((e.i, e.j), (e.j, e.i)):
            if (a, b) not in kept:
                removed.append([a, b])
    report["arcs"] = [[a.follower, a.followed, a.w] for a in dnet.arcs]
    report["removed"] = removed
    return dnet, report


def cmd_select(args) -> int:
    net, cfg, _ = _load(args.network)
    dnet, report = _select(net, cfg, args.mode)
    okey = "lambda1" if "lambda1" in report["original"] else "lambda2"
    print(f"mode {args.mode}: kept {len(dnet.arcs)} of {2*len(net.edges)} "
          f"directed choices")
    print(f"original {okey} = "
          + _fmt(report['original'][okey]['value'], EIG_TOL))
    print(f"reduced  {okey} = "
          + _fmt(report['reduced'][okey]['value'], EIG_TOL))
    _print_arcs(dnet)
    unreachable = sorted(int(k) for k, v in report["reachable"].items() if not v)
    print("reachability: " + ("all nodes reachable" if not unreachable
                              else f"unreachable nodes {unreachable}"))
    if args.out:
        Path(args.out).write_text(serialize_arcs(dnet))
        print(f"wrote arcs to {args.out}")
    if args.report:
        Path(args.report).write_text(json.dumps(report, indent=2) + "\n")
        print(f"wrote report to {args.report}")
    failed = [k for k, v in report["checks"].items() if not v]
    if failed:
        print(f"FAILED checks: {failed}")
        return EXIT_VERIFY
    return EXIT_OK


# ---------------------------------------------------------------- simulate


def cmd_simulate(args) -> int:
    net, cfg, x0 = _load(args.network)
    dnet = parse_arc_file(Path(args.reduced).read_text()) if args.reduced else None
    if dnet is not None and dnet.n != net.n:
        raise NetworkFileError(
            f"arc file has n={dnet.n}, network has n={net.n}")
    G, drive, tag = _generator(net, cfg, dnet)
    x0 = _resolve_x0(net, cfg, x0)
    if drive is not None and drive[1].shape[1] != x0.shape[1]:
        raise NetworkFileError(
            f"x0 dimension {x0.shape[1]} != input dimension {drive[1].shape[1]}")
    simcfg = SimulationConfig(dt=args.dt, horizon=args.horizon, method=args.method)
    traj = simulate(G, drive, x0, simcfg, model=tag)
    final = traj.states[-1]
    spread = float(np.abs(final - final.mean(axis=0)).max())
    print(f"{tag}: {simcfg.steps} steps of {args.method}, dt={args.dt}, "
          f"horizon={args.horizon}")
    print(f"final state spread around mean: {spread:.3e}")
    Path(args.out).write_text(emit_trajectory(traj))
    print(f"wrote trajectory to {args.out}")
    return EXIT_OK


# ---------------------------------------------------------------- tempo


def _parse_pairs(text: str) -> list[tuple[int, int]]:
    pairs = []
    for chunk in text.split(","):
        try:
            i, j = chunk.strip().split(":")
            pairs.append((int(i), int(j)))
        except ValueError as exc:
            raise NetworkFileError(
                f"--pairs expects 'i:j,i:j,...', bad chunk {chunk!r}") from exc
    return pairs


def cmd_tempo(args) -> int:
    net, cfg, x0 = _load(args.network)
    pairs = _parse_pairs(args.pairs)
    for i, j in pairs:
        if not (1 <= i <= net.n and 1 <= j <= net.n):
            raise NetworkFileError(f"pair {i}:{j} outside 1..{net.n}")
    G, drive, tag = _generator(net, cfg, None)
    x0 = _resolve_x0(net, cfg, x0)
    simcfg = SimulationConfig(dt=args.dt, horizon=args.horizon)
    traj = simulate(G, drive, x0, simcfg, model=tag)

    signed = net.is_signed or (cfg is not None and cfg.is_signed)
    if cfg is not None:
        M = (signed_perturbed_laplacian(net, cfg) if signed
             else perturbed_laplacian(net, cfg))
        vec = (principal_pair_signed(M) if signed
               else principal_pair_perturbed(M)).vector
    else:
        base = net.absolute() if net.is_signed else net
        vec = fiedler_pair(laplacian(base)).vector

    rows = ["t,follower,followed,value"]
    ok = True
    print(f"{'pair':>7}  {'sampled g (final)':>18}  {'eigvec ratio':>12}")
    for i, j in pairs:
        series = (first_component_ratio(traj, i, j) if args.first_component
                  else g_ratio_series(traj, i, j))
        for k, v in enumerate(series):
            rows.append(f"{traj.times[k+1]:.17g},{i},{j},{v:.17g}")
        finite = series[~np.isnan(series)]
        final = float(finite[-1]) if len(finite) else float("nan")
        if args.first_component:
            ref = float(vec[i - 1] / vec[j - 1]) if vec[j - 1] != 0 else float("inf")
        else:
            ref = tempo_limit_from_eigvec(vec, [i], [j])
        print(f"{i:>3}:{j:<3}  {final:>18.6g}  {ref:>12.6g}")
        if np.isfinite(ref) and abs(final - ref) > TEMPO_TOL * max(1.0, abs(ref)):
            ok = False
    if args.out:
        Path(args.out).write_text("\n".join(rows) + "\n")
        print(f"wrote series to {args.out}")
    if not ok:
        print(f"FAILED: sampled tempo differs from eigenvector ratio by more "
              f"than {TEMPO_TOL:g} (lengthen --horizon?)")
        return EXIT_VERIFY
    return EXIT_OK


# ------------------------------------------------------- distributed-select


def cmd_distributed_select(args) -> int:
    net, cfg, x0 = _load(args.network)
    x0 = _resolve_x0(net, cfg, x0)
    if args.fan_tree:
        dnet, report = run_distributed_fan_tree(net, x0, delta=args.delta,
                                                eps=args.eps)
        base = net.absolute() if net.is_signed else net
        pair = fiedler_pair(laplacian(base))
        cls = classify_fiedler(block_cut_tree(base), pair.vector)
        reference = fsn_fan(net, pair.vector, cls)
    else:
        if cfg is None:
            raise GraphError("distributed selection needs leaders; "
                             "use --fan-tree for autonomous trees")
        dnet, report = run_algorithm1(net, cfg, x0, delta=args.delta,
                                      eps=args.eps)
        pair = principal_pair_perturbed(perturbed_laplacian(net, cfg))
        reference = fsn_san(net, cfg, pair.vector)

    rounds = max((e.rounds for e in report.entries), default=0)
    print(f"settled after {rounds} rounds (delta={args.delta}, eps={args.eps})")
    _print_arcs(dnet)
    if args.out:
        Path(args.out).write_text(serialize_arcs(dnet))
        print(f"wrote arcs to {args.out}")
    if dnet.arc_set == reference.arc_set:
        print("matches the centralized construction")
        return EXIT_OK
    extra = sorted(dnet.arc_set - reference.arc_set)
    missing = sorted(reference.arc_set - dnet.arc_set)
    print(f"FAILED: differs from centralized construction "
          f"(extra {extra}, missing {missing})")
    return EXIT_VERIFY


# ---------------------------------------------------------------- compare


def _verification_horizon(rate: float, foldings: float = 9.0) -> float:
    """Simulated time for the error to decay well below the check tolerance."""
    return float(min(600.0, max(60.0, foldings / max(rate, 1e-3))))


def _rate_of(G, drive, x0, label: str, rate_hint: float) -> float:
    """Fitted decay rate toward the numerically converged steady state.

    The run continues past the fitting window so its endpoint can serve as
    the converged target; slower systems get proportionally longer windows.
    """
    fit_h = _verification_horizon(rate_hint)
    long = simulate(G, drive, x0, SimulationConfig(dt=0.01, horizon=1.5 * fit_h),
                    model=label)
    target = long.states[-1]
    keep = long.times <= fit_h + 1e-12
    window = Trajectory(long.times[keep], long.states[keep], model=label)
    return empirical_rate(window, target)


def _rate_tolerance(G: np.ndarray, lam: float) -> float:
    """Acceptance band for a fitted rate against its predicted eigenvalue.

    A defective eigenvalue decays like t^(depth-1) e^(-lam t), which biases
    the fitted slope low by about (depth-1)/t over the usable window; the
    band widens by that computable amount on top of the base tolerance.
    """
    n = G.shape[0]
    eigs = np.linalg.eigvals(G).real
    algebraic = int(np.sum(np.abs(eigs - lam) < 1e-6 * max(1.0, abs(lam))))
    geometric = n - np.linalg.matrix_rank(G - lam * np.eye(n), tol=1e-9)
    depth = max(1, algebraic - max(int(geometric), 1) + 1)
    t_effective = 0.6 * _verification_horizon(lam)
    return RATE_TOL + (depth - 1) / max(lam * t_effective, 1e-9)


def cmd_compare(args) -> int:
    net, cfg, x0 = _load(args.network)
    signed = net.is_signed or (cfg is not None and cfg.is_signed)
    checks: dict[str, bool] = {}
    print(f"=== {net.name or args.network}: n={net.n}, {len(net.edges)} edges, "
          f"{'signed ' if signed else ''}{'SAN' if cfg else 'FAN'} ===")

    mode = ("signed-san-fsn" if (cfg and signed)
            else "san-fsn" if cfg else "fan-fsn")
    dnet, report = _select(net, cfg, mode)
    okey = "lambda1" if "lambda1" in report["original"] else "lambda2"
    lam_orig = report["original"][okey]["value"]
    lam_red = report["reduced"][okey]["value"]
    print(f"convergence rate ({okey}):  original "
          + _fmt(lam_orig, EIG_TOL) + "  ->  reduced " + _fmt(lam_red, EIG_TOL))
    checks.update(report["checks"])

    if cfg is not None:
        M = (signed_perturbed_laplacian(net, cfg) if signed
             else perturbed_laplacian(net, cfg))
        vec = (principal_pair_signed(M) if signed
               else principal_pair_perturbed(M)).vector
    else:
        base = net.absolute() if net.is_signed else net
        vec = fiedler_pair(laplacian(base)).vector
    print("selection eigenvector: " + " ".join(f"{v:.4f}" for v in vec))
    print(f"retained {len(dnet.arcs)} arcs:")
    _print_arcs(dnet)

    x0 = _resolve_x0(net, cfg, x0)
    G0, drive, _ = _generator(net, cfg, None)
    G1, _, _ = _generator(net, cfg, dnet)
    h0 = _verification_horizon(lam_orig)
    h1 = _verification_horizon(lam_red)
    traj0 = simulate(G0, drive, x0, SimulationConfig(dt=0.01, horizon=h0),
                     model="original")
    traj1 = simulate(G1, drive, x0, SimulationConfig(dt=0.01, horizon=h1),
                     model="reduced")

    if cfg is not None:
        target = steady_state_san(
            signed_perturbed_laplacian(net, cfg) if signed
            else perturbed_laplacian(net, cfg),
            cfg.input_matrix(net.n), cfg.input_vectors())
        err0 = float(np.abs(traj0.states[-1] - target).max())
        Gr = (signed_reduced_laplacian(dnet) if signed
              else reduced_laplacian(dnet))
        for link in cfg.leader_links:
            Gr[link.node - 1, link.node - 1] += 1.0
        target1 = steady_state_san(Gr, cfg.input_matrix(net.n),
                                   cfg.input_vectors())
        err1 = float(np.abs(traj1.states[-1] - target1).max())
        print(f"steady state reached: original err {err0:.2e}, "
              f"reduced err {err1:.2e}  (tol {SIM_TOL:g})")
        checks["original_converged"] = err0 < SIM_TOL
        checks["reduced_converged"] = err1 < SIM_TOL
        if signed:
            u0 = cfg.input_vectors()[0]
            final = traj1.states[-1]
            plus = [i for i in range(1, net.n + 1)
                    if np.abs(final[i - 1] - u0).max() < SIM_TOL]
            minus = [i for i in range(1, net.n + 1)
                     if np.abs(final[i - 1] + u0).max() < SIM_TOL]
            print(f"bipartite split: {plus} -> +u | {minus} -> -u "
                  f"(tol {SIM_TOL:g})")
            checks["bipartite_consensus"] = len(plus) + len(minus) == net.n
    else:
        decomp = block_cut_tree(net.absolute() if net.is_signed else net)
        cls = classify_fiedler(decomp, vec)
        value = fan_fsn_consensus_value(x0, cls)
        final = traj1.states[-1]
        err = float(np.abs(final - value[None, :]).max())
        print(f"reduced-network consensus: predicted "
              f"{np.array2string(value, precision=4)}, simulation err {err:.2e} "
              f"(tol {SIM_TOL:g})")
        checks["consensus_value"] = err < SIM_TOL

    try:
        rate0 = _rate_of(G0, drive, x0, "original", lam_orig)
        rate1 = _rate_of(G1, drive, x0, "reduced", lam_red)
        tol0 = _rate_tolerance(G0, lam_orig)
        tol1 = _rate_tolerance(G1, lam_red)
        print(f"fitted decay rates: original {rate0:.4g} (predicted {lam_orig:.4g}"
              f", tol {tol0:.0%}), reduced {rate1:.4g} (predicted {lam_red:.4g}"
              f", tol {tol1:.0%})")
        checks["rate_original"] = abs(rate0 - lam_orig) <= tol0 * lam_orig
        checks["rate_reduced"] = abs(rate1 - lam_red) <= tol1 * lam_red
    except SimulationError as exc:
        print(f"rate fit skipped: {exc}")

    hub = max(range(1, net.n + 1), key=lambda i: (len(net.neighbors[i]), -i))
    print(f"tempo at node {hub} (sampled at t=10 and settled, vs eigenvector "
          f"ratio, tol {TEMPO_TOL:g} on the settled value):")
    k10 = int(np.argmin(np.abs(traj0.times - 10.0)))
    for j in net.neighbors[hub]:
        series = g_ratio_series(traj0, hub, j)
        finite = series[~np.isnan(series)]
        sampled10 = float(series[k10 - 1])
        settled = float(finite[-1]) if len(finite) else float("nan")
        try:
            ref = tempo_limit_from_eigvec(vec, [hub], [j])
        except TempoError:
            print(f"  g_{hub},{j}: diverges (neighbor sits at a zero entry)")
            continue
        ok = abs(settled - ref) <= TEMPO_TOL * max(1.0, ref)
        flag = "" if ok else "  <-- off"
        print(f"  g_{hub},{j}: t=10 {sampled10:.4f}, settled {settled:.4f}, "
              f"eigen {ref:.4f}{flag}")
        checks[f"tempo_{hub}_{j}"] = ok

    failed = [k for k, v in checks.items() if not v]
    if failed:
        print(f"FAILED checks: {failed}")
        return EXIT_VERIFY
    print("all checks passed")
    return EXIT_OK


# ---------------------------------------------------------------- main


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="fsnlab",
        description="Eigenvector-guided neighbor selection for consensus "
                    "networks: analysis, reduction, simulation, and "
                    "distributed selection from sampled data.")
    p.add_argument("--version", action="version", version=f"fsnlab {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="spectral and structural summary")
    a.add_argument("network")
    a.set_defaults(fn=cmd_analyze)

    s = sub.add_parser("select", help="build a reduced network")
    s.add_argument("network")
    s.add_argument("--mode", required=True,
                   choices=["san-fsn", "san-ffn", "fan-fsn", "signed-san-fsn"])
    s.add_argument("--out", help="write the arc list (JSON) here")
    s.add_argument("--report", help="write the full report (JSON) here")
    s.set_defaults(fn=cmd_select)

    m = sub.add_parser("simulate", help="integrate the network dynamics")
    m.add_argument("network")
    m.add_argument("--reduced", help="arc-list JSON of a reduced network")
    m.add_argument("--dt", type=float, default=0.01)
    m.add_argument("--horizon", type=float, default=60.0)
    m.add_argument("--method", choices=["euler", "rk4"], default="rk4")
    m.add_argument("--out", required=True, help="trajectory CSV path")
    m.set_defaults(fn=cmd_simulate)

    t = sub.add_parser("tempo", help="sampled relative-tempo series")
    t.add_argument("network")
    t.add_argument("--pairs", required=True, help="e.g. 7:3,7:6,7:8")
    t.add_argument("--first-component", action="store_true",
                   help="signed first-coordinate ratio instead of norm ratio")
    t.add_argument("--dt", type=float, default=0.01)
    t.add_argument("--horizon", type=float, default=60.0)
    t.add_argument("--out", help="write the series CSV here")
    t.set_defaults(fn=cmd_tempo)

    d = sub.add_parser("distributed-select",
                       help="neighbor selection from sampled data only")
    d.add_argument("network")
    d.add_argument("--delta", type=float, default=0.01)
    d.add_argument("--eps", type=float, default=1e-4)
    d.add_argument("--fan-tree", action="store_true",
                   help="autonomous tree variant (signed ratio rule)")
    d.add_argument("--out", help="write the arc list (JSON) here")
    d.set_defaults(fn=cmd_distributed_select)

    c = sub.add_parser("compare",
                       help="end-to-end before/after report for a network")
    c.add_argument("network")
    c.set_defaults(fn=cmd_compare)
    return p


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (NetworkFileError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (GraphError, SpectralError, ClassificationError, SimulationError,
            TempoError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VERIFY


if __name__ == "__main__":
    sys.exit(main())
