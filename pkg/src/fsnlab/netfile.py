"""Network documents, arc lists, trajectory CSV, and bundled fixtures.

Network files are JSON objects with keys ``n``, ``directed`` (must be
false), ``edges``, and optional ``name``, ``leaders``, ``inputs``, ``x0``.
Unknown keys are rejected so typos fail loudly.  Serialization round-trips:
parsing what we emit reproduces the parsed model exactly.
"""

from __future__ import annotations

import json
from importlib import resources
from typing import Optional

import numpy as np

from .dynamics import Trajectory
from .graphs import (Arc, DirectedNetwork, Edge, GraphError, LeaderLink,
                     Network, SemiAutonomousConfig)

FIXTURE_NAMES = ("g6", "g8", "g8-signed", "g12", "t12")


class NetworkFileError(ValueError):
    """Malformed network document; the message names the offending field."""


def _require(cond: bool, where: str, msg: str) -> None:
    if not cond:
        raise NetworkFileError(f"{where}: {msg}")


def _only_keys(obj: dict, allowed: set[str], where: str) -> None:
    unknown = set(obj) - allowed
    _require(not unknown, where, f"unknown keys {sorted(unknown)}")


def _as_int(value, where: str) -> int:
    _require(isinstance(value, int) and not isinstance(value, bool),
             where, f"expected an integer, got {value!r}")
    return value


def _as_number(value, where: str) -> float:
    _require(isinstance(value, (int, float)) and not isinstance(value, bool),
             where, f"expected a number, got {value!r}")
    return float(value)


def parse_network_file(
        text: str | bytes,
) -> tuple[Network, Optional[SemiAutonomousConfig], Optional[np.ndarray]]:
    """Parse a network document into (Network, config or None, x0 or None)."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise NetworkFileError(
            f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    _require(isinstance(doc, dict), "document", "top level must be an object")
    _only_keys(doc, {"name", "n", "directed", "edges", "leaders", "inputs", "x0"},
               "document")
    _require("n" in doc, "document", "missing required key 'n'")
    _require("edges" in doc, "document", "missing required key 'edges'")

    n = _as_int(doc["n"], "n")
    _require(n >= 1, "n", f"must be positive, got {n}")
    if "directed" in doc:
        _require(doc["directed"] is False, "directed",
                 "only undirected inputs are supported")
    name = doc.get("name", "")
    _require(isinstance(name, str), "name", "must be a string")

    _require(isinstance(doc["edges"], list), "edges", "must be a list")
    edges = []
    for k, raw in enumerate(doc["edges"]):
        where = f"edges[{k}]"
        _require(isinstance(raw, dict), where, "each edge must be an object")
        _only_keys(raw, {"i", "j", "w"}, where)
        _require("i" in raw and "j" in raw, where, "needs keys 'i' and 'j'")
        i = _as_int(raw["i"], f"{where}.i")
        j = _as_int(raw["j"], f"{where}.j")
        w = _as_number(raw.get("w", 1.0), f"{where}.w")
        edges.append(Edge(i, j, w))

    cfg = None
    if "leaders" in doc:
        _require(isinstance(doc["leaders"], list) and doc["leaders"],
                 "leaders", "must be a nonempty list")
        links = []
        for k, raw in enumerate(doc["leaders"]):
            where = f"leaders[{k}]"
            _require(isinstance(raw, dict), where, "each leader must be an object")
            _only_keys(raw, {"node", "input", "sign"}, where)
            _require("node" in raw and "input" in raw, where,
                     "needs keys 'node' and 'input'")
            links.append(LeaderLink(_as_int(raw["node"], f"{where}.node"),
                                    _as_int(raw["input"], f"{where}.input"),
                                    _as_int(raw.get("sign", 1), f"{where}.sign")))
        inputs = None
        m = max(link.input_index for link in links)
        if "inputs" in doc:
            _require(isinstance(doc["inputs"], list) and doc["inputs"],
                     "inputs", "must be a nonempty list")
            inputs = []
            for k, raw in enumerate(doc["inputs"]):
                where = f"inputs[{k}]"
                _require(isinstance(raw, list) and raw, where,
                         "each input must be a nonempty vector")
                inputs.append(tuple(_as_number(v, f"{where}[{p}]")
                                    for p, v in enumerate(raw)))
            m = max(m, len(inputs))
        try:
            cfg = SemiAutonomousConfig(m, tuple(links),
                                       tuple(inputs) if inputs else None)
        except GraphError as exc:
            raise NetworkFileError(f"leaders: {exc}") from exc
        for k, link in enumerate(links):
            _require(1 <= link.node <= n, f"leaders[{k}].node",
                     f"node {link.node} outside 1..{n}")
    elif "inputs" in doc:
        raise NetworkFileError("inputs: present without any leaders")

    x0 = None
    if "x0" in doc:
        raw = doc["x0"]
        _require(isinstance(raw, list) and len(raw) == n, "x0",
                 f"must list one row per node ({n})")
        if all(isinstance(v, (int, float)) and not isinstance(v, bool)
               for v in raw):
            x0 = np.array([[_as_number(v, f"x0[{k}]")] for k, v in enumerate(raw)])
        else:
            rows = []
            for k, row in enumerate(raw):
                where = f"x0[{k}]"
                _require(isinstance(row, list) and row, where,
                         "each row must be a nonempty vector")
                rows.append([_as_number(v, f"{where}[{p}]")
                             for p, v in enumerate(row)])
            widths = {len(r) for r in rows}
            _require(len(widths) == 1, "x0", f"ragged rows: widths {sorted(widths)}")
            x0 = np.array(rows)
        if cfg is not None and cfg.d is not None:
            _require(x0.shape[1] == cfg.d, "x0",
                     f"dimension {x0.shape[1]} != input dimension {cfg.d}")

    try:
        net = Network(n, tuple(edges), name=name)
    except GraphError as exc:
        raise NetworkFileError(f"edges: {exc}") from exc
    return net, cfg, x0


def serialize_network(net: Network, cfg: Optional[SemiAutonomousConfig] = None,
                      x0: Optional[np.ndarray] = None) -> str:
    doc: dict = {"name": net.name, "n": net.n, "directed": False}
    doc["edges"] = [{"i": e.i, "j": e.j, "w": e.w} for e in net.edges]
    if cfg is not None:
        doc["leaders"] = [{"node": l.node, "input": l.input_index, "sign": l.sign}
                          for l in cfg.leader_links]
        if cfg.inputs is not None:
            doc["inputs"] = [list(u) for u in cfg.inputs]
    if x0 is not None:
        x0 = np.asarray(x0, dtype=float)
        if x0.ndim == 1:
            x0 = x0[:, None]
        doc["x0"] = [list(map(float, row)) for row in x0]
    return json.dumps(doc, indent=2) + "\n"


def parse_arc_file(text: str | bytes) -> DirectedNetwork:
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise NetworkFileError(
            f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    _require(isinstance(doc, dict), "document", "top level must be an object")
    _only_keys(doc, {"name", "n", "arcs"}, "document")
    _require("n" in doc and "arcs" in doc, "document", "needs keys 'n' and 'arcs'")
    n = _as_int(doc["n"], "n")
    arcs = []
    for k, raw in enumerate(doc["arcs"]):
        where = f"arcs[{k}]"
        _require(isinstance(raw, dict), where, "each arc must be an object")
        _only_keys(raw, {"follower", "followed", "w"}, where)
        _require("follower" in raw and "followed" in raw, where,
                 "needs keys 'follower' and 'followed'")
        arcs.append(Arc(_as_int(raw["follower"], f"{where}.follower"),
                        _as_int(raw["followed"], f"{where}.followed"),
                        _as_number(raw.get("w", 1.0), f"{where}.w")))
    try:
        return DirectedNetwork(n, tuple(arcs), name=doc.get("name", ""))
    except GraphError as exc:
        raise NetworkFileError(f"arcs: {exc}") from exc


def serialize_arcs(dnet: DirectedNetwork) -> str:
    doc = {"name": dnet.name, "n": dnet.n,
           "arcs": [{"follower": a.follower, "followed": a.followed, "w": a.w}
                    for a in dnet.arcs]}
    return json.dumps(doc, indent=2) + "\n"


def emit_trajectory(traj: Trajectory) -> str:
    """Trajectory as CSV, time-major then agent then dimension.

    Values carry 17 significant digits, enough to reproduce the binary
    doubles exactly on re-parse.
    """
    lines = ["t,agent,dim,value"]
    for k, t in enumerate(traj.times):
        for agent in range(1, traj.n + 1):
            for dim in range(1, traj.d + 1):
                v = traj.states[k, agent - 1, dim - 1]
                lines.append(f"{t:.17g},{agent},{dim},{v:.17g}")
    return "\n".join(lines) + "\n"


def parse_trajectory(text: str, model: str = "csv-import") -> Trajectory:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != "t,agent,dim,value":
        raise NetworkFileError("trajectory csv must start with 't,agent,dim,value'")
    rows = []
    for k, ln in enumerate(lines[1:], start=2):
        parts = ln.split(",")
        if len(parts) != 4:
            raise NetworkFileError(f"line {k}: expected 4 columns, got {len(parts)}")
        try:
            rows.append((float(parts[0]), int(parts[1]), int(parts[2]),
                         float(parts[3])))
        except ValueError as exc:
            raise NetworkFileError(f"line {k}: {exc}") from exc
    n = max(r[1] for r in rows)
    d = max(r[2] for r in rows)
    if len(rows) % (n * d) != 0:
        raise NetworkFileError(f"row count {len(rows)} is not a multiple of n*d")
    samples = len(rows) // (n * d)
    times = np.empty(samples)
    states = np.empty((samples, n, d))
    for k in range(samples):
        block = rows[k * n * d:(k + 1) * n * d]
        times[k] = block[0][0]
        for t, agent, dim, value in block:
            states[k, agent - 1, dim - 1] = value
    return Trajectory(times, states, model=model)


def fixture_text(name: str) -> str:
    """Raw JSON of a bundled fixture network."""
    if name not in FIXTURE_NAMES:
        raise NetworkFileError(
            f"unknown fixture {name!r}; bundled: {', '.join(FIXTURE_NAMES)}")
    return (resources.files("fsnlab") / "fixtures" / f"{name}.json").read_text()


def load_fixture(
        name: str,
) -> tuple[Network, Optional[SemiAutonomousConfig], Optional[np.ndarray]]:
    return parse_network_file(fixture_text(name))
