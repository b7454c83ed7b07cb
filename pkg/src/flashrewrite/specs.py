"""Parsing of the ``kind:key=value,...`` strings the CLI accepts."""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np

from . import bounds
from .codes import BaseRepCode, ModularCode, RewritingCode, SplitCode
from .errors import SpecError
from .graphs import (DataGraph, bidirected_tree, complete_graph, debruijn_graph,
                     from_edge_list, hypercube_graph)
from .harness import cyclic_sequence, random_walk_sequence
from .robust import ParametricCode, sample_robust_code
from .trajectory import TrajectoryCode


def parse_spec(text: str) -> tuple[str, dict[str, str]]:
    kind, _, rest = text.partition(":")
    kind = kind.strip().lower()
    if not kind:
        raise SpecError(f"empty spec {text!r}")
    params = {}
    if rest:
        for item in rest.split(","):
            key, eq, value = item.partition("=")
            if not eq:
                raise SpecError(f"expected key=value in {text!r}, got {item!r}")
            params[key.strip()] = value.strip()
    return kind, params


def _int(params, key, text, default=None):
    if key not in params:
        if default is None:
            raise SpecError(f"{text!r} needs {key}=")
        return default
    try:
        return int(params[key])
    except ValueError:
        raise SpecError(f"{key} must be an integer in {text!r}") from None


def build_graph(text: str) -> DataGraph:
    kind, p = parse_spec(text)
    try:
        if kind == "complete":
            return complete_graph(_int(p, "L", text))
        if kind == "hypercube":
            return hypercube_graph(_int(p, "k", text), _int(p, "l", text))
        if kind == "debruijn":
            return debruijn_graph(_int(p, "k", text), _int(p, "l", text))
        if kind == "tree":
            return bidirected_tree(_int(p, "delta", text), _int(p, "L", text))
        if kind == "edgelist":
            if "path" not in p:
                raise SpecError("edgelist needs path=")
            g = from_edge_list(Path(p["path"]).read_text())
            if not g.is_strongly_connected():
                raise SpecError("edge-list graph is not strongly connected")
            return g
    except SpecError:
        raise
    except (ValueError, OSError) as exc:
        raise SpecError(f"bad graph spec {text!r}: {exc}") from None
    raise SpecError(f"unknown graph kind {kind!r}")


def build_code(text: str, n: int, q: int, graph: DataGraph, seed: int | None = None,
               t_target: int | None = None) -> RewritingCode:
    """Instantiate a code; ``seed`` is used by randomized codes whose spec has none."""
    kind, p = parse_spec(text)
    L = _int(p, "L", text, default=graph.L)
    if L != graph.L:
        raise SpecError(f"code alphabet L={L} does not match the graph's L={graph.L}")
    if kind in ("modular", "baserep", "split") and not graph.is_complete():
        raise SpecError(f"{kind} codes need a complete data graph")
    try:
        if kind == "modular":
            return ModularCode(n, q, L)
        if kind == "baserep":
            return BaseRepCode(n, q, L)
        if kind == "split":
            return SplitCode(n, q, L)
        if kind == "trajectory":
            return TrajectoryCode.build(n, q, graph, t_target)
        if kind == "parametric":
            theta = p.get("theta", "identity")
            s = _int(p, "seed", text, default=seed if seed is not None else 0)
            if theta == "identity":
                a = None
                if "seed" in p or seed is not None:
                    a = np.random.default_rng(s).integers(0, L, size=n * (q - 1))
                return ParametricCode.identity(n, q, L, a)
            if theta == "random":
                return ParametricCode.random(n, q, L, s)
            raise SpecError(f"unknown theta {theta!r}")
        if kind == "robust":
            s = _int(p, "seed", text, default=seed if seed is not None else 0)
            return sample_robust_code(n, q, L, s, mode=p.get("mode", "stop"))
    except SpecError:
        raise
    except ValueError as exc:
        raise SpecError(f"cannot build {text!r} with n={n}, q={q}: {exc}") from None
    raise SpecError(f"unknown code kind {kind!r}")


def build_sequence(text: str, graph: DataGraph, default_length: int,
                   seed: int | None = None) -> list[int]:
    kind, p = parse_spec(text)
    if kind == "list":
        _, _, rest = text.partition(":")
        try:
            return [int(x) for x in rest.replace(";", ",").split(",") if x.strip()]
        except ValueError:
            raise SpecError(f"bad list sequence {text!r}") from None
    length = _int(p, "length", text, default=default_length)
    if kind == "random":
        s = _int(p, "seed", text, default=seed if seed is not None else 0)
        return random_walk_sequence(graph, s, length)
    if kind == "cyclic":
        if not graph.is_complete():
            raise SpecError("cyclic sequences need a complete data graph")
        return cyclic_sequence(graph.L, length)
    raise SpecError(f"unknown sequence kind {kind!r}")


def sequence_is_fixed(text: str) -> bool:
    kind, p = parse_spec(text)
    return kind != "random" or "seed" in p


def code_bounds(code: RewritingCode, graph: DataGraph) -> tuple[int | None, int]:
    """(guaranteed lower bound or None, upper bound) for CSV rows."""
    ub = bounds.ub_trivial(code.n, code.q)
    lb = None
    if isinstance(code, ModularCode):
        lb = math.floor(bounds.lb_modular(code.n, code.q, code.L))
    elif isinstance(code, SplitCode):
        lb = math.floor(bounds.lb_split_code(code.n, code.q, code.L))
    elif isinstance(code, BaseRepCode):
        lb = math.floor(bounds.lb_baserep_code(code.n, code.q, code.L))
    elif isinstance(code, TrajectoryCode):
        lb = math.floor(code.layout.composite_bound())
    if graph.is_complete() and code.n < code.L - 1:
        ub = min(ub, bounds.ub_complete_sound(code.n, code.q, code.L))
    return lb, ub
