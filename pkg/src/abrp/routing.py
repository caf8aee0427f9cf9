"""Geometric layer: instances, tours, realized plans and an exact small-N oracle.

Node 0 is the depot; customers are 1..N in request order.  Travel time is
Euclidean distance.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import kernels
from .objective import SatisfactionParams, sizes_of

__all__ = [
    "DEFAULT_BETA",
    "EXACT_TOUR_LIMIT",
    "Instance",
    "RealizedPlan",
    "Tour",
    "bhh_estimate",
    "brute_force_abrp",
    "build_tour",
    "generate_instance",
    "instance_from_json",
    "instance_to_json",
    "read_instance",
    "realize",
    "write_instance",
]

DEFAULT_BETA = 0.72
EXACT_TOUR_LIMIT = 12
BRUTE_FORCE_LIMIT = 9


@dataclass(eq=False)
class Instance:
    nodes: np.ndarray
    depot: np.ndarray
    area: float = 1.0
    capacity: Optional[int] = None
    a: float = 1.0
    b: float = 0.01
    beta: float = DEFAULT_BETA
    seed: Optional[int] = None
    _dist: Optional[np.ndarray] = field(default=None, repr=False)

    def __post_init__(self):
        self.nodes = np.asarray(self.nodes, dtype=float).reshape(-1, 2)
        self.depot = np.asarray(self.depot, dtype=float).reshape(2)
        if not self.area > 0:
            raise ValueError(f"area must be > 0, got {self.area}")
        if self.capacity is not None and self.capacity < 1:
            raise ValueError(f"capacity must be >= 1, got {self.capacity}")

    @property
    def n(self) -> int:
        return len(self.nodes)

    @property
    def side(self) -> float:
        return math.sqrt(self.area)

    @property
    def params(self) -> SatisfactionParams:
        return SatisfactionParams.from_geometry(self.a, self.b, self.beta, self.area)

    @property
    def points(self) -> np.ndarray:
        """Depot followed by the customers, ``(N+1, 2)``."""
        return np.vstack([self.depot, self.nodes])

    def distances(self) -> np.ndarray:
        if self._dist is None:
            pts = self.points
            diff = pts[:, None, :] - pts[None, :, :]
            self._dist = np.sqrt((diff**2).sum(axis=-1))
        return self._dist

    def same_as(self, other: "Instance") -> bool:
        return (
            np.array_equal(self.nodes, other.nodes)
            and np.array_equal(self.depot, other.depot)
            and self.area == other.area
            and self.capacity == other.capacity
            and (self.a, self.b, self.beta, self.seed) == (other.a, other.b, other.beta, other.seed)
        )


def generate_instance(
    N: int,
    area: float = 1.0,
    seed: int = 0,
    capacity: Optional[int] = None,
    a: float = 1.0,
    b: float = 0.01,
    beta: float = DEFAULT_BETA,
    depot: Optional[Sequence[float]] = None,
) -> Instance:
    """``N`` customers uniform on the ``sqrt(area)`` square; depot at its center."""
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    if not area > 0:
        raise ValueError(f"area must be > 0, got {area}")
    side = math.sqrt(area)
    rng = np.random.default_rng(seed)
    nodes = rng.uniform(0.0, side, size=(N, 2))
    if depot is None:
        depot = (side / 2.0, side / 2.0)
    return Instance(nodes=nodes, depot=np.asarray(depot, float), area=area, capacity=capacity,
                    a=a, b=b, beta=beta, seed=seed)


def bhh_estimate(n: float, area: float = 1.0, beta: float = DEFAULT_BETA) -> float:
    """Asymptotic optimal tour length ``beta * sqrt(n * area)``."""
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    if not area > 0 or not beta > 0:
        raise ValueError("area and beta must be positive")
    return beta * math.sqrt(n * area)


@dataclass(frozen=True)
class Tour:
    sequence: tuple[int, ...]
    duration: float


def _closed_length(dist: np.ndarray, seq: Sequence[int]) -> float:
    idx = np.asarray(seq)
    return float(dist[idx[:-1], idx[1:]].sum())


def _held_karp_path(paths: np.ndarray, dist: np.ndarray, mask: int) -> list[int]:
    """Customer order (local indices 1..m) of the cheapest closed tour over ``mask``."""
    members = [j for j in range(paths.shape[1]) if (mask >> j) & 1]
    last = min(members, key=lambda j: (paths[mask, j] + dist[j + 1, 0], j))
    order = [last]
    while True:
        prev = mask ^ (1 << last)
        if prev == 0:
            break
        cands = [i for i in members if (prev >> i) & 1]
        last_nxt = min(cands, key=lambda i: (paths[prev, i] + dist[i + 1, last + 1], i))
        mask, last = prev, last_nxt
        order.append(last)
    order.reverse()
    return [j + 1 for j in order]


def _nearest_neighbor(dist: np.ndarray) -> list[int]:
    m = dist.shape[0]
    unvisited = np.ones(m, dtype=bool)
    unvisited[0] = False
    order = [0]
    cur = 0
    for _ in range(m - 1):
        row = np.where(unvisited, dist[cur], np.inf)
        cur = int(np.argmin(row))
        unvisited[cur] = False
        order.append(cur)
    return order


def improve_tour(order: Sequence[int], dist: np.ndarray) -> list[int]:
    """Alternate 2-opt and Or-opt until neither improves; the result is
    2-opt optimal."""
    order, _ = kernels.two_opt(order, dist)
    while True:
        order, moved = kernels.or_opt(order, dist)
        if not moved:
            return [int(i) for i in order]
        order, _ = kernels.two_opt(order, dist)


def local_tour(dist: np.ndarray, exact_limit: int = EXACT_TOUR_LIMIT) -> list[int]:
    """Closed tour over a local distance matrix with the depot at index 0.

    Returns ``[0, ..., 0]`` in local indices.
    """
    m = dist.shape[0] - 1
    if m == 0:
        return [0, 0]
    if m <= exact_limit:
        paths, _ = kernels.held_karp(dist)
        return [0, *_held_karp_path(paths, dist, (1 << m) - 1), 0]
    order = improve_tour(_nearest_neighbor(dist), dist)
    start = order.index(0)
    order = order[start:] + order[:start]
    return [*order, 0]


def build_tour(instance: Instance, subset: Sequence[int], exact_limit: int = EXACT_TOUR_LIMIT) -> Tour:
    """Depot-anchored closed tour over customer indices ``subset`` (1-based).

    Exact for at most ``exact_limit`` customers, otherwise nearest neighbor
    improved by 2-opt and Or-opt.
    """
    subset = [int(i) for i in subset]
    if not subset:
        raise ValueError("subset must be nonempty")
    if min(subset) < 1 or max(subset) > instance.n:
        raise ValueError("customer indices must lie in 1..N")
    full = instance.distances()
    idx = np.array([0, *subset])
    local = full[np.ix_(idx, idx)]
    seq = tuple(int(idx[i]) for i in local_tour(local, exact_limit))
    return Tour(sequence=seq, duration=_closed_length(full, seq))


@dataclass(frozen=True)
class RealizedPlan:
    routes: tuple[tuple[int, ...], ...]
    tour_durations: tuple[float, ...]
    completion_times: tuple[float, ...]
    arrival: tuple[float, ...]
    objective: float

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(len(r) - 2 for r in self.routes)

    def route_of(self) -> dict[int, int]:
        """Customer index -> 1-based route number."""
        return {i: k for k, r in enumerate(self.routes, start=1) for i in r[1:-1]}


def _plan(instance: Instance, sequences: Sequence[Sequence[int]]) -> RealizedPlan:
    dist = instance.distances()
    durations = [_closed_length(dist, s) for s in sequences]
    completion = list(itertools.accumulate(durations))
    arrival = [0.0] * instance.n
    for seq, t in zip(sequences, completion):
        for i in seq[1:-1]:
            arrival[i - 1] = t
    # every rider of route k shares completion time T_k
    objective = math.fsum(
        (len(seq) - 2) * (instance.a - instance.b * t) for seq, t in zip(sequences, completion)
    )
    return RealizedPlan(
        routes=tuple(tuple(int(i) for i in s) for s in sequences),
        tour_durations=tuple(durations),
        completion_times=tuple(completion),
        arrival=tuple(arrival),
        objective=objective,
    )


def realize(instance: Instance, alloc, exact_limit: int = EXACT_TOUR_LIMIT) -> RealizedPlan:
    """Route consecutive request-order blocks of the given sizes in order."""
    sizes = [int(n) for n in sizes_of(alloc)]
    if sum(sizes) != instance.n:
        raise ValueError(f"allocation sums to {sum(sizes)}, instance has {instance.n} customers")
    if any(n < 1 for n in sizes):
        raise ValueError("route sizes must be positive")
    if instance.capacity is not None and max(sizes) > instance.capacity:
        raise ValueError(f"allocation exceeds capacity {instance.capacity}")
    sequences = []
    start = 1
    for n in sizes:
        sequences.append(build_tour(instance, range(start, start + n), exact_limit).sequence)
        start += n
    return _plan(instance, sequences)


def _popcount(x: int) -> int:
    return bin(x).count("1")


def brute_force_abrp(instance: Instance, fairness: bool = True) -> RealizedPlan:
    """Exact optimum of the full routing problem for ``N <= 9``.

    Every tour is an exact TSP tour.  With ``fairness`` the routes are
    consecutive request-order blocks and all compositions of ``N`` are tried.
    Without it every ordered partition of the customers is covered by a
    dynamic program over subsets: serving block ``B`` first out of the
    remaining set ``S`` delays all ``|S|`` riders by the tour of ``B``.
    """
    N = instance.n
    if N > BRUTE_FORCE_LIMIT:
        raise ValueError(f"brute force is limited to N <= {BRUTE_FORCE_LIMIT}, got {N}")
    cap = N if instance.capacity is None else min(instance.capacity, N)
    dist = instance.distances()
    paths, tours = kernels.held_karp(dist)
    full = (1 << N) - 1

    if fairness:
        best_cost, best_blocks = math.inf, None
        for cuts in itertools.product((False, True), repeat=N - 1):
            blocks, start = [], 0
            for pos, cut in enumerate(cuts, start=1):
                if cut:
                    blocks.append((start, pos))
                    start = pos
            blocks.append((start, N))
            if max(hi - lo for lo, hi in blocks) > cap:
                continue
            masks = [sum(1 << j for j in range(lo, hi)) for lo, hi in blocks]
            cost, remaining = 0.0, N
            for mask in masks:
                cost += tours[mask] * remaining
                remaining -= _popcount(mask)
            if cost < best_cost:
                best_cost, best_blocks = cost, masks
        order = best_blocks
    else:
        value = np.full(1 << N, np.inf)
        choice = np.zeros(1 << N, dtype=np.int64)
        value[0] = 0.0
        sizes = [_popcount(m) for m in range(1 << N)]
        for S in range(1, full + 1):
            n_s = sizes[S]
            best, pick = math.inf, 0
            B = S
            while B:
                if sizes[B] <= cap:
                    c = tours[B] * n_s + value[S ^ B]
                    if c < best:
                        best, pick = c, B
                B = (B - 1) & S
            value[S], choice[S] = best, pick
        order, S = [], full
        while S:
            order.append(int(choice[S]))
            S ^= int(choice[S])

    sequences = []
    for mask in order:
        sequences.append((0, *_held_karp_path(paths, dist, mask), 0))
    return _plan(instance, sequences)


# --- instance files -------------------------------------------------------

def _g17(x: float) -> str:
    return format(float(x), ".17g")


def instance_to_json(instance: Instance) -> str:
    """JSON text with coordinates at 17 significant digits."""
    header = {
        "n": instance.n,
        "area": instance.area,
        "seed": instance.seed,
        "capacity": instance.capacity,
        "a": instance.a,
        "b": instance.b,
        "beta": instance.beta,
    }
    head = ",\n".join(f"  {json.dumps(k)}: {json.dumps(v)}" for k, v in header.items())
    depot = f"[{_g17(instance.depot[0])}, {_g17(instance.depot[1])}]"
    nodes = ",\n".join(f"    [{_g17(x)}, {_g17(y)}]" for x, y in instance.nodes)
    return f"{{\n{head},\n  \"depot\": {depot},\n  \"nodes\": [\n{nodes}\n  ]\n}}\n"


def instance_from_json(text: str) -> Instance:
    data = json.loads(text)
    nodes = np.asarray(data["nodes"], dtype=float).reshape(-1, 2)
    if "n" in data and data["n"] != len(nodes):
        raise ValueError(f"header says n={data['n']} but {len(nodes)} nodes are listed")
    return Instance(
        nodes=nodes,
        depot=np.asarray(data["depot"], dtype=float),
        area=float(data.get("area", 1.0)),
        capacity=data.get("capacity"),
        a=float(data.get("a", 1.0)),
        b=float(data.get("b", 0.01)),
        beta=float(data.get("beta", DEFAULT_BETA)),
        seed=data.get("seed"),
    )


def write_instance(instance: Instance, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(instance_to_json(instance))


def read_instance(path) -> Instance:
    with open(path, encoding="utf-8") as fh:
        return instance_from_json(fh.read())
