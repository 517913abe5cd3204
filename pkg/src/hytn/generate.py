"""Seeded instance generators: random networks, a slow family, SAT gadgets.

All generators are pure functions of their parameters.  Randomness comes
from numpy's PCG64 keyed by ``SeedSequence(seed, spawn_key=(index,))``, so
batch runs get independent, reproducible streams per instance index; the
produced networks are bit-identical for a fixed seed and numpy generation.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from itertools import product

import numpy as np

from .model import HyTN, Hyperarc, MultiHead, MultiTail, Standard, verify_schedule


class Family(Enum):
    RANDOM = "random"
    SLOW = "slow"
    SAT3 = "sat3"


@dataclass(frozen=True)
class GenSpec:
    """Parameters of one generated random network."""

    n: int
    max_weight: int
    hyper_fraction: float
    out_degree: int
    seed: int

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("need at least two timepoints")
        if self.max_weight < 1:
            raise ValueError("max_weight must be positive")
        if not 0.0 <= self.hyper_fraction <= 1.0:
            raise ValueError("hyper_fraction must lie in [0, 1]")
        if self.out_degree < 1:
            raise ValueError("out_degree must be positive")


def spawn_seed(base: int, index: int) -> int:
    """Derive the instance seed for position ``index`` of a batch."""
    ss = np.random.SeedSequence(base, spawn_key=(index,))
    return int(ss.generate_state(1, np.uint64)[0])


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))


def gen_random(spec: GenSpec) -> HyTN:
    """Random multi-head network from a fixed out-degree digraph.

    Every node first draws ``out_degree`` distinct targets with weights
    uniform on ``[-W, W]``.  With probability ``hyper_fraction`` the node's
    bundle stays a genuine multi-head arc (keeping between 2 and
    ``out_degree`` of its heads); otherwise it splits into independent
    standard arcs.  Every node ends up tailing at least one arc, so the
    result has no sinks.
    """
    n, deg, w_max = spec.n, spec.out_degree, spec.max_weight
    if deg >= n:
        raise ValueError(f"out-degree {deg} needs at least {deg + 1} nodes")
    rng = _rng(spec.seed)
    arcs: list[Hyperarc] = []
    for v in range(n):
        targets = rng.choice(n - 1, size=deg, replace=False)
        targets = [int(t) + 1 if t >= v else int(t) for t in targets]
        weights = [int(w) for w in rng.integers(-w_max, w_max + 1, size=deg)]
        keep_hyper = deg >= 2 and rng.random() < spec.hyper_fraction
        if keep_hyper:
            k = int(rng.integers(2, deg + 1)) if deg > 2 else 2
            arcs.append(MultiHead(v, tuple(targets[:k]), tuple(weights[:k])))
        else:
            for t, w in zip(targets, weights):
                arcs.append(Standard(v, t, w))
    return HyTN(n, arcs)


def gen_slow_family(w: int) -> HyTN:
    """Six-timepoint network whose solve cost grows linearly with ``w``.

    Two overlapping multi-head arcs feed a cheap negative loop whose escape
    route costs ``w``, so the energy values crawl up to ``w`` before the
    fixpoint settles.  Consistent for every ``w``; the schedule
    ``(0, 0, 1, 0, -w, -w)`` is feasible.
    """
    if w < 1:
        raise ValueError("weight parameter must be positive")
    arcs: list[Hyperarc] = [
        MultiHead(0, (1, 3), (0, 0)),
        MultiHead(1, (2, 3), (0, 0)),
        Standard(2, 1, -1),
        Standard(3, 4, -w),
        Standard(4, 5, 0),
        Standard(5, 4, 0),
    ]
    return HyTN(6, arcs)


@dataclass(frozen=True)
class CnfFormula:
    """3-CNF formula; each literal is a signed 1-based variable index."""

    num_vars: int
    clauses: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        for clause in self.clauses:
            if len(clause) != 3:
                raise ValueError("every clause needs exactly three literals")
            for lit in clause:
                if lit == 0 or abs(lit) > self.num_vars:
                    raise ValueError(f"literal {lit} out of range")

    def evaluate(self, assignment: tuple[bool, ...]) -> bool:
        return all(
            any(assignment[abs(l) - 1] == (l > 0) for l in clause)
            for clause in self.clauses
        )

    def is_satisfiable(self) -> bool:
        """Truth-table check; usable only for small variable counts."""
        return any(
            self.evaluate(a) for a in product((False, True), repeat=self.num_vars)
        )


def random_cnf(num_vars: int, num_clauses: int, seed: int) -> CnfFormula:
    """Uniform random 3-CNF (literals independent, repetitions allowed)."""
    rng = _rng(seed)
    clauses = []
    for _ in range(num_clauses):
        vs = rng.integers(1, num_vars + 1, size=3)
        signs = rng.integers(0, 2, size=3)
        clauses.append(tuple(int(v) if s else -int(v) for v, s in zip(vs, signs)))
    return CnfFormula(num_vars, tuple(clauses))


def _literal_node(lit: int) -> int:
    """Node id of a literal: variable i occupies 2i-1, its negation 2i."""
    i = abs(lit)
    return 2 * i - 1 if lit > 0 else 2 * i


def encode_3sat(formula: CnfFormula) -> HyTN:
    """Mixed network that is consistent exactly when ``formula`` holds.

    Node 0 is the reference point; each variable contributes a gadget that
    forces its two literal nodes to take values 0 and 1 in some order, and
    each clause contributes a node pinned to time 1 that must be reached
    from one of its literals.  Repeated literals within a clause collapse.
    """
    n, m = formula.num_vars, len(formula.clauses)
    z = 0
    arcs: list[Hyperarc] = []
    for i in range(1, n + 1):
        x, nx = 2 * i - 1, 2 * i
        arcs.append(Standard(z, x, 1))
        arcs.append(Standard(x, z, 0))
        arcs.append(Standard(z, nx, 1))
        arcs.append(Standard(nx, z, 0))
        arcs.append(MultiTail((x, nx), (-1, -1), z))
        arcs.append(MultiHead(z, (x, nx), (0, 0)))
    for j, clause in enumerate(formula.clauses):
        c = 1 + 2 * n + j
        arcs.append(Standard(z, c, 1))
        arcs.append(Standard(c, z, -1))
        tails = tuple(dict.fromkeys(_literal_node(l) for l in clause))
        arcs.append(MultiTail(tails, (0,) * len(tails), c))
    return HyTN(1 + 2 * n + m, arcs)


_SAT_ORACLE_LIMIT = 20


def sat_oracle(net: HyTN, formula: CnfFormula) -> bool:
    """Satisfiability of ``formula`` via feasibility of its encoding.

    The gadget admits a schedule only of the canonical shape (reference at
    0, clause nodes at 1, each literal pair split 0/1), so trying every
    polarity assignment through the feasibility verifier decides the
    formula.  ``net`` must come from `encode_3sat`.
    """
    n, m = formula.num_vars, len(formula.clauses)
    if net.n != 1 + 2 * n + m:
        raise ValueError("network does not match the formula's encoding")
    if n > _SAT_ORACLE_LIMIT:
        raise ValueError(f"too many variables for exhaustive search: {n}")
    schedule = [0] * net.n
    for j in range(m):
        schedule[1 + 2 * n + j] = 1
    for assignment in product((True, False), repeat=n):
        for i, val in enumerate(assignment, start=1):
            schedule[2 * i - 1] = 1 if val else 0
            schedule[2 * i] = 0 if val else 1
        if verify_schedule(net, schedule):
            return True
    return False
