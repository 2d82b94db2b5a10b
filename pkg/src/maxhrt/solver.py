"""Exact maximization of the pair-variable model by depth-first branch and bound.

Branching picks an unfixed pair of a currently unmatched resident with the
smallest resident-side rank (seeded tie-break) and tries x=1 first, which
makes the first dive behave like deferred acceptance and produces strong
incumbents early. Propagation applies the one-hospital-per-resident and
capacity rows eagerly; stability rows are read as "the resident gets this
hospital or better, or the hospital fills up with residents it ranks at
least as high", which yields both conflict detection and unit-style
forcing. Subtrees are pruned against a capacitated bipartite matching
relaxation that ignores stability rows, so the bound is exact integral
arithmetic throughout.

A weakly stable warm start (computed if not supplied) provides the initial
incumbent and objective floor; hitting the wall-clock cutoff returns the
incumbent with the root relaxation as the surviving proof bound.
"""

from __future__ import annotations

import enum
import random
import time
from dataclasses import dataclass
from typing import Mapping, Sequence

from .core import (
    Instance,
    Matching,
    build_rank_table,
    blocking_pairs,
    matching_size,
    validate_matching,
)
from .heuristics import warm_start as default_warm_start
from .ip_model import IpModel

_UNFIXED = -1
_BIG = 1 << 30


class SolveStatus(enum.Enum):
    OPTIMAL = "Optimal"
    FEASIBLE_TIMEOUT = "FeasibleTimeout"


class SolverInternalError(RuntimeError):
    """An invariant the search relies on failed; results would be unsound."""


@dataclass(frozen=True)
class SolveOptions:
    time_limit: float = 300.0
    warm_start: Matching | None = None
    lower_bound: int | None = None  # must be a valid bound on the optimum
    seed: int = 0

    def __post_init__(self) -> None:
        if self.time_limit <= 0:
            raise ValueError("time limit must be positive")


@dataclass(frozen=True)
class SolveOutcome:
    status: SolveStatus
    matching: Matching
    objective: int
    nodes: int
    wall_time: float
    proof_bound: int


def _b_matching_max(
    n1: int,
    n2: int,
    caps: Sequence[int],
    adjacency: Sequence[Sequence[int]],
    preassigned: Sequence[int],
) -> tuple[int, list[int]]:
    """Maximum residents placeable ignoring stability (augmenting paths).

    `adjacency[i]` lists 0-based hospitals open to resident i; residents
    with `preassigned[i] >= 0` start matched there and keep an edge only
    to that hospital, so they are never displaced. Returns the size and
    the placement realizing it.
    """
    holders: list[list[int]] = [[] for _ in range(n2)]
    assign = list(preassigned)
    matched = 0
    for i in range(n1):
        if assign[i] >= 0:
            holders[assign[i]].append(i)
            matched += 1

    def augment(i: int, visited: list[bool]) -> bool:
        for j in adjacency[i]:
            if visited[j]:
                continue
            visited[j] = True
            if len(holders[j]) < caps[j]:
                holders[j].append(i)
                assign[i] = j
                return True
            for p in list(holders[j]):
                if augment(p, visited):
                    holders[j].remove(p)
                    holders[j].append(i)
                    assign[i] = j
                    return True
        return False

    for i in range(n1):
        if assign[i] < 0 and adjacency[i]:
            if augment(i, [False] * n2):
                matched += 1
    return matched, assign


def upper_bound(model: IpModel, fixing: Mapping[int, int]) -> int:
    """Best conceivable completion of a partial fixing, stability ignored.

    The fixing must not already violate the resident or capacity rows.
    """
    n1, n2 = model.instance.n1, model.instance.n2
    caps = [model.instance.capacity(j) for j in range(1, n2 + 1)]
    preassigned = [-1] * n1
    load = [0] * n2
    for col, value in fixing.items():
        if value not in (0, 1):
            raise ValueError(f"fixing for column {col} must be 0 or 1")
        if value == 1:
            v = model.variables[col]
            i, j = v.resident - 1, v.hospital - 1
            if preassigned[i] >= 0:
                raise ValueError(f"resident r{v.resident} fixed to two hospitals")
            preassigned[i] = j
            load[j] += 1
            if load[j] > caps[j]:
                raise ValueError(f"capacity of h{v.hospital} exceeded by fixing")
    adjacency: list[list[int]] = [[] for _ in range(n1)]
    for v in model.variables:
        if fixing.get(v.column, _UNFIXED) == 0:
            continue
        i = v.resident - 1
        if preassigned[i] >= 0:
            continue
        if v.hospital - 1 not in adjacency[i]:
            adjacency[i].append(v.hospital - 1)
    bound, _ = _b_matching_max(n1, n2, caps, adjacency, preassigned)
    return bound


def extract_matching(model: IpModel, vector: Sequence[int]) -> Matching:
    """Decode a feasible 0/1 vector into the matching it represents."""
    if len(vector) != model.num_variables:
        raise ValueError("vector length does not match variable count")
    if any(x != 0 and x != 1 for x in vector):
        raise ValueError("vector must be 0/1 (no fractional values)")
    as_ints = [int(x) for x in vector]
    if not model.is_feasible(as_ints):
        raise ValueError("vector violates the model constraints")
    return Matching.from_pairs(
        (v.resident, v.hospital) for v in model.variables if as_ints[v.column] == 1
    )


class _Search:
    def __init__(self, model: IpModel, options: SolveOptions):
        self.model = model
        self.options = options
        instance = model.instance
        ranks = build_rank_table(instance)
        self.ranks = ranks
        nvars = model.num_variables
        self.n1, self.n2 = instance.n1, instance.n2
        self.caps = [instance.capacity(j) for j in range(1, self.n2 + 1)]
        self.var_res = [v.resident - 1 for v in model.variables]
        self.var_hosp = [v.hospital - 1 for v in model.variables]
        self.var_rrank = [
            int(ranks.resident_rank(v.resident, v.hospital)) for v in model.variables
        ]
        self.var_hrank = [
            int(ranks.hospital_rank(v.hospital, v.resident)) for v in model.variables
        ]
        self.res_vars: list[list[int]] = [[] for _ in range(self.n1)]
        self.hosp_vars: list[list[int]] = [[] for _ in range(self.n2)]
        for col in range(nvars):
            self.res_vars[self.var_res[col]].append(col)
            self.hosp_vars[self.var_hosp[col]].append(col)
        for i in range(self.n1):
            self.res_vars[i].sort(key=lambda c: (self.var_rrank[c], c))
        for j in range(self.n2):
            self.hosp_vars[j].sort(key=lambda c: (self.var_hrank[c], c))

        rng = random.Random(options.seed)
        priority = list(range(nvars))
        rng.shuffle(priority)
        self.priority = priority

        self.state = [_UNFIXED] * nvars
        self.trail: list[int] = []
        self.res_match = [-1] * self.n1
        self.res_nonzero = [len(vs) for vs in self.res_vars]
        self.hosp_ones = [0] * self.n2
        self.total_ones = 0
        self.nodes = 0

        self.incumbent: Matching | None = None
        self.incumbent_size = -1
        self.floor = -1
        # hospital suggested per resident by the latest relaxation solution;
        # diving along it tries to realize the bound, so that proving and
        # finding meet in the middle
        self.guide = [-1] * self.n1
        self.column_of = model.column_of

    # -- state updates ----------------------------------------------------

    def _fix_queue(self, assignments: list[tuple[int, int]]) -> bool:
        state = self.state
        queue = list(assignments)
        ptr = 0
        while ptr < len(queue):
            v, value = queue[ptr]
            ptr += 1
            current = state[v]
            if current == value:
                continue
            if current != _UNFIXED:
                return False
            state[v] = value
            self.trail.append(v)
            i = self.var_res[v]
            if value == 1:
                if self.res_match[i] >= 0:
                    return False
                self.res_match[i] = v
                self.total_ones += 1
                j = self.var_hosp[v]
                self.hosp_ones[j] += 1
                if self.hosp_ones[j] > self.caps[j]:
                    return False
                for w in self.res_vars[i]:
                    if w != v and state[w] != 0:
                        queue.append((w, 0))
                if self.hosp_ones[j] == self.caps[j]:
                    for w in self.hosp_vars[j]:
                        if state[w] == _UNFIXED:
                            queue.append((w, 0))
            else:
                self.res_nonzero[i] -= 1
        return True

    def _undo_to(self, mark: int) -> None:
        state = self.state
        trail = self.trail
        while len(trail) > mark:
            v = trail.pop()
            if state[v] == 1:
                self.res_match[self.var_res[v]] = -1
                self.hosp_ones[self.var_hosp[v]] -= 1
                self.total_ones -= 1
            else:
                self.res_nonzero[self.var_res[v]] += 1
            state[v] = _UNFIXED

    def _best_rank(self, i: int) -> int:
        m = self.res_match[i]
        if m >= 0:
            return self.var_rrank[m]
        state = self.state
        for w in self.res_vars[i]:
            if state[w] != 0:
                return self.var_rrank[w]
        return _BIG

    # -- stability reasoning ----------------------------------------------

    def _scan(self) -> tuple[list[int], bool] | None:
        """One pass over all stability rows.

        Returns (variables forced to 1, zero-completion feasible) or None
        on a row that no completion can satisfy.
        """
        state = self.state
        var_res = self.var_res
        var_rrank = self.var_rrank
        var_hrank = self.var_hrank
        res_match = self.res_match
        forced: list[int] = []
        zero_ok = True
        for j in range(self.n2):
            c = self.caps[j]
            vs = self.hosp_vars[j]
            if c == 0 or not vs:
                continue
            nonzero = ones = 0
            idx = 0
            count = len(vs)
            while idx < count:
                block_rank = var_hrank[vs[idx]]
                start = idx
                while idx < count and var_hrank[vs[idx]] == block_rank:
                    s = state[vs[idx]]
                    if s != 0:
                        nonzero += 1
                        if s == 1:
                            ones += 1
                    idx += 1
                if ones >= c:
                    break  # this prefix and every longer one is capacity-filled
                for k in range(start, idx):
                    v = vs[k]
                    i = var_res[v]
                    rr = var_rrank[v]
                    m = res_match[i]
                    if m >= 0 and var_rrank[m] <= rr:
                        continue
                    zero_ok = False
                    best = self._best_rank(i)
                    if best > rr:
                        # resident side dead: hospital must fill this prefix
                        if nonzero < c:
                            return None
                        if nonzero == c:
                            for w in vs[:idx]:
                                if state[w] == _UNFIXED:
                                    forced.append(w)
                    elif nonzero < c:
                        # prefix can never fill: resident must take rank <= rr
                        candidate = -1
                        options = 0
                        for w in self.res_vars[i]:
                            if var_rrank[w] > rr:
                                break
                            if state[w] != 0:
                                options += 1
                                candidate = w
                        if options == 1:
                            forced.append(candidate)
        return forced, zero_ok

    def _propagate(self, assignments: list[tuple[int, int]]) -> bool:
        if not self._fix_queue(assignments):
            return False
        while True:
            result = self._scan()
            if result is None:
                return False
            forced, zero_ok = result
            if not forced:
                break
            if not self._fix_queue([(w, 1) for w in forced]):
                return False
        if zero_ok and self.total_ones > self.floor:
            self._store_incumbent()
        return True

    def _store_incumbent(self) -> None:
        pairs = [
            (v.resident, v.hospital)
            for v in self.model.variables
            if self.state[v.column] == 1
        ]
        matching = Matching.from_pairs(pairs)
        instance = self.model.instance
        if validate_matching(instance, matching) or blocking_pairs(
            instance, self.ranks, matching
        ):
            raise SolverInternalError("search produced an unstable incumbent")
        self.incumbent = matching
        self.incumbent_size = len(pairs)
        if self.incumbent_size > self.floor:
            self.floor = self.incumbent_size

    # -- bounding -----------------------------------------------------------

    def _quick_bound(self) -> int:
        total = self.total_ones
        res_match = self.res_match
        res_nonzero = self.res_nonzero
        for i in range(self.n1):
            if res_match[i] < 0 and res_nonzero[i] > 0:
                total += 1
        return total

    def _relaxation_bound(self) -> int:
        state = self.state
        adjacency: list[list[int]] = [[] for _ in range(self.n1)]
        preassigned = [-1] * self.n1
        for i in range(self.n1):
            m = self.res_match[i]
            if m >= 0:
                preassigned[i] = self.var_hosp[m]
                continue
            seen = adjacency[i]
            for w in self.res_vars[i]:
                if state[w] != 0:
                    j = self.var_hosp[w]
                    if j not in seen:
                        seen.append(j)
        bound, placement = _b_matching_max(
            self.n1, self.n2, self.caps, adjacency, preassigned
        )
        self.guide = placement
        return bound

    def _select_guided(self) -> int:
        """Unfixed pair of an unmatched resident along the relaxation guide."""
        state = self.state
        best = -1
        best_key = (_BIG, _BIG)
        for i in range(self.n1):
            if self.res_match[i] >= 0:
                continue
            g = self.guide[i]
            if g < 0:
                continue
            col = self.column_of.get((i + 1, g + 1))
            if col is None or state[col] != _UNFIXED:
                continue
            key = (self.var_rrank[col], self.priority[col])
            if key < best_key:
                best_key = key
                best = col
        return best

    def _select_var(self) -> int:
        chosen = self._select_guided()
        if chosen >= 0:
            return chosen
        self._relaxation_bound()  # refresh the guide against current fixings
        chosen = self._select_guided()
        if chosen >= 0:
            return chosen
        # no relaxation edge left to follow: smallest-rank unfixed pair
        state = self.state
        best = -1
        best_key = (_BIG, _BIG)
        for i in range(self.n1):
            if self.res_match[i] >= 0:
                continue
            for w in self.res_vars[i]:
                if state[w] == _UNFIXED:
                    key = (self.var_rrank[w], self.priority[w])
                    if key < best_key:
                        best_key = key
                        best = w
                    break
        return best

    # -- main loop ----------------------------------------------------------

    def run(self) -> SolveOutcome:
        start = time.monotonic()
        deadline = start + self.options.time_limit
        if not self._propagate([]):
            raise SolverInternalError("root propagation found no stable matching")
        self.nodes = 1
        root_bound = self._relaxation_bound()
        timed_out = False

        if self.incumbent_size < root_bound:
            stack: list[list[int]] = []
            while True:
                if self.floor >= root_bound:
                    break  # incumbent meets the global relaxation: proven optimal
                if time.monotonic() > deadline:
                    timed_out = True
                    break
                v = self._select_var()
                expand = False
                if v >= 0:
                    b0 = self._quick_bound()
                    if b0 > self.floor and (
                        b0 - self.floor > 2 or self._relaxation_bound() > self.floor
                    ):
                        expand = True
                if expand:
                    stack.append([len(self.trail), v, 0])
                    self.nodes += 1
                    if self._propagate([(v, 1)]):
                        continue
                descended = False
                while stack:
                    mark, var, phase = stack[-1]
                    self._undo_to(mark)
                    if phase == 0:
                        stack[-1][2] = 1
                        self.nodes += 1
                        if self._propagate([(var, 0)]):
                            descended = True
                            break
                    stack.pop()
                if not descended:
                    break

        if self.incumbent is None:
            raise SolverInternalError("no incumbent at exit")
        status = SolveStatus.FEASIBLE_TIMEOUT if timed_out else SolveStatus.OPTIMAL
        proof = self.incumbent_size if not timed_out else max(root_bound, self.incumbent_size)
        return SolveOutcome(
            status=status,
            matching=self.incumbent,
            objective=self.incumbent_size,
            nodes=self.nodes,
            wall_time=time.monotonic() - start,
            proof_bound=proof,
        )


def solve(model: IpModel, options: SolveOptions | None = None) -> SolveOutcome:
    """Maximize matched residents over the model's feasible 0/1 points.

    Always returns a weakly stable matching: the warm start guarantees an
    incumbent even when the cutoff strikes immediately.
    """
    options = options or SolveOptions()
    search = _Search(model, options)
    instance = model.instance

    initial = options.warm_start
    if initial is None:
        initial = default_warm_start(instance, options.seed)
    if validate_matching(instance, initial):
        raise ValueError("warm start is not a valid matching for the instance")
    if blocking_pairs(instance, search.ranks, initial):
        raise ValueError("warm start is not weakly stable in the instance")
    model.encode(initial)  # every warm-start pair must be a model variable

    search.incumbent = initial
    search.incumbent_size = matching_size(initial)
    search.floor = search.incumbent_size
    if options.lower_bound is not None:
        if options.lower_bound > instance.n1:
            raise ValueError("lower bound exceeds the resident count")
        search.floor = max(search.floor, options.lower_bound)
    return search.run()
