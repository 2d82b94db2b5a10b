"""Warm-start construction: tie-breaking plus deferred acceptance.

Breaking all ties arbitrarily turns an HRT instance into a plain HR
instance; a stable matching of that strict instance is weakly stable in
the original, so it serves as an initial incumbent and objective lower
bound for the exact solver.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .core import Hospital, Instance, Matching, PreferenceList, build_rank_table


@dataclass(frozen=True)
class TieBreakPolicy:
    mode: str = "seeded-random"  # "seeded-random" | "list-order"
    seed: int = 0

    def __post_init__(self) -> None:
        if self.mode not in ("seeded-random", "list-order"):
            raise ValueError(f"unknown tie-break mode {self.mode!r}")


def _break_list(plist: PreferenceList, rng: random.Random | None) -> PreferenceList:
    entries = []
    for group in plist.groups:
        members = list(group)
        if rng is not None and len(members) > 1:
            rng.shuffle(members)
        entries.extend(members)
    return PreferenceList.strict(entries)


def break_ties(instance: Instance, policy: TieBreakPolicy) -> Instance:
    """Replace every tie by a permutation of its members; order across ties kept."""
    rng = random.Random(policy.seed) if policy.mode == "seeded-random" else None
    residents = tuple(_break_list(p, rng) for p in instance.residents)
    hospitals = tuple(
        Hospital(h.capacity, _break_list(h.preferences, rng)) for h in instance.hospitals
    )
    return Instance(residents=residents, hospitals=hospitals)


def gale_shapley(instance: Instance) -> Matching:
    """Resident-proposing deferred acceptance on a strict instance.

    Free residents apply down their lists; a full hospital rejects its
    worst assignee when a strictly better applicant arrives. The result
    is stable in the given (strict) instance.
    """
    for plist in instance.residents:
        if not plist.is_strict():
            raise ValueError("gale_shapley requires strict resident lists")
    for hosp in instance.hospitals:
        if not hosp.preferences.is_strict():
            raise ValueError("gale_shapley requires strict hospital lists")

    n1 = instance.n1
    res_lists = [list(p.entries()) for p in instance.residents]
    hosp_rank = [h.preferences.ranks() for h in instance.hospitals]
    caps = [h.capacity for h in instance.hospitals]
    next_choice = [0] * n1
    assigned: list[int | None] = [None] * n1
    holders: list[list[int]] = [[] for _ in range(instance.n2)]

    free = list(range(n1 - 1, -1, -1))
    while free:
        i = free.pop()
        prefs = res_lists[i]
        while next_choice[i] < len(prefs):
            j = prefs[next_choice[i]]
            next_choice[i] += 1
            rank = hosp_rank[j - 1]
            if caps[j - 1] == 0:
                continue
            if len(holders[j - 1]) < caps[j - 1]:
                holders[j - 1].append(i + 1)
                assigned[i] = j
                break
            worst = max(holders[j - 1], key=lambda r: rank[r])
            if rank[i + 1] < rank[worst]:
                holders[j - 1].remove(worst)
                holders[j - 1].append(i + 1)
                assigned[i] = j
                assigned[worst - 1] = None
                free.append(worst - 1)
                break
    return Matching({i + 1: j for i, j in enumerate(assigned) if j is not None})


def warm_start(instance: Instance, seed: int = 0) -> Matching:
    """A weakly stable matching of the instance, deterministic given seed."""
    strict = break_ties(instance, TieBreakPolicy("seeded-random", seed))
    return gale_shapley(strict)


def assert_weakly_stable(instance: Instance, matching: Matching) -> None:
    """Raise if the matching is not weakly stable in the instance."""
    from .core import blocking_pairs, validate_matching

    violations = validate_matching(instance, matching)
    if violations:
        raise AssertionError(f"invalid matching: {violations[0].message}")
    blockers = blocking_pairs(instance, build_rank_table(instance), matching)
    if blockers:
        raise AssertionError(f"matching blocked by {blockers[0]}")
