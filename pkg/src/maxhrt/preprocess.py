"""Instance reduction for ties on the hospital side only.

Two passes delete pairs that can neither belong to any weakly stable
matching nor block one, so the reduced instance has exactly the same set
of stable matchings while yielding a smaller optimization model.

Pass one (hospitals offer): while some hospital's vacancies can absorb
its whole active tie, the tie's residents are provisionally pulled in
(breaking their previous provisional assignments) and every hospital a
pulled resident ranks strictly below the offering one is cut from its
list. The active tie is the tie immediately after a hospital's least
preferred current assignee, or its first tie while it has no assignees.

Pass two (residents apply): free residents apply down their lists; once
a hospital has at least as many provisional assignees as capacity, every
strict successor of its capacity-th-choice assignee is cut, freeing any
of them that were provisionally assigned. Oversubscription is possible
while the capacity-th assignee sits inside a tie; that is fine, the
provisional assignment only drives deletions and is discarded.

Both passes process candidates in index order; a seeded shuffle order is
available because the preserved-stable-set guarantee must not depend on
the processing order.
"""

from __future__ import annotations

import random
from collections import deque

from .core import Hospital, Instance, PreferenceList

Pair = tuple[int, int]


class ResidentTiesError(ValueError):
    """Reduction applies only when residents' lists are strictly ordered."""


def _require_strict_residents(instance: Instance) -> None:
    for i, plist in enumerate(instance.residents, start=1):
        if not plist.is_strict():
            raise ResidentTiesError(f"resident r{i} has tied entries")


class _WorkingInstance:
    """Mutable preference structure shared by both passes."""

    def __init__(self, instance: Instance):
        self.caps = [h.capacity for h in instance.hospitals]
        self.res_lists = [list(p.entries()) for p in instance.residents]
        self.hosp_groups = [
            [list(g) for g in h.preferences.groups] for h in instance.hospitals
        ]
        self.deleted: set[Pair] = set()

    def delete_pair(self, resident: int, hospital: int) -> None:
        self.res_lists[resident - 1].remove(hospital)
        groups = self.hosp_groups[hospital - 1]
        for idx, group in enumerate(groups):
            if resident in group:
                group.remove(resident)
                if not group:
                    del groups[idx]
                break
        self.deleted.add((resident, hospital))

    def successors_on_resident_list(self, resident: int, hospital: int) -> list[int]:
        prefs = self.res_lists[resident - 1]
        return prefs[prefs.index(hospital) + 1 :]

    def to_instance(self) -> Instance:
        return Instance(
            residents=tuple(PreferenceList.strict(lst) for lst in self.res_lists),
            hospitals=tuple(
                Hospital(c, PreferenceList(tuple(tuple(g) for g in groups)))
                for c, groups in zip(self.caps, self.hosp_groups)
            ),
        )


def _active_tie(work: _WorkingInstance, hospital: int, assignees: set[int]) -> list[int]:
    """The tie just after the least preferred current assignee (first tie if none)."""
    groups = work.hosp_groups[hospital - 1]
    last = -1
    for idx, group in enumerate(groups):
        if any(r in assignees for r in group):
            last = idx
    if last + 1 >= len(groups):
        return []
    return list(groups[last + 1])


def hospitals_offer(
    instance: Instance, shuffle_seed: int | None = None
) -> tuple[Instance, set[Pair]]:
    """First reduction pass; returns the reduced instance and deleted pairs."""
    _require_strict_residents(instance)
    work = _WorkingInstance(instance)
    rng = random.Random(shuffle_seed) if shuffle_seed is not None else None
    n2 = instance.n2

    assigned: dict[int, int] = {}
    assignees: list[set[int]] = [set() for _ in range(n2)]
    vacancies = list(work.caps)

    while True:
        eligible = []
        ties = {}
        for j in range(1, n2 + 1):
            tie = _active_tie(work, j, assignees[j - 1])
            if 0 < len(tie) <= vacancies[j - 1]:
                eligible.append(j)
                ties[j] = tie
        if not eligible:
            return work.to_instance(), work.deleted
        j = rng.choice(eligible) if rng else eligible[0]
        for r in ties[j]:
            previous = assigned.get(r)
            if previous is not None:
                assignees[previous - 1].discard(r)
                vacancies[previous - 1] += 1
            assigned[r] = j
            assignees[j - 1].add(r)
            vacancies[j - 1] -= 1
            for successor in work.successors_on_resident_list(r, j):
                work.delete_pair(r, successor)


def residents_apply(
    instance: Instance, shuffle_seed: int | None = None
) -> tuple[Instance, set[Pair]]:
    """Second reduction pass; returns the reduced instance and deleted pairs."""
    _require_strict_residents(instance)
    work = _WorkingInstance(instance)
    rng = random.Random(shuffle_seed) if shuffle_seed is not None else None

    assigned: dict[int, int] = {}
    count = [0] * instance.n2
    free = deque(range(1, instance.n1 + 1))

    while free:
        if rng:
            pick = rng.randrange(len(free))
            free.rotate(-pick)
            r = free.popleft()
            free.rotate(pick)
        else:
            r = free.popleft()
        prefs = work.res_lists[r - 1]
        if not prefs:
            continue
        j = prefs[0]
        assigned[r] = j
        count[j - 1] += 1
        cap = work.caps[j - 1]
        if count[j - 1] < cap:
            continue
        groups = work.hosp_groups[j - 1]
        if cap == 0:
            # No assignee can ever be kept: every listed resident is cut.
            threshold = -1
        else:
            group_of = {}
            for idx, group in enumerate(groups):
                for member in group:
                    if assigned.get(member) == j:
                        group_of[member] = idx
            ranks = sorted(group_of.values())
            threshold = ranks[cap - 1]
        doomed = [m for group in groups[threshold + 1 :] for m in group]
        for victim in doomed:
            if assigned.get(victim) == j:
                del assigned[victim]
                count[j - 1] -= 1
                free.append(victim)
            work.delete_pair(victim, j)
    return work.to_instance(), work.deleted


def reduce_instance(
    instance: Instance, shuffle_seed: int | None = None
) -> tuple[Instance, set[Pair]]:
    """Both passes in sequence; the stable-matching set is preserved."""
    offered, deleted_first = hospitals_offer(instance, shuffle_seed)
    reduced, deleted_second = residents_apply(offered, shuffle_seed)
    return reduced, deleted_first | deleted_second
