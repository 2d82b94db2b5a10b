"""Domain model: instances with tied preference lists, matchings, ranks, stability.

Residents are numbered 1..n1 and hospitals 1..n2. A preference list is an
ordered sequence of ties (indifference groups); a strict entry is a tie of
size one. A pair (resident, hospital) is acceptable when each side lists the
other; ranks are finite exactly on acceptable pairs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping

INFINITY = math.inf


class InstanceError(ValueError):
    """Instance data violates a structural invariant."""


@dataclass(frozen=True)
class PreferenceList:
    """Ordered groups of agent ids; ids within one group are tied."""

    groups: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        seen: set[int] = set()
        for group in self.groups:
            if not group:
                raise InstanceError("empty tie group")
            for agent in group:
                if agent in seen:
                    raise InstanceError(f"agent {agent} listed twice")
                seen.add(agent)

    @staticmethod
    def strict(entries: Iterable[int]) -> "PreferenceList":
        return PreferenceList(tuple((e,) for e in entries))

    def entries(self) -> tuple[int, ...]:
        """All listed ids, best group first, in stored order."""
        return tuple(a for group in self.groups for a in group)

    def ranks(self) -> dict[int, int]:
        """Map id -> rank, where all members of one tie share a rank.

        The rank of an entry is 1 + the number of ids strictly preferred
        to it, i.e. the count of ids in earlier groups.
        """
        out: dict[int, int] = {}
        rank = 1
        for group in self.groups:
            for agent in group:
                out[agent] = rank
            rank += len(group)
        return out

    def is_strict(self) -> bool:
        return all(len(group) == 1 for group in self.groups)

    def without(self, removed: set[int]) -> "PreferenceList":
        """Copy with the given ids dropped; empty groups disappear."""
        kept = tuple(
            tuple(a for a in group if a not in removed) for group in self.groups
        )
        return PreferenceList(tuple(g for g in kept if g))

    def __len__(self) -> int:
        return sum(len(g) for g in self.groups)


@dataclass(frozen=True)
class Hospital:
    capacity: int
    preferences: PreferenceList


@dataclass(frozen=True)
class Instance:
    """An HRT instance: resident lists, hospital capacities and lists.

    Mutual acceptability is required: hospital j appears on resident i's
    list iff resident i appears on hospital j's list. Inputs that break
    this must be pruned before construction (the parser does).
    """

    residents: tuple[PreferenceList, ...]
    hospitals: tuple[Hospital, ...]

    def __post_init__(self) -> None:
        n1, n2 = len(self.residents), len(self.hospitals)
        if n1 < 1 or n2 < 1:
            raise InstanceError("need at least one resident and one hospital")
        res_pairs: set[tuple[int, int]] = set()
        for i, plist in enumerate(self.residents, start=1):
            for h in plist.entries():
                if not 1 <= h <= n2:
                    raise InstanceError(f"resident r{i} lists unknown hospital h{h}")
                res_pairs.add((i, h))
        hosp_pairs: set[tuple[int, int]] = set()
        for j, hosp in enumerate(self.hospitals, start=1):
            if hosp.capacity < 0:
                raise InstanceError(f"hospital h{j} has negative capacity")
            for r in hosp.preferences.entries():
                if not 1 <= r <= n1:
                    raise InstanceError(f"hospital h{j} lists unknown resident r{r}")
                hosp_pairs.add((r, j))
        if res_pairs != hosp_pairs:
            r, j = min(res_pairs.symmetric_difference(hosp_pairs))
            side = "r{0} lists h{1} only" if (r, j) in res_pairs else "h{1} lists r{0} only"
            raise InstanceError(f"pair (r{r}, h{j}) is not mutual: " + side.format(r, j))

    @property
    def n1(self) -> int:
        return len(self.residents)

    @property
    def n2(self) -> int:
        return len(self.hospitals)

    def capacity(self, hospital: int) -> int:
        return self.hospitals[hospital - 1].capacity

    def acceptable_pairs(self) -> list[tuple[int, int]]:
        """All acceptable (resident, hospital) pairs in resident list order."""
        return [
            (i, h)
            for i, plist in enumerate(self.residents, start=1)
            for h in plist.entries()
        ]

    def is_acceptable(self, resident: int, hospital: int) -> bool:
        return hospital in self.residents[resident - 1].entries()


@dataclass(frozen=True)
class RankTable:
    """Ranks for both directions of every acceptable pair; INFINITY otherwise."""

    resident_ranks: tuple[dict[int, int], ...]
    hospital_ranks: tuple[dict[int, int], ...]

    def resident_rank(self, resident: int, hospital: int) -> float:
        return self.resident_ranks[resident - 1].get(hospital, INFINITY)

    def hospital_rank(self, hospital: int, resident: int) -> float:
        return self.hospital_ranks[hospital - 1].get(resident, INFINITY)


def build_rank_table(instance: Instance) -> RankTable:
    return RankTable(
        resident_ranks=tuple(p.ranks() for p in instance.residents),
        hospital_ranks=tuple(h.preferences.ranks() for h in instance.hospitals),
    )


@dataclass(frozen=True)
class Matching:
    """Partial assignment of residents to hospitals (absent = unmatched)."""

    assignment: Mapping[int, int]

    def __post_init__(self) -> None:
        object.__setattr__(self, "assignment", dict(self.assignment))

    @staticmethod
    def from_pairs(pairs: Iterable[tuple[int, int]]) -> "Matching":
        out: dict[int, int] = {}
        for r, h in pairs:
            if r in out:
                raise ValueError(f"resident r{r} assigned twice")
            out[r] = h
        return Matching(out)

    def hospital_of(self, resident: int) -> int | None:
        return self.assignment.get(resident)

    def assignees(self, hospital: int) -> list[int]:
        return [r for r, h in self.assignment.items() if h == hospital]

    def pairs(self) -> Iterator[tuple[int, int]]:
        return iter(sorted(self.assignment.items()))

    def __len__(self) -> int:
        return len(self.assignment)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Matching):
            return NotImplemented
        return dict(self.assignment) == dict(other.assignment)

    def __hash__(self) -> int:
        return hash(frozenset(self.assignment.items()))


def matching_size(matching: Matching) -> int:
    """Number of matched residents (the quantity being maximized)."""
    return len(matching.assignment)


@dataclass(frozen=True)
class Violation:
    kind: str  # "capacity" | "acceptability" | "duplicate" | "range"
    message: str


def validate_matching(
    instance: Instance, matching: Matching | Iterable[tuple[int, int]]
) -> list[Violation]:
    """Check matching invariants; one violation record per breach.

    Accepts raw (resident, hospital) pairs as well, so duplicate
    assignments of one resident can be reported rather than collapsed.
    """
    pairs: list[tuple[int, int]]
    if isinstance(matching, Matching):
        pairs = list(matching.pairs())
    else:
        pairs = list(matching)
    violations: list[Violation] = []
    seen: set[int] = set()
    load: dict[int, int] = {}
    for r, h in pairs:
        if not 1 <= r <= instance.n1 or not 1 <= h <= instance.n2:
            violations.append(Violation("range", f"pair (r{r}, h{h}) out of range"))
            continue
        if r in seen:
            violations.append(
                Violation("duplicate", f"resident r{r} assigned more than once")
            )
        seen.add(r)
        if not instance.is_acceptable(r, h):
            violations.append(
                Violation("acceptability", f"pair (r{r}, h{h}) is not acceptable")
            )
        load[h] = load.get(h, 0) + 1
    for h, count in sorted(load.items()):
        cap = instance.capacity(h)
        if count > cap:
            violations.append(
                Violation(
                    "capacity", f"hospital h{h} has {count} assignees, capacity {cap}"
                )
            )
    return violations


def is_blocking_pair(
    instance: Instance,
    ranks: RankTable,
    matching: Matching,
    resident: int,
    hospital: int,
) -> bool:
    """Weak-stability blocking test for one acceptable pair.

    Blocks iff the resident is unmatched or strictly prefers the hospital
    to its assignment, and the hospital is under-subscribed or strictly
    prefers the resident to one of its assignees.
    """
    if not instance.is_acceptable(resident, hospital):
        raise ValueError(f"pair (r{resident}, h{hospital}) is not acceptable")
    assigned = matching.hospital_of(resident)
    if assigned is not None:
        if ranks.resident_rank(resident, hospital) >= ranks.resident_rank(
            resident, assigned
        ):
            return False
    assignees = matching.assignees(hospital)
    if len(assignees) < instance.capacity(hospital):
        return True
    my_rank = ranks.hospital_rank(hospital, resident)
    return any(my_rank < ranks.hospital_rank(hospital, r) for r in assignees)


def blocking_pairs(
    instance: Instance, ranks: RankTable, matching: Matching
) -> list[tuple[int, int]]:
    """All acceptable pairs that block the matching."""
    out = []
    assignees: dict[int, list[int]] = {j: [] for j in range(1, instance.n2 + 1)}
    for r, h in matching.assignment.items():
        assignees[h].append(r)
    for i, plist in enumerate(instance.residents, start=1):
        assigned = matching.hospital_of(i)
        assigned_rank = (
            ranks.resident_rank(i, assigned) if assigned is not None else INFINITY
        )
        for h in plist.entries():
            if ranks.resident_rank(i, h) >= assigned_rank:
                continue
            holders = assignees[h]
            if len(holders) < instance.capacity(h):
                out.append((i, h))
                continue
            my_rank = ranks.hospital_rank(h, i)
            if any(my_rank < ranks.hospital_rank(h, r) for r in holders):
                out.append((i, h))
    return out


def is_stable(instance: Instance, ranks: RankTable, matching: Matching) -> bool:
    """True iff no acceptable pair blocks the matching."""
    return not blocking_pairs(instance, ranks, matching)
