"""Text formats for instances and matchings.

Instance format::

    # comment lines start with '#'
    <n1> <n2>
    r1: h1 ( h2 h3 )
    r2:
    ...
    h1: <capacity>: r2 ( r1 r3 )
    ...

Groups in round brackets are ties; a bare id is a strict entry. Tokens are
whitespace-separated, but brackets glued to ids (as in ``(r4 r5)``) are
accepted. Ids match ``r[0-9]+`` / ``h[0-9]+`` and must be the dense ranges
1..n1 and 1..n2, with resident and hospital lines in index order.

Matching format: one line per resident in index order, ``r<i> h<j>`` for a
matched resident or ``r<i> -`` for an unmatched one.

One-sided list entries (a hospital listing a resident that does not list it
back, or vice versa) are pruned with a warning, since acceptability is
mutual by definition.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .core import Hospital, Instance, Matching, PreferenceList, validate_matching


@dataclass(frozen=True)
class ParseDiagnostic:
    line: int
    severity: str  # "warning" | "error"
    message: str

    def __str__(self) -> str:
        return f"line {self.line}: {self.severity}: {self.message}"


class ParseError(ValueError):
    """Raised when input text cannot be parsed into a valid object."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.diagnostic = ParseDiagnostic(line, "error", message)


_ID_RE = re.compile(r"([rh])([0-9]+)$")


def _content_lines(text: str) -> list[tuple[int, str]]:
    """Non-empty, non-comment lines with their 1-based line numbers."""
    out = []
    for num, raw in enumerate(text.split("\n"), start=1):
        line = raw.rstrip("\r").strip()
        if line and not line.startswith("#"):
            out.append((num, line))
    return out


def _parse_id(token: str, kind: str, limit: int, line: int) -> int:
    m = _ID_RE.match(token)
    if not m or m.group(1) != kind:
        raise ParseError(line, f"expected {kind}<number>, got {token!r}")
    value = int(m.group(2))
    if not 1 <= value <= limit:
        raise ParseError(line, f"unknown id {token!r} (valid: {kind}1..{kind}{limit})")
    return value


def _parse_groups(tokens: list[str], kind: str, limit: int, line: int) -> PreferenceList:
    groups: list[tuple[int, ...]] = []
    seen: set[int] = set()
    tie: list[int] | None = None
    for token in tokens:
        if token == "(":
            if tie is not None:
                raise ParseError(line, "nested tie bracket")
            tie = []
        elif token == ")":
            if tie is None:
                raise ParseError(line, "unbalanced tie parentheses")
            if not tie:
                raise ParseError(line, "empty tie group")
            groups.append(tuple(tie))
            tie = None
        else:
            agent = _parse_id(token, kind, limit, line)
            if agent in seen:
                raise ParseError(line, f"duplicate entry {token!r}")
            seen.add(agent)
            if tie is None:
                groups.append((agent,))
            else:
                tie.append(agent)
    if tie is not None:
        raise ParseError(line, "unbalanced tie parentheses")
    return PreferenceList(tuple(groups))


def _tokenize_list(body: str) -> list[str]:
    return body.replace("(", " ( ").replace(")", " ) ").split()


def parse_instance(text: str) -> tuple[Instance, list[ParseDiagnostic]]:
    """Parse instance text; returns the instance and any warnings.

    Raises ParseError on malformed input. Non-mutual entries are pruned
    and reported as warnings, never as errors.
    """
    lines = _content_lines(text)
    if not lines:
        raise ParseError(1, "empty input")
    header_line, header = lines[0]
    parts = header.split()
    if len(parts) != 2 or not all(p.lstrip("-").isdigit() for p in parts):
        raise ParseError(header_line, f"malformed header {header!r}, expected '<n1> <n2>'")
    n1, n2 = int(parts[0]), int(parts[1])
    if n1 < 1 or n2 < 1:
        raise ParseError(header_line, f"n1 and n2 must be positive, got {n1} {n2}")
    if len(lines) != 1 + n1 + n2:
        raise ParseError(
            lines[-1][0],
            f"expected {n1} resident lines and {n2} hospital lines, got {len(lines) - 1}",
        )

    res_lists: list[PreferenceList] = []
    res_lines: list[int] = []
    for i in range(1, n1 + 1):
        num, line = lines[i]
        head, sep, body = line.partition(":")
        if not sep:
            raise ParseError(num, "missing ':' after resident id")
        if _parse_id(head.strip(), "r", n1, num) != i:
            raise ParseError(num, f"expected r{i} at this position, got {head.strip()!r}")
        res_lists.append(_parse_groups(_tokenize_list(body), "h", n2, num))
        res_lines.append(num)

    capacities: list[int] = []
    hosp_lists: list[PreferenceList] = []
    hosp_lines: list[int] = []
    for j in range(1, n2 + 1):
        num, line = lines[n1 + j]
        head, sep, rest = line.partition(":")
        if not sep:
            raise ParseError(num, "missing ':' after hospital id")
        if _parse_id(head.strip(), "h", n2, num) != j:
            raise ParseError(num, f"expected h{j} at this position, got {head.strip()!r}")
        cap_text, sep, body = rest.partition(":")
        if not sep:
            raise ParseError(num, "missing capacity field")
        cap_token = cap_text.strip()
        # Accept the Figure-style "(2)" capacity notation as well.
        if cap_token.startswith("(") and cap_token.endswith(")"):
            cap_token = cap_token[1:-1].strip()
        if not cap_token.lstrip("-").isdigit():
            raise ParseError(num, f"capacity must be an integer, got {cap_token!r}")
        capacity = int(cap_token)
        if capacity < 0:
            raise ParseError(num, f"capacity must be non-negative, got {capacity}")
        capacities.append(capacity)
        hosp_lists.append(_parse_groups(_tokenize_list(body), "r", n1, num))
        hosp_lines.append(num)

    # Prune one-sided entries so that acceptability is mutual.
    res_pairs = {(i, h) for i, pl in enumerate(res_lists, 1) for h in pl.entries()}
    hosp_pairs = {(r, j) for j, pl in enumerate(hosp_lists, 1) for r in pl.entries()}
    warnings: list[ParseDiagnostic] = []
    for i, h in sorted(res_pairs - hosp_pairs):
        warnings.append(
            ParseDiagnostic(
                res_lines[i - 1],
                "warning",
                f"pruned one-sided pair (r{i}, h{h}): h{h} does not list r{i}",
            )
        )
        res_lists[i - 1] = res_lists[i - 1].without({h})
    for r, j in sorted(hosp_pairs - res_pairs):
        warnings.append(
            ParseDiagnostic(
                hosp_lines[j - 1],
                "warning",
                f"pruned one-sided pair (r{r}, h{j}): r{r} does not list h{j}",
            )
        )
        hosp_lists[j - 1] = hosp_lists[j - 1].without({r})

    instance = Instance(
        residents=tuple(res_lists),
        hospitals=tuple(Hospital(c, pl) for c, pl in zip(capacities, hosp_lists)),
    )
    return instance, warnings


def _format_groups(plist: PreferenceList, prefix: str) -> str:
    parts = []
    for group in plist.groups:
        if len(group) == 1:
            parts.append(f"{prefix}{group[0]}")
        else:
            parts.append("( " + " ".join(f"{prefix}{a}" for a in group) + " )")
    return " ".join(parts)


def serialize_instance(instance: Instance) -> str:
    """Canonical text for an instance; parse(serialize(I)) reproduces I."""
    out = [f"{instance.n1} {instance.n2}"]
    for i, plist in enumerate(instance.residents, start=1):
        body = _format_groups(plist, "h")
        out.append(f"r{i}: {body}".rstrip())
    for j, hosp in enumerate(instance.hospitals, start=1):
        body = _format_groups(hosp.preferences, "r")
        out.append(f"h{j}: {hosp.capacity}: {body}".rstrip())
    return "\n".join(out) + "\n"


def parse_matching(text: str, instance: Instance) -> Matching:
    """Parse a matching file and validate it against the instance."""
    lines = _content_lines(text)
    if len(lines) != instance.n1:
        actual = len(lines)
        raise ParseError(
            lines[-1][0] if lines else 1,
            f"expected one line per resident ({instance.n1}), got {actual}",
        )
    assignment: dict[int, int] = {}
    for i, (num, line) in enumerate(lines, start=1):
        tokens = line.split()
        if len(tokens) != 2:
            raise ParseError(num, f"expected 'r<i> h<j>' or 'r<i> -', got {line!r}")
        if _parse_id(tokens[0], "r", instance.n1, num) != i:
            raise ParseError(num, f"expected r{i} at this position, got {tokens[0]!r}")
        if tokens[1] == "-":
            continue
        assignment[i] = _parse_id(tokens[1], "h", instance.n2, num)
    matching = Matching(assignment)
    violations = validate_matching(instance, matching)
    if violations:
        raise ParseError(1, "; ".join(v.message for v in violations))
    return matching


def serialize_matching(matching: Matching, instance: Instance) -> str:
    """One line per resident in index order; '-' marks unmatched."""
    out = []
    for i in range(1, instance.n1 + 1):
        h = matching.hospital_of(i)
        out.append(f"r{i} -" if h is None else f"r{i} h{h}")
    return "\n".join(out) + "\n"
