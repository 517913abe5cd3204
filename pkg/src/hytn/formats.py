"""Line-oriented text formats for networks, games, schedules, certificates.

Network files start with ``HYTN <n>`` and list one arc per line: ``E`` for a
standard arc, ``MH``/``MT`` for hyperarcs with their endpoint count followed
by id/weight pairs.  Game files start with ``MPG <n>``, declare every node
with ``N <id> <owner>`` and then list ``A <from> <to> <w>`` arcs.  ``#``
starts a comment.  Serialization is canonical: arcs sorted, single-endpoint
bundles written as ``E`` lines, so parse-serialize round-trips are stable.
"""

from __future__ import annotations

from .model import HyTN, Hyperarc, MultiHead, MultiTail, NegativeCycleCert, Standard
from .mpg import MeanPayoffGame


class ParseError(ValueError):
    """Malformed instance text; message carries the 1-based line number."""


def _tokens(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line.split()


def _int(tok: str, lineno: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"line {lineno}: expected integer, got {tok!r}") from None


def _pairs(parts: list[str], lineno: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    k = _int(parts[0], lineno)
    if k < 1 or len(parts) != 1 + 2 * k:
        raise ParseError(f"line {lineno}: expected {k} id/weight pairs")
    ids = tuple(_int(parts[1 + 2 * i], lineno) for i in range(k))
    ws = tuple(_int(parts[2 + 2 * i], lineno) for i in range(k))
    return ids, ws


def parse_hytn(text: str) -> HyTN:
    """Build a network from instance text, validating as it goes."""
    rows = _tokens(text)
    try:
        lineno, parts = next(rows)
    except StopIteration:
        raise ParseError("line 1: empty instance") from None
    if len(parts) != 2 or parts[0] != "HYTN":
        raise ParseError(f"line {lineno}: expected header 'HYTN <n>'")
    n = _int(parts[1], lineno)
    arcs: list[Hyperarc] = []
    for lineno, parts in rows:
        kind, rest = parts[0], parts[1:]
        try:
            if kind == "E":
                if len(rest) != 3:
                    raise ParseError(f"line {lineno}: expected 'E <tail> <head> <w>'")
                arcs.append(
                    Standard(_int(rest[0], lineno), _int(rest[1], lineno), _int(rest[2], lineno))
                )
            elif kind == "MH":
                tail = _int(rest[0], lineno)
                heads, ws = _pairs(rest[1:], lineno)
                arcs.append(MultiHead(tail, heads, ws))
            elif kind == "MT":
                head = _int(rest[0], lineno)
                tails, ws = _pairs(rest[1:], lineno)
                arcs.append(MultiTail(tails, ws, head))
            else:
                raise ParseError(f"line {lineno}: unknown record {kind!r}")
        except IndexError:
            raise ParseError(f"line {lineno}: truncated record") from None
    try:
        return HyTN(n, arcs)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def _arc_line(arc: Hyperarc) -> str:
    if isinstance(arc, Standard):
        return f"E {arc.tail} {arc.head} {arc.weight}"
    if isinstance(arc, MultiHead):
        pairs = sorted(zip(arc.heads, arc.weights))
        body = " ".join(f"{h} {w}" for h, w in pairs)
        return f"MH {arc.tail} {len(pairs)} {body}"
    pairs = sorted(zip(arc.tails, arc.weights))
    body = " ".join(f"{t} {w}" for t, w in pairs)
    return f"MT {arc.head} {len(pairs)} {body}"


def _arc_key(arc: Hyperarc) -> tuple:
    if isinstance(arc, Standard):
        return (0, arc.tail, arc.head, arc.weight)
    if isinstance(arc, MultiHead):
        return (1, arc.tail, tuple(sorted(zip(arc.heads, arc.weights))))
    return (2, arc.head, tuple(sorted(zip(arc.tails, arc.weights))))


def serialize_hytn(net: HyTN) -> str:
    """Canonical text for ``net``: sorted arc lines under the header."""
    lines = [f"HYTN {net.n}"]
    lines.extend(_arc_line(a) for a in sorted(net.arcs, key=_arc_key))
    return "\n".join(lines) + "\n"


def parse_mpg(text: str) -> MeanPayoffGame:
    """Build a game from instance text; nodes must be declared before use."""
    rows = _tokens(text)
    try:
        lineno, parts = next(rows)
    except StopIteration:
        raise ParseError("line 1: empty instance") from None
    if len(parts) != 2 or parts[0] != "MPG":
        raise ParseError(f"line {lineno}: expected header 'MPG <n>'")
    n = _int(parts[1], lineno)
    owners: list[int | None] = [None] * n
    arcs: list[tuple[int, int, int]] = []
    for lineno, parts in rows:
        kind, rest = parts[0], parts[1:]
        if kind == "N":
            if len(rest) != 2:
                raise ParseError(f"line {lineno}: expected 'N <id> <owner>'")
            v, p = _int(rest[0], lineno), _int(rest[1], lineno)
            if not 0 <= v < n:
                raise ParseError(f"line {lineno}: node {v} out of range")
            if p not in (0, 1):
                raise ParseError(f"line {lineno}: owner must be 0 or 1")
            if owners[v] is not None:
                raise ParseError(f"line {lineno}: node {v} declared twice")
            owners[v] = p
        elif kind == "A":
            if len(rest) != 3:
                raise ParseError(f"line {lineno}: expected 'A <from> <to> <w>'")
            u, v, w = (_int(tok, lineno) for tok in rest)
            for x in (u, v):
                if not 0 <= x < n or owners[x] is None:
                    raise ParseError(f"line {lineno}: node {x} not declared")
            arcs.append((u, v, w))
        else:
            raise ParseError(f"line {lineno}: unknown record {kind!r}")
    missing = [v for v in range(n) if owners[v] is None]
    if missing:
        raise ParseError(f"undeclared nodes: {missing[:5]}")
    try:
        return MeanPayoffGame(owners, arcs)  # type: ignore[arg-type]
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def serialize_mpg(game: MeanPayoffGame) -> str:
    lines = [f"MPG {game.n}"]
    lines.extend(f"N {v} {game.owners[v]}" for v in range(game.n))
    lines.extend(f"A {u} {v} {w}" for u, v, w in sorted(game.arcs))
    return "\n".join(lines) + "\n"


def serialize_schedule(schedule: list[int]) -> str:
    return "\n".join(f"s {i} {x}" for i, x in enumerate(schedule)) + "\n"


def parse_schedule(text: str, n: int) -> list[int]:
    """Read ``s <id> <value>`` lines into a dense schedule of order ``n``."""
    values: list[int | None] = [None] * n
    for lineno, parts in _tokens(text):
        if len(parts) != 3 or parts[0] != "s":
            raise ParseError(f"line {lineno}: expected 's <id> <value>'")
        v, x = _int(parts[1], lineno), _int(parts[2], lineno)
        if not 0 <= v < n:
            raise ParseError(f"line {lineno}: timepoint {v} out of range")
        if values[v] is not None:
            raise ParseError(f"line {lineno}: timepoint {v} assigned twice")
        values[v] = x
    missing = [v for v in range(n) if values[v] is None]
    if missing:
        raise ParseError(f"schedule misses timepoints: {missing[:5]}")
    return values  # type: ignore[return-value]


def serialize_certificate(net: HyTN, cert: NegativeCycleCert) -> str:
    """Certificate text: the node set then one line per chosen arc."""
    lines = ["S " + " ".join(str(v) for v in sorted(cert.nodes))]
    for idx in sorted(cert.arc_indices, key=lambda i: _arc_key(net.arcs[i])):
        lines.append("C " + _arc_line(net.arcs[idx]))
    return "\n".join(lines) + "\n"


def parse_certificate(text: str, net: HyTN) -> NegativeCycleCert:
    """Match certificate text back to the arcs of ``net``.

    Arc lines are looked up structurally, so the certificate file stays
    valid under re-serialization of the instance.
    """
    by_key = {_arc_key(a): i for i, a in enumerate(net.arcs)}
    nodes: set[int] = set()
    arc_indices: list[int] = []
    saw_s = False
    for lineno, parts in _tokens(text):
        if parts[0] == "S":
            if saw_s:
                raise ParseError(f"line {lineno}: duplicate S record")
            saw_s = True
            nodes.update(_int(tok, lineno) for tok in parts[1:])
        elif parts[0] == "C":
            probe = parse_hytn("HYTN 1000000000\n" + " ".join(parts[1:]) + "\n")
            key = _arc_key(probe.arcs[0])
            if key not in by_key:
                raise ParseError(f"line {lineno}: arc not present in the instance")
            arc_indices.append(by_key[key])
        else:
            raise ParseError(f"line {lineno}: unknown record {parts[0]!r}")
    if not saw_s:
        raise ParseError("certificate misses its S record")
    return NegativeCycleCert(nodes=frozenset(nodes), arc_indices=tuple(arc_indices))
