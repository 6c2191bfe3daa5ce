"""Line-oriented text formats.  ``#`` starts a comment; indices are 1-based.

matrix       ``q k n`` then ``k`` rows of ``n`` residues (a row may also be
             written as one run of digits when q <= 10)
collection   one recovery set per line, ``i: c1,c2,...`` or untagged ``c1,c2,...``
histories    header ``sequence t`` or ``set t``, then one member per line with
             its sets separated by ``|`` (``-`` is the empty member)
family       ``q n m`` then per member ``dim d`` and ``d`` basis rows
graph        ``k b e`` then ``e`` lines ``i j``
events       ``arrive i`` and ``complete i:c1,...``
"""

from __future__ import annotations

from typing import Iterable, Optional

from .aad import Subspace, SubspaceFamily
from .gf import GFMatrix, columns_of, mask_of
from .graphs import BipartiteGraph
from .histories import SEQUENCE, SET, HistoryCollection
from .simulate import Event
from .strong import Service


class FormatError(ValueError):
    pass


def _lines(text: str) -> list[tuple[int, str]]:
    out = []
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append((no, line))
    return out


def _ints(no: int, tokens: Iterable[str]) -> list[int]:
    try:
        return [int(x) for x in tokens]
    except ValueError:
        raise FormatError(f"line {no}: expected integers, got {' '.join(tokens)!r}") from None


def _header(lines: list[tuple[int, str]], count: int, what: str) -> list[int]:
    if not lines:
        raise FormatError(f"empty {what} file")
    no, line = lines[0]
    vals = _ints(no, line.split())
    if len(vals) != count:
        raise FormatError(f"line {no}: {what} header needs {count} integers")
    return vals


def _cols(no: int, text: str) -> tuple[int, ...]:
    vals = _ints(no, [c for c in text.replace(" ", "").split(",") if c])
    if not vals or len(set(vals)) != len(vals) or min(vals) < 1:
        raise FormatError(f"line {no}: bad column list {text!r}")
    return tuple(sorted(vals))


# matrices ---------------------------------------------------------------------


def parse_matrix(text: str) -> GFMatrix:
    lines = _lines(text)
    q, k, n = _header(lines, 3, "matrix")
    body = lines[1:]
    if len(body) != k:
        raise FormatError(f"matrix header promises {k} rows, found {len(body)}")
    rows = []
    for no, line in body:
        tokens = line.split()
        if len(tokens) == 1 and len(tokens[0]) == n and q <= 10:
            tokens = list(tokens[0])
        row = _ints(no, tokens)
        if len(row) != n:
            raise FormatError(f"line {no}: expected {n} entries, got {len(row)}")
        if any(not 0 <= x < q for x in row):
            raise FormatError(f"line {no}: entries must lie in [0, {q})")
        rows.append(row)
    try:
        return GFMatrix.from_rows(rows, q)
    except ValueError as exc:
        raise FormatError(str(exc)) from None


def format_matrix(G: GFMatrix) -> str:
    out = [f"{G.q} {G.k} {G.n}"]
    out += [" ".join(map(str, row)) for row in G.rows]
    return "\n".join(out) + "\n"


# recovery sets / services -------------------------------------------------------


def parse_collection(text: str) -> list[tuple[Optional[int], tuple[int, ...]]]:
    """Pairs ``(request or None, columns)`` in file order."""
    out = []
    for no, line in _lines(text):
        if ":" in line:
            head, tail = line.split(":", 1)
            req = _ints(no, [head.strip()])[0]
            out.append((req, _cols(no, tail)))
        else:
            out.append((None, _cols(no, line)))
    return out


def parse_services(text: str) -> list[Service]:
    out = []
    for req, cols in parse_collection(text):
        if req is None:
            raise FormatError(f"service {cols} has no request tag")
        out.append(Service.of(req, cols))
    return out


def format_collection(items: Iterable) -> str:
    """Services, ``(request, columns)`` pairs, or bare column sets."""
    lines = []
    for it in items:
        if isinstance(it, Service):
            lines.append(str(it))
        elif isinstance(it, tuple) and len(it) == 2 and isinstance(it[1], tuple):
            req, cols = it
            body = ",".join(map(str, cols))
            lines.append(body if req is None else f"{req}: {body}")
        else:
            lines.append(",".join(map(str, it)))
    return "\n".join(lines) + ("\n" if lines else "")


# histories --------------------------------------------------------------------


def parse_histories(text: str) -> HistoryCollection:
    lines = _lines(text)
    if not lines:
        raise FormatError("empty histories file")
    no, head = lines[0]
    parts = head.split()
    if len(parts) != 2 or parts[0] not in (SEQUENCE, SET):
        raise FormatError(f"line {no}: header must be 'sequence t' or 'set t'")
    t = _ints(no, parts[1:])[0]
    members = []
    for no, line in lines[1:]:
        if line == "-":
            members.append([])
        else:
            members.append([_cols(no, part) for part in line.split("|")])
    try:
        return HistoryCollection.of(parts[0], t, members)
    except (ValueError, TypeError) as exc:
        raise FormatError(str(exc)) from None


def format_histories(H: HistoryCollection) -> str:
    out = [f"{H.mode} {H.t}"]
    for h in H.sorted_members():
        sets = H.as_column_sets(h)
        out.append(" | ".join(",".join(map(str, c)) for c in sets) if sets else "-")
    return "\n".join(out) + "\n"


# families ---------------------------------------------------------------------


def parse_family(text: str) -> SubspaceFamily:
    lines = _lines(text)
    q, n, m = _header(lines, 3, "family")
    pos = 1
    members = []
    for _ in range(m):
        if pos >= len(lines):
            raise FormatError(f"family promises {m} members, found {len(members)}")
        no, line = lines[pos]
        parts = line.split()
        if len(parts) != 2 or parts[0] != "dim":
            raise FormatError(f"line {no}: expected 'dim d'")
        d = _ints(no, parts[1:])[0]
        rows = lines[pos + 1: pos + 1 + d]
        if len(rows) != d:
            raise FormatError(f"line {no}: member needs {d} basis rows")
        basis = []
        for rno, r in rows:
            tokens = r.split()
            if len(tokens) == 1 and len(tokens[0]) == n and q <= 10:
                tokens = list(tokens[0])
            v = _ints(rno, tokens)
            if len(v) != n:
                raise FormatError(f"line {rno}: expected {n} entries")
            basis.append(tuple(v))
        try:
            members.append(Subspace(q, n, tuple(basis)))
        except ValueError as exc:
            raise FormatError(f"line {no}: {exc}") from None
        pos += 1 + d
    if pos != len(lines):
        raise FormatError(f"line {lines[pos][0]}: trailing content after {m} members")
    return SubspaceFamily(tuple(members))


def format_family(F: SubspaceFamily) -> str:
    out = [f"{F.q} {F.n} {F.m}"]
    for U in F.members:
        out.append(f"dim {U.dim}")
        out += [" ".join(map(str, v)) for v in U.basis]
    return "\n".join(out) + "\n"


# graphs -----------------------------------------------------------------------


def parse_graph(text: str) -> BipartiteGraph:
    lines = _lines(text)
    k, b, e = _header(lines, 3, "graph")
    body = lines[1:]
    if len(body) != e:
        raise FormatError(f"graph header promises {e} edges, found {len(body)}")
    edges = []
    for no, line in body:
        pair = _ints(no, line.split())
        if len(pair) != 2:
            raise FormatError(f"line {no}: expected 'i j'")
        edges.append(tuple(pair))
    if len(set(edges)) != len(edges):
        raise FormatError("duplicate edges (multigraphs are not supported)")
    try:
        return BipartiteGraph.of(k, b, edges)
    except ValueError as exc:
        raise FormatError(str(exc)) from None


def format_graph(g: BipartiteGraph) -> str:
    out = [f"{g.k} {g.b} {len(g.edges)}"] + [f"{i} {j}" for i, j in g.edges]
    return "\n".join(out) + "\n"


# events -----------------------------------------------------------------------


def parse_events(text: str) -> list[Event]:
    out = []
    for no, line in _lines(text):
        kind, _, rest = line.partition(" ")
        rest = rest.strip()
        if kind == "arrive":
            out.append(Event("arrive", _ints(no, [rest])[0]))
        elif kind == "complete" and ":" in rest:
            head, tail = rest.split(":", 1)
            out.append(Event("complete", _ints(no, [head.strip()])[0], _cols(no, tail)))
        else:
            raise FormatError(f"line {no}: expected 'arrive i' or 'complete i:c1,...'")
    return out


def format_events(events: Iterable[Event]) -> str:
    lines = [str(e) for e in events]
    return "\n".join(lines) + ("\n" if lines else "")


def masks_to_sets(masks: Iterable[int]) -> list[tuple[int, ...]]:
    return [columns_of(m) for m in masks]


def sets_to_masks(sets: Iterable[Iterable[int]]) -> list[int]:
    return [mask_of(s) for s in sets]
