"""graph6 codec and the plain edge-list format."""

from __future__ import annotations

from typing import IO, Iterable, Iterator, List, Tuple, Union

from pautkit.graphs import ColoredDigraph, Graph, Structure

HEADER = b">>graph6<<"
_SHORT_MAX = 62
_MEDIUM_MAX = 258047


class Graph6Error(ValueError):
    """Input is not a valid graph6 line."""

    pass


class Graph6HeaderError(Graph6Error):
    """Missing or malformed size prefix, or a header for another format."""

    pass


class Graph6ByteError(Graph6Error):
    """A byte outside the printable range 63..126."""

    pass


class Graph6TruncationError(Graph6Error):
    """Fewer adjacency bytes than the vertex count requires."""

    pass


class EdgeListError(ValueError):
    """Malformed edge-list text."""

    pass


def _as_bytes(data: Union[bytes, str]) -> bytes:
    if isinstance(data, str):
        try:
            return data.encode("ascii")
        except UnicodeEncodeError as exc:
            raise Graph6ByteError(f"Non-ASCII character at offset {exc.start}") from exc
    return data


def _encode_size(n: int) -> bytes:
    if n <= _SHORT_MAX:
        return bytes([n + 63])
    if n <= _MEDIUM_MAX:
        return bytes([126] + [((n >> shift) & 63) + 63 for shift in (12, 6, 0)])
    raise ValueError(f"graph6 encoding supports at most {_MEDIUM_MAX} vertices, got {n}")


def format_graph6(g: Graph, header: bool = False) -> bytes:
    """Encode g as one graph6 line, without the trailing newline."""
    if not isinstance(g, Graph):
        raise ValueError("graph6 encodes undirected graphs only; use the edge-list format")
    bits: List[int] = []
    for v in range(1, g.n):
        for u in range(v):
            bits.append(g.adj[u] >> v & 1)
    while len(bits) % 6:
        bits.append(0)
    body = bytearray()
    for i in range(0, len(bits), 6):
        value = 0
        for b in bits[i : i + 6]:
            value = (value << 1) | b
        body.append(value + 63)
    prefix = HEADER if header else b""
    return prefix + _encode_size(g.n) + bytes(body)


def parse_graph6(data: Union[bytes, str]) -> Graph:
    """Decode one graph6 line. A '>>graph6<<' header and trailing newline are accepted."""
    raw = _as_bytes(data).rstrip(b"\r\n")
    if raw.startswith(HEADER):
        raw = raw[len(HEADER) :]
    if not raw:
        raise Graph6HeaderError("Empty graph6 line")
    if raw[:1] in (b":", b";", b"&") or raw.startswith(b">>"):
        raise Graph6HeaderError(f"Not a graph6 line (starts with {raw[:1]!r})")

    for pos, byte in enumerate(raw):
        if not 63 <= byte <= 126:
            raise Graph6ByteError(f"Byte {byte} at offset {pos} is outside 63..126")

    n, offset = _decode_size(raw)
    need_bits = n * (n - 1) // 2
    need_bytes = (need_bits + 5) // 6
    body = raw[offset:]
    if len(body) < need_bytes:
        raise Graph6TruncationError(
            f"Graph on {n} vertices needs {need_bytes} adjacency bytes, got {len(body)}"
        )
    if len(body) > need_bytes:
        raise Graph6Error(f"{len(body) - need_bytes} trailing byte(s) after the adjacency data")

    bits: List[int] = []
    for byte in body:
        value = byte - 63
        bits.extend((value >> shift) & 1 for shift in range(5, -1, -1))
    if any(bits[need_bits:]):
        raise Graph6Error("Nonzero padding bits")

    rows = [0] * n
    k = 0
    for v in range(1, n):
        for u in range(v):
            if bits[k]:
                rows[u] |= 1 << v
                rows[v] |= 1 << u
            k += 1
    return Graph(n, tuple(rows))


def _decode_size(raw: bytes) -> Tuple[int, int]:
    if raw[0] != 126:
        return raw[0] - 63, 1
    if len(raw) >= 2 and raw[1] == 126:
        raise Graph6HeaderError(f"Graphs with more than {_MEDIUM_MAX} vertices are not supported")
    if len(raw) < 4:
        raise Graph6HeaderError("Truncated size prefix")
    n = 0
    for byte in raw[1:4]:
        n = (n << 6) | (byte - 63)
    return n, 4


def read_graph6_lines(stream: Iterable[Union[bytes, str]]) -> Iterator[Tuple[int, bytes, Graph]]:
    """Yield (seq, line, graph) for each non-blank line; seq counts from 0."""
    seq = 0
    for line in stream:
        raw = _as_bytes(line).strip()
        if not raw:
            continue
        if raw.startswith(HEADER):
            raw = raw[len(HEADER) :]
            if not raw:
                continue
        yield seq, raw, parse_graph6(raw)
        seq += 1


def write_graph6_lines(graphs: Iterable[Graph], out: IO[bytes]) -> int:
    count = 0
    for g in graphs:
        out.write(format_graph6(g) + b"\n")
        count += 1
    return count


# --- edge list ------------------------------------------------------------


def format_edgelist(g: Structure) -> str:
    """'n l' header then 'c u v' lines, all 1-based.

    A Graph is written with one color and each edge once; loading it as a
    graph restores the symmetric closure.
    """
    if isinstance(g, Graph):
        lines = [f"{g.n} 1"] + [f"1 {u + 1} {v + 1}" for u, v in g.edges]
    else:
        lines = [f"{g.n} {g.num_colors}"]
        for c, edges in enumerate(g.colors):
            lines.extend(f"{c + 1} {u + 1} {v + 1}" for u, v in sorted(edges))
    return "\n".join(lines) + "\n"


def parse_edgelist(text: str, directed: bool = False) -> Structure:
    """Read the edge-list format.

    With ``directed`` false the input must have one color and no loops, and
    a Graph is returned with every edge made symmetric. Otherwise a
    ColoredDigraph with exactly the listed arcs is returned. Blank lines and
    lines starting with '#' are skipped.
    """
    rows = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        try:
            rows.append((lineno, [int(tok) for tok in stripped.split()]))
        except ValueError as exc:
            raise EdgeListError(f"Line {lineno}: expected integers, got {stripped!r}") from exc

    if not rows:
        raise EdgeListError("Missing 'n l' header line")
    lineno, header = rows[0]
    if len(header) != 2 or header[0] < 0 or header[1] < 0:
        raise EdgeListError(f"Line {lineno}: header must be 'n l' with n, l >= 0")
    n, num_colors = header

    colors: List[List[Tuple[int, int]]] = [[] for _ in range(num_colors)]
    for lineno, fields in rows[1:]:
        if len(fields) != 3:
            raise EdgeListError(f"Line {lineno}: expected 'c u v'")
        c, u, v = fields
        if not 1 <= c <= num_colors:
            raise EdgeListError(f"Line {lineno}: color {c} is outside 1..{num_colors}")
        if not (1 <= u <= n and 1 <= v <= n):
            raise EdgeListError(f"Line {lineno}: vertex outside 1..{n}")
        colors[c - 1].append((u - 1, v - 1))

    if directed:
        try:
            return ColoredDigraph.from_colors(n, colors)
        except ValueError as exc:
            raise EdgeListError(str(exc)) from exc

    if num_colors != 1:
        raise EdgeListError(f"Undirected graphs need exactly one color, got {num_colors}")
    try:
        return Graph.from_edges(n, colors[0])
    except ValueError as exc:
        raise EdgeListError(str(exc)) from exc
