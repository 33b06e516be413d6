"""Planar combinatorial maps representing (possibly singular) van Kampen diagrams.

Encoding: edge ``e`` owns darts ``2e`` and ``2e+1``; ``opp(d) = d ^ 1``.
A dart is a directed edge based at ``vertex_of[d]`` carrying a signed
letter; the opposite dart carries the inverse letter.  ``rot_next`` is
the counterclockwise rotation around each vertex.

Face-tracing convention: faces are the orbits of
``next_face(d) = rot_next[opp(d)]``.  Inner faces are traversed
counterclockwise (face on the left of each dart) and their words must be
cyclic conjugates of relators or inverse relators.  The outer face is
the orbit of the designated ``outer_dart``; the anticlockwise boundary
circuit from the base follows ``rot_prev[opp(d)]`` and its darts are the
opposites of the outer orbit.

Singular diagrams are first class: cut vertices and bare arcs are fine,
but every bounded region must be a relator cell (in particular no bigon
reading ``x x^-1``), and the Euler characteristic V - E + F must be 2.
"""

from dataclasses import dataclass, field

from .errors import InvalidDiagramError, WordSyntaxError
from .presentations import Presentation
from .words import Word


def opp(d: int) -> int:
    return d ^ 1


@dataclass
class ValidationIssue:
    code: str
    message: str
    darts: tuple[int, ...] = ()

    def __str__(self):
        where = f" (darts {', '.join(map(str, self.darts))})" if self.darts else ""
        return f"[{self.code}] {self.message}{where}"


@dataclass
class ValidationReport:
    issues: list[ValidationIssue] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.issues

    def add(self, code: str, message: str, darts: tuple[int, ...] = ()):
        self.issues.append(ValidationIssue(code, message, darts))

    def __str__(self):
        if self.ok:
            return "valid"
        return "\n".join(str(i) for i in self.issues)


class Diagram:
    """Immutable diagram; build with MapBuilder and freeze.

    Vertices are 0..n_vertices-1 and darts 0..2*n_edges-1 (compact).
    """

    def __init__(self, presentation: Presentation, n_vertices: int,
                 label: tuple[int, ...], vertex_of: tuple[int, ...],
                 rot_next: tuple[int, ...], rot_prev: tuple[int, ...],
                 base: int, outer_dart: int | None):
        self.presentation = presentation
        self.n_vertices = n_vertices
        self.label = label
        self.vertex_of = vertex_of
        self.rot_next = rot_next
        self.rot_prev = rot_prev
        self.base = base
        self.outer_dart = outer_dart
        self._faces: list[tuple[int, ...]] | None = None

    # -- structure ---------------------------------------------------------

    @property
    def n_darts(self) -> int:
        return len(self.label)

    @property
    def n_edges(self) -> int:
        return len(self.label) // 2

    def next_face(self, d: int) -> int:
        return self.rot_next[d ^ 1]

    def face_orbit(self, d: int) -> tuple[int, ...]:
        out = [d]
        e = self.next_face(d)
        while e != d:
            out.append(e)
            e = self.next_face(e)
        return tuple(out)

    def faces(self) -> list[tuple[int, ...]]:
        """All face orbits, outer included, keyed by minimal dart."""
        if self._faces is None:
            seen = [False] * self.n_darts
            faces = []
            for d in range(self.n_darts):
                if seen[d]:
                    continue
                orbit = self.face_orbit(d)
                for e in orbit:
                    seen[e] = True
                faces.append(orbit)
            self._faces = faces
        return self._faces

    def outer_orbit(self) -> tuple[int, ...]:
        if self.outer_dart is None:
            return ()
        return self.face_orbit(self.outer_dart)

    def inner_faces(self) -> list[tuple[int, ...]]:
        outer = frozenset(self.outer_orbit())
        return [f for f in self.faces() if not outer or f[0] not in outer]

    def area(self) -> int:
        """Number of 2-cells."""
        return len(self.inner_faces())

    def face_word(self, orbit: tuple[int, ...]) -> Word:
        return Word(self.presentation.alphabet, tuple(self.label[d] for d in orbit))

    # -- boundary ----------------------------------------------------------

    def boundary_circuit(self) -> tuple[int, ...]:
        """Darts of the anticlockwise boundary walk starting at the base."""
        if self.outer_dart is None:
            return ()
        circuit_darts = [d ^ 1 for d in self.outer_orbit()]
        at_base = [d for d in circuit_darts if self.vertex_of[d] == self.base]
        if not at_base:
            raise InvalidDiagramError("base vertex is not on the outer face")
        start = min(at_base)
        out = [start]
        d = self.rot_prev[start ^ 1]
        while d != start:
            out.append(d)
            d = self.rot_prev[d ^ 1]
        return tuple(out)

    def boundary_word(self) -> Word:
        return Word(self.presentation.alphabet,
                    tuple(self.label[d] for d in self.boundary_circuit()))

    # -- measures ----------------------------------------------------------

    def vertex_adjacency(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.n_vertices)]
        for e in range(self.n_edges):
            u, v = self.vertex_of[2 * e], self.vertex_of[2 * e + 1]
            adj[u].append(v)
            adj[v].append(u)
        return adj

    def distances_from(self, source: int) -> list[int]:
        adj = self.vertex_adjacency()
        dist = [-1] * self.n_vertices
        dist[source] = 0
        frontier = [source]
        while frontier:
            nxt = []
            for u in frontier:
                for v in adj[u]:
                    if dist[v] < 0:
                        dist[v] = dist[u] + 1
                        nxt.append(v)
            frontier = nxt
        return dist

    def idiam(self) -> int:
        """Base-pointed intrinsic diameter of the 1-skeleton."""
        dist = self.distances_from(self.base)
        if any(d < 0 for d in dist):
            raise InvalidDiagramError("diagram is not connected")
        return max(dist) if dist else 0

    def idiam_all_pairs(self) -> int:
        """Secondary statistic: max over all vertex pairs."""
        best = 0
        for v in range(self.n_vertices):
            best = max(best, max(self.distances_from(v)))
        return best

    # -- misc --------------------------------------------------------------

    def dart_text(self, d: int) -> str:
        return self.presentation.alphabet.spell(self.label[d])

    def __repr__(self):
        return (f"<Diagram {self.presentation.header()} V={self.n_vertices} "
                f"E={self.n_edges} area={self.area()}>")


def validate(diagram: Diagram) -> ValidationReport:
    """Check every structural invariant; violations carry dart identifiers."""
    report = ValidationReport()
    nd = diagram.n_darts
    if nd == 0:
        if diagram.n_vertices != 1:
            report.add("structure", "empty diagram must have exactly one vertex")
        return report

    for d in range(nd):
        if diagram.label[d] != -diagram.label[d ^ 1]:
            report.add("labels", "opposite darts must carry inverse labels", (d, d ^ 1))
            return report

    # rotation must be a permutation whose cycles stay at one vertex and
    # cover each vertex exactly once
    seen = [False] * nd
    cycles_at: dict[int, int] = {}
    for d in range(nd):
        if seen[d]:
            continue
        cycle = [d]
        seen[d] = True
        e = diagram.rot_next[d]
        while e != d:
            if seen[e]:
                report.add("rotation", "rotation orbits do not partition the darts", (d, e))
                return report
            seen[e] = True
            cycle.append(e)
            e = diagram.rot_next[e]
        vertices = {diagram.vertex_of[x] for x in cycle}
        if len(vertices) != 1:
            report.add("rotation", "rotation cycle spans several vertices", tuple(cycle))
            return report
        v = vertices.pop()
        cycles_at[v] = cycles_at.get(v, 0) + 1
    for v, count in cycles_at.items():
        if count > 1:
            report.add("rotation", f"vertex {v} has {count} rotation cycles")
    if len(cycles_at) != diagram.n_vertices:
        report.add("structure", "isolated vertices in a diagram with edges")
    for d in range(nd):
        if diagram.rot_prev[diagram.rot_next[d]] != d:
            report.add("rotation", "rot_prev is not the inverse of rot_next", (d,))
            return report

    # connectivity over darts
    reached = [False] * nd
    stack = [0]
    reached[0] = True
    while stack:
        d = stack.pop()
        for e in (d ^ 1, diagram.rot_next[d]):
            if not reached[e]:
                reached[e] = True
                stack.append(e)
    if not all(reached):
        report.add("connected", "underlying graph is not connected")
        return report

    faces = diagram.faces()
    euler = diagram.n_vertices - diagram.n_edges + len(faces)
    if euler != 2:
        report.add("euler", f"V - E + F = {euler}, expected 2 (non-planar rotation)")
    if diagram.outer_dart is None:
        report.add("outer", "diagram with edges has no outer dart")
        return report

    outer = frozenset(diagram.outer_orbit())
    if diagram.base not in {diagram.vertex_of[d] for d in outer}:
        report.add("base", f"base vertex {diagram.base} is not on the outer face")

    table = diagram.presentation.relator_conjugates()
    for orbit in faces:
        if orbit[0] in outer:
            continue
        word = tuple(diagram.label[d] for d in orbit)
        if len(word) == 2 and word[0] == -word[1]:
            report.add("face", "bigon reading x x^-1 is not a cell", orbit)
        elif word not in table:
            text = Word(diagram.presentation.alphabet, word).text()
            report.add("face", f"face word {text!r} is not a relator conjugate", orbit)
    return report


def require_valid(diagram: Diagram):
    report = validate(diagram)
    if not report.ok:
        raise InvalidDiagramError(str(report))


def single_vertex_diagram(presentation: Presentation) -> Diagram:
    return Diagram(presentation, 1, (), (), (), (), 0, None)


# -- interchange format ------------------------------------------------------

FORMAT_HEADER = "# fillscope-diagram v1"


def to_text(diagram: Diagram, certificate: dict[str, str] | None = None) -> str:
    """Serialize; ids are already compact and sorted, so output is canonical."""
    lines = [FORMAT_HEADER, f"presentation: {diagram.presentation.header()}"]
    lines.append("gens: " + " ".join(diagram.presentation.alphabet.symbols))
    lines += ["rel: " + r.text() for r in diagram.presentation.relators]
    for v in range(diagram.n_vertices):
        lines.append(f"vertex {v}")
    alphabet = diagram.presentation.alphabet
    for e in range(diagram.n_edges):
        d = 2 * e
        lines.append(f"edge {e + 1} {diagram.vertex_of[d]} {diagram.vertex_of[d ^ 1]} "
                     f"{alphabet.spell(diagram.label[d])}")
    by_vertex: dict[int, list[int]] = {}
    for d in range(diagram.n_darts):
        by_vertex.setdefault(diagram.vertex_of[d], [])
    for v in sorted(by_vertex):
        darts = []
        cycle_start = min(d for d in range(diagram.n_darts) if diagram.vertex_of[d] == v)
        d = cycle_start
        while True:
            signed = (d // 2 + 1) * (1 if d % 2 == 0 else -1)
            darts.append(str(signed))
            d = diagram.rot_next[d]
            if d == cycle_start:
                break
        lines.append(f"rot {v}: " + " ".join(darts))
    lines.append(f"base {diagram.base}")
    if diagram.outer_dart is not None:
        signed = (diagram.outer_dart // 2 + 1) * (1 if diagram.outer_dart % 2 == 0 else -1)
        lines.append(f"outer {signed}")
    for key, value in (certificate or {}).items():
        lines.append(f"cert: {key} {value}")
    return "\n".join(lines) + "\n"


def _signed_to_dart(signed: int) -> int:
    e = abs(signed) - 1
    return 2 * e + (0 if signed > 0 else 1)


def from_text(text: str) -> tuple[Diagram, dict[str, str]]:
    """Parse the interchange format; returns the diagram and its cert block."""
    presentation_lines = []
    vertices: set[int] = set()
    edges: dict[int, tuple[int, int, str]] = {}
    rots: dict[int, list[int]] = {}
    base: int | None = None
    outer: int | None = None
    cert: dict[str, str] = {}
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("presentation:"):
            continue
        if line.startswith(("gens:", "rel:")):
            presentation_lines.append(line)
        elif line.startswith("vertex "):
            vertices.add(int(line.split()[1]))
        elif line.startswith("edge "):
            parts = line.split()
            edges[int(parts[1])] = (int(parts[2]), int(parts[3]), parts[4])
        elif line.startswith("rot "):
            head, _, tail = line.partition(":")
            rots[int(head.split()[1])] = [int(tok) for tok in tail.split()]
        elif line.startswith("base "):
            base = int(line.split()[1])
        elif line.startswith("outer "):
            outer = int(line.split()[1])
        elif line.startswith("cert:"):
            parts = line[len("cert:"):].strip().split(None, 1)
            cert[parts[0]] = parts[1] if len(parts) > 1 else ""
        else:
            raise WordSyntaxError(f"unrecognised interchange line: {raw!r}")
    presentation = Presentation.parse("\n".join(presentation_lines))
    if base is None:
        raise WordSyntaxError("missing base line")
    if not edges:
        return single_vertex_diagram(presentation), cert
    n_edges = len(edges)
    if sorted(edges) != list(range(1, n_edges + 1)):
        raise WordSyntaxError("edge ids must be 1..E")
    if sorted(vertices) != list(range(len(vertices))):
        raise WordSyntaxError("vertex ids must be 0..V-1")
    label = [0] * (2 * n_edges)
    vertex_of = [0] * (2 * n_edges)
    alphabet = presentation.alphabet
    for eid, (u, v, token) in edges.items():
        letter = Word.parse(alphabet, token).letters[0]
        d = 2 * (eid - 1)
        label[d], label[d ^ 1] = letter, -letter
        vertex_of[d], vertex_of[d ^ 1] = u, v
    rot_next = [0] * (2 * n_edges)
    rot_prev = [0] * (2 * n_edges)
    listed = set()
    for v, signed_list in rots.items():
        darts = [_signed_to_dart(s) for s in signed_list]
        for d in darts:
            if vertex_of[d] != v:
                raise WordSyntaxError(f"rot line for vertex {v} lists dart of vertex "
                                      f"{vertex_of[d]}")
            listed.add(d)
        for a, b in zip(darts, darts[1:] + darts[:1]):
            rot_next[a] = b
            rot_prev[b] = a
    if len(listed) != 2 * n_edges:
        raise WordSyntaxError("rot lines do not cover every dart")
    if outer is None:
        raise WordSyntaxError("missing outer line")
    return Diagram(presentation, len(vertices), tuple(label), tuple(vertex_of),
                   tuple(rot_next), tuple(rot_prev), base, _signed_to_dart(outer)), cert
