"""Mutable construction and surgery machinery behind Diagram.

MapBuilder keeps the same arrays as Diagram but as lists, with dead
darts marked by label 0.  The primitives are:

* ``path`` / ``attach_face`` / ``attach_loop_face``: grow a diagram by
  cells whose face words are checked against the relator table;
* ``zip_pair``: identify two boundary-adjacent (more generally
  face-adjacent) edges with cancelling labels -- the folding move;
* ``contract_edge`` / ``delete_enclosed``: erasure support for
  projections and sphere-pinch discards;
* ``wedge``: hang another builder's component at a boundary vertex
  (used by ``sew``, which then zips the seam shut).

All circuit conventions match diagrams.py: the anticlockwise boundary
walk steps ``d -> rot_prev[opp(d)]``.
"""

from .diagrams import Diagram, single_vertex_diagram
from .errors import InvalidDiagramError, SurgeryError
from .presentations import Presentation
from .words import Word


class MapBuilder:
    def __init__(self, presentation: Presentation):
        self.presentation = presentation
        self.label: list[int] = []
        self.vertex_of: list[int] = []
        self.rot_next: list[int] = []
        self.rot_prev: list[int] = []
        self.next_vertex = 0
        self.base: int | None = None
        self.outer_dart: int | None = None

    # -- bookkeeping --------------------------------------------------------

    @staticmethod
    def from_diagram(diagram: Diagram) -> "MapBuilder":
        b = MapBuilder(diagram.presentation)
        b.label = list(diagram.label)
        b.vertex_of = list(diagram.vertex_of)
        b.rot_next = list(diagram.rot_next)
        b.rot_prev = list(diagram.rot_prev)
        b.next_vertex = diagram.n_vertices
        b.base = diagram.base
        b.outer_dart = diagram.outer_dart
        return b

    def alive(self, d: int) -> bool:
        return 0 <= d < len(self.label) and self.label[d] != 0

    def new_vertex(self) -> int:
        v = self.next_vertex
        self.next_vertex += 1
        return v

    def new_edge(self, u: int, v: int, letter: int) -> int:
        """Fresh edge u->v; rotations must be wired by the caller."""
        d = len(self.label)
        self.label += [letter, -letter]
        self.vertex_of += [u, v]
        self.rot_next += [d, d + 1]
        self.rot_prev += [d, d + 1]
        return d

    def insert_after(self, anchor: int, d: int):
        nxt = self.rot_next[anchor]
        self.rot_next[anchor] = d
        self.rot_prev[d] = anchor
        self.rot_next[d] = nxt
        self.rot_prev[nxt] = d
        self.vertex_of[d] = self.vertex_of[anchor]

    def insert_before(self, anchor: int, d: int):
        self.insert_after(self.rot_prev[anchor], d)

    def remove_from_rotation(self, d: int):
        p, n = self.rot_prev[d], self.rot_next[d]
        self.rot_next[p] = n
        self.rot_prev[n] = p
        self.rot_next[d] = d
        self.rot_prev[d] = d

    def kill_edge(self, d: int):
        """Remove both darts of d's edge from rotations and mark them dead."""
        for x in (d & ~1, (d & ~1) + 1):
            self.remove_from_rotation(x)
            self.label[x] = 0

    def rotation_cycle(self, d: int) -> list[int]:
        out = [d]
        e = self.rot_next[d]
        while e != d:
            out.append(e)
            e = self.rot_next[e]
        return out

    def circuit_next(self, d: int) -> int:
        return self.rot_prev[d ^ 1]

    def face_next(self, d: int) -> int:
        return self.rot_next[d ^ 1]

    def face_orbit(self, d: int) -> list[int]:
        out = [d]
        e = self.face_next(d)
        while e != d:
            out.append(e)
            e = self.face_next(e)
        return out

    def boundary_circuit_from(self, d: int) -> list[int]:
        out = [d]
        e = self.circuit_next(d)
        while e != d:
            out.append(e)
            e = self.circuit_next(e)
        return out

    def head(self, d: int) -> int:
        return self.vertex_of[d ^ 1]

    def word_of(self, darts: list[int]) -> Word:
        return Word(self.presentation.alphabet, tuple(self.label[d] for d in darts))

    def _check_face_word(self, letters: tuple[int, ...]):
        if letters not in self.presentation.relator_conjugates():
            text = Word(self.presentation.alphabet, letters).text()
            raise SurgeryError(f"face word {text!r} is not a relator conjugate")

    # -- growth -------------------------------------------------------------

    def start_path(self, word: Word, base_at_start: bool = True) -> list[int]:
        """Initialise with a bare path reading ``word``; returns its darts."""
        if self.label:
            raise SurgeryError("start_path on a non-empty builder")
        v = self.new_vertex()
        self.base = v
        if not word.letters:
            self.outer_dart = None
            return []
        darts = []
        for letter in word.letters:
            u = self.new_vertex()
            d = self.new_edge(v, u, letter)
            if darts:
                self.insert_after(darts[-1] ^ 1, d)
            darts.append(d)
            v = u
        if not base_at_start:
            self.base = v
        self.outer_dart = darts[0] ^ 1
        return darts

    def attach_face(self, arc: list[int], replacement: Word) -> list[int]:
        """Glue a cell along consecutive boundary darts ``arc``.

        The boundary stretch reading word(arc) is replaced by a fresh
        path reading ``replacement``; the new cell's word is
        replacement * word(arc)^-1 and must be a relator conjugate.
        Returns the new boundary darts.
        """
        if not arc or len(replacement) == 0:
            raise SurgeryError("attach_face needs a nonempty arc and replacement")
        for c, c2 in zip(arc, arc[1:]):
            if self.circuit_next(c) != c2:
                raise SurgeryError("arc darts are not consecutive on the boundary")
        face_letters = (tuple(replacement.letters)
                        + tuple(-self.label[d] for d in reversed(arc)))
        self._check_face_word(face_letters)
        v0 = self.vertex_of[arc[0]]
        vp = self.head(arc[-1])
        new_darts: list[int] = []
        prev_vertex = v0
        for j, letter in enumerate(replacement.letters):
            u = vp if j == len(replacement) - 1 else self.new_vertex()
            d = self.new_edge(prev_vertex, u, letter)
            if j > 0:
                # interior rotation cycle (opp(f_j-1), f_j)
                self.insert_after(new_darts[-1] ^ 1, d)
            new_darts.append(d)
            prev_vertex = u
        self.insert_after(arc[0], new_darts[0])
        self.insert_before(arc[-1] ^ 1, new_darts[-1] ^ 1)
        self.outer_dart = new_darts[0] ^ 1
        return new_darts

    def attach_loop_face(self, word: Word, at_circuit_dart: int | None = None) -> list[int]:
        """Glue a cell whose whole boundary is fresh, hanging at one vertex.

        ``at_circuit_dart`` is the boundary dart arriving at the wedge
        vertex; None means the builder is a bare vertex (lollipop seed).
        """
        if len(word) < 2:
            raise SurgeryError("loop faces need length >= 2")
        self._check_face_word(tuple(word.letters))
        if at_circuit_dart is None:
            if self.label:
                raise SurgeryError("need an attachment dart on a non-empty builder")
            v = self.base if self.base is not None else self.new_vertex()
            self.base = v
        else:
            v = self.head(at_circuit_dart)
        new_darts: list[int] = []
        prev_vertex = v
        n = len(word)
        for j, letter in enumerate(word.letters):
            u = v if j == n - 1 else self.new_vertex()
            d = self.new_edge(prev_vertex, u, letter)
            if j > 0:
                self.insert_after(new_darts[-1] ^ 1, d)
            new_darts.append(d)
            prev_vertex = u
        first, last = new_darts[0], new_darts[-1]
        if at_circuit_dart is None:
            # fresh vertex: rotation is exactly (opp(last), first)
            self.rot_next[last ^ 1] = first
            self.rot_prev[first] = last ^ 1
            self.rot_next[first] = last ^ 1
            self.rot_prev[last ^ 1] = first
            self.vertex_of[first] = v
            self.vertex_of[last ^ 1] = v
        else:
            self.insert_before(at_circuit_dart ^ 1, last ^ 1)
            self.insert_after(last ^ 1, first)
        self.outer_dart = first ^ 1
        return new_darts

    # -- identification -----------------------------------------------------

    def zip_pair(self, c1: int, c2: int):
        """Fold walk-consecutive darts c1, c2 with cancelling labels.

        ``c2`` must be the successor of ``c1`` along the face on their
        right (for boundary darts: the outer circuit).  edge(c1) is
        identified onto edge(c2) and tail(c1) merges into head(c2);
        the merged edge keeps edge(c2)'s darts.  When the two edges
        already share both endpoints, the subdiagram they jointly bound
        is discarded first (sphere-pinch handling).
        """
        if self.circuit_next(c1) != c2:
            raise SurgeryError("zip pair must be consecutive along a face corner")
        if self.label[c2] != -self.label[c1]:
            raise SurgeryError("zip pair labels must cancel")
        if c1 // 2 == c2 // 2:
            raise SurgeryError("cannot zip an edge with itself (spur)")
        a = self.head(c2)
        b = self.vertex_of[c1]
        if a == b:
            self._discard_enclosed(c1, c2)
            self.kill_edge(c1)
            return
        b_darts = [d for d in self.rotation_cycle(c1) if d != c1]
        # the turn vertex loses edge(c1)'s arriving dart
        self.remove_from_rotation(c1 ^ 1)
        if b_darts:
            # merged cycle: (..., L, Q .. b-chain .. P3, opp(c2), A0, ...);
            # the surviving edge's far dart keeps its old successor so the
            # face left of c2 is untouched, b's chain lands between the two
            # faces that met along the folded corner.
            q = self.rot_next[c1]
            p3 = self.rot_prev[c1]
            l_prev = self.rot_prev[c2 ^ 1]
            self.rot_next[l_prev] = q
            self.rot_prev[q] = l_prev
            self.rot_next[p3] = c2 ^ 1
            self.rot_prev[c2 ^ 1] = p3
            for d in b_darts:
                self.vertex_of[d] = a
        if self.base == b:
            self.base = a
        self.label[c1] = 0
        self.label[c1 ^ 1] = 0
        for x in (c1, c1 ^ 1):
            self.rot_next[x] = x
            self.rot_prev[x] = x

    def _discard_enclosed(self, c1: int, c2: int):
        """Delete everything strictly inside the closed curve edge(c1)+edge(c2)."""
        curve_edges = {c1 // 2, c2 // 2}
        inside = self._flood_avoiding(curve_edges, [c1, c2], forbid_outer=True)
        if inside is None:
            # the far sides reach the outer face, so the region between the
            # two edges is on the other side: the faces containing c1^1/c2^1
            inside = self._flood_avoiding(curve_edges, [c1 ^ 1, c2 ^ 1],
                                          forbid_outer=False)
        self._delete_darts(inside, curve_edges)

    def _flood_avoiding(self, curve_edges: set[int], start: list[int],
                        forbid_outer: bool) -> set[int] | None:
        outer_orbit = set(self.face_orbit(self.outer_dart)) if forbid_outer else set()
        seen: set[int] = set()
        stack = [d for d in start if self.alive(d)]
        while stack:
            d = stack.pop()
            if d in seen:
                continue
            for e in self.face_orbit(d):
                if forbid_outer and e in outer_orbit:
                    return None
                seen.add(e)
                if e // 2 not in curve_edges and (e ^ 1) not in seen:
                    stack.append(e ^ 1)
        return seen

    def _delete_darts(self, darts: set[int], keep_edges: set[int]):
        dead_edges = {d // 2 for d in darts
                      if d // 2 not in keep_edges and (d ^ 1) in darts}
        for e in dead_edges:
            self.kill_edge(2 * e)

    def contract_edge(self, d: int):
        """Contract a non-loop edge, merging its head into its tail."""
        u, v = self.vertex_of[d], self.head(d)
        if u == v:
            raise SurgeryError("cannot contract a loop edge")
        pu, nu = self.rot_prev[d], self.rot_next[d]
        pv, nv = self.rot_prev[d ^ 1], self.rot_next[d ^ 1]
        v_darts = [x for x in self.rotation_cycle(d ^ 1) if x != d ^ 1]
        if nu == d and nv == d ^ 1:
            pass  # bare edge: both endpoints become one isolated vertex
        elif nu == d:
            # u was 1-valent: keep v's cycle minus opp(d)
            self.remove_from_rotation(d ^ 1)
        elif nv == d ^ 1:
            self.remove_from_rotation(d)
        else:
            self.rot_next[pu] = nv
            self.rot_prev[nv] = pu
            self.rot_next[pv] = nu
            self.rot_prev[nu] = pv
            self.rot_next[d] = d
            self.rot_prev[d] = d
            self.rot_next[d ^ 1] = d ^ 1
            self.rot_prev[d ^ 1] = d ^ 1
        for x in v_darts:
            self.vertex_of[x] = u
        if self.base == v:
            self.base = u
        self.label[d] = 0
        self.label[d ^ 1] = 0

    def delete_loop_with_disc(self, d: int):
        """Delete a loop edge together with the disc it bounds."""
        if self.vertex_of[d] != self.head(d):
            raise SurgeryError("not a loop edge")
        inside = self._flood_avoiding({d // 2}, [d], forbid_outer=True)
        if inside is None:
            inside = self._flood_avoiding({d // 2}, [d ^ 1], forbid_outer=False)
        self._delete_darts(inside, set())
        self.kill_edge(d)

    # -- wedging and sewing ---------------------------------------------------

    def absorb(self, other: "MapBuilder") -> tuple[dict[int, int], dict[int, int]]:
        """Disjoint union; returns (dart map, vertex map) for the other builder."""
        dart_offset = len(self.label)
        vmap: dict[int, int] = {}
        for v in sorted({other.vertex_of[d] for d in range(len(other.label))
                         if other.alive(d)} | ({other.base} if other.base is not None else set())):
            vmap[v] = self.new_vertex()
        dmap: dict[int, int] = {}
        for d in range(len(other.label)):
            dmap[d] = d + dart_offset
        self.label += other.label
        self.vertex_of += [vmap.get(v, 0) for v in other.vertex_of]
        self.rot_next += [d + dart_offset for d in other.rot_next]
        self.rot_prev += [d + dart_offset for d in other.rot_prev]
        return dmap, vmap

    def wedge_in(self, other: "MapBuilder", my_entry: int, their_exit: int) -> dict[int, int]:
        """Identify head(my_entry) with head(their_exit) across builders.

        ``my_entry`` / ``their_exit`` are boundary darts arriving at the
        wedge vertices along their respective circuits.  The combined
        circuit runs: ..., my_entry, <other's circuit after their_exit
        around to their_exit>, <my old continuation>, ...
        Returns the dart map of the absorbed builder.
        """
        dmap, _ = self.absorb(other)
        exit_dart = dmap[their_exit]
        v_mine = self.head(my_entry)
        for d in self.rotation_cycle(exit_dart ^ 1):
            self.vertex_of[d] = v_mine
        # cut each cycle at its outer corner and cross-link:
        #   X -> opp(my_entry) becomes X -> opp(exit)
        #   Y -> opp(exit)     becomes Y -> opp(my_entry)
        x = self.rot_prev[my_entry ^ 1]
        y = self.rot_prev[exit_dart ^ 1]
        self.rot_next[x] = exit_dart ^ 1
        self.rot_prev[exit_dart ^ 1] = x
        self.rot_next[y] = my_entry ^ 1
        self.rot_prev[my_entry ^ 1] = y
        return dmap

    # -- freezing -------------------------------------------------------------

    def freeze(self) -> tuple[Diagram, dict[int, int]]:
        """Compact dead darts / vertex gaps; returns (diagram, old->new dart map)."""
        live = [d for d in range(len(self.label)) if self.alive(d)]
        if not live:
            dmap: dict[int, int] = {}
            return single_vertex_diagram(self.presentation), dmap
        old_vertices = sorted({self.vertex_of[d] for d in live})
        vmap = {v: i for i, v in enumerate(old_vertices)}
        live_edges = sorted({d // 2 for d in live})
        emap = {e: i for i, e in enumerate(live_edges)}
        dmap = {}
        for e_old, e_new in emap.items():
            dmap[2 * e_old] = 2 * e_new
            dmap[2 * e_old + 1] = 2 * e_new + 1
        n = 2 * len(live_edges)
        label = [0] * n
        vertex_of = [0] * n
        rot_next = [0] * n
        rot_prev = [0] * n
        for d_old, d_new in dmap.items():
            label[d_new] = self.label[d_old]
            vertex_of[d_new] = vmap[self.vertex_of[d_old]]
            rot_next[d_new] = dmap[self.rot_next[d_old]]
            rot_prev[d_new] = dmap[self.rot_prev[d_old]]
        if self.base is None or self.base not in vmap:
            raise InvalidDiagramError("builder base vanished during surgery")
        outer = self.outer_dart
        if outer is None or not self.alive(outer):
            raise InvalidDiagramError("builder lost its outer dart")
        return Diagram(self.presentation, len(old_vertices), tuple(label),
                       tuple(vertex_of), tuple(rot_next), tuple(rot_prev),
                       vmap[self.base], dmap[outer]), dmap
