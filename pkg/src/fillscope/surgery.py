"""Diagram surgeries: lollipops, folding, sewing, projection and collapses.

Every operation consumes a Diagram and returns a fresh one; the builder
layer does the pointer work.  Validity is preserved by construction and
re-checked in the test suite after every surgery.
"""

from dataclasses import dataclass

from .builder import MapBuilder
from .diagrams import Diagram, require_valid, single_vertex_diagram, validate
from .errors import (AmalgamStructureError, InvalidDiagramError,
                     PlanarityHazardError, SchemeError, SurgeryError)
from .presentations import Presentation, pk_relator_set, check_retraction
from .words import LetterMap, Word, free_reduce, map_word, reduce_letters


@dataclass(frozen=True)
class Scheme:
    """A product of conjugated relators freely equal to a target word."""

    presentation: Presentation
    conjugates: tuple[tuple[Word, Word], ...]   # (u_i, r_i)
    target: Word

    def __post_init__(self):
        table = self.presentation.relator_conjugates()
        product: list[int] = []
        for u, r in self.conjugates:
            if tuple(r.letters) not in table:
                raise SchemeError(f"{r.text()!r} is not a relator or inverse")
            product += list(u.inverse().letters) + list(r.letters) + list(u.letters)
        if reduce_letters(tuple(product)) != reduce_letters(self.target.letters):
            raise SchemeError("conjugate product is not freely equal to the target word")

    def product_word(self) -> Word:
        letters: list[int] = []
        for u, r in self.conjugates:
            letters += list(u.inverse().letters) + list(r.letters) + list(u.letters)
        return Word(self.presentation.alphabet, tuple(letters))


def lollipop(scheme: Scheme) -> Diagram:
    """The cut-open wedge diagram realizing a scheme.

    One stem-and-loop per conjugate, all hanging at the base vertex; the
    boundary word is exactly the scheme's product word.
    """
    pres = scheme.presentation
    b = MapBuilder(pres)
    base = b.new_vertex()
    b.base = base
    last_arrival: int | None = None
    for u, r in scheme.conjugates:
        if len(u) == 0:
            loop = b.attach_loop_face(r, at_circuit_dart=last_arrival)
            last_arrival = loop[-1]
            continue
        stem: list[int] = []
        v = base
        for letter in u.inverse().letters:
            w = b.new_vertex()
            d = b.new_edge(v, w, letter)
            if stem:
                b.insert_after(stem[-1] ^ 1, d)
            elif last_arrival is not None:
                b.insert_before(last_arrival ^ 1, d)
            stem.append(d)
            v = w
        if b.outer_dart is None:
            b.outer_dart = stem[0] ^ 1
        b.attach_loop_face(r, at_circuit_dart=stem[-1])
        last_arrival = stem[0] ^ 1
    if last_arrival is None:
        return single_vertex_diagram(pres)
    b.outer_dart = last_arrival ^ 1 if b.alive(last_arrival ^ 1) else last_arrival
    diagram, _ = b.freeze()
    return diagram


def _find_fold_pair(b: MapBuilder) -> tuple[int, int] | None:
    circuit = b.boundary_circuit_from(b.outer_dart ^ 1)
    best: tuple[int, int] | None = None
    n = len(circuit)
    for i in range(n):
        c1, c2 = circuit[i], circuit[(i + 1) % n]
        if c1 // 2 != c2 // 2 and b.label[c2] == -b.label[c1]:
            if best is None or min(c1, c2) < min(best):
                best = (c1, c2)
    return best


def _refresh_outer(b: MapBuilder, candidates: list[int]):
    for d in candidates:
        if b.alive(d):
            b.outer_dart = d
            return
    raise SurgeryError("no boundary dart survived the fold")


def fold(diagram: Diagram) -> Diagram:
    """Successively fold cancelling pairs of boundary edges.

    Sphere pinches (pairs jointly bounding a subdiagram) discard the
    enclosed subdiagram, mirroring the minimal-length argument.  The
    result has a boundary word that is freely reduced except at spurs,
    and is freely equal to the input's.
    """
    if diagram.outer_dart is None:
        return diagram
    b = MapBuilder.from_diagram(diagram)
    while True:
        pair = _find_fold_pair(b)
        if pair is None:
            break
        c1, c2 = pair
        circuit = b.boundary_circuit_from(c1)
        survivors = [d ^ 1 for d in circuit if d // 2 not in (c1 // 2, c2 // 2)]
        b.zip_pair(c1, c2)
        _refresh_outer(b, survivors + [c2 ^ 1, c2])
    out, _ = b.freeze()
    return out


def mirror(diagram: Diagram) -> Diagram:
    """Reverse the rotation system; the boundary word reverses and inverts."""
    return Diagram(diagram.presentation, diagram.n_vertices, diagram.label,
                   diagram.vertex_of, diagram.rot_prev, diagram.rot_next,
                   diagram.base, diagram.outer_dart)


def rebase(diagram: Diagram, vertex: int) -> Diagram:
    """Move the base to another outer-face vertex."""
    return Diagram(diagram.presentation, diagram.n_vertices, diagram.label,
                   diagram.vertex_of, diagram.rot_next, diagram.rot_prev,
                   vertex, diagram.outer_dart)


def _zip_compatible(b: MapBuilder, arc_a: list[int], arc_b: list[int]):
    if len(arc_a) != len(arc_b):
        raise SurgeryError("seam arcs have different lengths")
    p = len(arc_a)
    for j in range(p):
        if b.label[arc_b[j]] != -b.label[arc_a[p - 1 - j]]:
            raise SurgeryError("seam arcs do not read inverse words")


def sew_into_builder(b: MapBuilder, arc_a: list[int], other: Diagram,
                     arc_b: list[int]) -> dict[int, int]:
    """Sew ``other`` onto the builder along matching boundary arcs.

    ``arc_a`` and ``arc_b`` are boundary-circuit darts of each side;
    arc_b must read the inverse of arc_a back to front.  Returns the
    dart map for ``other``.  The caller must refresh ``b.outer_dart``.
    """
    for c, c2 in zip(arc_a, arc_a[1:]):
        if b.circuit_next(c) != c2:
            raise SurgeryError("arc_a darts are not consecutive on the boundary")
    ob = MapBuilder.from_diagram(other)
    for c, c2 in zip(arc_b, arc_b[1:]):
        if ob.circuit_next(c) != c2:
            raise SurgeryError("arc_b darts are not consecutive on the boundary")
    my_entry = b.rot_next[arc_a[0]] ^ 1   # circuit predecessor of the arc
    dmap = b.wedge_in(ob, my_entry, arc_b[-1])
    mapped_b = [dmap[d] for d in arc_b]
    _zip_compatible(b, arc_a, mapped_b)
    p = len(arc_a)
    for i in range(p):
        b.zip_pair(mapped_b[p - 1 - i], arc_a[i])
    return dmap


def sew(a: Diagram, arc_a: list[int], other: Diagram,
        arc_b: list[int]) -> tuple[Diagram, dict[int, int], dict[int, int]]:
    """Join two diagrams along boundary arcs reading inverse words.

    Returns the sewn diagram plus dart maps for each input (arc edges of
    ``other`` map onto the surviving arc edges of ``a``).
    """
    b = MapBuilder.from_diagram(a)
    arc_edges = {d // 2 for d in arc_a}
    outer_candidates = [d ^ 1 for d in b.boundary_circuit_from(arc_a[0])
                        if d // 2 not in arc_edges]
    dmap_other = sew_into_builder(b, arc_a, other, arc_b)
    if not outer_candidates:
        arc_b_edges = {d // 2 for d in arc_b}
        outer_candidates = [dmap_other[d] ^ 1 for d in
                            MapBuilder.from_diagram(other).boundary_circuit_from(arc_b[0])
                            if d // 2 not in arc_b_edges]
    if not outer_candidates:
        raise PlanarityHazardError("sewing both full boundaries would close a sphere")
    _refresh_outer(b, outer_candidates)
    out, dmap = b.freeze()
    map_a = {d: dmap[d] for d in range(a.n_darts) if d in dmap}
    map_other = {d: dmap[v] for d, v in dmap_other.items() if v in dmap}
    # seam edges of ``other`` survive as the corresponding edges of ``a``
    p = len(arc_a)
    for j in range(p):
        kept = arc_a[p - 1 - j]
        if kept in dmap:
            map_other[arc_b[j] ^ 1] = dmap[kept]
            map_other[arc_b[j]] = dmap[kept] ^ 1
    return out, map_a, map_other


def project(diagram: Diagram, theta: LetterMap) -> Diagram:
    """Push a diagram through a retraction letter map.

    Relabels edges, contracts erased ones (loops take their discs with
    them), collapses faces whose image word is freely reducible, then
    folds the boundary.  The output is a valid diagram over the target
    presentation for the freely reduced image of the boundary word.
    """
    source: Presentation = theta.source_presentation
    target: Presentation = theta.target_presentation
    if source is None or target is None:
        raise SurgeryError("letter map lacks source/target presentations")
    if source != diagram.presentation:
        raise SurgeryError("diagram is not over the letter map's source presentation")
    check_retraction(theta, source, target)
    if diagram.outer_dart is None:
        return single_vertex_diagram(target)
    original_circuit = diagram.boundary_circuit()
    b = MapBuilder.from_diagram(diagram)
    b.presentation = target
    erased: list[int] = []
    for e in range(len(b.label) // 2):
        d = 2 * e
        if not b.alive(d):
            continue
        img = theta.image_of(b.label[d])
        if img == 0:
            erased.append(e)
        else:
            b.label[d] = img
            b.label[d ^ 1] = -img
    outer_candidates = [d ^ 1 for d in original_circuit if (d // 2) not in set(erased)]
    for e in erased:
        d = 2 * e
        if not b.alive(d):
            continue
        if b.vertex_of[d] == b.head(d):
            b.delete_loop_with_disc(d)
        else:
            b.contract_edge(d)
    if not any(b.alive(d) for d in range(len(b.label))):
        return single_vertex_diagram(target)
    _refresh_outer(b, outer_candidates)
    _collapse_reducible_faces(b, outer_candidates)
    while True:
        pair = _find_fold_pair(b)
        if pair is None:
            break
        c1, c2 = pair
        circuit = b.boundary_circuit_from(c1)
        survivors = [d ^ 1 for d in circuit if d // 2 not in (c1 // 2, c2 // 2)]
        b.zip_pair(c1, c2)
        if not any(b.alive(d) for d in range(len(b.label))):
            return single_vertex_diagram(target)
        _refresh_outer(b, survivors + [c2 ^ 1, c2])
    out, _ = b.freeze()
    return out


def _collapse_reducible_faces(b: MapBuilder, outer_candidates: list[int]):
    table = b.presentation.relator_conjugates()
    progress = True
    while progress:
        progress = False
        outer = set(b.face_orbit(b.outer_dart))
        seen: set[int] = set()
        for d in range(len(b.label)):
            if not b.alive(d) or d in seen or d in outer:
                continue
            orbit = b.face_orbit(d)
            seen.update(orbit)
            word = tuple(b.label[x] for x in orbit)
            if word in table:
                continue
            n = len(orbit)
            pair = None
            for i in range(n):
                x, x2 = orbit[i], orbit[(i + 1) % n]
                if x // 2 != x2 // 2 and b.label[x2] == -b.label[x]:
                    pair = (x, x2)
                    break
            if pair is None:
                raise SurgeryError(
                    "face image is neither a relator conjugate nor reducible")
            x, x2 = pair
            b.zip_pair(x2 ^ 1, x ^ 1)
            if not b.alive(b.outer_dart):
                _refresh_outer(b, outer_candidates)
            progress = True
            break


def collapse_islands(diagram: Diagram) -> tuple[Diagram, list[dict]]:
    """Cut out the Pk-islands of an Skm diagram and glue up the t-cycles.

    Returns the resulting Qm diagram (same boundary word) and one trace
    entry per island: its attaching word and the gluing tree size.
    """
    pres = diagram.presentation
    if pres.family != "Skm":
        raise SurgeryError("collapse_islands expects an Skm diagram")
    k, m = pres.params
    from .presentations import build_presentation
    qm = build_presentation("Qm", m=m)
    pk_table = pk_relator_set(pres)
    t_letter = pres.alphabet.index("t") + 1
    qm_letters = {pres.alphabet.index(sym) + 1 for sym in qm.alphabet.symbols}

    outer = frozenset(diagram.outer_orbit())
    faces = [f for f in diagram.faces() if f[0] not in outer]
    p_faces = [f for f in faces
               if tuple(diagram.label[d] for d in f) in pk_table]
    dart_to_pface: dict[int, int] = {}
    for idx, f in enumerate(p_faces):
        for d in f:
            dart_to_pface[d] = idx

    # union-find over P-faces sharing an edge
    parent = list(range(len(p_faces)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for d, i in dart_to_pface.items():
        j = dart_to_pface.get(d ^ 1)
        if j is not None:
            parent[find(i)] = find(j)

    components: dict[int, list[int]] = {}
    for idx in range(len(p_faces)):
        components.setdefault(find(idx), []).append(idx)

    b = MapBuilder.from_diagram(diagram)
    traces: list[dict] = []
    original_circuit = diagram.boundary_circuit()

    for comp in components.values():
        comp_darts = {d for idx in comp for d in p_faces[idx]}
        comp_edges = {d // 2 for d in comp_darts}
        interior = {e for e in comp_edges
                    if 2 * e in comp_darts and 2 * e + 1 in comp_darts}
        rim = comp_edges - interior
        vertices = {diagram.vertex_of[d] for d in comp_darts}
        vertices |= {diagram.vertex_of[d ^ 1] for d in comp_darts}
        euler = len(vertices) - len(comp_edges) + len(comp)
        if euler != 1:
            raise AmalgamStructureError("island component is not simply connected")
        for e in rim:
            if abs(diagram.label[2 * e]) != t_letter:
                raise AmalgamStructureError(
                    "island attaching edge is not a t-edge")
        for e in interior:
            b.kill_edge(2 * e)

    # bare Pk-letter edges outside any island violate the amalgam structure
    for e in range(len(b.label) // 2):
        d = 2 * e
        if b.alive(d) and abs(b.label[d]) not in qm_letters:
            raise AmalgamStructureError(
                f"edge labelled {pres.alphabet.spell(b.label[d])} "
                "survives outside every island")

    outer_candidates = [d ^ 1 for d in original_circuit if b.alive(d ^ 1)]
    _refresh_outer(b, outer_candidates)
    qm_table = set()
    for r in qm.relators:
        letters = tuple(
            (1 if x > 0 else -1) * (pres.alphabet.index(qm.alphabet.symbols[abs(x) - 1]) + 1)
            for x in r.letters)
        from .words import cyclic_conjugates as _cc
        qm_table |= set(_cc(Word(pres.alphabet, letters)))

    # zip every hole (face orbit that is neither outer nor a Qm relator)
    while True:
        outer_orbit = set(b.face_orbit(b.outer_dart))
        hole = None
        seen: set[int] = set()
        for d in range(len(b.label)):
            if not b.alive(d) or d in seen or d in outer_orbit:
                continue
            orbit = b.face_orbit(d)
            seen.update(orbit)
            word = tuple(b.label[x] for x in orbit)
            if word in qm_table:
                continue
            hole = orbit
            break
        if hole is None:
            break
        word = tuple(b.label[x] for x in hole)
        if any(abs(x) != t_letter for x in word) or reduce_letters(word):
            if reduce_letters(word):
                raise AmalgamStructureError(
                    "island attaching cycle does not freely reduce to empty")
        if len(traces) < len(components):
            traces.append({"attaching_length": len(hole),
                           "tree_edges": len(hole) // 2})
        n = len(hole)
        pair = None
        for i in range(n):
            x, x2 = hole[i], hole[(i + 1) % n]
            if x // 2 != x2 // 2 and b.label[x2] == -b.label[x]:
                pair = (x, x2)
                break
        if pair is None:
            raise AmalgamStructureError("attaching cycle has no cancelling pair")
        x, x2 = pair
        b.zip_pair(x2 ^ 1, x ^ 1)
        if not b.alive(b.outer_dart):
            _refresh_outer(b, outer_candidates)

    # translate letters into the Qm alphabet and freeze
    translate = {pres.alphabet.index(sym) + 1: qm.alphabet.index(sym) + 1
                 for sym in qm.alphabet.symbols}
    b.presentation = qm
    for d in range(len(b.label)):
        if b.alive(d):
            x = b.label[d]
            b.label[d] = (1 if x > 0 else -1) * translate[abs(x)]
    out, _ = b.freeze()
    return out, traces


def diamond_move(diagram: Diagram, vertex: int, d1: int, d2: int) -> Diagram:
    """Re-glue two same-labelled edges leaving ``vertex`` (Fig-9 style move).

    The valley vertex splits, the two far endpoints merge, and the move
    is an involution: applying it at the merged vertex with the pivoted
    darts restores the original diagram.
    """
    b = MapBuilder.from_diagram(diagram)
    if not (b.alive(d1) and b.alive(d2)) or d1 == d2:
        raise SurgeryError("darts not eligible for a diamond move")
    if b.vertex_of[d1] != vertex or b.vertex_of[d2] != vertex:
        raise SurgeryError("darts must leave the named vertex")
    if b.label[d1] != b.label[d2]:
        raise SurgeryError("diamond move needs equal labels (a reducible turn)")
    x1, x2 = b.head(d1), b.head(d2)
    if x1 == x2 or vertex in (x1, x2):
        raise SurgeryError("darts not eligible for a diamond move")
    cycle = b.rotation_cycle(d1)
    if d2 not in cycle:
        raise SurgeryError("darts not eligible for a diamond move")
    i2 = cycle.index(d2)
    side_a = cycle[1:i2]            # strictly between d1 and d2
    side_b = cycle[i2 + 1:]         # strictly between d2 and d1
    # split the valley vertex
    va = b.new_vertex()
    vb = b.new_vertex()
    for d in [d1] + side_a:
        b.vertex_of[d] = va
    for d in [d2] + side_b:
        b.vertex_of[d] = vb
    def relink(seq: list[int]):
        for p, q in zip(seq, seq[1:] + seq[:1]):
            b.rot_next[p] = q
            b.rot_prev[q] = p
    relink([d1] + side_a)
    relink([d2] + side_b)
    # merge the heads: (opp(d1), x1-rest..., opp(d2), x2-rest...)
    x1_cycle = b.rotation_cycle(d1 ^ 1)
    x2_cycle = b.rotation_cycle(d2 ^ 1)
    merged = x1_cycle + x2_cycle
    y = b.vertex_of[d1 ^ 1]
    for d in merged:
        b.vertex_of[d] = y
    relink(merged)
    if b.base == vertex or b.base == x2:
        b.base = y if b.base == x2 else va
    if not b.alive(b.outer_dart):
        raise SurgeryError("diamond move at the outer dart")
    out, _ = b.freeze()
    report = validate(out)
    if not report.ok:
        raise SurgeryError(f"diamond move broke the diagram: {report}")
    return out


def excise_and_glue(diagram: Diagram, circuit: list[int],
                    replacement: Diagram) -> Diagram:
    """Replace the compact region bounded by ``circuit`` with ``replacement``.

    ``circuit`` lists darts of a closed walk with the doomed region on
    its left; the replacement's boundary word must spell the circuit
    word.  A non-simple circuit demands a topological-disc replacement;
    a 1-dimensional replacement (no cells) is only legal when the
    region is already empty, otherwise the identification would pinch
    off the enclosed subdiagram.
    """
    b = MapBuilder.from_diagram(diagram)
    n = len(circuit)
    if n == 0:
        raise SurgeryError("empty circuit")
    for i in range(n):
        if b.head(circuit[i]) != b.vertex_of[circuit[(i + 1) % n]]:
            raise SurgeryError("circuit darts do not form a closed walk")
    circuit_word = tuple(b.label[d] for d in circuit)
    replacement_word = tuple(replacement.label[d]
                             for d in replacement.boundary_circuit())
    rotations = {replacement_word[i:] + replacement_word[:i] for i in range(n)} or {()}
    if circuit_word not in rotations:
        raise SurgeryError("replacement boundary word does not match the circuit")
    vertices = [b.vertex_of[d] for d in circuit]
    simple = len(set(vertices)) == len(vertices)
    if not simple and not _is_topological_disc(replacement):
        raise PlanarityHazardError(
            "gluing a singular replacement along a non-simple circuit; "
            "use a topological-disc replacement")
    curve_edges = {d // 2 for d in circuit}
    inside = b._flood_avoiding(curve_edges, list(circuit), forbid_outer=False)
    enclosed_edges = {d // 2 for d in inside
                      if d // 2 not in curve_edges and (d ^ 1) in inside}
    if b.outer_dart in inside:
        raise SurgeryError("circuit region is on the outer side; reverse the circuit")
    if replacement.area() == 0:
        if enclosed_edges:
            raise PlanarityHazardError(
                "the two edges bound a subdiagram; collapse it first "
                "(fold discards such pinches)")
    for e in enclosed_edges:
        b.kill_edge(2 * e)
    # the hole walk (region on the right) is the reversed-opposite circuit
    hole = [d ^ 1 for d in reversed(circuit)]
    # rotate the replacement's boundary to align with the circuit word
    rep_circuit = list(replacement.boundary_circuit())
    offset = next(i for i in range(n)
                  if circuit_word == replacement_word[i:] + replacement_word[:i])
    rep_arc = rep_circuit[offset:] + rep_circuit[:offset]
    outer_candidates = [b.outer_dart] + [d ^ 1 for d in
                                         b.boundary_circuit_from(b.outer_dart ^ 1)]
    sew_into_builder(b, hole, replacement, rep_arc)
    _refresh_outer(b, outer_candidates)
    out, _ = b.freeze()
    return out


def _is_topological_disc(diagram: Diagram) -> bool:
    if diagram.area() == 0 or diagram.outer_dart is None:
        return False
    circuit = diagram.boundary_circuit()
    vertices = [diagram.vertex_of[d] for d in circuit]
    return len(set(vertices)) == len(vertices)
