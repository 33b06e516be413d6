"""Builders for the presentation family and its retraction letter maps.

Families (parameters in parentheses):

* ``Ok(k)``     Z^k x| F_2 on s1..sk with stable letters f, g.
* ``HatOk(k)``  hatted copy on sh1..shk, fh, gh.
* ``J``         asymmetric double HNN of Z: <b,t,s,sh>.
* ``Pk(k)``     the amalgam Ok *_Z J *_Z HatOk (s, sh of J identified
                with sk, shk).
* ``HatPk(k)``  the subpresentation of Pk on b, t, s1..sk, sh1..shk.
* ``Bm(m)``     F_m x| F_2 on a1..am with stable letters sigma, t.
* ``Qm(m)``     double HNN of Bm with stable letters tau, T.
* ``Um(m)``     retract of Qm obtained by killing t and tau.
* ``Skm(k,m)``  amalgam of Pk and Qm along <t> (m > k > 1).

Retractions by name: ``psi``/``psi_hat`` (Pk onto Ok / HatOk), ``phi_t``
(Qm onto <t>), ``kill_t_tau`` (Qm onto Um) and ``kill_T_t_tau`` (Qm onto
the abelianised sigma-retract).  Each is checked at build time: every
source relator must map to a word that freely reduces to empty or to a
cyclic conjugate of a target relator.
"""

from dataclasses import dataclass, field
from functools import lru_cache

from .errors import ParameterError, RetractionError, WordSyntaxError
from .words import Alphabet, LetterMap, Word, cyclic_conjugates, free_reduce, map_word

FAMILIES = ("Ok", "HatOk", "J", "Pk", "HatPk", "Bm", "Qm", "Um", "Skm", "Custom")


@dataclass(frozen=True)
class Presentation:
    """Alphabet plus relator list, tagged with its family and parameters."""

    alphabet: Alphabet
    relators: tuple[Word, ...]
    family: str = "Custom"
    params: tuple[int, ...] = ()

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ParameterError(f"unknown family tag {self.family!r}")
        for r in self.relators:
            if r.alphabet != self.alphabet:
                raise WordSyntaxError("relator over a different alphabet")
            if len(r) == 0:
                raise WordSyntaxError("relators must be nonempty")

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, Presentation)
                and self.alphabet == other.alphabet
                and tuple(r.letters for r in self.relators)
                == tuple(r.letters for r in other.relators))

    def __hash__(self) -> int:
        return hash((self.alphabet, tuple(r.letters for r in self.relators)))

    def word(self, text: str) -> Word:
        return Word.parse(self.alphabet, text)

    def relator_conjugates(self) -> frozenset[tuple[int, ...]]:
        """All cyclic rotations of all relators and their inverses."""
        return _relator_conjugates(self)

    def text(self) -> str:
        lines = ["gens: " + " ".join(self.alphabet.symbols)]
        lines += ["rel: " + r.text() for r in self.relators]
        return "\n".join(lines) + "\n"

    @staticmethod
    def parse(text: str) -> "Presentation":
        gens: list[str] | None = None
        rels: list[str] = []
        for raw in text.splitlines():
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if line.startswith("gens:"):
                gens = line[len("gens:"):].split()
            elif line.startswith("rel:"):
                rels.append(line[len("rel:"):].strip())
            else:
                raise WordSyntaxError(f"unrecognised presentation line: {raw!r}")
        if gens is None:
            raise WordSyntaxError("presentation text has no gens: line")
        alphabet = Alphabet(gens)
        return Presentation(alphabet, tuple(Word.parse(alphabet, r) for r in rels))

    def header(self) -> str:
        """One-line reference used in diagram interchange files."""
        parts = [f"family={self.family}"]
        names = {"Ok": ("k",), "HatOk": ("k",), "Pk": ("k",), "HatPk": ("k",),
                 "Bm": ("m",), "Qm": ("m",), "Um": ("m",), "Skm": ("k", "m")}
        for name, value in zip(names.get(self.family, ()), self.params):
            parts.append(f"{name}={value}")
        return " ".join(parts)


@lru_cache(maxsize=256)
def _relator_conjugates(pres: Presentation) -> frozenset[tuple[int, ...]]:
    out: set[tuple[int, ...]] = set()
    for r in pres.relators:
        out |= cyclic_conjugates(r)
    return frozenset(out)


def _commutator(alphabet: Alphabet, x: str, y: str) -> Word:
    """[x, y] = x^-1 y^-1 x y."""
    return Word.parse(alphabet, f"{x}^-1 {y}^-1 {x} {y}")


def _require(cond: bool, message: str):
    if not cond:
        raise ParameterError(message)


def _ok_relators(alphabet: Alphabet, k: int, s: str, f: str, g: str) -> list[Word]:
    """The Ok relations over a given naming of s1..sk, f, g."""
    w = lambda text: Word.parse(alphabet, text)
    rels = [w(f"{f}^-1 {s}{k} {f} {s}{k}^-1")]
    rels += [w(f"{f}^-1 {s}{i} {f} {s}{i + 1}^-1 {s}{i}^-1") for i in range(1, k)]
    rels += [w(f"{g}^-1 {s}{k} {g} {s}{k}^-1"), w(f"{g}^-1 {s}{k - 1} {g} {s}{k - 1}^-1")]
    rels += [w(f"{g}^-1 {s}{i} {g} {s}{i + 1}^-1 {s}{i}^-1") for i in range(1, k - 1)]
    rels += [_commutator(alphabet, f"{s}{i}", f"{s}{j}")
             for i in range(1, k + 1) for j in range(i + 1, k + 1)]
    return rels


def _bm_relators(alphabet: Alphabet, m: int, sig: str = "sigma", t: str = "t") -> list[Word]:
    w = lambda text: Word.parse(alphabet, text)
    rels = [w(f"{sig}^-1 a{m} {sig} a{m}^-1")]
    rels += [w(f"{sig}^-1 a{i} {sig} a{i + 1}^-1 a{i}^-1") for i in range(1, m)]
    rels += [_commutator(alphabet, t, f"a{j}") for j in range(1, m + 1)]
    return rels


def _qm_extra_relators(alphabet: Alphabet, m: int) -> list[Word]:
    w = lambda text: Word.parse(alphabet, text)
    rels = [_commutator(alphabet, "t", "T"), _commutator(alphabet, "tau", "T")]
    rels.append(w(f"tau^-1 t^-1 a{m}^-1 tau a{m} t"))  # [tau, a_m t]
    rels += [_commutator(alphabet, "tau", f"a{i}") for i in range(1, m)]
    return rels


def _j_style_relators(alphabet: Alphabet, sk: str, shk: str) -> list[Word]:
    """t^-1 b sk = b^3, sk^-1 b t = b^3 and shk^-1 b shk = b^3."""
    w = lambda text: Word.parse(alphabet, text)
    b3 = "b^-1 b^-1 b^-1"
    return [w(f"t^-1 b {sk} {b3}"), w(f"{sk}^-1 b t {b3}"), w(f"{shk}^-1 b {shk} {b3}")]


def build_presentation(family: str, k: int | None = None, m: int | None = None) -> Presentation:
    """Exact relator lists, with generator order as printed in the source."""
    if family == "Ok":
        _require(k is not None and k >= 2, "Ok needs k >= 2")
        alphabet = Alphabet([f"s{i}" for i in range(1, k + 1)] + ["f", "g"])
        return Presentation(alphabet, tuple(_ok_relators(alphabet, k, "s", "f", "g")),
                            "Ok", (k,))
    if family == "HatOk":
        _require(k is not None and k >= 2, "HatOk needs k >= 2")
        alphabet = Alphabet([f"sh{i}" for i in range(1, k + 1)] + ["fh", "gh"])
        return Presentation(alphabet, tuple(_ok_relators(alphabet, k, "sh", "fh", "gh")),
                            "HatOk", (k,))
    if family == "J":
        alphabet = Alphabet(["b", "t", "s", "sh"])
        return Presentation(alphabet, tuple(_j_style_relators(alphabet, "s", "sh")), "J", ())
    if family == "Pk":
        _require(k is not None and k >= 2, "Pk needs k >= 2")
        alphabet = Alphabet(["b", "t"]
                            + [f"s{i}" for i in range(1, k + 1)] + ["f", "g"]
                            + [f"sh{i}" for i in range(1, k + 1)] + ["fh", "gh"])
        rels = (_ok_relators(alphabet, k, "s", "f", "g")
                + _ok_relators(alphabet, k, "sh", "fh", "gh")
                + _j_style_relators(alphabet, f"s{k}", f"sh{k}"))
        return Presentation(alphabet, tuple(rels), "Pk", (k,))
    if family == "HatPk":
        _require(k is not None and k >= 2, "HatPk needs k >= 2")
        alphabet = Alphabet(["b", "t"]
                            + [f"s{i}" for i in range(1, k + 1)]
                            + [f"sh{i}" for i in range(1, k + 1)])
        rels = _j_style_relators(alphabet, f"s{k}", f"sh{k}")
        rels += [_commutator(alphabet, f"s{i}", f"s{j}")
                 for i in range(1, k + 1) for j in range(i + 1, k + 1)]
        rels += [_commutator(alphabet, f"sh{i}", f"sh{j}")
                 for i in range(1, k + 1) for j in range(i + 1, k + 1)]
        return Presentation(alphabet, tuple(rels), "HatPk", (k,))
    if family == "Bm":
        _require(m is not None and m >= 2, "Bm needs m >= 2")
        alphabet = Alphabet([f"a{i}" for i in range(1, m + 1)] + ["sigma", "t"])
        return Presentation(alphabet, tuple(_bm_relators(alphabet, m)), "Bm", (m,))
    if family == "Qm":
        _require(m is not None and m >= 2, "Qm needs m >= 2")
        alphabet = Alphabet([f"a{i}" for i in range(1, m + 1)] + ["sigma", "t", "tau", "T"])
        rels = _bm_relators(alphabet, m) + _qm_extra_relators(alphabet, m)
        return Presentation(alphabet, tuple(rels), "Qm", (m,))
    if family == "Um":
        _require(m is not None and m >= 2, "Um needs m >= 2")
        alphabet = Alphabet([f"a{i}" for i in range(1, m + 1)] + ["sigma", "T"])
        w = lambda text: Word.parse(alphabet, text)
        rels = [w(f"sigma^-1 a{m} sigma a{m}^-1")]
        rels += [w(f"sigma^-1 a{i} sigma a{i + 1}^-1 a{i}^-1") for i in range(1, m)]
        return Presentation(alphabet, tuple(rels), "Um", (m,))
    if family == "Skm":
        _require(k is not None and k >= 2, "Skm needs k >= 2")
        _require(m is not None and m > k, "Skm needs m > k")
        alphabet = Alphabet(["b", "t"]
                            + [f"s{i}" for i in range(1, k + 1)] + ["f", "g"]
                            + [f"sh{i}" for i in range(1, k + 1)] + ["fh", "gh"]
                            + [f"a{i}" for i in range(1, m + 1)] + ["sigma", "tau", "T"])
        rels = (_ok_relators(alphabet, k, "s", "f", "g")
                + _ok_relators(alphabet, k, "sh", "fh", "gh")
                + _j_style_relators(alphabet, f"s{k}", f"sh{k}")
                + _bm_relators(alphabet, m)
                + _qm_extra_relators(alphabet, m))
        return Presentation(alphabet, tuple(rels), "Skm", (k, m))
    raise ParameterError(f"unknown presentation family {family!r}")


def pk_relator_set(skm: Presentation) -> frozenset[tuple[int, ...]]:
    """Conjugate classes of the Pk relators inside an Skm presentation."""
    k, m = skm.params
    pk = build_presentation("Pk", k=k)
    out: set[tuple[int, ...]] = set()
    translate = {name: skm.alphabet.index(name) + 1 for name in pk.alphabet.symbols}
    for r in pk.relators:
        letters = tuple((1 if x > 0 else -1) * translate[pk.alphabet.symbols[abs(x) - 1]]
                        for x in r.letters)
        out |= cyclic_conjugates(Word(skm.alphabet, letters))
    return frozenset(out)


def check_retraction(theta: LetterMap, source: Presentation, target: Presentation):
    """Relator condition: each relator image reduces to empty or a target relator."""
    table = target.relator_conjugates()
    for r in source.relators:
        image = free_reduce(map_word(r, theta))
        if image.letters and image.letters not in table:
            raise RetractionError(
                f"image of relator {r.text()!r} is {image.text()!r}, "
                "neither trivial nor a cyclic conjugate of a target relator")


def retraction(name: str, k: int | None = None, m: int | None = None) -> LetterMap:
    """A named retraction, checked against its source and target presentations."""
    if name == "psi":
        source = build_presentation("Pk", k=k)
        target = build_presentation("Ok", k=k)
        images: dict[str, str | None] = {"b": None, "t": f"s{k}", "f": "f", "g": "g",
                                         "fh": None, "gh": None}
        images |= {f"s{i}": f"s{i}" for i in range(1, k + 1)}
        images |= {f"sh{i}": None for i in range(1, k + 1)}
    elif name == "psi_hat":
        source = build_presentation("Pk", k=k)
        target = build_presentation("HatOk", k=k)
        images = {"b": None, "t": None, "f": None, "g": None, "fh": "fh", "gh": "gh"}
        images |= {f"s{i}": None for i in range(1, k + 1)}
        images |= {f"sh{i}": f"sh{i}" for i in range(1, k + 1)}
    elif name == "phi_t":
        source = build_presentation("Qm", m=m)
        target = Presentation(Alphabet(["t"]), (), "Custom", ())
        images = {sym: None for sym in source.alphabet.symbols}
        images["t"] = "t"
    elif name == "kill_t_tau":
        source = build_presentation("Qm", m=m)
        target = build_presentation("Um", m=m)
        images = {"sigma": "sigma", "t": None, "tau": None, "T": "T"}
        images |= {f"a{i}": f"a{i}" for i in range(1, m + 1)}
    elif name == "kill_T_t_tau":
        source = build_presentation("Qm", m=m)
        alphabet = Alphabet([f"a{i}" for i in range(1, m + 1)] + ["sigma"])
        w = lambda text: Word.parse(alphabet, text)
        rels = [_commutator(alphabet, f"a{i}", f"a{j}")
                for i in range(1, m + 1) for j in range(i + 1, m + 1)]
        rels += [w(f"sigma^-1 a{m} sigma a{m}^-1")]
        rels += [w(f"sigma^-1 a{i} sigma a{i + 1}^-1 a{i}^-1") for i in range(1, m)]
        target = Presentation(alphabet, tuple(rels), "Custom", ())
        images = {"sigma": "sigma", "t": None, "tau": None, "T": None}
        images |= {f"a{i}": f"a{i}" for i in range(1, m + 1)}
    else:
        raise RetractionError(f"unknown retraction {name!r}")
    theta = LetterMap.from_dict(source.alphabet, target.alphabet, images,
                                source_presentation=source,
                                target_presentation=target, name=name)
    check_retraction(theta, source, target)
    return theta


def identity_retraction(pres: Presentation) -> LetterMap:
    theta = LetterMap.identity(pres.alphabet)
    return LetterMap(theta.source, theta.target, theta.images,
                     source_presentation=pres, target_presentation=pres,
                     name="identity")
