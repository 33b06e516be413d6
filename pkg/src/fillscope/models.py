"""Normal-form models for the subgroups with a tractable word problem.

Variants: free abelian Z^k, free groups, the semidirect products
Theta_k = Z^k x| F_2 (plain and hatted) and B_m = F_m x| F_2, and the
free product Z * Z^(k-1).  Each model evaluates words over its alphabet
to a canonical payload, multiplies and inverts elements, answers
is-power-of queries, and supports exact Cayley-graph distance via
bidirectional breadth-first search plus full ball enumeration.

Semidirect convention: an element is (z, w) with group law
(z1, w1)(z2, w2) = (z1 + rho(w1) z2, w1 w2) where rho is the action
homomorphism.  The defining relation f^-1 s_i f = s_i s_{i+1} forces
rho(f^-1) to be the matrix with ones on the diagonal and subdiagonal,
so rho(f) is its exact integer inverse (alternating signs).
"""

import os

from . import matrices as mx
from .errors import AlphabetMismatchError, ParameterError, ResourceBudgetError
from .words import Alphabet, Word, reduce_letters, invert

DEFAULT_DISTANCE_CAP = 12


class GroupElement:
    """A normal form in some model; equality and hashing are by payload."""

    __slots__ = ("model", "payload")

    def __init__(self, model: "GroupModel", payload):
        self.model = model
        self.payload = payload

    def __eq__(self, other):
        return (isinstance(other, GroupElement) and self.model is other.model
                and self.payload == other.payload)

    def __hash__(self):
        return hash(self.payload)

    def __repr__(self):
        return f"<{self.model.describe()} element {self.payload!r}>"

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return self.model.multiply(self, other)

    def inverse(self) -> "GroupElement":
        return self.model.invert(self)

    def is_identity(self) -> bool:
        return self == self.model.identity()


class GroupModel:
    """Shared machinery; subclasses define the payload algebra."""

    alphabet: Alphabet

    def describe(self) -> str:
        return type(self).__name__

    def identity(self) -> GroupElement:
        raise NotImplementedError

    def generator(self, letter: int) -> GroupElement:
        """Element of a single signed letter."""
        raise NotImplementedError

    def multiply(self, a: GroupElement, b: GroupElement) -> GroupElement:
        raise NotImplementedError

    def invert(self, a: GroupElement) -> GroupElement:
        raise NotImplementedError

    def power_exponent(self, e: GroupElement, symbol: str) -> int | None:
        """n with e = symbol^n, or None."""
        raise NotImplementedError

    def eval(self, w: Word) -> GroupElement:
        if w.alphabet != self.alphabet:
            raise AlphabetMismatchError(
                f"word over {w.alphabet!r} evaluated in model over {self.alphabet!r}")
        out = self.identity()
        for x in w.letters:
            out = self.multiply(out, self.generator(x))
        return out

    def signed_letters(self) -> list[int]:
        n = len(self.alphabet)
        return [i for i in range(1, n + 1)] + [-i for i in range(1, n + 1)]

    def neighbours(self, e: GroupElement) -> list[GroupElement]:
        return [self.multiply(e, self.generator(x)) for x in self.signed_letters()]


def is_power_of(model: GroupModel, w: Word, symbol: str) -> int | None:
    """Exponent e with w = symbol^e in the model, or None if not a power."""
    model.alphabet.index(symbol)
    return model.power_exponent(model.eval(w), symbol)


def cayley_distance(model: GroupModel, w: Word,
                    cap: int = DEFAULT_DISTANCE_CAP) -> int | None:
    """Exact word-metric distance d(1, w) by meet-in-the-middle search.

    Returns None when the distance exceeds ``cap``.
    """
    if cap < 0:
        raise ParameterError("cap must be >= 0")
    return element_distance(model, model.eval(w), cap)


def element_distance(model: GroupModel, target: GroupElement,
                     cap: int = DEFAULT_DISTANCE_CAP) -> int | None:
    ident = model.identity()
    if target == ident:
        return 0
    if cap == 0:
        return None
    dist_f = {ident: 0}
    dist_b = {target: 0}
    frontier_f, frontier_b = [ident], [target]
    radius_f = radius_b = 0
    while radius_f + radius_b < cap and frontier_f and frontier_b:
        if len(frontier_f) <= len(frontier_b):
            frontier, dist, other, radius_f = frontier_f, dist_f, dist_b, radius_f + 1
            level = radius_f
        else:
            frontier, dist, other, radius_b = frontier_b, dist_b, dist_f, radius_b + 1
            level = radius_b
        new_frontier = []
        best = None
        for e in frontier:
            for nb in model.neighbours(e):
                if nb in dist:
                    continue
                dist[nb] = level
                new_frontier.append(nb)
                if nb in other:
                    total = level + other[nb]
                    if best is None or total < best:
                        best = total
        if best is not None and best <= cap:
            return best
        if frontier is frontier_f:
            frontier_f = new_frontier
        else:
            frontier_b = new_frontier
    return None


def _ball_budget_elements() -> int:
    budget_mb = int(os.environ.get("FILLSCOPE_BUDGET_MB", "2048"))
    return max(1, budget_mb * 1024 * 1024 // 256)


def cayley_ball(model: GroupModel, r: int,
                max_elements: int | None = None) -> dict[GroupElement, int]:
    """All elements at distance <= r with exact distances.

    Memory is policed by an element-count budget derived from
    FILLSCOPE_BUDGET_MB (default 2 GiB at ~256 bytes per element).
    """
    if r < 0:
        raise ParameterError("radius must be >= 0")
    if max_elements is None:
        max_elements = _ball_budget_elements()
    ball = {model.identity(): 0}
    frontier = [model.identity()]
    for radius in range(1, r + 1):
        new_frontier = []
        for e in frontier:
            for nb in model.neighbours(e):
                if nb not in ball:
                    ball[nb] = radius
                    new_frontier.append(nb)
                    if len(ball) > max_elements:
                        raise ResourceBudgetError(
                            f"ball exceeded {max_elements} elements at radius {radius}",
                            reached=radius - 1)
        frontier = new_frontier
    return ball


class FreeAbelianModel(GroupModel):
    """Z^k on symbols s1..sk (or a caller-supplied alphabet)."""

    def __init__(self, k: int, alphabet: Alphabet | None = None):
        if k < 1:
            raise ParameterError("FreeAbelian needs k >= 1")
        self.k = k
        self.alphabet = alphabet or Alphabet([f"s{i}" for i in range(1, k + 1)])
        if len(self.alphabet) != k:
            raise AlphabetMismatchError("alphabet size must equal k")

    def describe(self) -> str:
        return f"Z^{self.k}"

    def identity(self):
        return GroupElement(self, (0,) * self.k)

    def generator(self, letter: int):
        z = [0] * self.k
        z[abs(letter) - 1] = 1 if letter > 0 else -1
        return GroupElement(self, tuple(z))

    def multiply(self, a, b):
        return GroupElement(self, tuple(x + y for x, y in zip(a.payload, b.payload)))

    def invert(self, a):
        return GroupElement(self, tuple(-x for x in a.payload))

    def power_exponent(self, e, symbol):
        i = self.alphabet.index(symbol)
        if any(x != 0 for j, x in enumerate(e.payload) if j != i):
            return None
        return e.payload[i]


class FreeModel(GroupModel):
    """Free group of given rank; payload is the reduced letter tuple."""

    def __init__(self, rank: int, alphabet: Alphabet | None = None):
        if rank < 1:
            raise ParameterError("Free needs rank >= 1")
        self.rank = rank
        self.alphabet = alphabet or Alphabet([f"x{i}" for i in range(1, rank + 1)])
        if len(self.alphabet) != rank:
            raise AlphabetMismatchError("alphabet size must equal rank")

    def describe(self) -> str:
        return f"F_{self.rank}"

    def identity(self):
        return GroupElement(self, ())

    def generator(self, letter: int):
        return GroupElement(self, (letter,))

    def multiply(self, a, b):
        return GroupElement(self, reduce_letters(a.payload + b.payload))

    def invert(self, a):
        return GroupElement(self, invert(a.payload))

    def power_exponent(self, e, symbol):
        target = self.alphabet.index(symbol) + 1
        if not e.payload:
            return 0
        first = e.payload[0]
        if abs(first) != target or any(x != first for x in e.payload):
            return None
        return len(e.payload) if first > 0 else -len(e.payload)


class ThetaModel(GroupModel):
    """Theta_k = Z^k x| F_2; payload (z, w) with w reduced over the stable letters.

    ``hatted`` swaps in the sh1..shk, fh, gh naming.
    """

    def __init__(self, k: int, hatted: bool = False):
        if k < 2:
            raise ParameterError("Theta needs k >= 2")
        self.k = k
        self.hatted = hatted
        s, f, g = ("sh", "fh", "gh") if hatted else ("s", "f", "g")
        self.alphabet = Alphabet([f"{s}{i}" for i in range(1, k + 1)] + [f, g])
        self._f = k + 1          # signed letter value of the first stable letter
        self._g = k + 2
        mf = mx.subdiagonal_unipotent(k)
        mf_inv = mx.subdiagonal_unipotent_inverse(k)
        mg = tuple(tuple(1 if i == j or (i == j + 1 and i <= k - 2) else 0
                         for j in range(k)) for i in range(k))
        mg_inv = tuple(tuple(((-1) ** (i - j) if i >= j else 0) if max(i, j) <= k - 2
                             else (1 if i == j else 0)
                             for j in range(k)) for i in range(k))
        # rho(f) = (action of f^-1)^-1; the relations pin the action of f^-1 as mf.
        self._rho = {self._f: mf_inv, -self._f: mf, self._g: mg_inv, -self._g: mg}

    def describe(self) -> str:
        return ("HatTheta" if self.hatted else "Theta") + f"({self.k})"

    def identity(self):
        return GroupElement(self, ((0,) * self.k, ()))

    def generator(self, letter: int):
        if abs(letter) <= self.k:
            z = [0] * self.k
            z[abs(letter) - 1] = 1 if letter > 0 else -1
            return GroupElement(self, (tuple(z), ()))
        return GroupElement(self, ((0,) * self.k, (letter,)))

    def _rho_of(self, w: tuple[int, ...]) -> mx.Matrix:
        out = mx.identity(self.k)
        for x in w:
            out = mx.mat_mul(out, self._rho[x])
        return out

    def multiply(self, a, b):
        z1, w1 = a.payload
        z2, w2 = b.payload
        z = tuple(p + q for p, q in zip(z1, mx.mat_vec(self._rho_of(w1), z2)))
        return GroupElement(self, (z, reduce_letters(w1 + w2)))

    def invert(self, a):
        z, w = a.payload
        wi = invert(w)
        zi = tuple(-x for x in mx.mat_vec(self._rho_of(wi), z))
        return GroupElement(self, (zi, wi))

    def power_exponent(self, e, symbol):
        z, w = e.payload
        idx = self.alphabet.index(symbol) + 1
        if idx > self.k:
            if any(z):
                return None
            if not w:
                return 0
            if any(x != w[0] for x in w) or abs(w[0]) != idx:
                return None
            return len(w) if w[0] > 0 else -len(w)
        if w:
            return None
        if any(x != 0 for j, x in enumerate(z) if j != idx - 1):
            return None
        return z[idx - 1]


class BmModel(GroupModel):
    """B_m = F_m x| F_2 on a1..am, sigma, t; t acts trivially."""

    def __init__(self, m: int):
        if m < 2:
            raise ParameterError("Bm needs m >= 2")
        self.m = m
        self.alphabet = Alphabet([f"a{i}" for i in range(1, m + 1)] + ["sigma", "t"])
        self._sigma = m + 1
        self._t = m + 2
        # action of sigma^-1: a_i -> a_i a_{i+1} (i < m), a_m fixed
        self._psi = {i: (i, i + 1) if i < m else (i,) for i in range(1, m + 1)}
        self._psi_inv: dict[int, tuple[int, ...]] = {m: (m,)}
        for i in range(m - 1, 0, -1):
            self._psi_inv[i] = reduce_letters((i,) + invert(self._psi_inv[i + 1]))

    def describe(self) -> str:
        return f"B({self.m})"

    def identity(self):
        return GroupElement(self, ((), ()))

    def generator(self, letter: int):
        if abs(letter) <= self.m:
            return GroupElement(self, ((letter,), ()))
        return GroupElement(self, ((), (letter,)))

    def _apply_one(self, table: dict[int, tuple[int, ...]], u: tuple[int, ...]) -> tuple[int, ...]:
        out: list[int] = []
        for x in u:
            image = table[x] if x > 0 else invert(table[-x])
            for y in image:
                if out and out[-1] == -y:
                    out.pop()
                else:
                    out.append(y)
        return tuple(out)

    def _act(self, w: tuple[int, ...], u: tuple[int, ...]) -> tuple[int, ...]:
        # rho(w)(u); rho(sigma) is the inverse automorphism, rho(sigma^-1) the
        # substitution a_i -> a_i a_{i+1}, t acts trivially.
        for x in reversed(w):
            if abs(x) == self._t:
                continue
            table = self._psi_inv if x == self._sigma else self._psi
            u = self._apply_one(table, u)
        return u

    def multiply(self, a, b):
        u1, w1 = a.payload
        u2, w2 = b.payload
        u = reduce_letters(u1 + self._act(w1, u2))
        return GroupElement(self, (u, reduce_letters(w1 + w2)))

    def invert(self, a):
        u, w = a.payload
        wi = invert(w)
        return GroupElement(self, (self._act(wi, invert(u)), wi))

    def power_exponent(self, e, symbol):
        u, w = e.payload
        idx = self.alphabet.index(symbol) + 1
        if idx > self.m:
            if u:
                return None
            seq = w
        else:
            if w:
                return None
            seq = u
        if not seq:
            return 0
        if abs(seq[0]) != idx or any(x != seq[0] for x in seq):
            return None
        return len(seq) if seq[0] > 0 else -len(seq)


class FreeProductZZkModel(GroupModel):
    """Z * Z^(k-1) on b, s1..s_{k-1}; payload is the alternating normal form."""

    def __init__(self, k: int):
        if k < 2:
            raise ParameterError("FreeProductZZk needs k >= 2")
        self.k = k
        self.alphabet = Alphabet(["b"] + [f"s{i}" for i in range(1, k)])

    def describe(self) -> str:
        return f"Z*Z^{self.k - 1}"

    def identity(self):
        return GroupElement(self, ())

    def generator(self, letter: int):
        sign = 1 if letter > 0 else -1
        if abs(letter) == 1:
            return GroupElement(self, (("b", sign),))
        z = [0] * (self.k - 1)
        z[abs(letter) - 2] = sign
        return GroupElement(self, (("v", tuple(z)),))

    @staticmethod
    def _normalise(parts: list) -> tuple:
        out: list = []
        for part in parts:
            if part[0] == "b" and part[1] == 0:
                continue
            if part[0] == "v" and not any(part[1]):
                continue
            if out and out[-1][0] == part[0]:
                if part[0] == "b":
                    merged = ("b", out[-1][1] + part[1])
                else:
                    merged = ("v", tuple(x + y for x, y in zip(out[-1][1], part[1])))
                out.pop()
                if (merged[0] == "b" and merged[1] != 0) or (
                        merged[0] == "v" and any(merged[1])):
                    out.append(merged)
            else:
                out.append(part)
        return tuple(out)

    def multiply(self, a, b):
        merged = list(a.payload) + list(b.payload)
        # repeated passes are cheap: cancellation cascades are short
        prev = None
        current = tuple(merged)
        while current != prev:
            prev = current
            current = self._normalise(list(current))
        return GroupElement(self, current)

    def invert(self, a):
        out = []
        for kind, value in reversed(a.payload):
            if kind == "b":
                out.append(("b", -value))
            else:
                out.append(("v", tuple(-x for x in value)))
        return GroupElement(self, tuple(out))

    def power_exponent(self, e, symbol):
        idx = self.alphabet.index(symbol)
        if not e.payload:
            return 0
        if len(e.payload) != 1:
            return None
        kind, value = e.payload[0]
        if idx == 0:
            return value if kind == "b" else None
        if kind != "v":
            return None
        if any(x != 0 for j, x in enumerate(value) if j != idx - 1):
            return None
        return value[idx - 1]


def model_for_presentation(pres) -> GroupModel | None:
    """The quotient model matching a presentation family, where one exists."""
    if pres.family == "Ok":
        return ThetaModel(pres.params[0])
    if pres.family == "HatOk":
        return ThetaModel(pres.params[0], hatted=True)
    if pres.family == "Bm":
        return BmModel(pres.params[0])
    return None
