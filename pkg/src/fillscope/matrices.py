"""Integer matrix helpers for the semidirect actions and distortion bounds.

Everything is exact: matrices are tuples of tuple[int] rows, vectors are
tuples of ints.  The two closed forms implemented here are the powers of

* the unipotent matrix with ones on the diagonal and subdiagonal
  (entry of the n-th power at (i, j) is C(n, i-j)), and
* the all-ones lower triangle (entry of the n-th power at (i, j) is
  C(n+i-j-1, n-1) for i >= j, identity at n = 0).
"""

from math import comb

Matrix = tuple[tuple[int, ...], ...]
Vector = tuple[int, ...]


def binomial(a: int, b: int) -> int:
    """C(a, b) with the convention that it vanishes for b < 0 or a < b."""
    if b < 0 or a < 0 or a < b:
        return 0
    return comb(a, b)


def identity(k: int) -> Matrix:
    return tuple(tuple(1 if i == j else 0 for j in range(k)) for i in range(k))


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    k = len(a)
    bt = tuple(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a)


def mat_vec(a: Matrix, v: Vector) -> Vector:
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def mat_pow(a: Matrix, n: int) -> Matrix:
    out = identity(len(a))
    for _ in range(n):
        out = mat_mul(out, a)
    return out


def subdiagonal_unipotent(k: int) -> Matrix:
    """Ones on the diagonal and subdiagonal, zeros elsewhere."""
    return tuple(tuple(1 if i == j or i == j + 1 else 0 for j in range(k)) for i in range(k))


def subdiagonal_unipotent_inverse(k: int) -> Matrix:
    """Exact integer inverse: alternating signs below the diagonal."""
    return tuple(tuple((-1) ** (i - j) if i >= j else 0 for j in range(k)) for i in range(k))


def subdiagonal_unipotent_power(k: int, n: int) -> Matrix:
    """Closed form for the n-th power: entry (i, j) = C(n, i-j)."""
    return tuple(tuple(binomial(n, i - j) for j in range(k)) for i in range(k))


def lower_triangular_ones(k: int) -> Matrix:
    return tuple(tuple(1 if i >= j else 0 for j in range(k)) for i in range(k))


def lower_triangular_ones_power(k: int, n: int) -> Matrix:
    """Closed form: entry (i, j) = C(n+i-j-1, n-1) for i >= j; identity at n = 0."""
    if n == 0:
        return identity(k)
    return tuple(
        tuple(binomial(n + i - j - 1, n - 1) if i >= j else 0 for j in range(k))
        for i in range(k)
    )
