"""Graded bases, words, Koszul signs and truncated tensor elements.

Everything here is exact: coefficients are `fractions.Fraction`, truncation
is by tensor order.  A `TensorElement` stores components up to a truncation
order N together with a *guaranteed* order G <= N: components of order <= G
are exact, components of order in (G, N] may be stored but are not certified.

Conventions used throughout the package:

* basis indices are 1-based (index i refers to the i-th basis element of the
  ambient `GradedSpace`);
* a word is a tuple of basis indices, the empty tuple is the unit;
* a permutation of {1..n} is a tuple ``perm`` of length n with
  ``perm[i-1] = sigma(i)``, i.e. position i is sent to position sigma(i);
* the sign of a signed permutation action is the Koszul sign: each crossing
  of two odd-degree letters contributes -1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from typing import Iterable, Mapping

Word = tuple[int, ...]
Perm = tuple[int, ...]

ZERO = Fraction(0)
ONE = Fraction(1)


def as_fraction(c) -> Fraction:
    """Coerce ints / strings like '3/2' to Fraction; floats are rejected."""
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, str)):
        return Fraction(c)
    raise ValueError(f"exact scalar expected, got {type(c).__name__}")


@dataclass(frozen=True)
class GradedSpace:
    """A finite ordered basis with integer degrees.

    Parity of a basis element is its degree mod 2; the Koszul sign rule
    only ever sees parities.
    """

    names: tuple[str, ...]
    degrees: tuple[int, ...]

    def __post_init__(self):
        if len(self.names) != len(self.degrees):
            raise ValueError("names and degrees must have equal length")
        if len(set(self.names)) != len(self.names):
            raise ValueError("basis names must be pairwise distinct")
        if any(not n for n in self.names):
            raise ValueError("basis names must be nonempty")
        if any(not isinstance(d, int) for d in self.degrees):
            raise ValueError("degrees must be integers")

    @property
    def dim(self) -> int:
        return len(self.names)

    def degree(self, i: int) -> int:
        """Degree of basis element i (1-based)."""
        self.check_index(i)
        return self.degrees[i - 1]

    def parity(self, i: int) -> int:
        return self.degree(i) % 2

    def name(self, i: int) -> str:
        self.check_index(i)
        return self.names[i - 1]

    def index(self, name: str) -> int:
        try:
            return self.names.index(name) + 1
        except ValueError:
            raise KeyError(f"unknown basis name {name!r}") from None

    def check_index(self, i: int) -> None:
        if not (isinstance(i, int) and 1 <= i <= self.dim):
            raise ValueError(f"basis index {i} out of range 1..{self.dim}")

    def check_word(self, w: Word) -> None:
        for i in w:
            self.check_index(i)

    def word_degree(self, w: Word) -> int:
        return sum(self.degrees[i - 1] for i in w)

    def word_parities(self, w: Word) -> tuple[int, ...]:
        return tuple(self.degrees[i - 1] % 2 for i in w)


def is_permutation(perm: Perm) -> bool:
    return sorted(perm) == list(range(1, len(perm) + 1))


def identity_perm(n: int) -> Perm:
    return tuple(range(1, n + 1))


def compose_perms(outer: Perm, inner: Perm) -> Perm:
    """(outer o inner)(i) = outer(inner(i))."""
    if len(outer) != len(inner):
        raise ValueError("permutation sizes differ")
    return tuple(outer[inner[i] - 1] for i in range(len(inner)))


def koszul_sign(perm: Perm, degrees: Iterable[int]) -> Fraction:
    """Sign of the signed action of `perm` on letters with the given degrees.

    (-1)^m where m counts pairs i<j whose contents end up in reversed order
    and whose degrees are both odd.
    """
    degs = tuple(degrees)
    if len(degs) != len(perm):
        raise ValueError("degrees and permutation must have equal length")
    if not is_permutation(perm):
        raise ValueError(f"not a permutation of 1..{len(perm)}: {perm}")
    m = 0
    n = len(perm)
    for i in range(n):
        if degs[i] % 2 == 0:
            continue
        for j in range(i + 1, n):
            if degs[j] % 2 and perm[i] > perm[j]:
                m += 1
    return -ONE if m % 2 else ONE


def permute(space: GradedSpace, perm: Perm, w: Word) -> tuple[Word, Fraction]:
    """Signed action of `perm` on the word `w`: letter at position i moves to
    position perm(i).  Returns the reordered word and the Koszul sign."""
    if len(perm) != len(w):
        raise ValueError("permutation size must equal word length")
    space.check_word(w)
    sign = koszul_sign(perm, (space.degrees[i - 1] for i in w))
    out = [0] * len(w)
    for pos, letter in zip(perm, w):
        out[pos - 1] = letter
    return tuple(out), sign


def _normalized_coeffs(space: GradedSpace, order: int,
                       coeffs: Mapping[Word, Fraction]) -> dict[Word, Fraction]:
    out: dict[Word, Fraction] = {}
    for w, c in coeffs.items():
        w = tuple(w)
        space.check_word(w)
        if len(w) > order:
            raise ValueError(f"word {w} exceeds truncation order {order}")
        c = as_fraction(c)
        if c:
            out[w] = c
    return out


@dataclass(frozen=True)
class TensorElement:
    """Sparse truncated element of the completed tensor algebra.

    `coeffs` maps words to nonzero Fractions; `guaranteed` is the certified
    order G: components of order <= G are exact.
    """

    space: GradedSpace
    order: int
    coeffs: dict[Word, Fraction]
    guaranteed: int

    def __post_init__(self):
        if self.order < 0:
            raise ValueError("truncation order must be >= 0")
        if not (0 <= self.guaranteed <= self.order):
            raise ValueError("guaranteed order must lie in 0..order")
        object.__setattr__(self, "coeffs",
                           _normalized_coeffs(self.space, self.order, self.coeffs))

    # -- constructors -------------------------------------------------

    @staticmethod
    def zero(space: GradedSpace, order: int, guaranteed: int | None = None) -> "TensorElement":
        g = order if guaranteed is None else guaranteed
        return TensorElement(space, order, {}, g)

    @staticmethod
    def unit(space: GradedSpace, order: int) -> "TensorElement":
        return TensorElement(space, order, {(): ONE}, order)

    @staticmethod
    def from_word(space: GradedSpace, order: int, w: Word, coeff=ONE) -> "TensorElement":
        return TensorElement(space, order, {tuple(w): as_fraction(coeff)}, order)

    @staticmethod
    def from_vector(space: GradedSpace, order: int, vec) -> "TensorElement":
        """Order-1 element with coordinates `vec` (tuple of Fractions)."""
        if len(vec) != space.dim:
            raise ValueError("vector length must equal space dimension")
        return TensorElement(space, order,
                             {(i + 1,): as_fraction(c) for i, c in enumerate(vec) if c},
                             order)

    # -- linear structure ---------------------------------------------

    def _check_compatible(self, other: "TensorElement") -> None:
        if self.space != other.space:
            raise ValueError("ambient graded spaces differ")
        if self.order != other.order:
            raise ValueError("truncation orders differ")

    def __add__(self, other: "TensorElement") -> "TensorElement":
        self._check_compatible(other)
        out = dict(self.coeffs)
        for w, c in other.coeffs.items():
            out[w] = out.get(w, ZERO) + c
        return TensorElement(self.space, self.order, out,
                             min(self.guaranteed, other.guaranteed))

    def __neg__(self) -> "TensorElement":
        return self.scale(-ONE)

    def __sub__(self, other: "TensorElement") -> "TensorElement":
        return self + (-other)

    def scale(self, c) -> "TensorElement":
        c = as_fraction(c)
        return TensorElement(self.space, self.order,
                             {w: c * v for w, v in self.coeffs.items()},
                             self.guaranteed)

    def __rmul__(self, c) -> "TensorElement":
        return self.scale(c)

    def __mul__(self, other):
        if isinstance(other, TensorElement):
            return tensor_multiply(self, other)
        return self.scale(other)

    # -- inspection ----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.coeffs

    def coefficient(self, w: Word) -> Fraction:
        return self.coeffs.get(tuple(w), ZERO)

    def component(self, n: int) -> "TensorElement":
        """The order-n homogeneous part (same truncation data)."""
        return TensorElement(self.space, self.order,
                             {w: c for w, c in self.coeffs.items() if len(w) == n},
                             self.guaranteed)

    def max_word_order(self) -> int:
        return max((len(w) for w in self.coeffs), default=0)

    def restrict(self, max_order: int) -> "TensorElement":
        """Drop components above `max_order` (keeps certification data)."""
        return TensorElement(self.space, min(self.order, max_order),
                             {w: c for w, c in self.coeffs.items() if len(w) <= max_order},
                             min(self.guaranteed, max_order))

    def certified_part(self) -> "TensorElement":
        """Only the components of order <= guaranteed order."""
        return TensorElement(self.space, self.order,
                             {w: c for w, c in self.coeffs.items()
                              if len(w) <= self.guaranteed},
                             self.guaranteed)

    def with_guaranteed(self, g: int) -> "TensorElement":
        return TensorElement(self.space, self.order, self.coeffs, g)

    def terms(self):
        """Terms sorted by (order, word) for deterministic output."""
        return sorted(self.coeffs.items(), key=lambda t: (len(t[0]), t[0]))


def same_certified(a: TensorElement, b: TensorElement) -> bool:
    """Equality of exact components up to the common guaranteed order."""
    g = min(a.guaranteed, b.guaranteed)
    return ({w: c for w, c in a.coeffs.items() if len(w) <= g}
            == {w: c for w, c in b.coeffs.items() if len(w) <= g})


def tensor_multiply(a: TensorElement, b: TensorElement) -> TensorElement:
    """Concatenation product in the truncated tensor algebra."""
    a._check_compatible(b)
    n = a.order
    out: dict[Word, Fraction] = {}
    for w1, c1 in a.coeffs.items():
        if len(w1) > n:
            continue
        for w2, c2 in b.coeffs.items():
            if len(w1) + len(w2) > n:
                continue
            w = w1 + w2
            out[w] = out.get(w, ZERO) + c1 * c2
    return TensorElement(a.space, n, out, min(a.guaranteed, b.guaranteed, n))


def symmetrize(t: TensorElement, n: int) -> TensorElement:
    """Sum of the signed actions of all of S_n on an order-n element.

    The result is a fixed point of every signed permutation action.
    """
    if any(len(w) != n for w in t.coeffs):
        raise ValueError(f"symmetrize expects a homogeneous element of order {n}")
    out: dict[Word, Fraction] = {}
    for perm in permutations(range(1, n + 1)):
        for w, c in t.coeffs.items():
            pw, sign = permute(t.space, perm, w)
            v = out.get(pw, ZERO) + sign * c
            if v:
                out[pw] = v
            else:
                out.pop(pw, None)
    return TensorElement(t.space, t.order, out, t.guaranteed)


def symmetrize_word(space: GradedSpace, order: int, w: Word) -> TensorElement:
    """Symmetrization of a single word, as an element truncated at `order`."""
    return symmetrize(TensorElement.from_word(space, order, w), len(w))


def map_tensor(t: TensorElement, images: tuple, dst_space: GradedSpace) -> TensorElement:
    """Push a tensor element through a linear map given by basis images.

    `images[i-1]` is the coordinate tuple (over `dst_space`) of the image of
    basis element i.  Words are mapped letterwise and expanded.
    """
    if len(images) != t.space.dim:
        raise ValueError("one image per basis element required")
    out: dict[Word, Fraction] = {}
    for w, c in t.coeffs.items():
        partial: dict[Word, Fraction] = {(): c}
        for letter in w:
            img = images[letter - 1]
            nxt: dict[Word, Fraction] = {}
            for pw, pc in partial.items():
                for j, v in enumerate(img):
                    if v:
                        key = pw + (j + 1,)
                        nxt[key] = nxt.get(key, ZERO) + pc * as_fraction(v)
            partial = nxt
            if not partial:
                break
        for pw, pc in partial.items():
            out[pw] = out.get(pw, ZERO) + pc
    return TensorElement(dst_space, t.order, out, t.guaranteed)
