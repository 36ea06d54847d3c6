"""Finite-dimensional graded nilpotent Lie algebras from structure constants.

A `LiePresentation` stores brackets of basis pairs in normalized form:
entries are kept for index pairs (i, j) with i < j, plus diagonal entries
(i, i) for odd-degree basis elements; everything else follows from graded
antisymmetry.  `validate` checks the graded axioms and nilpotency,
`lower_central_series` computes the filtration F_p together with the
nilpotency index k and per-basis-element weights, and `adapt` re-bases a
presentation so that the basis is a union of lifts of bases of F_p/F_{p+1},
ordered by (weight, degree, leading index).  All example constructors
produce presentations that are already adapted.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .graded import GradedSpace, as_fraction
from . import linalg
from .linalg import Vector, RowSpace

ZERO = Fraction(0)
ONE = Fraction(1)


class NotNilpotentError(ValueError):
    """Raised when the lower central series fails to reach zero."""


@dataclass(frozen=True)
class LinearMap:
    """Linear map given by the images of the source basis elements."""

    src: GradedSpace
    dst: GradedSpace
    images: tuple[Vector, ...]

    def __post_init__(self):
        if len(self.images) != self.src.dim:
            raise ValueError("one image per source basis element required")
        for img in self.images:
            if len(img) != self.dst.dim:
                raise ValueError("image length must equal target dimension")

    def apply(self, v: Vector) -> Vector:
        if len(v) != self.src.dim:
            raise ValueError("vector length must equal source dimension")
        out = [ZERO] * self.dst.dim
        for c, img in zip(v, self.images):
            if c:
                for t, x in enumerate(img):
                    if x:
                        out[t] += c * x
        return tuple(out)

    def compose(self, earlier: "LinearMap") -> "LinearMap":
        """self o earlier."""
        if earlier.dst != self.src:
            raise ValueError("maps not composable")
        return LinearMap(earlier.src, self.dst,
                         tuple(self.apply(img) for img in earlier.images))

    @staticmethod
    def identity(space: GradedSpace) -> "LinearMap":
        return LinearMap(space, space,
                         tuple(linalg.unit_vec(space.dim, i + 1) for i in range(space.dim)))


def _norm_value(space: GradedSpace, value) -> dict[int, Fraction]:
    out: dict[int, Fraction] = {}
    items = value.items() if isinstance(value, dict) else value
    for l, c in items:
        space.check_index(l)
        c = as_fraction(c)
        if c:
            out[l] = out.get(l, ZERO) + c
    return {l: c for l, c in out.items() if c}


class LiePresentation:
    """Structure constants of a graded Lie algebra on a finite graded basis.

    `table` maps index pairs to linear combinations of basis indices; any
    key order is accepted and normalized via graded antisymmetry.  Identity
    is used for hashing so derived data can be memoized per presentation.
    """

    def __init__(self, space: GradedSpace, table):
        self.space = space
        self._table: dict[tuple[int, int], dict[int, Fraction]] = {}
        items = table.items() if isinstance(table, dict) else table
        for (i, j), value in items:
            space.check_index(i)
            space.check_index(j)
            value = _norm_value(space, value)
            if i == j:
                if space.parity(i) == 0:
                    if value:
                        raise ValueError(f"[x_{i}, x_{i}] must vanish for even x_{i}")
                    continue
                key, entry = (i, i), value
            elif i < j:
                key, entry = (i, j), value
            else:
                sign = -ONE if (space.parity(i) and space.parity(j)) else ONE
                # [x_j, x_i] = -(-1)^{|x_i||x_j|} [x_i, x_j]
                entry = {l: -sign * c for l, c in value.items()}
                key = (j, i)
            if key in self._table and self._table[key] != entry:
                raise ValueError(f"conflicting entries for bracket {key}")
            if entry:
                self._table[key] = entry
        self._caches: dict[str, dict] = {}

    # identity hash: presentations act as cache keys for derived data
    __hash__ = object.__hash__

    @property
    def dim(self) -> int:
        return self.space.dim

    def table_items(self):
        return sorted(self._table.items())

    def structure_equal(self, other: "LiePresentation") -> bool:
        return self.space == other.space and self._table == other._table

    def cache(self, name: str) -> dict:
        return self._caches.setdefault(name, {})

    def basis_vector(self, i: int) -> Vector:
        self.space.check_index(i)
        return linalg.unit_vec(self.dim, i)

    def bracket_basis(self, i: int, j: int) -> dict[int, Fraction]:
        """[x_i, x_j] as a sparse coordinate dict."""
        self.space.check_index(i)
        self.space.check_index(j)
        if i == j:
            if self.space.parity(i) == 0:
                return {}
            return dict(self._table.get((i, i), {}))
        if i < j:
            return dict(self._table.get((i, j), {}))
        sign = -ONE if (self.space.parity(i) and self.space.parity(j)) else ONE
        return {l: -sign * c for l, c in self._table.get((j, i), {}).items()}

    def bracket(self, a: Vector, b: Vector) -> Vector:
        """Bilinear extension of the structure constants."""
        if len(a) != self.dim or len(b) != self.dim:
            raise ValueError("vector length must equal the algebra dimension")
        out = [ZERO] * self.dim
        for i, ai in enumerate(a, start=1):
            if not ai:
                continue
            for j, bj in enumerate(b, start=1):
                if not bj:
                    continue
                for l, c in self.bracket_basis(i, j).items():
                    out[l - 1] += ai * bj * c
        return tuple(out)


@dataclass(frozen=True)
class FiltrationReport:
    """Bases of the lower central series F_1 .. F_{k+1} and derived data.

    `weights[i-1]` is the largest p with basis element i contained in F_p.
    """

    bases: tuple[tuple[Vector, ...], ...]
    k: int
    weights: tuple[int, ...]

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(len(b) for b in self.bases)


def lower_central_series(p: LiePresentation) -> FiltrationReport:
    """F_1 = g, F_{p+1} = span [g, F_p]; raises NotNilpotentError if the
    series fails to shrink to zero within dim(g)+1 steps."""
    dim = p.dim
    bases: list[tuple[Vector, ...]] = []
    current = [p.basis_vector(i) for i in range(1, dim + 1)]
    bases.append(tuple(current))
    steps = 0
    while current:
        nxt = RowSpace(dim)
        for i in range(1, dim + 1):
            e = p.basis_vector(i)
            for v in current:
                w = p.bracket(e, v)
                if not linalg.is_zero_vec(w):
                    nxt.add(w)
        if nxt.rank >= len(current) and nxt.rank > 0:
            raise NotNilpotentError(
                f"lower central series stopped shrinking at dimension {nxt.rank}")
        current = list(nxt.rows)
        bases.append(tuple(current))
        steps += 1
        if steps > dim + 1:
            raise NotNilpotentError("lower central series did not terminate")
    k = len(bases) - 1  # F_{k+1} is the first vanishing term
    if k == 0:
        # zero algebra: report k = 1 so truncation bounds stay well-defined
        k = 1
        bases.append(())
    spaces = []
    for b in bases:
        rs = RowSpace(dim)
        rs.extend(b)
        spaces.append(rs)
    weights = []
    for i in range(1, dim + 1):
        e = p.basis_vector(i)
        w = max((q for q in range(1, k + 1) if spaces[q - 1].contains(e)), default=1)
        weights.append(w)
    return FiltrationReport(tuple(bases), k, tuple(weights))


@dataclass(frozen=True)
class ValidationFailure:
    axiom: str
    indices: tuple[int, ...]
    detail: str


@dataclass(frozen=True)
class ValidationReport:
    valid: bool
    failures: tuple[ValidationFailure, ...]
    filtration: FiltrationReport | None


def validate(p: LiePresentation) -> ValidationReport:
    """Check degree additivity, graded antisymmetry consistency, the graded
    Jacobi identity on all basis triples, and nilpotency.  Returns a report
    with the first witness per violated axiom; never raises."""
    failures: list[ValidationFailure] = []
    space = p.space

    def first_bad_degree():
        for (i, j), value in p.table_items():
            want = space.degree(i) + space.degree(j)
            for l in value:
                if space.degree(l) != want:
                    return ValidationFailure(
                        "degree", (i, j, l),
                        f"deg[x_{i},x_{j}] must be {want}, component x_{l} has degree {space.degree(l)}")
        return None

    def first_bad_antisymmetry():
        for i in range(1, p.dim + 1):
            for j in range(1, p.dim + 1):
                fwd = p.bracket_basis(i, j)
                sign = -ONE if (space.parity(i) and space.parity(j)) else ONE
                back = {l: -sign * c for l, c in p.bracket_basis(j, i).items()}
                if fwd != back:
                    return ValidationFailure(
                        "antisymmetry", (i, j),
                        f"[x_{i},x_{j}] and [x_{j},x_{i}] violate graded antisymmetry")
        return None

    def first_bad_jacobi():
        # Leibniz form: [a,[b,c]] = [[a,b],c] + (-1)^{|a||b|}[b,[a,c]]
        for i in range(1, p.dim + 1):
            a = p.basis_vector(i)
            for j in range(1, p.dim + 1):
                b = p.basis_vector(j)
                sign = -ONE if (space.parity(i) and space.parity(j)) else ONE
                for l in range(1, p.dim + 1):
                    c = p.basis_vector(l)
                    lhs = p.bracket(a, p.bracket(b, c))
                    rhs = linalg.vec_add(p.bracket(p.bracket(a, b), c),
                                         linalg.vec_scale(sign, p.bracket(b, p.bracket(a, c))))
                    if lhs != rhs:
                        return ValidationFailure(
                            "jacobi", (i, j, l),
                            f"graded Jacobi fails on basis triple ({i},{j},{l})")
        return None

    for check in (first_bad_degree, first_bad_antisymmetry, first_bad_jacobi):
        bad = check()
        if bad:
            failures.append(bad)

    filtration = None
    try:
        filtration = lower_central_series(p)
    except NotNilpotentError as e:
        failures.append(ValidationFailure("nilpotency", (), str(e)))

    return ValidationReport(not failures, tuple(failures), filtration)


def word_weight(p: LiePresentation, w, report: FiltrationReport) -> int:
    """Sum of the filtration weights of the letters of w; with an adapted
    basis this is the largest certified q with w in F_q of the tensor power."""
    p.space.check_word(tuple(w))
    return sum(report.weights[i - 1] for i in w)


def is_adapted(report: FiltrationReport) -> bool:
    """True if the basis is a union of lifts of bases of F_p/F_{p+1} and is
    sorted by (weight, degree)."""
    dims = report.dims
    for q in range(1, report.k + 2):
        if sum(1 for w in report.weights if w >= q) != dims[q - 1]:
            return False
    return True


def _weights_sorted(p: LiePresentation, report: FiltrationReport) -> bool:
    keys = [(report.weights[i], p.space.degrees[i]) for i in range(p.dim)]
    return all(keys[i] <= keys[i + 1] for i in range(len(keys) - 1))


def adapt(p: LiePresentation, report: FiltrationReport | None = None):
    """Re-base so that basis elements have well-defined weights and appear in
    (weight, degree, leading index) order.

    Returns (presentation, report, to_new, to_old) where `to_new` maps old
    coordinates to new ones and `to_old` is its inverse.  Presentations that
    are already adapted are returned unchanged with identity maps.
    """
    if report is None:
        report = lower_central_series(p)
    if is_adapted(report) and _weights_sorted(p, report):
        ident = LinearMap.identity(p.space)
        return p, report, ident, ident

    dim = p.dim
    chosen: list[tuple[int, int, int, Vector]] = []  # (weight, degree, pivot, vector)
    span = RowSpace(dim)
    for level in range(report.k, 0, -1):
        for v in report.bases[level - 1]:
            r = span.reduce(v)
            piv = next((i for i, x in enumerate(r) if x), None)
            if piv is None:
                continue
            r = linalg.vec_scale(ONE / r[piv], r)
            deg = p.space.degrees[piv]  # reduced rows stay degree-homogeneous
            chosen.append((level, deg, piv, r))
            span.add(v)
    chosen.sort(key=lambda t: (t[0], t[1], t[2]))
    if len(chosen) != dim:
        raise ValueError("filtration bases do not span the algebra")

    new_vectors = [t[3] for t in chosen]
    inverse_rows = linalg.invert(new_vectors)
    if inverse_rows is None:
        raise ValueError("adapted candidate basis is singular")

    names = []
    used = set()
    for (level, _deg, piv, v) in chosen:
        support = [i for i, x in enumerate(v) if x]
        if len(support) == 1 and v[support[0]] == 1:
            name = p.space.names[support[0]]
        else:
            name = f"w{level}_{p.space.names[piv]}"
        while name in used:
            name += "_"
        used.add(name)
        names.append(name)
    new_space = GradedSpace(tuple(names), tuple(t[1] for t in chosen))

    def to_new_coords(v: Vector) -> Vector:
        return tuple(sum(row[i] * v[i] for i in range(dim)) for row in inverse_rows)

    table = {}
    for s in range(1, dim + 1):
        for t in range(s, dim + 1):
            if s == t and new_space.parity(s) == 0:
                continue
            val = p.bracket(new_vectors[s - 1], new_vectors[t - 1])
            coords = to_new_coords(val)
            entry = {l + 1: c for l, c in enumerate(coords) if c}
            if entry:
                table[(s, t)] = entry
    p2 = LiePresentation(new_space, table)
    report2 = lower_central_series(p2)
    to_new = LinearMap(p.space, new_space,
                       tuple(to_new_coords(p.basis_vector(i)) for i in range(1, dim + 1)))
    to_old = LinearMap(new_space, p.space, tuple(new_vectors))
    return p2, report2, to_new, to_old


def quotient_by_filtration(p: LiePresentation, level: int,
                           report: FiltrationReport | None = None):
    """The quotient g / F_level together with the projection map.

    Requires 1 <= level <= k+1.  The quotient basis consists of the adapted
    basis elements of weight < level, so it is again adapted.
    """
    if report is None:
        report = lower_central_series(p)
    if not (1 <= level <= report.k + 1):
        raise ValueError(f"level must lie in 1..{report.k + 1}, got {level}")
    p2, report2, to_new, _ = adapt(p, report)
    if level == report2.k + 1:
        return p2, to_new

    survivors = [i for i in range(1, p2.dim + 1) if report2.weights[i - 1] < level]
    pos = {i: t + 1 for t, i in enumerate(survivors)}
    qspace = GradedSpace(tuple(p2.space.names[i - 1] for i in survivors),
                         tuple(p2.space.degrees[i - 1] for i in survivors))
    table = {}
    for a, i in enumerate(survivors, start=1):
        for b, j in enumerate(survivors, start=1):
            if j < i or (i == j and qspace.parity(a) == 0):
                continue
            entry = {pos[l]: c for l, c in p2.bracket_basis(i, j).items() if l in pos}
            if entry:
                table[(a, b)] = entry
    q = LiePresentation(qspace, table)
    proj_images = []
    for i in range(1, p2.dim + 1):
        if i in pos:
            proj_images.append(linalg.unit_vec(len(survivors), pos[i]))
        else:
            proj_images.append(linalg.zero_vec(len(survivors)))
    proj = LinearMap(p2.space, qspace, tuple(proj_images)).compose(to_new)
    return q, proj


# ---------------------------------------------------------------------------
# example constructors
# ---------------------------------------------------------------------------


def heisenberg() -> LiePresentation:
    space = GradedSpace(("x", "y", "z"), (0, 0, 0))
    return LiePresentation(space, {(1, 2): {3: ONE}})


def abelian(d: int) -> LiePresentation:
    if d < 0:
        raise ValueError("dimension must be >= 0")
    space = GradedSpace(tuple(f"a{i}" for i in range(1, d + 1)), (0,) * d)
    return LiePresentation(space, {})


def strict_upper_triangular(n: int) -> LiePresentation:
    """Strictly upper triangular n x n matrices, basis E_ij ordered by
    (j - i, i) so the basis is adapted (weight of E_ij is j - i)."""
    if n < 2:
        raise ValueError("matrix size must be >= 2")
    positions = sorted(((i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)),
                       key=lambda t: (t[1] - t[0], t[0]))
    idx = {pos: r + 1 for r, pos in enumerate(positions)}
    space = GradedSpace(tuple(f"E{i}_{j}" for (i, j) in positions), (0,) * len(positions))
    table = {}
    for (a, b) in positions:
        for (c, d) in positions:
            s, t = idx[(a, b)], idx[(c, d)]
            if t <= s:
                continue
            # [E_ab, E_cd] = delta_bc E_ad - delta_da E_cb
            entry: dict[int, Fraction] = {}
            if b == c:
                entry[idx[(a, d)]] = entry.get(idx[(a, d)], ZERO) + ONE
            if d == a:
                entry[idx[(c, b)]] = entry.get(idx[(c, b)], ZERO) - ONE
            entry = {l: v for l, v in entry.items() if v}
            if entry:
                table[(s, t)] = entry
    return LiePresentation(space, table)


def _monomials(d: int, total: int):
    """Exponent tuples of length d with given total degree, lex order."""
    if d == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _monomials(d - 1, total - first):
            yield (first,) + rest


def formal_vector_fields(d: int, cutoff: int) -> LiePresentation:
    """Polynomial vector fields with coefficients of degree 2..cutoff in d
    variables, i.e. derivations vanishing to second order at the origin,
    truncated at the cutoff.

    The bracket is the commutator of derivations computed symbolically;
    coefficient monomials of degree > cutoff are dropped.  Basis elements
    carry the even degree 2*(|monomial| - 1), which is additive under the
    bracket and keeps all Koszul signs trivial.
    """
    if d < 1:
        raise ValueError("number of variables must be >= 1")
    if cutoff < 2:
        raise ValueError("cutoff must be >= 2")
    basis: list[tuple[tuple[int, ...], int]] = []
    for total in range(2, cutoff + 1):
        for alpha in _monomials(d, total):
            for j in range(1, d + 1):
                basis.append((alpha, j))
    idx = {ba: r + 1 for r, ba in enumerate(basis)}

    def name(alpha, j):
        if d == 1:
            return f"t{alpha[0]}d"
        return "m" + "_".join(map(str, alpha)) + f"_d{j}"

    space = GradedSpace(tuple(name(a, j) for (a, j) in basis),
                        tuple(2 * (sum(a) - 1) for (a, _) in basis))

    def term(alpha, j):
        # drop monomials beyond the cutoff (the tower stage quotient)
        if sum(alpha) > cutoff or min(alpha) < 0:
            return {}
        return {idx[(alpha, j)]: ONE}

    table = {}
    for r1, (a, i) in enumerate(basis, start=1):
        for r2, (b, j) in enumerate(basis, start=1):
            if r2 <= r1:
                continue
            # [x^a d_i, x^b d_j] = b_i x^{a+b-e_i} d_j - a_j x^{a+b-e_j} d_i
            entry: dict[int, Fraction] = {}
            if b[i - 1]:
                left = tuple(x + y - (1 if t == i - 1 else 0) for t, (x, y) in enumerate(zip(a, b)))
                for l, c in term(left, j).items():
                    entry[l] = entry.get(l, ZERO) + b[i - 1] * c
            if a[j - 1]:
                right = tuple(x + y - (1 if t == j - 1 else 0) for t, (x, y) in enumerate(zip(a, b)))
                for l, c in term(right, i).items():
                    entry[l] = entry.get(l, ZERO) - a[j - 1] * c
            entry = {l: v for l, v in entry.items() if v}
            if entry:
                table[(r1, r2)] = entry
    return LiePresentation(space, table)


def make_example(kind: str, **params) -> LiePresentation:
    """Builtin constructors: heisenberg, abelian(d), strict_upper_triangular(n),
    free_nilpotent(m, c), formal_vector_fields(d, c)."""
    if kind == "heisenberg":
        return heisenberg()
    if kind == "abelian":
        return abelian(params["d"])
    if kind == "strict_upper_triangular":
        return strict_upper_triangular(params["n"])
    if kind == "free_nilpotent":
        from . import freelie
        degrees = params.get("degrees")
        if degrees is None:
            degrees = (0,) * params["m"]
        return freelie.free_nilpotent(tuple(degrees), params["c"],
                                      super_generators=params.get("super_generators", False))
    if kind == "formal_vector_fields":
        return formal_vector_fields(params["d"], params["c"])
    raise ValueError(f"unknown example kind {kind!r}")
