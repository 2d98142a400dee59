"""Jacobian matrices, minors, derivations and the derivation predicates.

Fixed-point-freeness is decided exactly through Groebner bases; local
nilpotency is only semi-decided (``Proven`` or ``Exhausted``).
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

from .errors import ArityError, IllDefinedDerivationError
from .groebner import Ideal, relation_ideal
from .poly import Monomial, Polynomial, RingPresentation, exact_quotient, mono_divides
from .verdict import Verdict, exhausted, proven, refuted

DEFAULT_LND_BOUND = 64
DEFAULT_SLICE_DEGREE = 8


class Matrix:
    """Rectangular grid of polynomials over one presentation."""

    def __init__(self, rows: Sequence[Sequence[Polynomial]]):
        rows = tuple(tuple(r) for r in rows)
        if not rows or not rows[0]:
            raise ArityError("a matrix needs at least one row and one column")
        if any(len(r) != len(rows[0]) for r in rows):
            raise ArityError("matrix rows have different lengths")
        ring = rows[0][0].ring
        self.rows = tuple(tuple(ring.convert(e) for e in r) for r in rows)
        self.ring = ring

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        return len(self.rows[0])

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        return Matrix([[self.rows[i][j] for j in cols] for i in rows])

    def __eq__(self, other):
        return isinstance(other, Matrix) and self.rows == other.rows

    def __str__(self):
        return "[" + "; ".join(", ".join(str(e) for e in r) for r in self.rows) + "]"

    __repr__ = __str__


def jacobian_matrix(polys: Sequence[Polynomial], variables: Sequence[str]) -> Matrix:
    if not polys:
        raise ArityError("jacobian_matrix needs at least one polynomial")
    if len(set(variables)) != len(variables):
        raise ArityError(f"variables must be distinct: {variables}")
    ring = polys[0].ring
    for v in variables:
        ring.index(v)
    return Matrix([[ring.convert(p).partial(v) for v in variables] for p in polys])


def _bareiss(rows: List[List[Polynomial]]) -> Polynomial:
    a = [list(r) for r in rows]
    n = len(a)
    ring = a[0][0].ring
    sign = 1
    prev = ring.one()
    for k in range(n - 1):
        if not a[k][k]:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return ring.zero()
        pivot = a[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = exact_quotient(a[i][j] * pivot - a[i][k] * a[k][j], prev)
            a[i][k] = ring.zero()
        prev = pivot
    return a[n - 1][n - 1] if sign > 0 else -a[n - 1][n - 1]


def _cofactor(rows: List[List[Polynomial]]) -> Polynomial:
    n = len(rows)
    if n == 1:
        return rows[0][0]
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    # expand along the sparsest row
    r = min(range(n), key=lambda i: sum(1 for e in rows[i] if e))
    total = rows[0][0].ring.zero()
    for j, e in enumerate(rows[r]):
        if not e:
            continue
        minor = [row[:j] + row[j + 1:] for i, row in enumerate(rows) if i != r]
        term = e * _cofactor(minor)
        total = total + term if (r + j) % 2 == 0 else total - term
    return total


def determinant(m: Matrix, method: str = "bareiss") -> Polynomial:
    """Exact determinant by fraction-free Bareiss elimination or cofactor expansion."""
    if m.nrows != m.ncols:
        raise ArityError(f"determinant of a non-square {m.nrows}x{m.ncols} matrix")
    rows = [list(r) for r in m.rows]
    if method == "cofactor":
        return _cofactor(rows)
    if method != "bareiss":
        raise ValueError(f"unknown determinant method {method!r}")
    try:
        return _bareiss(rows)
    except ArithmeticError:
        return _cofactor(rows)


def minors(m: Matrix, k: int) -> List[Polynomial]:
    """All k x k minors; row selections outer, column selections inner, both lexicographic."""
    if k < 1 or k > min(m.nrows, m.ncols):
        raise ArityError(f"minor size {k} out of range for a {m.nrows}x{m.ncols} matrix")
    out = []
    for rs in combinations(range(m.nrows), k):
        for cs in combinations(range(m.ncols), k):
            out.append(determinant(m.submatrix(rs, cs)))
    return out


class Derivation:
    """A Q-derivation of ``Q[X]/J`` given by the images of the variables.

    Variables missing from ``images`` are sent to 0.  Over a quotient
    presentation the derivation must map every relation into the relation
    ideal; otherwise :class:`IllDefinedDerivationError` is raised.
    """

    def __init__(
        self,
        images: Mapping[str, Union[Polynomial, int, Fraction]],
        ring: Optional[RingPresentation] = None,
        check: bool = True,
    ):
        if ring is None:
            polys = [p for p in images.values() if isinstance(p, Polynomial)]
            if not polys:
                raise ValueError("cannot infer the ring of a derivation with constant images")
            ring = polys[0].ring
        for v in images:
            ring.index(v)
        self.ring = ring
        self.images: Dict[str, Polynomial] = {
            v: ring.convert(images.get(v, 0)) for v in ring.variables
        }
        if check and ring.relations:
            rel = relation_ideal(ring)
            for r in ring.relations:
                if not rel.contains(self.apply(r)):
                    raise IllDefinedDerivationError(
                        f"derivation does not preserve the relation {r}"
                    )

    def apply(self, f: Polynomial) -> Polynomial:
        f = self.ring.convert(f)
        total = self.ring.zero()
        for v, img in self.images.items():
            if img:
                d = f.partial(v)
                if d:
                    total = total + img * d
        return total

    __call__ = apply

    def image_list(self) -> List[Polynomial]:
        return [self.images[v] for v in self.ring.variables]

    def __eq__(self, other):
        return isinstance(other, Derivation) and self.ring == other.ring and self.images == other.images

    def __str__(self):
        return "{" + ", ".join(f"{v} -> {p}" for v, p in self.images.items()) + "}"

    __repr__ = __str__


def apply(d: Derivation, f: Polynomial) -> Polynomial:
    return d.apply(f)


def jacobian_derivation(
    polys: Sequence[Polynomial], variables: Sequence[str], ring: Optional[RingPresentation] = None
) -> Derivation:
    """Derivation ``g -> det Jac(polys, g)/(variables)``.

    The image of ``variables[i]`` is the determinant of the square matrix
    whose leading rows are the Jacobian of ``polys`` and whose last row is the
    i-th unit row.  It is cross-checked against the signed maximal minor of
    the Jacobian with column ``i`` removed, expanded by cofactors.  Variables outside ``variables``
    are sent to 0.
    """
    n = len(variables)
    if len(polys) != n - 1:
        raise ArityError(f"a Jacobian derivation in {n} variables needs {n - 1} polynomials, got {len(polys)}")
    if ring is None:
        if not polys:
            raise ArityError("ring must be given when there are no polynomials")
        ring = polys[0].ring
    polys = [ring.convert(p) for p in polys]
    if len(set(variables)) != n:
        raise ArityError(f"variables must be distinct: {variables}")
    for v in variables:
        ring.index(v)
    jac = [[p.partial(v) for v in variables] for p in polys]
    images = {}
    for i, v in enumerate(variables):
        unit = [ring.one() if j == i else ring.zero() for j in range(n)]
        img = determinant(Matrix(jac + [unit]))
        if n == 1:
            alt = ring.one()
        else:
            reduced = Matrix([row[:i] + row[i + 1:] for row in jac])
            alt = determinant(reduced, "cofactor")
            if (n - 1 + i) % 2:
                alt = -alt
        if img != alt:
            raise AssertionError(f"Jacobian derivation image of {v}: {img} != {alt}")
        images[v] = img
    return Derivation(images, ring)


def is_fixed_point_free(d: Derivation) -> Verdict:
    """``Proven`` (with a cofactor certificate) iff the images generate the unit ideal."""
    ideal = Ideal(d.image_list(), d.ring)
    if ideal.is_unit():
        return proven(ideal.unit_certificate, "images generate the unit ideal")
    return refuted(ideal.basis, "reduced basis of the image ideal is not {1}")


def _iterate_to_zero(d: Derivation, f: Polynomial, bound: int, rel: Optional[Ideal]) -> Optional[int]:
    for k in range(1, bound + 1):
        f = d.apply(f)
        if rel is not None:
            f = rel.normal_form(f)
        if not f:
            return k
    return None


def is_locally_nilpotent(d: Derivation, bound: int = DEFAULT_LND_BOUND) -> Verdict:
    """Semi-decide local nilpotency from the variables' nilpotency indices.

    ``Proven`` when every variable ``v`` has ``D^k(v) = 0`` (modulo relations)
    for some ``k <= bound``; the witness maps each variable to its index.
    Since locally nilpotent elements form a subring, this covers every
    element.  Otherwise ``Exhausted``; never ``Refuted``.
    """
    if bound < 1:
        raise ValueError("bound must be at least 1")
    rel = relation_ideal(d.ring) if d.ring.relations else None
    indices = {}
    stuck = []
    for v in d.ring.variables:
        k = _iterate_to_zero(d, d.ring.gen(v), bound, rel)
        if k is None:
            stuck.append(v)
        else:
            indices[v] = k
    if stuck:
        return exhausted(bound, "no vanishing iterate within the bound for " + ", ".join(stuck))
    return proven(indices, "nilpotency index of each variable")


def monomials_up_to(nvars: int, degree: int) -> Iterator[Monomial]:
    """Exponent vectors of total degree ``<= degree``, by increasing degree."""

    def exact(n, d):
        if n == 1:
            yield (d,)
            return
        for e in range(d, -1, -1):
            for rest in exact(n - 1, d - e):
                yield (e,) + rest

    if nvars == 0:
        yield ()
        return
    for d in range(degree + 1):
        yield from exact(nvars, d)


def solve_linear(
    columns: Sequence[Dict], rhs: Dict
) -> Optional[List[Fraction]]:
    """Solve ``sum_j x_j * columns[j] = rhs`` over Q; free unknowns are set to 0.

    Columns and ``rhs`` are sparse maps from row keys to coefficients.
    Returns ``None`` when the system is inconsistent.
    """
    rows: Dict = {}
    for j, col in enumerate(columns):
        for key, c in col.items():
            rows.setdefault(key, {})[j] = Fraction(c)
    for key in rhs:
        rows.setdefault(key, {})
    pivots: Dict[int, Tuple[Dict[int, Fraction], Fraction]] = {}
    for key, row in rows.items():
        row = dict(row)
        b = Fraction(rhs.get(key, 0))
        for pc in [c for c in row if c in pivots]:
            f = row.get(pc)
            if not f:
                continue
            prow, pb = pivots[pc]
            for c, v in prow.items():
                nv = row.get(c, 0) - f * v
                if nv:
                    row[c] = nv
                else:
                    row.pop(c, None)
            b -= f * pb
        if not row:
            if b:
                return None
            continue
        pc = min(row)
        inv = 1 / row[pc]
        row = {c: v * inv for c, v in row.items()}
        b *= inv
        for other, (orow, ob) in list(pivots.items()):
            f = orow.get(pc)
            if f:
                for c, v in row.items():
                    nv = orow.get(c, 0) - f * v
                    if nv:
                        orow[c] = nv
                    else:
                        orow.pop(c, None)
                pivots[other] = (orow, ob - f * b)
        pivots[pc] = (row, b)
    solution = [Fraction(0)] * len(columns)
    for pc, (_, b) in pivots.items():
        solution[pc] = b
    return solution


def find_slice(d: Derivation, degree_bound: int = DEFAULT_SLICE_DEGREE) -> Optional[Polynomial]:
    """Search for ``g`` of total degree ``<= degree_bound`` with ``D(g) = 1``.

    Solves for the coefficients of a monomial ansatz (standard monomials
    modulo the relations) by exact linear algebra, one degree at a time.
    A slice forces the images to generate the unit ideal, so non-fixed-point-free
    derivations return ``None`` immediately.
    """
    ring = d.ring
    if not Ideal(d.image_list(), ring).is_unit():
        return None
    rel = relation_ideal(ring)
    rel_leads = [b.leading_monomial() for b in rel.basis]
    target = rel.normal_form(ring.one()).terms
    columns: Dict[Monomial, Dict] = {}
    for deg in range(degree_bound + 1):
        monos = [
            m for m in monomials_up_to(ring.nvars, deg)
            if not any(mono_divides(lead, m) for lead in rel_leads)
        ]
        for m in monos:
            if m not in columns:
                columns[m] = rel.normal_form(d.apply(Polynomial._raw(ring, {m: 1}))).terms
        sol = solve_linear([columns[m] for m in monos], target)
        if sol is None:
            continue
        g = Polynomial(ring, {m: c for m, c in zip(monos, sol) if c})
        if rel.normal_form(d.apply(g) - 1):
            raise AssertionError(f"slice candidate {g} fails D(g) = 1")
        return g
    return None


def is_retraction(
    mapping: Mapping[str, Union[Polynomial, int, Fraction]], ring: RingPresentation
) -> Verdict:
    """Decide whether the endomorphism ``v -> mapping[v]`` is idempotent modulo relations.

    Unmapped variables are fixed.  Base-ring variables must be fixed for the
    map to be an R-algebra retraction.
    """
    images = {v: ring.convert(mapping.get(v, ring.gen(v))) for v in ring.variables}
    for v in mapping:
        ring.index(v)
    rel = relation_ideal(ring)
    for v in ring.base_variables:
        if rel.normal_form(images[v] - ring.gen(v)):
            return refuted({"variable": v, "image": images[v]}, "base-ring variable is not fixed")
    for r in ring.relations:
        if not rel.contains(r.substitute(images)):
            raise IllDefinedDerivationError(f"map does not preserve the relation {r}")
    for v in ring.variables:
        defect = rel.normal_form(images[v].substitute(images) - images[v])
        if defect:
            return refuted({"variable": v, "defect": defect}, "phi(phi(v)) != phi(v)")
    return proven(
        {v: images[v] for v in ring.fibre_variables or ring.variables},
        "phi(phi(v)) = phi(v) modulo relations for every variable",
    )
