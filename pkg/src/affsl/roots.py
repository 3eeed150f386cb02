"""Root data of sl(m|n) for an arbitrary parity pattern.

A parity pattern is a tuple of +1/-1 entries of length N = m + n.  Positive
roots are pairs (a, b) with 1 <= a < b <= N standing for e_a - e_b; the
parity of (a, b) is 0 (even) when the pattern entries at a and b agree and
1 (odd) otherwise.  All odd roots are isotropic.

Three total orders from the construction are fixed here:

* roots: lexicographic on (a, b), which satisfies the betweenness rule
  "alpha < alpha+gamma < gamma whenever all three are positive roots";
* loop positions (root, degree): by root first, then degree;
* exponent maps over loop positions: compare values at the smallest
  position where two maps disagree.

When m == n the Cartan matrix is singular and the Heisenberg layer works
with the reduced index set I' = {1, ..., N-2} and the correspondingly
truncated matrix; ``heis_indices``/``heis_cartan`` expose that reduction.
"""

from __future__ import annotations

from fractions import Fraction

Root = tuple  # (a, b), 1-based, a < b
Position = tuple  # ((a, b), degree)


class RootDataError(ValueError):
    pass


def parse_parity(text: str) -> tuple:
    """Parity pattern from a string like '++-'."""
    signs = []
    for ch in text.strip():
        if ch == "+":
            signs.append(1)
        elif ch == "-":
            signs.append(-1)
        else:
            raise RootDataError(f"bad parity character {ch!r}")
    return tuple(signs)


class RootData:
    """Immutable root data attached to a parity pattern."""

    def __init__(self, signs):
        if isinstance(signs, str):
            signs = parse_parity(signs)
        signs = tuple(signs)
        if len(signs) < 2:
            raise RootDataError("need at least two basis directions")
        if any(s not in (1, -1) for s in signs):
            raise RootDataError("parity entries must be +1 or -1")
        self.signs = signs
        self.N = len(signs)
        self.m = sum(1 for s in signs if s == 1)
        self.n = self.N - self.m
        self.indices = tuple(range(1, self.N))
        self.cartan = tuple(
            tuple(self._pairing(i, j) for j in self.indices) for i in self.indices
        )
        # m == n: identity matrix sits inside the h_i span, det A = 0;
        # the Heisenberg layer then runs over I' = I minus its last element
        self.reduced = self.m == self.n
        self.heis_indices = self.indices[:-1] if self.reduced else self.indices
        self.heis_cartan = tuple(row[: len(self.heis_indices)] for row in self.cartan[: len(self.heis_indices)])

    def _pairing(self, i, j):
        # (alpha_i | alpha_j) with (e_a | e_b) = s_a delta_ab
        s = self.signs
        v = 0
        if i == j:
            v = s[i - 1] + s[i]
        elif j == i + 1:
            v = -s[i]
        elif i == j + 1:
            v = -s[j]
        return v

    # -- roots ---------------------------------------------------------------

    def is_positive_root(self, root) -> bool:
        return (
            isinstance(root, tuple)
            and len(root) == 2
            and all(isinstance(x, int) for x in root)
            and 1 <= root[0] < root[1] <= self.N
        )

    def check_root(self, root):
        if not self.is_positive_root(root):
            raise RootDataError(f"not a positive root: {root!r}")
        return root

    def positive_roots(self):
        return [(a, b) for a in range(1, self.N) for b in range(a + 1, self.N + 1)]

    def simple_root(self, i) -> Root:
        if i not in self.indices:
            raise RootDataError(f"simple index {i} out of range")
        return (i, i + 1)

    def root_parity(self, root) -> int:
        a, b = self.check_root(root)
        return (1 - self.signs[a - 1] * self.signs[b - 1]) // 2

    def h_diagonal(self, i):
        """Diagonal entries of h_i = [x_i^+, x_i^-] in the matrix realization."""
        if i not in self.indices:
            raise RootDataError(f"simple index {i} out of range")
        d = [0] * self.N
        d[i - 1] = 1
        d[i] = -self.signs[i - 1] * self.signs[i]
        return tuple(d)

    def simple_parity(self, i) -> int:
        return self.root_parity(self.simple_root(i))

    def simple_coefficients(self, root):
        """Expansion of a positive root over the simple roots (0/1 vector)."""
        a, b = self.check_root(root)
        return tuple(1 if a <= i < b else 0 for i in self.indices)

    def simple_chain(self, root):
        """The simple indices a, a+1, ..., b-1 whose roots sum to (a, b)."""
        a, b = self.check_root(root)
        return tuple(range(a, b))

    def root_height(self, root) -> int:
        a, b = self.check_root(root)
        return b - a

    def add_roots(self, alpha, beta):
        """alpha + beta when it is again a positive root, else None."""
        a1, b1 = alpha
        a2, b2 = beta
        if b1 == a2:
            return (a1, b2)
        if b2 == a1:
            return (a2, b1)
        return None

    # -- orders ---------------------------------------------------------------

    def compare_roots(self, alpha, beta) -> int:
        self.check_root(alpha)
        self.check_root(beta)
        return -1 if alpha < beta else (0 if alpha == beta else 1)


def compare_positions(p, p2) -> int:
    """Total order on (positive root, loop degree): root first, then degree."""
    return -1 if p < p2 else (0 if p == p2 else 1)


def height(coeffs) -> int:
    """Height of an element of the positive root lattice given by simple coefficients."""
    total = 0
    for c in coeffs:
        if c < 0 or c != int(c):
            raise RootDataError(f"not in the positive root lattice: {tuple(coeffs)}")
        total += int(c)
    return total


# ---------------------------------------------------------------------------
# exponent maps over loop positions (the ordered-monomial index)
# ---------------------------------------------------------------------------
#
# A monomial index is stored as a tuple of ((root, degree), exponent) pairs,
# sorted by increasing position, exponents > 0.


def monomial_from_items(items) -> tuple:
    agg: dict = {}
    for pos, exp in items:
        agg[pos] = agg.get(pos, 0) + exp
    out = tuple(sorted((pos, e) for pos, e in agg.items() if e))
    if any(e < 0 for _, e in out):
        raise ValueError("negative exponent in monomial index")
    return out


EMPTY_MONOMIAL: tuple = ()


def compare_monomials(m1, m2) -> int:
    """Compare exponent maps at the smallest position where they disagree."""
    i = j = 0
    while i < len(m1) and j < len(m2):
        (p1, e1), (p2, e2) = m1[i], m2[j]
        if p1 == p2:
            if e1 != e2:
                return -1 if e1 < e2 else 1
            i += 1
            j += 1
        elif p1 < p2:
            # m2 vanishes at p1, m1 does not
            return 1
        else:
            return -1
    if i < len(m1):
        return 1
    if j < len(m2):
        return -1
    return 0


def monomial_letters_desc(m):
    """Expand to single letters, largest position leftmost (the product order)."""
    out = []
    for pos, exp in reversed(m):
        out.extend([pos] * exp)
    return out


def monomial_weight(m, rd: RootData):
    """Sum of the root parts as a simple-coefficient vector."""
    coeffs = [0] * (rd.N - 1)
    for (root, _), exp in m:
        a, b = root
        for i in range(a, b):
            coeffs[i - 1] += exp
    return tuple(coeffs)


def monomial_degree(m) -> int:
    return sum(r * exp for ((_, r), exp) in m)


def monomial_height(m, rd: RootData) -> int:
    return sum(rd.root_height(root) * exp for (root, _), exp in m)


def check_monomial(m, rd: RootData):
    """Validate positions and the exponent bound 1 on odd (isotropic) roots."""
    for (root, _), exp in m:
        rd.check_root(root)
        if exp < 0:
            raise ValueError("negative exponent in monomial index")
        if exp > 1 and rd.root_parity(root) == 1:
            raise ValueError(f"odd root {root} carries exponent {exp} > 1")
    return m


# ---------------------------------------------------------------------------
# weights
# ---------------------------------------------------------------------------


class Weight:
    """A weight given by its values on the simple coroots, on c and on d."""

    __slots__ = ("h", "c", "d")

    def __init__(self, h_values, c, d=0):
        self.h = tuple(Fraction(x) for x in h_values)
        self.c = Fraction(c)
        self.d = Fraction(d)

    def is_integral(self) -> bool:
        return all(x.denominator == 1 for x in self.h)

    def __eq__(self, other):
        return (
            isinstance(other, Weight)
            and self.h == other.h
            and self.c == other.c
            and self.d == other.d
        )

    def __repr__(self):
        return f"Weight(h={[str(x) for x in self.h]}, c={self.c}, d={self.d})"


def cartan_combination(rd: RootData, target_diag):
    """Coefficients c with sum c_i h_i equal to the given diagonal, else None.

    Exact Gaussian elimination over Fractions; used both to expand loop-Cartan
    elements in the h_i basis and (for m == n) to express the identity matrix
    inside the h_i span.
    """
    cols = [rd.h_diagonal(i) for i in rd.indices]
    rows = [
        [Fraction(cols[j][r]) for j in range(len(cols))] + [Fraction(target_diag[r])]
        for r in range(rd.N)
    ]
    ncols = len(cols)
    pivots = []
    r0 = 0
    for col in range(ncols):
        piv = next((r for r in range(r0, rd.N) if rows[r][col]), None)
        if piv is None:
            continue
        rows[r0], rows[piv] = rows[piv], rows[r0]
        inv = 1 / rows[r0][col]
        rows[r0] = [x * inv for x in rows[r0]]
        for r in range(rd.N):
            if r != r0 and rows[r][col]:
                c = rows[r][col]
                rows[r] = [x - c * y for x, y in zip(rows[r], rows[r0])]
        pivots.append(col)
        r0 += 1
    for row in rows[r0:]:
        if row[-1]:
            return None
    out = [Fraction(0)] * ncols
    for rr, col in enumerate(pivots):
        out[col] = rows[rr][-1]
    return tuple(out)


def root_text(root) -> str:
    return f"e{root[0]}-e{root[1]}"


def parse_root(text: str):
    parts = text.strip().split("-")
    if len(parts) != 2 or not parts[0].startswith("e") or not parts[1].startswith("e"):
        raise RootDataError(f"bad root text {text!r}, expected like 'e1-e3'")
    return (int(parts[0][1:]), int(parts[1][1:]))
