"""The loop-Cartan (Heisenberg) layer, classical and q-deformed.

Generators H(i, r) with i a simple index and r a nonzero loop degree, a
central element, and the grading operator.  The bracket is

    classical:  [h_{i,r}, h_{j,s}] = delta_{r,-s} * r * A_ij * c
    quantum:    [H_{i,r}, H_{j,s}] = delta_{r,-s} * [r A_ij] * [r c] / r

with [k] the symmetric q-integer.  In the quantum case the central value
[r c] is kept symbolic (a formal bracket of the central exponent) until a
level a is imposed, at which point it becomes the scalar [r a].

The phi generators diagonalize the pairing: phi_{i,r} = H_{i,r} for r > 0,
and for r > 0 the vector (phi_{i,-r})_i is B(r) (H_{j,-r})_j with
B(r) = r * (A(r)^T)^{-1}, where A(r) = ([r A_ij]) in the quantum case and
r * A in the classical one.  Then [phi_{i,r}, phi_{j,s}] is
delta_ij delta_{r,-s} [r c] (or delta_ij delta_{r,-s} r c classically).

When m == n the full Cartan matrix is singular and everything here runs
over the reduced index set of the root data.
"""

from __future__ import annotations

from fractions import Fraction

from . import scalars
from .linalg import invert_matrix
from .roots import RootData

CLASSICAL = "classical"
QUANTUM = "quantum"


def field_one(variant):
    return Fraction(1) if variant == CLASSICAL else scalars.ONE


def field_coerce(variant, value):
    if variant == CLASSICAL:
        if isinstance(value, scalars.Scalar):
            raise TypeError("quantum scalar in a classical element")
        return Fraction(value)
    return scalars.Scalar.coerce(value)


class HeisElement:
    """Finitely supported combination of H(i, r) generators plus a central part.

    ``h`` maps (i, r) to a coefficient.  ``center`` maps r > 0 to the
    coefficient of the symbolic [r c] in the quantum case; classically it
    holds a single key 0 with the coefficient of c.
    """

    __slots__ = ("variant", "h", "center")

    def __init__(self, variant, h=None, center=None):
        if variant not in (CLASSICAL, QUANTUM):
            raise ValueError(f"unknown variant {variant!r}")
        self.variant = variant
        self.h = {k: v for k, v in (h or {}).items() if v}
        self.center = {k: v for k, v in (center or {}).items() if v}

    @classmethod
    def generator(cls, variant, i, r):
        if r == 0:
            raise ValueError("loop degree of a Heisenberg generator must be nonzero")
        return cls(variant, {(i, r): field_one(variant)})

    @classmethod
    def central(cls, variant, r, coeff=1):
        coeff = field_coerce(variant, coeff)
        if variant == CLASSICAL:
            return cls(variant, center={0: coeff})
        if r <= 0:
            raise ValueError("central bracket symbol [r c] needs r > 0")
        return cls(variant, center={r: coeff})

    def _check_mate(self, other):
        if not isinstance(other, HeisElement) or other.variant != self.variant:
            raise TypeError("mixing classical and quantum Heisenberg elements")

    def __add__(self, other):
        self._check_mate(other)
        h = dict(self.h)
        for k, v in other.h.items():
            h[k] = h.get(k, 0) + v
        center = dict(self.center)
        for k, v in other.center.items():
            center[k] = center.get(k, 0) + v
        return HeisElement(self.variant, h, center)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, coeff):
        coeff = field_coerce(self.variant, coeff)
        return HeisElement(
            self.variant,
            {k: coeff * v for k, v in self.h.items()},
            {k: coeff * v for k, v in self.center.items()},
        )

    def is_zero(self):
        return not self.h and not self.center

    def __eq__(self, other):
        return (
            isinstance(other, HeisElement)
            and self.variant == other.variant
            and self.h == other.h
            and self.center == other.center
        )

    def qd_conjugate(self):
        """q^d x q^-d: scales each H(i, r) by q^r; the center is fixed."""
        if self.variant != QUANTUM:
            raise TypeError("qd_conjugate is a quantum operation")
        return HeisElement(
            QUANTUM,
            {(i, r): scalars.q_power(r) * v for (i, r), v in self.h.items()},
            dict(self.center),
        )

    def d_bracket(self):
        """[d, x] in the classical algebra: multiplies H(i, r) by r."""
        if self.variant != CLASSICAL:
            raise TypeError("d_bracket is a classical operation")
        return HeisElement(CLASSICAL, {(i, r): r * v for (i, r), v in self.h.items()})

    def center_value(self, level: int):
        """The central part as a field element once c acts by the level."""
        if level == 0:
            raise ValueError("level must be nonzero")
        if self.variant == CLASSICAL:
            return Fraction(level) * self.center.get(0, Fraction(0))
        total = scalars.ZERO
        for r, coeff in self.center.items():
            total = total + coeff * scalars.qnum(r * level)
        return total

    def __repr__(self):
        return f"HeisElement({self.variant}, h={self.h}, center={self.center})"


def heis_bracket(x: HeisElement, y: HeisElement, rd: RootData) -> HeisElement:
    """Bracket of two elements; the result is purely central."""
    x._check_mate(y)
    variant = x.variant
    center: dict = {}
    for (i, r), ci in x.h.items():
        for (j, s), cj in y.h.items():
            if r + s != 0:
                continue
            a_ij = rd.cartan[i - 1][j - 1]
            if variant == CLASSICAL:
                term = ci * cj * r * a_ij
                if term:
                    center[0] = center.get(0, Fraction(0)) + term
            else:
                if a_ij == 0:
                    continue
                # [H_{i,r}, H_{j,-r}] = [r A_ij][r c]/r; with [r c] = sign(r)[|r| c]
                # the sign of r cancels against the 1/r
                coeff = ci * cj * scalars.qnum(r * a_ij) * Fraction(1, abs(r))
                if coeff:
                    key = abs(r)
                    center[key] = center.get(key, scalars.ZERO) + coeff
    return HeisElement(variant, {}, center)


class PhiTable:
    """The change of basis between H and phi generators up to a loop depth.

    ``rows(r)[i]`` lists the (j, coeff) pairs with
    phi_{i,-r} = sum_j coeff * H_{j,-r} for r = 1, ..., depth, indexed by
    position in the (possibly reduced) Heisenberg index set.
    """

    def __init__(self, rd: RootData, depth: int, variant=QUANTUM, level=None):
        if depth < 1:
            raise ValueError("depth must be at least 1")
        if level is not None and level == 0:
            raise ValueError("level must be nonzero")
        self.rd = rd
        self.depth = depth
        self.variant = variant
        self.level = level
        self.indices = rd.heis_indices
        self._b = {}
        self._binv = {}
        one = field_one(variant)
        n = len(self.indices)
        for r in range(1, depth + 1):
            if variant == QUANTUM:
                a_r = [
                    [scalars.qnum(r * rd.heis_cartan[i][j]) for j in range(n)]
                    for i in range(n)
                ]
            else:
                a_r = [
                    [Fraction(r * rd.heis_cartan[i][j]) for j in range(n)]
                    for i in range(n)
                ]
            try:
                inv_t = invert_matrix([list(col) for col in zip(*a_r)], one)
            except ArithmeticError:
                raise ArithmeticError(
                    f"deformed Cartan matrix singular at loop degree {r}"
                ) from None
            self._b[r] = [[x * r for x in row] for row in inv_t]
            # H_{i,-r} = sum_j (A(r)^T / r)_{ij} phi_{j,-r}
            self._binv[r] = [[a_r[j][i] / r for j in range(n)] for i in range(n)]

    def _slot(self, i):
        try:
            return self.indices.index(i)
        except ValueError:
            raise ValueError(f"index {i} outside the Heisenberg index set") from None

    def phi_in_h(self, i, r):
        """phi_{i,r} as list of ((j, r), coeff)."""
        if r == 0 or abs(r) > self.depth:
            raise ValueError(f"loop degree {r} outside table depth {self.depth}")
        if r > 0:
            return [((i, r), field_one(self.variant))]
        row = self._b[-r][self._slot(i)]
        return [((self.indices[j], r), c) for j, c in enumerate(row) if c]

    def h_in_phi(self, i, r):
        """H_{i,r} as list of ((j, r), coeff) over phi generators."""
        if r == 0 or abs(r) > self.depth:
            raise ValueError(f"loop degree {r} outside table depth {self.depth}")
        if r > 0:
            return [((i, r), field_one(self.variant))]
        row = self._binv[-r][self._slot(i)]
        return [((self.indices[j], r), c) for j, c in enumerate(row) if c]

    def phi_element(self, i, r) -> HeisElement:
        return HeisElement(self.variant, dict(self.phi_in_h(i, r)))


def verify_phi_relations(table: PhiTable, window: int) -> dict:
    """Check [phi_{i,r}, phi_{j,s}] = delta_ij delta_{r,-s} [r c] on the window.

    Also checks that every phi is homogeneous of its loop degree, which is
    the grading statement q^d phi_{i,r} q^-d = q^r phi_{i,r}.
    """
    if window > table.depth:
        raise ValueError("window exceeds table depth")
    rd = table.rd
    variant = table.variant
    mismatches = []
    checked = 0
    degrees = [r for r in range(-window, window + 1) if r]
    for i in table.indices:
        for j in table.indices:
            for r in degrees:
                for s in degrees:
                    got = heis_bracket(table.phi_element(i, r), table.phi_element(j, s), rd)
                    if i == j and r == -s:
                        if variant == CLASSICAL:
                            want = HeisElement(CLASSICAL, center={0: Fraction(r)})
                        else:
                            want = HeisElement(
                                QUANTUM,
                                center={abs(r): scalars.Scalar(1 if r > 0 else -1)},
                            )
                    else:
                        want = HeisElement(variant)
                    checked += 1
                    if got != want:
                        mismatches.append(
                            {"i": i, "j": j, "r": r, "s": s, "got": repr(got), "want": repr(want)}
                        )
    grading_ok = all(
        len({r for (_, r) in table.phi_element(i, s).h}) == 1
        for i in table.indices
        for s in degrees
    )
    return {
        "variant": variant,
        "window": window,
        "checked": checked,
        "mismatches": mismatches,
        "grading_homogeneous": grading_ok,
        "pass": not mismatches and grading_ok,
    }
