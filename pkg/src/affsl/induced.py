"""Classical affine sl(m|n) through its matrix realization, and the modules
induced from a diagonal Heisenberg module and a weight over the natural
parabolic (Cartan + Heisenberg + full positive loop part).

Root vectors are fixed by iterated brackets of elementary matrices along
the simple chain of each positive root: the raising vector of e_a - e_b is
exactly the matrix unit E_ab, the lowering vector is a sign times E_ba, and
every structure constant below is computed from matrix arithmetic with the
supertrace pairing str(x y), never tabulated.  The affine bracket is

    [x t^m, y t^n] = [x, y] t^(m+n) + m delta_{m,-n} str(x y) c.

A module vector is a finite combination of pairs (monomial, diagonal label);
the monomial is an exponent map over (positive root, loop degree) positions
written as the product of lowering letters in decreasing position order.
Generator actions straighten products back into that shape recursively:
commuting a letter or a loop-Cartan element through the word produces
bracket correction terms with strictly fewer letters, so the recursion
terminates.
"""

from __future__ import annotations

from fractions import Fraction

from .diagonal import DiagModule, SubmoduleWitness, cyclic_return, label_degree, label_size
from .heisenberg import CLASSICAL
from .roots import (
    EMPTY_MONOMIAL,
    RootData,
    Weight,
    cartan_combination,
    check_monomial,
    compare_monomials,
    height,
    monomial_degree,
    monomial_from_items,
    monomial_letters_desc,
    monomial_weight,
)


class InducedModuleError(ValueError):
    pass


# ---------------------------------------------------------------------------
# matrix realization
# ---------------------------------------------------------------------------
#
# sparse supermatrices: dict (row, col) -> Fraction, 1-based indices


def mat_mul(x: dict, y: dict) -> dict:
    out: dict = {}
    for (a, b), u in x.items():
        for (c, d), v in y.items():
            if b == c:
                key = (a, d)
                w = out.get(key, 0) + u * v
                if w:
                    out[key] = w
                elif key in out:
                    del out[key]
    return out


def mat_sub_scaled(x: dict, y: dict, c) -> dict:
    out = dict(x)
    for k, v in y.items():
        w = out.get(k, 0) - c * v
        if w:
            out[k] = w
        elif k in out:
            del out[k]
    return out


class MatrixAlgebra:
    """Cached root-vector matrices and brackets for one parity pattern."""

    def __init__(self, rd: RootData):
        self.rd = rd
        self._xp: dict = {}
        self._xm: dict = {}

    def parity_matrix_entry(self, a, b) -> int:
        s = self.rd.signs
        return (1 - s[a - 1] * s[b - 1]) // 2

    def supertrace(self, x: dict) -> Fraction:
        s = self.rd.signs
        return sum((s[a - 1] * v for (a, b), v in x.items() if a == b), Fraction(0))

    def pair(self, x: dict, y: dict) -> Fraction:
        return self.supertrace(mat_mul(x, y))

    def bracket(self, x: dict, px: int, y: dict, py: int) -> dict:
        xy = mat_mul(x, y)
        return mat_sub_scaled(xy, mat_mul(y, x), (-1) ** (px * py))

    def xplus(self, root) -> dict:
        got = self._xp.get(root)
        if got is None:
            got = self._chain(root, plus=True)
            self._xp[root] = got
        return got

    def xminus(self, root) -> dict:
        got = self._xm.get(root)
        if got is None:
            got = self._chain(root, plus=False)
            self._xm[root] = got
        return got

    def _chain(self, root, plus: bool) -> dict:
        # iterated bracket along the increasing simple chain; for the plus
        # side this is exactly E_ab, for the minus side a sign times E_ba
        rd = self.rd
        chain = rd.simple_chain(root)
        i0 = chain[0]
        mat = {(i0, i0 + 1): Fraction(1)} if plus else {(i0 + 1, i0): Fraction(1)}
        par = rd.simple_parity(i0)
        for i in chain[1:]:
            nxt = {(i, i + 1): Fraction(1)} if plus else {(i + 1, i): Fraction(1)}
            mat = self.bracket(mat, par, nxt, rd.simple_parity(i))
            par = (par + rd.simple_parity(i)) % 2
        if not mat:
            raise InducedModuleError(f"degenerate chain bracket for root {root}")
        return mat

    def h_matrix(self, root) -> dict:
        return self.bracket(
            self.xplus(root),
            self.rd.root_parity(root),
            self.xminus(root),
            self.rd.root_parity(root),
        )

    def decompose(self, mat: dict):
        """Split a weight-homogeneous matrix into root-vector and diagonal parts.

        Returns (kind, payload): ('zero', None), ('diag', diagonal tuple),
        ('x+', (root, coeff)) or ('x-', (root, coeff)).
        """
        if not mat:
            return "zero", None
        offdiag = [(a, b) for (a, b) in mat if a != b]
        if not offdiag:
            diag = [Fraction(0)] * self.rd.N
            for (a, _), v in mat.items():
                diag[a - 1] = v
            return "diag", tuple(diag)
        if len(offdiag) != 1 or len(mat) != 1:
            raise InducedModuleError(f"matrix is not weight homogeneous: {mat}")
        (a, b), v = next(iter(mat.items()))
        if a < b:
            root = (a, b)
            base = self.xplus(root)
            kind = "x+"
        else:
            root = (b, a)
            base = self.xminus(root)
            kind = "x-"
        coeff = v / next(iter(base.values()))
        return kind, (root, coeff)


# ---------------------------------------------------------------------------
# generators
# ---------------------------------------------------------------------------
#
#   ('x+', root, degree)  ('x-', root, degree)  ('h', i, degree != 0)
#   ('cartan', i)         ('c',)                ('d',)


def generator_parity(rd: RootData, gen) -> int:
    if gen[0] in ("x+", "x-"):
        return rd.root_parity(gen[1])
    return 0


def bracket_generators(rd: RootData, alg: MatrixAlgebra, g1, g2):
    """[g1, g2] as a list of (generator, coeff), central term included."""
    k1, k2 = g1[0], g2[0]
    if k1 == "c" or k2 == "c":
        return []
    if k1 == "d" or k2 == "d":
        other, sign = (g2, 1) if k1 == "d" else (g1, -1)
        deg = _gen_degree(other)
        return [(other, Fraction(sign * deg))] if deg else []
    m1, d1 = _gen_matrix(rd, alg, g1)
    m2, d2 = _gen_matrix(rd, alg, g2)
    p1, p2 = generator_parity(rd, g1), generator_parity(rd, g2)
    mat = alg.bracket(m1, p1, m2, p2)
    out = []
    deg = d1 + d2
    kind, payload = alg.decompose(mat)
    if kind == "x+" or kind == "x-":
        root, coeff = payload
        out.append(((kind, root, deg), coeff))
    elif kind == "diag":
        if deg == 0:
            coords = cartan_combination(rd, payload)
            if coords is None:
                raise InducedModuleError("diagonal part outside the coroot span")
            out.extend(
                ((("cartan", i), c) for i, c in zip(rd.indices, coords) if c)
            )
        else:
            for i, c in _diag_in_h(rd, payload):
                out.append((("h", i, deg), c))
    if d1 + d2 == 0 and d1 != 0:
        central = alg.pair(m1, m2) * d1
        if central:
            out.append((("c",), central))
    return out


def _gen_degree(gen) -> int:
    if gen[0] in ("x+", "x-", "h"):
        return gen[2]
    return 0


def _gen_matrix(rd, alg, gen):
    if gen[0] == "x+":
        return alg.xplus(gen[1]), gen[2]
    if gen[0] == "x-":
        return alg.xminus(gen[1]), gen[2]
    if gen[0] == "h":
        return {(a, a): Fraction(v) for a, v in enumerate(rd.h_diagonal(gen[1]), 1) if v}, gen[2]
    if gen[0] == "cartan":
        return {(a, a): Fraction(v) for a, v in enumerate(rd.h_diagonal(gen[1]), 1) if v}, 0
    raise InducedModuleError(f"no matrix form for generator {gen!r}")


def _diag_in_h(rd, diag):
    coords = cartan_combination(rd, diag)
    if coords is None:
        raise InducedModuleError("diagonal part outside the coroot span")
    return [(i, c) for i, c in zip(rd.indices, coords) if c]


# ---------------------------------------------------------------------------
# induced modules
# ---------------------------------------------------------------------------


class InducedModule:
    """M(lambda, V): free over the lowering loop half, with V along the top."""

    def __init__(self, rd: RootData, weight: Weight, diag: DiagModule):
        if rd.m == rd.n:
            raise InducedModuleError(
                "induced modules need m != n (nondegenerate Cartan matrix)"
            )
        if diag.variant != CLASSICAL:
            raise InducedModuleError("induced modules take a classical diagonal module")
        if weight.c != diag.level:
            raise InducedModuleError(
                f"weight value on c ({weight.c}) must equal the module level ({diag.level})"
            )
        if weight.c == 0:
            raise InducedModuleError("level must be nonzero")
        self.rd = rd
        self.weight = weight
        self.diag = diag
        self.alg = MatrixAlgebra(rd)

    # -- letters --------------------------------------------------------------

    def _letter_parity(self, letter) -> int:
        return self.rd.root_parity(letter[0])

    def _bracket_minus_letters(self, l1, l2):
        """[x-_{l1}, x-_{l2}] as a lowering letter with coefficient, or None."""
        root1, deg1 = l1
        root2, deg2 = l2
        gamma = self.rd.add_roots(root1, root2)
        if gamma is None:
            return None
        mat = self.alg.bracket(
            self.alg.xminus(root1),
            self.rd.root_parity(root1),
            self.alg.xminus(root2),
            self.rd.root_parity(root2),
        )
        kind, payload = self.alg.decompose(mat)
        if kind == "zero":
            return None
        if kind != "x-" or payload[0] != gamma:
            raise InducedModuleError("lowering bracket left the lowering half")
        return (gamma, deg1 + deg2), payload[1]

    def _mul_letter(self, letter, word):
        """letter * word as dict {descending word: coeff}; word is descending."""
        if not word:
            return {(letter,): Fraction(1)}
        head = word[0]
        if letter >= head:
            if letter == head and self._letter_parity(letter):
                return {}
            return {(letter,) + word: Fraction(1)}
        out: dict = {}
        sign = Fraction((-1) ** (self._letter_parity(letter) * self._letter_parity(head)))
        for w, c in self._mul_letter(letter, word[1:]).items():
            if w and w[0] > head:
                raise InducedModuleError("straightening invariant violated")
            if w and w[0] == head and self._letter_parity(head):
                continue
            key = (head,) + w
            v = out.get(key, 0) + sign * c
            if v:
                out[key] = v
            elif key in out:
                del out[key]
        hit = self._bracket_minus_letters(letter, head)
        if hit is not None:
            new_letter, coeff = hit
            for w, c in self._mul_letter(new_letter, word[1:]).items():
                v = out.get(w, 0) + coeff * c
                if v:
                    out[w] = v
                elif w in out:
                    del out[w]
        return out

    def _canonical_product(self, letters):
        """Arbitrary letter list -> dict {descending word: coeff}."""
        words = {(): Fraction(1)}
        for letter in reversed(letters):
            nxt: dict = {}
            for w, c in words.items():
                for w2, c2 in self._mul_letter(letter, w).items():
                    v = nxt.get(w2, 0) + c * c2
                    if v:
                        nxt[w2] = v
                    elif w2 in nxt:
                        del nxt[w2]
            words = nxt
        return words

    @staticmethod
    def _word_to_monomial(word):
        return monomial_from_items((pos, 1) for pos in word)

    def _add_term(self, out, mono, label, coeff):
        if not coeff:
            return
        key = (mono, label)
        v = out.get(key, 0) + coeff
        if v:
            out[key] = v
        elif key in out:
            del out[key]

    # -- generator action -------------------------------------------------------

    def act(self, gen, vec: dict) -> dict:
        out: dict = {}
        for (mono, label), coeff in vec.items():
            for (m2, l2), c2 in self._act_basis(gen, mono, label).items():
                self._add_term(out, m2, l2, coeff * c2)
        return out

    def act_many(self, gens, vec: dict) -> dict:
        for gen in gens:
            vec = self.act(gen, vec)
        return vec

    def _act_basis(self, gen, mono, label) -> dict:
        kind = gen[0]
        if kind == "c":
            return {(mono, label): self.weight.c}
        if kind == "d":
            deg = monomial_degree(mono) + label_degree(label)
            return {(mono, label): self.weight.d + deg}
        if kind == "cartan":
            return {(mono, label): self._cartan_value(gen[1], mono)}
        if kind == "x-":
            letter = (gen[1], gen[2])
            self.rd.check_root(gen[1])
            out: dict = {}
            for word, c in self._mul_letter(letter, tuple(monomial_letters_desc(mono))).items():
                self._add_term(out, self._word_to_monomial(word), label, c)
            return out
        if kind == "h":
            if gen[2] == 0:
                raise InducedModuleError("loop-Cartan generator needs nonzero degree")
            diag = tuple(Fraction(x) for x in self.rd.h_diagonal(gen[1]))
            return self._act_h_diag(diag, gen[2], mono, label, direct_index=gen[1])
        if kind == "x+":
            self.rd.check_root(gen[1])
            return self._act_xplus(gen[1], gen[2], tuple(monomial_letters_desc(mono)), label)
        raise InducedModuleError(f"unknown generator {gen!r}")

    def _cartan_value(self, i, mono) -> Fraction:
        value = self.weight.h[i - 1]
        diag = self.rd.h_diagonal(i)
        for (root, _), exp in mono:
            a, b = root
            value -= exp * (diag[a - 1] - diag[b - 1])
        return value

    def _diag_eval(self, diag, root) -> Fraction:
        a, b = root
        return diag[a - 1] - diag[b - 1]

    def _act_h_diag(self, diag, r, mono, label, direct_index=None) -> dict:
        """Action of (diagonal h) t^r, r != 0, on a basis pair."""
        letters = tuple(monomial_letters_desc(mono))
        out: dict = {}
        # commute through the word: [h t^r, x-_{beta,k}] = -beta(h) x-_{beta,k+r}
        for t, letter in enumerate(letters):
            root, deg = letter
            val = self._diag_eval(diag, root)
            if not val:
                continue
            rest = letters[:t] + letters[t + 1:]
            shifted = (root, deg + r)
            for word, c in self._canonical_product([shifted] + list(rest)).items():
                self._add_term(out, self._word_to_monomial(word), label, -val * c)
        # then the Heisenberg action on the diagonal label
        if direct_index is not None and direct_index in self.rd.heis_indices:
            hits = [(direct_index, Fraction(1))]
        else:
            hits = _diag_in_h(self.rd, diag)
        for i, c in hits:
            for l2, c2 in self.diag.h_act(i, r, {label: Fraction(1)}).items():
                self._add_term(out, mono, l2, c * c2)
        return out

    def _act_xplus(self, root, ell, letters, label) -> dict:
        """x+_{root, ell} moved through a descending word onto the label."""
        out: dict = {}
        if not letters:
            return out  # raising half annihilates 1 (x) V
        p_gen = self.rd.root_parity(root)
        sign = Fraction(1)
        xp = self.alg.xplus(root)
        for t, letter in enumerate(letters):
            beta, k = letter
            p_let = self.rd.root_parity(beta)
            mat = self.alg.bracket(xp, p_gen, self.alg.xminus(beta), p_let)
            deg = ell + k
            kind, payload = self.alg.decompose(mat)
            prefix = list(letters[:t])
            suffix = letters[t + 1:]
            if kind == "x-":
                g_root, coeff = payload
                for word, c in self._canonical_product(
                    prefix + [(g_root, deg)] + list(suffix)
                ).items():
                    self._add_term(out, self._word_to_monomial(word), label, sign * coeff * c)
            elif kind == "x+":
                g_root, coeff = payload
                inner = self._act_xplus(g_root, deg, suffix, label)
                for (m2, l2), c2 in inner.items():
                    for word, c3 in self._canonical_product(
                        prefix + monomial_letters_desc(m2)
                    ).items():
                        self._add_term(
                            out, self._word_to_monomial(word), l2, sign * coeff * c2 * c3
                        )
            elif kind == "diag":
                diag = payload
                if deg == 0:
                    # Cartan eigenvalue of the suffix piece plus the central term
                    value = self._weight_eval(diag)
                    for (b_root, _) in suffix:
                        value -= self._diag_eval(diag, b_root)
                    central = self.alg.pair(xp, self.alg.xminus(beta)) * ell
                    value = value + central * self.weight.c
                    for word, c in self._canonical_product(list(prefix) + list(suffix)).items():
                        self._add_term(out, self._word_to_monomial(word), label, sign * value * c)
                else:
                    suffix_mono = self._word_to_monomial(suffix)
                    inner = self._act_h_diag(diag, deg, suffix_mono, label)
                    for (m2, l2), c2 in inner.items():
                        for word, c3 in self._canonical_product(
                            prefix + monomial_letters_desc(m2)
                        ).items():
                            self._add_term(out, self._word_to_monomial(word), l2, sign * c2 * c3)
            if p_gen and p_let:
                sign = -sign
        return out

    def _weight_eval(self, diag) -> Fraction:
        # lambda is stored on the h_i basis; expand the diagonal over it
        coords = cartan_combination(self.rd, diag)
        if coords is None:
            raise InducedModuleError("diagonal part outside the coroot span")
        value = Fraction(0)
        for x, c in zip(self.weight.h, coords):
            value += x * c
        return value
