"""Diagonal modules over the (q-)Heisenberg layer.

A diagonal module of level a is spanned by vectors

    phi_{i1, s1 k1}^{p1} ... phi_{il, sl kl}^{pl} . v

labelled by a finitely supported choice of sign and positive power per slot
(i, k), i a Heisenberg index, k > 0.  A label never mixes phi_{i,k} and
phi_{i,-k}.  The generator action on a label touches a single slot:

    same sign      -> power + 1                       (coefficient 1)
    opposite sign  -> power - 1, coefficient
                      mu_{i,k} - p [ka]   when the slot holds plus powers,
                      mu_{i,k} + (p-1)[ka] when it holds minus powers,

with [ka] the q-integer at the level (plain k*a classically).  The degree
of a label is the signed sum of power * k over its slots.

Eigenvalue tables are finitely many stored entries over a default rule:
"generic" (a value provably never in the lattice [ka]Z and never zero),
a constant, or a Verma rule assigning [ka] or 0 per the sign to kill.
A defect slot (i, k) with integer quotient t = mu_{i,k}/[ka] truncates one
direction: plus powers stop at t - 1 when t > 0, minus powers stop at -t
when t <= 0; stepping past the wall gives zero.
"""

from __future__ import annotations

from fractions import Fraction

from . import scalars
from .heisenberg import CLASSICAL, QUANTUM, PhiTable
from .roots import RootData, cartan_combination

FULL_DEFECTS = "all"


class DiagModuleError(ValueError):
    pass


# ---------------------------------------------------------------------------
# eigenvalue tables
# ---------------------------------------------------------------------------


class EigenvalueTable:
    """Level, finitely many stored eigenvalues, and a default rule.

    default is one of ("generic",), ("constant", value), ("verma", sign).
    """

    def __init__(self, variant, level, entries=None, default=("generic",)):
        if variant not in (CLASSICAL, QUANTUM):
            raise DiagModuleError(f"unknown variant {variant!r}")
        if not isinstance(level, int) or level == 0:
            raise DiagModuleError("level must be a nonzero integer")
        self.variant = variant
        self.level = level
        kind = default[0]
        if kind == "constant":
            default = ("constant", self._coerce(default[1]))
        elif kind == "verma":
            if default[1] not in (1, -1):
                raise DiagModuleError("verma default needs sign +1 or -1")
        elif kind != "generic":
            raise DiagModuleError(f"unknown default rule {default!r}")
        self.default = default
        self.entries = {}
        for (i, k), v in (entries or {}).items():
            if k <= 0:
                raise DiagModuleError(f"eigenvalue slot ({i},{k}) needs k > 0")
            self.entries[(i, k)] = self._coerce(v)

    def _coerce(self, v):
        if self.variant == QUANTUM:
            if isinstance(v, str):
                return scalars.parse_scalar(v)
            return scalars.Scalar.coerce(v)
        if isinstance(v, scalars.Scalar):
            raise DiagModuleError("quantum scalar in a classical table")
        return Fraction(v)

    def lattice_unit(self, k: int):
        """[k a] in the quantum case, k*a classically."""
        if self.variant == QUANTUM:
            return scalars.qnum(k * self.level)
        return Fraction(k * self.level)

    def value(self, i, k):
        stored = self.entries.get((i, k))
        if stored is not None:
            return stored
        kind = self.default[0]
        if kind == "constant":
            return self.default[1]
        if kind == "verma":
            return self.lattice_unit(k) if self.default[1] == 1 else self._coerce(0)
        # generic: a half-integer constant, distinct per slot, never in [ka]Z
        return self._coerce(Fraction(2 * (i + k) + 1, 2))

    def lattice_quotient(self, i, k):
        """Integer t with mu_{i,k} = t [ka], or None when there is none."""
        if (i, k) not in self.entries and self.default[0] == "generic":
            return None
        v = self.value(i, k)
        if self.variant == QUANTUM:
            if v.is_zero():
                return 0
            return (v / self.lattice_unit(k)).as_integer()
        t = v / self.lattice_unit(k)
        return int(t) if t.denominator == 1 else None

    def classical_table(self):
        """The q = 1 shadow; errors on entries with a pole at 1."""
        if self.variant == CLASSICAL:
            return self
        kind = self.default[0]
        if kind == "constant":
            default = ("constant", self.default[1].specialize_at_1())
        else:
            default = self.default
        entries = {slot: v.specialize_at_1() for slot, v in self.entries.items()}
        return EigenvalueTable(CLASSICAL, self.level, entries, default)

    def limit_faithful(self) -> bool:
        """No stored eigenvalue (nor a constant default) has a pole at q = 1."""
        if self.variant == CLASSICAL:
            return True
        if self.default[0] == "constant" and not self.default[1].in_A():
            return False
        return all(v.in_A() for v in self.entries.values())


def reducibility_set(table: EigenvalueTable, search_bound: int) -> dict:
    """All slots (i, k) with k <= bound whose eigenvalue lies in [ka]Z.

    Returns a dict slot -> integer quotient t.  The indices scanned are the
    stored slots plus, unless the default is generic, every slot up to the
    bound over the root-data index range implied by the stored entries.
    """
    out = {}
    slots = {s for s in table.entries if s[1] <= search_bound}
    if table.default[0] != "generic":
        idx = {i for i, _ in table.entries}
        idx.update(getattr(table, "index_hint", ()) or ())
        for i in sorted(idx):
            for k in range(1, search_bound + 1):
                slots.add((i, k))
    for slot in sorted(slots):
        t = table.lattice_quotient(*slot)
        if t is not None:
            out[slot] = t
    return out


# ---------------------------------------------------------------------------
# modules, labels, vectors
# ---------------------------------------------------------------------------
#
# label: tuple of (i, k, sign, power) sorted by (i, k); vectors: label -> coeff


EMPTY_LABEL: tuple = ()


def label_degree(label) -> int:
    return sum(s * k * p for (_, k, s, p) in label)


def label_size(label) -> int:
    return sum(k * p for (_, k, _, p) in label)


class DiagModule:
    """A diagonal module V(mu, a, F) over the root data's Heisenberg indices."""

    def __init__(self, rd: RootData, table: EigenvalueTable, defects=frozenset()):
        self.rd = rd
        self.table = table
        table.index_hint = rd.heis_indices
        self.variant = table.variant
        self.level = table.level
        if defects != FULL_DEFECTS:
            defects = frozenset(defects)
            for slot in defects:
                if table.lattice_quotient(*slot) is None:
                    raise DiagModuleError(
                        f"defect slot {slot} has eigenvalue outside the lattice [ka]Z"
                    )
        self.defects = defects
        self._phi_tables: dict[int, PhiTable] = {}

    # -- structure ----------------------------------------------------------

    def zero(self):
        return Fraction(0) if self.variant == CLASSICAL else scalars.ZERO

    def one(self):
        return Fraction(1) if self.variant == CLASSICAL else scalars.ONE

    def defect_quotient(self, i, k):
        """t when (i, k) is an active defect slot, else None."""
        if self.defects == FULL_DEFECTS:
            return self.table.lattice_quotient(i, k)
        if (i, k) in self.defects:
            return self.table.lattice_quotient(i, k)
        return None

    def max_power(self, i, k, sign):
        """Largest allowed power in the sign direction, None if unbounded."""
        t = self.defect_quotient(i, k)
        if t is None:
            return None
        if t > 0:
            return t - 1 if sign == 1 else None
        return -t if sign == -1 else None

    def check_label(self, label):
        seen = set()
        for (i, k, s, p) in label:
            if i not in self.rd.heis_indices or k <= 0 or s not in (1, -1) or p <= 0:
                raise DiagModuleError(f"malformed label slot {(i, k, s, p)}")
            if (i, k) in seen:
                raise DiagModuleError(f"duplicate slot ({i},{k}) in label")
            seen.add((i, k))
            bound = self.max_power(i, k, s)
            if bound is not None and p > bound:
                raise DiagModuleError(
                    f"label power {p} exceeds quotient bound {bound} at {(i, k, s)}"
                )
        return tuple(sorted(label))

    # -- single-generator action --------------------------------------------

    def phi_act_label(self, i, sk, label):
        """phi_{i, sk} applied to one label: (new_label, coeff) or None for zero."""
        if sk == 0:
            raise DiagModuleError("phi generator needs a nonzero degree")
        k, sign = abs(sk), (1 if sk > 0 else -1)
        if i not in self.rd.heis_indices:
            raise DiagModuleError(f"index {i} outside the Heisenberg index set")
        slot = None
        for idx, (ii, kk, s, p) in enumerate(label):
            if (ii, kk) == (i, k):
                slot = (idx, s, p)
                break
        if slot is None:
            bound = self.max_power(i, k, sign)
            if bound is not None and bound < 1:
                return None
            new = tuple(sorted(label + ((i, k, sign, 1),)))
            return new, self.one()
        idx, s, p = slot
        if s == sign:
            bound = self.max_power(i, k, sign)
            if bound is not None and p + 1 > bound:
                return None
            new = label[:idx] + ((i, k, s, p + 1),) + label[idx + 1:]
            return new, self.one()
        # opposite sign lowers the power with the eigenvalue coefficient
        mu = self.table.value(i, k)
        unit = self.table.lattice_unit(k)
        coeff = mu - p * unit if s == 1 else mu + (p - 1) * unit
        if not coeff:
            return None
        if p == 1:
            new = label[:idx] + label[idx + 1:]
        else:
            new = label[:idx] + ((i, k, s, p - 1),) + label[idx + 1:]
        return new, coeff

    def phi_act(self, i, sk, vec: dict) -> dict:
        out: dict = {}
        for label, c in vec.items():
            hit = self.phi_act_label(i, sk, label)
            if hit is None:
                continue
            new, coeff = hit
            val = out.get(new)
            val = c * coeff if val is None else val + c * coeff
            if val:
                out[new] = val
            elif new in out:
                del out[new]
        return out

    def _phi_table(self, depth: int) -> PhiTable:
        got = self._phi_tables.get(depth)
        if got is None:
            got = PhiTable(self.rd, depth, self.variant, self.level)
            self._phi_tables[depth] = got
        return got

    def h_act(self, i, r, vec: dict) -> dict:
        """Action of the loop-Cartan generator H(i, r), r != 0."""
        if r == 0:
            raise DiagModuleError("H generator needs a nonzero degree")
        if i in self.rd.heis_indices:
            combos = [(i, self.one())]
        elif i in self.rd.indices and self.rd.reduced:
            # m == n: the identity matrix z sits in the h_i span and z_r acts
            # by zero, so the last generator reduces to the others
            gamma = cartan_combination(self.rd, (1,) * self.rd.N)
            if gamma is None or not gamma[i - 1]:
                raise DiagModuleError("cannot reduce generator through the center")
            scale = -1 / gamma[i - 1]
            combos = [
                (j, self._coerce_field(gamma[j - 1] * scale))
                for j in self.rd.heis_indices
                if gamma[j - 1]
            ]
        else:
            raise DiagModuleError(f"index {i} outside the simple index set")
        table = self._phi_table(abs(r))
        out: dict = {}
        for j, cj in combos:
            for (jj, rr), coeff in table.h_in_phi(j, r):
                part = self.phi_act(jj, rr, vec)
                for label, c in part.items():
                    val = out.get(label, self.zero()) + c * coeff * cj
                    if val:
                        out[label] = val
                    elif label in out:
                        del out[label]
        return out

    def _coerce_field(self, v):
        return Fraction(v) if self.variant == CLASSICAL else scalars.Scalar.coerce(v)

    # -- enumeration ---------------------------------------------------------

    def labels_up_to(self, max_size: int, max_k: int | None = None):
        """All legal labels with sum p*k <= max_size and k <= max_k."""
        max_k = max_size if max_k is None else max_k
        slots = [
            (i, k)
            for i in self.rd.heis_indices
            for k in range(1, min(max_size, max_k) + 1)
        ]
        out = []

        def rec(idx, budget, acc):
            if idx == len(slots):
                out.append(tuple(acc))
                return
            i, k = slots[idx]
            rec(idx + 1, budget, acc)
            for sign in (1, -1):
                bound = self.max_power(i, k, sign)
                p = 1
                while p * k <= budget and (bound is None or p <= bound):
                    acc.append((i, k, sign, p))
                    rec(idx + 1, budget - p * k, acc)
                    acc.pop()
                    p += 1

        rec(0, max_size, [])
        return sorted(set(self.check_label(l) for l in out))

    def graded_dim(self, degree: int, bound: int):
        """Count of legal labels with the exact degree, within the bound.

        The count is the full graded dimension exactly when the module is a
        constant-direction Verma quotient (second return value); otherwise it
        is the enumeration-window count of an infinite-dimensional space.
        """
        labels = [l for l in self.labels_up_to(bound) if label_degree(l) == degree]
        finite = False
        if self.defects == FULL_DEFECTS and self.table.default[0] == "verma":
            signs = {self.table.default[1]}
            for (i, k) in self.table.entries:
                t = self.table.lattice_quotient(i, k)
                signs.add(1 if t is not None and t > 0 else -1)
            finite = len(signs) == 1
        return len(labels), finite


def is_irreducible(module: DiagModule, search_bound: int) -> bool:
    """Lemma criterion: every lattice slot up to the bound must be quotiented."""
    if module.defects == FULL_DEFECTS:
        return True
    bad = reducibility_set(module.table, search_bound)
    return all(slot in module.defects for slot in bad)


def phi_verma(rd: RootData, sign_default: int, level: int, variant=QUANTUM, exceptions=None) -> DiagModule:
    """The Verma-type diagonal module killing phi_{i, sign(i,k) k} per slot.

    ``sign_default`` with finitely many ``exceptions`` {(i, k): sign} gives the
    killed direction; internally the slot eigenvalue is [ka] (kill plus) or 0
    (kill minus) and every slot is quotiented.
    """
    if sign_default not in (1, -1):
        raise DiagModuleError("sign must be +1 or -1")
    entries = {}
    for (i, k), s in (exceptions or {}).items():
        if s == sign_default:
            continue
        unit = scalars.qnum(k * level) if variant == QUANTUM else Fraction(k * level)
        entries[(i, k)] = unit if s == 1 else 0
    table = EigenvalueTable(variant, level, entries, ("verma", sign_default))
    return DiagModule(rd, table, FULL_DEFECTS)


# ---------------------------------------------------------------------------
# eigenvalue signatures, isolation, return to the cyclic vector
# ---------------------------------------------------------------------------


def pair_eigenvalue(module: DiagModule, label, i, k):
    """Eigenvalue of phi_{i,k} phi_{i,-k} (lower, then raise) on a label."""
    mu = module.table.value(i, k)
    unit = module.table.lattice_unit(k)
    for (ii, kk, s, p) in label:
        if (ii, kk) == (i, k):
            return mu - p * unit if s == 1 else mu + p * unit
    return mu


def apply_word(module: DiagModule, word, vec: dict) -> dict:
    """Apply a tuple of (i, sk) generators, first entry first."""
    for (i, sk) in word:
        vec = module.phi_act(i, sk, vec)
    return vec


def apply_steps(module: DiagModule, steps, vec: dict) -> dict:
    """Replay a cyclic-return program: phi steps and operator polynomials."""
    for step in steps:
        if step[0] == "phi":
            _, i, sk = step
            vec = module.phi_act(i, sk, vec)
        elif step[0] == "poly":
            total: dict = {}
            for coeff, word in step[1]:
                part = apply_word(module, word, vec)
                for label, c in part.items():
                    val = total.get(label, module.zero()) + coeff * c
                    if val:
                        total[label] = val
                    elif label in total:
                        del total[label]
            vec = total
        else:
            raise DiagModuleError(f"unknown step kind {step[0]!r}")
    return vec


def iso_test(mu: EigenvalueTable, nu: EigenvalueTable, defects, search_bound: int):
    """Decide V(mu, a, F) ~ V(nu, a, F) and produce the shift witness.

    Returns (True, witness) with witness a list of (i, k, n) shift counts,
    meaning the eigenvalue at slot (i, k) moves by n lattice units, or
    (False, reason).  Conditions checked: identical defect landscapes and
    quotient sets up to the bound, equal default rules, finitely many
    differing entries all congruent modulo the lattice, and matching forced
    sign classes on the common defect landscape.
    """
    if mu.variant != nu.variant or mu.level != nu.level:
        return False, "different variant or level"
    f_mu = reducibility_set(mu, search_bound)
    f_nu = reducibility_set(nu, search_bound)
    if set(f_mu) != set(f_nu):
        return False, f"defect-set mismatch: {sorted(f_mu)} vs {sorted(f_nu)}"
    if defects != FULL_DEFECTS and not set(defects) <= set(f_mu):
        return False, "F is not contained in the common defect landscape"
    if mu.default != nu.default:
        return False, "default rules differ"
    witness = []
    for slot in sorted(set(mu.entries) | set(nu.entries)):
        a = mu.value(*slot)
        b = nu.value(*slot)
        if a == b:
            continue
        diff = b - a
        unit = mu.lattice_unit(slot[1])
        if mu.variant == QUANTUM:
            n = (diff / unit).as_integer()
        else:
            t = diff / unit
            n = int(t) if t.denominator == 1 else None
        if n is None:
            return False, f"eigenvalues at {slot} differ by a non-lattice amount"
        witness.append((slot[0], slot[1], n))
    for slot, t_mu in f_mu.items():
        if (t_mu > 0) != (f_nu[slot] > 0):
            return False, f"forced signs disagree at {slot}"
    return True, witness


def verify_iso_witness(mu: EigenvalueTable, nu: EigenvalueTable, rd: RootData, witness) -> bool:
    """Replay a shift witness as a basis map and compare eigenvalues.

    The witness sends the mu cyclic vector to the product of phi_{i, sk}^|n|
    over its entries inside the nu module; the image label must be legal
    there and its pair eigenvalues must reproduce the mu table.
    """
    module_nu = DiagModule(rd, nu, FULL_DEFECTS)
    label = []
    for (i, k, n) in witness:
        if n:
            label.append((i, k, 1 if n > 0 else -1, abs(n)))
    try:
        label = module_nu.check_label(tuple(label))
    except DiagModuleError:
        return False
    for (i, k, _, _) in label:
        if pair_eigenvalue(module_nu, label, i, k) != mu.value(i, k):
            return False
    return True


def invariant_subspace_probe(module: DiagModule, max_size: int, max_k: int):
    """Brute-force search for a proper invariant subspace in a window.

    The window is the span of all legal labels with total size <= max_size,
    k <= max_k, and the operators are phi_{i, +-k}, k <= max_k, projected
    back to the window.  Labels are joint eigenvectors of the commuting
    pair operators with pairwise distinct eigenvalue signatures (checked),
    so every invariant subspace of the projected system is spanned by the
    labels it contains and closure reduces to graph reachability.

    Returns None when no proper invariant subspace exists in the window,
    else the sorted label list spanning one.
    """
    labels = module.labels_up_to(max_size, max_k)
    index = {l: n for n, l in enumerate(labels)}
    signature = {}
    for l in labels:
        sig = tuple(
            pair_eigenvalue(module, l, i, k)
            for i in module.rd.heis_indices
            for k in range(1, max_k + 1)
        )
        if sig in signature:
            raise DiagModuleError(
                f"labels {signature[sig]} and {l} share an eigenvalue signature"
            )
        signature[sig] = l
    ops = [
        (i, s * k)
        for i in module.rd.heis_indices
        for k in range(1, max_k + 1)
        for s in (1, -1)
    ]
    edges: list[list[int]] = [[] for _ in labels]
    for l, n in index.items():
        for (i, sk) in ops:
            hit = module.phi_act_label(i, sk, l)
            if hit is None:
                continue
            new, coeff = hit
            tgt = index.get(new)
            if tgt is not None and coeff:
                edges[n].append(tgt)
    full = len(labels)
    for start in range(full):
        seen = {start}
        stack = [start]
        while stack:
            cur = stack.pop()
            for nxt in edges[cur]:
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        if len(seen) < full:
            return sorted(labels[n] for n in seen)
    return None


class SubmoduleWitness(Exception):
    """A vector generating a proper submodule, found during cyclic return."""

    def __init__(self, vector, slot, detail):
        super().__init__(detail)
        self.vector = vector
        self.slot = slot


def cyclic_return(module: DiagModule, vec: dict):
    """A program of steps sending vec to scalar * (cyclic vector), scalar != 0.

    First isolates a single label with eigenvalue projections of the
    commuting operator family phi_{i,k} phi_{i,-k} (labels have pairwise
    distinct joint eigenvalues), then lowers that label slot by slot.
    Raises SubmoduleWitness when a lowering coefficient vanishes, which
    happens exactly when the module is reducible in the touched slot.
    """
    vec = {l: c for l, c in vec.items() if c}
    if not vec:
        raise DiagModuleError("cyclic return of the zero vector")
    target = min(vec, key=lambda l: (label_size(l), l))
    steps = []
    current = dict(vec)
    while len(current) > 1:
        other = next(l for l in sorted(current) if l != target)
        slot = None
        for (i, k, _, _) in other + target:
            ev_t = pair_eigenvalue(module, target, i, k)
            ev_o = pair_eigenvalue(module, other, i, k)
            if ev_t != ev_o:
                slot = (i, k, ev_t, ev_o)
                break
        if slot is None:
            raise DiagModuleError(
                f"labels {target} and {other} share all pair eigenvalues"
            )
        i, k, ev_t, ev_o = slot
        denom = ev_t - ev_o
        poly = (
            (module.one() / denom, ((i, -k), (i, k))),
            (-ev_o / denom, ()),
        )
        step = ("poly", poly)
        current = apply_steps(module, [step], current)
        steps.append(step)
        if target not in current:
            raise DiagModuleError("projection lost the target label")
    for (i, k, s, p) in sorted(target):
        for _ in range(p):
            hit = module.phi_act_label(i, -s * k, next(iter(current)))
            if hit is None:
                raise SubmoduleWitness(
                    current,
                    (i, k),
                    f"lowering phi_({i},{-s * k}) annihilates the vector: "
                    f"slot ({i},{k}) sits on a lattice wall",
                )
            steps.append(("phi", i, -s * k))
            current = apply_steps(module, [steps[-1]], current)
    (final_label, final_coeff), = current.items()
    if final_label != EMPTY_LABEL:
        raise DiagModuleError("cyclic return did not land on the cyclic vector")
    return steps, final_coeff
