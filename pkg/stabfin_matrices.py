#!/usr/bin/env python3
"""
stabfin Matrices

Square matrices over coefficient rings and group rings, block upper-triangular
subrings, unitriangular inversion by doubling, Hensel lifting of left inverses,
and direct-finiteness checks and searches.

Right inverses over F_q[G] are found by unfolding XY = I into a linear system
over F_q on the positions of a support window and row reducing it with galois.
For infinite G a miss only means "not found inside the window".

Usage as a library:
    from stabfin_matrices import matrix, identity, check_df_pair
    X = matrix(F2, [[1, 1], [0, 1]])
"""

import logging
import math
from dataclasses import dataclass
from itertools import product

import numpy as np

from stabfin_config import DEFAULT_BUDGET, DEFAULT_WINDOW, SAMPLE_PAIRS, make_rng
from stabfin_errors import (
    BudgetExceeded, Mismatch, NotCongruentModP, NotOneSidedPair, NotUnitriangular,
    ShapeMismatch, Unsupported, UnsupportedGroup
)
from stabfin_groups import cyclic, make_group, window as group_window
from stabfin_rings import (
    GaloisField, GroupRing, GroupRingElement, RingScalar, change_ring,
    group_ring, integers, z_mod
)

logger = logging.getLogger(__name__)


# =============================================================================
# Types
# =============================================================================

def base_of(x):
    """Ring descriptor owning a scalar or group ring element."""
    if isinstance(x, RingScalar):
        return x.ring
    if isinstance(x, GroupRingElement):
        return x.parent
    raise Mismatch(f"not a ring element: {x!r}")


def coerce(base, value):
    if isinstance(value, (RingScalar, GroupRingElement)):
        if base_of(value) is not base:
            raise Mismatch(f"entry {value!r} is not in {base}")
        return value
    return base.element(value)


@dataclass(frozen=True, eq=False)
class RingMatrix:
    base: object
    rows: tuple

    @property
    def d(self):
        return len(self.rows)

    def __eq__(self, other):
        return (isinstance(other, RingMatrix) and other.base is self.base
                and other.rows == self.rows)

    def __hash__(self):
        return hash((id(self.base), self.rows))

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def _check(self, other):
        if not isinstance(other, RingMatrix):
            raise Mismatch(f"expected a matrix, got {other!r}")
        if other.base is not self.base:
            raise Mismatch(f"matrices over {self.base} and {other.base}")
        if other.d != self.d:
            raise Mismatch(f"dimensions {self.d} and {other.d}")

    def __add__(self, other):
        self._check(other)
        return RingMatrix(self.base, tuple(
            tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)))

    def __neg__(self):
        return RingMatrix(self.base, tuple(tuple(-a for a in r) for r in self.rows))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        self._check(other)
        zero = self.base.zero
        cols = list(zip(*other.rows))
        out = []
        for r in self.rows:
            row = []
            for c in cols:
                acc = zero
                for a, b in zip(r, c):
                    if not a.is_zero() and not b.is_zero():
                        acc = acc + a * b
                row.append(acc)
            out.append(tuple(row))
        return RingMatrix(self.base, tuple(out))

    def map(self, fn, base):
        """Entrywise image in another base."""
        return RingMatrix(base, tuple(tuple(fn(a) for a in r) for r in self.rows))

    def is_identity(self):
        return self == identity(self.base, self.d)

    def __repr__(self):
        return format_matrix(self)


@dataclass(frozen=True)
class BlockShape:
    """Partition (d_1, ..., d_m) of the dimension into diagonal blocks."""
    parts: tuple

    def __post_init__(self):
        if not self.parts or any(int(p) < 1 for p in self.parts):
            raise ValueError(f"block shape needs positive parts, got {self.parts}")
        object.__setattr__(self, 'parts', tuple(int(p) for p in self.parts))

    @property
    def total(self):
        return sum(self.parts)

    def block_index(self):
        """Block number of each row/column index."""
        return [b for b, size in enumerate(self.parts) for _ in range(size)]

    def free_positions(self):
        """Positions allowed to be nonzero in the block-upper subring."""
        blk = self.block_index()
        return [(i, j) for i in range(self.total) for j in range(self.total)
                if blk[i] <= blk[j]]

    def truncate(self, i):
        """The shape (d_i, ..., d_m) (1-based i)."""
        return BlockShape(self.parts[i - 1:])

    def __str__(self):
        return '(' + ','.join(str(p) for p in self.parts) + ')'


def unit_shape(d):
    return BlockShape((1,) * d)


def matrix(base, rows):
    """Matrix from a list of rows of ring elements or integers."""
    rows = [list(r) for r in rows]
    if any(len(r) != len(rows) for r in rows):
        raise ShapeMismatch(f"matrix must be square, got row lengths {[len(r) for r in rows]}")
    return RingMatrix(base, tuple(tuple(coerce(base, x) for x in r) for r in rows))


def identity(base, d):
    one, zero = base.one, base.zero
    return RingMatrix(base, tuple(tuple(one if i == j else zero for j in range(d))
                                  for i in range(d)))


def diagonal(base, entries):
    entries = [coerce(base, x) for x in entries]
    d = len(entries)
    return RingMatrix(base, tuple(tuple(entries[i] if i == j else base.zero for j in range(d))
                                  for i in range(d)))


def from_positions(base, d, values):
    """Matrix with the given {(i, j): entry} and zero elsewhere."""
    rows = [[base.zero] * d for _ in range(d)]
    for (i, j), v in values.items():
        rows[i][j] = coerce(base, v)
    return RingMatrix(base, tuple(tuple(r) for r in rows))


def format_matrix(M):
    return '[' + ', '.join('[' + ', '.join(repr(a) for a in r) + ']' for r in M.rows) + ']'


def mat_arith(op, A, B):
    if op == 'add':
        return A + B
    if op == 'sub':
        return A - B
    if op == 'mul':
        return A * B
    raise ValueError(f"unknown matrix operation {op!r}")


# =============================================================================
# Coefficient changes
# =============================================================================

def _retarget(base, ring):
    if isinstance(base, GroupRing):
        return group_ring(ring, base.group)
    return ring


def _entry_converter(target, convert):
    if isinstance(target, GroupRing):
        return lambda a: change_ring(a, target.ring, convert)
    return lambda a: RingScalar(target, (convert or target.normalize)(a.payload))


def mat_change_ring(M, ring, convert=None):
    """Entrywise coefficient change (Z -> Z/n by default reduction)."""
    target = _retarget(M.base, ring)
    return M.map(_entry_converter(target, convert), target)


def mat_reduce(M, m):
    return mat_change_ring(M, z_mod(m))


def mat_lift(M):
    """Integer lift with representatives in [0, n)."""
    return mat_change_ring(M, integers(), int)


def coefficient_ring(base):
    return base.ring if isinstance(base, GroupRing) else base


# =============================================================================
# Block shapes and one-sided pairs
# =============================================================================

def is_block_upper(X, shape):
    """True iff every entry below the diagonal blocks is zero."""
    if shape.total != X.d:
        raise ShapeMismatch(f"shape {shape} has total {shape.total}, matrix is {X.d}x{X.d}")
    return first_below_block(X, shape) is None


def first_below_block(X, shape):
    blk = shape.block_index()
    for i in range(X.d):
        for j in range(X.d):
            if blk[i] > blk[j] and not X.rows[i][j].is_zero():
                return (i, j)
    return None


@dataclass(frozen=True)
class ConfirmsDF:
    product: RingMatrix


@dataclass(frozen=True)
class RefutesDF:
    witness: RingMatrix


def check_df_pair(X, Y):
    """Given XY = I, report whether YX = I too.

    Raises:
        NotOneSidedPair: XY is not the identity.
    """
    if not (X * Y).is_identity():
        raise NotOneSidedPair(f"XY != I for X={X!r}, Y={Y!r}")
    yx = Y * X
    if yx.is_identity():
        return ConfirmsDF(yx)
    logger.error("one-sided unit found: X=%r Y=%r YX=%r", X, Y, yx)
    return RefutesDF(yx)


@dataclass(frozen=True)
class InShape:
    pass


@dataclass(frozen=True)
class Violation:
    position: tuple
    block: tuple


def block_left_unit_check(X, Y, shape):
    """With X block-upper and XY = I, check that Y is block-upper as well."""
    if shape.total != X.d:
        raise ShapeMismatch(f"shape {shape} does not fit a {X.d}x{X.d} matrix")
    if not is_block_upper(X, shape):
        raise ShapeMismatch(f"X is not block-upper for {shape}")
    if not (X * Y).is_identity():
        raise NotOneSidedPair("XY != I")
    pos = first_below_block(Y, shape)
    if pos is None:
        return InShape()
    blk = shape.block_index()
    return Violation(pos, (blk[pos[0]], blk[pos[1]]))


# =============================================================================
# Unitriangular inversion and Hensel lifting
# =============================================================================

def _check_unitriangular(A, shape):
    blk = shape.block_index()
    one, zero = A.base.one, A.base.zero
    for i in range(A.d):
        for j in range(A.d):
            if blk[i] > blk[j]:
                want = zero
            elif blk[i] == blk[j]:
                want = one if i == j else zero
            else:
                continue
            if A.rows[i][j] != want:
                raise NotUnitriangular(f"entry ({i},{j}) = {A.rows[i][j]!r}")


def unitriangular_inverse_rounds(A, shape=None):
    """Two-sided inverse of a (block) unitriangular matrix and the round count.

    With N = A - I nilpotent, each round multiplies the running product by
    2I - C, turning C = I - N^(2^k) into I - N^(2^(k+1)); the accumulated
    factors give the inverse after at most ceil(log2 m) rounds, m the number
    of blocks.
    """
    shape = shape or unit_shape(A.d)
    if shape.total != A.d:
        raise ShapeMismatch(f"shape {shape} does not fit a {A.d}x{A.d} matrix")
    _check_unitriangular(A, shape)
    I = identity(A.base, A.d)
    two = identity(A.base, A.d) + identity(A.base, A.d)
    C, P, rounds = A, I, 0
    while not C.is_identity():
        B = two - C
        C, P = C * B, P * B
        rounds += 1
    return P, rounds


def unitriangular_inverse(A, shape=None):
    return unitriangular_inverse_rounds(A, shape)[0]


def hensel_lift(Zt, Yt, p, m):
    """Lift a left inverse mod p to one mod p^m.

    Zt, Yt live over Z or Z[G]. Iterates Z <- (2I - ZY)Z in (Z/p^m)[G],
    doubling the precision each round, and returns the integer lift with
    coefficients in [0, p^m).

    Raises:
        NotCongruentModP: Zt*Yt is not I modulo p.
    """
    if coefficient_ring(Zt.base) is not integers() or Zt.base is not Yt.base:
        raise Mismatch("hensel_lift expects two matrices over Z or Z[G]")
    if not (mat_reduce(Zt, p) * mat_reduce(Yt, p)).is_identity():
        raise NotCongruentModP(f"Zt*Yt is not I mod {p}")
    mod = p ** m
    Z, Y = mat_reduce(Zt, mod), mat_reduce(Yt, mod)
    two = identity(Z.base, Z.d) + identity(Z.base, Z.d)
    precision, rounds = 1, 0
    while precision < m:
        Z = (two - Z * Y) * Z
        precision *= 2
        rounds += 1
    logger.debug("hensel lift to %d^%d in %d rounds", p, m, rounds)
    return mat_lift(Z)


def block_upper_right_inverse(X, Y, shape):
    """Two-sided inverse of a block-upper X from a right inverse Y.

    YX is block unitriangular when the diagonal blocks are directly finite;
    (YX)^-1 Y is then a left inverse of X, which forces it to equal Y.
    """
    if not (X * Y).is_identity():
        raise NotOneSidedPair("XY != I")
    if not is_block_upper(X, shape) or not is_block_upper(Y, shape):
        raise ShapeMismatch(f"X and Y must be block-upper for {shape}")
    U = Y * X
    L = unitriangular_inverse(U, shape) * Y
    I = identity(X.base, X.d)
    if L * X != I or X * L != I:
        raise NotOneSidedPair("(YX)^-1 Y is not a two-sided inverse")
    return L


# =============================================================================
# Right inverses by linear algebra
# =============================================================================

def _trivial_group_ring(F):
    return group_ring(F, make_group(cyclic(1)))


def _to_group_ring_matrix(X):
    R = _trivial_group_ring(X.base)
    return X.map(lambda a: R.from_dict({0: a.payload}), R)


def solve_right_inverse(X, window=None):
    """Y with XY = I and entries supported in the window, or None.

    Over a finite G the window is the whole group and None means no right
    inverse exists; over Z or Z^r it is the box [-w, w]^r and None is only a
    bounded answer.

    Raises:
        UnsupportedGroup: the base is not F_q or F_q[G] for a catalogue G.
    """
    plain = isinstance(X.base, GaloisField)
    if plain:
        F0 = X.base
        X = _to_group_ring_matrix(X)
    base = X.base
    if not isinstance(base, GroupRing) or not isinstance(base.ring, GaloisField):
        raise UnsupportedGroup(f"right inverses are solved over F_q[G], not {base}")
    F, G = base.ring, base.group
    try:
        cols = list(group_window(G, DEFAULT_WINDOW if window is None else window))
    except Unsupported as e:
        raise UnsupportedGroup(str(e)) from None
    d = X.d
    unknowns = [(j, w) for j in range(d) for w in cols]
    targets = {G.identity_payload}
    for i in range(d):
        for j in range(d):
            for x, _ in X.rows[i][j].terms:
                targets.update(G.mul(x, w) for w in cols)
    targets = sorted(targets, key=G.sort_key)
    row_of = {(i, g): r for r, (i, g) in enumerate(product(range(d), targets))}
    n = len(unknowns)
    aug = np.zeros((len(row_of), n + d), dtype=np.int64)
    for c, (j, w) in enumerate(unknowns):
        for i in range(d):
            for x, a in X.rows[i][j].terms:
                r = row_of[(i, G.mul(x, w))]
                aug[r, c] = F.add(int(aug[r, c]), a)
    for k in range(d):
        aug[row_of[(k, G.identity_payload)], n + k] = 1
    reduced = F.field(aug).row_reduce(ncols=n).view(np.ndarray)
    solution = np.zeros((n, d), dtype=np.int64)
    for row in reduced:
        pivots = np.flatnonzero(row[:n])
        if pivots.size == 0:
            if np.any(row[n:]):
                return None
            continue
        solution[pivots[0]] = row[n:]
    index = {u: c for c, u in enumerate(unknowns)}
    Y = RingMatrix(base, tuple(
        tuple(base.from_dict({w: int(solution[index[(j, w)], k]) for w in cols})
              for k in range(d))
        for j in range(d)))
    if not (X * Y).is_identity():
        raise ArithmeticError("row reduction returned a non-solution")
    if plain:
        Y = Y.map(lambda a: RingScalar(F0, a.coefficient(0)), F0)
    return Y


# =============================================================================
# Enumeration
# =============================================================================

def entry_values(base, support=None):
    """All ring elements usable as entries (window-restricted for group rings)."""
    if isinstance(base, GroupRing):
        sup = base.group.payloads() if support is None else support
        return list(base.elements_on(sup))
    return base.elements()


def matrices_on(base, d, values, positions=None):
    """Every d x d matrix with entries from values on the given positions."""
    positions = positions if positions is not None else list(product(range(d), repeat=2))
    for choice in product(values, repeat=len(positions)):
        yield from_positions(base, d, dict(zip(positions, choice)))


def random_matrix(base, d, rng, support=None, positions=None):
    positions = positions if positions is not None else list(product(range(d), repeat=2))
    values = {}
    for pos in positions:
        if isinstance(base, GroupRing):
            values[pos] = base.random_element(rng, support)
        else:
            values[pos] = base.random_element(rng)
    return from_positions(base, d, values)


def random_block_unit(base, shape, rng, tries=256):
    """Random unit of B_shape(F_q[G]) over a finite G, with its inverse."""
    for _ in range(tries):
        Y = random_matrix(base, shape.total, rng, None, shape.free_positions())
        Z = solve_right_inverse(Y)
        if Z is not None and (Z * Y).is_identity():
            return Y, Z
    raise BudgetExceeded(f"no unit of B{shape}({base}) in {tries} draws")


def _support_window(base, window):
    if isinstance(base, GroupRing) and not base.group.is_finite:
        return list(group_window(base.group, window))
    return None


def _is_bounded(base):
    return isinstance(base, GroupRing) and not base.group.is_finite


def _solvable(base):
    return isinstance(base, GaloisField) or (
        isinstance(base, GroupRing) and isinstance(base.ring, GaloisField))


# =============================================================================
# Searches
# =============================================================================

def one_sided_unit_search(base, d, window=DEFAULT_WINDOW, budget=DEFAULT_BUDGET,
                          rng=None, strict=False):
    """Search M_d(base) for one-sided units that are not two-sided.

    Modes:
        pairs    all (X, Y) pairs when their count fits the budget.
        solve    every X in the window, right inverse by row reduction.
        sampled  random X's when even the X space is over budget.

    Returns:
        Dict with 'mode', 'space', 'scanned', 'one_sided', 'witnesses',
        'bounded' and 'budget_exceeded'. Any witness is a software fault.
    """
    support = _support_window(base, window)
    values = entry_values(base, support)
    space = len(values) ** (d * d)
    report = {
        'ring': str(base), 'd': d, 'window': window if _is_bounded(base) else None,
        'space': space, 'scanned': 0, 'one_sided': 0, 'witnesses': [],
        'bounded': _is_bounded(base), 'budget_exceeded': False,
    }
    if space * space <= budget:
        report['mode'] = 'pairs'
        mats = list(matrices_on(base, d, values))
        I = identity(base, d)
        for X in mats:
            for Y in mats:
                report['scanned'] += 1
                if X * Y == I:
                    _record_pair(report, X, Y)
        return report
    if not _solvable(base):
        raise BudgetExceeded(f"{space}^2 pairs over {base} exceed budget {budget}", partial=report)
    if space <= budget:
        report['mode'] = 'solve'
        candidates = matrices_on(base, d, values)
    else:
        report['mode'] = 'sampled'
        report['budget_exceeded'] = True
        rng = rng if rng is not None else make_rng()
        count = min(budget, SAMPLE_PAIRS)
        candidates = (random_matrix(base, d, rng, support) for _ in range(count))
        if strict:
            raise BudgetExceeded(f"{space} candidates exceed budget {budget}", partial=report)
    for X in candidates:
        report['scanned'] += 1
        Y = solve_right_inverse(X, window)
        if Y is not None:
            _record_pair(report, X, Y)
    logger.info("unit search over M_%d(%s): %d scanned, %d one-sided, %d witnesses",
                d, base, report['scanned'], report['one_sided'], len(report['witnesses']))
    return report


def _record_pair(report, X, Y):
    report['one_sided'] += 1
    verdict = check_df_pair(X, Y)
    if isinstance(verdict, RefutesDF):
        report['witnesses'].append({'X': X, 'Y': Y, 'YX': verdict.witness})


def _one_sided_pairs(base, d, positions, budget, rng, label):
    """(elements, pairs XY=I, two-sided pairs, sampled?) for a matrix subring."""
    values = entry_values(base)
    size = len(values) ** len(positions)
    I = identity(base, d)
    pairs = two_sided = 0
    if size * size <= budget:
        mats = list(matrices_on(base, d, values, positions))
        for X in mats:
            for Y in mats:
                if X * Y == I:
                    pairs += 1
                    two_sided += (Y * X == I)
        return size, pairs, two_sided, False
    if not _solvable(base):
        raise BudgetExceeded(f"{label}: {size}^2 pairs exceed budget {budget}")
    rng = rng if rng is not None else make_rng()
    for _ in range(min(budget, SAMPLE_PAIRS)):
        X = random_matrix(base, d, rng, None, positions)
        Y = solve_right_inverse(X)
        if Y is not None:
            pairs += 1
            two_sided += (Y * X == I)
    return size, pairs, two_sided, True


def block_df_reduction_check(base, shape, budget=DEFAULT_BUDGET, rng=None):
    """Compare direct finiteness of B_shape(R) with that of M_max(R) on one instance.

    Also feeds every block-upper pair found through block_left_unit_check and
    block_upper_right_inverse.
    """
    if isinstance(base, GroupRing) and not base.group.is_finite:
        raise Unsupported("block reduction check needs a finite ring")
    D = shape.total
    size, pairs, two_sided, sampled = _one_sided_pairs(
        base, D, shape.free_positions(), budget, rng, f'B{shape}')
    k = max(shape.parts)
    a_size, a_pairs, a_two, a_sampled = _one_sided_pairs(
        base, k, list(product(range(k), repeat=2)), budget, rng, f'M_{k}')
    subring_df, ambient_df = pairs == two_sided, a_pairs == a_two
    inverse_checks = _block_inverse_checks(base, shape, budget)
    report = {
        'ring': str(base), 'shape': str(shape),
        'subring_size': size, 'subring_pairs': pairs, 'subring_two_sided': two_sided,
        'ambient_size': a_size, 'ambient_pairs': a_pairs, 'ambient_two_sided': a_two,
        'subring_df': subring_df, 'ambient_df': ambient_df,
        'agrees': subring_df == ambient_df, 'sampled': sampled or a_sampled,
        'inverse_checks': inverse_checks,
    }
    logger.info("B%s(%s): %d/%d two-sided; M_%d: %d/%d", shape, base, two_sided, pairs,
                k, a_two, a_pairs)
    return report


def _block_inverse_checks(base, shape, budget):
    """Run the block inverse checks on every block-upper unit when the scan is small."""
    values = entry_values(base)
    positions = shape.free_positions()
    if len(values) ** len(positions) > math.isqrt(budget):
        return {'checked': 0, 'violations': 0}
    D = shape.total
    mats = list(matrices_on(base, D, values, positions))
    checked = violations = 0
    I = identity(base, D)
    for X in mats:
        for Y in mats:
            if X * Y != I:
                continue
            checked += 1
            if isinstance(block_left_unit_check(X, Y, shape), Violation):
                violations += 1
            elif block_upper_right_inverse(X, Y, shape) != Y:
                violations += 1
    return {'checked': checked, 'violations': violations}


def subring_df_check(base, shape, budget=DEFAULT_BUDGET, rng=None):
    """A subring of a directly finite ring is directly finite: B_shape(R) in M_D(R)."""
    D = shape.total
    size, pairs, two_sided, s1 = _one_sided_pairs(
        base, D, shape.free_positions(), budget, rng, f'B{shape}')
    a_size, a_pairs, a_two, s2 = _one_sided_pairs(
        base, D, list(product(range(D), repeat=2)), budget, rng, f'M_{D}')
    ambient_df = a_pairs == a_two
    subring_df = pairs == two_sided
    return {
        'ring': str(base), 'shape': str(shape),
        'subring_pairs': pairs, 'ambient_pairs': a_pairs,
        'ambient_df': ambient_df, 'subring_df': subring_df,
        'consistent': subring_df or not ambient_df, 'sampled': s1 or s2,
    }


def is_unit_matrix(X, budget=DEFAULT_BUDGET):
    """Exact unit test over a finite ring: linear algebra when possible, else search."""
    if _solvable(X.base):
        Y = solve_right_inverse(X)
        return Y is not None and (Y * X).is_identity()
    values = entry_values(X.base)
    if len(values) ** (X.d * X.d) > budget:
        raise BudgetExceeded(f"unit search over {X.base} exceeds budget {budget}")
    I = identity(X.base, X.d)
    return any(X * Y == I for Y in matrices_on(X.base, X.d, values))


# =============================================================================
# Randomised sweeps
# =============================================================================

def random_block_unitriangular(base, shape, rng, support=None):
    """Identity blocks on the diagonal, random entries strictly above them."""
    blk = shape.block_index()
    above = [(i, j) for i, j in shape.free_positions() if blk[i] < blk[j]]
    return identity(base, shape.total) + random_matrix(base, shape.total, rng, support, above)


def _random_shape(rng, D):
    parts, left = [], D
    while left:
        size = int(rng.integers(1, left + 1))
        parts.append(size)
        left -= size
    return BlockShape(tuple(parts))


def unitriangular_sweep(base, samples, rng=None, max_dim=5, window=DEFAULT_WINDOW):
    """Invert random block unitriangular matrices and check A*P = P*A = I.

    Also records the worst round count against ceil(log2 m), m the number of
    blocks.
    """
    rng = rng if rng is not None else make_rng()
    support = _support_window(base, window)
    failures, worst = [], 0
    for _ in range(samples):
        shape = _random_shape(rng, int(rng.integers(1, max_dim + 1)))
        A = random_block_unitriangular(base, shape, rng, support)
        P, rounds = unitriangular_inverse_rounds(A, shape)
        bound = math.ceil(math.log2(len(shape.parts))) if len(shape.parts) > 1 else 0
        worst = max(worst, rounds - bound)
        I = identity(base, A.d)
        if A * P != I or P * A != I or rounds > bound:
            failures.append({'A': A, 'shape': str(shape), 'rounds': rounds, 'bound': bound})
    logger.info("unitriangular sweep over %s: %d samples, %d failures",
                base, samples, len(failures))
    return {'ring': str(base), 'samples': samples, 'failures': failures,
            'round_excess': worst, 'ok': not failures}


def hensel_sweep(base, p, precisions, samples, rng=None, d=2, window=DEFAULT_WINDOW):
    """Lift random left inverses mod p and check shape and congruence.

    Each sample draws a block unitriangular U and noise M over Z[G], sets
    Yt = U + pM and Zt = U^-1, so Zt*Yt = I mod p, and lifts to every
    precision.
    """
    if coefficient_ring(base) is not integers():
        raise Mismatch(f"hensel sweep runs over Z or Z[G], not {base}")
    rng = rng if rng is not None else make_rng()
    support = _support_window(base, window)
    failures = []
    lifts = 0
    for _ in range(samples):
        shape = _random_shape(rng, d)
        U = random_block_unitriangular(base, shape, rng, support)
        noise = random_matrix(base, d, rng, support, shape.free_positions())
        Yt = U + diagonal(base, [p] * d) * noise
        Zt = unitriangular_inverse(U, shape)
        for m in precisions:
            Z = hensel_lift(Zt, Yt, p, m)
            lifts += 1
            congruent = (mat_reduce(Z, p ** m) * mat_reduce(Yt, p ** m)).is_identity()
            if not congruent or not is_block_upper(Z, shape):
                failures.append({'Yt': Yt, 'Zt': Zt, 'm': m, 'shape': str(shape),
                                 'congruent': congruent})
    logger.info("hensel sweep over %s mod %d: %d lifts, %d failures",
                base, p, lifts, len(failures))
    return {'ring': str(base), 'p': p, 'precisions': list(precisions), 'samples': samples,
            'lifts': lifts, 'failures': failures, 'ok': not failures}
