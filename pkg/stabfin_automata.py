#!/usr/bin/env python3
"""
stabfin Automata

Additive cellular automata over catalogue groups with finite abelian
alphabets A = sum of (Z/p^e)^d. The local rule is
    tau(c)(g) = sum over s in memory of c(g*s) M_s
with M_s an integer matrix acting on row vectors of generator coordinates.

Kernels and images of the induced endomorphism of A^G are counted by
vectorized brute force for small configuration spaces and through the Smith
normal form of [T; diag(moduli)] (sympy) otherwise.

Usage as a library:
    from stabfin_automata import Alphabet, make_ca, ca_kernel_image
    ca = make_ca(make_group(cyclic(3)), Alphabet.field(2), {0: [[1]], 1: [[1]]})
"""

import logging
import math
from dataclasses import dataclass
from itertools import product

import numpy as np
from sympy import Matrix, ZZ, factorint, isprime
from sympy.matrices.normalforms import smith_normal_form

from stabfin_config import CA_BRUTE_FORCE_LIMIT, DEFAULT_BUDGET, SAMPLE_PAIRS, make_rng
from stabfin_errors import (
    BudgetExceeded, InfiniteGroup, InvalidEndomorphism, Mismatch, NotLinearAlphabet,
    Unsupported
)
from stabfin_groups import window as group_window
from stabfin_matrices import RingMatrix, is_unit_matrix
from stabfin_rings import GaloisField, GroupRing, IntegersMod, group_ring, make_gf

logger = logging.getLogger(__name__)


# =============================================================================
# Alphabets and automata
# =============================================================================

@dataclass(frozen=True)
class Alphabet:
    """A = sum over parts (p, e, d) of (Z/p^e)^d, parts in ascending (p, e) order."""
    parts: tuple

    def __post_init__(self):
        parts = tuple(sorted((int(p), int(e), int(d)) for p, e, d in self.parts if d))
        if not parts:
            raise ValueError("alphabet needs at least one cyclic factor")
        for p, e, d in parts:
            if not isprime(p) or e < 1:
                raise ValueError(f"bad alphabet part {(p, e, d)}")
        object.__setattr__(self, 'parts', parts)

    @classmethod
    def field(cls, p, d=1):
        return cls(((p, 1, d),))

    @classmethod
    def from_moduli(cls, moduli):
        """Split each Z/m into prime-power factors."""
        counts = {}
        for m in moduli:
            for p, e in factorint(int(m)).items():
                counts[(p, e)] = counts.get((p, e), 0) + 1
        return cls(tuple((p, e, d) for (p, e), d in counts.items()))

    @property
    def moduli(self):
        return [p ** e for p, e, d in self.parts for _ in range(d)]

    @property
    def primes(self):
        return sorted({p for p, _, _ in self.parts})

    @property
    def dim(self):
        return len(self.moduli)

    def order(self):
        return math.prod(self.moduli)

    def is_vector_space(self):
        return len(self.primes) == 1 and all(e == 1 for _, e, _ in self.parts)

    def elements(self):
        return list(product(*(range(m) for m in self.moduli)))

    def zero(self):
        return (0,) * self.dim

    def __str__(self):
        out = []
        for p, e, d in self.parts:
            base = f'F{p}' if e == 1 else f'Z/{p ** e}'
            out.append(base if d == 1 else f'{base}^{d}')
        return '+'.join(out)


def _steps(alphabet):
    """step[i][j] = m_j / gcd(m_i, m_j): entry (i, j) of an endomorphism is a multiple."""
    m = alphabet.moduli
    return [[m[j] // math.gcd(m[i], m[j]) for j in range(len(m))] for i in range(len(m))]


def check_endomorphism(alphabet, M):
    """Reduce M and check that u -> uM is well defined on A.

    Raises:
        InvalidEndomorphism: some entry ignores the generator orders.
    """
    n, m = alphabet.dim, alphabet.moduli
    M = [[int(x) for x in row] for row in M]
    if len(M) != n or any(len(row) != n for row in M):
        raise Mismatch(f"endomorphisms of {alphabet} are {n}x{n}, got {M}")
    step = _steps(alphabet)
    for i in range(n):
        for j in range(n):
            if M[i][j] % step[i][j]:
                raise InvalidEndomorphism(
                    f"entry ({i},{j}) = {M[i][j]} maps Z/{m[i]} into Z/{m[j]}; "
                    f"it must be a multiple of {step[i][j]}")
    return tuple(tuple(M[i][j] % m[j] for j in range(n)) for i in range(n))


@dataclass(frozen=True)
class AdditiveCA:
    group: object
    alphabet: Alphabet
    memory: tuple   # ((s payload, M_s), ...) sorted, nonzero M_s

    def format_memory(self):
        G = self.group
        return '[' + ', '.join(f'({G.format(s)},{[list(r) for r in M]})'
                               for s, M in self.memory) + ']'


def make_ca(group, alphabet, memory):
    """Build an additive CA from {s: M_s} or [(s, M_s)].

    A 1x1 list [k] stands for k times the identity.
    """
    items = list(memory.items()) if isinstance(memory, dict) else list(memory)
    seen, rules = set(), []
    n = alphabet.dim
    for s, M in items:
        s = group.normalize(s)
        if s in seen:
            raise Mismatch(f"memory element {group.format(s)} repeated")
        seen.add(s)
        if not isinstance(M[0], (list, tuple)):
            if len(M) != 1:
                raise Mismatch(f"scalar rule must be [k], got {M}")
            M = [[M[0] if i == j else 0 for j in range(n)] for i in range(n)]
        M = check_endomorphism(alphabet, M)
        if any(any(row) for row in M):
            rules.append((s, M))
    rules.sort(key=lambda t: group.sort_key(t[0]))
    return AdditiveCA(group, alphabet, tuple(rules))


@dataclass(frozen=True)
class Configuration:
    """Total map G -> A, values aligned with the group's enumeration."""
    group: object
    values: tuple

    def at(self, g):
        return self.values[self.group.index(g)]


def configuration(group, values):
    values = tuple(tuple(v) if isinstance(v, (list, tuple)) else (v,) for v in values)
    if len(values) != group.order():
        raise Mismatch(f"{group} has {group.order()} points, got {len(values)} values")
    return Configuration(group, values)


def translate(c, h):
    """(h.c)(g) = c(h^-1 g)."""
    G = c.group
    hi = G.inv(h)
    return Configuration(G, tuple(c.at(G.mul(hi, g)) for g in G.payloads()))


def _local(ca, lookup, g):
    G, moduli = ca.group, ca.alphabet.moduli
    acc = [0] * len(moduli)
    for s, M in ca.memory:
        u = lookup(G.mul(g, s))
        for i, ui in enumerate(u):
            if ui:
                for j, x in enumerate(M[i]):
                    acc[j] += ui * x
    return tuple(a % m for a, m in zip(acc, moduli))


def apply_ca(ca, c):
    """tau(c) on a finite group."""
    G = ca.group
    if not G.is_finite:
        raise InfiniteGroup(f"full application needs a finite group; use apply_ca_window on {G}")
    if c.group is not G:
        raise Mismatch(f"configuration lives on {c.group}, automaton on {G}")
    values = dict(zip(G.payloads(), c.values))
    return Configuration(G, tuple(_local(ca, values.__getitem__, g) for g in G.payloads()))


def apply_ca_window(ca, values, w):
    """tau on a finitely supported configuration over Z or Z^r, read on [-w, w]^r.

    Points outside the support are zero, so results near the window edge are
    not those of any extension of the configuration. The result is labelled
    bounded.
    """
    G = ca.group
    zero = ca.alphabet.zero()
    values = {G.normalize(g): tuple(v) for g, v in values.items()}
    points = group_window(G, w)
    out = {g: _local(ca, lambda x: values.get(x, zero), g) for g in points}
    return {'values': {g: v for g, v in out.items() if v != zero}, 'window': w, 'bounded': True}


# =============================================================================
# Kernels and images
# =============================================================================

def transfer_matrix(ca):
    """Integer N x N matrix T (N = |G| dim A) with tau(u) = uT, column c mod its modulus."""
    G = ca.group
    pts = G.payloads()
    n = ca.alphabet.dim
    T = np.zeros((len(pts) * n, len(pts) * n), dtype=np.int64)
    for gi, g in enumerate(pts):
        for s, M in ca.memory:
            xi = G.index(G.mul(g, s))
            for i in range(n):
                for j in range(n):
                    T[xi * n + i, gi * n + j] += M[i][j]
    return T


def _column_moduli(ca):
    return np.array(ca.alphabet.moduli * ca.group.order(), dtype=np.int64)


def _brute_force(ca):
    T = transfer_matrix(ca)
    mods = _column_moduli(ca)
    total = int(np.prod(mods))
    idx = np.arange(total, dtype=np.int64)
    configs = np.empty((total, len(mods)), dtype=np.int64)
    stride = 1
    for c, m in enumerate(mods):
        configs[:, c] = (idx // stride) % m
        stride *= int(m)
    images = (configs @ T) % mods
    kernel = int(np.count_nonzero(~images.any(axis=1)))
    image = len(np.unique(images, axis=0))
    return kernel, image


def _smith(ca):
    """|ker| = |coker| = product of the invariant factors of [T; diag(moduli)]."""
    T = transfer_matrix(ca)
    mods = _column_moduli(ca)
    N = len(mods)
    stacked = [[int(x) for x in row] + [0] * N for row in T]
    stacked += [[int(mods[c]) if c == r else 0 for c in range(N)] + [0] * N for r in range(N)]
    snf = smith_normal_form(Matrix(stacked), domain=ZZ)
    kernel = 1
    for k in range(2 * N):
        if snf[k, k] != 0:
            kernel *= abs(int(snf[k, k]))
    order = int(np.prod([int(m) for m in mods]))
    return kernel, order // kernel


def ca_kernel_image(ca, limit=CA_BRUTE_FORCE_LIMIT):
    """Kernel and image orders of tau on A^G for a finite G."""
    G = ca.group
    if not G.is_finite:
        raise InfiniteGroup(f"kernel of an automaton over infinite {G}")
    size = ca.alphabet.order() ** G.order()
    if size <= limit:
        kernel, image = _brute_force(ca)
        method = 'brute_force'
    else:
        kernel, image = _smith(ca)
        method = 'smith'
    logger.debug("CA %s over %s: |ker|=%d |im|=%d (%s)", ca.format_memory(), G, kernel, image,
                 method)
    return {'kernel_order': kernel, 'image_order': image, 'configurations': size,
            'injective': kernel == 1, 'surjective': image == size, 'method': method}


# =============================================================================
# Matrix correspondence
# =============================================================================

def _prime_field(base):
    R = base.ring
    if isinstance(R, GaloisField) and R.k == 1:
        return R.p
    if isinstance(R, IntegersMod) and R.is_field:
        return R.n
    raise NotLinearAlphabet(f"{base} is not a group ring over a prime field")


def ca_from_matrix(Y):
    """Linear CA over F_p^d: M_s[i][j] is the coefficient of s in Y_ij."""
    if not isinstance(Y.base, GroupRing):
        raise NotLinearAlphabet(f"expected a matrix over F_p[G], got {Y.base}")
    p, G, d = _prime_field(Y.base), Y.base.group, Y.d
    memory = {}
    for i in range(d):
        for j in range(d):
            for s, c in Y.rows[i][j].terms:
                memory.setdefault(s, [[0] * d for _ in range(d)])[i][j] = int(c)
    return make_ca(G, Alphabet.field(p, d), memory)


def matrix_from_ca(ca):
    """Inverse of ca_from_matrix on vector-space alphabets.

    Raises:
        NotLinearAlphabet: the alphabet is not F_p^d.
    """
    if not ca.alphabet.is_vector_space():
        raise NotLinearAlphabet(f"{ca.alphabet} is not a vector space over a prime field")
    p, d = ca.alphabet.primes[0], ca.alphabet.dim
    R = group_ring(make_gf(p), ca.group)
    coeffs = [[{} for _ in range(d)] for _ in range(d)]
    for s, M in ca.memory:
        for i in range(d):
            for j in range(d):
                if M[i][j]:
                    coeffs[i][j][s] = M[i][j]
    return RingMatrix(R, tuple(tuple(R.from_dict(coeffs[i][j]) for j in range(d))
                               for i in range(d)))


def involution(Y):
    """Entrywise g -> g^-1; tau is bijective iff this matrix is a unit."""
    G = Y.base.group
    return Y.map(lambda a: Y.base.from_dict({G.inv(g): c for g, c in a.terms}), Y.base)


# =============================================================================
# Decomposition
# =============================================================================

def _restrict(ca, coords, alphabet, transform):
    memory = []
    for s, M in ca.memory:
        sub = [[transform(i, j, M[i][j]) for j in coords] for i in coords]
        memory.append((s, sub))
    return make_ca(ca.group, alphabet, memory)


def p_component(ca, p):
    coords = [c for c, m in enumerate(ca.alphabet.moduli) if m % p == 0]
    alphabet = Alphabet(tuple(part for part in ca.alphabet.parts if part[0] == p))
    return _restrict(ca, coords, alphabet, lambda i, j, x: x)


def torsion_restriction(ca):
    """The CA induced on Q = elements of order dividing p (a linear CA over F_p)."""
    (p,) = ca.alphabet.primes
    moduli = ca.alphabet.moduli
    exps = [e for _, e, d in ca.alphabet.parts for _ in range(d)]
    Q = Alphabet.field(p, len(moduli))

    def transform(i, j, x):
        return ((p ** (exps[i] - 1) * x) % moduli[j]) // p ** (exps[j] - 1) % p

    return _restrict(ca, range(len(moduli)), Q, transform)


def quotient_by_torsion(ca):
    """The CA induced on A/Q, or None when A has exponent p."""
    (p,) = ca.alphabet.primes
    moduli = ca.alphabet.moduli
    coords = [c for c, m in enumerate(moduli) if m > p]
    if not coords:
        return None
    alphabet = Alphabet.from_moduli([moduli[c] // p for c in coords])
    return _restrict(ca, coords, alphabet, lambda i, j, x: x % (moduli[j] // p))


def decompose_ca(ca, limit=CA_BRUTE_FORCE_LIMIT):
    """Split into p-components, then into the p-torsion restriction and quotient.

    Checks on the finite instance that kernel orders multiply across
    components, and that injectivity passes to the restriction and quotient.
    """
    whole = ca_kernel_image(ca, limit)
    components, product_ = [], 1
    inherited = True
    for p in ca.alphabet.primes:
        comp = p_component(ca, p)
        info = ca_kernel_image(comp, limit)
        product_ *= info['kernel_order']
        restriction = torsion_restriction(comp)
        r_info = ca_kernel_image(restriction, limit)
        quotient = quotient_by_torsion(comp)
        q_info = ca_kernel_image(quotient, limit) if quotient is not None else None
        if info['injective']:
            inherited &= r_info['injective'] and (q_info is None or q_info['injective'])
        components.append({
            'prime': p, 'alphabet': str(comp.alphabet), 'kernel_order': info['kernel_order'],
            'injective': info['injective'],
            'restriction': {'alphabet': str(restriction.alphabet), 'linear': True,
                            'kernel_order': r_info['kernel_order'],
                            'injective': r_info['injective']},
            'quotient': None if q_info is None else {
                'alphabet': str(quotient.alphabet), 'kernel_order': q_info['kernel_order'],
                'injective': q_info['injective']},
        })
    return {'alphabet': str(ca.alphabet), 'kernel_order': whole['kernel_order'],
            'injective': whole['injective'], 'components': components,
            'kernel_product_ok': product_ == whole['kernel_order'],
            'injectivity_inherited': inherited}


# =============================================================================
# Surjunctivity sweep
# =============================================================================

def _endomorphisms(alphabet):
    """Every valid M, enumerated entrywise by multiples of the step."""
    m, step, n = alphabet.moduli, _steps(alphabet), alphabet.dim
    ranges = [range(0, m[j], step[i][j]) for i in range(n) for j in range(n)]
    for flat in product(*ranges):
        yield tuple(tuple(flat[i * n:(i + 1) * n]) for i in range(n))


def _random_endomorphism(alphabet, rng):
    m, step, n = alphabet.moduli, _steps(alphabet), alphabet.dim
    return [[step[i][j] * int(rng.integers(m[j] // step[i][j])) for j in range(n)]
            for i in range(n)]


def count_automata(group, alphabet):
    per_site = math.prod(math.gcd(a, b) for a in alphabet.moduli for b in alphabet.moduli)
    return per_site ** group.order()


def surjunctivity_report(group, alphabet, scope='exhaustive', budget=DEFAULT_BUDGET, rng=None,
                         limit=CA_BRUTE_FORCE_LIMIT):
    """Sweep additive CAs with memory in G; injective must imply surjective.

    For vector-space alphabets each CA is also compared with unit-ness of its
    matrix (under g -> g^-1), decided by row reduction.
    """
    if not group.is_finite:
        raise InfiniteGroup(f"surjunctivity sweep over infinite {group}")
    total = count_automata(group, alphabet)
    if scope == 'exhaustive':
        if total > budget:
            raise BudgetExceeded(f"{total} automata over {group} exceed budget {budget}")
        endos = list(_endomorphisms(alphabet))
        pts = group.payloads()
        candidates = (make_ca(group, alphabet, dict(zip(pts, choice)))
                      for choice in product(endos, repeat=len(pts)))
    elif scope == 'sample':
        rng = rng if rng is not None else make_rng()
        pts = group.payloads()
        candidates = (make_ca(group, alphabet, {s: _random_endomorphism(alphabet, rng) for s in pts})
                      for _ in range(min(budget, SAMPLE_PAIRS)))
    else:
        raise Unsupported(f"unknown sweep scope {scope!r}")
    linear = alphabet.is_vector_space()
    records, violations, mismatches, bijective = [], [], 0, 0
    for ca in candidates:
        info = ca_kernel_image(ca, limit)
        record = {'memory': ca.format_memory(), 'injective': info['injective'],
                  'surjective': info['surjective'], 'kernel_order': info['kernel_order']}
        if info['injective'] != info['surjective']:
            logger.error("surjunctivity violated by %s", ca.format_memory())
            violations.append(record)
        bijective += info['injective'] and info['surjective']
        if linear:
            unit = is_unit_matrix(involution(matrix_from_ca(ca)))
            record['unit'] = unit
            if unit != (info['injective'] and info['surjective']):
                mismatches += 1
        records.append(record)
    logger.info("%s over %s: %d automata, %d bijective, %d violations", alphabet, group,
                len(records), bijective, len(violations))
    return {'group': str(group), 'alphabet': str(alphabet), 'scope': scope,
            'configurations': alphabet.order() ** group.order(), 'automata': len(records),
            'space': total, 'bijective': bijective, 'violations': violations,
            'unit_mismatches': mismatches if linear else None, 'records': records}


def decomposition_sweep(group, alphabet, budget=DEFAULT_BUDGET, limit=CA_BRUTE_FORCE_LIMIT):
    """Run decompose_ca over every additive CA on (group, alphabet)."""
    total = count_automata(group, alphabet)
    if total > budget:
        raise BudgetExceeded(f"{total} automata over {group} exceed budget {budget}")
    pts = group.payloads()
    endos = list(_endomorphisms(alphabet))
    failures, checked = [], 0
    for choice in product(endos, repeat=len(pts)):
        ca = make_ca(group, alphabet, dict(zip(pts, choice)))
        info = decompose_ca(ca, limit)
        checked += 1
        if not (info['kernel_product_ok'] and info['injectivity_inherited']):
            failures.append({'memory': ca.format_memory(), **info})
    logger.info("decomposition sweep over %s with %s: %d automata, %d failures",
                group, alphabet, checked, len(failures))
    return {'group': str(group), 'alphabet': str(alphabet), 'automata': checked,
            'failures': failures, 'ok': not failures}
