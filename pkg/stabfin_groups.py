#!/usr/bin/env python3
"""
stabfin Groups

Concrete computable groups with exact element arithmetic:

    cyclic(n)            Z/n, and Z itself for n = 0
    free_abelian(r)      Z^r
    permutation(gens)    closed under generation with sympy.combinatorics
    table(rows)          explicit multiplication table, axioms checked
    direct_product(...)  tuples of factor payloads
    central_quotient     G/<c> for a central element c of finite order

Every group handle exposes identity, multiplication, inversion, a sort key
giving the canonical element order, and for finite groups an enumerator.
Homomorphisms are GroupHom objects whose multiplicativity is checked on
construction (exhaustively for small finite sources, sampled otherwise).

Usage as a library:
    from stabfin_groups import cyclic, make_group, centre, abelianization
    S3 = make_group(permutation([(2, 1, 3), (2, 3, 1)]))
"""

import logging
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product

from sympy.combinatorics import Permutation, PermutationGroup

from stabfin_config import (
    GROUP_ORDER_CAP, AXIOM_EXHAUSTIVE_ORDER, EXHAUSTIVE_PAIR_LIMIT,
    SAMPLE_PAIRS, SAMPLE_RADIUS, make_rng
)
from stabfin_errors import (
    BudgetExceeded, InfiniteGroup, InvalidTable, Mismatch, NonCentralElement,
    NotAHomomorphism, Unsupported
)

logger = logging.getLogger(__name__)


# =============================================================================
# Specs
# =============================================================================

@dataclass(frozen=True)
class GroupSpec:
    """Hashable description of a catalogue group."""
    kind: str
    n: int = 0
    generators: tuple = ()
    rows: tuple = ()
    factors: tuple = ()
    parent: 'GroupSpec' = None
    element: object = None
    label: str = field(default='', compare=False)

    def __str__(self):
        return self.label or self.kind


def cyclic(n):
    if n < 0:
        raise ValueError(f"cyclic order must be >= 0, got {n}")
    return GroupSpec('cyclic', n=n, label='Z' if n == 0 else f'C{n}')


def free_abelian(r):
    if r < 0:
        raise ValueError(f"rank must be >= 0, got {r}")
    return GroupSpec('free_abelian', n=r, label=f'Z^{r}')


def permutation(generators, degree=None, label=''):
    """Permutation group from one-line images on points 1..degree."""
    gens = [tuple(int(x) for x in g) for g in generators]
    if degree is None:
        degree = max((len(g) for g in gens), default=1)
    padded = []
    for g in gens:
        g = g + tuple(range(len(g) + 1, degree + 1))
        if sorted(g) != list(range(1, degree + 1)):
            raise ValueError(f"not a permutation of 1..{degree}: {g}")
        padded.append(g)
    return GroupSpec('permutation', n=degree, generators=tuple(padded),
                     label=label or f'perm{degree}')


def table(rows, label=''):
    rows = tuple(tuple(int(x) for x in row) for row in rows)
    return GroupSpec('table', n=len(rows), rows=rows, label=label or f'table{len(rows)}')


def direct_product(*specs):
    if len(specs) == 1 and isinstance(specs[0], (list, tuple)):
        specs = tuple(specs[0])
    return GroupSpec('product', factors=tuple(specs),
                     label='x'.join(str(s) for s in specs) or '1')


def central_quotient(parent, element):
    return GroupSpec('central_quotient', parent=parent, element=element,
                     label=f'{parent}/<{element}>')


def symmetric(n):
    if n <= 1:
        return permutation([], degree=1, label=f'S{n}')
    transposition = (2, 1) + tuple(range(3, n + 1))
    cycle = tuple(range(2, n + 1)) + (1,)
    return permutation([transposition, cycle], degree=n, label=f'S{n}')


def dihedral(order):
    """Dihedral group of the given order (D8 has order 8) acting on order/2 points."""
    m = order // 2
    if order % 2 or m < 3:
        raise ValueError(f"dihedral order must be even and >= 6, got {order}")
    rotation = tuple(range(2, m + 1)) + (1,)
    reflection = (1,) + tuple(range(m, 1, -1))
    return permutation([rotation, reflection], degree=m, label=f'D{order}')


# =============================================================================
# Elements
# =============================================================================

@dataclass(frozen=True, eq=False)
class GroupElement:
    group: 'Group'
    payload: object

    def __eq__(self, other):
        return (isinstance(other, GroupElement) and self.group is other.group
                and self.payload == other.payload)

    def __hash__(self):
        return hash((id(self.group), self.payload))

    def _check(self, other):
        if not isinstance(other, GroupElement) or other.group is not self.group:
            raise Mismatch(f"elements of different groups: {self.group} vs "
                           f"{getattr(other, 'group', other)}")

    def __mul__(self, other):
        self._check(other)
        return GroupElement(self.group, self.group.mul(self.payload, other.payload))

    def __invert__(self):
        return GroupElement(self.group, self.group.inv(self.payload))

    def __pow__(self, k):
        return GroupElement(self.group, self.group.power(self.payload, k))

    def __lt__(self, other):
        self._check(other)
        return self.group.sort_key(self.payload) < self.group.sort_key(other.payload)

    def is_identity(self):
        return self.payload == self.group.identity_payload

    def __repr__(self):
        return self.group.format(self.payload)


# =============================================================================
# Group handles
# =============================================================================

class Group:
    """Handle for a computable group; payload-level operations plus wrappers."""

    is_finite = True
    is_abelian = False

    def __init__(self, spec):
        self.spec = spec
        self._index = None

    # --- payload level, overridden per variant ---
    identity_payload = None

    def mul(self, a, b):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def sort_key(self, a):
        return a

    def order(self):
        return None

    def _enumerate(self):
        raise InfiniteGroup(f"{self} is infinite")

    def generators(self):
        raise NotImplementedError

    def normalize(self, a):
        return a

    def random_payload(self, rng, radius=SAMPLE_RADIUS):
        payloads = self.payloads()
        return payloads[int(rng.integers(len(payloads)))]

    def format(self, a):
        return str(a)

    # --- shared machinery ---
    def __str__(self):
        return str(self.spec)

    def __repr__(self):
        return f"<{type(self).__name__} {self}>"

    @property
    def identity(self):
        return GroupElement(self, self.identity_payload)

    def element(self, payload):
        return GroupElement(self, self.normalize(payload))

    def power(self, a, k):
        if k < 0:
            a, k = self.inv(a), -k
        result = self.identity_payload
        base = a
        while k:
            if k & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            k >>= 1
        return result

    def element_order(self, a, cap=GROUP_ORDER_CAP):
        """Order of a, or None if no power up to cap is the identity."""
        x = a
        for n in range(1, cap + 1):
            if x == self.identity_payload:
                return n
            x = self.mul(x, a)
        return None

    def payloads(self):
        """Finite enumeration: identity first, then ascending sort key."""
        if not self.is_finite:
            raise InfiniteGroup(f"cannot enumerate infinite group {self}")
        if self._index is None:
            elems = sorted(set(self._enumerate()),
                           key=lambda a: (a != self.identity_payload, self.sort_key(a)))
            self._index = (elems, {a: i for i, a in enumerate(elems)})
        return self._index[0]

    def index(self, a):
        self.payloads()
        return self._index[1][a]

    def elements(self):
        return [GroupElement(self, a) for a in self.payloads()]

    def commute(self, a, b):
        return self.mul(a, b) == self.mul(b, a)


class CyclicGroup(Group):
    def __init__(self, spec):
        super().__init__(spec)
        self.n = spec.n
        self.is_finite = spec.n > 0
        self.is_abelian = True
        self.identity_payload = 0

    def mul(self, a, b):
        return (a + b) % self.n if self.n else a + b

    def inv(self, a):
        return (-a) % self.n if self.n else -a

    def order(self):
        return self.n or None

    def _enumerate(self):
        return range(self.n)

    def generators(self):
        return [] if self.n == 1 else [1]

    def normalize(self, a):
        return int(a) % self.n if self.n else int(a)

    def random_payload(self, rng, radius=SAMPLE_RADIUS):
        if self.n:
            return int(rng.integers(self.n))
        return int(rng.integers(-radius, radius + 1))


class FreeAbelianGroup(Group):
    def __init__(self, spec):
        super().__init__(spec)
        self.rank = spec.n
        self.is_finite = spec.n == 0
        self.is_abelian = True
        self.identity_payload = (0,) * spec.n

    def mul(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def inv(self, a):
        return tuple(-x for x in a)

    def order(self):
        return 1 if self.rank == 0 else None

    def _enumerate(self):
        return [self.identity_payload]

    def generators(self):
        return [tuple(int(i == j) for j in range(self.rank)) for i in range(self.rank)]

    def normalize(self, a):
        a = tuple(int(x) for x in a)
        if len(a) != self.rank:
            raise Mismatch(f"expected a vector of length {self.rank}, got {a}")
        return a

    def random_payload(self, rng, radius=SAMPLE_RADIUS):
        return tuple(int(x) for x in rng.integers(-radius, radius + 1, size=self.rank))

    def format(self, a):
        return '(' + ','.join(str(x) for x in a) + ')'


class PermGroup(Group):
    """Permutations as one-line image tuples; (a*b)(i) = a(b(i))."""

    def __init__(self, spec):
        super().__init__(spec)
        self.degree = spec.n
        self.identity_payload = tuple(range(1, spec.n + 1))
        self._gens = [g for g in spec.generators if g != self.identity_payload]
        self._sympy = PermutationGroup(
            [Permutation([x - 1 for x in g], size=self.degree) for g in self._gens]
            or [Permutation(list(range(self.degree)), size=self.degree)]
        )
        self.is_abelian = self._sympy.is_abelian

    def mul(self, a, b):
        return tuple(a[x - 1] for x in b)

    def inv(self, a):
        out = [0] * self.degree
        for i, x in enumerate(a, start=1):
            out[x - 1] = i
        return tuple(out)

    def order(self):
        return int(self._sympy.order())

    def _enumerate(self):
        return [tuple(x + 1 for x in af) for af in self._sympy.generate(af=True)]

    def generators(self):
        return list(self._gens)

    def normalize(self, a):
        a = tuple(int(x) for x in a)
        self.payloads()
        if a not in self._index[1]:
            raise Mismatch(f"{a} is not an element of {self}")
        return a

    def format(self, a):
        cycles = Permutation([x - 1 for x in a], size=self.degree).cyclic_form
        if not cycles:
            return '()'
        return ''.join('(' + ' '.join(str(x + 1) for x in c) + ')' for c in cycles)


class TableGroup(Group):
    def __init__(self, spec):
        super().__init__(spec)
        self.rows = spec.rows
        self.size = len(spec.rows)
        self._validate()
        self.is_abelian = all(self.rows[a][b] == self.rows[b][a]
                              for a in range(self.size) for b in range(a))

    def _validate(self):
        n = self.size
        if n == 0 or any(len(r) != n for r in self.rows):
            raise InvalidTable("table must be a non-empty square")
        if any(not 0 <= x < n for r in self.rows for x in r):
            raise InvalidTable("table entries out of range")
        ids = [e for e in range(n)
               if all(self.rows[e][x] == x == self.rows[x][e] for x in range(n))]
        if not ids:
            raise InvalidTable("no identity element")
        self.identity_payload = ids[0]
        self._inverse = {}
        for a in range(n):
            inverses = [b for b in range(n) if self.rows[a][b] == self.identity_payload]
            if not inverses or self.rows[inverses[0]][a] != self.identity_payload:
                raise InvalidTable(f"element {a} has no two-sided inverse")
            self._inverse[a] = inverses[0]
        if n <= AXIOM_EXHAUSTIVE_ORDER:
            triples = product(range(n), repeat=3)
        else:
            rng = make_rng()
            triples = (tuple(int(x) for x in rng.integers(n, size=3))
                       for _ in range(SAMPLE_PAIRS))
        for a, b, c in triples:
            if self.rows[self.rows[a][b]][c] != self.rows[a][self.rows[b][c]]:
                raise InvalidTable(f"associativity fails on ({a}, {b}, {c})")

    def mul(self, a, b):
        return self.rows[a][b]

    def inv(self, a):
        return self._inverse[a]

    def sort_key(self, a):
        return (a != self.identity_payload, a)

    def order(self):
        return self.size

    def _enumerate(self):
        return range(self.size)

    def generators(self):
        gens, span = [], {self.identity_payload}
        for a in self.payloads():
            if a not in span:
                gens.append(a)
                span = generated_subgroup(self, gens)
        return gens

    def normalize(self, a):
        a = int(a)
        if not 0 <= a < self.size:
            raise Mismatch(f"{a} is not an element of {self}")
        return a

    def format(self, a):
        return f'#{a}'


class ProductGroup(Group):
    def __init__(self, spec):
        super().__init__(spec)
        self.factors = [make_group(s) for s in spec.factors]
        self.is_finite = all(f.is_finite for f in self.factors)
        self.is_abelian = all(f.is_abelian for f in self.factors)
        self.identity_payload = tuple(f.identity_payload for f in self.factors)

    def mul(self, a, b):
        return tuple(f.mul(x, y) for f, x, y in zip(self.factors, a, b))

    def inv(self, a):
        return tuple(f.inv(x) for f, x in zip(self.factors, a))

    def sort_key(self, a):
        return tuple(f.sort_key(x) for f, x in zip(self.factors, a))

    def order(self):
        if not self.is_finite:
            return None
        total = 1
        for f in self.factors:
            total *= f.order()
        return total

    def _enumerate(self):
        return product(*(f.payloads() for f in self.factors))

    def generators(self):
        gens = []
        for i, f in enumerate(self.factors):
            for g in f.generators():
                e = list(self.identity_payload)
                e[i] = g
                gens.append(tuple(e))
        return gens

    def normalize(self, a):
        a = tuple(a)
        if len(a) != len(self.factors):
            raise Mismatch(f"expected {len(self.factors)} coordinates, got {a}")
        return tuple(f.normalize(x) for f, x in zip(self.factors, a))

    def random_payload(self, rng, radius=SAMPLE_RADIUS):
        return tuple(f.random_payload(rng, radius) for f in self.factors)

    def format(self, a):
        return '(' + ','.join(f.format(x) for f, x in zip(self.factors, a)) + ')'


class CentralQuotientGroup(Group):
    """G/<c>; payloads are the least coset members under the parent's sort key."""

    def __init__(self, spec):
        super().__init__(spec)
        self.parent = make_group(spec.parent)
        c = self.parent.normalize(spec.element)
        self.kernel_order = self.parent.element_order(c)
        if self.kernel_order is None:
            raise NonCentralElement(f"{self.parent.format(c)} has infinite order in {self.parent}")
        if not self.parent.is_abelian:
            if not self.parent.is_finite:
                raise Unsupported("central quotients of infinite nonabelian groups")
            for x in self.parent.payloads():
                if not self.parent.commute(c, x):
                    raise NonCentralElement(
                        f"{self.parent.format(c)} does not commute with {self.parent.format(x)}")
        self.c = c
        self._coset_powers = [self.parent.power(c, i) for i in range(self.kernel_order)]
        self.is_finite = self.parent.is_finite
        self.is_abelian = self.parent.is_abelian
        self.identity_payload = self.rep(self.parent.identity_payload)
        if not self.is_abelian and self.is_finite:
            reps = self.payloads()
            self.is_abelian = all(self.commute(a, b) for a in reps for b in reps)

    def rep(self, x):
        coset = (self.parent.mul(x, k) for k in self._coset_powers)
        return min(coset, key=self.parent.sort_key)

    def mul(self, a, b):
        return self.rep(self.parent.mul(a, b))

    def inv(self, a):
        return self.rep(self.parent.inv(a))

    def sort_key(self, a):
        return self.parent.sort_key(a)

    def order(self):
        return self.parent.order() // self.kernel_order if self.is_finite else None

    def _enumerate(self):
        return {self.rep(x) for x in self.parent.payloads()}

    def generators(self):
        gens = []
        for g in self.parent.generators():
            r = self.rep(g)
            if r != self.identity_payload and r not in gens:
                gens.append(r)
        return gens

    def normalize(self, a):
        return self.rep(self.parent.normalize(a))

    def random_payload(self, rng, radius=SAMPLE_RADIUS):
        return self.rep(self.parent.random_payload(rng, radius))

    def format(self, a):
        return '[' + self.parent.format(a) + ']'


_VARIANTS = {
    'cyclic': CyclicGroup,
    'free_abelian': FreeAbelianGroup,
    'permutation': PermGroup,
    'table': TableGroup,
    'product': ProductGroup,
    'central_quotient': CentralQuotientGroup,
}


@lru_cache(maxsize=None)
def make_group(spec):
    """Build (once per spec) the handle for a catalogue group.

    Raises:
        InvalidTable: the table variant breaks a group axiom.
        NonCentralElement: the central_quotient element is not central.
        BudgetExceeded: a finite group beyond GROUP_ORDER_CAP.
    """
    try:
        cls = _VARIANTS[spec.kind]
    except KeyError:
        raise Unsupported(f"unknown group kind {spec.kind!r}") from None
    group = cls(spec)
    if group.is_finite and group.order() > GROUP_ORDER_CAP:
        raise BudgetExceeded(f"{spec} has order {group.order()} > cap {GROUP_ORDER_CAP}")
    logger.debug("built %s (order %s)", spec, group.order())
    return group


def enumerate_group(g):
    """All elements of a finite group, identity first, deterministic order."""
    return g.elements()


def generated_subgroup(g, gens):
    """Payload set of the subgroup of a finite group generated by gens."""
    span = {g.identity_payload}
    queue = deque(span)
    while queue:
        x = queue.popleft()
        for s in gens:
            y = g.mul(x, s)
            if y not in span:
                span.add(y)
                queue.append(y)
    return frozenset(span)


def centre(g):
    """Exact centre of a finite group by exhaustive commutation."""
    elems = g.payloads()
    return [GroupElement(g, z) for z in elems if all(g.commute(z, x) for x in elems)]


def noncentral_witness(g, a):
    """Some element not commuting with a, or None if a is central."""
    for x in g.payloads():
        if not g.commute(a, x):
            return GroupElement(g, x)
    return None


def commutator_subgroup(g):
    elems = g.payloads()
    comms = {g.mul(g.mul(a, b), g.inv(g.mul(b, a))) for a in elems for b in elems}
    return generated_subgroup(g, sorted(comms, key=g.sort_key))


def is_normal(g, subgroup):
    return all(g.mul(g.mul(x, n), g.inv(x)) in subgroup
               for x in g.payloads() for n in subgroup)


def abelianization(g):
    """Ab(g) with its projection.

    Returns:
        (quotient handle, GroupHom g -> quotient). Abelian catalogue groups
        return themselves with the identity map.
    """
    if g.is_abelian:
        return g, identity_hom(g)
    if not g.is_finite:
        raise Unsupported(f"abelianization of infinite nonabelian {g}")
    k = commutator_subgroup(g)

    def key(a):
        return (a != g.identity_payload, g.sort_key(a))

    rep_of = {x: min((g.mul(x, y) for y in k), key=key) for x in g.payloads()}
    reps = sorted(set(rep_of.values()), key=key)
    slot = {r: i for i, r in enumerate(reps)}
    position = {x: slot[r] for x, r in rep_of.items()}
    rows = [[position[g.mul(a, b)] for b in reps] for a in reps]
    quotient = make_group(table(rows, label=f'Ab({g})'))
    return quotient, GroupHom(g, quotient, position.__getitem__, name='abelianization')


# =============================================================================
# Homomorphisms
# =============================================================================

class GroupHom:
    """A verified homomorphism given by a rule on payloads.

    Args:
        source, target: group handles.
        rule: payload -> payload map.
        name: label used in reports.
        verify: check multiplicativity now (exhaustive on small finite sources).
    """

    def __init__(self, source, target, rule, name='hom', verify=True, rng=None):
        self.source = source
        self.target = target
        self.name = name
        self._rule = rule
        self._cache = {}
        if verify:
            self.verify(rng)

    def apply(self, a):
        try:
            return self._cache[a]
        except KeyError:
            b = self._cache[a] = self._rule(a)
            return b

    def __call__(self, x):
        if x.group is not self.source:
            raise Mismatch(f"{self.name} expects elements of {self.source}, got {x.group}")
        return GroupElement(self.target, self.apply(x.payload))

    def __repr__(self):
        return f"<GroupHom {self.name}: {self.source} -> {self.target}>"

    def check_pairs(self, rng=None):
        """Pairs on which the law is checked: all of them, or a seeded sample."""
        src = self.source
        if src.is_finite and src.order() ** 2 <= EXHAUSTIVE_PAIR_LIMIT:
            elems = src.payloads()
            return product(elems, repeat=2), True
        rng = rng if rng is not None else make_rng()
        pairs = [(src.random_payload(rng), src.random_payload(rng)) for _ in range(SAMPLE_PAIRS)]
        return pairs, False

    def verify(self, rng=None):
        """Raise NotAHomomorphism on the first pair breaking the law.

        Returns:
            True when all pairs were checked, False for a sampled check.
        """
        pairs, exhaustive = self.check_pairs(rng)
        src, tgt = self.source, self.target
        for a, b in pairs:
            if self.apply(src.mul(a, b)) != tgt.mul(self.apply(a), self.apply(b)):
                raise NotAHomomorphism(
                    f"{self.name} breaks the law on ({src.format(a)}, {src.format(b)})",
                    witness=(a, b))
        return exhaustive

    def compose(self, inner):
        """self after inner."""
        if inner.target is not self.source:
            raise Mismatch(f"cannot compose {self.name} after {inner.name}")
        return GroupHom(inner.source, self.target, lambda a: self.apply(inner.apply(a)),
                        name=f'{self.name}*{inner.name}', verify=False)

    def kernel(self):
        e = self.target.identity_payload
        return [a for a in self.source.payloads() if self.apply(a) == e]

    def image(self):
        return {self.apply(a) for a in self.source.payloads()}

    def is_injective(self):
        return len(self.kernel()) == 1

    def is_surjective(self):
        if not self.target.is_finite:
            raise InfiniteGroup(f"surjectivity onto infinite {self.target}")
        return len(self.image()) == self.target.order()


def identity_hom(g):
    return GroupHom(g, g, lambda a: a, name='id', verify=False)


def trivial_hom(source, target):
    e = target.identity_payload
    return GroupHom(source, target, lambda a: e, name='trivial', verify=False)


def quotient_hom(quotient):
    """Projection from a central quotient's parent."""
    return GroupHom(quotient.parent, quotient, quotient.rep, name='quotient', verify=False)


def hom_from_generator_images(source, target, images, name='hom'):
    """Extend generator images to a homomorphism.

    Args:
        source: finite group, or cyclic(0) / free_abelian.
        target: any group handle.
        images: target payloads aligned with source.generators().

    Returns:
        A verified GroupHom.
    """
    gens = source.generators()
    images = [target.normalize(x) for x in images]
    if len(images) != len(gens):
        raise Mismatch(f"{source} has {len(gens)} generators, got {len(images)} images")
    if source.is_finite:
        table_ = {source.identity_payload: target.identity_payload}
        queue = deque([source.identity_payload])
        while queue:
            x = queue.popleft()
            for s, t in zip(gens, images):
                y, image = source.mul(x, s), target.mul(table_[x], t)
                if y not in table_:
                    table_[y] = image
                    queue.append(y)
                elif table_[y] != image:
                    raise NotAHomomorphism(f"images do not respect relations at {source.format(y)}")
        return GroupHom(source, target, table_.__getitem__, name=name)
    if isinstance(source, CyclicGroup):
        return GroupHom(source, target, lambda k: target.power(images[0], k), name=name)
    if isinstance(source, FreeAbelianGroup):
        def rule(v):
            out = target.identity_payload
            for t, k in zip(images, v):
                out = target.mul(out, target.power(t, k))
            return out
        return GroupHom(source, target, rule, name=name)
    raise Unsupported(f"generator extension from {source}")


def window(g, w):
    """Payloads of the exponent box [-w, w]^r (the whole group when finite)."""
    if g.is_finite:
        return g.payloads()
    if isinstance(g, CyclicGroup):
        return list(range(-w, w + 1))
    if isinstance(g, FreeAbelianGroup):
        return list(product(range(-w, w + 1), repeat=g.rank))
    if isinstance(g, ProductGroup):
        return list(product(*(window(f, w) for f in g.factors)))
    raise Unsupported(f"no support window for {g}")
