#!/usr/bin/env python3
"""
stabfin Wreath Products

Wreath products D wr G with multiplication
    (f1, g1)(f2, g2) = (f1 * g1.f2, g1 g2),   (g.f)(x) = f(g^-1 x),
their structured endomorphisms (base lifts, top pushforwards, matrix-induced
module maps), the Hopf-witness pipeline for finite abelian p-group bases, and
exhaustive structural checkers for finite instances.

Usage as a library:
    from stabfin_wreath import make_wreath, d8_nonbasic_automorphism
    W = make_wreath(cyclic(2), cyclic(2))
    phi = d8_nonbasic_automorphism()
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from itertools import product

from stabfin_config import (
    DEFAULT_BUDGET, GROUP_ORDER_CAP, SAMPLE_RADIUS, SAMPLE_SUPPORT, WREATH_SCAN_ORDER_CAP
)
from stabfin_errors import (
    BudgetExceeded, InfiniteGroup, Mismatch, NonAbelianBase, NotBasic, NotLeftInverse,
    NotSurjective, ShapeViolation, Unsupported
)
from stabfin_groups import (
    CyclicGroup, Group, GroupElement, GroupHom, GroupSpec, ProductGroup, abelianization,
    centre, cyclic, dihedral, direct_product, hom_from_generator_images,
    make_group, quotient_hom, central_quotient, window as group_window
)
from stabfin_matrices import (
    BlockShape, coefficient_ring, first_below_block, hensel_lift, is_block_upper, mat_lift
)
from stabfin_rings import GaloisField, GroupRing, IntegersMod, integers, push_terms

logger = logging.getLogger(__name__)


# =============================================================================
# Wreath products
# =============================================================================

@dataclass(frozen=True)
class WreathElement:
    """(f, top) with f a sorted tuple of (point, value) pairs, no identity values."""
    base_fn: tuple
    top: object


class WreathProduct(Group):
    def __init__(self, spec):
        super().__init__(spec)
        self.base = make_group(spec.factors[0])
        self.top = make_group(spec.factors[1])
        self.is_finite = self.base.is_finite and self.top.is_finite
        self.is_abelian = self.base.is_abelian and (
            self.top.order() == 1 or (self.base.order() == 1 and self.top.is_abelian))
        self.identity_payload = WreathElement((), self.top.identity_payload)

    # --- construction ---
    def make_payload(self, fn, top):
        """Canonical payload from a {point: value} map and a top payload."""
        e, G = self.base.identity_payload, self.top
        pairs = sorted(((x, v) for x, v in fn.items() if v != e), key=lambda t: G.sort_key(t[0]))
        return WreathElement(tuple(pairs), top)

    def from_values(self, values, top):
        """Payload from values listed in the top group's enumeration order."""
        points = self.top.payloads()
        if len(values) != len(points):
            raise Mismatch(f"expected {len(points)} base values, got {len(values)}")
        fn = {x: self.base.normalize(v) for x, v in zip(points, values)}
        return self.make_payload(fn, self.top.normalize(top))

    def point_mass(self, x, value):
        return self.make_payload({x: value}, self.top.identity_payload)

    def top_element(self, g):
        return WreathElement((), g)

    def value(self, w, x):
        for y, v in w.base_fn:
            if y == x:
                return v
        return self.base.identity_payload

    def in_base(self, w):
        return w.top == self.top.identity_payload

    # --- group law ---
    def mul(self, a, b):
        D, G = self.base, self.top
        acc = dict(a.base_fn)
        for y, v in b.base_fn:
            x = G.mul(a.top, y)
            acc[x] = D.mul(acc[x], v) if x in acc else v
        return self.make_payload(acc, G.mul(a.top, b.top))

    def inv(self, a):
        D, G = self.base, self.top
        t = G.inv(a.top)
        return self.make_payload({G.mul(t, x): D.inv(v) for x, v in a.base_fn}, t)

    def sort_key(self, a):
        D, G = self.base, self.top
        return (tuple((G.sort_key(x), D.sort_key(v)) for x, v in a.base_fn), G.sort_key(a.top))

    def order(self):
        if not self.is_finite:
            return None
        return self.base.order() ** self.top.order() * self.top.order()

    def _enumerate(self):
        if self.order() > GROUP_ORDER_CAP:
            raise BudgetExceeded(f"{self} has order {self.order()} > cap {GROUP_ORDER_CAP}")
        points = self.top.payloads()
        for values in product(self.base.payloads(), repeat=len(points)):
            fn = dict(zip(points, values))
            for t in points:
                yield self.make_payload(fn, t)

    def base_payloads(self):
        points = self.top.payloads()
        for values in product(self.base.payloads(), repeat=len(points)):
            yield self.make_payload(dict(zip(points, values)), self.top.identity_payload)

    def generators(self):
        e = self.top.identity_payload
        gens = [self.point_mass(e, d) for d in self.base.generators()]
        return gens + [self.top_element(g) for g in self.top.generators()]

    def normalize(self, a):
        if isinstance(a, WreathElement):
            return self.make_payload({self.top.normalize(x): self.base.normalize(v)
                                      for x, v in a.base_fn}, self.top.normalize(a.top))
        fn, top = a
        if isinstance(fn, dict):
            return self.make_payload({self.top.normalize(x): self.base.normalize(v)
                                      for x, v in fn.items()}, self.top.normalize(top))
        return self.from_values(list(fn), top)

    def random_payload(self, rng, radius=SAMPLE_RADIUS):
        G, D = self.top, self.base
        if G.is_finite:
            points = G.payloads()
        else:
            points = [G.random_payload(rng, radius) for _ in range(SAMPLE_SUPPORT)]
        fn = {x: D.random_payload(rng, radius) for x in points}
        return self.make_payload(fn, G.random_payload(rng, radius))

    def format(self, a):
        G, D = self.top, self.base
        if G.is_finite:
            vals = ','.join(D.format(self.value(a, x)) for x in G.payloads())
        else:
            vals = '{' + ', '.join(f'{G.format(x)}:{D.format(v)}' for x, v in a.base_fn) + '}'
        return f'(({vals}),{G.format(a.top)})'


def wreath_spec(base_spec, top_spec):
    return GroupSpec('wreath', factors=(base_spec, top_spec), label=f'{base_spec}wr{top_spec}')


@lru_cache(maxsize=None)
def make_wreath(base_spec, top_spec):
    """Handle for base wr top, cached per pair of specs."""
    return WreathProduct(wreath_spec(base_spec, top_spec))


def wreath_mul(u, v):
    if not isinstance(u.group, WreathProduct):
        raise Mismatch(f"{u.group} is not a wreath product")
    return u * v


# =============================================================================
# Endomorphisms
# =============================================================================

class WreathEndo(GroupHom):
    """A verified homomorphism between wreath products, tagged by constructor."""

    def __init__(self, source, target, rule, kind, params=None, name=None,
                 verify=True, rng=None):
        self.kind = kind
        self.params = params or {}
        super().__init__(source, target, rule, name=name or kind, verify=verify, rng=rng)

    def non_basic_witness(self):
        """A base generator sent outside the target base, or None.

        The base group is normal and normally generated by point masses at
        the identity, so checking those decides basic-ness.
        """
        W = self.source
        if not isinstance(self.target, WreathProduct):
            return None
        e = W.top.identity_payload
        for d in W.base.payloads() if W.base.is_finite else W.base.generators():
            w = W.point_mass(e, d)
            if not self.target.in_base(self.apply(w)):
                return w
        return None

    def is_basic(self):
        return self.non_basic_witness() is None


def hom_from_base_epi(phi, top):
    """(f, g) -> (phi o f, g) from D wr top to D' wr top."""
    source = make_wreath(phi.source.spec, top.spec)
    target = make_wreath(phi.target.spec, top.spec)

    def rule(w):
        return target.make_payload({x: phi.apply(v) for x, v in w.base_fn}, w.top)

    return WreathEndo(source, target, rule, 'base_lift', {'phi': phi.name},
                      name=f'base_lift({phi.name})')


def hom_from_top_epi(phi, A):
    """(f, g) -> (phi_* f, phi(g)) from A wr G to A wr G'; A abelian.

    Raises:
        NonAbelianBase: A is not abelian.
    """
    if not A.is_abelian:
        raise NonAbelianBase(f"pushforward needs an abelian base, got {A}")
    source = make_wreath(A.spec, phi.source.spec)
    target = make_wreath(A.spec, phi.target.spec)

    def rule(w):
        pushed = push_terms(w.base_fn, phi.apply, A.mul, A.identity_payload)
        return target.make_payload(pushed, phi.apply(w.top))

    return WreathEndo(source, target, rule, 'top_push', {'phi': phi.name},
                      name=f'top_push({phi.name})')


def module_moduli(D):
    """Coordinate moduli of a finite abelian base given as cyclic factors."""
    if isinstance(D, CyclicGroup) and D.n:
        return [D.n]
    if isinstance(D, ProductGroup) and all(isinstance(f, CyclicGroup) and f.n for f in D.factors):
        return [f.n for f in D.factors]
    raise NonAbelianBase(f"{D} is not a product of finite cyclic groups")


def module_spec(moduli):
    if len(moduli) == 1:
        return cyclic(moduli[0])
    return direct_product(*(cyclic(m) for m in moduli))


def _coords(D, v):
    return (v,) if isinstance(D, CyclicGroup) else v


def _from_coords(D, vec):
    return vec[0] if isinstance(D, CyclicGroup) else tuple(vec)


def _integer_entries(Y):
    """Matrix entries as integer (point, coefficient) tuples."""
    return [[tuple((g, int(c)) for g, c in Y.rows[j][k].terms) for k in range(Y.d)]
            for j in range(Y.d)]


def _module_rule(source, target, table):
    """v -> vT on base functions, coordinate c of the result taken mod its modulus.

    table[j][k] holds (point, integer) terms; tops are left unchanged.
    """
    G, D_in, D_out = source.top, source.base, target.base
    moduli = module_moduli(D_out)

    def rule(w):
        acc = {}
        for x, value in w.base_fn:
            for j, a in enumerate(_coords(D_in, value)):
                if not a:
                    continue
                for k, entry in enumerate(table[j]):
                    for y, b in entry:
                        vec = acc.setdefault(G.mul(x, y), [0] * len(moduli))
                        vec[k] += a * b
        fn = {pos: _from_coords(D_out, [c % m for c, m in zip(vec, moduli)])
              for pos, vec in acc.items()}
        return target.make_payload(fn, w.top)

    return rule


def endo_from_matrix(n, d, Y):
    """(v, g) -> (vY, g) on (Z/n)^d wr G for a d x d matrix Y over (Z/n)[G]."""
    base = Y.base
    if not isinstance(base, GroupRing) or Y.d != d:
        raise Mismatch(f"expected a {d}x{d} matrix over (Z/{n})[G], got {base}")
    R = base.ring
    if not ((isinstance(R, IntegersMod) and R.n == n)
            or (isinstance(R, GaloisField) and R.k == 1 and R.p == n)):
        raise Mismatch(f"coefficients {R} do not match Z/{n}")
    W = make_wreath(module_spec([n] * d), base.group.spec)
    return WreathEndo(W, W, _module_rule(W, W, _integer_entries(Y)), 'matrix_induced',
                      {'n': n, 'Y': Y}, name=f'matrix({Y!r})')


def explicit_endo(source, target, mapping, name='explicit'):
    """Endomorphism from a payload table or rule."""
    rule = mapping.__getitem__ if isinstance(mapping, dict) else mapping
    return WreathEndo(source, target, rule, 'explicit', name=name)


def composite_endo(*maps):
    """maps[0] after maps[1] after ...; each already verified."""
    maps = list(maps)
    for outer, inner in zip(maps, maps[1:]):
        if inner.target is not outer.source:
            raise Mismatch(f"cannot compose {outer.name} after {inner.name}")

    def rule(w):
        for m in reversed(maps):
            w = m.apply(w)
        return w

    return WreathEndo(maps[-1].source, maps[0].target, rule, 'composite',
                      {'parts': [m.name for m in maps]},
                      name='*'.join(m.name for m in maps), verify=False)


def endo_record(phi):
    """Report fields for one endomorphism."""
    exhaustive = phi.verify()
    record = {'construct': phi.name, 'kind': getattr(phi, 'kind', 'hom'),
              'verified_law': 'exhaustive' if exhaustive else 'sampled',
              'witnesses': []}
    if phi.source.is_finite and phi.target.is_finite:
        kernel = phi.kernel()
        record.update({
            'source_order': phi.source.order(), 'target_order': phi.target.order(),
            'kernel_order': len(kernel), 'image_order': len(phi.image()),
            'injective': len(kernel) == 1, 'surjective': phi.is_surjective(),
        })
    if isinstance(phi, WreathEndo):
        witness = phi.non_basic_witness()
        record['non_basic'] = witness is not None
        if witness is not None:
            record['non_basic_witness'] = phi.source.format(witness)
    return record


def automorphism_order(phi, cap=64):
    """Least k with phi^k the identity, checked on every element of a finite source."""
    W = phi.source
    elems = W.payloads()
    current = {w: phi.apply(w) for w in elems}
    for k in range(1, cap + 1):
        if all(current[w] == w for w in elems):
            return k
        current = {w: phi.apply(v) for w, v in current.items()}
    return None


# =============================================================================
# The D8 example
# =============================================================================

def d8_nonbasic_automorphism():
    """The outer automorphism of C2 wr C2 = D8 swapping the two reflection classes.

    With r = ((1,0),1) and s = ((1,0),0) it fixes r and sends s to rs:
        ((x,y),0) -> ((x,x), x+y)
        ((x,y),1) -> ((y+1,y), x+y)
    A base element ((0,1),0) lands on ((0,0),1), outside the base.
    """
    W = make_wreath(cyclic(2), cyclic(2))

    def rule(w):
        x, y = W.value(w, 0), W.value(w, 1)
        if w.top == 0:
            return W.from_values([x, x], (x + y) % 2)
        return W.from_values([(y + 1) % 2, y], (x + y) % 2)

    return WreathEndo(W, W, rule, 'explicit', {'example': 'd8'}, name='d8_outer')


def d8_isomorphism():
    """Verified isomorphism D8 -> C2 wr C2 sending rotation to r and reflection to s."""
    W = make_wreath(cyclic(2), cyclic(2))
    D8 = make_group(dihedral(8))
    r, s = W.from_values([1, 0], 1), W.from_values([1, 0], 0)
    # dihedral(8) lists the rotation first, then the reflection
    hom = hom_from_generator_images(D8, W, [r, s], name='D8->C2wrC2')
    if not (hom.is_injective() and hom.is_surjective()):
        raise NotSurjective("D8 generator images do not give a bijection")
    return hom


# =============================================================================
# Centre and abelianization
# =============================================================================

def _check_scan(W, cap=WREATH_SCAN_ORDER_CAP):
    if not W.is_finite:
        raise InfiniteGroup(f"{W} is infinite")
    if W.order() > cap:
        raise BudgetExceeded(f"{W} has order {W.order()} > scan cap {cap}")


def centre_of_wreath(W):
    """Exact centre of a finite wreath product."""
    _check_scan(W)
    return centre(W)


def augment_abelianize(w, W=None):
    """(epsilon(f), Ab(g)) for an element of A wr G with A abelian."""
    W = W or w.group
    A = W.base
    if not A.is_abelian:
        raise NonAbelianBase(f"augmentation needs an abelian base, got {A}")
    _, ab = abelianization(W.top)
    eps = A.identity_payload
    for _, v in w.payload.base_fn:
        eps = A.mul(eps, v)
    return GroupElement(A, eps), GroupElement(ab.target, ab.apply(w.payload.top))


def abelianization_hom(W):
    """The verified map A wr G -> A x Ab(G), (f, g) -> (epsilon(f), Ab(g)).

    Returns:
        (GroupHom, report dict with kernel-order and surjectivity checks).
    """
    A = W.base
    if not A.is_abelian:
        raise NonAbelianBase(f"augmentation needs an abelian base, got {A}")
    quotient, ab = abelianization(W.top)
    target = make_group(direct_product(A.spec, quotient.spec))

    def rule(w):
        eps = A.identity_payload
        for _, v in w.base_fn:
            eps = A.mul(eps, v)
        return (eps, ab.apply(w.top))

    hom = GroupHom(W, target, rule, name='augment_abelianize')
    report = {'target': str(target)}
    if W.is_finite:
        kernel = len(hom.kernel())
        expected = W.order() // (A.order() * quotient.order())
        report.update({'kernel_order': kernel, 'expected_kernel_order': expected,
                       'surjective': hom.is_surjective(), 'ok': kernel == expected})
    return hom, report


# =============================================================================
# Abelian normal subgroups
# =============================================================================

def _normal_closure(W, x, elems):
    gens = {W.mul(W.mul(g, x), W.inv(g)) for g in elems}
    span = {W.identity_payload}
    frontier = list(span)
    while frontier:
        nxt = []
        for a in frontier:
            for s in gens:
                b = W.mul(a, s)
                if b not in span:
                    span.add(b)
                    nxt.append(b)
        frontier = nxt
    return frozenset(span)


def _is_abelian_set(W, subset):
    items = list(subset)
    return all(W.commute(a, b) for i, a in enumerate(items) for b in items[:i])


def abelian_normal_subgroups(W):
    """Every abelian normal subgroup of a finite group, as payload sets.

    Seeds are the abelian normal closures of single elements; products of
    commuting normal subgroups are normal and abelian, so closing the seeds
    under such products reaches every abelian normal subgroup.
    """
    elems = W.payloads()
    seeds = set()
    for x in elems:
        n = _normal_closure(W, x, elems)
        if _is_abelian_set(W, n):
            seeds.add(n)
    found = set(seeds)
    frontier = set(seeds)
    while frontier:
        new = set()
        for n1 in frontier:
            for n2 in seeds:
                if n2 <= n1 or not all(W.commute(a, b) for a in n1 for b in n2):
                    continue
                joined = frozenset(W.mul(a, b) for a in n1 for b in n2)
                if joined not in found:
                    new.add(joined)
        found |= new
        frontier = new
        logger.debug("abelian normal scan: %d subgroups so far", len(found))
    return sorted(found, key=lambda s: (len(s), sorted(W.sort_key(a) for a in s)))


def classify_abelian_normal(W):
    """Check the structure of non-basic abelian normal subgroups of A wr G.

    For each non-basic N: (1) A has exponent 2; (2) the tops of N are
    {1, g} with g central of order 2 in G; (3) N is the kernel of
    A wr G -> A wr (G/<g>). A failure of (3) over a finite G is recorded as
    expected, any other failure as real.
    """
    _check_scan(W)
    A, G = W.base, W.top
    if not A.is_abelian:
        raise NonAbelianBase(f"{W} has a nonabelian base")
    records = []
    exponent_two = all(A.mul(a, a) == A.identity_payload for a in A.payloads())
    for N in abelian_normal_subgroups(W):
        tops = {w.top for w in N}
        record = {'order': len(N), 'elements': sorted(W.format(w) for w in N),
                  'basic': tops == {G.identity_payload}}
        if not record['basic']:
            record['conclusions'] = _conclusions(W, N, tops, exponent_two)
        records.append(record)
    failures = [r for r in records if not r['basic']
                for c in r['conclusions'].values() if c['status'] == 'fail' and not c['expected']]
    expected = [r for r in records if not r['basic']
                for c in r['conclusions'].values() if c['status'] == 'fail' and c['expected']]
    logger.info("%s: %d abelian normal subgroups, %d non-basic", W, len(records),
                sum(not r['basic'] for r in records))
    return {'wreath': str(W), 'order': W.order(), 'subgroups': records,
            'non_basic': sum(not r['basic'] for r in records),
            'failures': len(failures), 'expected_failures': len(expected)}


def _conclusions(W, N, tops, exponent_two):
    G = W.top
    out = {'exponent_2': {'status': 'pass' if exponent_two else 'fail', 'expected': False}}
    nontrivial = tops - {G.identity_payload}
    g = next(iter(nontrivial)) if len(nontrivial) == 1 else None
    central_involution = (g is not None and G.mul(g, g) == G.identity_payload
                          and all(G.commute(g, x) for x in G.payloads()))
    out['central_involution'] = {'status': 'pass' if central_involution else 'fail',
                                 'expected': False,
                                 'top': G.format(g) if g is not None else None}
    if not central_involution:
        out['kernel_equality'] = {'status': 'skipped', 'expected': False}
        return out
    Q = make_group(central_quotient(G.spec, g))
    kernel = frozenset(hom_from_top_epi(quotient_hom(Q), W.base).kernel())
    equal = kernel == N
    out['kernel_equality'] = {'status': 'pass' if equal else 'fail',
                              'expected': not equal and G.is_finite,
                              'kernel_order': len(kernel)}
    return out


# =============================================================================
# Normalizing basic epimorphisms
# =============================================================================

def normalize_basic_endo(phi):
    """Turn a basic epimorphism of finite wreath products into one fixing tops.

    With alpha(g) the top of phi((0, g)), psi0(f, g) = (phi(f), alpha(g)) is a
    homomorphism, and psi = T o psi0 with T the pushforward along alpha^-1
    satisfies psi(f, g) = (alpha^-1_* phi(f), g).

    Returns:
        (psi, certificate dict).

    Raises:
        NotSurjective: phi is not onto.
        NotBasic: phi moves the base out of the base.
    """
    W, V = phi.source, phi.target
    if not (isinstance(W, WreathProduct) and isinstance(V, WreathProduct)):
        raise Mismatch("normalize_basic_endo needs wreath products")
    _check_scan(W)
    _check_scan(V)
    if V.top is not W.top:
        raise Unsupported("normalization needs the same top group on both sides")
    if not phi.is_surjective():
        raise NotSurjective(f"{phi.name} is not surjective")
    if not isinstance(phi, WreathEndo):
        phi = WreathEndo(W, V, phi.apply, 'explicit', name=phi.name, verify=False)
    witness = phi.non_basic_witness()
    if witness is not None:
        raise NotBasic(f"{phi.name} sends {W.format(witness)} outside the base")
    G = W.top
    alpha_table = {g: phi.apply(W.top_element(g)).top for g in G.payloads()}
    alpha = GroupHom(G, G, alpha_table.__getitem__, name='alpha')
    inverse_table = {v: k for k, v in alpha_table.items()}
    alpha_inv = GroupHom(G, G, inverse_table.__getitem__, name='alpha^-1')
    def psi0(w):
        image = phi.apply(W.make_payload(dict(w.base_fn), G.identity_payload))
        return V.make_payload(dict(image.base_fn), alpha.apply(w.top))

    psi0_endo = WreathEndo(W, V, psi0, 'explicit', name='psi0')
    twist = hom_from_top_epi(alpha_inv, V.base)
    psi = composite_endo(twist, psi0_endo)
    psi.verify()
    ker_psi, ker_phi = frozenset(psi.kernel()), frozenset(phi.kernel())
    certificate = {
        'kernel_order_psi': len(ker_psi), 'kernel_order_phi': len(ker_phi),
        'kernels_in_base': all(W.in_base(w) for w in ker_psi | ker_phi),
        'kernels_equal': ker_psi == ker_phi,
        'tops_fixed': all(psi.apply(w).top == w.top for w in W.payloads()),
        'alpha_identity': all(k == v for k, v in alpha_table.items()),
    }
    certificate['ok'] = (certificate['kernel_order_psi'] == certificate['kernel_order_phi']
                         and certificate['kernels_in_base'] and certificate['tops_fixed'])
    return psi, certificate


def top_automorphism_endo(A, images, top):
    """T(f, g) = (alpha_* f, alpha(g)) for the top automorphism alpha given on generators."""
    alpha = hom_from_generator_images(top, top, images, name='alpha')
    return hom_from_top_epi(alpha, A)


# =============================================================================
# Hopf-witness pipeline over finite abelian p-groups
# =============================================================================

@dataclass(frozen=True)
class PGroupBasis:
    """P = sum over k of (Z/p^k)^{d_k}, with parts = (d_1, ..., d_M)."""
    p: int
    parts: tuple

    def __post_init__(self):
        if not self.parts or any(d < 0 for d in self.parts) or not any(self.parts):
            raise ValueError(f"parts must be nonnegative with one positive, got {self.parts}")

    def levels(self, i=1):
        """(k, j) labels of the generators a_{k,j} with k >= i, in index order."""
        return [(k, j) for k, d in enumerate(self.parts, start=1) if k >= i for j in range(d)]

    def index(self, k, j, i=1):
        """f(k, j) = d_i + ... + d_{k-1} + j."""
        return sum(self.parts[i - 1:k - 1]) + j

    def moduli(self, i=1):
        return [self.p ** k for k, _ in self.levels(i)]

    def shape(self, i=1):
        return BlockShape(tuple(d for d in self.parts[i - 1:] if d))

    def labels(self, i=1):
        return [f'a_{k},{j + 1}' for k, j in self.levels(i)]

    def torsion_labels(self, i=1):
        return [f'b_{k},{j + 1}' for k, j in self.levels(i)]

    def top_level(self):
        return max(k for k, d in enumerate(self.parts, start=1) if d)


def _scaled_table(basis, i, M):
    """Entries p^(r-k) m_{f(k,j), f(r,s)} for r >= k and 0 below, as integer terms."""
    levels = basis.levels(i)
    p = basis.p
    table = []
    for a, (k, _) in enumerate(levels):
        row = []
        for b, (r, _) in enumerate(levels):
            if r < k:
                row.append(())
            else:
                row.append(tuple((g, p ** (r - k) * int(c)) for g, c in M.rows[a][b].terms))
        table.append(row)
    return table


def hopf_witness_pipeline(basis, i, Y, Z, window=None, budget=DEFAULT_BUDGET):
    """Build phi~ and its right inverse psi on P_i wr G from a block-upper unit Y.

    Args:
        basis: the p-group P.
        i: truncation level; P_i keeps the summands (Z/p^k)^{d_k} with k >= i.
        Y: block-upper for basis.shape(i) over F_p[G].
        Z: a left inverse of Y.
        window: support window for the kernel scan over infinite G.

    Returns:
        (phi~, psi, report) where report holds the generator identity checks,
        the V-containment check and the kernel scan.

    Raises:
        NotLeftInverse: ZY != I.
        ShapeViolation: Y or Z is not block-upper.
    """
    base = Y.base
    if not isinstance(base, GroupRing) or not isinstance(base.ring, GaloisField) \
            or base.ring.q != basis.p:
        raise Mismatch(f"Y must live over F_{basis.p}[G], got {base}")
    shape = basis.shape(i)
    if shape.total != Y.d:
        raise Mismatch(f"Y is {Y.d}x{Y.d}, P_{i} has {shape.total} generators")
    if not is_block_upper(Y, shape):
        raise ShapeViolation(f"Y has a nonzero entry at {first_below_block(Y, shape)}")
    if not (Z * Y).is_identity():
        raise NotLeftInverse("ZY != I")
    if not is_block_upper(Z, shape):
        raise ShapeViolation(f"Z has a nonzero entry at {first_below_block(Z, shape)}")
    p, G = basis.p, base.group
    M = basis.top_level()
    Yt, Zt = _integer_lift(Y), _integer_lift(Z)
    Zbar = hensel_lift(Zt, Yt, p, M)
    moduli = basis.moduli(i)
    W = make_wreath(module_spec(moduli), G.spec)
    phi = WreathEndo(W, W, _module_rule(W, W, _scaled_table(basis, i, Yt)), 'matrix_induced',
                     {'p': p, 'i': i, 'Y': Y}, name='phi~')
    psi = WreathEndo(W, W, _module_rule(W, W, _scaled_table(basis, i, Zbar)), 'matrix_induced',
                     {'p': p, 'i': i, 'Z': Zbar}, name='psi')
    e = G.identity_payload
    labels = basis.labels(i)
    identity_checks = []
    for c, label in enumerate(labels):
        coords = [0] * len(moduli)
        coords[c] = 1
        gen = W.point_mass(e, _from_coords(W.base, coords))
        identity_checks.append({'generator': label, 'ok': phi.apply(psi.apply(gen)) == gen})
    report = {
        'p': p, 'parts': list(basis.parts), 'i': i, 'wreath': str(W), 'hensel_power': M,
        'identity_on_generators': all(r['ok'] for r in identity_checks),
        'generator_checks': identity_checks,
        'v_containment': _v_containment(basis, i, W, phi),
        'kernel': _kernel_scan(W, phi, window, budget),
    }
    report['ok'] = (report['identity_on_generators'] and report['v_containment']['ok']
                    and report['kernel'].get('kernel_order', 1) == 1)
    return phi, psi, report


def _integer_lift(Y):
    """Lift to Z[G] with coefficients in [0, p)."""
    if coefficient_ring(Y.base) is integers():
        return Y
    return mat_lift(Y)


def _v_containment(basis, i, W, phi):
    """phi~(b_{k,j}) has no component below level k and components in p^(r-1)Z/p^r."""
    p = basis.p
    levels = basis.levels(i)
    e = W.top.identity_payload
    failures = []
    for c, (k, j) in enumerate(levels):
        coords = [0] * len(levels)
        coords[c] = p ** (k - 1)
        image = phi.apply(W.point_mass(e, _from_coords(W.base, coords)))
        for _, value in image.base_fn:
            for (r, _), x in zip(levels, _coords(W.base, value)):
                if (r < k and x) or (r >= k and x % p ** (r - 1)):
                    failures.append(f'b_{k},{j + 1}')
                    break
    return {'ok': not failures, 'failures': sorted(set(failures))}


def _kernel_scan(W, phi, window, budget):
    """Kernel of phi~ on base functions; phi~ fixes tops so the kernel lies in the base."""
    G = W.top
    points = G.payloads() if G.is_finite else list(group_window(G, 1 if window is None else window))
    size = W.base.order() ** len(points)
    if size > budget:
        return {'skipped': True, 'reason': f'{size} base functions exceed budget {budget}',
                'bounded': not G.is_finite}
    kernel = 0
    for values in product(W.base.payloads(), repeat=len(points)):
        w = W.make_payload(dict(zip(points, values)), G.identity_payload)
        if phi.apply(w) == W.identity_payload:
            kernel += 1
    report = {'kernel_order': kernel, 'scanned': size, 'bounded': not G.is_finite}
    if G.is_finite:
        report['bijective'] = kernel == 1
    return report


def reference_endo(name):
    """Named endomorphisms for scenarios: the D8 example."""
    if name == 'd8':
        return d8_nonbasic_automorphism()
    raise Unsupported(f"unknown reference endomorphism {name!r}")
