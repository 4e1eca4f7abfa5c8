#!/usr/bin/env python3
"""
stabfin Local Embeddings

Finite-domain ring maps that preserve every sum and product landing back in
the domain, built for fields of characteristic p given as towers over F_p:

    F_p -> K1 = F_p[x]/(P) -> K2 = K1(t) -> ...

Each tower step is peeled from the top:
    algebraic steps      coefficient sets E and D, base embedding of D, then
                         a root t' of the transported minimal polynomial in
                         some GF(p^k) found by exhaustive search
    transcendental steps coefficient sets E, E2, A, A' lifting the base
                         embedding to G(t), then evaluation at an alpha that
                         avoids every root that could break injectivity
Finite fields finally go into k x k matrices over F_p by the regular
representation on the power basis.

Every constructor runs verify_local_embedding before returning.

Usage as a library:
    from stabfin_localembed import build_tower, algebraic_step, local_embed_pipeline
    tower = build_tower(2, [algebraic_step((1, 1, 1), 'x')])
    w = local_embed_pipeline(tower, tower.top.payloads())
"""

import logging
from dataclasses import dataclass, field, replace
from itertools import product

import numpy as np

from stabfin_config import (
    DEFAULT_BUDGET, FIELD_VERIFY_LIMIT, MAX_EXTENSION_DOUBLINGS, SAMPLE_PAIRS, make_rng
)
from stabfin_errors import (
    BaseEmbeddingUnavailable, BudgetExceeded, Mismatch, NotAHomomorphism, Unsupported,
    UsageError
)
from stabfin_matrices import RingMatrix, format_matrix, identity, matrix
from stabfin_rings import (
    GaloisField, RationalFunctionField, RingScalar, SimpleExtension, field_embedding, group_ring,
    make_gf, poly_add, poly_eval, poly_format, poly_mul, poly_roots, poly_sub, rat_fun,
    simple_extension
)

logger = logging.getLogger(__name__)


# =============================================================================
# Witnesses and the verifier
# =============================================================================

@dataclass(frozen=True)
class MatrixAlgebra:
    """M_d(F_p) as a codomain."""
    field: GaloisField
    d: int

    @property
    def one(self):
        return identity(self.field, self.d)

    def __str__(self):
        return f'M_{self.d}({self.field})'


@dataclass(frozen=True, eq=False)
class LocalEmbeddingWitness:
    """Finite map source -> target on a domain of source payloads.

    Values are target elements (RingScalar or RingMatrix); sums and products
    are computed in the source on payloads and in the target on values.
    """
    source: object
    target: object
    mapping: tuple              # ((source payload, target value), ...)
    checked_sums: tuple = ()
    checked_products: tuple = ()
    info: dict = field(default_factory=dict, compare=False)

    @property
    def domain(self):
        return [x for x, _ in self.mapping]

    def apply(self, x):
        return self.table()[x]

    def table(self):
        return dict(self.mapping)

    def images(self):
        return [v for _, v in self.mapping]

    def format_mapping(self):
        return [[self.source.format(x), repr(v)] for x, v in self.mapping]


@dataclass(frozen=True)
class Verified:
    sums: tuple
    products: tuple


@dataclass(frozen=True)
class Violation:
    condition: str      # identity, injective, sum or product
    triple: tuple


def verify_local_embedding(w):
    """Check identity preservation, injectivity, then every in-domain sum and product."""
    S = w.source
    f = w.table()
    fmt = S.format
    if S.one_payload in f and f[S.one_payload] != w.target.one:
        return Violation('identity', (fmt(S.one_payload), repr(f[S.one_payload]),
                                      repr(w.target.one)))
    seen = {}
    for x, v in w.mapping:
        if v in seen:
            return Violation('injective', (fmt(seen[v]), fmt(x), repr(v)))
        seen[v] = x
    sums, products = [], []
    for x, y in product(f, repeat=2):
        s = S.add(x, y)
        if s in f:
            if f[s] != f[x] + f[y]:
                return Violation('sum', (fmt(x), fmt(y), fmt(s)))
            sums.append((x, y, s))
        m = S.mul(x, y)
        if m in f:
            if f[m] != f[x] * f[y]:
                return Violation('product', (fmt(x), fmt(y), fmt(m)))
            products.append((x, y, m))
    return Verified(tuple(sums), tuple(products))


def _certify(w):
    result = verify_local_embedding(w)
    if isinstance(result, Violation):
        raise NotAHomomorphism(
            f"{w.source} -> {w.target}: {result.condition} condition fails on {result.triple}",
            witness=result)
    logger.debug("verified %s -> %s on %d elements (%d sums, %d products)", w.source, w.target,
                 len(w.mapping), len(result.sums), len(result.products))
    return replace(w, checked_sums=result.sums, checked_products=result.products)


def _sorted_domain(domain):
    return sorted(set(domain))


def inclusion_witness(source, domain, target=None):
    """Restriction of the inclusion of a finite field into itself or a larger GF."""
    target = target or source
    if target is source:
        image = lambda a: RingScalar(source, a)
    else:
        table = field_embedding(source, target)
        image = lambda a: RingScalar(target, table[a])
    w = LocalEmbeddingWitness(source, target, tuple((x, image(x)) for x in _sorted_domain(domain)),
                              info={'stage': 'inclusion'})
    return _certify(w)


def compose_witnesses(first, second):
    """x -> second(first(x)); second must cover the images of first."""
    table = second.table()
    mapping = []
    for x, v in first.mapping:
        if v.payload not in table:
            raise Mismatch(f"{second.source} witness does not cover {v!r}")
        mapping.append((x, table[v.payload]))
    stages = first.info.get('stages', [first.info]) + second.info.get('stages', [second.info])
    return _certify(LocalEmbeddingWitness(first.source, second.target, tuple(mapping),
                                          info={'stage': 'composite', 'stages': stages}))


def witness_record(w):
    return {
        'source': str(w.source), 'target': str(w.target), 'domain_size': len(w.mapping),
        'mapping': w.format_mapping(), 'sums_checked': len(w.checked_sums),
        'products_checked': len(w.checked_products),
        'info': {k: v for k, v in w.info.items()},
    }


# =============================================================================
# Finite fields into matrices over F_p
# =============================================================================

class MatrixEmbedding:
    """Regular representation GF(p^k) -> M_k(F_p).

    Row i of the image of a holds the coordinates of a * x^i, so u -> uM is
    multiplication by a on coordinate row vectors.
    """

    def __init__(self, F):
        self.field = F
        self.prime = make_gf(F.p)
        self.d = F.k
        self.codomain = MatrixAlgebra(self.prime, self.d)
        self._powers = [F.one_payload]
        for _ in range(self.d - 1):
            self._powers.append(F.mul(self._powers[-1], F.generator_payload))
        self.pairs_checked = 0
        self.exhaustive = False

    def rows(self, a):
        F = self.field
        return [F.vector(F.mul(a, xi)) for xi in self._powers]

    def image(self, a):
        return matrix(self.prime, self.rows(a))

    def array(self, payloads):
        return np.array([self.rows(int(a)) for a in payloads], dtype=np.int64)

    def check(self, rng=None):
        """All |F|^2 pairs for |F| <= FIELD_VERIFY_LIMIT, else SAMPLE_PAIRS sampled pairs."""
        F, p, q = self.field, self.field.p, self.field.q
        table = None
        if q <= FIELD_VERIFY_LIMIT:
            xs = np.arange(q)
            a_idx, b_idx = np.repeat(xs, q), np.tile(xs, q)
            table = self.array(range(q))
            self.exhaustive = True
        else:
            rng = rng if rng is not None else make_rng()
            a_idx = rng.integers(q, size=SAMPLE_PAIRS)
            b_idx = rng.integers(q, size=SAMPLE_PAIRS)

        def mats(idx):
            return table[idx] if table is not None else self.array(idx.tolist())

        A, B = F.field(a_idx), F.field(b_idx)
        Ma, Mb = mats(a_idx), mats(b_idx)
        products = np.einsum('nij,njk->nik', Ma, Mb) % p
        if not np.array_equal(products, mats((A * B).view(np.ndarray))):
            raise NotAHomomorphism(f"regular representation of {F} is not multiplicative")
        if not np.array_equal((Ma + Mb) % p, mats((A + B).view(np.ndarray))):
            raise NotAHomomorphism(f"regular representation of {F} is not additive")
        distinct = np.unique(a_idx)
        if len({m.tobytes() for m in mats(distinct)}) != len(distinct):
            raise NotAHomomorphism(f"regular representation of {F} is not injective")
        if not np.array_equal(self.array([F.one_payload])[0], np.eye(self.d, dtype=np.int64)):
            raise NotAHomomorphism(f"regular representation of {F} moves the identity")
        self.pairs_checked = len(a_idx)
        return self

    def modulus_vanishes(self):
        """P(M_x) = 0 for the defining polynomial P."""
        M = self.image(self.field.generator_payload)
        acc = None
        power = identity(self.prime, self.d)
        for c in self.field.modulus_coeffs():
            term = power.map(lambda e, c=c: e * c, self.prime)
            acc = term if acc is None else acc + term
            power = power * M
        return all(e.is_zero() for row in acc.rows for e in row)

    def restrict(self, domain):
        w = LocalEmbeddingWitness(
            self.field, self.codomain,
            tuple((a, self.image(a)) for a in _sorted_domain(domain)),
            info={'stage': 'regular_representation', 'field': str(self.field),
                  'modulus': self.field.format_modulus(), 'd': self.d})
        return _certify(w)

    def report(self):
        return {'field': str(self.field), 'modulus': self.field.format_modulus(), 'd': self.d,
                'generator_matrix': format_matrix(self.image(self.field.generator_payload)),
                'pairs_checked': self.pairs_checked, 'exhaustive': self.exhaustive,
                'modulus_vanishes': self.modulus_vanishes()}


def embed_gf_into_matrices(F, rng=None):
    """Verified regular representation of a finite field."""
    if not isinstance(F, GaloisField):
        raise Unsupported(f"matrix embedding needs a GF field, got {F}")
    emb = MatrixEmbedding(F).check(rng)
    logger.info("%s -> M_%d(F%d): %d pairs checked", F, emb.d, F.p, emb.pairs_checked)
    return emb


# =============================================================================
# Transcendental steps over a finite field: evaluation
# =============================================================================

def _cross_differences(F, fractions):
    out = []
    for (a, b), (c, d) in product(fractions, repeat=2):
        if (a, b) < (c, d):
            diff = poly_sub(F, poly_mul(F, a, d), poly_mul(F, b, c))
            if diff:
                out.append(diff)
    return out


def local_embed_eval(source, domain, avoid_numerator_roots=True,
                     max_doublings=MAX_EXTENSION_DOUBLINGS):
    """Evaluate a finite subset of K(t), K a GF, at a safe alpha.

    alpha avoids the roots of all denominators, of all numerators (unless
    avoid_numerator_roots is False) and of every cross difference
    p*s - q*r. K is scanned in payload order; when every element is forbidden
    the scan moves to GF(p^2k).
    """
    if not isinstance(source, RationalFunctionField) or not isinstance(source.base, GaloisField):
        raise Unsupported(f"evaluation embeddings need K(t) with K finite, got {source}")
    K = source.base
    domain = _sorted_domain(domain)
    forbidden_polys = [den for _, den in domain]
    if avoid_numerator_roots:
        forbidden_polys += [num for num, _ in domain if num]
    forbidden_polys += _cross_differences(K, domain)
    G, alpha = K, None
    for step in range(max_doublings + 1):
        emb = field_embedding(K, G)
        forbidden = set()
        for poly in forbidden_polys:
            forbidden.update(poly_roots(G, tuple(emb[c] for c in poly)))
        if len(forbidden) < G.q:
            alpha = next(a for a in range(G.q) if a not in forbidden)
            break
        logger.info("every element of %s is forbidden (%d roots); extending", G, len(forbidden))
        G = make_gf(K.p, 2 * G.k)
    if alpha is None:
        raise BaseEmbeddingUnavailable(f"no evaluation point up to {G} for {len(domain)} elements")
    mapping = []
    for num, den in domain:
        n_val = poly_eval(G, tuple(emb[c] for c in num), alpha)
        d_val = poly_eval(G, tuple(emb[c] for c in den), alpha)
        mapping.append(((num, den), RingScalar(G, G.mul(n_val, G.inv(d_val)))))
    w = LocalEmbeddingWitness(source, G, tuple(mapping), info={
        'stage': 'evaluation', 'alpha': G.format(alpha), 'alpha_payload': alpha,
        'field': str(G), 'extended': G is not K, 'forbidden_polynomials': len(forbidden_polys)})
    return _certify(w)


# =============================================================================
# Closure sets
# =============================================================================

def _check_budget(size, budget, what):
    if size > budget:
        raise BudgetExceeded(f"{what} has {size} elements, over budget {budget}")


def _products(F, sets, budget, what):
    total = 1
    for s in sets:
        total *= len(s)
    _check_budget(total, budget, what)
    out = set()
    for combo in product(*sets):
        acc = F.one_payload
        for c in combo:
            acc = F.mul(acc, c)
        out.add(acc)
    return out


def sum_closure(F, summands, k, budget=DEFAULT_BUDGET, what='sum set'):
    """All sums of k elements of summands (0 included, so shorter sums too)."""
    summands = set(summands) | {F.zero_payload}
    sums = {F.zero_payload}
    for _ in range(k):
        _check_budget(len(sums) * len(summands), budget, what)
        grown = {F.add(s, a) for s in sums for a in summands}
        if grown == sums:
            break
        sums = grown
    return sums


# =============================================================================
# Algebraic steps
# =============================================================================

def local_embed_algebraic(source, domain, base=None, budget=DEFAULT_BUDGET):
    """Lift a base embedding through K[y]/(P) by finding a root of the image of P.

    E holds 0, 1, the coefficients of the domain and of y^n .. y^(2n-2), closed
    under negation; D is the set of (2n-1)-fold sums over E*E*E.

    Raises:
        BaseEmbeddingUnavailable: the base provider cannot embed D.
    """
    if not isinstance(source, SimpleExtension):
        raise Unsupported(f"algebraic step needs K[y]/(P), got {source}")
    base = base or local_embed_field
    K, n, P = source.base, source.degree, source.modulus
    E = {K.zero_payload, K.one_payload}
    for x in domain:
        E.update(x)
    power = source.one_payload
    for i in range(2 * n - 1):
        if i >= n:
            E.update(power)
        power = source.mul(power, source.generator_payload)
    E |= {K.neg(e) for e in E}
    triple = _products(K, [E, E, E], budget, 'E*E*E')
    D = sum_closure(K, triple, 2 * n - 1, budget, 'D')
    try:
        f = base(K, D, budget=budget)
    except (BudgetExceeded, Unsupported) as exc:
        raise BaseEmbeddingUnavailable(f"no local embedding of D ({len(D)} elements) of {K}: "
                                       f"{exc}") from exc
    G = f.target
    fp = f.table()
    P_image = tuple(fp[c].payload for c in P)
    H = root = None
    for j in range(1, n + 1):
        H = make_gf(G.p, G.k * j)
        emb = field_embedding(G, H)
        roots = poly_roots(H, tuple(emb[c] for c in P_image))
        if roots:
            root = roots[0]
            break
    if root is None:
        raise BaseEmbeddingUnavailable(f"{poly_format(G, P_image, 'x')} has no root up to {H}")
    logger.debug("root %s of %s found in %s", H.format(root), poly_format(G, P_image, 'x'), H)
    powers = [H.one_payload]
    for _ in range(n - 1):
        powers.append(H.mul(powers[-1], root))

    def image(x):
        acc = H.zero_payload
        for a, pw in zip(x, powers):
            acc = H.add(acc, H.mul(emb[fp[a].payload], pw))
        return RingScalar(H, acc)

    w = LocalEmbeddingWitness(source, H, tuple((x, image(x)) for x in _sorted_domain(domain)),
                              info={'stage': 'algebraic', 'field': str(H), 'root': H.format(root),
                                    'root_payload': root,
                                    'transported_modulus': poly_format(G, P_image, 'x'),
                                    'E': len(E), 'D': len(D), 'base': f.info})
    return _certify(w)


# =============================================================================
# Transcendental steps over a non-finite base
# =============================================================================

def local_embed_transcendental(source, domain, base=None, budget=DEFAULT_BUDGET):
    """K(t) -> G(t) for K locally embeddable into a GF field G.

    E holds 0, 1 and the numerators and denominators of the domain;
    E2 = {p*s + q*r : p, q, r, s in E}; A collects the coefficients of E2 and
    A' the (2d+2)-fold sums of products of two elements of A, d the largest
    degree in E2. The base embedding of A' acts on coefficients.
    """
    if not isinstance(source, RationalFunctionField):
        raise Unsupported(f"transcendental step needs K(t), got {source}")
    base = base or local_embed_field
    K = source.base
    domain = _sorted_domain(domain)
    E = {(), (K.one_payload,)}
    for num, den in domain:
        E.update((num, den))
    E = sorted(E)
    _check_budget(len(E) ** 4, budget, 'E2')
    E2 = set()
    for p_, q_, r_, s_ in product(E, repeat=4):
        E2.add(poly_add(K, poly_mul(K, p_, s_), poly_mul(K, q_, r_)))
    A = {K.zero_payload, K.one_payload}
    for poly in E2:
        A.update(poly)
    d = max(len(poly) - 1 for poly in E2)
    AA = _products(K, [A, A], budget, 'A*A')
    A_prime = sum_closure(K, AA, 2 * d + 2, budget, "A'")
    try:
        f = base(K, A_prime, budget=budget)
    except (BudgetExceeded, Unsupported) as exc:
        raise BaseEmbeddingUnavailable(f"no local embedding of A' ({len(A_prime)} elements) "
                                       f"of {K}: {exc}") from exc
    G = f.target
    fp = f.table()
    target = rat_fun(G, source.var)

    def lift(poly):
        return tuple(fp[c].payload for c in poly)

    mapping = tuple(((num, den), RingScalar(target, target.make(lift(num), lift(den))))
                    for num, den in domain)
    w = LocalEmbeddingWitness(source, target, mapping, info={
        'stage': 'transcendental', 'field': str(target), 'E': len(E), 'E2': len(E2),
        'A': len(A), "A'": len(A_prime), 'd': d, 'base': f.info})
    return _certify(w)


# =============================================================================
# Towers and the pipeline
# =============================================================================

def local_embed_field(source, domain, budget=DEFAULT_BUDGET):
    """Local embedding of a finite subset of a tower field into some GF(p^k)."""
    if isinstance(source, GaloisField):
        return inclusion_witness(source, domain)
    if isinstance(source, SimpleExtension):
        return local_embed_algebraic(source, domain, local_embed_field, budget)
    if isinstance(source, RationalFunctionField):
        if isinstance(source.base, GaloisField):
            return local_embed_eval(source, domain)
        lifted = local_embed_transcendental(source, domain, local_embed_field, budget)
        evaluated = local_embed_eval(lifted.target, [v.payload for v in lifted.images()])
        return compose_witnesses(lifted, evaluated)
    raise Unsupported(f"no local embedding strategy for {source}")


@dataclass(frozen=True)
class FieldTowerStep:
    kind: str                   # algebraic or transcendental
    var: str
    modulus: tuple = None       # ascending payloads over the previous stage


def algebraic_step(modulus, var='x'):
    return FieldTowerStep('algebraic', var, tuple(modulus))


def transcendental_step(var='t'):
    return FieldTowerStep('transcendental', var)


@dataclass(frozen=True)
class Tower:
    p: int
    steps: tuple
    rings: tuple                # F_p first, top last

    @property
    def top(self):
        return self.rings[-1]

    def __str__(self):
        return str(self.top)


def build_tower(p, steps):
    """Fields F_p, then one extension per step; algebraic moduli must be irreducible."""
    rings = [make_gf(p)]
    for step in steps:
        current = rings[-1]
        if step.kind == 'algebraic':
            try:
                rings.append(simple_extension(current, tuple(step.modulus), step.var))
            except Unsupported as exc:
                raise UsageError(f"algebraic step {step.var}: {exc}", 'tower') from None
        elif step.kind == 'transcendental':
            rings.append(rat_fun(current, step.var))
        else:
            raise ValueError(f"unknown tower step {step.kind!r}")
    return Tower(p, tuple(steps), tuple(rings))


def local_embed_pipeline(tower, domain, budget=DEFAULT_BUDGET):
    """Local embedding of a finite subset of the tower top into M_d(F_p)."""
    domain = _sorted_domain(domain)
    to_field = local_embed_field(tower.top, domain, budget)
    G = to_field.target
    emb = embed_gf_into_matrices(G)
    to_matrices = emb.restrict([v.payload for v in to_field.images()])
    final = compose_witnesses(to_field, to_matrices)
    staged = to_matrices.table()
    agrees = all(final.apply(x) == staged[to_field.apply(x).payload] for x in final.domain)
    logger.info("%s -> %s on %d elements", tower.top, final.target, len(domain))
    return replace(final, info={**final.info, 'field': str(G), 'd': emb.d,
                                'composition_agrees': agrees})


# =============================================================================
# Coefficientwise transport of group ring products
# =============================================================================

def _product_domain(a, b):
    """Coefficients of a, b, ab plus every product and running sum in the convolution."""
    K, G = a.ring, a.group
    domain = {K.zero_payload, K.one_payload}
    domain.update(c for _, c in a.terms)
    domain.update(c for _, c in b.terms)
    acc = {}
    for x, u in a.terms:
        for y, v in b.terms:
            g = G.mul(x, y)
            uv = K.mul(u, v)
            domain.add(uv)
            acc[g] = K.add(acc[g], uv) if g in acc else uv
            domain.add(acc[g])
    return domain


def transport(w, f, target):
    """Image of f in M_d(F_p)[G] as a matrix over F_p[G]."""
    table = w.table()
    R = target
    d = w.target.d
    coeffs = [[{} for _ in range(d)] for _ in range(d)]
    for g, c in f.terms:
        M = table[c]
        for i in range(d):
            for j in range(d):
                if not M[i, j].is_zero():
                    coeffs[i][j][g] = M[i, j].payload
    return RingMatrix(R, tuple(tuple(R.from_dict(coeffs[i][j]) for j in range(d))
                               for i in range(d)))


def transport_product_check(tower, a, b, budget=DEFAULT_BUDGET):
    """Transport a, b in K[G] to M_d(F_p[G]) and compare T(a)T(b) with T(ab)."""
    if a.ring is not tower.top or b.ring is not tower.top or a.group is not b.group:
        raise Mismatch(f"elements must lie in {tower.top}[G]")
    w = local_embed_pipeline(tower, _product_domain(a, b), budget)
    R = group_ring(w.target.field, a.group)
    Ta, Tb, Tab = (transport(w, f, R) for f in (a, b, a * b))
    ok = Ta * Tb == Tab
    one = a.parent.one
    unit_pair = a * b == one
    return {'tower': str(tower.top), 'group': str(a.group), 'd': w.target.d,
            'field': w.info.get('field'), 'domain_size': len(w.mapping),
            'a': repr(a), 'b': repr(b), 'product': repr(a * b),
            'transported_product_ok': ok,
            'one_sided_unit_transported': unit_pair and Ta * Tb == identity(R, w.target.d),
            'witness': witness_record(w)}
