#!/usr/bin/env python3
"""
stabfin Rings

Exact coefficient rings and group rings.

Coefficient rings (all values canonical, equality is payload equality):
    integers()              unbounded Python ints
    z_mod(n)                residues in [0, n)
    make_gf(p, k)           GF(p^k) through galois, lexicographically least modulus
    rat_fun(K)              K(t) in lowest terms with monic denominator
    simple_extension(K, P)  K[y]/(P) for monic irreducible P (tower fields)

Group rings R[G] hold finitely supported maps G -> R sorted by the group's
canonical element order, with convolution, augmentation and pushforward.

Usage as a library:
    from stabfin_rings import make_gf, group_ring
    F4 = make_gf(2, 2)
    R = group_ring(make_gf(2, 1), make_group(cyclic(3)))
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from itertools import product

import galois
import numpy as np

from stabfin_errors import Mismatch, NotAUnit, NotPrime, RingMismatch, Unsupported

logger = logging.getLogger(__name__)

# Fields up to this order get precomputed addition/multiplication tables
GF_TABLE_LIMIT = 256


# =============================================================================
# Scalars
# =============================================================================

@dataclass(frozen=True, eq=False)
class RingScalar:
    ring: 'CoeffRing'
    payload: object

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ring.element(other)
        return (isinstance(other, RingScalar) and other.ring is self.ring
                and other.payload == self.payload)

    def __hash__(self):
        return hash((id(self.ring), self.payload))

    def _coerce(self, other):
        if isinstance(other, int):
            return self.ring.normalize(other)
        if not isinstance(other, RingScalar) or other.ring is not self.ring:
            raise RingMismatch(f"{self.ring} vs {getattr(other, 'ring', other)}")
        return other.payload

    def __add__(self, other):
        return RingScalar(self.ring, self.ring.add(self.payload, self._coerce(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return RingScalar(self.ring, self.ring.sub(self.payload, self._coerce(other)))

    def __rsub__(self, other):
        return RingScalar(self.ring, self.ring.sub(self._coerce(other), self.payload))

    def __neg__(self):
        return RingScalar(self.ring, self.ring.neg(self.payload))

    def __mul__(self, other):
        return RingScalar(self.ring, self.ring.mul(self.payload, self._coerce(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self * RingScalar(self.ring, self._coerce(other)).inverse()

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** -k
        out = self.ring.one
        for _ in range(k):
            out = out * self
        return out

    def inverse(self):
        return RingScalar(self.ring, self.ring.inv(self.payload))

    def is_zero(self):
        return self.payload == self.ring.zero_payload

    @property
    def parent(self):
        return self.ring

    def __repr__(self):
        return self.ring.format(self.payload)


def ring_arith(op, a, b=None):
    """Scalar arithmetic by operation name: add, sub, neg, mul or inv."""
    if op == 'neg':
        return -a
    if op == 'inv':
        return a.inverse()
    if b is None:
        raise ValueError(f"{op} needs two operands")
    if op == 'add':
        return a + b
    if op == 'sub':
        return a - b
    if op == 'mul':
        return a * b
    raise ValueError(f"unknown ring operation {op!r}")


# =============================================================================
# Dense polynomials over a field ring (ascending coefficient tuples)
# =============================================================================

def poly_trim(F, a):
    a = list(a)
    while a and a[-1] == F.zero_payload:
        a.pop()
    return tuple(a)


def poly_add(F, a, b):
    n = max(len(a), len(b))
    z = F.zero_payload
    return poly_trim(F, [F.add(a[i] if i < len(a) else z, b[i] if i < len(b) else z)
                         for i in range(n)])


def poly_neg(F, a):
    return tuple(F.neg(x) for x in a)


def poly_sub(F, a, b):
    return poly_add(F, a, poly_neg(F, b))


def poly_scale(F, a, c):
    return poly_trim(F, [F.mul(x, c) for x in a])


def poly_mul(F, a, b):
    if not a or not b:
        return ()
    out = [F.zero_payload] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == F.zero_payload:
            continue
        for j, y in enumerate(b):
            out[i + j] = F.add(out[i + j], F.mul(x, y))
    return poly_trim(F, out)


def poly_divmod(F, a, b):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    lead_inv = F.inv(b[-1])
    q = [F.zero_payload] * max(len(a) - len(b) + 1, 0)
    r = list(a)
    while len(r) >= len(b) and r:
        shift = len(r) - len(b)
        c = F.mul(r[-1], lead_inv)
        q[shift] = c
        for i, y in enumerate(b):
            r[shift + i] = F.sub(r[shift + i], F.mul(c, y))
        r = list(poly_trim(F, r))
    return poly_trim(F, q), tuple(r)


def poly_monic(F, a):
    """(leading coefficient, monic associate); the zero polynomial stays zero."""
    if not a:
        return F.one_payload, ()
    lc = a[-1]
    return lc, poly_scale(F, a, F.inv(lc))


def poly_gcd(F, a, b):
    """Monic gcd; galois does the work for GF coefficients."""
    if isinstance(F, GaloisField):
        if not a and not b:
            return ()
        return F.from_galois_poly(galois.gcd(F.galois_poly(a), F.galois_poly(b)))
    while b:
        a, b = b, poly_divmod(F, a, b)[1]
    return poly_monic(F, a)[1]


def poly_egcd(F, a, b):
    """(g, s, t) with s*a + t*b = g monic."""
    r0, r1 = a, b
    s0, s1 = (F.one_payload,), ()
    t0, t1 = (), (F.one_payload,)
    while r1:
        q, r = poly_divmod(F, r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, poly_sub(F, s0, poly_mul(F, q, s1))
        t0, t1 = t1, poly_sub(F, t0, poly_mul(F, q, t1))
    lc, g = poly_monic(F, r0)
    inv = F.inv(lc) if r0 else F.one_payload
    return g, poly_scale(F, s0, inv), poly_scale(F, t0, inv)


def poly_eval(F, a, x):
    out = F.zero_payload
    for c in reversed(a):
        out = F.add(F.mul(out, x), c)
    return out


def poly_roots(F, a):
    """Roots of a nonzero polynomial over a GF, ascending by payload."""
    if not isinstance(F, GaloisField):
        raise Unsupported(f"root finding over {F}")
    if len(a) <= 1:
        return []
    return sorted(int(r) for r in F.galois_poly(a).roots())


def poly_format(F, a, var):
    if not a:
        return '0'
    terms = []
    for i in range(len(a) - 1, -1, -1):
        c = a[i]
        if c == F.zero_payload:
            continue
        mono = '' if i == 0 else (var if i == 1 else f'{var}^{i}')
        cs = F.format(c)
        if not mono:
            terms.append(cs)
        elif c == F.one_payload:
            terms.append(mono)
        else:
            terms.append(f'({cs})*{mono}' if any(ch in cs for ch in '+-/ ') else f'{cs}*{mono}')
    return ' + '.join(terms)


# =============================================================================
# Coefficient rings
# =============================================================================

class CoeffRing:
    """Commutative ring of canonical payloads."""

    kind = ''
    is_finite = False
    is_field = False
    characteristic = 0
    zero_payload = 0
    one_payload = 1

    def add(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def is_unit(self, a):
        try:
            self.inv(a)
        except NotAUnit:
            return False
        return True

    def normalize(self, value):
        raise NotImplementedError

    def order(self):
        return None

    def payloads(self):
        raise Unsupported(f"{self} is infinite")

    def random_payload(self, rng):
        raise NotImplementedError

    def format(self, a):
        return str(a)

    def __repr__(self):
        return f"<{type(self).__name__} {self}>"

    # --- scalar wrappers ---
    @property
    def zero(self):
        return RingScalar(self, self.zero_payload)

    @property
    def one(self):
        return RingScalar(self, self.one_payload)

    def element(self, value):
        return RingScalar(self, self.normalize(value))

    def scalar(self, payload):
        return RingScalar(self, payload)

    def elements(self):
        return [RingScalar(self, a) for a in self.payloads()]

    def random_element(self, rng):
        return RingScalar(self, self.random_payload(rng))


class IntegerRing(CoeffRing):
    kind = 'integers'

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        if a in (1, -1):
            return a
        raise NotAUnit(f"{a} is not a unit of Z")

    def normalize(self, value):
        return int(value)

    def random_payload(self, rng):
        return int(rng.integers(-5, 6))

    def __str__(self):
        return 'Z'


class IntegersMod(CoeffRing):
    kind = 'z_mod'
    is_finite = True

    def __init__(self, n):
        if n < 2:
            raise ValueError(f"z_mod modulus must be >= 2, got {n}")
        self.n = n
        self.characteristic = n
        self.is_field = galois.is_prime(n)

    def add(self, a, b):
        return (a + b) % self.n

    def neg(self, a):
        return (-a) % self.n

    def mul(self, a, b):
        return (a * b) % self.n

    def inv(self, a):
        try:
            return pow(a, -1, self.n)
        except ValueError:
            raise NotAUnit(f"{a} is not a unit mod {self.n}") from None

    def normalize(self, value):
        return int(value) % self.n

    def order(self):
        return self.n

    def payloads(self):
        return list(range(self.n))

    def random_payload(self, rng):
        return int(rng.integers(self.n))

    def __str__(self):
        return f'Z/{self.n}'


class GaloisField(CoeffRing):
    """GF(p^k); payloads are galois' integer representation.

    For k = 1 the payload is the residue itself and arithmetic is plain
    modular arithmetic; for k > 1 the galois FieldArray class does the work,
    through precomputed tables when the field is small.
    """

    kind = 'gf'
    is_finite = True
    is_field = True

    def __init__(self, p, k, var='a'):
        self.p, self.k, self.q = p, k, p ** k
        self.characteristic = p
        self.var = var
        if k == 1:
            self.field = galois.GF(p)
            self.modulus = galois.Poly([1, 0], field=self.field)
        else:
            self.modulus = galois.irreducible_poly(p, k, method='min')
            self.field = galois.GF(self.q, irreducible_poly=self.modulus)
        self._mul = self._add = self._inv = None
        if k > 1 and self.q <= GF_TABLE_LIMIT:
            x = self.field.elements
            self._mul = (x[:, None] * x[None, :]).view(np.ndarray).tolist()
            self._add = (x[:, None] + x[None, :]).view(np.ndarray).tolist()
            self._inv = [0] + np.reciprocal(x[1:]).view(np.ndarray).tolist()

    def add(self, a, b):
        if self.k == 1:
            return (a + b) % self.p
        if self._add is not None:
            return self._add[a][b]
        return int(self.field(a) + self.field(b))

    def neg(self, a):
        if self.k == 1:
            return (-a) % self.p
        return int(-self.field(a))

    def mul(self, a, b):
        if self.k == 1:
            return (a * b) % self.p
        if self._mul is not None:
            return self._mul[a][b]
        return int(self.field(a) * self.field(b))

    def inv(self, a):
        if a == 0:
            raise NotAUnit(f"0 is not a unit of {self}")
        if self.k == 1:
            return pow(a, -1, self.p)
        if self._inv is not None:
            return self._inv[a]
        return int(np.reciprocal(self.field(a)))

    def normalize(self, value):
        """Integers map to their image in the prime field."""
        return int(value) % self.p

    def from_payload(self, value):
        value = int(value)
        if not 0 <= value < self.q:
            raise ValueError(f"{value} is not a payload of {self}")
        return value

    @property
    def generator_payload(self):
        """The class of x modulo the defining polynomial."""
        return self.p if self.k > 1 else 0

    def vector(self, a):
        """Coefficients of a on the power basis 1, x, ..., x^(k-1)."""
        if self.k == 1:
            return [a]
        return [int(c) for c in reversed(self.field(a).vector())]

    def from_vector(self, coeffs):
        if self.k == 1:
            return int(coeffs[0]) % self.p
        return int(self.field.Vector([int(c) % self.p for c in reversed(coeffs)]))

    def galois_poly(self, a):
        return galois.Poly(list(reversed(a)) or [0], field=self.field)

    def from_galois_poly(self, poly):
        return poly_trim(self, [int(c) for c in reversed(poly.coeffs)])

    def modulus_coeffs(self):
        """Ascending integer coefficients of the defining polynomial."""
        return [int(c) for c in reversed(self.modulus.coeffs)]

    def order(self):
        return self.q

    def payloads(self):
        return list(range(self.q))

    def random_payload(self, rng):
        return int(rng.integers(self.q))

    def format(self, a):
        if self.k == 1:
            return str(a)
        return poly_format(make_gf(self.p, 1), tuple(poly_trim(make_gf(self.p, 1), self.vector(a))),
                           self.var)

    def format_modulus(self):
        return poly_format(make_gf(self.p, 1), tuple(self.modulus_coeffs()), 'x')

    def __str__(self):
        return f'F{self.q}'


class RationalFunctionField(CoeffRing):
    """K(t); payload (numerator, denominator), ascending tuples over K."""

    kind = 'rat_fun'
    is_field = True

    def __init__(self, base, var='t'):
        if not base.is_field:
            raise ValueError(f"rational functions need a field, got {base}")
        self.base = base
        self.var = var
        self.characteristic = base.characteristic
        self.zero_payload = ((), (base.one_payload,))
        self.one_payload = ((base.one_payload,), (base.one_payload,))

    def make(self, num, den):
        F = self.base
        num, den = poly_trim(F, num), poly_trim(F, den)
        if not den:
            raise ZeroDivisionError("zero denominator")
        g = poly_gcd(F, num, den)
        if len(g) > 1:
            num, den = poly_divmod(F, num, g)[0], poly_divmod(F, den, g)[0]
        lc, den = poly_monic(F, den)
        return poly_scale(F, num, F.inv(lc)), den

    def add(self, a, b):
        F = self.base
        if a[1] == b[1]:
            return self.make(poly_add(F, a[0], b[0]), a[1])
        return self.make(poly_add(F, poly_mul(F, a[0], b[1]), poly_mul(F, b[0], a[1])),
                         poly_mul(F, a[1], b[1]))

    def neg(self, a):
        return poly_neg(self.base, a[0]), a[1]

    def mul(self, a, b):
        F = self.base
        return self.make(poly_mul(F, a[0], b[0]), poly_mul(F, a[1], b[1]))

    def inv(self, a):
        if not a[0]:
            raise NotAUnit("0 is not invertible")
        return self.make(a[1], a[0])

    def normalize(self, value):
        if isinstance(value, tuple):
            return self.make(*value)
        return self.constant(self.base.normalize(value))

    def constant(self, c):
        return self.make((c,), (self.base.one_payload,))

    def variable(self):
        return self.make((self.base.zero_payload, self.base.one_payload), (self.base.one_payload,))

    def is_constant(self, a):
        return len(a[0]) <= 1 and len(a[1]) == 1

    def constant_value(self, a):
        return a[0][0] if a[0] else self.base.zero_payload

    def evaluate(self, a, x):
        """Value at x in the base field, None at a pole."""
        F = self.base
        den = poly_eval(F, a[1], x)
        if den == F.zero_payload:
            return None
        return F.mul(poly_eval(F, a[0], x), F.inv(den))

    def random_payload(self, rng):
        F = self.base
        num = [F.random_payload(rng) for _ in range(int(rng.integers(0, 3)))]
        den = [F.random_payload(rng) for _ in range(int(rng.integers(0, 2)))] + [F.one_payload]
        return self.make(num, den)

    def format(self, a):
        num = poly_format(self.base, a[0], self.var)
        if a[1] == (self.base.one_payload,):
            return num
        return f'({num})/({poly_format(self.base, a[1], self.var)})'

    def __str__(self):
        return f'{self.base}({self.var})'


class SimpleExtension(CoeffRing):
    """K[y]/(P) for monic irreducible P; payloads are length-deg(P) tuples."""

    kind = 'simple_extension'
    is_field = True

    def __init__(self, base, modulus, var='y'):
        modulus = poly_trim(base, modulus)
        if len(modulus) < 2 or modulus[-1] != base.one_payload:
            raise ValueError(f"modulus must be monic of degree >= 1, got {modulus}")
        self.base = base
        self.modulus = modulus
        self.degree = len(modulus) - 1
        self.var = var
        self.characteristic = base.characteristic
        self.is_finite = base.is_finite
        self.zero_payload = (base.zero_payload,) * self.degree
        self.one_payload = (base.one_payload,) + (base.zero_payload,) * (self.degree - 1)
        if not is_irreducible_over(base, modulus):
            raise ValueError(f"{poly_format(base, modulus, 'x')} is reducible over {base}")

    def _pad(self, a):
        return tuple(a) + (self.base.zero_payload,) * (self.degree - len(a))

    def reduce(self, poly):
        return self._pad(poly_divmod(self.base, poly_trim(self.base, poly), self.modulus)[1])

    def add(self, a, b):
        return tuple(self.base.add(x, y) for x, y in zip(a, b))

    def neg(self, a):
        return tuple(self.base.neg(x) for x in a)

    def mul(self, a, b):
        F = self.base
        return self.reduce(poly_mul(F, poly_trim(F, a), poly_trim(F, b)))

    def inv(self, a):
        F = self.base
        g, s, _ = poly_egcd(F, poly_trim(F, a), self.modulus)
        if g != (F.one_payload,):
            raise NotAUnit(f"{self.format(a)} is not invertible")
        return self.reduce(s)

    def normalize(self, value):
        if isinstance(value, tuple):
            return self.reduce(value)
        return self.embed(self.base.normalize(value))

    def embed(self, c):
        return (c,) + (self.base.zero_payload,) * (self.degree - 1)

    @property
    def generator_payload(self):
        return self.reduce((self.base.zero_payload, self.base.one_payload))

    def coefficients(self, a):
        return list(a)

    def order(self):
        return self.base.order() ** self.degree if self.is_finite else None

    def payloads(self):
        return [tuple(c) for c in product(self.base.payloads(), repeat=self.degree)]

    def random_payload(self, rng):
        return tuple(self.base.random_payload(rng) for _ in range(self.degree))

    def format(self, a):
        return poly_format(self.base, poly_trim(self.base, a), self.var)

    def __str__(self):
        return f'{self.base}[{self.var}]/({poly_format(self.base, self.modulus, self.var)})'


def is_irreducible_over(F, poly):
    """Irreducibility test for a monic polynomial over a catalogue field.

    GF coefficients go to galois; other finite fields are searched for a monic
    factor of degree <= n/2; polynomials with constant coefficients over
    K(t) are tested over K. Anything else raises Unsupported.
    """
    n = len(poly) - 1
    if n <= 1:
        return True
    if isinstance(F, GaloisField):
        return F.galois_poly(poly).is_irreducible()
    if F.is_finite:
        for d in range(1, n // 2 + 1):
            for low in product(F.payloads(), repeat=d):
                if not poly_divmod(F, poly, tuple(low) + (F.one_payload,))[1]:
                    return False
        return True
    if isinstance(F, RationalFunctionField) and all(F.is_constant(c) for c in poly):
        return is_irreducible_over(F.base, tuple(F.constant_value(c) for c in poly))
    raise Unsupported(f"cannot decide irreducibility of {poly_format(F, poly, 'x')} over {F}")


@lru_cache(maxsize=None)
def integers():
    return IntegerRing()


@lru_cache(maxsize=None)
def z_mod(n):
    return IntegersMod(n)


def make_gf(p, k=1):
    """GF(p^k) with the lexicographically least monic irreducible modulus.

    Raises:
        NotPrime: p is not prime.
    """
    return _gf(int(p), int(k))


@lru_cache(maxsize=None)
def _gf(p, k):
    if not galois.is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if k < 1:
        raise ValueError(f"extension degree must be >= 1, got {k}")
    field = GaloisField(p, k)
    logger.debug("GF(%d^%d) modulus %s", p, k, field.format_modulus())
    return field


def rat_fun(base, var='t'):
    return _rat_fun(base, var)


@lru_cache(maxsize=None)
def _rat_fun(base, var):
    return RationalFunctionField(base, var)


def simple_extension(base, modulus, var='y'):
    return _simple_extension(base, tuple(modulus), var)


@lru_cache(maxsize=None)
def _simple_extension(base, modulus, var):
    return SimpleExtension(base, modulus, var)


@lru_cache(maxsize=None)
def field_embedding(small, big):
    """Payload map GF(p^k) -> GF(p^K) for k | K, sending x to the least root of
    the small field's modulus."""
    if small.p != big.p or big.k % small.k:
        raise Mismatch(f"{small} does not embed in {big}")
    if small.k == 1:
        return {a: a for a in small.payloads()}
    root = poly_roots(big, tuple(small.modulus_coeffs()))[0]
    powers = [big.one_payload]
    for _ in range(small.k - 1):
        powers.append(big.mul(powers[-1], root))
    table_ = {}
    for a in small.payloads():
        out = big.zero_payload
        for c, pw in zip(small.vector(a), powers):
            out = big.add(out, big.mul(big.normalize(c), pw))
        table_[a] = out
    return table_


# =============================================================================
# Group rings
# =============================================================================

@dataclass(frozen=True, eq=False)
class GroupRingElement:
    """Finitely supported map group -> ring; terms sorted, no zero coefficients."""
    ring: CoeffRing
    group: object
    terms: tuple

    def __eq__(self, other):
        return (isinstance(other, GroupRingElement) and other.ring is self.ring
                and other.group is self.group and other.terms == self.terms)

    def __hash__(self):
        return hash((id(self.ring), id(self.group), self.terms))

    @property
    def parent(self):
        return group_ring(self.ring, self.group)

    def _check(self, other):
        if not isinstance(other, GroupRingElement):
            raise Mismatch(f"expected a group ring element, got {other!r}")
        if other.ring is not self.ring or other.group is not self.group:
            raise Mismatch(f"{self.parent} vs {other.parent}")

    def __add__(self, other):
        self._check(other)
        acc = dict(self.terms)
        R = self.ring
        for g, c in other.terms:
            acc[g] = R.add(acc[g], c) if g in acc else c
        return self.parent.from_dict(acc)

    def __neg__(self):
        R = self.ring
        return GroupRingElement(R, self.group, tuple((g, R.neg(c)) for g, c in self.terms))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (RingScalar, int)):
            return self.scale(other)
        self._check(other)
        R, G = self.ring, self.group
        acc = {}
        for x, a in self.terms:
            for y, b in other.terms:
                g = G.mul(x, y)
                ab = R.mul(a, b)
                acc[g] = R.add(acc[g], ab) if g in acc else ab
        return self.parent.from_dict(acc)

    def scale(self, c):
        if isinstance(c, RingScalar) and c.ring is not self.ring:
            raise RingMismatch(f"{self.ring} vs {c.ring}")
        c = self.ring.normalize(c) if isinstance(c, int) else c.payload
        R = self.ring
        return self.parent.from_dict({g: R.mul(a, c) for g, a in self.terms})

    def coefficient(self, g):
        """Coefficient payload at a group payload."""
        for h, c in self.terms:
            if h == g:
                return c
        return self.ring.zero_payload

    def support(self):
        from stabfin_groups import GroupElement
        return [GroupElement(self.group, g) for g, _ in self.terms]

    def is_zero(self):
        return not self.terms

    def __repr__(self):
        return self.parent.format(self)


class GroupRing:
    """Descriptor for R[G]; plays the same role for matrices as a CoeffRing."""

    def __init__(self, ring, group):
        self.ring = ring
        self.group = group
        self.is_finite = ring.is_finite and group.is_finite
        self.characteristic = ring.characteristic

    def __str__(self):
        return f'{self.ring}[{self.group}]'

    def __repr__(self):
        return f'<GroupRing {self}>'

    def from_dict(self, coeffs):
        R, G = self.ring, self.group
        terms = sorted(((g, c) for g, c in coeffs.items() if c != R.zero_payload),
                       key=lambda t: G.sort_key(t[0]))
        return GroupRingElement(R, G, tuple(terms))

    def monomial(self, g, c=None):
        c = self.ring.one_payload if c is None else c
        return self.from_dict({g: c})

    @property
    def zero(self):
        return GroupRingElement(self.ring, self.group, ())

    @property
    def one(self):
        return self.monomial(self.group.identity_payload)

    def element(self, value):
        if isinstance(value, GroupRingElement):
            return value
        c = self.ring.normalize(value)
        return self.from_dict({self.group.identity_payload: c})

    def order(self):
        return self.ring.order() ** self.group.order() if self.is_finite else None

    def elements_on(self, support):
        """Every element supported inside the given group payloads."""
        support = list(support)
        R = self.ring
        for coeffs in product(R.payloads(), repeat=len(support)):
            yield self.from_dict(dict(zip(support, coeffs)))

    def elements(self):
        return list(self.elements_on(self.group.payloads()))

    def random_element(self, rng, support=None):
        """Random element; over infinite groups supported on the given payloads."""
        if support is None:
            support = self.group.payloads()
        return self.from_dict({g: self.ring.random_payload(rng) for g in support})

    def format(self, f):
        if not f.terms:
            return '0'
        R, G = self.ring, self.group
        parts = []
        for g, c in f.terms:
            cs = R.format(c)
            if g == G.identity_payload:
                parts.append(cs)
                continue
            name = _monomial_name(G, g)
            if c == R.one_payload:
                parts.append(name)
            else:
                parts.append(f"({cs})*{name}" if " " in cs else f"{cs}*{name}")
        return ' + '.join(parts)


def _monomial_name(G, g):
    """x^k over Z, g^k over Cn, x1^a*x2^b over Z^r; the group's own format otherwise."""
    kind = G.spec.kind
    if kind == 'cyclic':
        var = 'x' if G.n == 0 else 'g'
        return var if g == 1 else f'{var}^{g}'
    if kind == 'free_abelian':
        return '*'.join(f'x{i + 1}' if k == 1 else f'x{i + 1}^{k}' for i, k in enumerate(g) if k)
    return G.format(g)


@lru_cache(maxsize=None)
def group_ring(ring, group):
    return GroupRing(ring, group)


def gr_arith(op, a, b=None):
    """Group ring arithmetic by operation name: add, sub, neg or mul."""
    if op == 'neg':
        return -a
    if b is None:
        raise ValueError(f"{op} needs two operands")
    if op == 'add':
        return a + b
    if op == 'sub':
        return a - b
    if op == 'mul':
        return a * b
    raise ValueError(f"unknown group ring operation {op!r}")


def augmentation(f):
    """Sum of all coefficients, as a RingScalar."""
    R = f.ring
    total = R.zero_payload
    for _, c in f.terms:
        total = R.add(total, c)
    return RingScalar(R, total)


def push_terms(terms, point_map, add, zero):
    """Push (point, value) pairs through point_map, adding values on fibres.

    Returns a dict target point -> value with zero values dropped; no preimage
    enumeration is needed.
    """
    acc = {}
    for x, v in terms:
        y = point_map(x)
        acc[y] = add(acc[y], v) if y in acc else v
    return {y: v for y, v in acc.items() if v != zero}


def pushforward(h, f):
    """phi_*(f)(x) = sum of f(y) over y in phi^-1(x)."""
    if f.group is not h.source:
        raise Mismatch(f"pushforward along {h.name} expects {h.source}, got {f.group}")
    R = f.ring
    pushed = push_terms(f.terms, h.apply, R.add, R.zero_payload)
    return group_ring(R, h.target).from_dict(pushed)


def change_ring(f, target, convert=None):
    """Coefficientwise map into another ring (default: integer reinterpretation)."""
    convert = convert or target.normalize
    return group_ring(target, f.group).from_dict({g: convert(c) for g, c in f.terms})


def coeff_reduce(f, m):
    """Reduce integer (or Z/n with m | n) coefficients modulo m."""
    if m < 2:
        raise ValueError(f"modulus must be >= 2, got {m}")
    R = f.ring
    ok = (isinstance(R, IntegerRing)
          or isinstance(R, IntegersMod) and R.n % m == 0
          or isinstance(R, GaloisField) and R.k == 1 and R.p % m == 0)
    if not ok:
        raise Mismatch(f"cannot reduce {R} coefficients modulo {m}")
    return change_ring(f, z_mod(m))


def coeff_lift(f):
    """Integer lift with representatives in [0, n) of a Z/n or prime-field element."""
    return change_ring(f, integers(), int)
