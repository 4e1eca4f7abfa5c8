#!/usr/bin/env python3
"""
stabfin Text Grammars

Text forms used by scenario files and the command line:

    groups        1  Z  Z^2  C4  S3  D8  C2xC4  perm:[(1 2),(1 2 3)]  C4/<2>
    rings         Z  Z/4  F2  F9  F2(t)
    group rings   F2[C3]  Z[Z]  Z/4[C2xC2]
    elements      1 + x^2 (Z, generator x)   1 + g (finite cyclic, g or s)
                  x1*x2^-1 (Z^r)   g1*g2 (other groups)   a + 1 (GF(p^k))
                  1/(t + 1) (rational functions)
    matrices      [[1 + g, g], [0, 1]]
    alphabets     F2  F2^2  Z/4  Z/6  Z/2+Z/4
    memory        [(0,[1]), (1,[[1,0],[0,1]])]
    towers        [alg:x^2+x+1, transc]   [transc:u, alg:y^2+y+1]
    homs          C4->C2:[1]   C2xC2->C2:[1,0]

Expressions go through sympy's parser and are then evaluated with the exact
ring arithmetic; group generators are noncommutative symbols.
"""

import ast
import logging
import re
from functools import reduce
from operator import add, mul

from sympy import Poly, Symbol, factorint
from sympy.combinatorics import Permutation
from sympy.parsing.sympy_parser import convert_xor, parse_expr, standard_transformations

from stabfin_automata import Alphabet
from stabfin_errors import StabfinError, Unsupported, UsageError
from stabfin_groups import (
    CentralQuotientGroup, CyclicGroup, FreeAbelianGroup, PermGroup, ProductGroup, TableGroup,
    central_quotient, cyclic, dihedral, direct_product, free_abelian, hom_from_generator_images,
    make_group, permutation, symmetric
)
from stabfin_localembed import algebraic_step, build_tower, transcendental_step
from stabfin_matrices import matrix
from stabfin_rings import (
    GaloisField, GroupRing, RationalFunctionField, SimpleExtension, group_ring,
    integers, make_gf, rat_fun, simple_extension, z_mod
)
from stabfin_wreath import WreathProduct

logger = logging.getLogger(__name__)

_TRANSFORMS = standard_transformations + (convert_xor,)
_OPEN, _CLOSE = '([{', ')]}'


# =============================================================================
# Lexical helpers
# =============================================================================

def split_top(text, sep=','):
    """Split on sep outside any brackets."""
    parts, depth, current = [], 0, []
    for ch in text:
        if ch in _OPEN:
            depth += 1
        elif ch in _CLOSE:
            depth -= 1
            if depth < 0:
                raise UsageError(f"unbalanced brackets in {text!r}")
        if ch == sep and depth == 0:
            parts.append(''.join(current).strip())
            current = []
        else:
            current.append(ch)
    if depth:
        raise UsageError(f"unbalanced brackets in {text!r}")
    tail = ''.join(current).strip()
    if tail or parts:
        parts.append(tail)
    return parts


def strip_brackets(text, pair='[]'):
    text = text.strip()
    if not (text.startswith(pair[0]) and text.endswith(pair[1])):
        raise UsageError(f"expected {pair[0]}...{pair[1]}, got {text!r}")
    return text[1:-1].strip()


def parse_list(text):
    """[a, b, c] -> ['a', 'b', 'c'] with nested brackets kept intact."""
    return split_top(strip_brackets(text))


def parse_literal(text):
    try:
        return ast.literal_eval(text.strip())
    except (ValueError, SyntaxError):
        raise UsageError(f"not a literal: {text!r}") from None


# =============================================================================
# Groups
# =============================================================================

def _cycles(text):
    cycles = [[int(x) for x in c.split()] for c in re.findall(r'\(([^()]*)\)', text)]
    return [c for c in cycles if c]


def _one_line(cycles, degree):
    perm = Permutation([[x - 1 for x in c] for c in cycles], size=degree)
    return tuple(x + 1 for x in perm.array_form)


def parse_group(text):
    """Group spec from its text form."""
    text = text.strip()
    if text.endswith('>') and '/<' in text:
        parent_text, element_text = text[:-1].split('/<', 1)
        parent = parse_group(parent_text)
        element = parse_group_element(make_group(parent), element_text)
        return central_quotient(parent, element)
    factors = split_top(text, 'x')
    if len(factors) > 1:
        return direct_product(*(parse_group(f) for f in factors))
    if text == '1':
        return cyclic(1)
    if text == 'Z':
        return cyclic(0)
    match = re.fullmatch(r'Z\^(\d+)', text)
    if match:
        r = int(match.group(1))
        return cyclic(0) if r == 1 else free_abelian(r)
    match = re.fullmatch(r'([CSD])(\d+)', text)
    if match:
        kind, n = match.group(1), int(match.group(2))
        try:
            return {'C': cyclic, 'S': symmetric, 'D': dihedral}[kind](n)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    if text.startswith('perm:'):
        gens = [_cycles(g) for g in parse_list(text[5:])]
        degree = max((x for g in gens for c in g for x in c), default=1)
        return permutation([_one_line(g, degree) for g in gens], degree=degree, label=text)
    raise UsageError(f"unknown group {text!r}")


def parse_group_element(G, text):
    """Payload of G from the group's own display form."""
    text = text.strip()
    try:
        if isinstance(G, CyclicGroup):
            return G.normalize(int(text))
        if isinstance(G, FreeAbelianGroup):
            return G.normalize(parse_literal(text))
        if isinstance(G, PermGroup):
            return G.normalize(_one_line(_cycles(text), G.degree))
        if isinstance(G, TableGroup):
            return G.normalize(int(text.lstrip('#')))
        if isinstance(G, ProductGroup):
            parts = split_top(strip_brackets(text, '()'))
            if len(parts) != len(G.factors):
                raise UsageError(f"{G} elements have {len(G.factors)} coordinates: {text!r}")
            return tuple(parse_group_element(f, p) for f, p in zip(G.factors, parts))
        if isinstance(G, CentralQuotientGroup):
            inner = strip_brackets(text) if text.startswith('[') else text
            return G.rep(parse_group_element(G.parent, inner))
        if isinstance(G, WreathProduct):
            values_text, top_text = split_top(strip_brackets(text, '()'))
            values = [parse_group_element(G.base, v)
                      for v in split_top(strip_brackets(values_text, '()'))]
            return G.from_values(values, parse_group_element(G.top, top_text))
    except (ValueError, StabfinError) as exc:
        if isinstance(exc, UsageError):
            raise
        raise UsageError(f"bad element {text!r} of {G}: {exc}") from None
    raise UsageError(f"no element syntax for {G}")


def generator_names(G):
    """Symbol name -> generator payload for group ring expressions."""
    if isinstance(G, CyclicGroup):
        if G.n == 0:
            return {'x': 1}
        return {'g': 1, 's': 1} if G.n > 1 else {}
    if isinstance(G, FreeAbelianGroup):
        return {f'x{i + 1}': g for i, g in enumerate(G.generators())}
    return {f'g{i + 1}': g for i, g in enumerate(G.generators())}


def parse_hom(text):
    """'C4->C2:[1]' -> verified hom sending the standard generators to the listed images."""
    arrow, _, images_text = text.rpartition(':')
    if '->' not in arrow:
        raise UsageError(f"expected SOURCE->TARGET:[images], got {text!r}")
    source_text, target_text = arrow.split('->', 1)
    source = make_group(parse_group(source_text))
    target = make_group(parse_group(target_text))
    images = [parse_group_element(target, t) for t in parse_list(images_text)]
    return hom_from_generator_images(source, target, images, name=text.strip())


# =============================================================================
# Rings and elements
# =============================================================================

def parse_ring(text):
    text = text.strip()
    if text == 'Z':
        return integers()
    match = re.fullmatch(r'Z/(\d+)', text)
    if match:
        return z_mod(int(match.group(1)))
    match = re.fullmatch(r'(?:F|GF)\(?(\d+)\)?', text)
    if match:
        return _gf_of_order(int(match.group(1)))
    match = re.fullmatch(r'(.+)\((\w+)\)', text)
    if match:
        return rat_fun(parse_ring(match.group(1)), match.group(2))
    raise UsageError(f"unknown ring {text!r}")


def _gf_of_order(q):
    factors = factorint(q)
    if len(factors) != 1:
        raise UsageError(f"{q} is not a prime power")
    (p, k), = factors.items()
    return make_gf(p, k)


def parse_base(text):
    """Coefficient ring, or group ring when the text has a [group] suffix."""
    text = text.strip()
    if text.endswith(']') and '[' in text:
        cut = text.index('[')
        return group_ring(parse_ring(text[:cut]), make_group(parse_group(text[cut + 1:-1])))
    return parse_ring(text)


def ring_symbols(R):
    """Symbol name -> RingScalar for every generator of a (tower) field."""
    if isinstance(R, GaloisField):
        return {R.var: R.scalar(R.generator_payload)} if R.k > 1 else {}
    if isinstance(R, SimpleExtension):
        out = {n: R.scalar(R.embed(s.payload)) for n, s in ring_symbols(R.base).items()}
        out[R.var] = R.scalar(R.generator_payload)
        return out
    if isinstance(R, RationalFunctionField):
        out = {n: R.scalar(R.constant(s.payload)) for n, s in ring_symbols(R.base).items()}
        out[R.var] = R.scalar(R.variable())
        return out
    return {}


def _sympify(text, names, commutative=True):
    local = {n: Symbol(n, commutative=commutative) for n in names}
    try:
        return parse_expr(text, local_dict=local, transformations=_TRANSFORMS)
    except Exception as exc:
        raise UsageError(f"cannot parse {text!r}: {exc}") from None


def _evaluate(expr, number, symbol, invert):
    if expr.is_Integer:
        return number(int(expr))
    if expr.is_Rational:
        return number(int(expr.p)) * invert(number(int(expr.q)))
    if expr.is_Symbol:
        return symbol(expr.name)
    if expr.is_Add:
        return reduce(add, (_evaluate(a, number, symbol, invert) for a in expr.args))
    if expr.is_Mul:
        return reduce(mul, (_evaluate(a, number, symbol, invert) for a in expr.args))
    if expr.is_Pow and expr.exp.is_Integer:
        base = _evaluate(expr.base, number, symbol, invert)
        k = int(expr.exp)
        if k < 0:
            base, k = invert(base), -k
        out = number(1)
        for _ in range(k):
            out = out * base
        return out
    raise UsageError(f"unsupported expression {expr}")


def _monomial_inverse(f):
    if len(f.terms) != 1:
        raise UsageError(f"only monomials can be inverted in {f.parent}, got {f!r}")
    (g, c), = f.terms
    return f.parent.monomial(f.group.inv(g), f.ring.inv(c))


def parse_scalar(R, text):
    symbols = ring_symbols(R)

    def symbol(name):
        if name not in symbols:
            raise UsageError(f"unknown symbol {name!r} in {R}")
        return symbols[name]

    try:
        return _evaluate(_sympify(text, symbols), R.element, symbol, lambda x: x.inverse())
    except (ArithmeticError, ZeroDivisionError) as exc:
        raise UsageError(f"{text!r} in {R}: {exc}") from None


def parse_group_ring_element(R, text):
    gens = generator_names(R.group)
    coeffs = ring_symbols(R.ring)
    clash = set(gens) & set(coeffs)
    if clash:
        raise UsageError(f"symbols {sorted(clash)} name both group and coefficient generators")

    def symbol(name):
        if name in gens:
            return R.monomial(gens[name])
        if name in coeffs:
            return R.from_dict({R.group.identity_payload: coeffs[name].payload})
        raise UsageError(f"unknown symbol {name!r} in {R}")

    expr = _sympify(text, list(gens) + list(coeffs), commutative=R.group.is_abelian)
    return _evaluate(expr, R.element, symbol, _monomial_inverse)


def parse_element(base, text):
    if isinstance(base, GroupRing):
        return parse_group_ring_element(base, text)
    return parse_scalar(base, text)


def parse_matrix(base, text):
    rows = [[parse_element(base, e) for e in parse_list(row)] for row in parse_list(text)]
    try:
        return matrix(base, rows)
    except StabfinError as exc:
        raise UsageError(str(exc)) from None


def parse_domain(R, text):
    """List of ring elements -> payloads."""
    return [parse_element(R, item).payload for item in parse_list(text)]


# =============================================================================
# Automata
# =============================================================================

def parse_alphabet(text):
    moduli = []
    for part in split_top(text.strip(), '+'):
        match = re.fullmatch(r'(F|Z/)(\d+)(?:\^(\d+))?', part)
        if not match:
            raise UsageError(f"bad alphabet part {part!r}")
        kind, m, d = match.group(1), int(match.group(2)), int(match.group(3) or 1)
        if kind == 'F':
            factors = factorint(m)
            if len(factors) != 1:
                raise UsageError(f"F{m}: {m} is not a prime power")
            (p, k), = factors.items()
            moduli += [p] * (k * d)
        elif m < 2:
            raise UsageError(f"Z/{m} is trivial")
        else:
            moduli += [m] * d
    return Alphabet.from_moduli(moduli)


def parse_memory(G, text):
    """[(s, M), ...] with M either [k] or a square integer matrix."""
    memory = []
    for item in parse_list(text):
        parts = split_top(strip_brackets(item, '()'))
        if len(parts) != 2:
            raise UsageError(f"memory entries are (element, matrix), got {item!r}")
        memory.append((parse_group_element(G, parts[0]), parse_literal(parts[1])))
    return memory


# =============================================================================
# Towers
# =============================================================================

_TRANSCENDENTAL_NAMES = ('t', 'u', 'v', 'w')


def parse_tower(p, text):
    """Tower over F_p from [alg:POLY, transc, transc:NAME, ...]."""
    rings = [make_gf(p)]
    steps = []
    for item in parse_list(text) if text.strip() not in ('', '[]') else []:
        kind, _, arg = item.partition(':')
        kind, arg = kind.strip(), arg.strip()
        known = ring_symbols(rings[-1])
        if kind == 'transc':
            var = arg or next((n for n in _TRANSCENDENTAL_NAMES if n not in known), None)
            if not var or var in known:
                raise UsageError(f"bad or repeated transcendental name in {item!r}")
            steps.append(transcendental_step(var))
            rings.append(rat_fun(rings[-1], var))
        elif kind == 'alg':
            expr = _sympify(arg, known)
            fresh = sorted(s.name for s in expr.free_symbols if s.name not in known)
            if len(fresh) != 1:
                raise UsageError(f"{arg!r} must use exactly one new variable, found {fresh}")
            var = fresh[0]
            K = rings[-1]
            coeffs = Poly(expr, Symbol(var)).all_coeffs()
            modulus = tuple(_evaluate(c, K.element, known.__getitem__, lambda x: x.inverse()).payload
                            for c in reversed(coeffs))
            try:
                rings.append(simple_extension(K, modulus, var))
            except (ValueError, Unsupported) as exc:
                raise UsageError(f"{arg!r}: {exc}") from None
            steps.append(algebraic_step(modulus, var))
        else:
            raise UsageError(f"tower steps are alg:POLY or transc[:NAME], got {item!r}")
    return build_tower(p, steps)
