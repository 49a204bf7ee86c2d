"""Exact arithmetic in finite field towers GF(p) <= GF(q) <= GF(q^2) <= GF(q^(2m)).

Elements are plain ints: the element with polynomial-basis coefficients
(c0, c1, ..., c_{m-1}) over GF(p) is packed as c0 + c1*p + ... + c_{m-1}*p^(m-1).
This keeps hot loops (exhaustive scans, matrix products) cheap and makes every
field element hashable and orderable for free.  The packed order 0, 1, 2, ...
is the fixed enumeration order used everywhere a "first" or "smallest" element
is promised.

A Field lazily builds exp/log tables (and Zech logarithms for odd p), so
multiplication, inversion, powering and discrete logs are table lookups for
every field small enough to matter at desk scale.  Fields are interned by
(p, m, modulus): two calls to make_field with the same data return the same
object, and elements of distinct Field objects must never be mixed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

TABLE_LIMIT = 1 << 20  # build exp/log/Zech tables up to this field size
_TABLE_LIMIT = TABLE_LIMIT


class FieldError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_power_split(q: int):
    """Return (p, n) with q = p^n, or raise if q is not a prime power >= 2."""
    if q < 2:
        raise FieldError(f"q={q} is not a prime power")
    p = 2
    while p * p <= q:
        if q % p == 0:
            n = 0
            m = q
            while m % p == 0:
                m //= p
                n += 1
            if m != 1:
                raise FieldError(f"q={q} is not a prime power")
            return p, n
        p += 1
    return q, 1  # q itself is prime


def is_prime_power(q: int) -> bool:
    try:
        prime_power_split(q)
        return True
    except FieldError:
        return False


def _factorize(n: int):
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1 if f == 2 else 2
    if n > 1:
        out.append(n)
    return out


# ---------------------------------------------------------------------------
# polynomial helpers over GF(p), coefficients as tuples low-to-high
# ---------------------------------------------------------------------------

def _poly_trim(c):
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def _poly_mulmod(a, b, mod, p):
    if not a or not b:
        return ()
    prod = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] = (prod[i + j] + ai * bj) % p
    return _poly_divmod_rem(prod, mod, p)


def _poly_divmod_rem(a, mod, p):
    a = list(a)
    dm = len(mod) - 1
    inv_lead = pow(mod[-1], -1, p)
    for i in range(len(a) - 1, dm - 1, -1):
        c = a[i] % p
        if c:
            f = (c * inv_lead) % p
            for j in range(dm + 1):
                a[i - dm + j] = (a[i - dm + j] - f * mod[j]) % p
    return _poly_trim(a[:dm])


def _poly_powmod(a, e, mod, p):
    result = (1,)
    base = _poly_divmod_rem(list(a), mod, p) if len(a) >= len(mod) else _poly_trim(a)
    while e:
        if e & 1:
            result = _poly_mulmod(result, base, mod, p)
        base = _poly_mulmod(base, base, mod, p)
        e >>= 1
    return result


def _poly_gcd(a, b, p):
    a, b = _poly_trim(a), _poly_trim(b)
    while b:
        a, b = b, _poly_mod(a, b, p)
    return a


def _poly_mod(a, b, p):
    a = list(a)
    db = len(b) - 1
    inv_lead = pow(b[-1], -1, p)
    while len(a) - 1 >= db and _poly_trim(a):
        sh = len(a) - 1 - db
        f = (a[-1] * inv_lead) % p
        for j in range(db + 1):
            a[sh + j] = (a[sh + j] - f * b[j]) % p
        a = list(_poly_trim(a))
        if not a:
            break
    return _poly_trim(a)


def is_irreducible(modulus, p: int) -> bool:
    """Deterministic irreducibility test over GF(p) for a monic polynomial."""
    mod = _poly_trim(modulus)
    m = len(mod) - 1
    if m < 1 or mod[-1] != 1:
        return False
    if m == 1:
        return True
    if mod[0] == 0:
        return False  # divisible by x
    if sum(mod) % p == 0:
        return False  # root at 1
    x = (0, 1)
    # x^(p^m) == x mod f, and x^(p^(m/r)) - x coprime to f for prime r | m
    xp = _poly_powmod(x, p ** m, mod, p)
    if xp != _poly_trim(x):
        return False
    for r in set(_factorize(m)):
        xe = _poly_powmod(x, p ** (m // r), mod, p)
        diff = list(xe) + [0] * (2 - len(xe))
        diff[1] = (diff[1] - 1) % p
        g = _poly_gcd(diff, mod, p)
        if len(g) - 1 >= 1:
            return False
    return True


def default_modulus(p: int, m: int):
    """First monic irreducible of degree m over GF(p), non-leading coefficients
    ordered lexicographically (constant term compared first)."""
    if m == 1:
        return (0, 1)
    from itertools import product
    for coeffs in product(range(p), repeat=m):
        cand = tuple(coeffs) + (1,)
        if is_irreducible(cand, p):
            return cand
    raise FieldError(f"no irreducible of degree {m} over GF({p})")  # unreachable


# ---------------------------------------------------------------------------
# the field itself
# ---------------------------------------------------------------------------

class Field:
    """GF(p^m) with an explicit monic irreducible modulus.

    Elements are packed ints in [0, p^m).  Do not construct directly, use
    make_field so instances are interned.
    """

    def __init__(self, p: int, m: int, modulus):
        self.p = p
        self.m = m
        self.modulus = tuple(modulus)
        self.order = p ** m
        self.zero = 0
        self.one = 1
        self._exp = None   # exp[i] = g^i, length order-1
        self._log = None   # log[x] for x != 0
        self._zech = None  # odd p only: zech[n] = log(1 + g^n), -1 marks zero
        self._gen = None
        self._mod_mask = None
        if p == 2:
            self._mod_mask = sum(c << i for i, c in enumerate(self.modulus))

    # -- representation helpers ------------------------------------------------

    def coeffs(self, x: int):
        """Polynomial-basis coefficients of x, low to high, length m."""
        out = []
        for _ in range(self.m):
            x, r = divmod(x, self.p)
            out.append(r)
        return out

    def element(self, coeffs) -> int:
        v = 0
        for c in reversed(list(coeffs)):
            v = v * self.p + (c % self.p)
        if v >= self.order:
            raise FieldError("coefficient vector too long")
        return v

    def elements(self):
        return range(self.order)

    def __repr__(self):
        return f"GF({self.p}^{self.m})" if self.m > 1 else f"GF({self.p})"

    # -- raw arithmetic (no tables) ---------------------------------------------

    def _add_raw(self, x: int, y: int) -> int:
        if self.p == 2:
            return x ^ y
        out = 0
        mult = 1
        for _ in range(self.m):
            x, a = divmod(x, self.p)
            y, b = divmod(y, self.p)
            out += ((a + b) % self.p) * mult
            mult *= self.p
        return out

    def _neg_raw(self, x: int) -> int:
        if self.p == 2:
            return x
        out = 0
        mult = 1
        for _ in range(self.m):
            x, a = divmod(x, self.p)
            out += ((-a) % self.p) * mult
            mult *= self.p
        return out

    def _mul_raw(self, x: int, y: int) -> int:
        p = self.p
        if p == 2:
            mask = self._mod_mask
            top = 1 << self.m
            r = 0
            while y:
                if y & 1:
                    r ^= x
                y >>= 1
                x <<= 1
                if x & top:
                    x ^= mask
            return r
        a = self.coeffs(x)
        b = self.coeffs(y)
        prod = [0] * (2 * self.m - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    prod[i + j] = (prod[i + j] + ai * bj) % p
        rem = _poly_divmod_rem(prod, self.modulus, p)
        v = 0
        for c in reversed(rem):
            v = v * p + c
        return v

    def _pow_raw(self, x: int, e: int) -> int:
        r = 1
        while e:
            if e & 1:
                r = self._mul_raw(r, x)
            x = self._mul_raw(x, x)
            e >>= 1
        return r

    # -- tables -----------------------------------------------------------------

    def _order_of(self, x: int, factors) -> int:
        n = self.order - 1
        o = n
        for f in factors:
            while o % f == 0 and self._pow_raw(x, o // f) == 1:
                o //= f
        return o

    def generator(self) -> int:
        """Smallest (in packed order) generator of the multiplicative group."""
        if self._gen is not None:
            return self._gen
        n = self.order - 1
        factors = _factorize(n)
        for x in range(1, self.order):
            if self._order_of(x, factors) == n:
                self._gen = x
                return x
        raise FieldError("no generator found")  # unreachable

    def _ensure_tables(self):
        if self._exp is not None or self.order > _TABLE_LIMIT:
            return
        g = self.generator()
        n = self.order - 1
        exp = [0] * n
        log = [0] * self.order
        v = 1
        for i in range(n):
            exp[i] = v
            log[v] = i
            v = self._mul_raw(v, g)
        self._exp = exp
        self._log = log
        if self.p != 2:
            # zech[k] = log(1 + g^k); -1 where 1 + g^k = 0
            zech = [0] * n
            for k in range(n):
                t = self._add_raw(1, exp[k])
                zech[k] = log[t] if t else -1
            self._zech = zech

    @property
    def has_tables(self) -> bool:
        self._ensure_tables()
        return self._exp is not None

    # -- public arithmetic --------------------------------------------------------

    def add(self, x: int, y: int) -> int:
        if self.p == 2:
            return x ^ y
        if x == 0:
            return y
        if y == 0:
            return x
        if self.has_tables:
            n = self.order - 1
            a = self._log[x]
            d = (self._log[y] - a) % n
            z = self._zech[d]
            if z < 0:
                return 0
            return self._exp[(a + z) % n]
        return self._add_raw(x, y)

    def neg(self, x: int) -> int:
        if self.p == 2 or x == 0:
            return x
        if self.has_tables:
            n = self.order - 1
            return self._exp[(self._log[x] + n // 2) % n]
        return self._neg_raw(x)

    def sub(self, x: int, y: int) -> int:
        if self.p == 2:
            return x ^ y
        return self.add(x, self.neg(y))

    def mul(self, x: int, y: int) -> int:
        if x == 0 or y == 0:
            return 0
        if self.has_tables:
            n = self.order - 1
            return self._exp[(self._log[x] + self._log[y]) % n]
        return self._mul_raw(x, y)

    def inv(self, x: int) -> int:
        if x == 0:
            raise ZeroDivisionError("zero has no inverse")
        if self.has_tables:
            n = self.order - 1
            return self._exp[(-self._log[x]) % n]
        return self._pow_raw(x, self.order - 2)

    def div(self, x: int, y: int) -> int:
        return self.mul(x, self.inv(y))

    def pow(self, x: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(x), -e)
        if x == 0:
            return 1 if e == 0 else 0
        if self.has_tables:
            n = self.order - 1
            return self._exp[(self._log[x] * e) % n]
        return self._pow_raw(x, e % (self.order - 1) if e else 0)

    def frobenius(self, x: int, e: int) -> int:
        """x^(p^e).  An automorphism fixing GF(p); e=0 is the identity."""
        if e < 0:
            raise FieldError("frobenius exponent must be >= 0")
        return self.pow(x, self.p ** e)

    def in_subfield(self, x: int, suborder: int) -> bool:
        """Whether x lies in the subfield with `suborder` elements."""
        return self.pow(x, suborder) == x

    def dlog(self, x: int) -> int:
        """Discrete log base the canonical generator."""
        if x == 0:
            raise ZeroDivisionError("log of zero")
        if self.has_tables:
            return self._log[x]
        # baby-step giant-step fallback for oversized fields
        n = self.order - 1
        g = self.generator()
        s = math.isqrt(n) + 1
        baby = {}
        v = 1
        for j in range(s):
            baby.setdefault(v, j)
            v = self._mul_raw(v, g)
        step = self.inv(v)  # g^(-s)
        cur = x
        for i in range(s + 1):
            if cur in baby:
                return (i * s + baby[cur]) % n
            cur = self._mul_raw(cur, step)
        raise FieldError("dlog failed")  # unreachable

    def exp_gen(self, e: int) -> int:
        """Generator raised to e."""
        if self.has_tables:
            return self._exp[e % (self.order - 1)]
        return self._pow_raw(self.generator(), e % (self.order - 1))

    def power_roots(self, w: int, k: int):
        """All x with x^k = w, sorted in packed order."""
        if w == 0:
            return [0]
        n = self.order - 1
        lw = self.dlog(w)
        d = math.gcd(k, n)
        if lw % d:
            return []
        nd = n // d
        base = (lw // d) * pow(k // d, -1, nd) % nd
        return sorted(self.exp_gen(base + t * nd) for t in range(d))


@lru_cache(maxsize=None)
def _field_cache(p: int, m: int, modulus) -> Field:
    return Field(p, m, modulus)


def make_field(p: int, m: int = 1, modulus=None) -> Field:
    """Validated, interned GF(p^m).  Omitting the modulus picks the first
    monic irreducible in lexicographic coefficient order, so runs are
    reproducible."""
    if not is_prime(p):
        raise FieldError(f"p={p} is not prime")
    if m < 1:
        raise FieldError(f"extension degree m={m} must be >= 1")
    if modulus is None:
        modulus = default_modulus(p, m)
    else:
        modulus = tuple(c % p for c in modulus)
        if len(modulus) != m + 1 or modulus[-1] != 1:
            raise FieldError("modulus must be monic of degree m")
        if not is_irreducible(modulus, p):
            raise FieldError(f"modulus {list(modulus)} is reducible over GF({p})")
    return _field_cache(p, m, modulus)


def gf(q: int) -> Field:
    """GF(q) with the default modulus, q any prime power."""
    p, n = prime_power_split(q)
    return make_field(p, n)


def gfq2(q: int) -> Field:
    """The quadratic extension GF(q^2) that hosts conjugation x -> x^q."""
    p, n = prime_power_split(q)
    return make_field(p, 2 * n)


def gf_ext(q: int, m: int) -> Field:
    """GF(q^(2m)), the degree-m extension of GF(q^2)."""
    p, n = prime_power_split(q)
    return make_field(p, 2 * n * m)


def conj(field: Field, x: int, q: int) -> int:
    """Conjugation x -> x^q inside an extension of GF(q^2)."""
    return field.pow(x, q)


# ---------------------------------------------------------------------------
# embeddings
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Embedding:
    """Ring-homomorphic inclusion of src into dst, determined by a root of
    src.modulus in dst (the smallest such root in packed order)."""
    src: Field
    dst: Field
    image_of_generator: int

    def __call__(self, x: int) -> int:
        dst = self.dst
        img = self.image_of_generator
        out = 0
        for c in reversed(self.src.coeffs(x)):
            out = dst.add(dst.mul(out, img), c)
        return out


@lru_cache(maxsize=None)
def _embedding_cache(src_key, dst_key) -> Embedding:
    src = _field_cache(*src_key)
    dst = _field_cache(*dst_key)
    # roots of src.modulus lie in the unique subfield of size src.order;
    # its nonzero part is the index-(dst*/src*) power subgroup
    if src.m == 1:
        return Embedding(src, dst, 0 if src.modulus == (0, 1) else dst.neg(src.modulus[0]))
    idx = (dst.order - 1) // (src.order - 1)
    candidates = sorted(dst.exp_gen(t * idx) for t in range(src.order - 1))
    for r in candidates:
        acc = 0
        for c in reversed(src.modulus):
            acc = dst.add(dst.mul(acc, r), c)
        if acc == 0:
            return Embedding(src, dst, r)
    raise FieldError("no root of src modulus found in dst")  # impossible


def make_embedding(src: Field, dst: Field) -> Embedding:
    if src.p != dst.p or dst.m % src.m:
        raise FieldError(f"{src} does not embed in {dst}")
    return _embedding_cache((src.p, src.m, src.modulus), (dst.p, dst.m, dst.modulus))


def embed(x: int, emb: Embedding) -> int:
    return emb(x)


# ---------------------------------------------------------------------------
# norm equation
# ---------------------------------------------------------------------------

def solve_norm(field2: Field, a: int, q: int = None) -> int:
    """Smallest x in GF(q^2) with x^(q+1) = a, for nonzero a in the GF(q)
    subfield.  The norm map onto GF(q) is surjective, so x always exists."""
    if q is None:
        if field2.m % 2:
            raise FieldError("field has no index-2 subfield")
        q = field2.p ** (field2.m // 2)
    if a == 0:
        raise FieldError("norm equation needs a nonzero target")
    if not field2.in_subfield(a, q):
        raise FieldError("target lies outside the GF(q) subfield")
    roots = field2.power_roots(a, q + 1)
    if not roots:
        raise FieldError("norm equation unsolvable")  # cannot happen over GF(q^2)
    return roots[0]


# ---------------------------------------------------------------------------
# JSON forms
# ---------------------------------------------------------------------------

def field_to_json(field: Field) -> dict:
    return {"p": field.p, "m": field.m, "modulus": list(field.modulus)}


def field_from_json(obj) -> Field:
    return make_field(obj["p"], obj["m"], tuple(obj["modulus"]))


def element_to_json(field: Field, x: int) -> dict:
    out = field_to_json(field)
    out["coeffs"] = field.coeffs(x)
    return out


def element_from_json(obj):
    field = field_from_json(obj)
    return field, field.element(obj["coeffs"])
