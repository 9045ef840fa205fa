"""Finite fields GF(p^n) with deterministic moduli and compatible embeddings.

A field is described by its characteristic ``p``, extension degree ``n`` and a
canonical modulus: the lexicographically least monic irreducible polynomial of
degree ``n`` over GF(p), coefficients compared low-degree-first.  Elements are
coordinate vectors in the power basis 1, x, ..., x^(n-1); internally a vector
is packed into a single integer code sum(c_i * p^i), which keeps bulk numpy
kernels cheap while the public view stays the dense coordinate tuple.

Every value here is immutable after construction and safe to share between
threads; ``make_field`` caches, so equal (p, n) always yields the same object.
"""

from __future__ import annotations

import functools
import itertools
import os
from typing import Iterator, Sequence

import numpy as np

from .errors import FieldMismatch, FieldTooLarge, InvalidPrime, NoEmbedding

DEFAULT_SIZE_BOUND = 2**20

_size_bound = int(os.environ.get("REPDESCEND_SIZE_BOUND", DEFAULT_SIZE_BOUND))


def set_size_bound(bound: int) -> None:
    """Override the p^n size bound (CLI hook)."""
    global _size_bound
    _size_bound = int(bound)


def get_size_bound() -> int:
    return _size_bound


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


# ---------------------------------------------------------------------------
# polynomial helpers over GF(p), coefficients low-to-high as python tuples
# ---------------------------------------------------------------------------


def _ptrim(c: Sequence[int]) -> tuple[int, ...]:
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def _pmul(a: Sequence[int], b: Sequence[int], p: int) -> tuple[int, ...]:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _ptrim(out)


def _pmod(a: Sequence[int], f: Sequence[int], p: int) -> tuple[int, ...]:
    # f monic
    a = list(a)
    df = len(f) - 1
    while len(a) - 1 >= df and a:
        if a[-1] == 0:
            a.pop()
            continue
        lead = a[-1]
        shift = len(a) - 1 - df
        for i in range(df + 1):
            a[shift + i] = (a[shift + i] - lead * f[i]) % p
        a.pop()
    return _ptrim(a)


def _ppowmod(base: Sequence[int], e: int, f: Sequence[int], p: int) -> tuple[int, ...]:
    result: tuple[int, ...] = (1,)
    b = _pmod(base, f, p)
    while e:
        if e & 1:
            result = _pmod(_pmul(result, b, p), f, p)
        b = _pmod(_pmul(b, b, p), f, p)
        e >>= 1
    return result


def _pgcd(a: Sequence[int], b: Sequence[int], p: int) -> tuple[int, ...]:
    a, b = _ptrim(a), _ptrim(b)
    while b:
        # make b monic before reducing
        inv = pow(b[-1], p - 2, p)
        bm = tuple(x * inv % p for x in b)
        a, b = bm, _pmod(a, bm, p)
    if a:
        inv = pow(a[-1], p - 2, p)
        a = tuple(x * inv % p for x in a)
    return a


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _is_irreducible(f: Sequence[int], p: int) -> bool:
    """Monic f over GF(p): x^(p^n) == x mod f and gcd(x^(p^(n/r)) - x, f) = 1."""
    n = len(f) - 1
    if n == 1:
        return True
    x = (0, 1)
    if _ppowmod(x, p**n, f, p) != _pmod(x, f, p):
        return False
    for r in _prime_factors(n):
        xr = list(_ppowmod(x, p ** (n // r), f, p))
        xr += [0] * (2 - len(xr))
        xr[1] = (xr[1] - 1) % p  # subtract x
        g = _pgcd(_ptrim(xr), f, p)
        if len(g) - 1 > 0:
            return False
    return True


def _canonical_modulus(p: int, n: int) -> tuple[int, ...]:
    """Least monic irreducible of degree n over GF(p).

    Candidates x^n + c_{n-1} x^(n-1) + ... + c_0 are ordered by the packed
    value sum(c_i * p^i), low-degree coefficients least significant; this is
    the ordering under which GF(16) gets x^4 + x + 1.
    """
    for v in range(p**n):
        f = tuple((v // p**i) % p for i in range(n)) + (1,)
        if _is_irreducible(f, p):
            return f
    raise AssertionError("no irreducible polynomial found")  # unreachable


# ---------------------------------------------------------------------------
# field descriptors and elements
# ---------------------------------------------------------------------------


class FieldDesc:
    """GF(p^n) with its canonical modulus.  Construct via :func:`make_field`."""

    __slots__ = (
        "p",
        "n",
        "modulus",
        "order",
        "_powers",
        "_reduction",
        "_frob_mats",
        "_embeddings",
    )

    def __init__(self, p: int, n: int, modulus: tuple[int, ...]):
        self.p = p
        self.n = n
        self.modulus = modulus
        self.order = p**n
        self._powers = np.array([p**i for i in range(n)], dtype=np.int64)
        # rows t = coords of x^(n+t) mod modulus, t = 0..n-2
        red = np.zeros((max(n - 1, 0), n), dtype=np.int64)
        cur = _pmod((0,) * n + (1,), modulus, p)  # x^n mod f
        for t in range(n - 1):
            row = list(cur) + [0] * (n - len(cur))
            red[t] = row
            cur = _pmod(tuple([0] + list(cur)), modulus, p)
        self._reduction = red
        self._frob_mats: dict[int, np.ndarray] = {}
        self._embeddings: dict[tuple[int, int], "Embedding"] = {}

    # -- identity ----------------------------------------------------------

    def __repr__(self) -> str:
        return f"GF({self.p}^{self.n})" if self.n > 1 else f"GF({self.p})"

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, FieldDesc)
            and self.p == other.p
            and self.n == other.n
            and self.modulus == other.modulus
        )

    def __hash__(self) -> int:
        return hash((self.p, self.n, self.modulus))

    def to_dict(self) -> dict:
        return {"p": self.p, "n": self.n, "modulus": [int(c) for c in self.modulus]}

    # -- scalar code arithmetic ---------------------------------------------

    def code_of_coords(self, coords: Sequence[int]) -> int:
        if len(coords) != self.n:
            raise ValueError(f"expected {self.n} coordinates, got {len(coords)}")
        return sum((int(c) % self.p) * self.p**i for i, c in enumerate(coords))

    def coords_of_code(self, code: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.n):
            out.append(code % self.p)
            code //= self.p
        return tuple(out)

    def code_add(self, a: int, b: int) -> int:
        p = self.p
        ca, cb = self.coords_of_code(a), self.coords_of_code(b)
        return self.code_of_coords([(x + y) % p for x, y in zip(ca, cb)])

    def code_neg(self, a: int) -> int:
        p = self.p
        return self.code_of_coords([(-x) % p for x in self.coords_of_code(a)])

    def code_sub(self, a: int, b: int) -> int:
        return self.code_add(a, self.code_neg(b))

    def code_mul(self, a: int, b: int) -> int:
        if self.n == 1:
            return a * b % self.p
        prod = _pmod(
            _pmul(self.coords_of_code(a), self.coords_of_code(b), self.p),
            self.modulus,
            self.p,
        )
        return self.code_of_coords(list(prod) + [0] * (self.n - len(prod)))

    def code_pow(self, a: int, e: int) -> int:
        if e < 0:
            a = self.code_inv(a)
            e = -e
        result = 1
        while e:
            if e & 1:
                result = self.code_mul(result, a)
            a = self.code_mul(a, a)
            e >>= 1
        return result

    def code_inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero field element")
        return self.code_pow(a, self.order - 2)

    def code_frobenius(self, a: int, iterate: int = 1) -> int:
        it = iterate % self.n
        if it == 0:
            return a
        coords = np.array(self.coords_of_code(a), dtype=np.int64)
        out = coords @ self._frob_mat(it) % self.p
        return int(out @ self._powers)

    def _frob_mat(self, it: int) -> np.ndarray:
        it %= self.n
        if it not in self._frob_mats:
            if it == 0:
                self._frob_mats[0] = np.eye(self.n, dtype=np.int64)
            elif it == 1:
                m = np.zeros((self.n, self.n), dtype=np.int64)
                for i in range(self.n):
                    cur = _ppowmod((0, 1), i * self.p, self.modulus, self.p)
                    m[i, : len(cur)] = cur
                self._frob_mats[1] = m
            else:
                self._frob_mats[it] = (
                    self._frob_mat(it - 1) @ self._frob_mat(1) % self.p
                )
        return self._frob_mats[it]

    # -- element constructors ------------------------------------------------

    def element(self, coords: Sequence[int]) -> "FieldElem":
        return FieldElem(self, self.code_of_coords(coords))

    def from_code(self, code: int) -> "FieldElem":
        if not 0 <= code < self.order:
            raise ValueError(f"code {code} out of range for {self!r}")
        return FieldElem(self, code)

    def scalar(self, c: int) -> "FieldElem":
        """The image of the integer c under Z -> GF(p^n)."""
        return FieldElem(self, c % self.p)

    def zero(self) -> "FieldElem":
        return FieldElem(self, 0)

    def one(self) -> "FieldElem":
        return FieldElem(self, 1)

    def generator(self) -> "FieldElem":
        """The power-basis generator x (zero in the degenerate n = 1 model)."""
        return FieldElem(self, self.p if self.n > 1 else 0)

    def __iter__(self) -> Iterator["FieldElem"]:
        for code in range(self.order):
            yield FieldElem(self, code)

    # -- vectorized kernels on int64 code arrays -----------------------------

    def decode(self, codes: np.ndarray) -> np.ndarray:
        """codes (...,) -> coordinates (..., n)."""
        codes = np.asarray(codes, dtype=np.int64)
        out = np.empty(codes.shape + (self.n,), dtype=np.int64)
        rest = codes
        for i in range(self.n):
            out[..., i] = rest % self.p
            rest = rest // self.p
        return out

    def encode(self, coords: np.ndarray) -> np.ndarray:
        return (np.asarray(coords, dtype=np.int64) % self.p) @ self._powers

    def _reduce_coords(self, wide: np.ndarray) -> np.ndarray:
        """Reduce (..., 2n-1) convolution output to (..., n) mod modulus."""
        n = self.n
        if wide.shape[-1] <= n:
            out = np.zeros(wide.shape[:-1] + (n,), dtype=np.int64)
            out[..., : wide.shape[-1]] = wide
            return out % self.p
        low = wide[..., :n].copy()
        high = wide[..., n:]
        low += high @ self._reduction
        return low % self.p

    def vadd(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return self.encode(self.decode(a) + self.decode(b))

    def vsub(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return self.encode(self.decode(a) - self.decode(b))

    def vneg(self, a: np.ndarray) -> np.ndarray:
        return self.encode(-self.decode(a))

    def vmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Elementwise product with numpy broadcasting."""
        if self.n == 1:
            return np.asarray(a, dtype=np.int64) * np.asarray(b, dtype=np.int64) % self.p
        ca, cb = self.decode(a), self.decode(b)
        shape = np.broadcast_shapes(ca.shape[:-1], cb.shape[:-1])
        wide = np.zeros(shape + (2 * self.n - 1,), dtype=np.int64)
        for i in range(self.n):
            for j in range(self.n):
                wide[..., i + j] += ca[..., i] * cb[..., j]
        return self.encode(self._reduce_coords(wide % self.p))

    def vmatmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Matrix product of 2-D code arrays."""
        if self.n == 1:
            return (
                np.asarray(a, dtype=np.int64) @ np.asarray(b, dtype=np.int64) % self.p
            )
        ca, cb = self.decode(a), self.decode(b)
        wide = np.zeros((a.shape[0], b.shape[1], 2 * self.n - 1), dtype=np.int64)
        for i in range(self.n):
            for j in range(self.n):
                wide[..., i + j] += ca[..., i] @ cb[..., j]
        return self.encode(self._reduce_coords(wide % self.p))

    def vfrob(self, a: np.ndarray, iterate: int) -> np.ndarray:
        it = iterate % self.n
        if it == 0:
            return np.array(a, dtype=np.int64)
        return self.encode(self.decode(a) @ self._frob_mat(it))


class FieldElem:
    """An element of a FieldDesc, stored as a packed coordinate code."""

    __slots__ = ("field", "code")

    def __init__(self, field: FieldDesc, code: int):
        self.field = field
        self.code = code

    @property
    def coords(self) -> tuple[int, ...]:
        return self.field.coords_of_code(self.code)

    def _coerce(self, other) -> "FieldElem":
        if isinstance(other, FieldElem):
            if other.field != self.field:
                raise FieldMismatch(f"{other.field!r} element used in {self.field!r}")
            return other
        if isinstance(other, int):
            return self.field.scalar(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElem(self.field, self.field.code_add(self.code, o.code))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElem(self.field, self.field.code_sub(self.code, o.code))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElem(self.field, self.field.code_sub(o.code, self.code))

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElem(self.field, self.field.code_mul(self.code, o.code))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElem(self.field, self.field.code_mul(self.code, self.field.code_inv(o.code)))

    def __neg__(self):
        return FieldElem(self.field, self.field.code_neg(self.code))

    def __pow__(self, e: int):
        return FieldElem(self.field, self.field.code_pow(self.code, e))

    def inverse(self) -> "FieldElem":
        return FieldElem(self.field, self.field.code_inv(self.code))

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = self.field.scalar(other)
        return (
            isinstance(other, FieldElem)
            and self.field == other.field
            and self.code == other.code
        )

    def __hash__(self) -> int:
        return hash((self.field.p, self.field.n, self.code))

    def __bool__(self) -> bool:
        return self.code != 0

    def __repr__(self) -> str:
        return f"{list(self.coords)}@{self.field!r}"

    def to_list(self) -> list[int]:
        return [int(c) for c in self.coords]


@functools.lru_cache(maxsize=None)
def _make_field_cached(p: int, n: int) -> FieldDesc:
    return FieldDesc(p, n, _canonical_modulus(p, n))


def make_field(p: int, n: int, size_bound: int | None = None) -> FieldDesc:
    """The canonical GF(p^n).  Idempotent: equal inputs share one object."""
    if not isinstance(p, int) or not is_prime(p):
        raise InvalidPrime(f"{p} is not prime")
    if not isinstance(n, int) or n < 1:
        raise InvalidPrime(f"extension degree must be a positive integer, got {n}")
    bound = _size_bound if size_bound is None else size_bound
    if p**n > bound:
        raise FieldTooLarge(f"p^n = {p**n} exceeds the size bound {bound}")
    return _make_field_cached(p, n)


def field_from_dict(d: dict) -> FieldDesc:
    f = make_field(int(d["p"]), int(d["n"]))
    modulus = tuple(int(c) for c in d["modulus"])
    if modulus != f.modulus:
        raise FieldMismatch(
            f"modulus {list(modulus)} is not the canonical choice {list(f.modulus)}"
        )
    return f


# ---------------------------------------------------------------------------
# frobenius, embeddings, subfields
# ---------------------------------------------------------------------------


def frobenius(a: FieldElem, iterate: int = 1) -> FieldElem:
    """a^(p^iterate); iterate = field.n is the identity."""
    return FieldElem(a.field, a.field.code_frobenius(a.code, iterate))


class Embedding:
    """The canonical ring embedding GF(p^m) -> GF(p^n) for m | n.

    ``matrix`` is the induced GF(p)-linear map on power-basis coordinates,
    rows indexed by source basis powers.
    """

    __slots__ = ("source", "target", "image_of_generator", "matrix")

    def __init__(self, source: FieldDesc, target: FieldDesc, gen_image_code: int):
        self.source = source
        self.target = target
        self.image_of_generator = FieldElem(target, gen_image_code)
        m = np.zeros((source.n, target.n), dtype=np.int64)
        cur = 1
        for i in range(source.n):
            m[i] = target.decode(np.array(cur, dtype=np.int64))
            cur = target.code_mul(cur, gen_image_code)
        self.matrix = m

    def apply_code(self, code: int) -> int:
        coords = np.array(self.source.coords_of_code(code), dtype=np.int64)
        return int((coords @ self.matrix % self.source.p) @ self.target._powers)

    def apply(self, a: FieldElem) -> FieldElem:
        if a.field != self.source:
            raise FieldMismatch("element does not belong to the embedding source")
        return FieldElem(self.target, self.apply_code(a.code))

    def apply_array(self, codes: np.ndarray) -> np.ndarray:
        coords = self.source.decode(codes)
        return self.target.encode(coords @ self.matrix)


def _roots_in(field: FieldDesc, poly: Sequence[int]) -> list[int]:
    """Codes of roots in `field` of a polynomial with GF(p) coefficients."""
    codes = np.arange(field.order, dtype=np.int64)
    acc = np.full(field.order, int(poly[-1]) % field.p, dtype=np.int64)
    for c in reversed(poly[:-1]):
        acc = field.vadd(field.vmul(acc, codes), np.full(field.order, int(c) % field.p))
    return [int(v) for v in codes[acc == 0]]


def canonical_embedding(source: FieldDesc, target: FieldDesc) -> Embedding:
    """Tower-compatible embedding; cached on the target descriptor."""
    if source.p != target.p:
        raise FieldMismatch(f"cannot embed {source!r} into {target!r}: different p")
    if target.n % source.n != 0:
        raise NoEmbedding(f"no embedding {source!r} -> {target!r}: {source.n} does not divide {target.n}")
    key = (source.p, source.n)
    cache = target._embeddings
    if key in cache:
        return cache[key]
    if source == target:
        emb = Embedding(source, target, source.generator().code)
        cache[key] = emb
        return emb
    roots = _roots_in(target, source.modulus)
    # keep roots compatible with the already-canonical embeddings of every
    # proper subfield of the source
    proper = [d for d in range(1, source.n) if source.n % d == 0 and d > 1]
    candidates = []
    for r in roots:
        ok = True
        for d in proper:
            sub = make_field(source.p, d)
            into_src = canonical_embedding(sub, source)
            into_tgt = canonical_embedding(sub, target)
            # evaluate the source coordinates of into_src(gen) at r
            coords = source.coords_of_code(into_src.apply_code(sub.generator().code))
            acc = 0
            for c in reversed(coords):
                acc = target.code_add(target.code_mul(acc, r), c % target.p)
            if acc != into_tgt.apply_code(sub.generator().code):
                ok = False
                break
        if ok:
            candidates.append(r)
    if not candidates:
        raise AssertionError("no compatible embedding root")  # unreachable
    best = min(candidates, key=target.coords_of_code)
    emb = Embedding(source, target, best)
    cache[key] = emb
    return emb


def embed(a: FieldElem, target: FieldDesc) -> FieldElem:
    """Image of a under the canonical embedding into target."""
    return canonical_embedding(a.field, target).apply(a)


def subfields(K: FieldDesc, F: FieldDesc) -> list[FieldDesc]:
    """All intermediate fields of K/F, sorted by degree."""
    if F.p != K.p:
        raise FieldMismatch(f"{F!r} and {K!r} have different characteristic")
    if K.n % F.n != 0:
        raise NoEmbedding(f"{F!r} does not embed in {K!r}")
    rel = K.n // F.n
    return [make_field(K.p, F.n * d) for d in range(1, rel + 1) if rel % d == 0]
