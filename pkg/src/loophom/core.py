"""Scalars, admissible sequences and the monomial language shared by every module.

An :class:`Element` is a finite F_p-linear combination of :class:`Monomial`
objects.  A monomial is a product of powers of atoms ``Q^I b`` (``b`` a base
symbol or a pi_0 class) times an optional 0-dimensional shift ``[c]``.
Everything here is immutable; the arithmetic that needs Dyer-Lashof rules lives
in :mod:`loophom.dyer_lashof`.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import total_ordering
from typing import Iterable, Iterator, Mapping

INT64_MAX = 2**63 - 1


class LoopHomError(Exception):
    """Base class for every error raised by the package."""


class MalformedSequence(LoopHomError, ValueError):
    pass


class UnsupportedPrime(LoopHomError, ValueError):
    pass


class EngineInconsistency(LoopHomError, RuntimeError):
    """Two independent computations that must agree did not."""


class MissingData(LoopHomError, KeyError):
    """A coproduct, Steenrod or map table lacks an entry that is needed."""

    def __str__(self) -> str:  # KeyError quotes its argument otherwise
        return str(self.args[0]) if self.args else ""


def _check_bound(n: int, what: str = "value") -> int:
    if abs(n) > INT64_MAX:
        raise OverflowError(f"{what} {n} exceeds the 64-bit bound")
    return n


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class PrimeContext:
    p: int = 2

    def __post_init__(self) -> None:
        if not is_prime(self.p):
            raise UnsupportedPrime(f"{self.p} is not prime")

    @property
    def full_engine(self) -> bool:
        return self.p == 2

    def require_two(self, what: str) -> None:
        if self.p != 2:
            raise UnsupportedPrime(f"{what} is only implemented at p=2 (got p={self.p})")


# --------------------------------------------------------------------------
# excess and admissibility


@total_ordering
class _Infinity:
    """Tagged +infinity; compares above every integer."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __eq__(self, other):
        return other is self

    def __lt__(self, other):
        return False

    def __gt__(self, other):
        return other is not self

    def __hash__(self):
        return hash("+inf")

    def __repr__(self):
        return "+inf"


INFINITY = _Infinity()


def _check_seq(seq: Iterable[int]) -> tuple[int, ...]:
    seq = tuple(seq)
    for i in seq:
        if not isinstance(i, int) or i <= 0:
            raise MalformedSequence(f"sequence entries must be positive integers: {seq}")
        _check_bound(i, "sequence entry")
    return seq


def is_admissible(seq: Iterable[int]) -> bool:
    seq = _check_seq(seq)
    return all(a <= 2 * b for a, b in zip(seq, seq[1:]))


def excess(seq: Iterable[int], base_dim: int = 0):
    """``i_1 - base_dim - (i_2 + ... + i_r)``; :data:`INFINITY` for the empty sequence."""
    seq = _check_seq(seq)
    if not seq:
        return INFINITY
    return seq[0] - base_dim - sum(seq[1:])


def raw_excess(seq: tuple[int, ...], base_dim: int = 0):
    # same as excess() but tolerates zero entries (unnormalized input)
    if not seq:
        return INFINITY
    return seq[0] - base_dim - sum(seq[1:])


def admissible_sequences(dim: int, min_last: int = 1, max_len: int | None = None) -> list[tuple[int, ...]]:
    """All nonempty admissible sequences of total ``dim`` with last entry >= ``min_last``."""
    out: list[tuple[int, ...]] = []

    # grow from the right: the next entry to the left is at most twice the current first
    def grow(seq: tuple[int, ...], remaining: int) -> None:
        if remaining == 0:
            out.append(seq)
            return
        if max_len is not None and len(seq) >= max_len:
            return
        top = min(remaining, 2 * seq[0])
        for a in range(1, top + 1):
            grow((a,) + seq, remaining - a)

    for last in range(max(min_last, 1), dim + 1):
        grow((last,), dim - last)
    return sorted(out)


# --------------------------------------------------------------------------
# binomial coefficients


def binom_mod_p(n: int, k: int, p: int = 2) -> int:
    """C(n, k) mod p by Lucas' digit rule; zero outside ``0 <= k <= n``."""
    if n < 0 or k < 0 or k > n:
        return 0
    if p == 2:
        return 1 if (n & k) == k else 0
    result = 1
    while n or k:
        a, b = n % p, k % p
        if b > a:
            return 0
        # small digit binomial
        num = den = 1
        for j in range(b):
            num = num * (a - j) % p
            den = den * (j + 1) % p
        result = result * num * pow(den, p - 2, p) % p
        n //= p
        k //= p
    return result


# --------------------------------------------------------------------------
# generator symbols and pi_0


@dataclass(frozen=True)
class Symbol:
    """A named generator ``family(index)`` of fixed dimension.

    ``height`` is the relation discipline: ``None`` polynomial, ``2`` exterior,
    ``h`` truncated at ``x^h = 0``.  Derived symbols carry their definition.
    """

    family: str
    index: tuple[int, ...] = ()
    dim: int = 0
    height: int | None = None
    origin: str = "space-generator"
    definition: "Element | None" = field(default=None, compare=False, hash=False, repr=False)
    # coproduct / Steenrod / suspension data provider (see dyer_lashof.SpacePresentation)
    structure: object = field(default=None, compare=False, hash=False, repr=False)

    def __post_init__(self) -> None:
        if self.dim < 0:
            raise ValueError(f"negative dimension for {self.name}")
        _check_bound(self.dim, "dimension")

    @property
    def name(self) -> str:
        if not self.index:
            return self.family
        return f"{self.family}({','.join(map(str, self.index))})"

    def key(self):
        return (0, self.family, self.index)

    def __repr__(self) -> str:
        return f"Symbol({self.name}, dim={self.dim})"


@dataclass(frozen=True)
class Pi0Spec:
    """2-local pi_0 of QS^{-k}: cyclic summands of order 2^d, or Z when ``orders == (0,)``."""

    k: int
    orders: tuple[int, ...]
    names: tuple[str, ...]

    def __post_init__(self) -> None:
        if len(self.orders) != len(self.names):
            raise ValueError("one name per summand")
        for o in self.orders:
            if o != 0 and (o < 2 or o & (o - 1)):
                raise ValueError(f"summand order {o} is not a power of 2")
        if 0 in self.orders and len(self.orders) != 1:
            raise ValueError("the infinite summand only occurs alone (k=0)")
        if len(set(self.names)) != len(self.names):
            raise ValueError("duplicate generator names")

    @classmethod
    def from_orders(cls, k: int, orders: Iterable[int], names: Iterable[str] | None = None) -> "Pi0Spec":
        """Build from arbitrary cyclic orders, keeping only the 2-primary part."""
        orders = tuple(orders)
        names = tuple(names) if names is not None else tuple(f"g{j + 1}" for j in range(len(orders)))
        kept_orders, kept_names = [], []
        for o, name in zip(orders, names):
            two = 0 if o == 0 else (o & -o)
            if two != 1:
                kept_orders.append(two)
                kept_names.append(name)
        return cls(k, tuple(kept_orders), tuple(kept_names))

    @classmethod
    def integers(cls) -> "Pi0Spec":
        return cls(0, (0,), ("1",))

    @property
    def rank(self) -> int:
        return len(self.orders)

    def log2_order(self, j: int) -> int | None:
        o = self.orders[j]
        return None if o == 0 else o.bit_length() - 1

    def reduce(self, vec: Iterable[int]) -> tuple[int, ...]:
        vec = tuple(vec)
        if len(vec) != self.rank:
            raise ValueError(f"vector {vec} has wrong length for {self}")
        return tuple(v if o == 0 else v % o for v, o in zip(vec, self.orders))

    def zero(self) -> "Pi0Class":
        return Pi0Class(self, (0,) * self.rank)

    def generator(self, j: int | str) -> "Pi0Class":
        if isinstance(j, str):
            j = self.names.index(j)
        vec = [0] * self.rank
        vec[j] = 1
        return Pi0Class(self, tuple(vec))

    def element(self, vec: Iterable[int]) -> "Pi0Class":
        return Pi0Class(self, self.reduce(vec))

    def render(self, vec: tuple[int, ...]) -> str:
        if self.orders == (0,):
            return str(vec[0])
        parts = []
        for v, name in zip(vec, self.names):
            if v == 0:
                continue
            parts.append(name if v == 1 else f"{v} {name}")
        return "+".join(parts) if parts else "0"

    def __repr__(self) -> str:
        if self.orders == (0,):
            return f"Pi0Spec(k={self.k}, Z)"
        return f"Pi0Spec(k={self.k}, {'+'.join(f'Z/{o}' for o in self.orders)})"


@dataclass(frozen=True)
class Pi0Class:
    spec: Pi0Spec
    vec: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "vec", self.spec.reduce(self.vec))
        for v in self.vec:
            _check_bound(v, "pi_0 coefficient")

    def __add__(self, other: "Pi0Class") -> "Pi0Class":
        if other.spec != self.spec:
            raise ValueError("pi_0 classes from different specs")
        return Pi0Class(self.spec, tuple(a + b for a, b in zip(self.vec, other.vec)))

    def __neg__(self) -> "Pi0Class":
        return Pi0Class(self.spec, tuple(-a for a in self.vec))

    def __sub__(self, other: "Pi0Class") -> "Pi0Class":
        return self + (-other)

    def scale(self, n: int) -> "Pi0Class":
        return Pi0Class(self.spec, tuple(n * a for a in self.vec))

    @property
    def is_zero(self) -> bool:
        return not any(self.vec)

    def generator_index(self) -> int | None:
        """Index j if this class is exactly the declared generator gamma_j."""
        nz = [j for j, v in enumerate(self.vec) if v]
        if len(nz) == 1 and self.vec[nz[0]] == 1:
            return nz[0]
        return None

    @property
    def dim(self) -> int:
        return 0

    def key(self):
        return (1, self.vec)

    def __str__(self) -> str:
        return f"[{self.spec.render(self.vec)}]"

    __repr__ = __str__


Base = "Symbol | Pi0Class"


@dataclass(frozen=True)
class Atom:
    """``Q^seq`` applied to a base symbol or pi_0 class."""

    seq: tuple[int, ...]
    base: Symbol | Pi0Class

    @property
    def dim(self) -> int:
        return sum(self.seq) + self.base.dim

    @property
    def length(self) -> int:
        return len(self.seq)

    @property
    def is_normal(self) -> bool:
        """Admissible, above the instability line, on a generator."""
        if any(i <= 0 for i in self.seq):
            return False
        if not all(a <= 2 * b for a, b in zip(self.seq, self.seq[1:])):
            return False
        if isinstance(self.base, Pi0Class):
            return bool(self.seq) and self.base.generator_index() is not None and raw_excess(self.seq) > 0
        if self.base.definition is not None:
            return False
        return raw_excess(self.seq) > self.base.dim

    @property
    def height(self) -> int | None:
        if not self.is_normal:
            return None
        if isinstance(self.base, Pi0Class):
            return self.base.spec.orders[self.base.generator_index()] or None
        return self.base.height

    def component(self) -> Pi0Class | None:
        if isinstance(self.base, Pi0Class):
            return self.base.scale(2 ** len(self.seq))
        return None

    def key(self):
        return (self.dim, self.base.key(), self.seq)

    def __hash__(self) -> int:
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash((self.seq, self.base))
            self.__dict__["_hash"] = h
        return h

    def render(self) -> str:
        base = str(self.base) if isinstance(self.base, Pi0Class) else self.base.name
        if not self.seq:
            return base
        ops = f"Q[{','.join(map(str, self.seq))}]"
        return ops + base if isinstance(self.base, Pi0Class) else f"{ops} {base}"

    def __repr__(self) -> str:
        return self.render()


@dataclass(frozen=True)
class Monomial:
    """``[shift] * prod atom^e``; factors sorted, exponents positive."""

    factors: tuple[tuple[Atom, int], ...] = ()
    shift: Pi0Class | None = None

    def __post_init__(self) -> None:
        if self.shift is None:
            for a, _ in self.factors:
                if isinstance(a.base, Pi0Class):
                    object.__setattr__(self, "shift", a.base.spec.zero())
                    break

    @property
    def dim(self) -> int:
        return sum(a.dim * e for a, e in self.factors)

    @property
    def degree(self) -> int:
        """Number of atom factors counted with multiplicity."""
        return sum(e for _, e in self.factors)

    @property
    def is_unit(self) -> bool:
        return not self.factors and (self.shift is None or self.shift.is_zero)

    def label(self) -> Pi0Class | None:
        """Component of QS^{-k} containing this monomial."""
        if self.shift is None:
            return None
        lab = self.shift
        for a, e in self.factors:
            c = a.component()
            if c is not None:
                lab = lab + c.scale(e)
        return lab

    def __hash__(self) -> int:
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash((self.factors, self.shift))
            self.__dict__["_hash"] = h
        return h

    def key(self):
        return (
            self.dim,
            tuple((a.key(), e) for a, e in self.factors),
            self.shift.key() if self.shift is not None else (),
        )

    def __lt__(self, other: "Monomial") -> bool:
        return self.key() < other.key()

    def render(self) -> str:
        parts = []
        for a, e in self.factors:
            parts.append(a.render() if e == 1 else f"{a.render()}^{e}")
        if self.shift is not None and (not self.shift.is_zero or not parts):
            parts.append(str(self.shift))
        return " * ".join(parts) if parts else "1"

    def __repr__(self) -> str:
        return self.render()


UNIT = Monomial()


def make_monomial(factors: Iterable[tuple[Atom, int]], shift: Pi0Class | None = None) -> Monomial | None:
    """Collect factors; returns ``None`` when a truncation height kills the product."""
    acc: dict[Atom, int] = {}
    for a, e in factors:
        if e:
            acc[a] = acc.get(a, 0) + e
    for a, e in acc.items():
        _check_bound(e, "exponent")
        h = a.height
        if h is not None and e >= h:
            return None
    items = tuple(sorted(acc.items(), key=lambda t: t[0].key()))
    return Monomial(items, shift)


def mul_monomials(m: Monomial, n: Monomial) -> Monomial | None:
    if m.shift is None:
        shift = n.shift
    elif n.shift is None:
        shift = m.shift
    else:
        shift = m.shift + n.shift
    return make_monomial(list(m.factors) + list(n.factors), shift)


# --------------------------------------------------------------------------
# elements


class Element:
    """Immutable F_p-linear combination of monomials."""

    __slots__ = ("p", "_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, int] | None = None, p: int = 2):
        self.p = p
        clean = {}
        if terms:
            for m, c in terms.items():
                c %= p
                if c:
                    clean[m] = c
        self._terms = clean
        self._hash = None

    # construction helpers
    @classmethod
    def zero(cls, p: int = 2) -> "Element":
        return cls({}, p)

    @classmethod
    def one(cls, p: int = 2, shift: Pi0Class | None = None) -> "Element":
        return cls({Monomial((), shift): 1}, p)

    @classmethod
    def from_monomial(cls, m: Monomial | None, p: int = 2, coef: int = 1) -> "Element":
        return cls({m: coef} if m is not None else {}, p)

    @classmethod
    def atom(cls, seq: Iterable[int], base: Symbol | Pi0Class, p: int = 2) -> "Element":
        seq = tuple(seq)
        if isinstance(base, Pi0Class) and not seq:
            return cls.from_monomial(Monomial((), base), p)
        return cls.from_monomial(make_monomial([(Atom(seq, base), 1)]), p)

    @classmethod
    def pi0(cls, c: Pi0Class, p: int = 2) -> "Element":
        return cls.from_monomial(Monomial((), c), p)

    @classmethod
    def symbol(cls, s: Symbol, p: int = 2) -> "Element":
        return cls.atom((), s, p)

    # container protocol
    def items(self) -> Iterator[tuple[Monomial, int]]:
        for m in sorted(self._terms, key=Monomial.key):
            yield m, self._terms[m]

    def monomials(self) -> list[Monomial]:
        return sorted(self._terms, key=Monomial.key)

    def coefficient(self, m: Monomial) -> int:
        return self._terms.get(m, 0)

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def __eq__(self, other) -> bool:
        if isinstance(other, int) and other == 0:
            return self.is_zero
        if not isinstance(other, Element):
            return NotImplemented
        return self.p == other.p and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.p, frozenset(self._terms.items())))
        return self._hash

    # arithmetic
    def __add__(self, other: "Element") -> "Element":
        if isinstance(other, int) and other == 0:
            return self
        terms = dict(self._terms)
        for m, c in other._terms.items():
            terms[m] = terms.get(m, 0) + c
        return Element(terms, self.p)

    __radd__ = __add__

    def __neg__(self) -> "Element":
        return Element({m: -c for m, c in self._terms.items()}, self.p)

    def __sub__(self, other: "Element") -> "Element":
        return self + (-other)

    def scale(self, c: int) -> "Element":
        return Element({m: c * v for m, v in self._terms.items()}, self.p)

    def __mul__(self, other: "Element") -> "Element":
        if isinstance(other, int):
            return self.scale(other)
        terms: dict[Monomial, int] = {}
        for m, a in self._terms.items():
            for n, b in other._terms.items():
                mn = mul_monomials(m, n)
                if mn is not None:
                    terms[mn] = terms.get(mn, 0) + a * b
        return Element(terms, self.p)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Element":
        if n < 0:
            raise ValueError("negative exponents are not supported")
        result = Element.one(self.p, self._unit_shift())
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def _unit_shift(self) -> Pi0Class | None:
        for m in self._terms:
            if m.shift is not None:
                return m.shift.spec.zero()
        return None

    # grading
    def dims(self) -> set[int]:
        return {m.dim for m in self._terms}

    @property
    def dim(self) -> int | None:
        ds = self.dims()
        if len(ds) == 1:
            return ds.pop()
        return None

    def labels(self) -> set:
        return {m.label() for m in self._terms}

    @property
    def is_homogeneous(self) -> bool:
        return len(self.dims()) <= 1 and len(self.labels()) <= 1

    def homogeneous_parts(self) -> list["Element"]:
        parts: dict = {}
        for m, c in self._terms.items():
            parts.setdefault((m.dim, m.label()), {})[m] = c
        return [Element(parts[k], self.p) for k in sorted(parts, key=lambda k: (k[0], k[1].vec if k[1] else ()))]

    def map_monomials(self, fn) -> "Element":
        """Linear extension of ``fn: Monomial -> Element``."""
        total = Element.zero(self.p)
        for m, c in self._terms.items():
            total = total + fn(m).scale(c)
        return total

    def render(self) -> str:
        if not self._terms:
            return "0"
        out = []
        for m, c in self.items():
            s = m.render()
            out.append(s if c == 1 else f"{c} {s}")
        return " + ".join(out)

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"Element({self.render()})"


class Tensor:
    """Element of H (x) H, stored as pairs of monomials."""

    __slots__ = ("p", "_terms")

    def __init__(self, terms: Mapping[tuple[Monomial, Monomial], int] | None = None, p: int = 2):
        self.p = p
        self._terms = {k: c % p for k, c in (terms or {}).items() if c % p}

    @classmethod
    def pure(cls, a: Element, b: Element) -> "Tensor":
        terms: dict = {}
        for m, x in a.items():
            for n, y in b.items():
                terms[(m, n)] = terms.get((m, n), 0) + x * y
        return cls(terms, a.p)

    def items(self):
        for k in sorted(self._terms, key=lambda t: (t[0].key(), t[1].key())):
            yield k, self._terms[k]

    def __add__(self, other: "Tensor") -> "Tensor":
        terms = dict(self._terms)
        for k, c in other._terms.items():
            terms[k] = terms.get(k, 0) + c
        return Tensor(terms, self.p)

    def __mul__(self, other: "Tensor") -> "Tensor":
        terms: dict = {}
        for (a, b), x in self._terms.items():
            for (c, d), y in other._terms.items():
                ac = mul_monomials(a, c)
                bd = mul_monomials(b, d)
                if ac is None or bd is None:
                    continue
                terms[(ac, bd)] = terms.get((ac, bd), 0) + x * y
        return Tensor(terms, self.p)

    def __eq__(self, other) -> bool:
        return isinstance(other, Tensor) and self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __len__(self) -> int:
        return len(self._terms)

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def map(self, left, right) -> "Tensor":
        """Apply ``left``/``right`` (Monomial -> Element) factorwise."""
        total = Tensor({}, self.p)
        for (a, b), c in self._terms.items():
            t = Tensor.pure(left(a), right(b))
            total = total + Tensor({k: v * c for k, v in t._terms.items()}, self.p)
        return total

    def render(self) -> str:
        if not self._terms:
            return "0"
        return " + ".join(f"{a.render()} (x) {b.render()}" for (a, b), _ in self.items())

    def __repr__(self) -> str:
        return f"Tensor({self.render()})"
