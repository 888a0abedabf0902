"""Dyer-Lashof operations at p=2: Adem normalization, Cartan rules, coproducts, bases.

Every function takes and returns :class:`~loophom.core.Element` values.  The
ring an element lives in is implicit in its atoms: a base symbol carries its
relation discipline (``height``) and a pointer to the presentation that knows
its coproduct and Steenrod action; a pi_0 class carries its :class:`Pi0Spec`.
"""
from __future__ import annotations

import re
import threading
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable

from .core import (
    Atom,
    Element,
    EngineInconsistency,
    MissingData,
    Monomial,
    Pi0Class,
    Symbol,
    Tensor,
    UnsupportedPrime,
    admissible_sequences,
    binom_mod_p,
    make_monomial,
)
from .expr import Context, parse_expression


def _require_two(e: Element, what: str) -> None:
    if e.p != 2:
        raise UnsupportedPrime(f"{what} is only implemented at p=2 (got p={e.p})")


# --------------------------------------------------------------------------
# the Dyer-Lashof algebra itself


def adem_terms(r: int, s: int) -> list[tuple[int, int]]:
    """Q^r Q^s for r > 2s as the list of admissible pairs with odd coefficient."""
    if r <= 2 * s:
        return [(r, s)]
    out = []
    for i in range((r + 1) // 2, r - s):
        if binom_mod_p(i - s - 1, 2 * i - r):
            out.append((r + s - i, i))
    return out


@lru_cache(maxsize=None)
def normalize_sequence(seq: tuple[int, ...]) -> frozenset[tuple[int, ...]]:
    """Admissible expansion of the composite operation ``Q^seq`` (mod 2).

    This is the Dyer-Lashof algebra product only; no instability is applied.
    """
    for j in range(len(seq) - 1):
        if seq[j] > 2 * seq[j + 1]:
            out: set[tuple[int, ...]] = set()
            for a, b in adem_terms(seq[j], seq[j + 1]):
                for t in normalize_sequence(seq[:j] + (a, b) + seq[j + 2:]):
                    out ^= {t}
            return frozenset(out)
    return frozenset({seq})


# --------------------------------------------------------------------------
# Q^n on elements


def _unit_like(m_shift: Pi0Class | None) -> Element:
    return Element.one(2, m_shift.spec.zero() if m_shift is not None else None)


def q_apply(n: int, e: Element) -> Element:
    """Q^n with Cartan, instability (Q^i x = 0 below dim x, Q^{dim x} x = x^2) and Adem."""
    if n < 0:
        raise ValueError("Q^n needs n >= 0")
    _require_two(e, "q_apply")
    total = Element.zero()
    for m, _ in e.items():
        total = total + _q_monomial(n, m)
    return total


def q_seq(seq: Iterable[int], e: Element) -> Element:
    """Q^{i_1} ... Q^{i_r} e, applied right to left."""
    for a in reversed(tuple(seq)):
        e = q_apply(a, e)
    return e


def _cartan(n: int, pieces: list, unit: Element) -> Element:
    """Sum over a_1+...+a_m = n of prod F_j(a_j).

    Pieces are ``(lo, hi, F)`` with F_j(a) = 0 outside lo <= a <= hi (``hi`` None: unbounded).
    """
    pieces = [p if len(p) == 3 else (p[0], None, p[1]) for p in pieces]
    los = [lo for lo, _, _ in pieces]
    his = [hi for _, hi, _ in pieces]
    acc = {0: unit}
    m = len(pieces)
    for j, (lo, hi, fn) in enumerate(pieces):
        rest_lo = sum(los[j + 1:])
        rest_hi = None if any(h is None for h in his[j + 1:]) else sum(his[j + 1:])
        new: dict[int, Element] = {}
        for t, x in acc.items():
            if j == m - 1:
                rng = [n - t] if lo <= n - t and (hi is None or n - t <= hi) else []
            else:
                top = n - t - rest_lo
                if hi is not None:
                    top = min(top, hi)
                bottom = lo if rest_hi is None else max(lo, n - t - rest_hi)
                rng = range(bottom, top + 1)
            for a in rng:
                y = fn(a)
                if y.is_zero:
                    continue
                new[t + a] = new.get(t + a, Element.zero()) + x * y
        acc = {k: v for k, v in new.items() if not v.is_zero}
        if not acc:
            return Element.zero()
    return acc.get(n, Element.zero())


@lru_cache(maxsize=None)
def _q_monomial(n: int, m: Monomial) -> Element:
    if any(not a.is_normal for a, _ in m.factors):
        return q_apply(n, normalize(Element.from_monomial(m)))
    pieces: list[tuple[int, Callable[[int], Element]]] = []
    if m.shift is not None and not m.shift.is_zero:
        shift = m.shift
        pieces.append((0, lambda a, c=shift: q_pi0(a, c)))
    for atom, e in m.factors:
        pieces.append((atom.dim * e, lambda a, atom=atom, e=e: _q_atom_power(a, atom, e)))
    unit = _unit_like(m.shift)
    if not pieces:
        return unit if n == 0 else Element.zero()
    return _cartan(n, pieces, unit)


@lru_cache(maxsize=None)
def _q_atom_power(a: int, atom: Atom, e: int) -> Element:
    if e == 1:
        return q_atom(a, atom)
    if e % 2 == 0:
        if a % 2:
            return Element.zero()
        half = _q_atom_power(a // 2, atom, e // 2)
        return half * half
    rest = Element.from_monomial(make_monomial([(atom, e - 1)]))
    if rest.is_zero:
        return Element.zero()
    unit = _unit_like(rest.monomials()[0].shift)
    return _cartan(a, [(atom.dim, lambda b: q_atom(b, atom)),
                       (atom.dim * (e - 1), lambda b: _q_atom_power(b, atom, e - 1))], unit)


@lru_cache(maxsize=None)
def q_atom(a: int, atom: Atom) -> Element:
    """Q^a on a single normal atom."""
    base = atom.base
    if not atom.seq:
        if isinstance(base, Pi0Class):
            return q_pi0(a, base)
        if base.definition is not None:
            return q_apply(a, normalize(base.definition))
        d = base.dim
        if a < d:
            return Element.zero()
        if a == d:
            return Element.from_monomial(make_monomial([(atom, 2)]))
        return Element.atom((a,), base)
    if not atom.is_normal:
        return q_apply(a, normalize(Element.from_monomial(make_monomial([(atom, 1)]))))
    j1 = atom.seq[0]
    rest = _bare(Atom(atom.seq[1:], base))
    if a > 2 * j1:
        total = Element.zero()
        for x, y in adem_terms(a, j1):
            total = total + q_apply(x, q_apply(y, rest))
        return total
    d = atom.dim
    if a < d:
        return Element.zero()
    if a == d:
        return Element.from_monomial(make_monomial([(atom, 2)]))
    return Element.atom((a,) + atom.seq, base)


def _bare(atom: Atom) -> Element:
    if not atom.seq and isinstance(atom.base, Pi0Class):
        return Element.pi0(atom.base)
    return Element.from_monomial(make_monomial([(atom, 1)]))


@lru_cache(maxsize=None)
def q_pi0(a: int, c: Pi0Class) -> Element:
    """Q^a[c] for an arbitrary pi_0 class, in terms of the declared generators.

    Uses [c] = prod [gamma_j]^{n_j}, the Cartan formula and, for negative
    multiples in pi_0 = Z, the relation 0 = Q^a([m] * [-m]) for a > 0.
    """
    spec = c.spec
    pieces = []
    for j, nj in enumerate(c.vec):
        if nj:
            pieces.append((0, lambda b, j=j, nj=nj: _q_gen_power(b, spec.generator(j), nj)))
    unit = Element.pi0(spec.zero())
    if not pieces:
        return unit if a == 0 else Element.zero()
    return _cartan(a, pieces, unit)


@lru_cache(maxsize=None)
def _q_gen_power(a: int, g: Pi0Class, n: int) -> Element:
    spec = g.spec
    if n == 0:
        return Element.pi0(spec.zero()) if a == 0 else Element.zero()
    if a == 0:
        return Element.pi0(g.scale(2 * n))
    if n == 1:
        return Element.atom((a,), g)
    if n < 0:
        m = -n
        total = Element.zero()
        for b in range(1, a + 1):
            total = total + _q_gen_power(b, g, m) * _q_gen_power(a - b, g, n)
        return Element.pi0(g.scale(-2 * m)) * total
    if n % 2 == 0:
        if a % 2:
            return Element.zero()
        half = _q_gen_power(a // 2, g, n // 2)
        return half * half
    return _cartan(a, [(0, lambda b: _q_gen_power(b, g, 1)), (0, lambda b: _q_gen_power(b, g, n - 1))],
                   Element.pi0(spec.zero()))


# --------------------------------------------------------------------------
# normalization


@lru_cache(maxsize=None)
def _normalize_atom(atom: Atom) -> Element:
    base = atom.base
    if isinstance(base, Pi0Class):
        x = Element.pi0(base)
    elif base.definition is not None:
        x = normalize(base.definition)
    else:
        x = Element.symbol(base)
    return q_seq(atom.seq, x)


@lru_cache(maxsize=None)
def _normalize_monomial(m: Monomial) -> Element:
    if all(a.is_normal for a, _ in m.factors):
        return Element.from_monomial(m)
    out = Element.pi0(m.shift) if m.shift is not None else Element.one()
    for a, e in m.factors:
        out = out * (_normalize_atom(a) ** e)
    return out


def normalize(e: Element) -> Element:
    """Admissible normal form: Adem on every atom, inverse elimination, instability."""
    _require_two(e, "normalization")
    return e.map_monomials(_normalize_monomial)


def adem_normalize(e: Element) -> Element:
    return normalize(e)


def power(e: Element, t: int) -> Element:
    """e^(2^t) by repeated squaring; single atoms are checked against Q^{2^t I} xi^{2^t}."""
    if t < 0:
        raise ValueError("t >= 0")
    e = normalize(e)
    out = e
    for _ in range(t):
        out = out * out
    if len(e) == 1:
        (m, _), = e.items()
        if len(m.factors) == 1 and m.factors[0][1] == 1 and m.factors[0][0].seq:
            atom = m.factors[0][0]
            xi = _bare(Atom((), atom.base))
            closed = q_seq(tuple((2**t) * i for i in atom.seq), xi ** (2**t))
            closed = closed * (Element.pi0(m.shift) ** (2**t)) if m.shift is not None else closed
            if closed != out:
                raise EngineInconsistency(f"power law failed for {e}: {out} vs {closed}")
    return out


# --------------------------------------------------------------------------
# coproduct


@lru_cache(maxsize=None)
def _coproduct_atom(atom: Atom) -> Tensor:
    base = atom.base
    if not atom.seq:
        if isinstance(base, Pi0Class):
            x = Element.pi0(base)
            return Tensor.pure(x, x)
        if base.definition is not None:
            return coproduct(normalize(base.definition))
        if base.structure is None or not hasattr(base.structure, "coproduct_of"):
            raise MissingData(f"no coproduct data for {base.name}")
        return base.structure.coproduct_of(base)
    inner = _coproduct_atom(Atom(atom.seq[1:], base)) if atom.seq[1:] or not isinstance(base, Pi0Class) \
        else Tensor.pure(Element.pi0(base), Element.pi0(base))
    n = atom.seq[0]
    total = Tensor({})
    for (l, r), c in inner.items():
        le, re_ = Element.from_monomial(l), Element.from_monomial(r)
        for a in range(0, n + 1):
            x = q_apply(a, le)
            if x.is_zero:
                continue
            y = q_apply(n - a, re_)
            if y.is_zero:
                continue
            total = total + Tensor.pure(x, y)
    return total


@lru_cache(maxsize=None)
def _coproduct_monomial(m: Monomial) -> Tensor:
    if any(not a.is_normal for a, _ in m.factors):
        return coproduct(normalize(Element.from_monomial(m)))
    if m.shift is not None:
        s = Element.pi0(m.shift)
        out = Tensor.pure(s, s)
    else:
        out = Tensor.pure(Element.one(), Element.one())
    for a, e in m.factors:
        t = _coproduct_atom(a)
        for _ in range(e):
            out = out * t
    return out


def coproduct(e: Element) -> Tensor:
    _require_two(e, "coproduct")
    total = Tensor({})
    for m, _ in e.items():
        total = total + _coproduct_monomial(m)
    return total


def reduced_coproduct(e: Element) -> Tensor:
    """psi(x) - x (x) 1 - 1 (x) x for x in the augmentation ideal (component 0)."""
    psi = coproduct(e)
    one = None
    for m, _ in e.items():
        one = Element.one(2, m.shift.spec.zero() if m.shift is not None else None)
        break
    if one is None:
        return psi
    return psi + Tensor.pure(e, one) + Tensor.pure(one, e)


def counit(e: Element) -> int:
    """Augmentation: 1 on every 0-dimensional pi_0 class, 0 in positive dimensions."""
    return sum(c for m, c in e.items() if not m.factors) % e.p


# --------------------------------------------------------------------------
# space presentations and the file format


_REL = re.compile(r"^(poly|ext|trunc:(\d+))$")


@dataclass
class SpacePresentation:
    """A declared homology algebra with its coproduct and Steenrod data."""

    name: str
    bottom: int = 1
    complete_to: int | None = None
    sq_bound: int = -1
    generators: dict[str, Symbol] = field(default_factory=dict)
    primitive: set[str] = field(default_factory=set)
    _coprod_src: dict[str, str] = field(default_factory=dict)
    _sq_src: dict[tuple[int, str], str] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)
    _cache: dict = field(default_factory=dict, repr=False)

    # declaration
    def declare(self, family: str, index: tuple[int, ...], dim: int, rel: str = "poly", primitive: bool = False) -> Symbol:
        m = _REL.match(rel)
        if not m:
            raise ValueError(f"bad relation discipline {rel!r}")
        if rel == "poly":
            height = None
        elif rel == "ext":
            height = 2
        else:
            height = int(m.group(2))
            if height < 2 or height & (height - 1):
                raise ValueError(f"truncation height {height} must be a power of 2")
        sym = Symbol(family, tuple(index), dim, height, "space-generator", structure=self)
        self.generators[sym.name] = sym
        if primitive:
            self.primitive.add(sym.name)
        return sym

    def symbol(self, name: str) -> Symbol:
        try:
            return self.generators[name]
        except KeyError:
            raise MissingData(f"{self.name} has no generator {name!r}") from None

    def context(self) -> Context:
        return Context(symbols=dict(self.generators))

    def parse(self, text: str) -> Element:
        return parse_expression(text, self.context())

    @property
    def top(self) -> int:
        if self.complete_to is not None:
            return self.complete_to
        return max((s.dim for s in self.generators.values()), default=0)

    # structure maps used by the engine
    def coproduct_of(self, sym: Symbol) -> Tensor:
        key = ("psi", sym.name)
        if key in self._cache:
            return self._cache[key]
        x = Element.symbol(sym)
        one = Element.one()
        if sym.name in self.primitive:
            t = Tensor.pure(x, one) + Tensor.pure(one, x)
        elif sym.name in self._coprod_src:
            t = parse_tensor(self._coprod_src[sym.name], self.context())
        else:
            raise MissingData(f"no coproduct declared for {sym.name} in {self.name}")
        with self._lock:
            self._cache[key] = t
        return t

    def sq_of(self, r: int, sym: Symbol) -> Element:
        if r == 0:
            return Element.symbol(sym)
        if 2 * r > sym.dim:
            return Element.zero()
        if sym.dim > self.sq_bound:
            raise MissingData(f"Steenrod action on {sym.name} is undeclared (table bound {self.sq_bound})")
        key = ("sq", r, sym.name)
        if key not in self._cache:
            src = self._sq_src.get((r, sym.name))
            val = Element.zero() if src is None else self.parse(src)
            with self._lock:
                self._cache[key] = val
        return self._cache[key]

    # bases
    def basis(self, dim: int) -> list[Monomial]:
        if dim > self.top:
            raise MissingData(f"{self.name} generators are only declared through dimension {self.top}")
        key = ("basis", dim)
        with self._lock:
            if key in self._cache:
                return self._cache[key]
        atoms = [Atom((), s) for s in self.generators.values()]
        out = monomial_basis(atoms, dim)
        with self._lock:
            self._cache[key] = out
        return out

    def poincare_series(self, up_to: int) -> list[int]:
        return [len(self.basis(d)) for d in range(up_to + 1)]

    # file format
    @classmethod
    def from_text(cls, text: str) -> "SpacePresentation":
        sp = cls(name="?")
        coprods: list[tuple[str, str]] = []
        sqs: list[tuple[int, str, str]] = []
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            word, _, rest = line.partition(" ")
            rest = rest.strip()
            try:
                if word == "space":
                    sp.name = rest
                elif word == "bottom":
                    sp.bottom = int(rest)
                elif word == "complete":
                    sp.complete_to = int(rest)
                elif word == "sqbound":
                    sp.sq_bound = int(rest)
                elif word == "note":
                    sp.notes.append(rest)
                elif word == "gen":
                    parts = rest.split()
                    name = parts[0]
                    opts = dict(p.split("=", 1) for p in parts[1:] if "=" in p)
                    m = re.fullmatch(r"([A-Za-z_][A-Za-z_0-9]*)(?:\(([\d,]+)\))?", name)
                    if not m:
                        raise ValueError(f"bad generator name {name!r}")
                    index = tuple(int(v) for v in m.group(2).split(",")) if m.group(2) else ()
                    sp.declare(m.group(1), index, int(opts["dim"]), opts.get("rel", "poly"), "primitive" in parts[1:])
                elif word == "sq":
                    r, rest2 = rest.split(None, 1)
                    name, expr = (s.strip() for s in rest2.split("=", 1))
                    sqs.append((int(r), name, expr))
                elif word == "coprod":
                    name, expr = (s.strip() for s in rest.split("=", 1))
                    coprods.append((name, expr))
                else:
                    raise ValueError(f"unknown directive {word!r}")
            except (ValueError, KeyError) as exc:
                raise ValueError(f"line {lineno}: {exc}") from None
        for name, expr in coprods:
            sp.symbol(name)
            sp._coprod_src[name] = expr
        for r, name, expr in sqs:
            sym = sp.symbol(name)
            sp._sq_src[(r, name)] = expr
            if sp.sq_bound < sym.dim and not any("sqbound" in l for l in text.splitlines()):
                sp.sq_bound = max(sp.sq_bound, sym.dim)
        return sp

    def to_text(self) -> str:
        lines = [f"space {self.name}", f"bottom {self.bottom}"]
        if self.complete_to is not None:
            lines.append(f"complete {self.complete_to}")
        if self.sq_bound >= 0:
            lines.append(f"sqbound {self.sq_bound}")
        lines += [f"note {n}" for n in self.notes]
        for s in sorted(self.generators.values(), key=lambda s: (s.dim, s.key())):
            rel = "poly" if s.height is None else "ext" if s.height == 2 else f"trunc:{s.height}"
            flag = " primitive" if s.name in self.primitive else ""
            lines.append(f"gen {s.name} dim={s.dim} rel={rel}{flag}")
        for s in sorted(self.generators.values(), key=lambda s: (s.dim, s.key())):
            if s.name in self._coprod_src:
                lines.append(f"coprod {s.name} = {self._coprod_src[s.name]}")
        for (r, name), expr in sorted(self._sq_src.items(), key=lambda t: (self.generators[t[0][1]].dim, t[0][1], t[0][0])):
            lines.append(f"sq {r} {name} = {expr}")
        return "\n".join(lines) + "\n"

    def set_coproduct(self, name: str, expr: str) -> None:
        self.symbol(name)
        self._coprod_src[name] = expr

    def set_sq(self, r: int, name: str, expr: str) -> None:
        self.symbol(name)
        self._sq_src[(r, name)] = expr

    def check_coproduct(self, up_to: int) -> None:
        """Counit and coassociativity on every generator through ``up_to``."""
        for s in self.generators.values():
            if s.dim > up_to or (s.name not in self.primitive and s.name not in self._coprod_src):
                continue
            x = Element.symbol(s)
            psi = self.coproduct_of(s)
            left = Element.zero()
            right = Element.zero()
            for (a, b), c in psi.items():
                if a.is_unit:
                    left = left + Element.from_monomial(b, coef=c)
                if b.is_unit:
                    right = right + Element.from_monomial(a, coef=c)
            if left != x or right != x:
                raise EngineInconsistency(f"counit fails on {s.name}")
            lhs = _tensor3(psi, coproduct, None)
            rhs = _tensor3(psi, None, coproduct)
            if lhs != rhs:
                raise EngineInconsistency(f"coassociativity fails on {s.name}")


def _tensor3(t: Tensor, left, right) -> dict:
    out: dict = {}
    for (a, b), c in t.items():
        if left is not None:
            for (x, y), d in left(Element.from_monomial(a)).items():
                k = (x, y, b)
                out[k] = (out.get(k, 0) + c * d) % 2
        else:
            for (x, y), d in right(Element.from_monomial(b)).items():
                k = (a, x, y)
                out[k] = (out.get(k, 0) + c * d) % 2
    return {k: v for k, v in out.items() if v}


def parse_tensor(text: str, ctx: Context) -> Tensor:
    """``a (x) b + c (x) d``; ``1`` stands for the unit."""
    total = Tensor({})
    depth = 0
    pieces, cur = [], []
    body = text.replace("(x)", "\x00")
    for ch in body:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "+" and depth == 0:
            pieces.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    pieces.append("".join(cur))
    for piece in pieces:
        if "\x00" not in piece:
            raise ValueError(f"tensor term without '(x)': {piece!r}")
        left, right = piece.split("\x00")
        total = total + Tensor.pure(_side(left, ctx), _side(right, ctx))
    return total


def _side(text: str, ctx: Context) -> Element:
    text = text.strip()
    if text == "1":
        return Element.one(ctx.p)
    return parse_expression(text, ctx)


# --------------------------------------------------------------------------
# monomial bases and free R-algebras


def monomial_basis(atoms: Iterable[Atom], dim: int) -> list[Monomial]:
    """All monomials of total ``dim`` in the given atoms, honoring truncation heights."""
    atoms = sorted({a for a in atoms if 0 < a.dim <= dim}, key=Atom.key)
    out: list[Monomial] = []

    def rec(j: int, remaining: int, acc: list[tuple[Atom, int]]) -> None:
        if remaining == 0:
            m = make_monomial(acc)
            if m is not None:
                out.append(m)
            return
        if j == len(atoms):
            return
        a = atoms[j]
        top = remaining // a.dim
        if a.height is not None:
            top = min(top, a.height - 1)
        for e in range(top, -1, -1):
            rec(j + 1, remaining - e * a.dim, acc + [(a, e)] if e else acc)

    if dim == 0:
        return [Monomial()]
    rec(0, dim, [])
    return sorted(out, key=Monomial.key)


class FreeRAlgebra:
    """H_*QX-style algebra: polynomial on Q^I b with I admissible, excess(I) > dim b.

    ``bases(d)`` returns the base symbols of dimension ``d`` (the additive basis
    of the reduced homology of X, or declared generators with disciplines).
    """

    def __init__(self, name: str, bases: Callable[[int], list[Symbol]], top: int | None = None):
        self.name = name
        self._bases = bases
        self.top = top
        self._lock = threading.Lock()
        self._atoms: dict[int, list[Atom]] = {}
        self._basis: dict[int, list[Monomial]] = {}

    @classmethod
    def on_generators(cls, space: SpacePresentation) -> "FreeRAlgebra":
        by_dim: dict[int, list[Symbol]] = {}
        for s in space.generators.values():
            by_dim.setdefault(s.dim, []).append(s)
        return cls(f"Q<{space.name}>", lambda d: by_dim.get(d, []), space.top)

    def base_symbols(self, d: int) -> list[Symbol]:
        if self.top is not None and d > self.top:
            raise MissingData(f"{self.name}: base symbols only known through dimension {self.top}")
        return self._bases(d)

    def atoms(self, dim: int) -> list[Atom]:
        with self._lock:
            if dim in self._atoms:
                return self._atoms[dim]
        out = []
        for d in range(1, dim + 1):
            for b in self.base_symbols(d):
                if d == dim:
                    out.append(Atom((), b))
                    continue
                for seq in admissible_sequences(dim - d):
                    if seq[0] - sum(seq[1:]) > d:
                        out.append(Atom(seq, b))
        out.sort(key=Atom.key)
        with self._lock:
            self._atoms[dim] = out
        return out

    def basis(self, dim: int) -> list[Monomial]:
        with self._lock:
            if dim in self._basis:
                return self._basis[dim]
        atoms = [a for d in range(1, dim + 1) for a in self.atoms(d)]
        out = monomial_basis(atoms, dim)
        with self._lock:
            self._basis[dim] = out
        return out

    def poincare_series(self, up_to: int) -> list[int]:
        return [len(self.basis(d)) for d in range(up_to + 1)]


def basis(space, dim: int) -> list[Monomial]:
    return space.basis(dim)


def poincare_series(space, up_to: int) -> list[int]:
    return space.poincare_series(up_to)


def clear_caches() -> None:
    for fn in (normalize_sequence, _q_monomial, _q_atom_power, q_atom, q_pi0, _q_gen_power,
               _normalize_atom, _normalize_monomial, _coproduct_atom, _coproduct_monomial):
        fn.cache_clear()
