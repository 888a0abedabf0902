"""Primitives of H_*QBU, their decomposition, and the exterior algebra H_*Q_0 Sigma^{-1} BU.

H_*QBU is polynomial on Q^I c_J with c_J running over the additive basis of
H_*BU (products of the c_{2j}) and excess(I) > dim c_J.  The product below is
the loop-sum product of QBU; the product inside c_J is that of BU.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass, field
from functools import lru_cache

from .atlas import load_space
from .core import (
    Element,
    EngineInconsistency,
    MalformedSequence,
    Monomial,
    Symbol,
    Tensor,
    admissible_sequences,
    make_monomial,
)
from .dyer_lashof import FreeRAlgebra, coproduct, normalize, q_seq
from .expr import Context, parse_expression
from .steenrod import kernel, primitives, sq_act, square_root


# --------------------------------------------------------------------------
# the additive basis c_J of H_*BU


@dataclass(frozen=True)
class CJMonomial:
    """J = (2j_1, ..., 2j_t), nondecreasing positive even entries."""

    J: tuple[int, ...]

    def __post_init__(self) -> None:
        J = tuple(self.J)
        if not J or any(j <= 0 or j % 2 for j in J) or list(J) != sorted(J):
            raise MalformedSequence(f"J={J} must be nonempty, even and nondecreasing")
        object.__setattr__(self, "J", J)

    @property
    def dim(self) -> int:
        return sum(self.J)

    @property
    def four_divides(self) -> bool:
        return all(j % 4 == 0 for j in self.J)

    @property
    def strictly_increasing(self) -> bool:
        return all(a < b for a, b in zip(self.J, self.J[1:]))

    def __str__(self) -> str:
        return f"c({','.join(map(str, self.J))})"


def cj_monomials(dim: int) -> list[CJMonomial]:
    """All c_J of the given dimension, in lexicographic order of J."""
    out: list[CJMonomial] = []

    def rec(rem: int, least: int, acc: tuple[int, ...]) -> None:
        if rem == 0:
            if acc:
                out.append(CJMonomial(acc))
            return
        for j in range(least, rem + 1, 2):
            rec(rem - j, j, acc + (j,))

    if dim > 0 and dim % 2 == 0:
        rec(dim, 2, ())
    return out


class QBU:
    """H_*QBU on the c_J basis, with coproduct and Steenrod data read off H_*BU."""

    def __init__(self) -> None:
        self.bu = load_space("BU")
        self._lock = threading.Lock()
        self._symbols: dict[tuple[int, ...], Symbol] = {}
        self._psi: dict[Symbol, Tensor] = {}
        self._sq: dict[tuple[int, Symbol], Element] = {}
        self.algebra = FreeRAlgebra("QBU", lambda d: [self.symbol(c.J) for c in cj_monomials(d)])

    def symbol(self, J) -> Symbol:
        J = CJMonomial(tuple(J)).J
        with self._lock:
            sym = self._symbols.get(J)
            if sym is None:
                sym = Symbol("c", J, sum(J), None, "space-generator", structure=self)
                self._symbols[J] = sym
        return sym

    def element(self, J) -> Element:
        return Element.symbol(self.symbol(J))

    def _bu_product(self, J) -> Element:
        out = Element.one()
        for j in J:
            out = out * Element.symbol(self.bu.symbol(f"c({j})"))
        return out

    def _from_bu(self, m: Monomial) -> Element:
        if not m.factors:
            return Element.one()
        J = []
        for a, e in m.factors:
            J += [a.base.index[0]] * e
        return self.element(sorted(J))

    def coproduct_of(self, sym: Symbol) -> Tensor:
        if sym not in self._psi:
            psi = coproduct(self._bu_product(sym.index))
            out = Tensor({})
            for (a, b), c in psi.items():
                out = out + Tensor.pure(self._from_bu(a), self._from_bu(b))
            with self._lock:
                self._psi[sym] = out
        return self._psi[sym]

    def sq_of(self, r: int, sym: Symbol) -> Element:
        key = (r, sym)
        if key not in self._sq:
            img = sq_act(r, self._bu_product(sym.index))
            out = Element.zero()
            for m, _ in img.items():
                out = out + self._from_bu(m)
            with self._lock:
                self._sq[key] = out
        return self._sq[key]

    def context(self) -> Context:
        ctx = Context()

        def resolve(family, args):
            try:
                return self.symbol(args)
            except MalformedSequence:
                return None

        ctx.families["c"] = resolve
        return ctx

    def parse(self, text: str) -> Element:
        return parse_expression(text, self.context())

    def basis(self, dim: int) -> list[Monomial]:
        return self.algebra.basis(dim)


@lru_cache(maxsize=None)
def qbu() -> QBU:
    return QBU()


# --------------------------------------------------------------------------
# ker r


def ker_r_classify(J) -> bool:
    """True iff c_J lies in the kernel of the square-root map (4 does not divide J).

    The closed form is checked against an evaluation of r through the Steenrod tables.
    """
    c = CJMonomial(tuple(J))
    closed = not c.four_divides
    evaluated = square_root(qbu().element(c.J)).is_zero
    if closed != evaluated:
        raise EngineInconsistency(f"ker r verdict for {c}: closed form {closed}, evaluation {evaluated}")
    return closed


# --------------------------------------------------------------------------
# the primitive blocks p_L and p_{i,J}


def _indecomposable(e: Element) -> Element:
    return Element({m: c for m, c in e.items() if m.degree == 1})


@dataclass(frozen=True)
class Block:
    """p_L (kind "L") or p_{i,J} (kind "iJ"); ``leading`` is c_L or Q^{2i+1} c_J."""

    kind: str
    J: tuple[int, ...]
    i: int = 0

    @property
    def dim(self) -> int:
        return sum(self.J) + (2 * self.i + 1 if self.kind == "iJ" else 0)

    @property
    def leading_seq(self) -> tuple[int, ...]:
        return (2 * self.i + 1,) if self.kind == "iJ" else ()

    def __str__(self) -> str:
        js = ",".join(map(str, self.J))
        return f"p({self.i};{js})" if self.kind == "iJ" else f"p({js})"


def blocks(dim: int) -> list[Block]:
    """All p_L and p_{i,J} of the given dimension."""
    out = []
    for c in cj_monomials(dim):
        if not c.four_divides:
            out.append(Block("L", c.J))
    if dim % 2:
        for d in range(4, dim, 4):
            i2 = dim - d - 1
            if i2 < 0 or i2 % 2:
                continue
            i = i2 // 2
            if 2 * i + 1 <= d:
                continue
            for c in cj_monomials(d):
                if c.four_divides:
                    out.append(Block("iJ", c.J, i))
    return out


class PrimitiveSpace:
    """Primitives of H_*QBU per dimension, with chosen representatives of the blocks."""

    def __init__(self, space: QBU | None = None):
        self.space = space or qbu()
        self._lock = threading.Lock()
        self._prims: dict[int, list[Element]] = {}
        self._blocks: dict[Block, Element] = {}

    def primitives(self, n: int) -> list[Element]:
        with self._lock:
            if n in self._prims:
                return self._prims[n]
        out = primitives(self.space, n)
        with self._lock:
            self._prims[n] = out
        return out

    def block(self, b: Block) -> Element:
        """The primitive whose indecomposable part is exactly the leading monomial of ``b``."""
        if b in self._blocks:
            return self._blocks[b]
        lead = q_seq(b.leading_seq, self.space.element(b.J))
        target = _indecomposable(lead)
        sol = _solve([_indecomposable(p) for p in self.primitives(b.dim)], target)
        if sol is None:
            raise EngineInconsistency(f"no primitive with indecomposable part {target}")
        out = Element.zero()
        for j in sol:
            out = out + self.primitives(b.dim)[j]
        with self._lock:
            self._blocks[b] = out
        return out


def _solve(columns: list[Element], target: Element) -> list[int] | None:
    """Indices j with sum columns[j] = target over F_2, or None."""
    index: dict = {}
    for e in columns + [target]:
        for m, _ in e.items():
            index.setdefault(m, len(index))

    def vec(e):
        v = 0
        for m, _ in e.items():
            v ^= 1 << index[m]
        return v

    rows: dict[int, tuple[int, int]] = {}
    for j, col in enumerate(columns):
        v, comb = vec(col), 1 << j
        while v:
            top = v.bit_length() - 1
            if top not in rows:
                rows[top] = (v, comb)
                break
            v ^= rows[top][0]
            comb ^= rows[top][1]
    v, comb = vec(target), 0
    while v:
        top = v.bit_length() - 1
        if top not in rows:
            return None
        v ^= rows[top][0]
        comb ^= rows[top][1]
    return [j for j in range(len(columns)) if comb >> j & 1]


# --------------------------------------------------------------------------
# decomposition of primitives


@dataclass
class Decomposition:
    """xi = sum Q^I p_b + root^2, with root decomposed recursively."""

    element: Element
    terms: list[tuple[tuple[int, ...], Block]] = field(default_factory=list)
    root: "Decomposition | None" = None

    def reassemble(self, ps: PrimitiveSpace) -> Element:
        out = Element.zero()
        for I, b in self.terms:
            out = out + q_seq(I, ps.block(b))
        if self.root is not None:
            r = self.root.reassemble(ps)
            out = out + r * r
        return out

    def render(self) -> str:
        parts = [f"Q[{','.join(map(str, I))}] {b}" if I else str(b) for I, b in self.terms]
        if self.root is not None:
            parts.append(f"({self.root.render()})^2")
        return " + ".join(parts) if parts else "0"


def _candidates(n: int) -> list[tuple[tuple[int, ...], Block]]:
    """Non-square classes Q^I p_b of dimension n, ordered by (excess of I, length)."""
    out = []
    for d in range(1, n + 1):
        for b in blocks(d):
            if d == n:
                out.append(((), b))
                continue
            for I in admissible_sequences(n - d):
                if I[0] - sum(I[1:]) > d:
                    out.append((I, b))
    out.sort(key=lambda t: ((t[0][0] - sum(t[0][1:])) if t[0] else 10**9, len(t[0]), t[0], str(t[1])))
    return out


def _is_primitive(e: Element) -> bool:
    for (a, b), _ in coproduct(e).items():
        if a.factors and b.factors:
            return False
    return True


def _formal_root(e: Element) -> Element | None:
    terms = {}
    for m, c in e.items():
        if m.shift is not None or any(ex % 2 for _, ex in m.factors):
            return None
        terms[make_monomial([(a, ex // 2) for a, ex in m.factors])] = c
    return Element(terms)


def primitive_decompose(xi: Element, ps: PrimitiveSpace | None = None) -> Decomposition:
    """Write a primitive of H_*QBU as sum Q^I p_{i,J} + sum Q^K p_L + (primitive)^2."""
    ps = ps or PrimitiveSpace()
    xi = normalize(xi)
    if xi.is_zero:
        return Decomposition(xi)
    n = xi.dim
    if n is None:
        raise ValueError("primitive_decompose needs a homogeneous element")
    if not _is_primitive(xi):
        raise ValueError(f"{xi} is not primitive")
    cands = _candidates(n)
    images = [q_seq(I, ps.block(b)) for I, b in cands]
    sol = _solve([_indecomposable(x) for x in images], _indecomposable(xi))
    if sol is None:
        raise EngineInconsistency(f"indecomposable part of {xi} is not reached by the blocks")
    rec = Decomposition(xi, [cands[j] for j in sol])
    rest = xi
    for j in sol:
        rest = rest + images[j]
    if not rest.is_zero:
        root = _formal_root(rest)
        if root is None or not _is_primitive(root):
            raise EngineInconsistency(f"decomposable primitive {rest} is not the square of a primitive")
        rec.root = primitive_decompose(root, ps)
    if rec.reassemble(ps) != xi:
        raise EngineInconsistency(f"decomposition of {xi} does not reassemble")
    return rec


# --------------------------------------------------------------------------
# H_*Q_0 Sigma^{-1} BU


@dataclass(frozen=True)
class DesuspGenerator:
    """Q^I c^{-1}_{i,J} (kind "iJ") or Q^K c^{-1}_L (kind "L")."""

    kind: str
    seq: tuple[int, ...]
    J: tuple[int, ...]
    i: int = 0

    @property
    def base_degree(self) -> int:
        return 2 * self.i + sum(self.J) if self.kind == "iJ" else sum(self.J) - 1

    @property
    def degree(self) -> int:
        return sum(self.seq) + self.base_degree

    @property
    def block(self) -> Block:
        return Block(self.kind, self.J, self.i)

    @property
    def in_unitary_image(self) -> bool:
        """c^{-1}_L comes from H_*U exactly when L is strictly increasing; c^{-1}_{i,J} never does."""
        return self.kind == "L" and not self.seq and CJMonomial(self.J).strictly_increasing

    def __str__(self) -> str:
        js = ",".join(map(str, self.J))
        base = f"c^-1({self.i};{js})" if self.kind == "iJ" else f"c^-1({js})"
        return f"Q[{','.join(map(str, self.seq))}] {base}" if self.seq else base


def desusp_generators(N: int) -> list[DesuspGenerator]:
    """Exterior generators of degree <= N indexed by the excess conditions.

    Q^I c^{-1}_{i,J}: 4|J, 2i+1 > dim J, excess(I) > 2i + dim J.
    Q^K c^{-1}_L: 4 does not divide L, excess(K) > dim L - 1.
    """
    out = []
    for d in range(2, N + 2, 2):
        for c in cj_monomials(d):
            if c.four_divides:
                for i in range(d // 2, (N - d) // 2 + 1):
                    base = 2 * i + d
                    out += _with_ops("iJ", c.J, i, base, N)
            else:
                out += _with_ops("L", c.J, 0, d - 1, N)
    out.sort(key=lambda g: (g.degree, g.kind, g.J, g.i, g.seq))
    return out


def _with_ops(kind, J, i, base, N) -> list[DesuspGenerator]:
    if base > N:
        return []
    out = [DesuspGenerator(kind, (), J, i)]
    for extra in range(1, N - base + 1):
        for I in admissible_sequences(extra):
            if I[0] - sum(I[1:]) > base:
                out.append(DesuspGenerator(kind, I, J, i))
    return out


def exterior_series(degrees: list[int], N: int) -> list[int]:
    """Poincare series of the exterior algebra on generators of the given degrees, through N."""
    series = [1] + [0] * N
    for d in degrees:
        if d < 1 or d > N:
            continue
        for n in range(N, d - 1, -1):
            series[n] += series[n - d]
    return series


@dataclass
class DesuspBasis:
    N: int
    generators: list[DesuspGenerator]
    primitive_counts: list[int]
    series: list[int]
    merges: list[tuple[str, str]]

    def generators_in(self, d: int) -> list[DesuspGenerator]:
        return [g for g in self.generators if g.degree == d]

    def monomials(self, d: int) -> list[tuple[DesuspGenerator, ...]]:
        """Exterior monomials (strictly increasing products of distinct generators) of degree d."""
        gens = [g for g in self.generators if g.degree <= d]
        out = []

        def rec(start, rem, acc):
            if rem == 0:
                out.append(tuple(acc))
                return
            for j in range(start, len(gens)):
                g = gens[j]
                if g.degree <= rem:
                    rec(j + 1, rem - g.degree, acc + [g])

        rec(0, d, [])
        return out


def desusp_basis(N: int, ps: PrimitiveSpace | None = None, check_images: bool = False) -> DesuspBasis:
    """Both routes: excess indexing, and V_{n-1} = primitives of H_*QBU in dimension n."""
    ps = ps or PrimitiveSpace()
    gens = desusp_generators(N)
    counts = [0] + [len(ps.primitives(n + 1)) for n in range(1, N + 1)]
    route1 = exterior_series([g.degree for g in gens], N)
    route2 = exterior_series([n for n in range(1, N + 1) for _ in range(counts[n])], N)
    if route1 != route2:
        raise EngineInconsistency(f"desuspension series disagree: indexing {route1}, primitives {route2}")
    merges: list[tuple[str, str]] = []
    if check_images:
        seen: dict = {}
        for g in gens:
            img = q_seq(g.seq, ps.block(g.block))
            if img.is_zero:
                raise EngineInconsistency(f"sigma_* of {g} vanishes")
            if img in seen:
                merges.append((str(seen[img]), str(g)))
            else:
                seen[img] = g
        for n in range(1, N + 1):
            imgs = [q_seq(g.seq, ps.block(g.block)) for g in gens if g.degree == n]
            if _rank(imgs) != counts[n]:
                raise EngineInconsistency(f"sigma_* images in dimension {n + 1} do not span the primitives")
    return DesuspBasis(N, gens, counts, route1, merges)


def _rank(elems: list[Element]) -> int:
    index: dict = {}
    cols = []
    for e in elems:
        v = 0
        for m, _ in e.items():
            v ^= 1 << index.setdefault(m, len(index))
        cols.append(v)
    return len(cols) - len(kernel(cols))


# --------------------------------------------------------------------------
# classes in H_*Q_0 S^{-2k-2}


@dataclass(frozen=True)
class WDesusp:
    name: str
    degree: int
    in_j_image: bool
    trivial_in_image: bool
    note: str


def w_desusp_class(kind: str, k: int, J, i: int = 0) -> WDesusp:
    """w^{-2k-2}_{i,J} or w^{-2k-2}_L with its image verdict.

    The vanishing note uses the literal residue condition 2k = 3, 4 (mod 8); it
    can only hold as 2k = 4 (mod 8), i.e. 2k+2 = 6 (mod 8), where the iterated
    complex J-homomorphism is zero in mod 2 homology.
    """
    if k < 0:
        raise ValueError("k >= 0")
    c = CJMonomial(tuple(J))
    loops = 2 * k + 2
    if kind in ("iJ", "i,J"):
        if not c.four_divides or 2 * i + 1 <= c.dim:
            raise ValueError("w_{i,J} needs 4 | J and 2i + 1 > dim J")
        g = DesuspGenerator("iJ", (), c.J, i)
        in_image = False
        name = f"w^-{loops}({i};{','.join(map(str, c.J))})"
    elif kind == "L":
        if c.four_divides:
            raise ValueError("w_L needs 4 not dividing L")
        g = DesuspGenerator("L", (), c.J)
        in_image = c.strictly_increasing
        name = f"w^-{loops}({','.join(map(str, c.J))})"
    else:
        raise ValueError(f"unknown kind {kind!r}")
    literal = (2 * k) % 8 in (3, 4)
    note = ("in the image, trivial: 2k = 4 mod 8, the zero map at 2k+2 = 6 mod 8" if in_image and literal
            else "literal residue test 2k = 3, 4 (mod 8) does not apply" if in_image else "not in the image")
    return WDesusp(name, g.degree, in_image, in_image and literal, note)
