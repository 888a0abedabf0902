"""Dual Steenrod action, the square-root map, primitives and indecomposables (p=2)."""
from __future__ import annotations

from functools import lru_cache
from math import comb

from .core import Atom, Element, EngineInconsistency, MissingData, Monomial, Pi0Class, make_monomial
from .dyer_lashof import _bare, _cartan, _require_two, _unit_like, coproduct, normalize, q_apply


def nishida_binom(n: int, k: int) -> int:
    """C(n, k) mod 2 with the generalized upper index: C(-m, k) = (-1)^k C(m+k-1, k)."""
    if k < 0:
        return 0
    if n >= 0:
        return 1 if (n & k) == k else 0
    return comb(k - n - 1, k) & 1


# --------------------------------------------------------------------------
# Sq^r_*


def sq_act(r: int, e: Element) -> Element:
    """Sq^r_*: Nishida through Q-operations, Cartan through products, base tables on generators."""
    if r < 0:
        raise ValueError("Sq^r needs r >= 0")
    _require_two(e, "sq_act")
    if r == 0:
        return e
    total = Element.zero()
    for m, _ in e.items():
        total = total + _sq_monomial(r, m)
    return total


def sq_seq(rs, e: Element) -> Element:
    for r in reversed(tuple(rs)):
        e = sq_act(r, e)
    return e


@lru_cache(maxsize=None)
def _sq_monomial(r: int, m: Monomial) -> Element:
    if any(not a.is_normal for a, _ in m.factors):
        return sq_act(r, normalize(Element.from_monomial(m)))
    if 2 * r > m.dim:
        return Element.zero()
    pieces = [(0, atom.dim * e // 2, lambda a, atom=atom, e=e: _sq_atom_power(a, atom, e)) for atom, e in m.factors]
    unit = Element.pi0(m.shift) if m.shift is not None else Element.one()
    return _cartan(r, pieces, unit)


@lru_cache(maxsize=None)
def _sq_atom_power(r: int, atom: Atom, e: int) -> Element:
    if r == 0:
        return Element.from_monomial(make_monomial([(atom, e)]))
    if e == 1:
        return sq_atom(r, atom)
    if e % 2 == 0:
        if r % 2:
            return Element.zero()
        half = _sq_atom_power(r // 2, atom, e // 2)
        return half * half
    return _cartan(r, [(0, atom.dim // 2, lambda a: sq_atom(a, atom)),
                       (0, atom.dim * (e - 1) // 2, lambda a: _sq_atom_power(a, atom, e - 1))],
                   _unit_like(None))


@lru_cache(maxsize=None)
def sq_atom(r: int, atom: Atom) -> Element:
    """Sq^r_* on one atom; Nishida: Sq^r_* Q^s = sum_i C(s-r, r-2i) Q^{s-r+i} Sq^i_*."""
    if r == 0:
        return _bare(atom)
    if 2 * r > atom.dim:
        return Element.zero()
    base = atom.base
    if not atom.seq:
        if isinstance(base, Pi0Class):
            return Element.zero()
        if base.definition is not None:
            return sq_act(r, normalize(base.definition))
        if base.structure is None or not hasattr(base.structure, "sq_of"):
            raise MissingData(f"no Steenrod data for {base.name}")
        return base.structure.sq_of(r, base)
    s = atom.seq[0]
    rest = _bare(Atom(atom.seq[1:], base))
    total = Element.zero()
    for i in range(0, r // 2 + 1):
        if s - r + i < 0 or not nishida_binom(s - r, r - 2 * i):
            continue
        y = sq_act(i, rest)
        if not y.is_zero:
            total = total + q_apply(s - r + i, y)
    return total


# --------------------------------------------------------------------------
# square root map


def square_root(e: Element) -> Element:
    """r: zero in odd dimensions, Sq^t_* in dimension 2t; evaluated by rQ^{2i+1} = 0, rQ^{2i} = Q^i r."""
    _require_two(e, "square_root")
    total = Element.zero()
    for m, _ in e.items():
        total = total + _root_monomial(m)
    return total


@lru_cache(maxsize=None)
def _root_monomial(m: Monomial) -> Element:
    if any(not a.is_normal for a, _ in m.factors):
        return square_root(normalize(Element.from_monomial(m)))
    out = Element.pi0(m.shift) if m.shift is not None else Element.one()
    for atom, e in m.factors:
        out = out * (_root_atom(atom) ** e)
        if out.is_zero:
            break
    return out


@lru_cache(maxsize=None)
def _root_atom(atom: Atom) -> Element:
    if atom.dim % 2:
        return Element.zero()
    if not atom.seq:
        base = atom.base
        if isinstance(base, Pi0Class):
            return Element.pi0(base)
        return sq_act(atom.dim // 2, _bare(atom))
    s = atom.seq[0]
    if s % 2:
        return Element.zero()
    return q_apply(s // 2, _root_atom_elem(Atom(atom.seq[1:], atom.base)))


def _root_atom_elem(atom: Atom) -> Element:
    if not atom.seq and isinstance(atom.base, Pi0Class):
        return Element.pi0(atom.base)
    return _root_atom(atom)


def square_root_via_sq(e: Element) -> Element:
    """The same map evaluated as Sq^{dim/2}_* directly (cross-check)."""
    d = e.dim
    if d is None:
        return sum((square_root_via_sq(p) for p in e.homogeneous_parts()), Element.zero())
    return Element.zero() if d % 2 else sq_act(d // 2, e)


# --------------------------------------------------------------------------
# F_2 linear algebra on monomial bases


def _vec(e: Element, index: dict) -> int:
    v = 0
    for m, _ in e.items():
        if m not in index:
            raise EngineInconsistency(f"{m.render()} is outside the declared basis")
        v ^= 1 << index[m]
    return v


def _elem(v: int, basis: list[Monomial]) -> Element:
    terms = {}
    j = 0
    while v:
        if v & 1:
            terms[basis[j]] = 1
        v >>= 1
        j += 1
    return Element(terms)


def kernel(columns: list[int]) -> list[int]:
    """Kernel of the F_2 map e_j -> columns[j] as bitmasks over the source, in reduced form.

    Each kernel vector has a distinct lowest set bit (its pivot) absent from the others.
    """
    n = len(columns)
    rows: dict[int, tuple[int, int]] = {}  # pivot bit of image -> (image, combination)
    kern: list[int] = []
    for j in range(n):
        img, comb_ = columns[j], 1 << j
        while img:
            top = img.bit_length() - 1
            if top not in rows:
                rows[top] = (img, comb_)
                break
            pi, pc = rows[top]
            img ^= pi
            comb_ ^= pc
        if not img:
            kern.append(comb_)
    return _reduce_lowest(kern)


def _reduce_lowest(vecs: list[int]) -> list[int]:
    """Echelon form with respect to lowest set bits, fully reduced."""
    out: list[int] = []
    for v in vecs:
        for w in out:
            low = w & -w
            if v & low:
                v ^= w
        if not v:
            continue
        low = v & -v
        out = [w ^ v if w & low else w for w in out]
        out.append(v)
    # second pass so each pivot appears only in its own vector
    changed = True
    while changed:
        changed = False
        for i, v in enumerate(out):
            low = v & -v
            for j, w in enumerate(out):
                if j != i and w & low:
                    out[j] = w ^ v
                    changed = True
    return sorted(out, key=lambda v: v & -v)


def span_rank(vecs: list[int]) -> int:
    rows: dict[int, int] = {}
    for v in vecs:
        while v:
            top = v.bit_length() - 1
            if top not in rows:
                rows[top] = v
                break
            v ^= rows[top]
    return len(rows)


def reduced_coproduct_terms(x: Element) -> dict:
    """psi(x) minus the terms with a unit tensor factor, as a dict over pairs."""
    out = {}
    for (a, b), c in coproduct(x).items():
        if _is_unit_like(a) or _is_unit_like(b):
            continue
        out[(a, b)] = c
    return out


def _is_unit_like(m: Monomial) -> bool:
    return not m.factors


def primitives(space, dim: int) -> list[Element]:
    """Basis of the primitive subspace in ``dim`` (positive dims), lowest-pivot representatives."""
    if dim <= 0:
        return []
    basis = space.basis(dim)
    pairs: dict = {}
    cols = []
    for m in basis:
        v = 0
        for key in reduced_coproduct_terms(Element.from_monomial(m)):
            if key not in pairs:
                pairs[key] = len(pairs)
            v ^= 1 << pairs[key]
        cols.append(v)
    return [_elem(v, basis) for v in kernel(cols)]


def indecomposables(space, dim: int) -> list[Element]:
    """Representatives of a basis of the indecomposable quotient: the single-atom monomials."""
    if dim <= 0:
        return []
    return [Element.from_monomial(m) for m in space.basis(dim) if m.degree == 1]


def decomposable_part(e: Element) -> Element:
    return Element({m: c for m, c in e.items() if m.degree != 1})


def a_annihilated_primitives(space, up_to: int, dims=None) -> list[tuple[int, Element]]:
    """Primitives killed by every Sq^r_*, r >= 1, dimension by dimension."""
    out = []
    for d in (dims if dims is not None else range(1, up_to + 1)):
        prims = primitives(space, d)
        if not prims:
            continue
        images = []
        targets: dict = {}
        for p in prims:
            v = 0
            for r in range(1, d // 2 + 1):
                for m, _ in sq_act(r, p).items():
                    key = (r, m)
                    if key not in targets:
                        targets[key] = len(targets)
                    v ^= 1 << targets[key]
            images.append(v)
        for comb_ in kernel(images):
            x = Element.zero()
            j = 0
            while comb_:
                if comb_ & 1:
                    x = x + prims[j]
                comb_ >>= 1
                j += 1
            out.append((d, x))
    return out


def clear_caches() -> None:
    for fn in (_sq_monomial, _sq_atom_power, sq_atom, _root_monomial, _root_atom):
        fn.cache_clear()
