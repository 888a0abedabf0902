"""Component calculus on H_*QS^{-k}: classes [c], translation, the gamma_J classes, suspension, pushforward.

A pi_0 context is a :class:`Pi0Spec`; elements of H_*QS^{-k} are built from
atoms ``Q^I[gamma_j]`` over its declared generators, and every other
``Q^I[c]`` is rewritten in those terms by :func:`eliminate_inverses`.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from typing import Mapping

from .core import (
    Atom,
    Element,
    EngineInconsistency,
    MalformedSequence,
    MissingData,
    Pi0Class,
    Pi0Spec,
    Symbol,
    is_admissible,
    make_monomial,
)
from .dyer_lashof import normalize, q_seq
from .expr import Context

_PI0_LINE = re.compile(r"^pi0\s+k=(\d+)\s+summands=(\S*)\s+names=(\S*)$")


def parse_pi0_line(line: str) -> Pi0Spec:
    """``pi0 k=<k> summands=2^d1,2^d2,... names=g1,g2,...`` (``summands=Z`` for k=0)."""
    m = _PI0_LINE.match(line.strip())
    if not m:
        raise ValueError(f"malformed pi0 line: {line!r}")
    k = int(m.group(1))
    if m.group(2) == "Z":
        return Pi0Spec.integers() if k == 0 else Pi0Spec(k, (0,), tuple(m.group(3).split(",")))
    orders = []
    for tok in filter(None, m.group(2).split(",")):
        base, _, exp = tok.partition("^")
        if base != "2" or not exp.isdigit() or int(exp) < 1:
            raise ValueError(f"summand {tok!r} is not of the form 2^d")
        orders.append(2 ** int(exp))
    names = tuple(filter(None, m.group(3).split(","))) if m.group(3) else ()
    return Pi0Spec(k, tuple(orders), names)


def format_pi0_line(spec: Pi0Spec) -> str:
    if spec.orders == (0,):
        return f"pi0 k={spec.k} summands=Z names={','.join(spec.names)}"
    summands = ",".join(f"2^{o.bit_length() - 1}" for o in spec.orders)
    return f"pi0 k={spec.k} summands={summands} names={','.join(spec.names)}"


@lru_cache(maxsize=None)
def _shipped() -> dict[int, Pi0Spec]:
    text = resources.files("loophom").joinpath("data", "pi0.tbl").read_text(encoding="utf-8")
    out = {}
    for line in text.splitlines():
        if line.strip() and not line.lstrip().startswith("#"):
            spec = parse_pi0_line(line)
            out[spec.k] = spec
    return out


def pi0_spec(k: int) -> Pi0Spec:
    """Shipped 2-local pi_0 of QS^{-k} (k <= 9)."""
    try:
        return _shipped()[k]
    except KeyError:
        raise MissingData(f"no shipped pi_0 data for k={k}; supply it with a pi0 line") from None


def context(spec: Pi0Spec) -> Context:
    ctx = Context(pi0=spec)
    if spec.orders == (0,):
        ctx.families["x"] = _x_resolver
    return ctx


# --------------------------------------------------------------------------
# classes and translation


def hclass(c: Pi0Class) -> Element:
    """The 0-dimensional class [c]."""
    return Element.pi0(c)


def translate(e: Element, c: Pi0Class) -> Element:
    """Loop-sum with [c]: moves every component label by c."""
    return e * Element.pi0(c)


def eliminate_inverses(e: Element) -> Element:
    """Rewrite every Q^I[c] over the declared generators; the result is canonical."""
    out = normalize(e)
    for m, _ in out.items():
        for a, _ in m.factors:
            if isinstance(a.base, Pi0Class) and a.base.generator_index() is None:
                raise EngineInconsistency(f"non-generator atom {a.render()} survived")
    return out


def component(e: Element) -> Pi0Class | None:
    labels = normalize(e).labels()
    if len(labels) > 1:
        raise ValueError("element spans several components")
    return labels.pop() if labels else None


def _order_log(spec: Pi0Spec, j: int) -> int | None:
    return spec.log2_order(j)


def gamma_class(spec: Pi0Spec, gamma: int | str, J) -> Element:
    """[gamma_J] = Q^J[gamma] * [-2^{l(J)} gamma], landing in the base-point component."""
    J = tuple(J)
    if not J or any(i <= 0 for i in J) or not is_admissible(J):
        raise MalformedSequence(f"J={J} must be a nonempty admissible sequence")
    g = spec.generator(gamma)
    j = g.generator_index()
    d = _order_log(spec, j)
    if d is not None and len(J) > d:
        raise ValueError(f"l(J)={len(J)} exceeds d={d} for a summand of order 2^{d}")
    return normalize(Element.atom(J, g) * Element.pi0(g.scale(-(2 ** len(J)))))


@dataclass
class TruncationTrace:
    """Record of the nilpotency computation for Q^I[gamma_J]."""

    gamma: str
    I: tuple[int, ...]
    J: tuple[int, ...]
    d: int
    steps: list[tuple[str, str]] = field(default_factory=list)

    @property
    def result(self) -> str:
        return self.steps[-1][1] if self.steps else ""

    def render(self) -> str:
        return "\n".join(f"{name}: {value}" for name, value in self.steps)


def verify_truncation(spec: Pi0Spec, gamma: int | str, I, J) -> TruncationTrace:
    """(Q^I[gamma_J])^{2^d} = 0, by direct powering and by the power law.

    The second route never uses truncation heights: it rewrites the power as
    Q^{2^d I}(Q^{2^d J}[2^d gamma] * [-2^{l+d} gamma]) and [2^d gamma] = [0].
    """
    I = tuple(I)
    J = tuple(J)
    if I and (any(i <= 0 for i in I) or not is_admissible(I)):
        raise MalformedSequence(f"I={I} must be admissible")
    g = spec.generator(gamma)
    d = _order_log(spec, g.generator_index())
    if d is None:
        raise ValueError("truncation is only defined for finite cyclic summands")
    trace = TruncationTrace(spec.names[g.generator_index()], I, J, d)
    base = gamma_class(spec, gamma, J)
    trace.steps.append(("gamma_J", base.render()))
    x = q_seq(I, base)
    trace.steps.append(("Q^I gamma_J", x.render()))
    direct = x
    for t in range(d):
        direct = direct * direct
        trace.steps.append((f"square {t + 1}", direct.render()))
    n = 2**d
    inner_pi0 = g.scale(n)
    trace.steps.append((f"[{n} gamma]", str(inner_pi0)))
    inner = q_seq(tuple(n * j for j in J), Element.pi0(inner_pi0))
    trace.steps.append((f"Q^{{{n}J}}[{n} gamma]", inner.render()))
    closed = q_seq(tuple(n * i for i in I), inner * Element.pi0(g.scale(-(2 ** (len(J) + d)))))
    trace.steps.append(("power law", closed.render()))
    if not direct.is_zero or not closed.is_zero:
        raise EngineInconsistency(f"(Q^{I}[gamma_{J}])^{n} is nonzero:\n{trace.render()}")
    trace.steps.append(("result", "0"))
    return trace


# --------------------------------------------------------------------------
# pushforward along a map of pi_0 and the homology suspension


def pushforward(e: Element, target: Pi0Spec, images: Mapping) -> Element:
    """f_* for the infinite loop map inducing ``gamma_j -> images[j]`` on pi_0.

    ``images`` maps generator indices (or names) to target classes; f_* is
    additive on components and commutes with Q^I and with loop sum.
    """
    e = normalize(e)
    src_images = {}
    total = Element.zero()
    for m, c in e.items():
        out = Element.one(2, target.zero())
        if m.shift is not None:
            out = Element.pi0(_push_class(m.shift, target, images, src_images))
        for a, ex in m.factors:
            if not isinstance(a.base, Pi0Class):
                raise ValueError(f"pushforward only handles pi_0 atoms, got {a.render()}")
            img = q_seq(a.seq, Element.pi0(_push_class(a.base, target, images, src_images)))
            out = out * img**ex
        total = total + out.scale(c)
    return normalize(total)


def _push_class(c: Pi0Class, target: Pi0Spec, images: Mapping, cache: dict) -> Pi0Class:
    vec = [0] * target.rank
    for j, n in enumerate(c.vec):
        if not n:
            continue
        if j not in cache:
            key = j if j in images else c.spec.names[j]
            if key not in images:
                raise MissingData(f"no image declared for {c.spec.names[j]}")
            img = images[key]
            cache[j] = img if isinstance(img, Pi0Class) else target.element(img)
        vec = [v + n * w for v, w in zip(vec, cache[j].vec)]
    return target.element(vec)


def suspend(e: Element, table: Mapping, times: int = 1, tables: list[Mapping] | None = None) -> Element:
    """Homology suspension: kills decomposables, sigma_* Q^I = Q^I sigma_*.

    ``table`` sends pi_0 generator names and base symbol names to their images;
    pass ``tables`` to iterate with a fresh table per step.
    """
    steps = tables if tables is not None else [table] * times
    for tab in steps:
        e = _suspend_once(normalize(e), tab)
    return e


def _suspend_once(e: Element, table: Mapping) -> Element:
    total = Element.zero()
    for m, c in e.items():
        positive = [(a, ex) for a, ex in m.factors if a.dim > 0]
        if sum(ex for _, ex in positive) >= 2:
            continue
        if positive:
            a = positive[0][0]
            total = total + q_seq(a.seq, _sigma_base(a.base, table)).scale(c)
        elif m.shift is not None:
            for j, n in enumerate(m.shift.vec):
                if n % 2:
                    total = total + _sigma_base(m.shift.spec.generator(j), table).scale(c)
    return normalize(total)


def _sigma_base(b, table: Mapping) -> Element:
    key = b.spec.names[b.generator_index()] if isinstance(b, Pi0Class) else b.name
    if isinstance(b, Pi0Class) and b.spec.orders == (0,):
        key = "1"
    if key not in table:
        raise MissingData(f"no suspension image declared for {key}")
    img = table[key]
    return img if isinstance(img, Element) else Element.symbol(img)


# --------------------------------------------------------------------------
# H_*Q_0S^0 in the x-notation


@lru_cache(maxsize=None)
def x_symbol(i: int) -> Symbol:
    """x_i = Q^i[1] * [-2], a derived generator of H_i Q_0 S^0."""
    if i < 1:
        raise ValueError("x_i needs i >= 1")
    z = Pi0Spec.integers()
    definition = Element.atom((i,), z.generator(0)) * Element.pi0(z.element((-2,)))
    return Symbol("x", (i,), i, None, "derived-class", definition=definition)


def _x_resolver(family: str, args: tuple[int, ...]) -> Symbol | None:
    if len(args) == 1 and args[0] >= 1:
        return x_symbol(args[0])
    return None


def qs0_context() -> Context:
    return context(Pi0Spec.integers())


def to_x_notation(e: Element) -> Element:
    """Express a base-point-component element of H_*QS^0 as a polynomial in Q^I x_i.

    Each atom Q^{(I,i)}[1] corresponds to the generator Q^I x_i; expanding a
    generator monomial reproduces its leading term plus terms with more atom
    factors, so elimination by increasing factor count terminates.
    """
    residual = normalize(e)
    out = Element.zero()
    guard = 0
    while not residual.is_zero:
        m = min((mm for mm, _ in residual.items()), key=lambda mm: (mm.degree, mm.key()))
        if m.label() is not None and not m.label().is_zero:
            raise ValueError("x-notation covers the base-point component only")
        if not m.factors:
            unit = Element.from_monomial(m)
            out, residual = out + unit, residual + unit
            continue
        factors = []
        for a, ex in m.factors:
            if not isinstance(a.base, Pi0Class):
                raise ValueError(f"unexpected atom {a.render()}")
            factors.append((Atom(a.seq[:-1], x_symbol(a.seq[-1])), ex))
        xm = Element.from_monomial(make_monomial(factors))
        out = out + xm
        residual = residual + normalize(xm)
        guard += 1
        if guard > 100_000:
            raise EngineInconsistency("x-notation elimination did not terminate")
    return out


def from_x_notation(e: Element) -> Element:
    return normalize(e)
