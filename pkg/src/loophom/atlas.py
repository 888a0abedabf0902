"""Classical-space homology presentations, the Bott ladder, the iota_t maps and nontriviality predicates.

The ``.space`` files under ``data/`` are produced by :func:`generate_presentation`
and can be regenerated with ``python -m loophom.atlas --write``; a test checks
that the shipped files match the generator.  Steenrod tables beyond the
orthogonal-group formula are standard external facts (``note external`` lines).
"""
from __future__ import annotations

import argparse
import shlex
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path

from .core import Element, MissingData, Symbol, binom_mod_p, is_prime
from .dyer_lashof import SpacePresentation, normalize
from .steenrod import primitives

DATA = Path(__file__).with_name("data")

# name -> (family, dim slope, dim offset, first n, relation, coproduct kind, sq rule, top dimension)
#   coproduct kind: "sum" for psi g_n = sum g_i (x) g_{n-i}; "prim" primitive; None undeclared
#   sq rule: Sq^{slope*r}_* g_n = C(n-r, r) g_{n-r}; "std4" keeps only the targets present in U/Sp
_RULES = {
    "SO": ("s", 1, 0, 1, "ext", "sum", "std", 128),
    "BO": ("a", 1, 0, 1, "poly", "sum", "std", 64),
    "BU": ("c", 2, 0, 1, "poly", "sum", "std", 64),
    "SO/U": ("c", 2, 0, 1, "ext", "sum", "std", 64),
    "BSp": ("p", 4, 0, 1, "poly", "sum", "std", 64),
    "U": ("u", 2, 1, 0, "ext", "prim", "std", 64),
    "Sp": ("z", 4, 3, 0, "ext", "prim", "std", 64),
    "U/Sp": ("u", 4, 1, 0, "ext", "prim", "std4", 64),
    "Sp/U": ("v", 4, 2, 0, "ext", "prim", None, 64),
    "U/O": ("u", 2, 1, 0, "poly", None, None, 64),
    "BSO": ("b", 1, 0, 2, "poly", None, None, 64),
}

_NOTES = {
    "SO": ["bottom cell s(1); Sq^r_* s(n) = C(n-r,r) s(n-r) (external: image of RP^infinity)"],
    "BO": ["Sq^r_* a(n) = C(n-r,r) a(n-r) (external: image of RP^infinity)"],
    "BU": ["Sq^2r_* c(2n) = C(n-r,r) c(2n-2r) (external: image of CP^infinity)"],
    "SO/U": ["image of BU with squares killed; Steenrod action inherited from BU (external)"],
    "BSp": ["Sq^4r_* p(4n) = C(n-r,r) p(4n-4r) (external: image of HP^infinity)"],
    "U": ["u(2n+1) primitive; Sq^2r_* u(2n+1) = C(n-r,r) u(2n-2r+1) (external: suspension of CP^infinity)"],
    "Sp": ["z(4n+3) primitive; Sq^4r_* z(4n+3) = C(n-r,r) z(4n-4r+3) (external)"],
    "U/Sp": ["u(4n+1) primitive; Steenrod action inherited from U, targets u(4m+3) vanish (external)"],
    "Sp/U": ["exterior on primitive generators in dimensions 4n+2; no Steenrod table shipped"],
    "U/O": ["polynomial on u(2n+1), n >= 0; coproduct and Steenrod action not shipped"],
    "BSO": ["abstract polynomial generators b(n), n >= 2; coproduct and Steenrod action not shipped"],
    "SU/SO": ["polynomial on u(2) and u(2n+1), n >= 1; coproduct and Steenrod action not shipped"],
}

ATLAS_NAMES = tuple(_RULES) + ("SU/SO",)
# metadata only: no presentation is shipped for the spin group
SPIN_TAG = "Spin: recorded as a tensor factor of the cohomology of Omega^k J for k = 1 mod 8; no presentation"


def _file_name(name: str) -> str:
    return name.replace("/", "_") + ".space"


def _gen_name(family: str, d: int) -> str:
    return f"{family}({d})"


def generate_presentation(name: str) -> str:
    """Text of the shipped data file for ``name``."""
    if name == "SU/SO":
        top = 64
        lines = [f"space {name}", "bottom 2", f"complete {top}"]
        lines += [f"note {n}" for n in _NOTES[name]]
        lines.append("gen u(2) dim=2 rel=poly")
        lines += [f"gen u({d}) dim={d} rel=poly" for d in range(3, top + 1, 2)]
        return "\n".join(lines) + "\n"
    fam, slope, off, first, rel, coprod, sq, top = _RULES[name]
    ns = [n for n in range(first, top + 1) if slope * n + off <= top]
    dims = {n: slope * n + off for n in ns}
    lines = [f"space {name}", f"bottom {dims[ns[0]]}", f"complete {top}"]
    if sq is not None:
        lines.append(f"sqbound {top}")
    lines += [f"note {n}" for n in _NOTES[name]]
    for n in ns:
        flag = " primitive" if coprod == "prim" else ""
        lines.append(f"gen {_gen_name(fam, dims[n])} dim={dims[n]} rel={rel}{flag}")
    if coprod == "sum":
        for n in ns:
            terms = [f"{_gen_name(fam, dims[n])} (x) 1"]
            terms += [f"{_gen_name(fam, dims[i])} (x) {_gen_name(fam, dims[n - i])}" for i in range(1, n)]
            terms.append(f"1 (x) {_gen_name(fam, dims[n])}")
            lines.append(f"coprod {_gen_name(fam, dims[n])} = {' + '.join(terms)}")
    if sq is not None:
        for n in ns:
            for r in range(1, n + 1):
                m = n - r
                if m not in dims or not binom_mod_p(n - r, r):
                    continue
                if sq == "std4" and r % 2:
                    continue
                lines.append(f"sq {slope * r} {_gen_name(fam, dims[n])} = {_gen_name(fam, dims[m])}")
    return "\n".join(lines) + "\n"


def write_atlas_files(directory: Path = DATA) -> list[Path]:
    directory.mkdir(parents=True, exist_ok=True)
    out = []
    for name in ATLAS_NAMES:
        path = directory / _file_name(name)
        path.write_text(generate_presentation(name), encoding="utf-8")
        out.append(path)
    return out


@lru_cache(maxsize=None)
def load_space(name: str) -> SpacePresentation:
    """The shipped presentation of a classical space (``SO``, ``BU``, ``U/Sp``, ...)."""
    if name == "Spin":
        raise MissingData(SPIN_TAG)
    if name not in ATLAS_NAMES:
        raise MissingData(f"no atlas space named {name!r}")
    text = resources.files("loophom").joinpath("data", _file_name(name)).read_text(encoding="utf-8")
    return SpacePresentation.from_text(text)


def load_space_file(path: str | Path) -> SpacePresentation:
    return SpacePresentation.from_text(Path(path).read_text(encoding="utf-8"))


# --------------------------------------------------------------------------
# predicate tables


@dataclass(frozen=True)
class TableEntry:
    table: str
    key: str
    value: str
    anchor: str


@lru_cache(maxsize=None)
def predicate_table() -> dict[tuple[str, str], TableEntry]:
    """Parse ``predicates.tbl``: ``<table> <key> = <value> anchor="<fact>"``."""
    text = resources.files("loophom").joinpath("data", "predicates.tbl").read_text(encoding="utf-8")
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        head, _, tail = line.partition("=")
        parts = head.split()
        toks = shlex.split(tail)
        anchors = [t for t in toks if t.startswith("anchor=")]
        if len(parts) != 2 or len(anchors) != 1 or not anchors[0][7:]:
            raise ValueError(f"predicates.tbl line {lineno}: expected '<table> <key> = <value> anchor=\"...\"'")
        value = " ".join(t for t in toks if not t.startswith("anchor="))
        out[(parts[0], parts[1])] = TableEntry(parts[0], parts[1], value, anchors[0][7:])
    return out


def table_entry(table: str, key) -> TableEntry:
    try:
        return predicate_table()[(table, str(key))]
    except KeyError:
        raise MissingData(f"no {table} entry for {key!r}") from None


@dataclass(frozen=True)
class Verdict:
    """A predicate answer together with the fact it rests on."""

    name: str
    dim: int
    nontrivial: bool
    anchor: str
    handle: Symbol | None = None
    source: str | None = None
    notes: tuple[str, ...] = field(default=())

    def report(self) -> str:
        status = "nontrivial" if self.nontrivial else "trivial"
        return f"{self.name} dim={self.dim} {status} anchor=\"{self.anchor}\""


# --------------------------------------------------------------------------
# ladder and maps


def bott_space_name(k: int) -> str:
    if k < 0:
        raise ValueError("k >= 0")
    return table_entry("bott", k % 8).value


def bott_space(k: int) -> SpacePresentation:
    """The classical space equivalent to the base-point component of Omega^k SO."""
    return load_space(bott_space_name(k))


def suspension_bound(ladder: str) -> int:
    return int(table_entry("bound", ladder).value)


def spherical_dims(k: int) -> set[int]:
    if k < 0:
        raise ValueError("k >= 0")
    return {int(v) for v in table_entry("spherical", k % 8).value.split(",")}


def nu(j: int) -> int:
    """2-adic valuation of 3^{4j} - 1."""
    if j < 1:
        raise ValueError("j >= 1")
    n = 3 ** (4 * j) - 1
    return (n & -n).bit_length() - 1


def q_of_p(p: int, bound: int = 10_000) -> int:
    """Least prime q != p that is a primitive root mod p with p exactly dividing q^{p-1} - 1."""
    if p < 3 or not is_prime(p):
        raise ValueError(f"q(p) needs an odd prime, got {p}")
    for q in range(2, bound):
        if q == p or not is_prime(q):
            continue
        if any(pow(q, i, p) == 1 for i in range(1, p - 1)):
            continue
        if pow(q, p - 1, p * p) == 1:
            continue
        return q
    raise MissingData(f"no q(p) below the search bound {bound} for p={p}")


def epsilon(k: int) -> int:
    return k % 2


# iota_t domains: U for even t, BU for odd t
def iota_domain(t: int) -> str:
    return "BU" if t % 2 else "U"


def so_primitive_closed_form(n: int, so: SpacePresentation | None = None) -> Element:
    """s(2n+1) + sum_{i=1}^{n} s(i) s(2n+1-i) in the homology of SO."""
    so = so or load_space("SO")
    s = lambda d: Element.symbol(so.symbol(f"s({d})"))
    out = s(2 * n + 1)
    for i in range(1, n + 1):
        out = out + s(i) * s(2 * n + 1 - i)
    return out


@lru_cache(maxsize=None)
def _iota_generator(t: int, name: str) -> Element:
    dom = load_space(iota_domain(t))
    sym = dom.symbol(name)
    d = sym.dim
    if t in (5, 6):
        return Element.zero()
    tgt = bott_space(t)
    if t == 0:
        return so_primitive_closed_form((d - 1) // 2, tgt)
    if t == 1:
        return Element.symbol(tgt.symbol(f"c({d})"))
    if t == 2:
        return Element.symbol(tgt.symbol(f"u({d})")) if d % 4 == 1 else Element.zero()
    if t == 3:
        return Element.symbol(tgt.symbol(f"p({d})")) if d % 4 == 0 else Element.zero()
    if t == 4:
        return Element.symbol(tgt.symbol(f"z({d})")) if d % 4 == 3 else Element.zero()
    a = Element.symbol(tgt.symbol(f"a({d // 2})"))
    return a * a


def iota_pushforward(t: int, e: Element) -> Element:
    """(iota_t)_* on the homology of U (t even) or BU (t odd), extended multiplicatively."""
    if not 0 <= t <= 7:
        raise ValueError("t in 0..7")
    dom = iota_domain(t)
    total = Element.zero()
    for m, c in e.items():
        img = Element.one()
        for atom, ex in m.factors:
            sym = atom.base
            if atom.seq or not isinstance(sym, Symbol) or sym.structure is not load_space(dom):
                raise ValueError(f"iota_{t} is defined on the homology of {dom}; got {atom.render()}")
            img = img * (_iota_generator(t, sym.name) ** ex)
        total = total + img.scale(c)
    return normalize(total) if not total.is_zero else total


# --------------------------------------------------------------------------
# nontriviality predicates


def x_class(i: int, k: int) -> Verdict:
    """x_i^{-k}: image of the dimension-i generator of Omega^k SO, with its nontriviality verdict."""
    if i < 1 or k < 0:
        raise ValueError("need i >= 1 and k >= 0")
    space = bott_space(k)
    gens = [s for s in space.generators.values() if s.dim == i]
    if i > space.top:
        raise MissingData(f"{space.name} is only declared through dimension {space.top}")
    if not gens:
        raise MissingData(f"{space.name} has no algebra generator in dimension {i}")
    src = gens[0]
    notes: list[str] = []
    if k == 0:
        e = table_entry("x", "k0")
        nontrivial = True
    elif k % 8:
        e = table_entry("x", "k_not_0mod8")
        nontrivial = True
        if k % 8 == 7:
            notes.append(table_entry("note", "k7_powers").value.replace("NU", str(nu((k + 1) // 8))))
    else:
        j = k // 8
        v = nu(j)
        nontrivial = (i + 1) % (2**v) != 0
        e = table_entry("x", "k_8j")
    if k % 8 in (0, 1, 2, 4):
        notes.append(table_entry("tag", "exterior").value)
    handle = Symbol("x", (i, k), i, src.height, "derived-class")
    return Verdict(f"x(i={i},k={k})", i, nontrivial, e.anchor, handle, src.name, tuple(notes))


def w_class(i: int, k: int, p: int = 2) -> Verdict:
    """w^{-k}_{2i+1-eps(k)}: image under the iterated complex J-homomorphism, with its verdict."""
    if i < 0 or k < 0:
        raise ValueError("need i >= 0 and k >= 0")
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    dim = 2 * i + 1 - epsilon(k)
    if p == 2:
        r = k % 8
        if r in (0, 1, 7):
            nontrivial, e = True, table_entry("w2", "k017")
        elif r in (2, 3):
            nontrivial, e = i % 2 == 0, table_entry("w2", "k23")
        elif r == 4:
            nontrivial, e = i % 2 == 1, table_entry("w2", "k4")
        else:
            nontrivial, e = False, table_entry("w2", "k56")
    else:
        n = (k + 1) // 2 if k % 2 else k // 2
        q = q_of_p(p)
        nontrivial = (pow(q, n + i, p) - 1) % p == 0
        e = table_entry("wp", "odd" if k % 2 else "even")
    source = f"c({2 * i})" if k % 2 else f"u({2 * i + 1})"
    notes = (table_entry("tag", "exterior_w").value,) if p == 2 and k % 8 in (0, 2, 4) else ()
    handle = Symbol("w", (dim, k), dim, 2 if notes else None, "derived-class")
    return Verdict(f"w(dim={dim},k={k},p={p})", dim, nontrivial, e.anchor, handle, source, notes)


def structure_tag(k: int) -> TableEntry:
    """Recorded structure of the cohomology of Omega^k J by k mod 8 (metadata only)."""
    r = k % 8
    key = {0: "k0", 7: "k7", 1: "k1", 3: "k3"}.get(r, "k2456")
    return table_entry("structure", key)


def check_so_primitives(up_to: int) -> None:
    """Closed-form primitive of SO equals the computed primitive line in each odd dimension."""
    so = load_space("SO")
    for d in range(1, up_to + 1):
        prims = primitives(so, d)
        if d % 2 == 0:
            if prims:
                raise AssertionError(f"unexpected even primitive in dimension {d}")
            continue
        if len(prims) != 1 or prims[0] != so_primitive_closed_form((d - 1) // 2, so):
            raise AssertionError(f"primitive mismatch in dimension {d}")


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description="Regenerate the shipped atlas presentations.")
    ap.add_argument("--write", action="store_true", help="write data/*.space")
    args = ap.parse_args(argv)
    if args.write:
        for path in write_atlas_files():
            print(path)
    else:
        for name in ATLAS_NAMES:
            print(name, (DATA / _file_name(name)).read_text() == generate_presentation(name))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
