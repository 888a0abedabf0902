"""Regression suites for the identities the engine reproduces, and the run report format.

Every check carries a short anchor naming the fact it verifies.  A report is
line oriented::

    command <argv echo>
    check <id> <pass|fail|skip> anchor="..." ms=<n>
    summary pass=<n> fail=<n> skip=<n>

Checks run in id order, so a report depends only on its arguments; timings
are written as ``ms=0`` unless asked for.
"""
from __future__ import annotations

import random
import re
import shlex
import time
from dataclasses import dataclass, field
from typing import Callable

from . import atlas, desusp, qsk
from .core import Atom, Element, LoopHomError, Pi0Spec, Symbol, admissible_sequences, is_prime, make_monomial
from .dyer_lashof import coproduct, normalize, power, q_apply, q_seq
from .steenrod import primitives, sq_act, sq_atom, square_root, square_root_via_sq


@dataclass
class CheckResult:
    id: str
    status: str
    anchor: str
    ms: int = 0
    detail: str = ""

    def line(self) -> str:
        anchor = self.anchor.replace('"', "'")
        return f'check {self.id} {self.status} anchor="{anchor}" ms={self.ms}'


@dataclass
class RunReport:
    command: str
    results: list[CheckResult] = field(default_factory=list)

    def count(self, status: str) -> int:
        return sum(r.status == status for r in self.results)

    @property
    def ok(self) -> bool:
        return self.count("fail") == 0

    def render(self) -> str:
        lines = [f"command {self.command}"]
        lines += [r.line() for r in self.results]
        lines.append(f"summary pass={self.count('pass')} fail={self.count('fail')} skip={self.count('skip')}")
        return "\n".join(lines) + "\n"

    def render_text(self) -> str:
        lines = []
        for r in self.results:
            lines.append(f"{r.status.upper():4}  {r.id:28} {r.anchor}")
            if r.detail:
                lines += [f"      {d}" for d in r.detail.splitlines()]
        lines.append(f"{self.count('pass')} passed, {self.count('fail')} failed, {self.count('skip')} skipped")
        return "\n".join(lines) + "\n"


_CHECK_LINE = re.compile(r'^check (\S+) (pass|fail|skip) anchor="([^"]*)" ms=(\d+)$')


def parse_report(text: str) -> RunReport:
    """Inverse of :meth:`RunReport.render`."""
    lines = text.splitlines()
    if not lines or not lines[0].startswith("command "):
        raise ValueError("report must start with a command line")
    report = RunReport(lines[0][len("command "):])
    for line in lines[1:]:
        if line.startswith("summary "):
            counts = dict(tok.split("=") for tok in line.split()[1:])
            for status in ("pass", "fail", "skip"):
                if int(counts[status]) != report.count(status):
                    raise ValueError(f"summary disagrees with check lines for {status}")
            return report
        m = _CHECK_LINE.match(line)
        if not m:
            raise ValueError(f"malformed check line: {line!r}")
        report.results.append(CheckResult(m.group(1), m.group(2), m.group(3), int(m.group(4))))
    raise ValueError("report has no summary line")


@dataclass(frozen=True)
class Check:
    id: str
    anchor: str
    run: Callable[[], None]


def run_checks(checks: list[Check], command: str, timing: bool = False) -> RunReport:
    report = RunReport(command)
    for chk in sorted(checks, key=lambda c: c.id):
        start = time.perf_counter()
        status, detail = "pass", ""
        try:
            chk.run()
        except (AssertionError, LoopHomError, ValueError) as exc:
            status, detail = "fail", f"{type(exc).__name__}: {exc}"
        ms = round((time.perf_counter() - start) * 1000) if timing else 0
        report.results.append(CheckResult(chk.id, status, chk.anchor, ms, detail))
    return report


def _expect(cond: bool, msg: str) -> None:
    if not cond:
        raise AssertionError(msg)


# --------------------------------------------------------------------------
# individual identities


def check_qs0_example() -> None:
    x1 = Element.symbol(qsk.x_symbol(1))
    lhs = normalize(q_apply(3, x1))
    rhs = normalize(x1 ** 4)
    _expect(lhs == rhs and not lhs.is_zero, f"Q^3 x_1 = {lhs.render()}, x_1^4 = {rhs.render()}")
    _expect(qsk.to_x_notation(lhs).render() == "x(1)^4", "x-notation rendering differs")


def check_eta_pushforward(up_to: int = 12) -> None:
    k1 = qsk.pi0_spec(1)
    eta = k1.generator("eta")
    for i in range(1, up_to + 1):
        img = qsk.pushforward(normalize(Element.symbol(qsk.x_symbol(i))), k1, {0: eta})
        want = normalize(Element.atom((i,), eta))
        _expect(img == want, f"eta_* x_{i} = {img.render()}, expected {want.render()}")


def truncation_spec(d: int) -> Pi0Spec:
    """A context with a cyclic summand of order 2^d: eta, nu, or a synthetic Z/4."""
    if d == 1:
        return qsk.pi0_spec(1)
    if d == 3:
        return qsk.pi0_spec(3)
    return Pi0Spec(0, (2**d,), ("g",))


def check_truncation_sweep(d: int, max_dim: int) -> int:
    spec = truncation_spec(d)
    n = 0
    for total in range(1, max_dim + 1):
        for jd in range(1, total + 1):
            for J in admissible_sequences(jd, max_len=d):
                for I in [()] + admissible_sequences(total - jd):
                    qsk.verify_truncation(spec, 0, I, J)
                    n += 1
    return n


def check_truncation_sharp() -> None:
    spec = qsk.pi0_spec(3)
    x = qsk.gamma_class(spec, "nu", (1,))
    _expect(not (x ** 4).is_zero, "(Q^1[nu_1])^4 vanishes, so the height bound would be slack")


def check_hopf_one(max_dim: int, kernel_bound: int = 21, coproduct_bound: int = 63) -> None:
    """A-annihilated odd primitives of H_*SO, by brute-force Sq^r_* loops.

    Through ``kernel_bound`` the primitives come from the coproduct kernel and
    must be the single closed-form class; above it the closed form is used,
    and it is checked primitive through ``coproduct_bound``.
    """
    so = atlas.load_space("SO")
    found = []
    for d in range(1, max_dim + 1, 2):
        p = atlas.so_primitive_closed_form((d - 1) // 2, so)
        if d <= kernel_bound:
            prims = primitives(so, d)
            _expect(prims == [p], f"primitives of H_{d} SO are {[x.render() for x in prims]}")
        elif d <= coproduct_bound:
            _expect(_is_prim(p), f"closed form in dim {d} is not primitive")
        if all(sq_act(r, p).is_zero for r in range(1, d // 2 + 1)):
            found.append(d)
    want = [2**t - 1 for t in range(1, max_dim.bit_length() + 1) if 2**t - 1 <= max_dim]
    _expect(found == want, f"A-annihilated odd primitives in dims {found}, expected {want}")


def _is_prim(e: Element) -> bool:
    return all(not (a.factors and b.factors) for (a, b), _ in coproduct(e).items())


def check_x_predicate() -> None:
    _expect(3**4 - 1 == 80 and 80 % 16 == 0 and 80 % 32 != 0, "arithmetic of 3^4 - 1")
    _expect(atlas.nu(1) == 4 and atlas.nu(2) == 5, f"nu(1)={atlas.nu(1)}, nu(2)={atlas.nu(2)}")
    for i in range(1, 65):
        v = atlas.x_class(i, 8)
        _expect(v.nontrivial == (i % 16 != 15), f"x_{i}^(-8) verdict {v.nontrivial}")
        _expect(bool(v.anchor), "missing anchor")
    for i in range(1, 65):
        v = atlas.x_class(i, 16)
        _expect(v.nontrivial == (i % 32 != 31), f"x_{i}^(-16) verdict {v.nontrivial}")


def check_iota(up_to: int = 24) -> None:
    for t in (5, 6):
        dom = atlas.load_space(atlas.iota_domain(t))
        for sym in dom.generators.values():
            if sym.dim <= up_to:
                img = atlas.iota_pushforward(t, Element.symbol(sym))
                _expect(img.is_zero, f"iota_{t} sends {sym.name} to {img.render()}")
    bu, bo = atlas.load_space("BU"), atlas.bott_space(7)
    for i in range(1, up_to // 2 + 1):
        img = atlas.iota_pushforward(7, Element.symbol(bu.symbol(f"c({2 * i})")))
        a = Element.symbol(bo.symbol(f"a({i})"))
        _expect(img == a * a, f"iota_7 c({2 * i}) = {img.render()}")


def check_ker_r(up_to: int = 24) -> None:
    for d in range(2, up_to + 1, 2):
        for c in desusp.cj_monomials(d):
            _expect(desusp.ker_r_classify(c.J) == (not c.four_divides), f"ker r verdict for {c}")


def check_decompositions(up_to: int = 12) -> int:
    ps = desusp.PrimitiveSpace()
    n = 0
    for d in range(1, up_to + 1):
        for p in ps.primitives(d):
            rec = desusp.primitive_decompose(p, ps)
            _expect(rec.reassemble(ps) == p, f"{p.render()} does not reassemble")
            n += 1
    return n


def check_desusp_series(up_to: int = 12) -> None:
    b = desusp.desusp_basis(up_to, check_images=True)
    for d in range(up_to + 1):
        _expect(len(b.monomials(d)) == b.series[d], f"exterior basis count in degree {d}")


def _w_oracle(i: int, k: int, p: int) -> bool:
    if p == 2:
        r = k % 8
        if r in (0, 1, 7):
            return True
        if r in (2, 3):
            return i % 2 == 0
        if r == 4:
            return i % 2 == 1
        return False
    n = (k + 1) // 2 if k % 2 else k // 2
    return (n + i) % (p - 1) == 0


def _brute_q(p: int) -> int:
    q = 2
    while True:
        if q != p and is_prime(q):
            order = next(e for e in range(1, p) if pow(q, e, p) == 1) if q % p else 0
            if order == p - 1 and (q ** (p - 1) - 1) % (p * p) != 0:
                return q
        q += 1


def check_w_predicate() -> None:
    _expect(_brute_q(3) == 2 == atlas.q_of_p(3), "q(3)")
    _expect(_brute_q(5) == 2 == atlas.q_of_p(5), "q(5)")
    for p in (2, 3, 5):
        for k in range(16):
            for i in range(0, 6):
                v = atlas.w_class(i, k, p)
                _expect(v.nontrivial == _w_oracle(i, k, p), f"w verdict at i={i}, k={k}, p={p}")
                _expect(v.dim == 2 * i + 1 - k % 2 and bool(v.anchor), f"w dimension at i={i}, k={k}")


# --------------------------------------------------------------------------
# randomized engine coherence


class _Sampler:
    def __init__(self, rng: random.Random):
        self.rng = rng
        self.z = Pi0Spec.integers().generator(0)
        self.nu = qsk.pi0_spec(3).generator("nu")
        self.eta = qsk.pi0_spec(1).generator("eta")
        self.bu = atlas.load_space("BU")

        self.family = 0

    def new_case(self) -> None:
        """Choose the family of base classes for the next case; products never mix pi_0 specs."""
        self.family = self.rng.randrange(4)

    def base(self):
        if self.family == 0:
            return self.z
        if self.family == 1:
            return self.nu
        if self.family == 2:
            return self.eta
        return self.bu.symbol(f"c({self.rng.choice((2, 4, 6))})")

    def seq(self, top: int, admissible: bool = True) -> tuple[int, ...]:
        n = self.rng.randrange(0, 3)
        out = tuple(self.rng.randint(1, top) for _ in range(n))
        if admissible:
            out = tuple(sorted(out, reverse=True))
            while any(a > 2 * b for a, b in zip(out, out[1:])):
                out = out[1:]
        return out

    def atom(self, top: int = 6) -> Element:
        b = self.base()
        return normalize(Element.from_monomial(make_monomial([(Atom(self.seq(top), b), 1)])))

    def element(self) -> Element:
        out = Element.zero()
        for _ in range(self.rng.randint(1, 2)):
            term = self.atom()
            if self.rng.random() < 0.4:
                term = term * self.atom(4)
            out = out + term
        return out

    def homogeneous(self) -> Element:
        e = self.element()
        parts = e.homogeneous_parts() if not e.is_zero else []
        return parts[0] if parts else e


def _prop_confluence(s: _Sampler) -> None:
    b = s.base()
    seq = s.seq(8, admissible=False) or (s.rng.randint(1, 6),)
    direct = normalize(Element.from_monomial(make_monomial([(Atom(seq, b), 1)])))
    stepwise = q_seq(seq, Element.symbol(b) if isinstance(b, Symbol) else Element.pi0(b))
    _expect(direct == stepwise, f"Q{list(seq)} on {b}: {direct.render()} vs {stepwise.render()}")
    _expect(normalize(direct) == direct, "normal form is not idempotent")


def _prop_cartan(s: _Sampler) -> None:
    x, y = s.element(), s.element()
    n = s.rng.randint(0, 10)
    rhs = Element.zero()
    for a in range(n + 1):
        rhs = rhs + q_apply(a, x) * q_apply(n - a, y)
    _expect(q_apply(n, x * y) == rhs, f"Cartan formula for Q^{n}")


def _prop_power(s: _Sampler) -> None:
    b = s.base()
    xi = Element.symbol(b) if isinstance(b, Symbol) else Element.pi0(b)
    I = s.seq(5)
    t = s.rng.randint(1, 3)
    lhs = power(q_seq(I, xi), t)
    rhs = q_seq(tuple(2**t * i for i in I), power(xi, t))
    _expect(lhs == rhs, f"power law for I={I}, t={t} on {b}")


def _prop_nishida(s: _Sampler) -> None:
    b = s.base()
    seq = s.seq(8, admissible=False) or (s.rng.randint(1, 6),)
    raw = Atom(seq, b)
    r = s.rng.randint(1, max(1, raw.dim // 2))
    lhs = sq_atom(r, raw)
    rhs = sq_act(r, normalize(Element.from_monomial(make_monomial([(raw, 1)]))))
    _expect(normalize(lhs) == rhs, f"Sq^{r} and normalization disagree on {raw.render()}")


def _prop_sq_cartan(s: _Sampler) -> None:
    x, y = s.element(), s.element()
    r = s.rng.randint(1, 8)
    rhs = Element.zero()
    for i in range(r + 1):
        rhs = rhs + sq_act(i, x) * sq_act(r - i, y)
    _expect(sq_act(r, x * y) == rhs, f"Cartan formula for Sq^{r}")


def _prop_root(s: _Sampler) -> None:
    x, y = s.homogeneous(), s.homogeneous()
    _expect(square_root(x * y) == square_root(x) * square_root(y), "r is not multiplicative")
    rx = square_root(x)
    _expect(square_root(x * x) == rx * rx, "r(x^2) differs from r(x)^2")
    _expect(rx == square_root_via_sq(x), "r disagrees with Sq^{dim/2}")


def _prop_coproduct(s: _Sampler) -> None:
    x, y = s.element(), s.element()
    _expect(coproduct(x * y) == coproduct(x) * coproduct(y), "psi is not multiplicative")


PROPERTIES = [
    ("adem-confluence", _prop_confluence),
    ("cartan", _prop_cartan),
    ("power-law", _prop_power),
    ("nishida-normalize", _prop_nishida),
    ("sq-cartan", _prop_sq_cartan),
    ("root", _prop_root),
    ("coproduct", _prop_coproduct),
]


def check_properties(seed: int, cases: int) -> dict[str, int]:
    """Run ``cases`` random instances, cycling through the property list; returns counts per property."""
    s = _Sampler(random.Random(seed))
    counts = {name: 0 for name, _ in PROPERTIES}
    for c in range(cases):
        name, fn = PROPERTIES[c % len(PROPERTIES)]
        s.new_case()
        fn(s)
        counts[name] += 1
    return counts


# --------------------------------------------------------------------------
# suites


def suite(name: str, max_dim: int = 16, seed: int = 0, d: int | None = None, cases: int = 10_000) -> list[Check]:
    if name == "qs0":
        return [Check("qs0.q3x1", "Q^3 x_1 = x_1^4 in the base-point component", check_qs0_example)]
    if name == "eta":
        return [Check("eta.pushforward", "eta_* x_i = Q^i[eta]", check_eta_pushforward)]
    if name == "prop4":
        ds = [d] if d else [1, 2, 3]
        out = [Check(f"prop4.d{k}", f"(Q^I[gamma_J])^(2^{k}) = 0 for gamma of order 2^{k}",
                     lambda k=k: check_truncation_sweep(k, max_dim)) for k in ds]
        if 3 in ds:
            out.append(Check("prop4.d3.sharp", "(Q^1[nu_1])^4 is nonzero", check_truncation_sharp))
        return out
    if name == "hopf-one":
        return [Check("hopf-one", "A-annihilated primitives of H_*SO lie in dims 2^t - 1",
                      lambda: check_hopf_one(max_dim))]
    if name == "x-predicate":
        return [Check("x-predicate", "x_i^(-8j) is trivial iff 2^nu_j divides i+1", check_x_predicate)]
    if name == "iota":
        return [Check("iota", "iota_5 and iota_6 vanish; iota_7 c_2i = a_i^2", check_iota)]
    if name == "ker-r":
        return [Check("ker-r", "c_J lies in ker r iff 4 does not divide J", check_ker_r)]
    if name == "decompose":
        return [Check("decompose", "primitives of H_*QBU split into Q^I p_(i,J) + Q^K p_L + square",
                      lambda: check_decompositions(min(max_dim, 12)))]
    if name == "desusp":
        return [Check("desusp", "two counts of the exterior algebra E(sigma_* P H_*QBU)",
                      lambda: check_desusp_series(min(max_dim, 12)))]
    if name == "properties":
        return [Check("properties", f"engine coherence on {cases} seeded cases",
                      lambda: check_properties(seed, cases))]
    if name == "w-predicate":
        return [Check("w-predicate", "w^(-k) verdicts by k mod 8, i parity and p", check_w_predicate)]
    raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")


SUITES = ("qs0", "eta", "prop4", "hopf-one", "x-predicate", "iota", "ker-r", "decompose", "desusp",
          "properties", "w-predicate")


def all_checks(max_dim: int = 16, seed: int = 0, cases: int = 10_000) -> list[Check]:
    out = []
    for name in SUITES:
        out += suite(name, max_dim=max_dim, seed=seed, cases=cases)
    return out


def echo(argv: list[str]) -> str:
    return shlex.join(argv)
