"""Invariant forms as sparse coefficient maps on wedge monomials.

Generators are numbered ``0..n-1`` for the (1,0) coframe ``mu1..mun`` and
``n..2n-1`` for the conjugates ``mubar1..mubarn``.  A monomial is the sorted
tuple of its generator indices, so ``mu^I ^ mubar^J`` always lists the
holomorphic factors first.
"""

from __future__ import annotations

import re
from itertools import combinations
from typing import Iterable

from twisted_hodge.errors import ParseError
from twisted_hodge.field import GaussianRational, format_scalar, parse_scalar

Monomial = tuple
Form = dict  # Monomial -> GaussianRational


def sort_sign(indices: Iterable[int]) -> tuple[int, Monomial]:
    """Sign of the sorting permutation and the sorted monomial (sign 0 on a repeat)."""
    idx = list(indices)
    if len(set(idx)) != len(idx):
        return 0, ()
    inversions = sum(1 for a, b in combinations(idx, 2) if a > b)
    return (-1 if inversions % 2 else 1), tuple(sorted(idx))


def wedge_monomials(a: Monomial, b: Monomial) -> tuple[int, Monomial]:
    return sort_sign(a + b)


def clean(form: Form) -> Form:
    return {m: c for m, c in form.items() if c}


def add(*forms: Form) -> Form:
    out: Form = {}
    for f in forms:
        for m, c in f.items():
            out[m] = out.get(m, GaussianRational(0)) + c
    return clean(out)


def scale(form: Form, c) -> Form:
    c = GaussianRational.coerce(c)
    return clean({m: c * x for m, x in form.items()})


def wedge(f: Form, g: Form) -> Form:
    out: Form = {}
    for ma, ca in f.items():
        for mb, cb in g.items():
            s, m = wedge_monomials(ma, mb)
            if s:
                term = ca * cb if s > 0 else -(ca * cb)
                out[m] = out.get(m, GaussianRational(0)) + term
    return clean(out)


def conj_generator(g: int, n: int) -> int:
    return g + n if g < n else g - n


def conjugate(form: Form, n: int) -> Form:
    out: Form = {}
    for m, c in form.items():
        s, mm = sort_sign(conj_generator(g, n) for g in m)
        out[mm] = out.get(mm, GaussianRational(0)) + (c.conj() if s > 0 else -c.conj())
    return clean(out)


def degree(m: Monomial) -> int:
    return len(m)


def bidegree(m: Monomial, n: int) -> tuple[int, int]:
    p = sum(1 for g in m if g < n)
    return p, len(m) - p


def form_degree(form: Form) -> int | None:
    degs = {len(m) for m in form}
    if len(degs) > 1:
        raise ValueError("form is not homogeneous")
    return degs.pop() if degs else None


# ---------------------------------------------------------------------------
# text notation: "1/2*mu1^mubar3 - i*mu2", "1", "0"

_GEN_RE = re.compile(r"^mu(bar)?(\d+)$")


def generator_name(g: int, n: int) -> str:
    return f"mu{g + 1}" if g < n else f"mubar{g - n + 1}"


def monomial_name(m: Monomial, n: int) -> str:
    return "^".join(generator_name(g, n) for g in m) if m else "1"


def format_form(form: Form, n: int, order=None) -> str:
    """Render a form, terms in ``order`` (default: degree then monomial order)."""
    if not form:
        return "0"
    keys = sorted(form, key=order or (lambda m: (len(m), m)))
    parts = []
    for m in keys:
        c = form[m]
        neg = False
        if c.im == 0 and c.re < 0:
            neg, c = True, -c
        elif c.re == 0 and c.im < 0:
            neg, c = True, -c
        cs = format_scalar(c)
        if c.re != 0 and c.im != 0:
            cs = f"({cs})"
        if m:
            body = monomial_name(m, n) if cs == "1" else f"{cs}*{monomial_name(m, n)}"
        else:
            body = cs
        parts.append(("- " if neg else "+ ") + body)
    text = " ".join(parts)
    return text[2:] if text.startswith("+ ") else "-" + text[2:]


def _split_terms(s: str) -> list[tuple[int, str]]:
    terms = []
    depth = 0
    start = 0
    sign = 1
    for pos, ch in enumerate(s):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch in "+-" and depth == 0 and pos > start:
            prev = s[pos - 1]
            if prev in "*/^":
                continue
            terms.append((sign, s[start:pos]))
            sign = 1 if ch == "+" else -1
            start = pos + 1
        elif ch in "+-" and depth == 0 and pos == start:
            sign = sign * (1 if ch == "+" else -1)
            start = pos + 1
    terms.append((sign, s[start:]))
    return terms


def parse_monomial(text: str, n: int) -> tuple[int, Monomial]:
    gens = []
    for tok in re.split(r"\^|∧", text):
        m = _GEN_RE.match(tok)
        if m is None:
            raise ParseError(f"unknown generator {tok!r}")
        k = int(m.group(2))
        if not 1 <= k <= n:
            raise ParseError(f"generator index {k} outside 1..{n}")
        gens.append(k - 1 + (n if m.group(1) else 0))
    return sort_sign(gens)


def parse_form(text: str, n: int) -> Form:
    """Parse ``term (+|- term)*`` with ``term = [coeff "*"] monomial | coeff``."""
    s = "".join(str(text).split())
    if not s:
        raise ParseError("empty form")
    out: Form = {}
    for sign, chunk in _split_terms(s):
        if not chunk:
            raise ParseError(f"dangling sign in {text!r}")
        if "mu" in chunk:
            idx = chunk.find("mu")
            coeff_txt = chunk[:idx]
            mono_txt = chunk[idx:]
            if coeff_txt:
                if not coeff_txt.endswith("*"):
                    raise ParseError(f"expected '*' between coefficient and monomial in {chunk!r}")
                coeff = parse_scalar(coeff_txt[:-1])
            else:
                coeff = GaussianRational(1)
            s_m, mono = parse_monomial(mono_txt, n)
            if s_m == 0:
                continue
            coeff = coeff if s_m > 0 else -coeff
        else:
            coeff = parse_scalar(chunk)
            mono = ()
        if sign < 0:
            coeff = -coeff
        out[mono] = out.get(mono, GaussianRational(0)) + coeff
    return clean(out)
