"""Homology of the free loop space of a closed surface and its BV-algebra operations.

For genus g >= 2 every component of the free loop space other than the
constant-loop component ``[e]`` is a circle, so

    H_0 = Z[classes],   H_1 = H_1(surface) + Z[nontrivial classes],   H_2 = Z * E.

A nontrivial class ``[h]`` with ``h = k^l`` (``k`` primitive, ``l > 0``)
contributes the generator ``~[h]`` of its H_1, the loop rotated once around
itself; ``E`` is the fundamental class of the constant loops and is the unit
of the string product (degree -2).

Text syntax for elements, used by the command line::

    element := term (("+" | "-") term)*  |  "0"
    term    := [int "*"] atom
    atom    := "E" | "unit" | "[" word "]" | "~[" word "]" | "<" word ">"

``[w]`` is a degree-0 class, ``~[w]`` the degree-1 generator of a nontrivial
class and ``<w>`` the homology class of ``w`` in H_1 of the surface, viewed in
the constant-loop component.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .goldman import BracketResult, goldman_bracket
from .words import ConjugacyClass, SurfaceGroup, WordSyntaxError, format_word

__all__ = [
    "CoproductResult",
    "ElementSyntaxError",
    "HomologyElement",
    "IntegralityError",
    "basis",
    "component_homology",
    "coproduct",
    "delta",
    "parse_element",
    "product",
]


class IntegralityError(ArithmeticError):
    """A level division in the string product was not exact; this means a bracket or level bug."""


class ElementSyntaxError(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.message = message
        self.offset = offset


def _clean(terms: Mapping[ConjugacyClass, int]) -> dict[ConjugacyClass, int]:
    return {c: int(n) for c, n in sorted(terms.items(), key=lambda kv: kv[0].sort_key()) if n}


def _add_terms(a: Mapping[ConjugacyClass, int], b: Mapping[ConjugacyClass, int], k: int = 1):
    out = dict(a)
    for c, n in b.items():
        out[c] = out.get(c, 0) + k * n
    return out


@dataclass(frozen=True)
class HomologyElement:
    """An integral homology class of the free loop space, stored degree by degree."""

    genus: int
    deg0: Mapping[ConjugacyClass, int] = field(default_factory=dict)
    deg1_e: tuple[int, ...] = ()
    deg1_tilde: Mapping[ConjugacyClass, int] = field(default_factory=dict)
    deg2: int = 0

    def __post_init__(self):
        g = self.genus
        vec = tuple(int(x) for x in self.deg1_e) or (0,) * (2 * g)
        if len(vec) != 2 * g:
            raise ValueError(f"deg1_e must have length {2 * g}, got {len(vec)}")
        for c in list(self.deg0) + list(self.deg1_tilde):
            if c.genus != g:
                raise ValueError(f"class [{c}] belongs to genus {c.genus}, not {g}")
        if any(c.is_identity for c, n in self.deg1_tilde.items() if n):
            raise ValueError("the constant-loop component has no ~ generator; use deg1_e")
        object.__setattr__(self, "deg0", _clean(self.deg0))
        object.__setattr__(self, "deg1_e", vec)
        object.__setattr__(self, "deg1_tilde", _clean(self.deg1_tilde))
        object.__setattr__(self, "deg2", int(self.deg2))

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, genus: int) -> "HomologyElement":
        return cls(genus)

    @classmethod
    def unit(cls, genus: int) -> "HomologyElement":
        """``E``, the fundamental class of the constant loops."""
        return cls(genus, deg2=1)

    @classmethod
    def point(cls, c: ConjugacyClass) -> "HomologyElement":
        """The degree-0 class ``[h]``."""
        return cls(c.genus, deg0={c: 1})

    @classmethod
    def tilde(cls, c: ConjugacyClass) -> "HomologyElement":
        """The degree-1 generator ``~[h]`` of a nontrivial component."""
        return cls(c.genus, deg1_tilde={c: 1})

    @classmethod
    def surface_class(cls, genus: int, vector: Sequence[int]) -> "HomologyElement":
        """A class of H_1 of the surface, in the constant-loop component."""
        return cls(genus, deg1_e=tuple(vector))

    @classmethod
    def from_bracket(cls, b: BracketResult) -> "HomologyElement":
        return cls(b.genus, deg0=b.terms)

    # -- arithmetic -------------------------------------------------------

    def _check(self, other: "HomologyElement") -> None:
        if self.genus != other.genus:
            raise ValueError("elements belong to different genera")

    def __add__(self, other: "HomologyElement") -> "HomologyElement":
        self._check(other)
        return HomologyElement(
            self.genus,
            _add_terms(self.deg0, other.deg0),
            tuple(a + b for a, b in zip(self.deg1_e, other.deg1_e)),
            _add_terms(self.deg1_tilde, other.deg1_tilde),
            self.deg2 + other.deg2,
        )

    def scaled(self, k: int) -> "HomologyElement":
        return HomologyElement(
            self.genus,
            {c: k * n for c, n in self.deg0.items()},
            tuple(k * a for a in self.deg1_e),
            {c: k * n for c, n in self.deg1_tilde.items()},
            k * self.deg2,
        )

    def __neg__(self) -> "HomologyElement":
        return self.scaled(-1)

    def __sub__(self, other: "HomologyElement") -> "HomologyElement":
        return self + (-other)

    def __rmul__(self, k: int) -> "HomologyElement":
        return self.scaled(k)

    def __mul__(self, other):
        if isinstance(other, HomologyElement):
            return product(self, other)
        return self.scaled(other)

    def is_zero(self) -> bool:
        return not (self.deg0 or any(self.deg1_e) or self.deg1_tilde or self.deg2)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __eq__(self, other) -> bool:
        if not isinstance(other, HomologyElement):
            return NotImplemented
        return (self.genus, self.deg0, self.deg1_e, self.deg1_tilde, self.deg2) == (
            other.genus,
            other.deg0,
            other.deg1_e,
            other.deg1_tilde,
            other.deg2,
        )

    def __hash__(self):
        return hash((self.genus, tuple(self.deg0.items()), self.deg1_e, tuple(self.deg1_tilde.items()), self.deg2))

    def degree_part(self, d: int) -> "HomologyElement":
        g = self.genus
        if d == 0:
            return HomologyElement(g, deg0=self.deg0)
        if d == 1:
            return HomologyElement(g, deg1_e=self.deg1_e, deg1_tilde=self.deg1_tilde)
        if d == 2:
            return HomologyElement(g, deg2=self.deg2)
        return HomologyElement(g)

    # -- serialisation ----------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "deg0": [{"class": str(c), "coeff": n} for c, n in self.deg0.items()],
            "deg1_e": list(self.deg1_e),
            "deg1_tilde": [{"class": str(c), "coeff": n} for c, n in self.deg1_tilde.items()],
            "deg2": self.deg2,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    @classmethod
    def from_dict(cls, data: Mapping, genus: int) -> "HomologyElement":
        G = SurfaceGroup(genus)

        def terms(items) -> dict[ConjugacyClass, int]:
            out: dict[ConjugacyClass, int] = {}
            for t in items:
                c = G.conjugacy_class(t["class"])
                out[c] = out.get(c, 0) + int(t["coeff"])
            return out

        return cls(
            genus,
            terms(data.get("deg0", [])),
            tuple(data.get("deg1_e", ())),
            terms(data.get("deg1_tilde", [])),
            int(data.get("deg2", 0)),
        )

    @classmethod
    def from_json(cls, text: str, genus: int) -> "HomologyElement":
        return cls.from_dict(json.loads(text), genus)

    def __str__(self) -> str:
        g = self.genus
        parts: list[tuple[int, str]] = []
        if self.deg2:
            parts.append((self.deg2, "E"))
        for i, a in enumerate(self.deg1_e):
            if a:
                parts.append((a, f"<{format_word((i + 1,), g)}>"))
        for c, n in self.deg1_tilde.items():
            parts.append((n, f"~[{c}]"))
        for c, n in self.deg0.items():
            parts.append((n, f"[{c}]"))
        if not parts:
            return "0"
        out = []
        for k, (n, atom) in enumerate(parts):
            sign = "-" if n < 0 else ("+" if k else "")
            mag = "" if abs(n) == 1 else f"{abs(n)}*"
            out.append(f"{sign} {mag}{atom}" if k else f"{sign}{mag}{atom}")
        return " ".join(out)


@dataclass(frozen=True)
class CoproductResult:
    """A finite integer combination of tensors ``[h1] (x) [h2]`` of degree-0 classes."""

    genus: int
    terms: Mapping[tuple[ConjugacyClass, ConjugacyClass], int] = field(default_factory=dict)

    def __post_init__(self):
        clean = {
            k: int(n)
            for k, n in sorted(self.terms.items(), key=lambda kv: (kv[0][0].sort_key(), kv[0][1].sort_key()))
            if n
        }
        object.__setattr__(self, "terms", clean)

    def __eq__(self, other) -> bool:
        if not isinstance(other, CoproductResult):
            return NotImplemented
        return self.genus == other.genus and self.terms == other.terms

    def __hash__(self):
        return hash((self.genus, tuple(self.terms.items())))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def to_json(self) -> str:
        return json.dumps({"terms": [{"pair": [str(a), str(b)], "coeff": n} for (a, b), n in self.terms.items()]}, separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str, genus: int) -> "CoproductResult":
        G = SurfaceGroup(genus)
        out: dict[tuple[ConjugacyClass, ConjugacyClass], int] = {}
        for t in json.loads(text)["terms"]:
            a, b = (G.conjugacy_class(s) for s in t["pair"])
            out[(a, b)] = out.get((a, b), 0) + int(t["coeff"])
        return cls(genus, out)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        # a tensor [u] (x) [v] is written as the pair ([u], [v])
        return " ".join(f"{n:+d}*([{a}], [{b}])" for (a, b), n in self.terms.items())


# -- operations ---------------------------------------------------------------


def component_homology(c: ConjugacyClass) -> tuple[int, int, int]:
    """Ranks of H_0, H_1, H_2 of the loop-space component of ``c``.

    The constant-loop component is homotopy equivalent to the surface; every
    other component to a circle.
    """
    if c.is_identity:
        return (1, 2 * c.genus, 1)
    return (1, 1, 0)


def delta(x: HomologyElement) -> HomologyElement:
    """The BV operator: ``[h] -> level(h) * ~[h]`` for ``[h] != [e]``, zero on everything else."""
    G = SurfaceGroup(x.genus)
    out = {c: n * G.level(c.word) for c, n in x.deg0.items() if not c.is_identity}
    return HomologyElement(x.genus, deg1_tilde=out)


def _exact_div(n: int, d: int, what: str) -> int:
    q, r = divmod(n, d)
    if r:
        raise IntegralityError(f"{what}: {n} is not divisible by {d}")
    return q


def _surface_times_tilde(G: SurfaceGroup, v: Sequence[int], c: ConjugacyClass, left: bool) -> int:
    root, level = G.primitive_root(c.word)
    h = G.abelianize(c.word)
    pairing = G.intersection_pairing(v, h) if left else G.intersection_pairing(h, v)
    return _exact_div(pairing, level, f"pairing with ~[{c}]")


def _deg1_product(x: HomologyElement, y: HomologyElement, budget: int | None) -> HomologyElement:
    g = x.genus
    G = SurfaceGroup(g)
    e = ConjugacyClass(g, ())
    deg0: dict[ConjugacyClass, int] = {}

    def add(c: ConjugacyClass, n: int) -> None:
        deg0[c] = deg0.get(c, 0) + n

    if any(x.deg1_e) and any(y.deg1_e):
        add(e, G.intersection_pairing(x.deg1_e, y.deg1_e))
    if any(x.deg1_e):
        for c, n in y.deg1_tilde.items():
            add(c, n * _surface_times_tilde(G, x.deg1_e, c, left=True))
    if any(y.deg1_e):
        for c, n in x.deg1_tilde.items():
            add(c, n * _surface_times_tilde(G, y.deg1_e, c, left=False))
    for c1, n1 in x.deg1_tilde.items():
        l1 = G.level(c1.word)
        for c2, n2 in y.deg1_tilde.items():
            l2 = G.level(c2.word)
            bracket = goldman_bracket(c1, c2, budget)
            for c, n in bracket.terms.items():
                add(c, n1 * n2 * _exact_div(n, l1 * l2, f"bracket [{c1}, {c2}] at [{c}]"))
    return HomologyElement(g, deg0=deg0)


def product(x: HomologyElement, y: HomologyElement, budget: int | None = None) -> HomologyElement:
    """The string product, of degree -2, extended bilinearly.

    ``E`` is a two-sided unit; surface classes multiply by the intersection
    form into ``[e]``; ``<v> * ~[h] = <v, h> / level(h) * [h]`` and
    ``~[h] * <v> = <h, v> / level(h) * [h]``; ``~[h1] * ~[h2]`` is the Goldman
    bracket divided by ``level(h1) * level(h2)``.  Everything else lands in
    negative degree and vanishes.  Raises :class:`IntegralityError` if a
    division is not exact.
    """
    if x.genus != y.genus:
        raise ValueError("elements belong to different genera")
    out = y.scaled(x.deg2)
    rest = x - x.degree_part(2)
    out = out + rest.scaled(y.deg2)
    return out + _deg1_product(x, y, budget)


def coproduct(x: HomologyElement) -> CoproductResult:
    """The string coproduct: ``E -> (2 - 2g) [e] (x) [e]``, zero on degrees 0 and 1."""
    e = ConjugacyClass(x.genus, ())
    return CoproductResult(x.genus, {(e, e): (2 - 2 * x.genus) * x.deg2})


def basis(classes: Sequence[ConjugacyClass], genus: int) -> list[HomologyElement]:
    """``E``, the surface classes, and ``[h]`` and (for nontrivial ``h``) ``~[h]`` for the given classes."""
    out = [HomologyElement.unit(genus)]
    for i in range(2 * genus):
        v = [0] * (2 * genus)
        v[i] = 1
        out.append(HomologyElement.surface_class(genus, v))
    for c in classes:
        out.append(HomologyElement.point(c))
        if not c.is_identity:
            out.append(HomologyElement.tilde(c))
    return out


# -- text syntax ------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<sign>[+-])\s*)?(?:(?P<coeff>\d+)\s*\*\s*)?")


def parse_element(text: str, genus: int) -> HomologyElement:
    """Parse an element in the text syntax above, or in the JSON form."""
    if text.lstrip().startswith("{"):
        try:
            return HomologyElement.from_json(text, genus)
        except (ValueError, KeyError, TypeError) as exc:
            raise ElementSyntaxError(f"bad JSON element: {exc}", 0) from None
    G = SurfaceGroup(genus)
    total = HomologyElement.zero(genus)
    pos = 0
    n = len(text)
    if text.strip() == "0":
        return total
    first = True

    def offset(p: int) -> int:
        return len(text[:p].encode("utf-8"))

    while True:
        m = _TOKEN.match(text, pos)
        if m.group("sign") is None and not first:
            raise ElementSyntaxError("expected '+' or '-'", offset(pos))
        sign = -1 if m.group("sign") == "-" else 1
        coeff = int(m.group("coeff")) if m.group("coeff") else 1
        pos = m.end()
        atom, pos = _parse_atom(G, text, pos, offset)
        total = total + atom.scaled(sign * coeff)
        first = False
        while pos < n and text[pos].isspace():
            pos += 1
        if pos >= n:
            return total


def _parse_atom(G: SurfaceGroup, text: str, pos: int, offset) -> tuple[HomologyElement, int]:
    genus = G.genus
    for name in ("unit", "E"):
        if text.startswith(name, pos):
            return HomologyElement.unit(genus), pos + len(name)
    closers = {"[": "]", "~[": "]", "<": ">"}
    for opener in ("~[", "[", "<"):
        if text.startswith(opener, pos):
            start = pos + len(opener)
            end = text.find(closers[opener], start)
            if end < 0:
                raise ElementSyntaxError(f"missing '{closers[opener]}'", offset(pos))
            try:
                w = G.parse(text[start:end])
            except WordSyntaxError as exc:
                raise ElementSyntaxError(exc.message, offset(start) + exc.offset) from None
            except ValueError as exc:
                raise ElementSyntaxError(str(exc), offset(start)) from None
            if opener == "<":
                return HomologyElement.surface_class(genus, G.abelianize(w)), end + 1
            c = G.canonical_class(w)
            if opener == "[":
                return HomologyElement.point(c), end + 1
            if c.is_identity:
                raise ElementSyntaxError("~[e] is not defined; use <w> for the constant loops", offset(pos))
            return HomologyElement.tilde(c), end + 1
    raise ElementSyntaxError("expected E, unit, [word], ~[word] or <word>", offset(pos))
