"""Words in the genus-g surface group and its word and conjugacy problems.

A word is a tuple of nonzero signed integers.  Letter ``i`` with
``1 <= i <= g`` is the generator ``a_i``, letter ``g + i`` is ``b_i`` and a
negative letter is the inverse of the corresponding generator.  The
relator is ``a_1 b_1 A_1 B_1 ... a_g b_g A_g B_g``.

Every letter occurs exactly once in the relator, so a subword of a cyclic
permutation of the relator (or of its inverse) is determined by its first
letter and a direction.  Dehn's algorithm and the conjugacy closure below
rely on that.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

Word = tuple[int, ...]

__all__ = [
    "ConjugacyClass",
    "LevelUndefinedError",
    "SurfaceGroup",
    "Word",
    "WordSyntaxError",
    "inverse",
    "power",
]


class WordSyntaxError(ValueError):
    """Raised when a word string does not match the word grammar."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.message = message
        self.offset = offset


class LevelUndefinedError(ValueError):
    pass


def inverse(w: Sequence[int]) -> Word:
    return tuple(-x for x in reversed(w))


def power(w: Sequence[int], n: int) -> Word:
    if n < 0:
        return inverse(w) * -n
    return tuple(w) * n


def _free_reduce(w: Iterable[int]) -> Word:
    out: list[int] = []
    for x in w:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def _cyclic_reduce(w: Iterable[int]) -> Word:
    w = _free_reduce(w)
    i, j = 0, len(w) - 1
    while i < j and w[i] == -w[j]:
        i += 1
        j -= 1
    return w[i:j + 1]


_TERM = re.compile(r"([abAB])(\d+)(?:\^([+-]?\d+))?")


@dataclass(frozen=True, order=False)
class ConjugacyClass:
    """A conjugacy class of the surface group, stored by its canonical cyclic word.

    Two instances are equal iff they have the same genus and canonical word.
    The empty word is the class of the identity.
    """

    genus: int
    word: Word

    @property
    def is_identity(self) -> bool:
        return not self.word

    def sort_key(self) -> tuple:
        return (len(self.word), _rank_key(self.genus, self.word))

    def __lt__(self, other: "ConjugacyClass") -> bool:
        return self.sort_key() < other.sort_key()

    def __str__(self) -> str:
        return format_word(self.word, self.genus)

    def __repr__(self) -> str:
        return f"ConjugacyClass({str(self)!r})"


def _rank_key(genus: int, w: Sequence[int]) -> tuple[int, ...]:
    return tuple(_letter_rank(genus, x) for x in w)


def _letter_rank(genus: int, x: int) -> int:
    # a1 < b1 < ... < ag < bg < A1 < B1 < ... < Ag < Bg
    i = abs(x)
    r = 2 * (i - 1) if i <= genus else 2 * (i - genus - 1) + 1
    return r if x > 0 else r + 2 * genus


def format_word(w: Sequence[int], genus: int) -> str:
    """Serialize a word, collapsing runs of a repeated letter into powers."""
    terms = []
    i = 0
    while i < len(w):
        j = i
        while j < len(w) and w[j] == w[i]:
            j += 1
        x = w[i]
        idx = abs(x)
        name = f"a{idx}" if idx <= genus else f"b{idx - genus}"
        if x < 0:
            name = name.upper()
        run = j - i
        terms.append(name if run == 1 else f"{name}^{run}")
        i = j
    return " ".join(terms)


class SurfaceGroup:
    """The fundamental group of the closed oriented surface of genus ``genus``.

    Holds the presentation (relator and its cyclic variants) and implements
    the combinatorial algorithms on words.  Instances are immutable.
    """

    def __init__(self, genus: int):
        if isinstance(genus, bool) or not isinstance(genus, int):
            raise TypeError(f"genus must be an integer, got {genus!r}")
        if genus < 2:
            raise ValueError(f"genus must be at least 2, got {genus}")
        self.genus = genus
        g = genus
        rel: list[int] = []
        for i in range(1, g + 1):
            rel += [i, g + i, -i, -(g + i)]
        self.relator: Word = tuple(rel)
        n = len(rel)
        rel_inv = inverse(rel)
        self.relator_variants: tuple[Word, ...] = tuple(
            r[k:] + r[:k] for r in (self.relator, rel_inv) for k in range(n)
        )
        # the two variants starting with a given letter
        starts: dict[int, list[Word]] = {}
        for v in self.relator_variants:
            starts.setdefault(v[0], []).append(v)
        self._variants_from = {x: tuple(vs) for x, vs in starts.items()}
        self._half = 2 * g

    def __repr__(self) -> str:
        return f"SurfaceGroup(genus={self.genus})"

    def __eq__(self, other) -> bool:
        return isinstance(other, SurfaceGroup) and other.genus == self.genus

    def __hash__(self) -> int:
        return hash(("SurfaceGroup", self.genus))

    @property
    def rank(self) -> int:
        return 2 * self.genus

    @property
    def letters(self) -> Word:
        """All generators and their inverses, in shortlex order."""
        g = self.genus
        pos = [x for i in range(1, g + 1) for x in (i, g + i)]
        return tuple(pos + [-x for x in pos])

    # -- text I/O ---------------------------------------------------------

    def parse(self, text: str) -> Word:
        """Parse ``text`` (e.g. ``"a1 B2^-3"``) into a word without reducing it."""
        letters: list[int] = []
        pos = 0
        n = len(text)
        while pos < n:
            if letters or pos:
                if text[pos] != " ":
                    raise WordSyntaxError(f"expected space, got {text[pos]!r}", _byte_offset(text, pos))
                while pos < n and text[pos] == " ":
                    pos += 1
                if pos == n:
                    break
            m = _TERM.match(text, pos)
            if m is None:
                raise WordSyntaxError(f"expected generator, got {text[pos]!r}", _byte_offset(text, pos))
            kind, idx, exp = m.group(1), int(m.group(2)), m.group(3)
            if not 1 <= idx <= self.genus:
                raise WordSyntaxError(
                    f"generator index {idx} out of range 1..{self.genus}", _byte_offset(text, m.start(2))
                )
            x = idx if kind in "aA" else self.genus + idx
            if kind.isupper():
                x = -x
            k = int(exp) if exp is not None else 1
            letters.extend([x] * k if k >= 0 else [-x] * -k)
            pos = m.end()
        return tuple(letters)

    def format(self, w: Sequence[int]) -> str:
        return format_word(w, self.genus)

    # -- reduction ----------------------------------------------------------

    def free_reduce(self, w: Sequence[int]) -> Word:
        return _free_reduce(w)

    def _match(self, w: Sequence[int], i: int, v: Word, limit: int, cyclic: bool = False) -> int:
        n = len(w)
        m = 0
        while m < limit:
            j = i + m
            if cyclic:
                j %= n
            elif j >= n:
                break
            if w[j] != v[m]:
                break
            m += 1
        return m

    def dehn_reduce(self, w: Sequence[int]) -> Word:
        """Dehn's algorithm: shorten subwords longer than half a relator."""
        return _dehn(self, tuple(w))

    def is_identity(self, w: Sequence[int]) -> bool:
        return not self.dehn_reduce(w)

    def cyclic_dehn_reduce(self, w: Sequence[int]) -> Word:
        """Cyclically reduce and apply Dehn's algorithm to the cyclic word."""
        return _cyclic_dehn(self, tuple(w))

    # -- conjugacy ----------------------------------------------------------

    def canonical_class(self, w: Sequence[int]) -> ConjugacyClass:
        return ConjugacyClass(self.genus, _canonical(self, tuple(w)))

    def conjugacy_class(self, text: str) -> ConjugacyClass:
        return self.canonical_class(self.parse(text))

    def are_conjugate(self, w1: Sequence[int], w2: Sequence[int]) -> bool:
        return self.canonical_class(w1) == self.canonical_class(w2)

    def minimal_conjugates(self, w: Sequence[int]) -> frozenset[Word]:
        """Cyclic words of minimal length in the class of ``w``, each rotated to shortlex-least form."""
        red = _cyclic_dehn(self, tuple(w))
        if not red:
            return frozenset([()])
        return _closure(self, red)

    def primitive_root(self, w: Sequence[int]) -> tuple[Word, int]:
        """Return ``(root, level)`` with ``root**level`` conjugate to ``w`` and level maximal.

        The root is the canonical word of its class.
        """
        cls = self.canonical_class(w)
        if cls.is_identity:
            raise LevelUndefinedError("level undefined for e")
        return _primitive_root(self, cls.word)

    def level(self, w: Sequence[int]) -> int:
        return self.primitive_root(w)[1]

    # -- homology -----------------------------------------------------------

    def abelianize(self, w: Sequence[int]) -> tuple[int, ...]:
        """Exponent sums, ordered as the coefficients of A_1..A_g, B_1..B_g."""
        v = [0] * self.rank
        for x in w:
            v[abs(x) - 1] += 1 if x > 0 else -1
        return tuple(v)

    def intersection_pairing(self, u: Sequence[int], v: Sequence[int]) -> int:
        """Symplectic pairing on H_1 with <A_i, B_j> = delta_ij and <A_i, A_j> = <B_i, B_j> = 0."""
        g = self.genus
        if len(u) != 2 * g or len(v) != 2 * g:
            raise ValueError(f"homology vectors must have length {2 * g}, got {len(u)} and {len(v)}")
        return sum(u[i] * v[g + i] - u[g + i] * v[i] for i in range(g))


def _byte_offset(text: str, pos: int) -> int:
    return len(text[:pos].encode("utf-8"))


# The algorithms below are module-level so that results can be memoized on
# (group, word); SurfaceGroup hashes by genus.


@lru_cache(maxsize=1 << 16)
def _dehn(G: SurfaceGroup, w: Word) -> Word:
    half = G._half
    full = 2 * half
    cur = list(_free_reduce(w))
    start = 0
    while True:
        hit = None
        for i in range(start, len(cur)):
            for v in G._variants_from[cur[i]]:
                m = G._match(cur, i, v, full)
                if m > half:
                    hit = (i, v, m)
                    break
            if hit:
                break
        if hit is None:
            return tuple(cur)
        i, v, m = hit
        repl = inverse(v[m:])
        new = list(_free_reduce(cur[:i] + list(repl) + cur[i + m:]))
        # free cancellation may eat into the prefix; new long matches must
        # overlap the part that changed
        keep = 0
        while keep < min(i, len(new)) and new[keep] == cur[keep]:
            keep += 1
        cur = new
        start = max(0, keep - full)


@lru_cache(maxsize=1 << 16)
def _cyclic_dehn(G: SurfaceGroup, w: Word) -> Word:
    half = G._half
    full = 2 * half
    cur = _cyclic_reduce(w)
    while cur:
        n = len(cur)
        hit = None
        for i in range(n):
            for v in G._variants_from[cur[i]]:
                m = G._match(cur, i, v, min(n, full), cyclic=True)
                if m > half:
                    hit = (i, v, m)
                    break
            if hit:
                break
        if hit is None:
            break
        i, v, m = hit
        rot = cur[i:] + cur[:i]
        cur = _cyclic_reduce(inverse(v[m:]) + rot[m:])
    return cur


def _min_rotation(G: SurfaceGroup, w: Word) -> Word:
    n = len(w)
    ranks = _rank_key(G.genus, w)
    best = min(range(n), key=lambda k: ranks[k:] + ranks[:k])
    return w[best:] + w[:best]


def _ladder_moves(G: SurfaceGroup, u: Word) -> Iterator[Word]:
    """Cyclic words obtained from ``u`` by replacing one ladder of relator regions.

    Two geodesic cyclic words of one conjugacy class bound an annulus made
    of a single layer of relator regions.  Walking along ``u``, a region
    reads ``alpha p beta^-1 q^-1`` around its boundary: ``alpha`` lies on
    ``u``, ``beta`` on the other word, and the rungs ``q`` (incoming) and
    ``p`` (outgoing) are pieces, i.e. single letters or empty.  A chain of
    regions joined by nonempty rungs is either an open ladder (empty rungs at
    both ends; a half-relator swap is the one-region case) or a closed layer
    running once around the word.  Only replacements that do not lengthen
    the word are produced.
    """
    n = len(u)
    half = G._half

    def walk(r: Word, pos: int, q: int | None, out: list[int], excess: int, closed: int | None):
        for v in G._variants_from[r[pos]]:
            top = G._match(r, pos, v, min(half, n - pos))
            for a in range(1, top + 1):
                tail = v[a:]
                if q is not None:
                    if tail[-1] != -q:
                        continue
                    tail = tail[:-1]
                for plen in (0, 1):
                    rest = tail[plen:]
                    if not rest or len(rest) > half:
                        continue
                    beta = inverse(rest)
                    p = tail[0] if plen else None
                    exc = excess + len(beta) - a
                    npos = pos + a
                    if p is None:
                        if closed is None and exc <= 0:
                            yield tuple(out) + beta + r[npos:]
                    elif npos == n:
                        if closed is not None and p == closed and exc <= 0:
                            yield tuple(out) + beta
                    elif exc <= 2 * ((n - npos) // (half - 1) + 1):
                        yield from walk(r, npos, p, out + list(beta), exc, closed)

    for i in range(n):
        r = u[i:] + u[:i]
        yield from walk(r, 0, None, [], 0, None)
        for q0 in {-v[-1] for v in G._variants_from[r[0]]}:
            yield from walk(r, 0, q0, [], 0, q0)


# closure sets shared by all their members, keyed by (genus, least rotation)
_CLOSURES: dict[tuple[int, Word], frozenset[Word]] = {}
_CLOSURES_MAX = 1 << 18


def _closure(G: SurfaceGroup, w: Word) -> frozenset[Word]:
    """All minimal-length cyclic words conjugate to ``w``, each in least rotation.

    ``w`` must be cyclically Dehn-reduced and nonempty.  The search follows
    rotations and ladder replacements (see :func:`_ladder_moves`); if a
    replacement produces a shorter word the search restarts from it, so the
    result contains words of a single length.
    """
    start = _min_rotation(G, w)
    hit = _CLOSURES.get((G.genus, start))
    if hit is not None:
        return hit
    seen = {start}
    stack = [start]
    while stack:
        u = stack.pop()
        n = len(u)
        for cand in _ladder_moves(G, u):
            new = _cyclic_dehn(G, cand)
            if len(new) < n:
                if not new:
                    return frozenset([()])
                return _closure(G, new)
            key = _min_rotation(G, new)
            if key not in seen:
                seen.add(key)
                stack.append(key)
    out = frozenset(seen)
    if len(_CLOSURES) + len(out) > _CLOSURES_MAX:
        _CLOSURES.clear()
    for u in out:
        _CLOSURES[(G.genus, u)] = out
    return out


@lru_cache(maxsize=1 << 16)
def _canonical(G: SurfaceGroup, w: Word) -> Word:
    red = _cyclic_dehn(G, w)
    if not red:
        return ()
    members = _closure(G, red)
    if members == frozenset([()]):
        return ()
    return min(members, key=lambda u: (len(u), _rank_key(G.genus, u)))


def _primitive_root(G: SurfaceGroup, canon: Word) -> tuple[Word, int]:
    target = ConjugacyClass(G.genus, canon)
    best_root, best_level = canon, 1
    n = len(canon)
    for u in _closure(G, canon):
        for d in range(1, n // 2 + 1):
            if n % d or n // d <= best_level:
                continue
            if u == u[:d] * (n // d):
                k, lev = u[:d], n // d
                if ConjugacyClass(G.genus, _canonical(G, power(k, lev))) == target:
                    best_root, best_level = k, lev
                break
    return _canonical(G, best_root), best_level
