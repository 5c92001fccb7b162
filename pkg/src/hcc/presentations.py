"""Finite group presentations and their 2-complexes.

Words in the free group are kept freely reduced at all times.  From a
presentation we build the mod-p boundary data of its presentation
complex (one vertex, a loop per generator, a disc per relator): the
generator-by-relator exponent-sum matrix, Betti numbers, Euler
characteristic, and the witness deficiency.  The module also rewrites a
presentation so that this boundary matrix becomes diagonal (replaying a
recorded Smith normal form as generator substitutions and relator
multiplications), and produces presentations of finite-index kernels via
Reidemeister-Schreier rewriting along a deterministic Schreier
transversal.

Presentation text grammar::

    presentation := '<' gens '|' rels '>'
    gens := ident (',' ident)*
    rels := word (',' word)* | (nothing)
    word := term+        term := ident ('^' signed-int)?

Exponents other than +-1 expand to repeated letters, e.g.
``< a, b | a b a^-1 b^-1 >``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from . import fpexact
from .fpexact import FpMatrix, check_prime

__all__ = [
    "ComplexSummary",
    "FreeWord",
    "Presentation",
    "PresentationSyntaxError",
    "complex_summary",
    "fox_derivative",
    "normalize_presentation",
    "parse_presentation",
    "reidemeister_schreier",
]


class PresentationSyntaxError(ValueError):
    """Parse failure, carrying 1-based line and column."""

    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{message} (line {line}, column {col})")
        self.line = line
        self.col = col


def _free_reduce(letters: Iterable[tuple[int, int]]) -> tuple[tuple[int, int], ...]:
    out: list[tuple[int, int]] = []
    for g, s in letters:
        if out and out[-1][0] == g and out[-1][1] == -s:
            out.pop()
        else:
            out.append((g, s))
    return tuple(out)


class FreeWord:
    """A freely reduced word: a sequence of (generator index, +-1) letters."""

    __slots__ = ("letters",)

    def __init__(self, letters: Iterable[tuple[int, int]] = ()):
        reduced = _free_reduce(letters)
        for g, s in reduced:
            if g < 0 or s not in (1, -1):
                raise ValueError(f"bad letter ({g}, {s})")
        object.__setattr__(self, "letters", reduced)

    def __setattr__(self, name, value):
        raise AttributeError("FreeWord is immutable")

    @classmethod
    def empty(cls) -> "FreeWord":
        return cls(())

    @classmethod
    def generator(cls, g: int, sign: int = 1) -> "FreeWord":
        return cls(((g, sign),))

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __bool__(self) -> bool:
        return bool(self.letters)

    def __mul__(self, other: "FreeWord") -> "FreeWord":
        return FreeWord(self.letters + other.letters)

    def inverse(self) -> "FreeWord":
        return FreeWord(tuple((g, -s) for g, s in reversed(self.letters)))

    def __pow__(self, n: int) -> "FreeWord":
        if n == 0:
            return FreeWord.empty()
        base = self if n > 0 else self.inverse()
        out = FreeWord.empty()
        for _ in range(abs(n)):
            out = out * base
        return out

    def exponent_sum(self, g: int) -> int:
        return sum(s for gg, s in self.letters if gg == g)

    def max_generator(self) -> int:
        """Largest generator index used, or -1 for the empty word."""
        return max((g for g, _ in self.letters), default=-1)

    def map_letters(self, image: Callable[[int, int], Iterable[tuple[int, int]]]) -> "FreeWord":
        """Substitute each letter by a word; the result is reduced."""
        out: list[tuple[int, int]] = []
        for g, s in self.letters:
            out.extend(image(g, s))
        return FreeWord(out)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FreeWord):
            return NotImplemented
        return self.letters == other.letters

    def __hash__(self) -> int:
        return hash(self.letters)

    def format(self, names: Sequence[str]) -> str:
        if not self.letters:
            return "1"
        return " ".join(n if s == 1 else f"{n}^-1" for n, s in ((names[g], s) for g, s in self.letters))

    def __repr__(self) -> str:
        return f"FreeWord({self.letters})"


_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z_0-9]*")


@dataclass(frozen=True)
class Presentation:
    """Generators plus relator words in the free group on those generators."""

    generator_names: tuple[str, ...]
    relators: tuple[FreeWord, ...]

    def __post_init__(self):
        seen = set()
        for name in self.generator_names:
            if not _IDENT_RE.fullmatch(name):
                raise ValueError(f"bad generator name {name!r}")
            if name in seen:
                raise ValueError(f"duplicate generator name {name!r}")
            seen.add(name)
        n = len(self.generator_names)
        for w in self.relators:
            if w.max_generator() >= n:
                raise ValueError("relator uses an unknown generator index")

    @property
    def n_generators(self) -> int:
        return len(self.generator_names)

    @property
    def n_relators(self) -> int:
        return len(self.relators)

    @property
    def deficiency(self) -> int:
        return self.n_generators - self.n_relators

    def to_text(self) -> str:
        # display form; a relator that reduced to the empty word prints as
        # the conventional "1", which the grammar does not re-parse
        gens = ", ".join(self.generator_names)
        rels = ", ".join(w.format(self.generator_names) for w in self.relators)
        return f"< {gens} | {rels} >" if rels else f"< {gens} | >"

    def __repr__(self) -> str:
        return f"Presentation({self.to_text()})"


_TOKEN_RE = re.compile(
    r"(?P<ws>\s+)|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)|(?P<int>[+-]?[0-9]+)|(?P<sym>[<>|,^])"
)


def _tokenize(text: str) -> list[tuple[str, str, int, int]]:
    tokens = []
    line, col = 1, 1
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise PresentationSyntaxError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        value = m.group()
        if kind != "ws":
            tokens.append((kind, value, line, col))
        newlines = value.count("\n")
        if newlines:
            line += newlines
            col = len(value) - value.rfind("\n")
        else:
            col += len(value)
        pos = m.end()
    tokens.append(("eof", "", line, col))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def take(self, kind: str, value: str | None = None):
        tok = self.tokens[self.pos]
        if tok[0] != kind or (value is not None and tok[1] != value):
            want = value if value is not None else kind
            raise PresentationSyntaxError(f"expected {want!r}, found {tok[1] or 'end of input'!r}", tok[2], tok[3])
        self.pos += 1
        return tok

    def parse(self) -> Presentation:
        self.take("sym", "<")
        names = [self.take("ident")[1]]
        while self.peek()[:2] == ("sym", ","):
            self.take("sym", ",")
            names.append(self.take("ident")[1])
        for i, name in enumerate(names):
            if name in names[:i]:
                tok = self.peek()
                raise PresentationSyntaxError(f"duplicate generator {name!r}", tok[2], tok[3])
        index = {name: i for i, name in enumerate(names)}
        self.take("sym", "|")
        relators: list[FreeWord] = []
        if self.peek()[:2] != ("sym", ">"):
            relators.append(self._word(index))
            while self.peek()[:2] == ("sym", ","):
                self.take("sym", ",")
                relators.append(self._word(index))
        self.take("sym", ">")
        self.take("eof")
        return Presentation(tuple(names), tuple(relators))

    def _word(self, index: dict[str, int]) -> FreeWord:
        letters: list[tuple[int, int]] = []
        saw_term = False
        while self.peek()[0] == "ident":
            kind, name, line, col = self.take("ident")
            if name not in index:
                raise PresentationSyntaxError(f"unknown generator {name!r}", line, col)
            exponent = 1
            if self.peek()[:2] == ("sym", "^"):
                self.take("sym", "^")
                tok = self.take("int")
                exponent = int(tok[1])
            sign = 1 if exponent >= 0 else -1
            letters.extend(((index[name], sign),) * abs(exponent))
            saw_term = True
        if not saw_term:
            tok = self.peek()
            raise PresentationSyntaxError("expected a word", tok[2], tok[3])
        return FreeWord(letters)


def parse_presentation(text: str) -> Presentation:
    """Parse the presentation grammar; raises PresentationSyntaxError with
    line/column on malformed input."""
    return _Parser(text).parse()


def fox_derivative(word: FreeWord, j: int) -> tuple[tuple[int, FreeWord], ...]:
    """Free derivative with respect to generator j, as (sign, prefix) terms.

    Satisfies d(uv) = du + u dv with d(a_j) = 1 and d(a_j^-1) = -a_j^-1:
    a positive occurrence of a_j contributes + (prefix before it); a
    negative occurrence contributes - (prefix including it).
    """
    terms: list[tuple[int, FreeWord]] = []
    prefix = FreeWord.empty()
    for g, s in word.letters:
        if s == 1:
            if g == j:
                terms.append((1, prefix))
            prefix = prefix * FreeWord.generator(g, 1)
        else:
            prefix = prefix * FreeWord.generator(g, -1)
            if g == j:
                terms.append((-1, prefix))
    return tuple(terms)


@dataclass(frozen=True)
class ComplexSummary:
    """Mod-p homology data of the presentation complex.

    ``boundary`` is the n x m matrix whose (j, i) entry is the exponent
    sum of generator j in relator i, reduced mod p.  With one vertex the
    degree-1 boundary map vanishes, so b1 = n - rank and b2 = m - rank.
    """

    p: int
    boundary: FpMatrix
    b0: int
    b1: int
    b2: int
    euler: int
    rank: int

    @property
    def n_generators(self) -> int:
        return self.boundary.rows

    @property
    def n_relators(self) -> int:
        return self.boundary.cols

    @property
    def hrk(self) -> int:
        return self.b0 + self.b1 + self.b2


def complex_summary(pres: Presentation, p: int) -> ComplexSummary:
    check_prime(p)
    n, m = pres.n_generators, pres.n_relators
    a = np.zeros((n, m), dtype=np.int64)
    for i, rel in enumerate(pres.relators):
        for g, s in rel.letters:
            a[g, i] += s
    boundary = FpMatrix(n, m, (a % p).ravel(), p)
    r = fpexact.rank(boundary)
    b1 = n - r
    b2 = m - r
    euler = 1 - n + m
    assert euler == 1 - b1 + b2
    return ComplexSummary(p=p, boundary=boundary, b0=1, b1=b1, b2=b2, euler=euler, rank=r)


def normalize_presentation(pres: Presentation, p: int) -> Presentation:
    """Rewrite the presentation so its boundary matrix is diagonal.

    The recorded Smith normal form of the boundary matrix is replayed on
    the presentation itself: column operations act on relators (multiply
    one relator by a power of another, or swap two relators), row
    operations as generator substitutions (a_i -> a_i a_j^q, or swap two
    generators in every relator).  Both preserve the normal closure, so
    the group is unchanged, and generator and relator counts are kept.
    """
    summary = complex_summary(pres, p)
    snf = fpexact.smith_normal_form(summary.boundary)
    relators = list(pres.relators)
    for op in snf.right_ops:
        if op.kind == "S":
            relators[op.i], relators[op.j] = relators[op.j], relators[op.i]
        else:
            relators[op.i] = relators[op.i] * relators[op.j] ** op.q
    for op in snf.left_ops:
        if op.kind == "S":
            i, j = op.i, op.j

            def swap(g: int, s: int, i=i, j=j):
                if g == i:
                    return ((j, s),)
                if g == j:
                    return ((i, s),)
                return ((g, s),)

            relators = [w.map_letters(swap) for w in relators]
        else:
            i, j, q = op.i, op.j, op.q
            positive = ((i, 1),) + ((j, 1),) * q
            negative = tuple(reversed([(g, -s) for g, s in positive]))

            def subst(g: int, s: int, i=i, positive=positive, negative=negative):
                if g != i:
                    return ((g, s),)
                return positive if s == 1 else negative

            relators = [w.map_letters(subst) for w in relators]
    result = Presentation(pres.generator_names, tuple(relators))
    expected = fpexact.block_diagonal(snf.diagonal, summary.boundary.rows, summary.boundary.cols, p)
    if complex_summary(result, p).boundary != expected:
        raise RuntimeError("normalization replay does not match the recorded normal form")
    return result


def _letter_order(n: int) -> tuple[tuple[int, int], ...]:
    # positive letters in generator order, then the inverse letters
    return tuple((j, 1) for j in range(n)) + tuple((j, -1) for j in range(n))


def reidemeister_schreier(pres: Presentation, hom) -> Presentation:
    """Presentation of the kernel of ``hom`` by Schreier rewriting.

    Cosets are the elements of the image of ``hom``; representatives come
    from a breadth-first search over letters (all positive letters in
    generator order, then the inverses), so they are shortlex minimal for
    that alphabet order and prefix closed.  Kernel generators are the
    nontrivial Schreier elements rep(c) a_j rep(c a_j)^{-1}, named
    ``<generator>_<coset>``; each relator contributes one rewritten copy
    per coset (relator-major order).
    """
    group = hom.group
    if hom.source is not pres and hom.source.to_text() != pres.to_text():
        raise ValueError("homomorphism was built from a different presentation")
    n = pres.n_generators
    images = hom.images
    inverse_images = tuple(group.inverse(h) for h in images)

    def step(elt: int, letter: tuple[int, int]) -> int:
        j, s = letter
        return group.op(elt, images[j] if s == 1 else inverse_images[j])

    # breadth-first transversal over the image subgroup
    start = group.identity_index
    coset_of = {start: 0}
    reps: list[FreeWord] = [FreeWord.empty()]
    elements = [start]
    queue = [0]
    letters = _letter_order(n)
    while queue:
        c = queue.pop(0)
        for letter in letters:
            target = step(elements[c], letter)
            if target not in coset_of:
                coset_of[target] = len(elements)
                elements.append(target)
                reps.append(reps[c] * FreeWord.generator(*letter))
                queue.append(len(elements) - 1)
    index = len(elements)

    def coset_act(c: int, letter: tuple[int, int]) -> int:
        return coset_of[step(elements[c], letter)]

    # Schreier generators: (coset, generator) pairs whose element is nontrivial
    gen_id: dict[tuple[int, int], int] = {}
    names: list[str] = []
    for c in range(index):
        for j in range(n):
            word = reps[c] * FreeWord.generator(j, 1) * reps[coset_act(c, (j, 1))].inverse()
            if word:
                gen_id[(c, j)] = len(names)
                names.append(f"{pres.generator_names[j]}_{c}")

    def rewrite(word: FreeWord, c: int) -> FreeWord:
        out: list[tuple[int, int]] = []
        for j, s in word.letters:
            if s == 1:
                key = (c, j)
                if key in gen_id:
                    out.append((gen_id[key], 1))
                c = coset_act(c, (j, 1))
            else:
                c = coset_act(c, (j, -1))
                key = (c, j)
                if key in gen_id:
                    out.append((gen_id[key], -1))
        return FreeWord(out)

    relators = tuple(
        rewrite(rel, c) for rel in pres.relators for c in range(index)
    )
    return Presentation(tuple(names), relators)
