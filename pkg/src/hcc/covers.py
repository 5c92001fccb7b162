"""Chain complexes of finite regular covers of presentation complexes.

A homomorphism from a presentation's free group onto (a subgroup of) a
finite ordered group H determines a regular cover of the presentation
complex whose cells are indexed by H.  The degree-2 boundary map is a
grid of |H| x |H| blocks, one per (relator, generator) pair; each block
is equivariant (row g equals delta_g convolved with the identity row),
so it is determined by a single seed row, which is the image of the Fox
derivative of the relator under the homomorphism.  The degree-1
boundary sends the 1-cell (g, generator j) to its endpoint difference.
Betti numbers come from rank-nullity on the two boundary matrices.

Homomorphism text format, one line per generator::

    name -> (c1,...,cr)     # coordinates, elementary abelian targets
    name -> k               # element index, any table-defined group
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import fpexact, groupring
from .errors import FalsificationError
from .fpexact import FpMatrix, check_entry_count, check_prime
from .groupring import GroupRingElement, OrderedGroup
from .presentations import ComplexSummary, FreeWord, Presentation, complex_summary, fox_derivative

__all__ = [
    "CoverComplex",
    "EquivariantBlock",
    "HcVerdict",
    "Homomorphism",
    "IncompatibleHomomorphismError",
    "build_cover",
    "check_balance_pattern",
    "hc_verdict",
    "parse_homomorphism",
]


class IncompatibleHomomorphismError(ValueError):
    """Some relator does not map to the identity of the target group."""

    def __init__(self, relator_index: int, image_index: int, image_name: str):
        super().__init__(
            f"relator {relator_index} maps to element {image_name!r} "
            f"(index {image_index}), not the identity"
        )
        self.relator_index = relator_index
        self.image_index = image_index


class Homomorphism:
    """Generator images defining a map from the presented group to a finite group.

    Compatibility (every relator maps to the identity) is enforced at
    construction; ``surjective`` records whether the images generate the
    whole target.
    """

    __slots__ = ("source", "group", "images", "surjective")

    def __init__(self, source: Presentation, group: OrderedGroup, images: Sequence[int]):
        images = tuple(int(x) for x in images)
        if len(images) != source.n_generators:
            raise ValueError(f"need {source.n_generators} images, got {len(images)}")
        for x in images:
            if not 0 <= x < group.size:
                raise ValueError(f"image index {x} out of range for group of order {group.size}")
        object.__setattr__(self, "source", source)
        object.__setattr__(self, "group", group)
        object.__setattr__(self, "images", images)
        for i, rel in enumerate(source.relators):
            img = self._word_image(rel)
            if img != group.identity_index:
                raise IncompatibleHomomorphismError(i, img, group.element_names[img])
        object.__setattr__(
            self, "surjective", len(group.closure(images)) == group.size
        )

    def __setattr__(self, name, value):
        raise AttributeError("Homomorphism is immutable")

    def _word_image(self, word: FreeWord) -> int:
        g = self.group
        out = g.identity_index
        for j, s in word.letters:
            h = self.images[j] if s == 1 else g.inverse(self.images[j])
            out = g.op(out, h)
        return out

    def word_image(self, word: FreeWord) -> int:
        """Index of the image of a free word in the target group."""
        return self._word_image(word)

    def __repr__(self) -> str:
        pairs = ", ".join(
            f"{n}->{self.group.element_names[h]}"
            for n, h in zip(self.source.generator_names, self.images)
        )
        return f"Homomorphism({pairs} : {self.group.label})"


def parse_homomorphism(text: str, pres: Presentation, group: OrderedGroup) -> Homomorphism:
    """Parse the homomorphism text format against a presentation and target."""
    assignments: dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "->" not in line:
            raise ValueError(f"line {lineno}: expected 'name -> image'")
        name, _, rhs = line.partition("->")
        name = name.strip()
        rhs = rhs.strip()
        if name not in pres.generator_names:
            raise ValueError(f"line {lineno}: unknown generator {name!r}")
        if name in assignments:
            raise ValueError(f"line {lineno}: generator {name!r} assigned twice")
        if rhs.startswith("("):
            if not rhs.endswith(")"):
                raise ValueError(f"line {lineno}: unterminated coordinate tuple")
            if group.ea_index is None:
                raise ValueError(
                    f"line {lineno}: coordinate form needs an elementary abelian target"
                )
            try:
                coords = tuple(int(x) for x in rhs[1:-1].split(","))
            except ValueError:
                raise ValueError(f"line {lineno}: bad coordinates {rhs!r}") from None
            if coords not in group.ea_index:
                raise ValueError(f"line {lineno}: coordinates {coords} not in the target")
            assignments[name] = group.ea_index[coords]
        else:
            try:
                k = int(rhs)
            except ValueError:
                raise ValueError(f"line {lineno}: bad element index {rhs!r}") from None
            assignments[name] = k
    missing = [n for n in pres.generator_names if n not in assignments]
    if missing:
        raise ValueError(f"no image given for generator(s): {', '.join(missing)}")
    return Homomorphism(pres, group, [assignments[n] for n in pres.generator_names])


class EquivariantBlock:
    """An |H| x |H| matrix determined by one seed row: row g is
    delta_g * seed."""

    __slots__ = ("group", "p", "seed_row")

    def __init__(self, group: OrderedGroup, p: int, seed_row: GroupRingElement):
        same_group = seed_row.group is group or seed_row.group.table_hash == group.table_hash
        if not same_group or seed_row.p != p:
            raise ValueError("seed row must live in F_p[group]")
        object.__setattr__(self, "group", group)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "seed_row", seed_row)

    def __setattr__(self, name, value):
        raise AttributeError("EquivariantBlock is immutable")

    def row(self, g: int) -> GroupRingElement:
        return groupring.ring_mul(GroupRingElement.delta(self.group, self.p, g), self.seed_row)

    def materialize(self) -> np.ndarray:
        n = self.group.size
        out = np.zeros((n, n), dtype=np.int64)
        rows = np.arange(n)[:, None]
        out[rows, self.group.mult] = self.seed_row.coeffs[None, :]
        return out

    def matrix(self) -> FpMatrix:
        return FpMatrix(self.group.size, self.group.size, self.materialize().ravel(), self.p)

    @property
    def balanced(self) -> bool:
        return groupring.is_balanced(self.seed_row)


@dataclass(frozen=True)
class CoverComplex:
    """The three-term mod-p chain complex of a finite regular cover."""

    hom: Homomorphism
    p: int
    blocks: tuple[tuple[EquivariantBlock, ...], ...]  # [relator][generator]
    d2: FpMatrix  # |H|m x |H|n
    d1: FpMatrix  # |H|n x |H|
    b0: int
    b1: int
    b2: int
    hrk: int
    euler: int
    base: ComplexSummary = field(repr=False)

    @property
    def group(self) -> OrderedGroup:
        return self.hom.group


def build_cover(pres: Presentation, hom: Homomorphism, p: int) -> CoverComplex:
    """Assemble the cover's chain complex and compute its Betti numbers."""
    check_prime(p)
    if hom.source is not pres and hom.source.to_text() != pres.to_text():
        raise ValueError("homomorphism was built from a different presentation")
    group = hom.group
    H = group.size
    n, m = pres.n_generators, pres.n_relators
    check_entry_count(H * m * H * n, "degree-2 boundary matrix")
    check_entry_count(H * n * H, "degree-1 boundary matrix")

    seeds: list[list[GroupRingElement]] = []
    for rel in pres.relators:
        row = []
        for j in range(n):
            coeffs = np.zeros(H, dtype=np.int64)
            for sign, prefix in fox_derivative(rel, j):
                coeffs[hom.word_image(prefix)] += sign
            row.append(GroupRingElement(group, p, coeffs))
        seeds.append(row)
    blocks = tuple(
        tuple(EquivariantBlock(group, p, seeds[i][j]) for j in range(n)) for i in range(m)
    )

    d2_arr = np.zeros((H * m, H * n), dtype=np.int64)
    for i in range(m):
        for j in range(n):
            d2_arr[i * H : (i + 1) * H, j * H : (j + 1) * H] = blocks[i][j].materialize()
    d2 = FpMatrix(H * m, H * n, d2_arr.ravel(), p)

    d1_arr = np.zeros((H * n, H), dtype=np.int64)
    rows = np.arange(H)
    for j in range(n):
        img = hom.images[j]
        if img != group.identity_index:
            d1_arr[j * H + rows, group.mult[rows, img]] += 1
            d1_arr[j * H + rows, rows] -= 1
    d1 = FpMatrix(H * n, H, (d1_arr % p).ravel(), p)

    if m and not (d2 @ d1).is_zero():
        raise RuntimeError("boundary maps do not compose to zero")

    r2 = fpexact.rank(d2)
    r1 = fpexact.rank(d1)
    b2 = H * m - r2
    b1 = H * n - r2 - r1
    b0 = H - r1
    euler = b0 - b1 + b2
    if euler != H * (1 - n + m):
        raise RuntimeError("Euler characteristic is not multiplicative over the cover")
    if b0 * len(group.closure(hom.images)) != H:
        raise RuntimeError("component count does not match the index of the image")
    return CoverComplex(
        hom=hom,
        p=p,
        blocks=blocks,
        d2=d2,
        d1=d1,
        b0=b0,
        b1=b1,
        b2=b2,
        hrk=b0 + b1 + b2,
        euler=euler,
        base=complex_summary(pres, p),
    )


def check_balance_pattern(cover: CoverComplex) -> tuple[tuple[bool, ...], ...]:
    """Per-block balance grid: entry (i, j) is True iff block (i, j) is
    balanced, i.e. the exponent sum of generator j in relator i vanishes
    mod p.  Over a presentation whose boundary matrix is diagonal, the
    unbalanced blocks sit exactly on the leading diagonal."""
    return tuple(tuple(block.balanced for block in row) for row in cover.blocks)


@dataclass(frozen=True)
class HcVerdict:
    """Outcome of the total-Betti-number test hrk >= 2^r for an
    elementary abelian deck group of rank r."""

    r: int
    hrk: int
    threshold: int
    passed: bool
    equality: bool
    connected: bool
    base_betti: tuple[int, int, int]
    cover_betti: tuple[int, int, int]
    case: str | None
    unclassified: bool

    def raise_if_falsifying(self) -> None:
        if not self.passed or self.unclassified:
            raise FalsificationError(
                "total Betti number verdict violated",
                payload={
                    "r": self.r,
                    "hrk": self.hrk,
                    "threshold": self.threshold,
                    "base_betti": list(self.base_betti),
                    "cover_betti": list(self.cover_betti),
                    "passed": self.passed,
                    "unclassified": self.unclassified,
                },
            )


_EQUALITY_CASES = (
    # (case, r, p restriction, base (b0,b1,b2), cover (b0,b1,b2))
    ("a", 1, None, (1, 1, 0), (1, 1, 0)),
    ("b", 1, 2, (1, 1, 1), (1, 0, 1)),
    ("c", 2, None, (1, 2, 1), (1, 2, 1)),
)


def hc_verdict(cover: CoverComplex) -> HcVerdict:
    """Check hrk >= 2^r and classify connected equality cases.

    Requires the deck group to be elementary abelian of exponent equal to
    the coefficient prime.  A connected cover attaining equality must
    match one of three Betti profiles (circle-like, projective-plane
    covered by sphere at p = 2, torus-like); anything else is flagged
    ``unclassified``, which is a falsification event.
    """
    ea = cover.group.is_elementary_abelian()
    if ea is None:
        raise ValueError("verdict requires an elementary abelian deck group")
    p_group, r = ea
    if p_group != cover.p:
        raise ValueError(
            f"coefficient prime {cover.p} must match the deck group exponent {p_group}"
        )
    threshold = 2**r
    passed = cover.hrk >= threshold
    equality = cover.hrk == threshold
    connected = cover.b0 == 1
    base = (cover.base.b0, cover.base.b1, cover.base.b2)
    betti = (cover.b0, cover.b1, cover.b2)
    case = None
    unclassified = False
    if equality and connected:
        for name, case_r, case_p, base_profile, cover_profile in _EQUALITY_CASES:
            if r == case_r and (case_p is None or cover.p == case_p):
                if base == base_profile and betti == cover_profile:
                    case = name
                    break
        unclassified = case is None
    return HcVerdict(
        r=r,
        hrk=cover.hrk,
        threshold=threshold,
        passed=passed,
        equality=equality,
        connected=connected,
        base_betti=base,
        cover_betti=betti,
        case=case,
        unclassified=unclassified,
    )
