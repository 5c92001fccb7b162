"""Built-in corpus of (presentation, surjection, prime) triples.

Used by the self-check command and the acceptance tests: the corpus
spans free groups, the torus and Klein bottle groups, a genus-2 surface
group, the one-relator torsion groups with relator a^p, and a mixed-
torsion example, mapped onto elementary abelian targets (Z_p)^r for
p in {2, 3} with p^r <= 16 and onto the cyclic group Z_4.  All listed
homomorphisms are surjective.
"""

from __future__ import annotations

from dataclasses import dataclass

from .covers import Homomorphism
from .groupring import OrderedGroup, make_cyclic, make_elementary_abelian
from .presentations import Presentation, parse_presentation

__all__ = ["CORPUS", "CorpusItem", "build_item", "build_target"]

FREE_1 = "< a | >"
FREE_2 = "< a, b | >"
FREE_3 = "< a, b, c | >"
TORUS = "< a, b | a b a^-1 b^-1 >"
KLEIN = "< a, b | a b a b^-1 >"
GENUS_2 = "< a, b, c, d | a b a^-1 b^-1 c d c^-1 d^-1 >"
RP2 = "< a | a a >"
Z3_TORSION = "< a | a a a >"
Z2_FREE_PROD_Z = "< a, b | a a >"


@dataclass(frozen=True)
class CorpusItem:
    """One triple: presentation text, coefficient prime, target, images.

    ``target`` is ("ea", p, r) or ("cyclic", n).  Images are coordinate
    tuples for elementary abelian targets and plain element values for
    cyclic ones, so they are independent of any element-order choice.
    """

    name: str
    presentation: str
    p: int
    target: tuple
    images: tuple

    @property
    def target_order(self) -> int:
        kind = self.target[0]
        if kind == "ea":
            return self.target[1] ** self.target[2]
        return self.target[1]


def build_target(item: CorpusItem) -> OrderedGroup:
    kind = item.target[0]
    if kind == "ea":
        return make_elementary_abelian(item.target[1], item.target[2])
    if kind == "cyclic":
        return make_cyclic(item.target[1])
    raise ValueError(f"unknown target kind {kind!r}")


def build_item(item: CorpusItem) -> tuple[Presentation, OrderedGroup, Homomorphism]:
    pres = parse_presentation(item.presentation)
    group = build_target(item)
    if item.target[0] == "ea":
        images = [group.ea_index[c] for c in item.images]
    else:
        images = [v % group.size for v in item.images]
    return pres, group, Homomorphism(pres, group, images)


def _ea(p: int, r: int) -> tuple:
    return ("ea", p, r)


CORPUS: tuple[CorpusItem, ...] = (
    # free groups
    CorpusItem("free1/Z2", FREE_1, 2, _ea(2, 1), ((1,),)),
    CorpusItem("free1/Z3", FREE_1, 3, _ea(3, 1), ((1,),)),
    CorpusItem("free1/Z4", FREE_1, 2, ("cyclic", 4), (1,)),
    CorpusItem("free2/Z2.a", FREE_2, 2, _ea(2, 1), ((1,), (0,))),
    CorpusItem("free2/Z2.ab", FREE_2, 2, _ea(2, 1), ((1,), (1,))),
    CorpusItem("free2/Z2^2", FREE_2, 2, _ea(2, 2), ((1, 0), (0, 1))),
    CorpusItem("free2/Z3", FREE_2, 3, _ea(3, 1), ((1,), (2,))),
    CorpusItem("free2/Z3^2", FREE_2, 3, _ea(3, 2), ((1, 0), (0, 1))),
    CorpusItem("free2/Z4", FREE_2, 2, ("cyclic", 4), (1, 2)),
    CorpusItem("free3/Z2^3", FREE_3, 2, _ea(2, 3), ((1, 0, 0), (0, 1, 0), (0, 0, 1))),
    CorpusItem("free3/Z2^2", FREE_3, 2, _ea(2, 2), ((1, 0), (0, 1), (1, 1))),
    CorpusItem("free3/Z3", FREE_3, 3, _ea(3, 1), ((1,), (1,), (1,))),
    # the plane torus group Z^2
    CorpusItem("torus/Z2", TORUS, 2, _ea(2, 1), ((1,), (0,))),
    CorpusItem("torus/Z2^2", TORUS, 2, _ea(2, 2), ((1, 0), (0, 1))),
    CorpusItem("torus/Z3", TORUS, 3, _ea(3, 1), ((1,), (0,))),
    CorpusItem("torus/Z3^2", TORUS, 3, _ea(3, 2), ((1, 0), (0, 1))),
    CorpusItem("torus/Z4.a", TORUS, 2, ("cyclic", 4), (1, 0)),
    CorpusItem("torus/Z4.mix", TORUS, 2, ("cyclic", 4), (1, 2)),
    # Klein bottle group
    CorpusItem("klein/Z2.a", KLEIN, 2, _ea(2, 1), ((1,), (0,))),
    CorpusItem("klein/Z2.b", KLEIN, 2, _ea(2, 1), ((0,), (1,))),
    CorpusItem("klein/Z2^2", KLEIN, 2, _ea(2, 2), ((1, 0), (0, 1))),
    CorpusItem("klein/Z3", KLEIN, 3, _ea(3, 1), ((0,), (1,))),
    CorpusItem("klein/Z4", KLEIN, 2, ("cyclic", 4), (2, 1)),
    # genus-2 surface group
    CorpusItem("genus2/Z2", GENUS_2, 2, _ea(2, 1), ((1,), (0,), (0,), (0,))),
    CorpusItem("genus2/Z2^2", GENUS_2, 2, _ea(2, 2), ((1, 0), (0, 1), (0, 0), (0, 0))),
    CorpusItem("genus2/Z2^3", GENUS_2, 2, _ea(2, 3),
               ((1, 0, 0), (0, 1, 0), (0, 0, 1), (0, 0, 0))),
    CorpusItem("genus2/Z2^4", GENUS_2, 2, _ea(2, 4),
               ((1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1))),
    CorpusItem("genus2/Z3", GENUS_2, 3, _ea(3, 1), ((1,), (0,), (2,), (0,))),
    CorpusItem("genus2/Z3^2", GENUS_2, 3, _ea(3, 2), ((1, 0), (0, 1), (1, 0), (0, 1))),
    CorpusItem("genus2/Z4", GENUS_2, 2, ("cyclic", 4), (1, 1, 2, 3)),
    # torsion relators a^p
    CorpusItem("rp2/Z2", RP2, 2, _ea(2, 1), ((1,),)),
    CorpusItem("z3tor/Z3", Z3_TORSION, 3, _ea(3, 1), ((1,),)),
    # Z_2 * Z, the deficiency-1 start of the growth iteration
    CorpusItem("z2free/Z2", Z2_FREE_PROD_Z, 2, _ea(2, 1), ((0,), (1,))),
    CorpusItem("z2free/Z2^2", Z2_FREE_PROD_Z, 2, _ea(2, 2), ((1, 0), (0, 1))),
)
