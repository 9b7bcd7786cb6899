"""Central colored Cayley graphs, Cayley schemes, and the principal section.

A colored Cayley graph is a partition of the group with class 0 = {identity};
the arc (g, h) carries the color of h*g^-1.  Centrality (classes closed under
conjugation) makes both right and left translations color automorphisms.

The principal section of the scheme's automorphism group is computed without
the group itself: the direct-sum test over coset indicator closures decides
the symmetric case and yields L = U as the largest such subgroup; otherwise
L is the socle and U is the smallest normal subgroup over the socle whose
one-sided partial translations preserve every basis relation.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .coherent import CoherentConfiguration, is_boxplus_trivial, wl_closure
from .errors import InternalError, InvalidInputError
from .group import (
    ClassPartition,
    FiniteGroup,
    Subgroup,
    conjugacy_classes,
    greedy_generators,
    is_almost_simple,
    socle,
    subgroups_over_socle,
)


@dataclass
class ColorCayleyGraph:
    """A Cayley partition of a group plus its arc coloring."""

    group: FiniteGroup
    partition: ClassPartition

    def __post_init__(self):
        G, part = self.group, self.partition
        if part.classes[0] != (0,):
            raise InvalidInputError("class 0 must be exactly the identity")
        if part.k < 2:
            raise InvalidInputError("a Cayley partition needs at least 2 classes")
        self.class_of = part.class_of_array(G.order)
        for cls in part.classes:
            mem = set(cls)
            for x in cls:
                for g in range(G.order):
                    if G.conj(x, g) not in mem:
                        raise InvalidInputError("not central: a class is not normal")

    @property
    def k(self) -> int:
        return self.partition.k

    @cached_property
    def arc_colors(self) -> np.ndarray:
        """Color matrix: entry (g, h) is the class index of h * g^-1."""
        G = self.group
        n = G.order
        M = self.class_of[G.table[np.arange(n)[None, :], G.inverse[:, None]]]
        return np.ascontiguousarray(M)

    def color_relation(self, i: int) -> np.ndarray:
        return (self.arc_colors == i).astype(np.int8)

    def relabelled(self, f: Sequence[int]) -> "ColorCayleyGraph":
        """Transport the arc coloring along a bijection and re-read the classes.

        Valid when the result is again a Cayley coloring (e.g. f normalizes
        the translations, as any element of D(2,G) does).
        """
        f = np.asarray(f, dtype=np.int32)
        M = self.arc_colors
        Mf = np.empty_like(M)
        Mf[f[:, None], f[None, :]] = M
        classes: list[list[int]] = [[] for _ in range(self.k)]
        for h in range(self.group.order):
            classes[int(Mf[0, h])].append(h)
        return ColorCayleyGraph(self.group, ClassPartition(tuple(tuple(c) for c in classes)))


def build_central_cayley(G: FiniteGroup, partition: ClassPartition) -> ColorCayleyGraph:
    """Validated central colored Cayley graph over an almost simple group."""
    if not is_almost_simple(G):
        raise InvalidInputError("base group is not almost simple")
    return ColorCayleyGraph(G, partition)


def partition_from_class_merge(G: FiniteGroup, merge: Sequence[Sequence[int]]) -> ClassPartition:
    """Merge conjugacy classes (by their deterministic ids) into Cayley classes."""
    cc = conjugacy_classes(G)
    used = sorted(i for grp in merge for i in grp)
    if used != list(range(cc.k)):
        raise InvalidInputError("merge must cover every class id exactly once")
    if list(merge[0]) != [0]:
        raise InvalidInputError("the first merge group must be exactly class 0")
    classes = []
    for grp in merge:
        members: list[int] = []
        for i in grp:
            members.extend(cc.classes[i])
        classes.append(tuple(sorted(members)))
    return ClassPartition(tuple(classes))


class CayleyScheme:
    """A coherent configuration on a group with right translations as automorphisms."""

    def __init__(self, group: FiniteGroup, base: CoherentConfiguration, verify: bool = True):
        if base.n != group.order:
            raise InvalidInputError("configuration domain must be the group")
        self.group = group
        self.base = base
        if verify:
            self._verify_invariance()

    def _verify_invariance(self):
        G = self.group
        C = self.base.colors
        gens = greedy_generators(G)
        for g in gens:
            rho = G.table[:, g]
            if not np.array_equal(C[rho[:, None], rho[None, :]], C):
                raise InvalidInputError("a right translation breaks a color")
        self.central = True
        for g in gens:
            lam = G.table[g, :]
            if not np.array_equal(C[lam[:, None], lam[None, :]], C):
                self.central = False
                break

    @cached_property
    def point_classes(self) -> list[tuple[int, ...]]:
        """Neighborhoods of the identity per basis relation."""
        row = self.base.colors[0]
        return [
            tuple(int(x) for x in np.nonzero(row == s)[0]) for s in range(self.base.rank)
        ]

    def __repr__(self):
        return f"CayleyScheme(n={self.group.order}, rank={self.base.rank})"


def coset_indicators(G: FiniteGroup, cosets: Sequence[Sequence[int]]) -> list[np.ndarray]:
    """Diagonal indicator relations, one per coset."""
    out = []
    for coset in cosets:
        M = np.zeros((G.order, G.order), dtype=np.int8)
        idx = np.asarray(list(coset), dtype=np.int32)
        M[idx, idx] = 1
        out.append(M)
    return out


def equivalence_matrix(n: int, class_of: np.ndarray) -> np.ndarray:
    return (class_of[:, None] == class_of[None, :]).astype(np.int8)


def coset_class_array(G: FiniteGroup, cosets: Sequence[Sequence[int]]) -> np.ndarray:
    out = np.full(G.order, -1, dtype=np.int32)
    for i, coset in enumerate(cosets):
        out[list(coset)] = i
    if np.any(out < 0):
        raise InternalError("cosets do not cover the group")
    return out


def cayley_wl(gamma: ColorCayleyGraph, extra: Iterable = ()) -> CayleyScheme:
    """Coherent closure of the graph (plus extra right-invariant relations)."""
    seeds = [gamma.arc_colors] + list(extra)
    X = wl_closure(seeds, gamma.group.order)
    scheme = CayleyScheme(gamma.group, X, verify=True)
    if not scheme.central:
        raise InvalidInputError("closure of a central graph lost left-invariance")
    return scheme


def compute_H0(scheme: CayleyScheme) -> list[Subgroup]:
    """Subgroups H over the socle whose coset-indicator closure is a direct
    sum of trivial configurations on the cosets."""
    G = scheme.group
    out = []
    for H in subgroups_over_socle(G, require_normal=False):
        cosets = H.right_cosets()
        seeds = [scheme.base.colors] + coset_indicators(G, cosets)
        X = wl_closure(seeds, G.order)
        if is_boxplus_trivial(X, cosets):
            out.append(H)
    return out


def _partial_translation(G: FiniteGroup, H: Subgroup, h: int, side: str) -> np.ndarray:
    """x -> x*h (or h*x) on H, identity elsewhere."""
    p = np.arange(G.order, dtype=np.int32)
    idx = np.asarray(H.elements, dtype=np.int32)
    if side == "right":
        p[idx] = G.table[idx, h]
    else:
        p[idx] = G.table[h, idx]
    return p


def compute_H1(scheme: CayleyScheme) -> list[Subgroup]:
    """Normal subgroups H over the socle with H* x id outside H inside Aut.

    Tested on subgroup generators only: the one-sided partial translations
    generate the whole partial H*, so generator preservation suffices.
    """
    G = scheme.group
    C = scheme.base.colors
    out = []
    for H in subgroups_over_socle(G, require_normal=True):
        ok = True
        for h in H.generators():
            for side in ("right", "left"):
                p = _partial_translation(G, H, h, side)
                if not np.array_equal(C[p[:, None], p[None, :]], C):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out.append(H)
    return out


@dataclass
class PrincipalSection:
    """The section U/L with its coset partitions and the type tag."""

    kind: str  # "symmetric" | "normal"
    L: Subgroup
    U: Subgroup
    l_cosets: list[tuple[int, ...]]
    u_cosets: list[tuple[int, ...]]
    l_class_of: np.ndarray
    u_class_of: np.ndarray

    @property
    def m(self) -> int:
        """Number of L-cosets (vertices of the quotient graph)."""
        return len(self.l_cosets)

    def __post_init__(self):
        G = self.L.parent
        soc_elems = set(socle(G).elements)
        lset, uset = set(self.L.elements), set(self.U.elements)
        if not (soc_elems <= lset <= uset):
            raise InternalError("section must satisfy soc <= L <= U")
        if not (self.L.is_normal and self.U.is_normal):
            raise InternalError("section subgroups must be normal")
        if self.kind == "symmetric" and self.L.elements != self.U.elements:
            raise InternalError("symmetric type forces L = U")
        if self.kind == "normal" and lset != soc_elems:
            raise InternalError("normal type forces L = soc(G)")


def principal_section(scheme: CayleyScheme) -> PrincipalSection:
    """Type and principal section of the scheme's automorphism group.

    Symmetric type iff the socle passes the direct-sum test; then L = U is
    the largest subgroup passing it.  Otherwise L is the socle and U is the
    smallest subgroup passing the one-sided translation test (which cannot
    be empty: the full group always passes by centrality).
    """
    G = scheme.group
    if not scheme.central:
        raise InvalidInputError("principal section needs a central scheme")
    soc = socle(G)
    h0 = compute_H0(scheme)
    soc_in_h0 = any(H.elements == soc.elements for H in h0)
    if soc_in_h0:
        largest = max(h0, key=lambda H: H.order)
        for H in h0:
            if not set(H.elements) <= set(largest.elements):
                raise InternalError("largest direct-sum subgroup is not unique")
        L = U = largest
        kind = "symmetric"
    else:
        h1 = compute_H1(scheme)
        if not h1:
            raise InternalError("H1 empty")
        smallest = min(h1, key=lambda H: H.order)
        for H in h1:
            if not set(smallest.elements) <= set(H.elements):
                raise InternalError("smallest translation subgroup is not unique")
        L, U = soc, smallest
        kind = "normal"
    l_cosets = L.right_cosets()
    u_cosets = U.right_cosets()
    return PrincipalSection(
        kind,
        L,
        U,
        l_cosets,
        u_cosets,
        coset_class_array(G, l_cosets),
        coset_class_array(G, u_cosets),
    )
