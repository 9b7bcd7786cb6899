"""Permutation groups on indexed domains.

Permutations are numpy int32 image arrays; ``compose(p, q)`` applies p first.
Groups carry a deterministic stabilizer chain (base points are smallest moved
points, transversals breadth-first), so orders, membership tests and element
enumeration are reproducible across runs.

Two chain constructions exist besides the generic Schreier-Sims: an analytic
chain for symmetric groups on a point set, and an analytic chain for wreath
products B wr T on a block system.  Those cover the huge groups that appear
for symmetric-type Cayley schemes (orders like (60!)^2), where generic chain
building would be hopeless.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np

from .errors import CapExceededError, InternalError, InvalidInputError
from .group import FiniteGroup, greedy_generators

Perm = np.ndarray

ELEMENT_CAP = 10_000_000


def as_perm(images: Sequence[int], degree: Optional[int] = None) -> Perm:
    p = np.asarray(images, dtype=np.int32)
    if degree is not None and len(p) != degree:
        raise InvalidInputError(f"permutation degree {len(p)} != {degree}")
    return p


def identity_perm(n: int) -> Perm:
    return np.arange(n, dtype=np.int32)


def compose(p: Perm, q: Perm) -> Perm:
    """Apply p, then q."""
    return q[p]


def inverse_perm(p: Perm) -> Perm:
    out = np.empty_like(p)
    out[p] = np.arange(len(p), dtype=p.dtype)
    return out


def is_identity(p: Perm) -> bool:
    return bool(np.array_equal(p, np.arange(len(p), dtype=p.dtype)))


def perm_order(p: Perm) -> int:
    n = len(p)
    seen = np.zeros(n, dtype=bool)
    out = 1
    for i in range(n):
        if seen[i]:
            continue
        ln, j = 1, int(p[i])
        seen[i] = True
        while j != i:
            seen[j] = True
            j = int(p[j])
            ln += 1
        out = math.lcm(out, ln)
    return out


def uniform_cycle_length(p: Perm) -> Optional[int]:
    """The common cycle length if all cycles of p agree, else None."""
    n = len(p)
    seen = np.zeros(n, dtype=bool)
    common: Optional[int] = None
    for i in range(n):
        if seen[i]:
            continue
        ln, j = 1, int(p[i])
        seen[i] = True
        while j != i:
            seen[j] = True
            j = int(p[j])
            ln += 1
        if common is None:
            common = ln
        elif ln != common:
            return None
    return common


def validate_perm(p: Perm) -> None:
    if sorted(p.tolist()) != list(range(len(p))):
        raise InvalidInputError("images are not a bijection")


# -- stabilizer chain ---------------------------------------------------------


class _Level:
    __slots__ = ("base", "gens", "trans", "trans_inv", "points")

    def __init__(self, base: int):
        self.base = base
        self.gens: list[Perm] = []  # strong generators first stuck at this level
        self.trans: dict[int, Perm] = {}
        self.trans_inv: dict[int, Perm] = {}
        self.points: list[int] = []  # orbit in discovery order


class PermutationGroup:
    """Permutation group with a deterministic stabilizer chain.

    ``known_order`` is an optional externally certified order: chain
    construction stops as soon as the transversal product reaches it.  The
    product of transversal sizes never exceeds the true order of the
    generated group, so reaching the target proves the chain is complete.
    """

    def __init__(
        self,
        generators: Iterable[Sequence[int]],
        degree: int,
        known_order: Optional[int] = None,
        _levels: Optional[list[_Level]] = None,
    ):
        self.degree = int(degree)
        self.generators: list[Perm] = []
        for g in generators:
            p = as_perm(g, self.degree)
            validate_perm(p)
            if not is_identity(p):
                self.generators.append(p)
        self._known_order = known_order
        self._levels: Optional[list[_Level]] = _levels
        self._order: Optional[int] = None
        if _levels is not None:
            self._order = 1
            for lv in _levels:
                self._order *= len(lv.trans)

    # -- chain construction ------------------------------------------------

    def _effective_gens(self, i: int) -> list[Perm]:
        out = []
        for lv in self._levels[i:]:
            out.extend(lv.gens)
        return out

    def _extend_orbit(self, i: int, new_gen: Optional[Perm] = None) -> None:
        """BFS-extend the level transversal.

        Existing points were already saturated under the old generators, so
        when a single new generator arrives only it is applied to them; newly
        reached points are expanded under the full effective generator set.
        """
        lv = self._levels[i]
        if lv.base not in lv.trans:
            ident = identity_perm(self.degree)
            lv.trans[lv.base] = ident
            lv.trans_inv[lv.base] = ident
            lv.points.append(lv.base)
        gens = self._effective_gens(i)

        def reach(a: int, g: Perm) -> None:
            b = int(g[a])
            if b not in lv.trans:
                ub = compose(lv.trans[a], g)
                lv.trans[b] = ub
                lv.trans_inv[b] = inverse_perm(ub)
                lv.points.append(b)
                queue.append(b)

        queue: list[int] = []
        if new_gen is not None:
            for a in list(lv.points):
                reach(a, new_gen)
        else:
            queue = list(lv.points)
        head = 0
        while head < len(queue):
            a = queue[head]
            head += 1
            for g in gens:
                reach(a, g)

    def _strip(self, p: Perm, start: int = 0) -> tuple[Perm, int]:
        for i in range(start, len(self._levels)):
            lv = self._levels[i]
            d = int(p[lv.base])
            v = lv.trans_inv.get(d)
            if v is None:
                return p, i
            p = compose(p, v)
        return p, len(self._levels)

    def _chain_order(self) -> int:
        o = 1
        for lv in self._levels:
            o *= len(lv.trans)
        return o

    def _add_strong_gen(self, j: int, g: Perm) -> None:
        if j == len(self._levels):
            moved = int(np.nonzero(g != np.arange(self.degree, dtype=np.int32))[0][0])
            self._levels.append(_Level(moved))
        self._levels[j].gens.append(g)
        for i in range(j, -1, -1):
            self._extend_orbit(i, new_gen=g)

    def _ensure_chain(self) -> None:
        if self._levels is not None:
            return
        self._levels = []
        target = self._known_order
        for g in self.generators:
            r, j = self._strip(g)
            if not is_identity(r):
                self._add_strong_gen(j, r)
        if target is not None:
            if self._chain_order() == target:
                self._order = target
                return
            # certified order: fill the chain by sifting pseudo-random
            # products; every transversal entry is a genuine word in the
            # generators, so reaching the target order proves completeness
            if self._randomized_descent(target):
                self._order = target
                return
        i = len(self._levels) - 1
        while i >= 0:
            lv = self._levels[i]
            gens = self._effective_gens(i)
            restart = False
            for a in list(lv.points):
                ua = lv.trans[a]
                for g in gens:
                    b = int(g[a])
                    sg = compose(compose(ua, g), lv.trans_inv[b])
                    if is_identity(sg):
                        continue
                    r, j = self._strip(sg, i + 1)
                    if not is_identity(r):
                        if j <= i:
                            raise InternalError("sift residue above its level")
                        self._add_strong_gen(j, r)
                        if target is not None and self._chain_order() == target:
                            self._order = target
                            return
                        i = j
                        restart = True
                        break
                if restart:
                    break
            if not restart:
                i -= 1
        self._order = self._chain_order()
        if target is not None and self._order != target:
            raise InternalError(
                f"chain order {self._order} disagrees with certified order {target}"
            )

    def _randomized_descent(self, target: int, max_rounds: int = 200_000) -> bool:
        """Fill the chain from seeded product-replacement samples.

        Returns True once the transversal product reaches the target.  A
        False return falls back to deterministic Schreier processing, so a
        wrong target can only ever slow things down, never falsify an order.
        """
        if not self.generators:
            return self._chain_order() == target
        rng = np.random.default_rng(0xD15C0)
        pool = [g.copy() for g in self.generators]
        while len(pool) < 6:
            pool.append(identity_perm(self.degree))
        accum = identity_perm(self.degree)
        for _ in range(max_rounds):
            i = int(rng.integers(len(pool)))
            j = int(rng.integers(len(pool)))
            if i != j:
                pool[i] = compose(pool[i], pool[j])
            accum = compose(accum, pool[i])
            r, lvl = self._strip(accum)
            if not is_identity(r):
                self._add_strong_gen(lvl, r)
                if self._chain_order() == target:
                    return True
        return False

    # -- queries -------------------------------------------------------------

    @property
    def order(self) -> int:
        self._ensure_chain()
        return self._order

    @property
    def levels(self) -> list[_Level]:
        self._ensure_chain()
        return self._levels

    def sift(self, p: Sequence[int]) -> Perm:
        """Residue of p after stripping through the chain (identity iff member)."""
        self._ensure_chain()
        r, _ = self._strip(as_perm(p, self.degree))
        return r

    def __contains__(self, p) -> bool:
        return is_identity(self.sift(p))

    def elements(self, cap: int = ELEMENT_CAP) -> Iterator[Perm]:
        """All elements, deterministically ordered by transversal digits."""
        self._ensure_chain()
        if self.order > cap:
            raise CapExceededError(f"group of order {self.order} exceeds element cap")
        levels = self._levels
        if not levels:
            yield identity_perm(self.degree)
            return

        def rec(i: int) -> Iterator[Perm]:
            if i == len(levels):
                yield identity_perm(self.degree)
                return
            for e in rec(i + 1):
                for pt in levels[i].points:
                    yield compose(e, levels[i].trans[pt])

        yield from rec(0)

    def element_rows(self, cap: int = ELEMENT_CAP) -> np.ndarray:
        return np.array(list(self.elements(cap)), dtype=np.int32)

    def __repr__(self) -> str:
        return f"PermutationGroup(degree={self.degree}, gens={len(self.generators)})"


def stabilizer_chain(
    generators: Iterable[Sequence[int]], degree: int, known_order: Optional[int] = None
) -> PermutationGroup:
    """Build a permutation group with its stabilizer chain."""
    return PermutationGroup(generators, degree, known_order=known_order)


def reduce_generators(gens: Iterable[Sequence[int]], degree: int) -> list[Perm]:
    """Drop generators already generated by the kept ones (membership sifts)."""
    kept: list[Perm] = []
    group: Optional[PermutationGroup] = None
    for g in gens:
        p = as_perm(g, degree)
        if is_identity(p):
            continue
        if group is not None and p in group:
            continue
        kept.append(p)
        group = PermutationGroup(kept, degree)
    return kept


# -- analytic chains -----------------------------------------------------------


def symmetric_group_on(points: Sequence[int], degree: int) -> PermutationGroup:
    """Sym(points) inside Sym(degree), with an explicit transposition chain."""
    pts = list(points)
    k = len(pts)
    ident = identity_perm(degree)
    levels: list[_Level] = []
    for i in range(k - 1):
        lv = _Level(pts[i])
        lv.trans[pts[i]] = ident
        lv.trans_inv[pts[i]] = ident
        lv.points.append(pts[i])
        for j in range(i + 1, k):
            t = ident.copy()
            t[pts[i]], t[pts[j]] = t[pts[j]], t[pts[i]]
            lv.trans[pts[j]] = t
            lv.trans_inv[pts[j]] = t
            lv.points.append(pts[j])
        levels.append(lv)
    gens = []
    if k >= 2:
        cyc = ident.copy()
        for a, b in zip(pts, pts[1:] + pts[:1]):
            cyc[a] = b
        tr = ident.copy()
        tr[pts[0]], tr[pts[1]] = tr[pts[1]], tr[pts[0]]
        gens = [cyc, tr] if k > 2 else [tr]
    return PermutationGroup(gens, degree, _levels=levels)


def _lift_block_map(tau: Perm, blocks: list[list[int]], degree: int) -> Perm:
    """Lift a block permutation to points, positionwise along the block lists."""
    out = identity_perm(degree)
    for i, blk in enumerate(blocks):
        tgt = blocks[int(tau[i])]
        for pos, pt in enumerate(blk):
            out[pt] = tgt[pos]
    return out


def wreath_group_on_blocks(
    inner: PermutationGroup,
    blocks: list[list[int]],
    top: PermutationGroup,
    degree: int,
    generators: Optional[list[Perm]] = None,
) -> PermutationGroup:
    """The wreath product inner wr top on a block system, as an explicit chain.

    ``inner`` acts on positions 0..b-1; block i is the point list blocks[i],
    identified positionwise.  ``top`` acts on block indices.  The group is
    {f : f permutes blocks by some tau in top, and every block component,
    pulled back to positions, lies in inner}.

    The chain pins blocks one at a time: first along top's own chain (base
    block beta; cross-block transversal entries are lifted top transversals
    composed with conjugated inner transversals), then the blocks left fixed.
    Pinning all of inner's base points inside a block forces that block's
    component to the identity, because a complete chain has trivial pointwise
    base stabilizer.
    """
    m = len(blocks)
    b = len(blocks[0])
    if any(len(blk) != b for blk in blocks):
        raise InvalidInputError("blocks must have equal size")
    if inner.degree != b:
        raise InvalidInputError("inner group must act on block positions 0..b-1")
    ident = identity_perm(degree)
    inner_levels = inner.levels
    if not inner_levels and m > 1 and top.order > 1:
        raise InvalidInputError("trivial inner group needs a plain top action instead")
    levels: list[_Level] = []

    def conj_into_block(d: Perm, blk: list[int]) -> Perm:
        out = ident.copy()
        arr = np.asarray(blk, dtype=np.int32)
        out[arr] = arr[d]
        return out

    def add_inner_stage(beta: int, top_level: Optional[_Level]) -> None:
        blk = blocks[beta]
        for nu, ilv in enumerate(inner_levels):
            lv = _Level(blk[ilv.base])
            if nu == 0 and top_level is not None:
                for gamma_pt in top_level.points:
                    tau = top_level.trans[gamma_pt]
                    lift = _lift_block_map(tau, blocks, degree)
                    gblk = blocks[int(tau[beta])]
                    for q in ilv.points:
                        w = compose(lift, conj_into_block(ilv.trans[q], gblk))
                        pt = int(w[lv.base])
                        lv.trans[pt] = w
                        lv.trans_inv[pt] = inverse_perm(w)
                        lv.points.append(pt)
            else:
                for q in ilv.points:
                    w = conj_into_block(ilv.trans[q], blk)
                    pt = blk[q]
                    lv.trans[pt] = w
                    lv.trans_inv[pt] = inverse_perm(w)
                    lv.points.append(pt)
            levels.append(lv)

    pinned = []
    for tlv in top.levels:
        add_inner_stage(tlv.base, tlv)
        pinned.append(tlv.base)
    for beta in range(m):
        if beta not in pinned:
            add_inner_stage(beta, None)
    if generators is None:
        generators = []
        for g in inner.generators:
            generators.append(conj_into_block(g, blocks[0]))
        for t in top.generators:
            generators.append(_lift_block_map(t, blocks, degree))
    return PermutationGroup(generators, degree, _levels=levels)


# -- regular representations and D(2,G) ----------------------------------------


@dataclass
class RegularReps:
    """Left/right regular actions of a finite group on itself."""

    group: FiniteGroup
    right_gens: list[Perm]
    left_gens: list[Perm]
    sigma: Perm

    @property
    def star_gens(self) -> list[Perm]:
        return self.right_gens + self.left_gens

    def right_perm(self, g: int) -> Perm:
        return np.ascontiguousarray(self.group.table[:, g])

    def left_perm(self, g: int) -> Perm:
        return np.ascontiguousarray(self.group.table[g, :])


def regular_representations(G: FiniteGroup) -> RegularReps:
    """Right/left translation generators and the inversion permutation."""
    gens = greedy_generators(G)
    right = [np.ascontiguousarray(G.table[:, g]) for g in gens]
    left = [np.ascontiguousarray(G.table[g, :]) for g in gens]
    sigma = np.ascontiguousarray(G.inverse)
    return RegularReps(G, right, left, sigma)


def d2_group(
    G: FiniteGroup, automorphisms: Optional[list[Perm]] = None, cap: int = 1000
) -> PermutationGroup:
    """D(2,G): the holomorph of G extended by inversion, acting on G.

    Generators are right translations, the automorphisms (as permutations
    fixing 0), and inversion; the generator list is reduced before chain
    construction.
    """
    from .group import automorphism_group

    if G.order > cap:
        raise CapExceededError(f"d2_group capped at order {cap}")
    reps = regular_representations(G)
    auts = automorphisms if automorphisms is not None else automorphism_group(G)
    gens = reduce_generators(
        reps.right_gens + [as_perm(a, G.order) for a in auts] + [reps.sigma], G.order
    )
    return PermutationGroup(gens, G.order)


class D2Subgroup:
    """A subgroup of D(2,G) given parametrically.

    Elements are x -> (alpha(x) * t) or x -> (alpha(x) * t)^-1 with t ranging
    over all of G, alpha over ``auts_plain`` for the first kind and over
    ``auts_inv`` for the second.  For nonabelian G the parameters are unique
    per element, so the order is |G| * (|auts_plain| + |auts_inv|).
    """

    def __init__(self, G: FiniteGroup, auts_plain: list[Perm], auts_inv: list[Perm]):
        if G.is_abelian:
            raise InvalidInputError("parametric form needs unique parameters (nonabelian G)")
        self.group = G
        self.degree = G.order
        self.auts_plain = [as_perm(a, G.order) for a in auts_plain]
        self.auts_inv = [as_perm(a, G.order) for a in auts_inv]
        if not self.auts_plain:
            raise InvalidInputError("plain part must contain at least the identity")
        if self.auts_inv and len(self.auts_inv) != len(self.auts_plain):
            raise InternalError("inverted part is not a coset of the plain part")
        self._plain_set = {a.tobytes() for a in self.auts_plain}
        self._inv_set = {a.tobytes() for a in self.auts_inv}

    @property
    def order(self) -> int:
        return self.degree * (len(self.auts_plain) + len(self.auts_inv))

    def row(self, alpha: Perm, t: int, inverted: bool) -> Perm:
        r = self.group.table[alpha, t]
        if inverted:
            r = self.group.inverse[r]
        return np.ascontiguousarray(r)

    def __contains__(self, p) -> bool:
        r = as_perm(p, self.degree)
        inv = self.group.inverse
        # plain: alpha = r * rho_{t}^-1 with t = r[0]
        t = int(r[0])
        alpha = self.group.table[r, int(inv[t])]
        if alpha.tobytes() in self._plain_set:
            return True
        r2 = inv[r]
        t = int(r2[0])
        alpha = self.group.table[r2, int(inv[t])]
        return alpha.tobytes() in self._inv_set

    def iter_rows(self) -> Iterator[Perm]:
        """All elements, batched per (alpha, kind); deterministic order."""
        T = self.group.table
        inv = self.group.inverse
        for alpha in self.auts_plain:
            M = T[alpha]  # M[x, t] = alpha(x) * t
            for t in range(self.degree):
                yield np.ascontiguousarray(M[:, t])
        for alpha in self.auts_inv:
            M = inv[T[alpha]]
            for t in range(self.degree):
                yield np.ascontiguousarray(M[:, t])

    def generators(self) -> list[Perm]:
        G = self.group
        gens = [np.ascontiguousarray(G.table[:, g]) for g in greedy_generators(G)]
        gens += reduce_generators(self.auts_plain, self.degree)
        if self.auts_inv:
            gens.append(np.ascontiguousarray(G.inverse[self.auts_inv[0]]))
        return gens

    def to_chain(self) -> PermutationGroup:
        return PermutationGroup(self.generators(), self.degree, known_order=self.order)

    def __repr__(self) -> str:
        return f"D2Subgroup(order={self.order}, degree={self.degree})"


def full_d2_subgroup(G: FiniteGroup, automorphisms: Optional[list[Perm]] = None) -> D2Subgroup:
    """D(2,G) itself in parametric form (all automorphisms on both parts)."""
    from .group import automorphism_group

    auts = automorphisms if automorphisms is not None else automorphism_group(G)
    return D2Subgroup(G, list(auts), list(auts))


# -- orbitals -------------------------------------------------------------------


@dataclass
class RelationPartition:
    """A partition of Omega x Omega into colored relations."""

    degree: int
    colors: np.ndarray
    n_colors: int

    def color_matrix(self) -> np.ndarray:
        return self.colors


def orbitals(K: PermutationGroup, degree_cap: int = 1000) -> RelationPartition:
    """Orbits of the componentwise action on pairs, by flood fill."""
    n = K.degree
    if n > degree_cap:
        raise CapExceededError(f"orbitals capped at degree {degree_cap}")
    gens = [g.tolist() for g in K.generators]
    colors = np.full((n, n), -1, dtype=np.int32)
    col_flat = colors.ravel()
    color = 0
    for start in range(n * n):
        if col_flat[start] >= 0:
            continue
        col_flat[start] = color
        stack = [start]
        while stack:
            pr = stack.pop()
            a, b = divmod(pr, n)
            for g in gens:
                q = g[a] * n + g[b]
                if col_flat[q] < 0:
                    col_flat[q] = color
                    stack.append(q)
        color += 1
    return RelationPartition(n, colors, color)


# -- block actions ---------------------------------------------------------------


@dataclass
class BlockAction:
    """Action of a group on a block partition, with kernel and preimages."""

    action: PermutationGroup
    kernel: PermutationGroup
    _preimages: dict[bytes, Perm]

    def preimage(self, tau: Sequence[int]) -> Perm:
        key = as_perm(tau).astype(np.int32).tobytes()
        try:
            return self._preimages[key]
        except KeyError:
            raise InvalidInputError("block map is not in the action image") from None

    def action_rows(self) -> list[Perm]:
        return [np.frombuffer(k, dtype=np.int32).copy() for k in sorted(self._preimages)]


def induced_block_perm(g: Perm, blocks: Sequence[Sequence[int]], block_of: np.ndarray) -> Perm:
    """Image of g on block indices; raises if the partition is not invariant."""
    m = len(blocks)
    out = np.empty(m, dtype=np.int32)
    for i, blk in enumerate(blocks):
        imgs = block_of[g[np.asarray(blk, dtype=np.int32)]]
        first = int(imgs[0])
        if np.any(imgs != first):
            raise InvalidInputError("not a block system")
        out[i] = first
    return out


def block_action_with_kernel(
    K: PermutationGroup, partition: Sequence[Sequence[int]], closure_cap: int = 500_000
) -> BlockAction:
    """Induced action on blocks plus its kernel.

    The action image is enumerated with preimage tracking; kernel generators
    are the Schreier generators of that coset traversal, reduced against the
    exact kernel order |K| / |image|.
    """
    n = K.degree
    blocks = [list(map(int, blk)) for blk in partition]
    block_of = np.full(n, -1, dtype=np.int32)
    for i, blk in enumerate(blocks):
        block_of[blk] = i
    if np.any(block_of < 0):
        raise InvalidInputError("partition does not cover the domain")
    m = len(blocks)
    gen_pairs = [(g, induced_block_perm(g, blocks, block_of)) for g in K.generators]

    ident_a = identity_perm(m)
    ident_k = identity_perm(n)
    if all(is_identity(ga) for _, ga in gen_pairs):
        # trivial action: the kernel is the whole group
        action = PermutationGroup([], m, known_order=1)
        return BlockAction(action, K, {ident_a.tobytes(): ident_k})
    reach: dict[bytes, Perm] = {ident_a.tobytes(): ident_k}
    order_list: list[tuple[Perm, Perm]] = [(ident_a, ident_k)]
    head = 0
    while head < len(order_list):
        arow, pre = order_list[head]
        head += 1
        for g, ga in gen_pairs:
            na = compose(arow, ga)
            key = na.tobytes()
            if key not in reach:
                if len(reach) >= closure_cap:
                    raise CapExceededError("block action image too large")
                npre = compose(pre, g)
                reach[key] = npre
                order_list.append((na, npre))
    action_order = len(reach)
    action = PermutationGroup([ga for _, ga in gen_pairs], m, known_order=action_order)

    kernel_order = K.order // action_order
    schreier: list[Perm] = []
    seen = set()
    for arow, pre in order_list:
        for g, ga in gen_pairs:
            target = reach[compose(arow, ga).tobytes()]
            cand = compose(compose(pre, g), inverse_perm(target))
            if not is_identity(cand):
                key = cand.tobytes()
                if key not in seen:
                    seen.add(key)
                    schreier.append(cand)
    kept: list[Perm] = []
    if kernel_order > 1:
        group = None
        for cand in schreier:
            if group is not None and cand in group:
                continue
            kept.append(cand)
            group = PermutationGroup(kept, n)
            if group.order == kernel_order:
                break
        if group is None or group.order != kernel_order:
            raise InternalError("Schreier generators failed to generate the kernel")
    kernel = PermutationGroup(kept, n, known_order=kernel_order)
    return BlockAction(action, kernel, reach)


# -- regular subgroups -------------------------------------------------------------


def _divisor_chain(o: int) -> list[int]:
    return [k for k in range(1, o) if o % k == 0]


def _candidate_pools_parametric(K: D2Subgroup, needed: set[int]) -> dict[int, list[Perm]]:
    """Uniform-cycle-type elements of a parametric D(2,G)-subgroup, per order.

    For each (automorphism, kind) the rows over all translations t form the
    columns of one matrix; column-wise powers are taken together, so the
    uniform-type test (f^o = id, f^k fixed-point-free for proper divisors k)
    is vectorized over t.
    """
    n = K.degree
    T = K.group.table
    inv = K.group.inverse
    ident_col = np.arange(n, dtype=np.int32)[:, None]
    cols = np.arange(n, dtype=np.int32)[None, :]
    pools: dict[int, list[Perm]] = {o: [] for o in needed}

    def scan(M: np.ndarray) -> None:
        # M[x, t] is the image of x under candidate t
        maxo = max(needed)
        powers = {1: M}
        P = M
        for k in range(2, maxo + 1):
            P = M[P, cols]
            powers[k] = P
        fpf = {k: ~np.any(powers[k] == ident_col, axis=0) for k in range(1, maxo + 1)}
        is_id = {k: np.all(powers[k] == ident_col, axis=0) for k in range(1, maxo + 1)}
        for o in needed:
            ok = is_id[o].copy()
            for k in _divisor_chain(o):
                ok &= fpf[k]
            for t in np.nonzero(ok)[0]:
                pools[o].append(np.ascontiguousarray(M[:, t]))

    for alpha in K.auts_plain:
        scan(T[alpha])
    for alpha in K.auts_inv:
        scan(inv[T[alpha]])
    return pools


def _bfs_tree(H: FiniteGroup, gens: list[int]) -> list[tuple[int, int, int]]:
    """Edges (parent, gen slot, child) of a BFS spanning tree of the Cayley graph."""
    n = H.order
    seen = np.zeros(n, dtype=bool)
    seen[0] = True
    edges = []
    queue = [0]
    head = 0
    while head < len(queue):
        a = queue[head]
        head += 1
        for gi, g in enumerate(gens):
            b = int(H.table[a, g])
            if not seen[b]:
                seen[b] = True
                edges.append((a, gi, b))
                queue.append(b)
    if not np.all(seen):
        raise InternalError("generating sequence does not generate")
    return edges


def regular_subgroups(K, H: FiniteGroup, element_cap: int = ELEMENT_CAP) -> list[PermutationGroup]:
    """All regular subgroups of K isomorphic to H.

    A regular subgroup V is recovered from the images (c_1..c_k) of a short
    generating sequence of H: the base-point orbit map b(h) = 0^phi(h) is
    filled along a BFS tree of H's Cayley graph, then the candidate is kept
    iff b is a bijection, conjugating H_right by b reproduces the c_i, and
    every conjugated translation lies in K.  Candidate images are restricted
    to elements whose cycles all have the generator's order: nonidentity
    elements of a regular group are fixed-point-free with uniform cycle type.
    """
    n = H.order
    if K.degree != n:
        return []  # a regular subgroup has order equal to the degree
    if K.order > element_cap:
        raise CapExceededError("K too large to enumerate")
    if n == 1:
        return [PermutationGroup([], 1)]
    gens_idx = greedy_generators(H)
    k = len(gens_idx)
    orders = [H.element_order(g) for g in gens_idx]

    if isinstance(K, D2Subgroup):
        pools = _candidate_pools_parametric(K, set(orders))
    else:
        pools = {o: [] for o in set(orders)}
        for row in K.elements(element_cap):
            if int(row[0]) == 0:
                continue  # fixes a point, cannot belong to a regular subgroup
            o = uniform_cycle_length(row)
            if o in pools:
                pools[o].append(row.copy())

    # iterate small pools in the outer product, batch over the largest one
    slot_order = sorted(range(k), key=lambda i: len(pools[orders[i]]))
    gens_idx = [gens_idx[i] for i in slot_order]
    orders = [orders[i] for i in slot_order]

    tree = _bfs_tree(H, gens_idx)
    T = H.table
    found: dict[bytes, PermutationGroup] = {}

    def accept(cands: list[Perm], b: np.ndarray) -> None:
        binv = inverse_perm(b)
        P = b[T[binv]]  # column h is the conjugated right translation by h
        # conjugating H_right by b must reproduce the candidate images
        for gi, g in enumerate(gens_idx):
            if not np.array_equal(P[:, g], cands[gi]):
                return
        # canonical form: element rows indexed by their image of the base point
        M = np.ascontiguousarray(P.T[binv])
        full = M.tobytes()
        if full in found:
            return
        for row in M:
            if row not in K:
                return
        sub = PermutationGroup(list(cands), n, known_order=n)
        sub.element_rows_cache = np.ascontiguousarray(P.T)
        found[full] = sub

    last_pool = pools[orders[-1]]
    if not last_pool or any(not pools[o] for o in orders):
        return []
    c_last = np.stack(last_pool)
    m_last = len(last_pool)
    rows_idx = np.arange(m_last)

    def scan_batch(prefix: list[Perm]) -> None:
        """Fill the orbit map for every last-slot candidate at once.

        Writes that revisit a point kill the row; rows that survive all n-1
        tree edges have a bijective orbit map by counting.  Dead rows are
        compacted away periodically to keep the vectors short.
        """
        B = np.zeros((m_last, n), dtype=np.int32)
        used = np.zeros((m_last, n), dtype=bool)
        used[:, 0] = True
        alive = np.arange(m_last)
        cand = c_last
        dead = np.zeros(m_last, dtype=bool)
        idx = np.arange(m_last)
        for step, (parent, gi, child) in enumerate(tree):
            prev = B[:, parent]
            if gi < k - 1:
                nxt = prefix[gi][prev]
            else:
                nxt = cand[idx, prev]
            dead |= used[idx, nxt]
            B[:, child] = nxt
            used[idx, nxt] = True
            if step % 24 == 23 and dead.any():
                keep = ~dead
                if keep.sum() * 2 < len(alive):
                    alive = alive[keep]
                    B = B[keep]
                    used = used[keep]
                    cand = cand[keep]
                    dead = np.zeros(len(alive), dtype=bool)
                    idx = np.arange(len(alive))
                    if not len(alive):
                        return
        for local_j, j in enumerate(alive):
            if not dead[local_j]:
                accept(prefix + [last_pool[j]], B[local_j])

    for combo in itertools.product(*(pools[o] for o in orders[:-1])):
        scan_batch(list(combo))

    return [found[k2] for k2 in sorted(found)]
