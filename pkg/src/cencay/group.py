"""Finite groups as 0-based multiplication tables.

The identity always has index 0.  All derived orderings (conjugacy classes,
subgroups, cosets) are deterministic by (size, smallest member), so every
computation downstream is reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import CapExceededError, InvalidInputError

#: Above this order, associativity is spot-checked on random triples instead
#: of exhaustively (the algorithms in this package target n <= 1000 anyway).
FULL_ASSOC_CHECK_LIMIT = 1000
ASSOC_SAMPLES = 1_000_000

DEFAULT_CLOSURE_CAP = 10_000
DEFAULT_AUT_CAP = 1000

_rng_assoc = np.random.default_rng(0x5EED)


class FiniteGroup:
    """A group of order n given by its n x n multiplication table.

    ``table[a][b]`` is the index of a*b, index 0 is the identity.
    Instances are immutable after construction and safe to share.
    """

    def __init__(self, table, names: Optional[Sequence[str]] = None, check: bool = True):
        tab = np.ascontiguousarray(table, dtype=np.int32)
        if tab.ndim != 2 or tab.shape[0] != tab.shape[1] or tab.shape[0] == 0:
            raise InvalidInputError("multiplication table must be square and nonempty")
        self.table = tab
        self.order: int = int(tab.shape[0])
        self.names = list(names) if names is not None else None
        if self.names is not None and len(self.names) != self.order:
            raise InvalidInputError("names length does not match group order")
        inv = np.full(self.order, -1, dtype=np.int32)
        rows, cols = np.nonzero(tab == 0)
        inv[rows] = cols
        self.inverse = inv
        if check:
            self._validate()
        self.table.setflags(write=False)
        self.inverse.setflags(write=False)
        self._aut_cache: Optional[list[np.ndarray]] = None
        self._classes_cache = None

    # -- validation ------------------------------------------------------

    def _validate(self) -> None:
        n, tab = self.order, self.table
        idx = np.arange(n, dtype=np.int32)
        if not (np.array_equal(tab[0], idx) and np.array_equal(tab[:, 0], idx)):
            raise InvalidInputError("index 0 is not a two-sided identity")
        if np.any(np.sort(tab, axis=1) != idx) or np.any(np.sort(tab, axis=0) != idx[:, None]):
            raise InvalidInputError("table is not a Latin square")
        if np.any(tab[idx, self.inverse] != 0) or np.any(tab[self.inverse, idx] != 0):
            raise InvalidInputError("inverse law fails")
        if n <= FULL_ASSOC_CHECK_LIMIT:
            for a in range(n):
                # (a*b)*c versus a*(b*c), all b, c at once
                if not np.array_equal(tab[tab[a]], tab[a][tab]):
                    raise InvalidInputError(f"associativity fails at element {a}")
        else:
            a = _rng_assoc.integers(0, n, ASSOC_SAMPLES)
            b = _rng_assoc.integers(0, n, ASSOC_SAMPLES)
            c = _rng_assoc.integers(0, n, ASSOC_SAMPLES)
            if not np.array_equal(tab[tab[a, b], c], tab[a, tab[b, c]]):
                raise InvalidInputError("associativity fails (sampled)")

    # -- basic operations --------------------------------------------------

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def inv(self, a: int) -> int:
        return int(self.inverse[a])

    def conj(self, x: int, g: int) -> int:
        """g^-1 * x * g."""
        return int(self.table[self.table[self.inverse[g], x], g])

    def element_order(self, x: int) -> int:
        k, y = 1, x
        while y != 0:
            y = int(self.table[y, x])
            k += 1
        return k

    @property
    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    def __repr__(self) -> str:
        return f"FiniteGroup(order={self.order})"

    def __eq__(self, other) -> bool:
        return isinstance(other, FiniteGroup) and np.array_equal(self.table, other.table)

    def __hash__(self) -> int:
        return hash((self.order, self.table.tobytes()))


@dataclass(frozen=True)
class ClassPartition:
    """Partition of a group into conjugation-closed classes; class 0 is {0}."""

    classes: tuple[tuple[int, ...], ...]

    @property
    def k(self) -> int:
        return len(self.classes)

    def class_of_array(self, n: int) -> np.ndarray:
        out = np.full(n, -1, dtype=np.int32)
        for i, cls in enumerate(self.classes):
            out[list(cls)] = i
        if np.any(out < 0):
            raise InvalidInputError("classes do not cover the group")
        return out

    def size_multiset(self) -> tuple[int, ...]:
        return tuple(sorted(len(c) for c in self.classes))


@dataclass
class Subgroup:
    """A subgroup as a sorted element set within a parent group."""

    parent: FiniteGroup
    elements: tuple[int, ...]
    _is_normal: Optional[bool] = field(default=None, repr=False)
    _is_simple: Optional[bool] = field(default=None, repr=False)

    def __post_init__(self):
        self.elements = tuple(sorted(self.elements))
        if not self.elements or self.elements[0] != 0:
            raise InvalidInputError("subgroup must contain the identity")

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, x: int) -> bool:
        return x in self._member_set()

    @lru_cache(maxsize=None)
    def _member_set(self) -> frozenset:
        return frozenset(self.elements)

    def __hash__(self):
        return hash((id(self.parent), self.elements))

    def __eq__(self, other):
        return (
            isinstance(other, Subgroup)
            and self.parent is other.parent
            and self.elements == other.elements
        )

    @property
    def is_normal(self) -> bool:
        if self._is_normal is None:
            G, mem = self.parent, self._member_set()
            self._is_normal = all(
                G.conj(x, g) in mem for x in self.elements for g in range(G.order)
            )
        return self._is_normal

    @property
    def is_simple(self) -> bool:
        if self._is_simple is None:
            H, _ = self.as_group()
            self._is_simple = _is_simple_group(H)
        return self._is_simple

    def as_group(self) -> tuple[FiniteGroup, list[int]]:
        """Reindex the subgroup as a standalone group.

        Returns the group and the list mapping new indices to parent indices.
        """
        elems = list(self.elements)
        pos = {e: i for i, e in enumerate(elems)}
        tab = self.parent.table[np.ix_(elems, elems)]
        relabel = np.full(self.parent.order, -1, dtype=np.int32)
        for e, i in pos.items():
            relabel[e] = i
        sub_tab = relabel[tab]
        if np.any(sub_tab < 0):
            raise InvalidInputError("element set is not closed under multiplication")
        names = None
        if self.parent.names is not None:
            names = [self.parent.names[e] for e in elems]
        return FiniteGroup(sub_tab, names=names, check=False), elems

    def generators(self) -> list[int]:
        """Greedy short generating sequence of the subgroup (parent indices)."""
        H, elems = self.as_group()
        return [elems[i] for i in greedy_generators(H)]

    def right_cosets(self) -> list[tuple[int, ...]]:
        """Right cosets Hg, ordered by smallest member; identity coset first."""
        G = self.parent
        seen = np.zeros(G.order, dtype=bool)
        helems = np.asarray(self.elements, dtype=np.int32)
        cosets = []
        for g in range(G.order):
            if not seen[g]:
                members = np.sort(G.table[helems, g])
                seen[members] = True
                cosets.append(tuple(int(m) for m in members))
        return cosets


# -- construction ----------------------------------------------------------


def _compose(p: Sequence[int], q: Sequence[int]) -> tuple[int, ...]:
    return tuple(q[x] for x in p)


def group_from_generators(
    generators: Iterable[Sequence[int]],
    degree: Optional[int] = None,
    cap: int = DEFAULT_CLOSURE_CAP,
) -> FiniteGroup:
    """Close a set of permutations under composition into a FiniteGroup.

    Element 0 is the identity; the remaining elements appear in breadth-first
    order from the generators (taken in the given order), which makes the
    element indexing deterministic.
    """
    gens = [tuple(int(x) for x in g) for g in generators]
    if degree is None:
        degree = len(gens[0]) if gens else 1
    for g in gens:
        if sorted(g) != list(range(degree)):
            raise InvalidInputError(f"not a permutation of 0..{degree - 1}: {g}")
    ident = tuple(range(degree))
    elems: list[tuple[int, ...]] = [ident]
    index = {ident: 0}
    edges: list[tuple[int, int, int]] = []  # (parent, generator slot, child)
    head = 0
    while head < len(elems):
        e = elems[head]
        head += 1
        for gi, g in enumerate(gens):
            w = _compose(e, g)
            j = index.get(w)
            if j is None:
                if len(elems) >= cap:
                    raise CapExceededError(f"group too large (closure cap {cap})")
                j = len(elems)
                index[w] = j
                elems.append(w)
                edges.append((head - 1, gi, j))
    n = len(elems)
    # gen_step[x, gi] = index of elems[x] followed by gens[gi]
    gen_step = np.empty((n, max(len(gens), 1)), dtype=np.int32)
    for gi, g in enumerate(gens):
        for x, e in enumerate(elems):
            gen_step[x, gi] = index[_compose(e, g)]
    # table column for a BFS child b = parent * gen is the gen-step of column parent
    table = np.empty((n, n), dtype=np.int32)
    table[:, 0] = np.arange(n, dtype=np.int32)
    for parent, gi, child in edges:
        table[:, child] = gen_step[table[:, parent], gi]
    names = [perm_cycle_string(e) for e in elems]
    return FiniteGroup(table, names=names)


def perm_cycle_string(p: Sequence[int]) -> str:
    """Cycle notation for a permutation, 0-based; '()' for the identity."""
    seen, out = set(), []
    for i in range(len(p)):
        if i in seen or p[i] == i:
            continue
        cyc, j = [i], p[i]
        while j != i:
            seen.add(j)
            cyc.append(j)
            j = p[j]
        out.append("(" + " ".join(map(str, cyc)) + ")")
    return "".join(out) if out else "()"


# -- conjugacy structure ----------------------------------------------------


def conjugacy_classes(G: FiniteGroup) -> ClassPartition:
    """Conjugacy classes, ordered by (size, smallest member)."""
    n, tab, inv = G.order, G.table, G.inverse
    seen = np.zeros(n, dtype=bool)
    classes = []
    all_g = np.arange(n)
    for x in range(n):
        if seen[x]:
            continue
        orbit = np.unique(tab[tab[inv, x], all_g])
        seen[orbit] = True
        classes.append(tuple(int(v) for v in orbit))
    classes.sort(key=lambda c: (len(c), c[0]))
    return ClassPartition(tuple(classes))


def closure(G: FiniteGroup, seed: Iterable[int]) -> tuple[int, ...]:
    """Subgroup generated by a seed set, as a sorted element tuple."""
    tab = G.table
    members = {0}
    queue = [0]
    seed = [s for s in dict.fromkeys(seed)]
    head = 0
    while head < len(queue):
        e = queue[head]
        head += 1
        for s in seed:
            w = int(tab[e, s])
            if w not in members:
                members.add(w)
                queue.append(w)
    return tuple(sorted(members))


def normal_closure(G: FiniteGroup, x: int) -> tuple[int, ...]:
    """Smallest normal subgroup containing x (closure of its class)."""
    n, tab, inv = G.order, G.table, G.inverse
    cls = np.unique(tab[tab[inv, x], np.arange(n)])
    return closure(G, (int(v) for v in cls))


def _is_simple_group(H: FiniteGroup) -> bool:
    if H.order == 1:
        return False
    part = conjugacy_classes(H)
    for cls in part.classes[1:]:
        if len(normal_closure(H, cls[0])) != H.order:
            return False
    return True


def socle(G: FiniteGroup) -> Subgroup:
    """Product of all minimal normal subgroups.

    Every normal closure of a single element contains a minimal normal
    subgroup, so the minimal elements among those closures are exactly the
    minimal normal subgroups.  Closures are memoized per conjugacy class.
    """
    if G.order == 1:
        raise InvalidInputError("socle undefined for the trivial group")
    part = conjugacy_classes(G)
    closures = {}
    for cls in part.classes[1:]:
        closures[cls[0]] = frozenset(normal_closure(G, cls[0]))
    distinct = set(closures.values())
    minimal = [
        c for c in distinct if not any(d < c for d in distinct)
    ]
    seed: set[int] = set()
    for c in minimal:
        seed.update(c)
    return Subgroup(G, closure(G, sorted(seed)))


def is_almost_simple(G: FiniteGroup) -> bool:
    """True iff soc(G) is a nonabelian simple group."""
    if G.order == 1:
        return False
    soc = socle(G)
    H, _ = soc.as_group()
    if H.is_abelian:
        return False
    return _is_simple_group(H)


# -- subgroups over the socle ------------------------------------------------


def _all_subgroups_small(Q: FiniteGroup) -> list[tuple[int, ...]]:
    """All subgroups of a small group, by closing one added element at a time."""
    found = {(0,)}
    frontier = [(0,)]
    while frontier:
        H = frontier.pop()
        mem = set(H)
        for x in range(1, Q.order):
            if x in mem:
                continue
            ext = closure(Q, list(H) + [x])
            if ext not in found:
                found.add(ext)
                frontier.append(ext)
    return sorted(found, key=lambda h: (len(h), h))


def subgroups_over_socle(G: FiniteGroup, require_normal: bool) -> list[Subgroup]:
    """All H with soc(G) <= H <= G, via subgroups of G/soc(G) pulled back."""
    soc = socle(G)
    Q, pi = quotient_with_epimorphism(G, soc)
    out = []
    for hq in _all_subgroups_small(Q):
        hq_set = set(hq)
        elems = tuple(g for g in range(G.order) if int(pi.map[g]) in hq_set)
        H = Subgroup(G, elems)
        if require_normal and not H.is_normal:
            continue
        out.append(H)
    out.sort(key=lambda h: (h.order, h.elements))
    return out


# -- quotients ---------------------------------------------------------------


@dataclass
class Epimorphism:
    """Surjective homomorphism onto a quotient, as an index map array."""

    source: FiniteGroup
    target: FiniteGroup
    map: np.ndarray
    kernel_fibers: list[tuple[int, ...]]

    def __post_init__(self):
        m = np.asarray(self.map, dtype=np.int32)
        self.map = m
        src, tgt = self.source.table, self.target.table
        if not np.array_equal(m[src], tgt[m[:, None], m[None, :]]):
            raise InvalidInputError("map is not a homomorphism")
        if len(np.unique(m)) != self.target.order:
            raise InvalidInputError("map is not surjective")


def quotient_with_epimorphism(G: FiniteGroup, N: Subgroup) -> tuple[FiniteGroup, Epimorphism]:
    """Quotient G/N on smallest-index coset representatives, N normal."""
    if N.parent is not G and N.parent != G:
        raise InvalidInputError("subgroup does not belong to this group")
    if not N.is_normal:
        raise InvalidInputError("subgroup is not normal")
    n = G.order
    coset_id = np.full(n, -1, dtype=np.int32)
    reps: list[int] = []
    fibers: list[tuple[int, ...]] = []
    helems = np.asarray(N.elements, dtype=np.int32)
    for g in range(n):
        if coset_id[g] < 0:
            members = G.table[helems, g]
            coset_id[members] = len(reps)
            reps.append(g)
            fibers.append(tuple(int(v) for v in np.sort(members)))
    m = len(reps)
    reps_arr = np.asarray(reps, dtype=np.int32)
    qtab = coset_id[G.table[np.ix_(reps_arr, reps_arr)]]
    names = None
    if G.names is not None:
        names = [G.names[r] for r in reps]
    Q = FiniteGroup(qtab, names=names, check=False)
    return Q, Epimorphism(G, Q, coset_id, fibers)


# -- automorphisms and isomorphisms -------------------------------------------


def greedy_generators(G: FiniteGroup) -> list[int]:
    """Short generating sequence: start from a maximal-order element, then
    greedily add the element that grows the closure most (ties: smallest index).
    """
    if G.order == 1:
        return []
    orders = [G.element_order(x) for x in range(G.order)]
    best = max(range(1, G.order), key=lambda x: (orders[x], -x))
    gens = [best]
    current = closure(G, gens)
    while len(current) < G.order:
        mem = set(current)
        best_x, best_len = -1, len(current)
        for x in range(1, G.order):
            if x in mem:
                continue
            ln = len(closure(G, gens + [x]))
            if ln > best_len:
                best_x, best_len = x, ln
                if ln == G.order:
                    break
        gens.append(best_x)
        current = closure(G, gens)
    return gens


def _class_fingerprints(G: FiniteGroup) -> tuple[np.ndarray, dict]:
    """Isomorphism-invariant fingerprint per element.

    Combines element order, class size, and power-map data; used to prune
    candidate images in automorphism/isomorphism backtracking.
    """
    part = conjugacy_classes(G)
    cls_of = part.class_of_array(G.order)
    sizes = [len(c) for c in part.classes]
    orders = [G.element_order(c[0]) for c in part.classes]
    base = {i: (orders[i], sizes[i]) for i in range(part.k)}
    fps = {}
    for i, cls in enumerate(part.classes):
        x = cls[0]
        powers = []
        y = x
        for _ in range(orders[i] - 1):
            powers.append(base[int(cls_of[y])])
            y = G.mul(y, x)
        fps[i] = (orders[i], sizes[i], tuple(powers))
    elem_fp = [fps[int(cls_of[x])] for x in range(G.order)]
    return cls_of, {"elem": elem_fp, "class": fps}


def _extend_partial_map(
    src: FiniteGroup,
    dst: FiniteGroup,
    gens: list[int],
    images: list[int],
) -> Optional[np.ndarray]:
    """Extend gens -> images to a full homomorphism by closing the Cayley graph.

    Returns the full index map or None on any conflict or non-injectivity.
    Consistency is checked on every (element, generator) edge, which makes a
    completed map a genuine isomorphism of the tables.
    """
    n = src.order
    m = np.full(n, -1, dtype=np.int32)
    used = np.zeros(dst.order, dtype=bool)
    m[0] = 0
    used[0] = True
    queue = [0]
    head = 0
    ts, td = src.table, dst.table
    while head < len(queue):
        a = queue[head]
        head += 1
        ma = m[a]
        for g, h in zip(gens, images):
            x = int(ts[a, g])
            y = int(td[ma, h])
            if m[x] < 0:
                if used[y]:
                    return None
                m[x] = y
                used[y] = True
                queue.append(x)
            elif m[x] != y:
                return None
    if len(queue) < n:
        return None
    return m


def automorphism_group(G: FiniteGroup, cap: int = DEFAULT_AUT_CAP) -> list[np.ndarray]:
    """All automorphisms of G as permutations of {0..n-1} fixing 0.

    Backtracking over images of a greedy generating sequence, pruned by
    class fingerprints (order, class size, power classes).
    """
    if G.order > cap:
        raise CapExceededError(f"automorphism search capped at order {cap}")
    if G._aut_cache is not None:
        return list(G._aut_cache)
    found = _isomorphisms_all(G, G)
    G._aut_cache = found
    return list(found)


def _isomorphisms_all(G: FiniteGroup, H: FiniteGroup, first_only: bool = False):
    if G.order != H.order:
        return []
    if G.order == 1:
        return [np.zeros(1, dtype=np.int32)]
    _, fp_g = _class_fingerprints(G)
    _, fp_h = _class_fingerprints(H)
    if sorted(fp_g["elem"]) != sorted(fp_h["elem"]):
        return []
    gens = greedy_generators(G)
    pools = []
    for g in gens:
        fp = fp_g["elem"][g]
        pools.append([x for x in range(H.order) if fp_h["elem"][x] == fp])
    out = []

    def rec(depth: int, images: list[int]):
        if depth == len(gens):
            m = _extend_partial_map(G, H, gens, images)
            if m is not None:
                out.append(m)
            return len(out) > 0 and first_only
        for cand in pools[depth]:
            # quick order-of-product prune using the previous image
            if depth > 0:
                a = G.mul(gens[depth - 1], gens[depth])
                b = H.mul(images[-1], cand)
                if fp_g["elem"][a] != fp_h["elem"][b]:
                    continue
            if rec(depth + 1, images + [cand]):
                return True
        return False

    rec(0, [])
    return out


def group_isomorphisms(
    G: FiniteGroup, H: FiniteGroup
) -> Optional[tuple[np.ndarray, list[np.ndarray]]]:
    """One isomorphism G -> H plus Aut(H), or None.

    The full isomorphism set is the returned map composed with each
    automorphism of H.
    """
    reps = _isomorphisms_all(G, H, first_only=True)
    if not reps:
        return None
    return reps[0], automorphism_group(H)
