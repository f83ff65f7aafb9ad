"""Subgroup lattices, sections, double cosets, and isomorphism search.

Enumeration is exhaustive closure BFS seeded by cyclic subgroups, with
extensions restricted to coset representatives (extending a subgroup by
any element of a coset Hx yields the same subgroup, so one representative
per coset suffices).  Results are deterministic: subgroups are sorted by
(order, element list) and conjugacy classes are represented by their
lexicographically least member.
"""

from __future__ import annotations

from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .errors import Budget, NO_BUDGET, PreconditionError
from .groups import FiniteGroup, Section, Subgroup, quotient_group

ElementTuple = Tuple[int, ...]


def closure(G: FiniteGroup, gens: Sequence[int]) -> ElementTuple:
    """Subgroup generated by ``gens`` (positive words suffice: finite order)."""
    mul = G.mul
    seen = {0}
    gens = [g for g in gens if g]
    stack = [0]
    while stack:
        x = stack.pop()
        row = mul[x]
        for g in gens:
            y = row[g]
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return tuple(sorted(seen))


class SubgroupLattice:
    """All subgroups of a group, with conjugacy classes and fast lookup."""

    def __init__(self, group: FiniteGroup, subgroups: List[ElementTuple],
                 classes: List[List[int]]):
        self.group = group
        self.subgroups = subgroups
        self.index: Dict[frozenset, int] = {
            frozenset(s): i for i, s in enumerate(subgroups)}
        self.classes = classes
        self.class_of = [0] * len(subgroups)
        self.rep_of = [0] * len(subgroups)
        for ci, members in enumerate(classes):
            rep = members[0]
            for m in members:
                self.class_of[m] = ci
                self.rep_of[m] = rep

    def class_reps(self) -> List[ElementTuple]:
        return [self.subgroups[c[0]] for c in self.classes]

    def canonical(self, elements: Iterable[int]) -> ElementTuple:
        idx = self.index[frozenset(elements)]
        return self.subgroups[self.rep_of[idx]]

    def subgroup_index(self, elements: Iterable[int]) -> int:
        return self.index[frozenset(elements)]


def _enumerate_subgroups(G: FiniteGroup, budget: Budget) -> List[ElementTuple]:
    mul = G.mul
    order = G.order
    found: Dict[frozenset, Tuple[ElementTuple, Tuple[int, ...]]] = {}
    triv = (0,)
    found[frozenset(triv)] = (triv, ())
    queue: List[Tuple[ElementTuple, Tuple[int, ...]]] = [(triv, ())]
    while queue:
        elems, gens = queue.pop()
        budget.check("subgroup enumeration", len(found))
        if len(elems) == order:
            continue
        eset = set(elems)
        # Extend only by representatives of the right cosets Hx.
        covered = bytearray(order)
        for x in elems:
            covered[x] = 1
        for x in range(1, order):
            if covered[x]:
                continue
            for h in elems:
                covered[mul[h][x]] = 1
            new_gens = gens + (x,)
            new = closure(G, new_gens)
            key = frozenset(new)
            if key not in found:
                found[key] = (new, new_gens)
                queue.append((new, new_gens))
    subs = sorted((s for s, _ in found.values()), key=lambda t: (len(t), t))
    return subs


def _conjugacy_classes(G: FiniteGroup,
                       subgroups: List[ElementTuple]) -> List[List[int]]:
    mul, inv = G.mul, G.inv
    index = {frozenset(s): i for i, s in enumerate(subgroups)}
    seen = [False] * len(subgroups)
    classes: List[List[int]] = []
    for i, s in enumerate(subgroups):
        if seen[i]:
            continue
        members = set()
        for g in range(G.order):
            gi = inv[g]
            conj = frozenset(mul[mul[g][x]][gi] for x in s)
            members.add(index[conj])
        cls = sorted(members)
        for m in cls:
            seen[m] = True
        classes.append(cls)
    # Subgroups are (order, lex)-sorted, so members[0] is the least member
    # of each class; order classes by that representative.
    classes.sort(key=lambda c: c[0])
    return classes


_LATTICE_MEMO: Dict[str, SubgroupLattice] = {}

# optional (loader, saver) pair installed by the disk cache layer
_DISK_HOOKS = None


def set_disk_hooks(hooks) -> None:
    global _DISK_HOOKS
    _DISK_HOOKS = hooks


def get_lattice(G: FiniteGroup, budget: Optional[Budget] = None) -> SubgroupLattice:
    lat = _LATTICE_MEMO.get(G.key)
    if lat is None and _DISK_HOOKS is not None:
        lat = _DISK_HOOKS[0](G)
    if lat is None:
        b = budget or NO_BUDGET
        subs = _enumerate_subgroups(G, b)
        classes = _conjugacy_classes(G, subs)
        lat = SubgroupLattice(G, subs, classes)
        _LATTICE_MEMO[G.key] = lat
        if _DISK_HOOKS is not None:
            _DISK_HOOKS[1](lat)
    return lat


def seed_lattice(G: FiniteGroup, subgroups: List[ElementTuple],
                 classes: List[List[int]]) -> SubgroupLattice:
    """Install precomputed lattice data (used by the cache layer)."""
    lat = SubgroupLattice(G, subgroups, classes)
    _LATTICE_MEMO[G.key] = lat
    return lat


def clear_lattice_memo() -> None:
    _LATTICE_MEMO.clear()


def all_subgroups(G: FiniteGroup, budget: Optional[Budget] = None) -> List[Subgroup]:
    lat = get_lattice(G, budget)
    return [Subgroup(G, s, validate=False) for s in lat.subgroups]


def subgroup_conjugacy_classes(G: FiniteGroup,
                               budget: Optional[Budget] = None
                               ) -> List[List[Subgroup]]:
    lat = get_lattice(G, budget)
    return [[Subgroup(G, lat.subgroups[i], validate=False) for i in cls]
            for cls in lat.classes]


def double_coset_reps(A: Iterable[int], G: FiniteGroup,
                      B: Iterable[int]) -> List[int]:
    """One representative per double coset AgB, in ascending element order."""
    mul = G.mul
    a_elems = list(A)
    b_elems = list(B)
    covered = bytearray(G.order)
    reps: List[int] = []
    for g in range(G.order):
        if covered[g]:
            continue
        reps.append(g)
        for a in a_elems:
            ag = mul[a][g]
            row = mul[ag]
            for b in b_elems:
                covered[row[b]] = 1
    return reps


# ---------------------------------------------------------------------------
# Sections
# ---------------------------------------------------------------------------

def _normal_pairs(G: FiniteGroup, lat: SubgroupLattice,
                  budget: Budget) -> List[Tuple[int, int]]:
    """All (T, S) subgroup index pairs with S normal in T."""
    pairs: List[Tuple[int, int]] = []
    sets = [frozenset(s) for s in lat.subgroups]
    mul, inv = G.mul, G.inv
    for ti, t in enumerate(lat.subgroups):
        budget.check("section enumeration", len(pairs))
        tset = sets[ti]
        for si, s in enumerate(lat.subgroups):
            if len(s) > len(t) or len(t) % len(s) or not sets[si] <= tset:
                continue
            sset = sets[si]
            if all(mul[mul[g][x]][inv[g]] in sset for g in t for x in s):
                pairs.append((ti, si))
    return pairs


def section_classes(G: FiniteGroup, budget: Optional[Budget] = None
                    ) -> List[List[Tuple[ElementTuple, ElementTuple]]]:
    """Conjugacy classes of sections (T, S) under simultaneous conjugation."""
    b = budget or NO_BUDGET
    lat = get_lattice(G, b)
    pairs = _normal_pairs(G, lat, b)
    pair_key = {(lat.subgroups[t], lat.subgroups[s]): k
                for k, (t, s) in enumerate(pairs)}
    mul, inv = G.mul, G.inv
    seen = [False] * len(pairs)
    classes: List[List[Tuple[ElementTuple, ElementTuple]]] = []
    for k, (ti, si) in enumerate(pairs):
        if seen[k]:
            continue
        t, s = lat.subgroups[ti], lat.subgroups[si]
        members = set()
        for g in range(G.order):
            gi = inv[g]
            ct = tuple(sorted(mul[mul[g][x]][gi] for x in t))
            cs = tuple(sorted(mul[mul[g][x]][gi] for x in s))
            members.add((ct, cs))
        cls = sorted(members)
        for m in cls:
            seen[pair_key[m]] = True
        classes.append(cls)
    classes.sort(key=lambda c: c[0])
    return classes


def make_section(G: FiniteGroup, t: ElementTuple, s: ElementTuple) -> Section:
    return Section(Subgroup(G, t, validate=False), Subgroup(G, s, validate=False))


# ---------------------------------------------------------------------------
# Isomorphism and automorphisms
# ---------------------------------------------------------------------------

def generating_sequence(G: FiniteGroup) -> List[int]:
    """Small generating list found greedily over ascending elements."""
    gens: List[int] = []
    span = {0}
    for x in range(1, G.order):
        if x not in span:
            gens.append(x)
            span = set(closure(G, gens))
            if len(span) == G.order:
                break
    return gens


def _centralizer_size(G: FiniteGroup, x: int) -> int:
    mul = G.mul
    return sum(1 for g in range(G.order) if mul[g][x] == mul[x][g])


def _element_invariants(G: FiniteGroup) -> List[Tuple[int, int]]:
    return [(G.element_order(x), _centralizer_size(G, x))
            for x in range(G.order)]


def _close_with_images(G: FiniteGroup, H: FiniteGroup,
                       gens: Sequence[int], images: Sequence[int]
                       ) -> Optional[Dict[int, int]]:
    """Extend gen -> image to a map on <gens>, or None on inconsistency.

    The map is built by parallel BFS and then verified to be a
    homomorphism on the whole closure (which may be a proper subgroup).
    """
    gmul, hmul = G.mul, H.mul
    phi: Dict[int, int] = {0: 0}
    order_elems = [0]
    for g, img in zip(gens, images):
        if g in phi:
            if phi[g] != img:
                return None
        else:
            phi[g] = img
            order_elems.append(g)
    stack = list(order_elems)
    while stack:
        x = stack.pop()
        for g, img in zip(gens, images):
            y = gmul[x][g]
            fy = hmul[phi[x]][img]
            if y in phi:
                if phi[y] != fy:
                    return None
            else:
                phi[y] = fy
                stack.append(y)
    elems = list(phi)
    for a in elems:
        fa = phi[a]
        for b in elems:
            c = gmul[a][b]
            if c in phi and phi[c] != hmul[fa][phi[b]]:
                return None
    return phi


def _iso_search(G: FiniteGroup, H: FiniteGroup, *, find_all: bool
                ) -> List[List[int]]:
    gens = generating_sequence(G)
    inv_g = _element_invariants(G)
    inv_h = _element_invariants(H)
    candidates = [[y for y in range(H.order) if inv_h[y] == inv_g[g]]
                  for g in gens]
    if any(not c for c in candidates):
        return []
    results: List[List[int]] = []
    images: List[int] = []

    def extend(i: int) -> bool:
        if i == len(gens):
            phi = _close_with_images(G, H, gens, images)
            if (phi is not None and len(phi) == G.order
                    and len(set(phi.values())) == G.order):
                out = [0] * G.order
                for k, v in phi.items():
                    out[k] = v
                results.append(out)
                return not find_all
            return False
        for y in candidates[i]:
            images.append(y)
            # prune: partial map must already be consistent
            if _partial_ok(G, H, gens, images):
                if extend(i + 1):
                    return True
            images.pop()
        return False

    extend(0)
    return results


def _partial_ok(G: FiniteGroup, H: FiniteGroup, gens: Sequence[int],
                images: Sequence[int]) -> bool:
    sub = closure(G, gens[:len(images)])
    if len(sub) != len(closure(H, images)):
        return False
    return _close_with_images(G, H, gens[:len(images)], images) is not None


_ISO_MEMO: Dict[Tuple[str, str], Optional[List[int]]] = {}


def is_isomorphic(G: FiniteGroup, H: FiniteGroup) -> Optional[List[int]]:
    """Explicit isomorphism G -> H as an image list, or None."""
    if G.order != H.order:
        return None
    if G.key == H.key:
        return list(range(G.order))
    memo_key = (G.key, H.key)
    if memo_key in _ISO_MEMO:
        return _ISO_MEMO[memo_key]
    result: Optional[List[int]] = None
    if (G.order_histogram() == H.order_histogram()
            and G.is_abelian() == H.is_abelian()):
        found = _iso_search(G, H, find_all=False)
        result = found[0] if found else None
    _ISO_MEMO[memo_key] = result
    return result


def automorphisms(G: FiniteGroup, *, order_cap: int = 64
                  ) -> Tuple[List[List[int]], int, int]:
    """All automorphisms, |Inn|, and |Out| = |Aut| / |Inn|."""
    if G.order > order_cap:
        raise PreconditionError(
            f"automorphism search capped at order {order_cap}, group has {G.order}")
    auts = _iso_search(G, G, find_all=True)
    inner = G.order // len(G.center())
    out_order = len(auts) // inner
    return auts, inner, out_order


# ---------------------------------------------------------------------------
# Subquotients and structural predicates
# ---------------------------------------------------------------------------

_SUBQ_MEMO: Dict[str, List[Tuple[FiniteGroup, Section]]] = {}


def subquotients_up_to_iso(G: FiniteGroup, budget: Optional[Budget] = None
                           ) -> List[Tuple[FiniteGroup, Section]]:
    """One group per isomorphism type of subquotient, with a witness section."""
    hit = _SUBQ_MEMO.get(G.key)
    if hit is not None:
        return hit
    b = budget or NO_BUDGET
    out: List[Tuple[FiniteGroup, Section]] = []
    for cls in section_classes(G, b):
        t, s = cls[0]
        sec = make_section(G, t, s)
        q = sec.quotient()
        if not any(is_isomorphic(q, known) is not None for known, _ in out):
            out.append((q, sec))
    out.sort(key=lambda pair: (pair[0].order, pair[0].order_histogram()))
    _SUBQ_MEMO[G.key] = out
    return out


def normal_subgroup_reps(G: FiniteGroup) -> List[ElementTuple]:
    """Normal subgroups of G (each is a singleton conjugacy class)."""
    lat = get_lattice(G)
    return [lat.subgroups[cls[0]] for cls in lat.classes if len(cls) == 1]


def quotient_types(G: FiniteGroup) -> List[Tuple[FiniteGroup, ElementTuple]]:
    """All quotients G/N with their kernels, smallest kernels first."""
    out = []
    for n in normal_subgroup_reps(G):
        Q, _ = quotient_group(G, Subgroup(G, n, validate=False))
        out.append((Q, n))
    return out


def find_quotient_isomorphic_to(G: FiniteGroup, H: FiniteGroup
                                ) -> Optional[Tuple[ElementTuple, List[int]]]:
    """Search a normal N with G/N isomorphic to H; returns (N, iso) or None.

    The iso maps the quotient group (coset numbering of quotient_group)
    onto H.
    """
    target = G.order // H.order if H.order and G.order % H.order == 0 else None
    if target is None:
        return None
    for n in normal_subgroup_reps(G):
        if len(n) != target:
            continue
        Q, _ = quotient_group(G, Subgroup(G, n, validate=False))
        phi = is_isomorphic(Q, H)
        if phi is not None:
            return n, phi
    return None


def sylow_subgroup(G: FiniteGroup, within: ElementTuple, q: int
                   ) -> Optional[ElementTuple]:
    """A Sylow q-subgroup of the subgroup ``within``, from the lattice."""
    lat = get_lattice(G)
    m = len(within)
    qpart = 1
    while m % q == 0:
        qpart *= q
        m //= q
    wset = frozenset(within)
    for s in lat.subgroups:
        if len(s) == qpart and frozenset(s) <= wset:
            return s
    return None


def _prime_factors(n: int) -> List[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def is_nilpotent_section(G: FiniteGroup, t: ElementTuple) -> bool:
    """All Sylow subgroups of the subgroup t are normal in t."""
    mul, inv = G.mul, G.inv
    for q in _prime_factors(len(t)):
        syl = sylow_subgroup(G, t, q)
        if syl is None:
            return False
        sset = frozenset(syl)
        if not all(mul[mul[g][x]][inv[g]] in sset for g in t for x in syl):
            return False
    return True


def is_p_group_times_cyclic(G: FiniteGroup, t: ElementTuple, p: int) -> bool:
    """Structural test: t nilpotent with cyclic Sylow q for every q != p.

    Coprime cyclic factors merge into a single cyclic complement, so this
    is exactly "direct product of a p-group and a cyclic group".
    """
    if not is_nilpotent_section(G, t):
        return False
    for q in _prime_factors(len(t)):
        if q == p:
            continue
        syl = sylow_subgroup(G, t, q)
        if syl is None:
            return False
        if len(syl) not in [G.element_order(x) for x in syl]:
            return False
    return True
