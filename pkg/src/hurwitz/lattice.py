"""Shared per-group store of braid classes, avoiding raw orbit expansion.

Classes are built by extending known classes one letter at a time.  A class
of length-d tuples is stored as its set of *states* (c, a), where c is the
class of the first d-1 entries and a is the last entry: two tuples with the
same state are connected by braid moves fixing the last strand, so an orbit
is exactly a closed union of state fibers.  The closure of a start state
under the last-strand move

    q + (b, a)  ->  q + (a, b^a)        (and its inverse)

can therefore be computed on states alone; the recursive identification of
the shortened prefixes lands one level down and is memoised.  Canonical
(lexicographically minimal) representatives and exact orbit sizes fall out
of the same recursion:

    canon(X) = min over states (c, a) of canon(c) + (a,)
    size(X)  = sum over states (c, a) of size(c)

so they agree with what a full breadth-first expansion would report while
touching only as many nodes as there are classes below X.  Orbit sizes at
deep levels are astronomical; canonical representatives stay a few dozen
letters long.

Every class ever identified is interned, so equivalence of two tuples is a
fold of `append` calls followed by an id comparison, and complete class
sets per Nielsen type come from extending the complete sets one level
below (every class has a representative ending in any class with positive
count, because braid moves carry an entry to the last slot within its
conjugacy class).
"""

from __future__ import annotations

import sys

from .braid import Caps, DEFAULT_CAPS, OrbitClass
from .errors import CapExceeded
from .groups import FiniteGroup, SubgroupMask, closure_bits


class OrbitLattice:
    def __init__(self, G: FiniteGroup, max_nodes: int = DEFAULT_CAPS.lattice_nodes):
        self.G = G
        self.max_nodes = max_nodes
        # identification recurses one level per letter; allow long words
        if sys.getrecursionlimit() < 10_000:
            sys.setrecursionlimit(10_000)
        n = G.order
        self._n = n
        self._use_bytes = n <= 256
        ct = G.classes
        self._class_of = ct.class_of
        self._nclasses = ct.count
        # node storage, parallel lists indexed by node id
        self._states: list[tuple[int, ...]] = []  # flat (child, letter) pairs
        self._size: list[int] = []
        self._ev: list[int] = []
        self._sub: list[int] = []
        self._level_id: list[int] = []
        self._canon: list = []
        self._levels: dict[tuple[int, ...], int] = {}
        self._level_list: list[tuple[int, ...]] = []
        self._intern: dict[tuple[int, tuple[int, ...]], int] = {}
        self._append_memo: dict[int, int] = {}
        self._classes_at: dict[tuple[int, ...], tuple[int, ...]] = {}
        self._sub_memo: dict[tuple[int, int], int] = {}
        self._first_letters: dict[int, int] = {}
        # node 0: the empty tuple's class
        zero = (0,) * self._nclasses
        self._levels[zero] = 0
        self._level_list.append(zero)
        self._states.append(())
        self._size.append(1)
        self._ev.append(0)
        self._sub.append(1)  # {identity}
        self._level_id.append(0)
        self._canon.append(b"" if self._use_bytes else ())

    # -- accessors ---------------------------------------------------------

    def level(self, node: int) -> tuple[int, ...]:
        return self._level_list[self._level_id[node]]

    def size(self, node: int) -> int:
        return self._size[node]

    def ev(self, node: int) -> int:
        return self._ev[node]

    def sub_bits(self, node: int) -> int:
        return self._sub[node]

    def canonical(self, node: int) -> tuple[int, ...]:
        return tuple(self._canon[node])

    def node_count(self) -> int:
        return len(self._size)

    def orbit_class(self, node: int) -> OrbitClass:
        return OrbitClass(
            canonical=self.canonical(node),
            size=self._size[node],
            ev=self._ev[node],
            nu=self.level(node),
            subgroup=SubgroupMask(self._sub[node], self.G.order),
        )

    # -- construction --------------------------------------------------------

    def _level_index(self, level: tuple[int, ...]) -> int:
        lid = self._levels.get(level)
        if lid is None:
            lid = len(self._level_list)
            self._levels[level] = lid
            self._level_list.append(level)
        return lid

    def _subgroup_with(self, bits: int, g: int) -> int:
        key = (bits, g)
        hit = self._sub_memo.get(key)
        if hit is None:
            hit = closure_bits(self.G, bits, g)
            self._sub_memo[key] = hit
        return hit

    def append(self, node: int, g: int) -> int:
        """Class of rep(node) + (g,): the one-letter extension."""
        n = self._n
        key = node * n + g
        hit = self._append_memo.get(key)
        if hit is not None:
            return hit
        conj = self.G.conj_table
        inv = self.G.inv
        start = (node, g)
        seen = {start}
        stack = [start]
        append = self.append
        states_of = self._states
        while stack:
            c, a = stack.pop()
            st = states_of[c]
            for k in range(0, len(st), 2):
                c2, b = st[k], st[k + 1]
                # forward move on the last two strands: (b, a) -> (a, b^a)
                s1 = (append(c2, a), conj[b][a])
                if s1 not in seen:
                    seen.add(s1)
                    stack.append(s1)
                # inverse move: (b, a) -> (b a b^-1, b)
                s2 = (append(c2, conj[a][inv[b]]), b)
                if s2 not in seen:
                    seen.add(s2)
                    stack.append(s2)
        flat: list[int] = []
        for c, a in sorted(seen):
            flat.append(c)
            flat.append(a)
        states = tuple(flat)
        base_level = self.level(node)
        cid = self._class_of[g]
        level = base_level[:cid] + (base_level[cid] + 1,) + base_level[cid + 1 :]
        lid = self._level_index(level)
        ikey = (lid, states)
        nid = self._intern.get(ikey)
        if nid is None:
            nid = len(self._size)
            if nid >= self.max_nodes:
                raise CapExceeded("class lattice exceeds node cap", nid)
            self._intern[ikey] = nid
            self._states.append(states)
            self._size.append(sum(self._size[states[k]] for k in range(0, len(states), 2)))
            self._ev.append(self.G.mul[self._ev[node]][g])
            self._sub.append(self._subgroup_with(self._sub[node], g))
            self._level_id.append(lid)
            if self._use_bytes:
                canon = min(self._canon[states[k]] + bytes((states[k + 1],))
                            for k in range(0, len(states), 2))
            else:
                canon = min(self._canon[states[k]] + (states[k + 1],)
                            for k in range(0, len(states), 2))
            self._canon.append(canon)
        # every state of the class is itself a one-letter extension landing here
        memo = self._append_memo
        for k in range(0, len(states), 2):
            memo[states[k] * n + states[k + 1]] = nid
        return nid

    def append_word(self, node: int, word: tuple[int, ...]) -> int:
        for g in word:
            node = self.append(node, g)
        return node

    def class_of(self, v: tuple[int, ...]) -> int:
        """Identify the class of an arbitrary tuple by folding appends."""
        return self.append_word(0, tuple(v))

    def classes_at(self, nu: tuple[int, ...]) -> tuple[int, ...]:
        """Complete class set at a Nielsen level, sorted by canonical rep."""
        nu = tuple(nu)
        if len(nu) != self._nclasses:
            raise ValueError(f"level has {len(nu)} entries, group has {self._nclasses} classes")
        hit = self._classes_at.get(nu)
        if hit is not None:
            return hit
        pivot = -1
        for i, c in enumerate(nu):
            if c < 0:
                raise ValueError("negative Nielsen count")
            if c > 0 and pivot < 0:
                pivot = i
        if pivot < 0:
            result: tuple[int, ...] = (0,)
        else:
            below = self.classes_at(nu[:pivot] + (nu[pivot] - 1,) + nu[pivot + 1 :])
            members = self.G.classes.members[pivot]
            found = {self.append(c, g) for c in below for g in members}
            result = tuple(sorted(found, key=lambda nid: self._canon[nid]))
        self._classes_at[nu] = result
        return result

    def first_letters(self, node: int) -> int:
        """Bitmask of elements that begin some member of the class."""
        hit = self._first_letters.get(node)
        if hit is not None:
            return hit
        st = self._states[node]
        bits = 0
        for k in range(0, len(st), 2):
            c, a = st[k], st[k + 1]
            bits |= (1 << a) if c == 0 else self.first_letters(c)
        self._first_letters[node] = bits
        return bits


def get_lattice(G: FiniteGroup, caps: Caps = DEFAULT_CAPS) -> OrbitLattice:
    """Per-group shared lattice; groups are immutable so reuse is safe."""
    lat = getattr(G, "_lattice", None)
    if lat is None:
        lat = OrbitLattice(G, caps.lattice_nodes)
        G._lattice = lat
    elif caps.lattice_nodes > lat.max_nodes:
        lat.max_nodes = caps.lattice_nodes
    return lat
