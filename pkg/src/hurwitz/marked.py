"""Tuple spaces with an invariant prefix and the braid action on the tail.

An `ActionFamily` acts on tuples of shape prefix + tail: the built-in moves
are the braid moves on the tail's d positions, so restricted to the tail
the action is exactly the one from `braid`.  The marked family (prefix of
width k, Nielsen skip k) models covers carrying k extra markings: two
marked vectors are equivalent iff the prefixes agree and the tails are
braid equivalent, so class sets factor as G^k x (tail classes).

User-supplied extra moves on the full tuple are accepted as (move, inverse)
pairs; they are validated by sampling (invertibility, length and skipped
Nielsen preservation), not proved.  Enumeration with extra moves falls back
to brute closure over raw tuples.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Iterable

from .braid import (
    Caps,
    DEFAULT_CAPS,
    FiberSpec,
    OrbitClass,
    enumerate_classes,
    iter_fiber_tuples,
    nielsen,
    parse_tuple,
)
from .errors import CapExceeded, ParseError
from .groups import FiniteGroup
from .lattice import get_lattice

Move = Callable[[tuple[int, ...]], tuple[int, ...]]


@dataclass(frozen=True)
class ActionFamily:
    """Shape of the action: prefix width, Nielsen skip, optional extra moves."""

    prefix_len: int
    skip: int
    extra_moves: tuple[tuple[Move, Move], ...] = ()

    def __post_init__(self):
        if self.prefix_len < 0:
            raise ValueError("prefix width must be nonnegative")
        if not 0 <= self.skip <= self.prefix_len:
            raise ValueError("Nielsen skip must satisfy 0 <= skip <= prefix width")


@dataclass(frozen=True)
class MarkedVector:
    prefix: tuple[int, ...]
    tail: tuple[int, ...]

    def full(self) -> tuple[int, ...]:
        return self.prefix + self.tail


@dataclass(frozen=True)
class MarkedClass:
    """Equivalence class of marked vectors under a family's moves."""

    canonical: MarkedVector
    size: int
    nu: tuple[int, ...]  # generalized Nielsen type (entries past the skip)


def marked_family(k: int) -> ActionFamily:
    """Markings are plain labels: prefix width k, all k skipped by Nielsen."""
    return ActionFamily(prefix_len=k, skip=k)


def parse_family(spec: str) -> ActionFamily:
    spec = spec.strip()
    if spec == "plain":
        return marked_family(0)
    if spec.startswith("marked:"):
        try:
            return marked_family(int(spec.split(":", 1)[1]))
        except ValueError:
            raise ParseError(f"bad marked family spec {spec!r}") from None
    raise ParseError(f"unknown family spec {spec!r}")


def parse_marked(G: FiniteGroup, family: ActionFamily, text: str) -> MarkedVector:
    """Parse "prefix | tail" with tuple syntax on both sides."""
    if "|" in text:
        left, _, right = text.partition("|")
    else:
        left, right = "", text
    mv = MarkedVector(parse_tuple(G, left), parse_tuple(G, right))
    if len(mv.prefix) != family.prefix_len:
        raise ParseError(
            f"prefix has {len(mv.prefix)} entries, family expects {family.prefix_len}"
        )
    return mv


def marked_nielsen(G: FiniteGroup, family: ActionFamily, mv: MarkedVector) -> tuple[int, ...]:
    """Class counts of the entries past the family's skip."""
    return nielsen(G, mv.full(), skip=family.skip)


def validate_extra_moves(G: FiniteGroup, family: ActionFamily, length: int,
                         samples: int = 64, seed: int = 0) -> None:
    """Spot-check that extra moves are invertible and invariant-preserving."""
    rng = random.Random(seed)
    total = family.prefix_len + length
    for fwd, inv in family.extra_moves:
        for _ in range(samples):
            t = tuple(rng.randrange(G.order) for _ in range(total))
            u = fwd(t)
            if len(u) != total:
                raise ValueError("extra move changed the tuple length")
            if inv(u) != t:
                raise ValueError("extra move failed the inverse check on a sample")
            if nielsen(G, u, family.skip) != nielsen(G, t, family.skip):
                raise ValueError("extra move changed the skipped Nielsen type")


_accepted_moves: set = set()


def _accept_extra_moves(G: FiniteGroup, family: ActionFamily, length: int) -> None:
    """First use of a (group, family, length) triple runs the sampling check."""
    if not family.extra_moves:
        return
    key = (G.digest, family, length)
    if key not in _accepted_moves:
        validate_extra_moves(G, family, length)
        _accepted_moves.add(key)


def _full_closure(G: FiniteGroup, family: ActionFamily, start: tuple[int, ...],
                  caps: Caps) -> set[tuple[int, ...]]:
    """Brute closure under tail braid moves plus any extra moves."""
    r = family.prefix_len
    d = len(start) - r
    conj, inv = G.conj_table, G.inv
    seen = {start}
    stack = [start]
    while stack:
        t = stack.pop()
        nxt = []
        for i in range(r, r + d - 1):
            a, b = t[i], t[i + 1]
            head, tail = t[:i], t[i + 2 :]
            nxt.append(head + (b, conj[a][b]) + tail)
            nxt.append(head + (conj[b][inv[a]], a) + tail)
        for fwd, bwd in family.extra_moves:
            nxt.append(fwd(t))
            nxt.append(bwd(t))
        for u in nxt:
            if u not in seen:
                if len(seen) >= caps.orbit_states:
                    raise CapExceeded("marked orbit exceeds state cap", len(seen))
                seen.add(u)
                stack.append(u)
    return seen


def marked_orbit(G: FiniteGroup, family: ActionFamily, mv: MarkedVector,
                 caps: Caps = DEFAULT_CAPS) -> MarkedClass:
    """Class of a marked vector; canonical member is lexicographically minimal."""
    if len(mv.prefix) != family.prefix_len:
        raise ValueError("prefix width does not match the family")
    if not family.extra_moves:
        L = get_lattice(G, caps)
        node = L.class_of(mv.tail)
        canon = MarkedVector(mv.prefix, L.canonical(node))
        return MarkedClass(canon, L.size(node), marked_nielsen(G, family, canon))
    _accept_extra_moves(G, family, len(mv.tail))
    members = _full_closure(G, family, mv.full(), caps)
    best = min(members)
    r = family.prefix_len
    canon = MarkedVector(best[:r], best[r:])
    return MarkedClass(canon, len(members), marked_nielsen(G, family, canon))


def monoid_act(G: FiniteGroup, family: ActionFamily, x: MarkedClass | MarkedVector,
               v: OrbitClass | tuple[int, ...], caps: Caps = DEFAULT_CAPS) -> MarkedClass:
    """Juxtapose a plain class onto the tail; independent of representatives."""
    mv = x.canonical if isinstance(x, MarkedClass) else x
    word = v.canonical if isinstance(v, OrbitClass) else tuple(v)
    return marked_orbit(G, family, MarkedVector(mv.prefix, mv.tail + word), caps)


def enumerate_marked_classes(G: FiniteGroup, family: ActionFamily, tail_spec: FiberSpec,
                             prefixes: Iterable[tuple[int, ...]] | None = None,
                             caps: Caps = DEFAULT_CAPS) -> list[MarkedClass]:
    """Complete class list over prefix choices x one tail fiber.

    ``prefixes`` defaults to all of G^k in lexicographic order.  For the
    marked family the result is the Cartesian product of prefixes with the
    tail's class list; with extra moves a brute closure pass is used.
    """
    if prefixes is None:
        prefix_list = _all_prefixes(G.order, family.prefix_len)
    else:
        prefix_list = sorted(set(tuple(p) for p in prefixes))
        for p in prefix_list:
            if len(p) != family.prefix_len:
                raise ValueError(f"prefix {p} has wrong width")
    if not family.extra_moves:
        tails = enumerate_classes(G, tail_spec, caps)
        out = []
        for prefix in prefix_list:
            for t in tails:
                mvec = MarkedVector(prefix, t.canonical)
                out.append(MarkedClass(mvec, t.size, marked_nielsen(G, family, mvec)))
        return out
    _accept_extra_moves(G, family, tail_spec.length)
    seen: set[tuple[int, ...]] = set()
    out = []
    count = 0
    for prefix in prefix_list:
        for tail in iter_fiber_tuples(G, tail_spec):
            count += 1
            if count > caps.fiber_tuples:
                raise CapExceeded("marked fiber exceeds tuple cap", count)
            full = prefix + tail
            if full in seen:
                continue
            members = _full_closure(G, family, full, caps)
            seen.update(members)
            best = min(members)
            r = family.prefix_len
            mvec = MarkedVector(best[:r], best[r:])
            out.append(MarkedClass(mvec, len(members), marked_nielsen(G, family, mvec)))
    out.sort(key=lambda c: c.canonical.full())
    return out


def _all_prefixes(n: int, k: int) -> list[tuple[int, ...]]:
    out: list[tuple[int, ...]] = [()]
    for _ in range(k):
        out = [p + (x,) for p in out for x in range(n)]
    return out
