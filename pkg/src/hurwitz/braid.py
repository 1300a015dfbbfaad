"""Hurwitz vectors and the braid action on them.

A Hurwitz vector is a plain tuple of element indices.  The generator moves
are

    sigma(i):     (..., a, b, ...) -> (..., b, b^-1 a b, ...)
    sigma_inv(i): (..., a, b, ...) -> (..., a b a^-1, a, ...)

acting on positions i, i+1 (i is 1-based, 1 <= i <= d-1).  This orientation
keeps the left-to-right product of the entries invariant, which the whole
package relies on.  Braid equivalence means membership in the same orbit
under these moves; evaluation, Nielsen type and generated subgroup are
orbit invariants and are used as cheap prefilters everywhere.

Orbits can be expanded by brute breadth-first search (`orbit`,
`enumerate_classes(..., method="direct")`), which is the reference
implementation, or through the shared class lattice (see `lattice`), which
reaches Nielsen types whose raw fibers are astronomically large.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .errors import CapExceeded, ParseError
from .groups import FiniteGroup, GammaSet, SubgroupMask, subgroup_closure

# Default caps, per enumeration: orbit BFS states and fiber backtracking
# states.  Exceeding a cap raises CapExceeded instead of truncating.
DEFAULT_ORBIT_CAP = 10**8
DEFAULT_FIBER_CAP = 10**8
DEFAULT_LATTICE_CAP = 2 * 10**6


@dataclass(frozen=True)
class Caps:
    """Enumeration limits; one instance is threaded through a whole run."""

    orbit_states: int = DEFAULT_ORBIT_CAP
    fiber_tuples: int = DEFAULT_FIBER_CAP
    lattice_nodes: int = DEFAULT_LATTICE_CAP


DEFAULT_CAPS = Caps()


# -- moves and invariants ----------------------------------------------------


def sigma(G: FiniteGroup, i: int, v: tuple[int, ...]) -> tuple[int, ...]:
    """Positive braid move at position i (1-based)."""
    if not 1 <= i <= len(v) - 1:
        raise IndexError(f"sigma position {i} out of range for length {len(v)}")
    a, b = v[i - 1], v[i]
    return v[: i - 1] + (b, G.conj_table[a][b]) + v[i + 1 :]


def sigma_inv(G: FiniteGroup, i: int, v: tuple[int, ...]) -> tuple[int, ...]:
    """Inverse braid move at position i; undoes `sigma`."""
    if not 1 <= i <= len(v) - 1:
        raise IndexError(f"sigma position {i} out of range for length {len(v)}")
    a, b = v[i - 1], v[i]
    return v[: i - 1] + (G.conj_table[b][G.inv[a]], a) + v[i + 1 :]


def evaluate(G: FiniteGroup, v: tuple[int, ...]) -> int:
    """Left-to-right product of the entries; identity for the empty tuple."""
    acc = 0
    mul = G.mul
    for x in v:
        acc = mul[acc][x]
    return acc


def nielsen(G: FiniteGroup, v: tuple[int, ...], skip: int = 0) -> tuple[int, ...]:
    """Class-count vector of the entries past the first ``skip`` positions."""
    if skip > len(v):
        raise ValueError(f"skip {skip} exceeds length {len(v)}")
    ct = G.classes
    counts = [0] * ct.count
    for x in v[skip:]:
        counts[ct.class_of[x]] += 1
    return tuple(counts)


def generated_subgroup(G: FiniteGroup, v: tuple[int, ...]) -> SubgroupMask:
    return subgroup_closure(G, v)


def concat(v: tuple[int, ...], w: tuple[int, ...]) -> tuple[int, ...]:
    return v + w


# -- orbits -------------------------------------------------------------------


@dataclass(frozen=True)
class OrbitClass:
    """A braid-equivalence class: canonical member plus cached invariants.

    ``canonical`` is the lexicographically minimal orbit member under
    element-index order, so it is a total, deterministic class key.
    """

    canonical: tuple[int, ...]
    size: int
    ev: int
    nu: tuple[int, ...]
    subgroup: SubgroupMask

    @property
    def length(self) -> int:
        return len(self.canonical)


def orbit_members(G: FiniteGroup, v: tuple[int, ...], max_states: int | None = None) -> set[tuple[int, ...]]:
    """Full orbit of ``v`` as a set, by closure under sigma and sigma_inv."""
    cap = max_states if max_states is not None else DEFAULT_ORBIT_CAP
    d = len(v)
    if d < 2:
        return {v}
    conj = G.conj_table
    inv = G.inv
    seen = {v}
    stack = [v]
    while stack:
        t = stack.pop()
        for i in range(d - 1):
            a, b = t[i], t[i + 1]
            head, tail = t[:i], t[i + 2 :]
            for u in (
                head + (b, conj[a][b]) + tail,
                head + (conj[b][inv[a]], a) + tail,
            ):
                if u not in seen:
                    if len(seen) >= cap:
                        raise CapExceeded("orbit exceeds state cap", len(seen))
                    seen.add(u)
                    stack.append(u)
    return seen


def _class_from_members(G: FiniteGroup, members: set[tuple[int, ...]]) -> OrbitClass:
    canonical = min(members)
    return OrbitClass(
        canonical=canonical,
        size=len(members),
        ev=evaluate(G, canonical),
        nu=nielsen(G, canonical),
        subgroup=generated_subgroup(G, canonical),
    )


def orbit(G: FiniteGroup, v: tuple[int, ...], max_states: int | None = None) -> OrbitClass:
    """Braid orbit of ``v`` by breadth-first closure (reference path)."""
    return _class_from_members(G, orbit_members(G, v, max_states))


def braid_equivalent(G: FiniteGroup, v: tuple[int, ...], w: tuple[int, ...],
                     method: str = "lattice", caps: Caps = DEFAULT_CAPS) -> bool:
    """Decide membership in the same braid orbit.

    Invariant prefilters (length, evaluation, Nielsen type, generated
    subgroup) short-circuit before any orbit work.
    """
    if len(v) != len(w):
        return False
    if v == w:
        return True
    if evaluate(G, v) != evaluate(G, w):
        return False
    if nielsen(G, v) != nielsen(G, w):
        return False
    if generated_subgroup(G, v).bits != generated_subgroup(G, w).bits:
        return False
    if method == "direct":
        # early-exit BFS from v, watching for w
        d = len(v)
        conj, inv = G.conj_table, G.inv
        seen = {v}
        stack = [v]
        while stack:
            t = stack.pop()
            for i in range(d - 1):
                a, b = t[i], t[i + 1]
                head, tail = t[:i], t[i + 2 :]
                for u in (
                    head + (b, conj[a][b]) + tail,
                    head + (conj[b][inv[a]], a) + tail,
                ):
                    if u == w:
                        return True
                    if u not in seen:
                        if len(seen) >= caps.orbit_states:
                            raise CapExceeded("orbit exceeds state cap", len(seen))
                        seen.add(u)
                        stack.append(u)
        return False
    from .lattice import get_lattice

    L = get_lattice(G, caps)
    return L.class_of(v) == L.class_of(w)


# -- fibers -------------------------------------------------------------------


@dataclass(frozen=True)
class FiberSpec:
    """Constraints cutting out one fiber of the invariant maps.

    ``nu`` is indexed by conjugacy-class id and must be supported on classes
    contained in ``gamma``.  ``ev`` pins the evaluation; ``generated``
    constrains the generated subgroup, either exactly or from below
    (``generated_mode`` is "exact" or "superset").
    """

    nu: tuple[int, ...]
    gamma: GammaSet
    ev: int | None = None
    generated: SubgroupMask | None = None
    generated_mode: str = "exact"

    def validate(self, G: FiniteGroup) -> None:
        ct = G.classes
        if len(self.nu) != ct.count:
            raise ValueError(f"nu has {len(self.nu)} entries, group has {ct.count} classes")
        if any(c < 0 for c in self.nu):
            raise ValueError("nu entries must be nonnegative")
        for cid, count in enumerate(self.nu):
            if count > 0 and cid not in self.gamma.class_ids:
                raise ValueError(f"nu places {count} entries on class {cid} outside gamma")
        if self.ev is not None and not (0 <= self.ev < G.order):
            raise ValueError(f"evaluation {self.ev} out of range")
        if self.generated_mode not in ("exact", "superset"):
            raise ValueError(f"bad generated_mode {self.generated_mode!r}")

    @property
    def length(self) -> int:
        return sum(self.nu)

    def key(self) -> str:
        """Deterministic descriptor used for cache lookups and output."""
        parts = ["nu=" + ",".join(map(str, self.nu))]
        parts.append("gamma=" + ",".join(map(str, self.gamma.class_ids)))
        if self.ev is not None:
            parts.append(f"ev={self.ev}")
        if self.generated is not None:
            parts.append(f"gen[{self.generated_mode}]={self.generated.bits:x}")
        return ";".join(parts)


def _matches_generated(spec: FiberSpec, sub_bits: int) -> bool:
    if spec.generated is None:
        return True
    if spec.generated_mode == "exact":
        return sub_bits == spec.generated.bits
    return spec.generated.bits & ~sub_bits == 0


def fiber_size(G: FiniteGroup, spec: FiberSpec) -> int:
    """Number of raw tuples with the spec's Nielsen type (ev ignored)."""
    from math import comb

    ct = G.classes
    total = 1
    remaining = spec.length
    for cid, count in enumerate(spec.nu):
        if count:
            total *= comb(remaining, count) * ct.sizes[cid] ** count
            remaining -= count
    return total


def iter_fiber_tuples(G: FiniteGroup, spec: FiberSpec) -> Iterator[tuple[int, ...]]:
    """All tuples in the fiber, in lexicographic order.

    Entries are drawn class by class per the Nielsen counts; when the
    evaluation is pinned, prefixes whose remaining counts cannot reach the
    target product are pruned via a reachable-products table.
    """
    spec.validate(G)
    ct = G.classes
    d = spec.length
    if d == 0:
        if spec.ev is None or spec.ev == 0:
            yield ()
        return
    mul, inv = G.mul, G.inv

    # reachable[nu_rem] = bitmask of products achievable by some arrangement
    reachable: dict[tuple[int, ...], int] = {}

    def products(nu_rem: tuple[int, ...]) -> int:
        hit = reachable.get(nu_rem)
        if hit is not None:
            return hit
        if not any(nu_rem):
            out = 1  # identity only
        else:
            out = 0
            for cid, count in enumerate(nu_rem):
                if not count:
                    continue
                rest = products(nu_rem[:cid] + (count - 1,) + nu_rem[cid + 1 :])
                for g in ct.members[cid]:
                    row = mul[g]
                    sub = rest
                    while sub:
                        low = sub & -sub
                        out |= 1 << row[low.bit_length() - 1]
                        sub ^= low
        reachable[nu_rem] = out
        return out

    prefix: list[int] = []

    def extend(nu_rem: tuple[int, ...], prod: int) -> Iterator[tuple[int, ...]]:
        if len(prefix) == d:
            if spec.ev is None or prod == spec.ev:
                yield tuple(prefix)
            return
        choices: list[int] = []
        for cid, count in enumerate(nu_rem):
            if count:
                choices.extend(ct.members[cid])
        choices.sort()
        for g in choices:
            cid = ct.class_of[g]
            nxt = nu_rem[:cid] + (nu_rem[cid] - 1,) + nu_rem[cid + 1 :]
            nprod = mul[prod][g]
            if spec.ev is not None:
                need = mul[inv[nprod]][spec.ev]
                if not (products(nxt) >> need) & 1:
                    continue
            prefix.append(g)
            yield from extend(nxt, nprod)
            prefix.pop()

    yield from extend(spec.nu, 0)


def enumerate_classes(G: FiniteGroup, spec: FiberSpec, caps: Caps = DEFAULT_CAPS,
                      method: str = "lattice") -> list[OrbitClass]:
    """Complete, duplicate-free list of classes meeting ``spec``.

    ``method="direct"`` walks the raw fiber with visited-member marking and
    is bounded by ``caps``; ``method="lattice"`` (default) builds the same
    classes through the shared lattice and scales to fibers far beyond
    direct reach.  Both return classes sorted by canonical representative.
    """
    spec.validate(G)
    if method == "direct":
        return _enumerate_direct(G, spec, caps)
    from .lattice import get_lattice

    L = get_lattice(G, caps)
    out = []
    for node in L.classes_at(spec.nu):
        if spec.ev is not None and L.ev(node) != spec.ev:
            continue
        if not _matches_generated(spec, L.sub_bits(node)):
            continue
        out.append(L.orbit_class(node))
    return out


def _enumerate_direct(G: FiniteGroup, spec: FiberSpec, caps: Caps) -> list[OrbitClass]:
    seen: set[tuple[int, ...]] = set()
    out: list[OrbitClass] = []
    visited_tuples = 0
    for t in iter_fiber_tuples(G, spec):
        visited_tuples += 1
        if visited_tuples > caps.fiber_tuples:
            raise CapExceeded("fiber exceeds tuple cap", visited_tuples)
        if t in seen:
            continue
        members = orbit_members(G, t, caps.orbit_states)
        seen.update(members)
        cls = _class_from_members(G, members)
        if _matches_generated(spec, cls.subgroup.bits):
            out.append(cls)
    out.sort(key=lambda c: c.canonical)
    return out


# -- text I/O -----------------------------------------------------------------


def _split_top_level(text: str, offset: int) -> list[tuple[str, int]]:
    """Split on commas not nested in parentheses; keeps char offsets."""
    parts: list[tuple[str, int]] = []
    depth = 0
    start = 0
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise ParseError("unbalanced ')'", offset + i)
        elif ch == "," and depth == 0:
            parts.append((text[start:i], offset + start))
            start = i + 1
    if depth != 0:
        raise ParseError("unbalanced '('", offset + len(text))
    parts.append((text[start:], offset + start))
    return parts


def parse_tuple(G: FiniteGroup, text: str) -> tuple[int, ...]:
    """Parse tuple syntax: "1,2,4" (indices) or "[(12),(13)]" (names)."""
    raw = text.strip()
    if raw in ("", "[]"):
        return ()
    if raw.startswith("["):
        if not raw.endswith("]"):
            raise ParseError("expected closing ']'", len(text.rstrip()) - 1)
        if G.names is None:
            raise ParseError("group has no element names; use index syntax", 0)
        inner = raw[1:-1]
        if not inner.strip():
            return ()
        entries = []
        for token, pos in _split_top_level(inner, text.index("[") + 1):
            name = token.strip()
            at = pos + len(token) - len(token.lstrip())
            if name not in G.names:
                raise ParseError(f"unknown element name {name!r}", at)
            entries.append(G.names.index(name))
        return tuple(entries)
    entries = []
    for token, pos in _split_top_level(raw, text.index(raw[0])):
        tok = token.strip()
        at = pos + len(token) - len(token.lstrip())
        if not tok:
            raise ParseError("empty entry", pos)
        try:
            x = int(tok)
        except ValueError:
            raise ParseError(f"expected an element index, got {tok!r}", at) from None
        if not 0 <= x < G.order:
            raise ParseError(f"element index {x} out of range [0, {G.order})", at)
        entries.append(x)
    return tuple(entries)


def format_tuple(G: FiniteGroup, v: tuple[int, ...], names: bool = True) -> str:
    if names and G.names is not None:
        return "[" + ",".join(G.names[x] for x in v) + "]"
    return ",".join(str(x) for x in v)
