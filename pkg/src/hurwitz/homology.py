"""The homological invariant behind stable class counts.

Past the stability bound, classes of generating vectors with a fixed
Nielsen type form a torsor: the count factors as (order of a finite abelian
group) x (order of the commutator subgroup), the abelian factor being a
quotient of the Schur multiplier that the braid dynamics can see.  Its
order falls out of exact division of a stable count; its structure falls
out of a composition law on the identity-evaluation slice:

    x . y  =  the unique z at the working level with  z + u^k  ~  x + y,

where u is the gamma stabiliser and k matches levels.  The base point is
the class of u^k, and the whole construction is cross-checked at a second
stable level and across evaluation slices.
"""

from __future__ import annotations

from dataclasses import dataclass

from .braid import Caps, DEFAULT_CAPS, OrbitClass
from .errors import HomologyError
from .groups import FiniteGroup, GammaSet, commutator_subgroup
from .lattice import OrbitLattice, get_lattice
from .stability import (
    DEFAULT_CONFIRM,
    DEFAULT_WINDOW,
    StabilityReport,
    find_stability_bound,
    u_gamma,
)


@dataclass(frozen=True)
class H2Report:
    order: int
    structure: tuple[int, ...] | None  # invariant factors d_1 | d_2 | ...
    stable_level: tuple[int, ...]
    cross_checks: tuple[tuple[tuple[int, ...], int], ...]  # (level, class count)
    commutator_order: int
    slice_counts: tuple[tuple[int, int], ...]  # (evaluation, count) at stable level
    base_point: tuple[int, ...]
    bound: int
    confident: bool

    def to_jsonable(self) -> dict:
        return {
            "order": self.order,
            "structure": list(self.structure) if self.structure is not None else None,
            "stable_level": list(self.stable_level),
            "cross_checks": [[list(nu), c] for nu, c in self.cross_checks],
            "commutator_order": self.commutator_order,
            "slice_counts": [list(p) for p in self.slice_counts],
            "base_point": list(self.base_point),
            "bound": self.bound,
            "confident": self.confident,
        }


@dataclass(frozen=True)
class TorsorElement:
    cls: OrbitClass
    node: int  # lattice node id, private to the owning context


@dataclass
class TorsorContext:
    """Everything needed to compose classes at one stable level."""

    G: FiniteGroup
    gamma: GammaSet
    lattice: OrbitLattice
    level: tuple[int, ...]
    power: int  # k with level = k * nu(u_gamma)
    stabilizer_word: tuple[int, ...]
    elements: tuple[TorsorElement, ...]
    base: TorsorElement
    _shifted: dict[int, int]

    def index_of(self, node: int) -> int:
        for i, el in enumerate(self.elements):
            if el.node == node:
                return i
        raise KeyError(node)


def _stable_setup(G: FiniteGroup, gamma: GammaSet, window: int, confirm: int,
                  caps: Caps) -> tuple[StabilityReport, OrbitLattice, tuple[int, ...], int]:
    report = find_stability_bound(G, gamma, None, window, confirm, caps)
    if report.bound is None:
        raise HomologyError(
            f"no stable level found within window {window}: {report.error}")
    # levels are (n+1) * nu(u_gamma) since the base level is nu(u_gamma) itself
    k = report.bound + 1
    level = tuple(k * x for x in u_gamma(G, gamma).nu)
    return report, get_lattice(G, caps), level, k


def h2_order(G: FiniteGroup, gamma: GammaSet, window: int = DEFAULT_WINDOW,
             confirm: int = DEFAULT_CONFIRM, cross_levels: int = 1,
             caps: Caps = DEFAULT_CAPS) -> H2Report:
    """Order of the invariant via stable counting.

    Counts classes generating the whole group at a stable Nielsen level;
    the count must split exactly as order x |[G,G]|, and is re-counted at
    ``cross_levels`` further stable levels and per evaluation slice.
    """
    report, L, level, k = _stable_setup(G, gamma, window, confirm, caps)
    u = u_gamma(G, gamma)
    full = (1 << G.order) - 1
    comm = commutator_subgroup(G).size

    def generating_nodes(nu: tuple[int, ...]) -> list[int]:
        return [x for x in L.classes_at(nu) if L.sub_bits(x) == full]

    nodes = generating_nodes(level)
    count = len(nodes)
    if count == 0 or count % comm != 0:
        raise HomologyError(
            f"stable generating count {count} is not a positive multiple of "
            f"|[G,G]| = {comm}; level {level} may be sub-stable")
    order = count // comm
    checks = []
    for j in range(1, cross_levels + 1):
        nu_j = tuple(a + j * b for a, b in zip(level, u.nu))
        cj = len(generating_nodes(nu_j))
        if cj != count:
            raise HomologyError(
                f"count {cj} at cross-check level {nu_j} differs from {count}")
        checks.append((nu_j, cj))
    by_ev: dict[int, int] = {}
    for x in nodes:
        by_ev[L.ev(x)] = by_ev.get(L.ev(x), 0) + 1
    if len(by_ev) != comm or any(c != order for c in by_ev.values()):
        raise HomologyError(
            f"evaluation slices at {level} are uneven: {sorted(by_ev.items())}")
    base = L.append_word(0, u.vector * k)
    return H2Report(
        order=order,
        structure=None,
        stable_level=level,
        cross_checks=tuple(checks),
        commutator_order=comm,
        slice_counts=tuple(sorted(by_ev.items())),
        base_point=L.canonical(base),
        bound=report.bound,
        confident=report.confident,
    )


def torsor_group(G: FiniteGroup, gamma: GammaSet, window: int = DEFAULT_WINDOW,
                 confirm: int = DEFAULT_CONFIRM, caps: Caps = DEFAULT_CAPS) -> TorsorContext:
    """Identity-evaluation slice at a stable level, with its base point."""
    report, L, level, k = _stable_setup(G, gamma, window, confirm, caps)
    u = u_gamma(G, gamma)
    full = (1 << G.order) - 1
    nodes = [x for x in L.classes_at(level)
             if L.sub_bits(x) == full and L.ev(x) == 0]
    elements = tuple(TorsorElement(L.orbit_class(x), x) for x in nodes)
    base_node = L.append_word(0, u.vector * k)
    base = next(el for el in elements if el.node == base_node)
    return TorsorContext(G, gamma, L, level, k, u.vector, elements, base, {})


def torsor_compose(ctx: TorsorContext, x: TorsorElement, y: TorsorElement) -> TorsorElement:
    """x . y = unique z at the level with z + u^k ~ x + y."""
    L = ctx.lattice
    target = L.append_word(x.node, L.canonical(y.node))
    word = ctx.stabilizer_word * ctx.power
    matches = []
    for el in ctx.elements:
        shifted = ctx._shifted.get(el.node)
        if shifted is None:
            shifted = L.append_word(el.node, word)
            ctx._shifted[el.node] = shifted
        if shifted == target:
            matches.append(el)
    if len(matches) != 1:
        raise HomologyError(
            f"composition is not uniquely defined ({len(matches)} matches); "
            f"level {ctx.level} may be sub-stable")
    return matches[0]


def abelian_invariant_factors(order: int, mul, identity: int) -> list[int]:
    """Invariant factors d_1 | d_2 | ... of a finite abelian group table.

    A maximal-order element spans a direct summand, so we peel it off and
    recurse on the quotient by its cyclic subgroup.
    """
    if order == 1:
        return []
    elems = list(range(order))

    def elem_order(x: int) -> int:
        k, acc = 1, x
        while acc != identity:
            acc = mul(acc, x)
            k += 1
        return k

    orders = {x: elem_order(x) for x in elems}
    gen = max(elems, key=lambda x: orders[x])
    d = orders[gen]
    cyc = {identity}
    acc = gen
    while acc != identity:
        cyc.add(acc)
        acc = mul(acc, gen)
    # quotient by the cyclic summand: label cosets, recurse
    coset_of: dict[int, int] = {}
    reps: list[int] = []
    for x in elems:
        if x in coset_of:
            continue
        label = len(reps)
        reps.append(x)
        for h in cyc:
            coset_of[mul(x, h)] = label
    q_identity = coset_of[identity]

    def q_mul(a: int, b: int) -> int:
        return coset_of[mul(reps[a], reps[b])]

    return abelian_invariant_factors(len(reps), q_mul, q_identity) + [d]


def h2_structure(G: FiniteGroup, gamma: GammaSet, window: int = DEFAULT_WINDOW,
                 confirm: int = DEFAULT_CONFIRM, caps: Caps = DEFAULT_CAPS) -> H2Report:
    """Full invariant-factor decomposition via the torsor composition law."""
    base_report = h2_order(G, gamma, window, confirm, caps=caps)
    ctx = torsor_group(G, gamma, window, confirm, caps)
    m = len(ctx.elements)
    if m != base_report.order:
        raise HomologyError(
            f"identity-evaluation slice has {m} classes but the counted order "
            f"is {base_report.order}")
    index = {el.node: i for i, el in enumerate(ctx.elements)}

    def mul(a: int, b: int) -> int:
        return index[torsor_compose(ctx, ctx.elements[a], ctx.elements[b]).node]

    identity = index[ctx.base.node]
    for i in range(m):
        if mul(i, identity) != i:
            raise HomologyError("base point is not an identity for composition")
    factors = abelian_invariant_factors(m, mul, identity)
    product = 1
    for d in factors:
        product *= d
    if product != base_report.order:
        raise HomologyError(
            f"invariant factors {factors} do not multiply to {base_report.order}")
    return H2Report(
        order=base_report.order,
        structure=tuple(factors),
        stable_level=base_report.stable_level,
        cross_checks=base_report.cross_checks,
        commutator_order=base_report.commutator_order,
        slice_counts=base_report.slice_counts,
        base_point=base_report.base_point,
        bound=base_report.bound,
        confident=base_report.confident,
    )
