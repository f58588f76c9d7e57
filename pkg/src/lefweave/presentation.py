"""Lefschetz data: a fiber plus a cyclic word of vanishing cycles.

A datum W(M; V_1, ..., V_k) presents a Weinstein domain: the fiber M is a
FiberModel and each vanishing cycle is a Lagrangian sphere in M recorded
symbolically, as a twist word applied to a base class (plus, when
available, the matching arc realizing it in the fiber's disk model).

All move functions return fresh values; data are immutable.  Move
positions are 1-based and cyclic: position i acts on the adjacent pair
(i, i+1), with i = k wrapping around to pair (k, 1).
"""

from .arcs import apply_half_twist
from .fibers import FiberModel, attach_stabilizing_handle
from .lattice import IntLattice, SphereClass, TwistWord, evaluate_word, pairing


class MoveError(ValueError):
    """Raised for invalid positions, parities, or broken preconditions."""

    def __init__(self, message, **context):
        super().__init__(message)
        self.context = dict(context)


class VanishingCycle:
    """A vanishing cycle: symbolic twist word, cached class, flags.

    The class is always recomputed from the word, so the cache cannot go
    stale.  ``stabilization_sphere`` marks cycles introduced by a
    stabilize step; ``loose_certified`` is set by the certificate layer.
    """

    __slots__ = ("word", "klass", "arc", "stabilization_sphere",
                 "loose_certified")

    def __init__(self, lattice, word, arc=None, stabilization_sphere=False,
                 loose_certified=False):
        object.__setattr__(self, "word", word)
        object.__setattr__(self, "klass", evaluate_word(lattice, word))
        object.__setattr__(self, "arc", arc)
        object.__setattr__(self, "stabilization_sphere",
                           bool(stabilization_sphere))
        object.__setattr__(self, "loose_certified", bool(loose_certified))

    def __setattr__(self, name, value):
        raise AttributeError("VanishingCycle is immutable")

    def _key(self):
        return (self.word, self.arc, self.stabilization_sphere,
                self.loose_certified)

    def __eq__(self, other):
        if not isinstance(other, VanishingCycle):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        flags = []
        if self.stabilization_sphere:
            flags.append("sphere")
        if self.loose_certified:
            flags.append("loose")
        return "VanishingCycle(%r%s)" % (
            self.klass.coords, ", ".join([""] + flags))


def trivial_cycle(fiber, klass, arc=None, stabilization_sphere=False,
                  loose_certified=False):
    """A cycle with an empty twist word on the given class."""
    lattice = getattr(fiber, "lattice", fiber)
    return VanishingCycle(lattice, TwistWord((), klass), arc=arc,
                          stabilization_sphere=stabilization_sphere,
                          loose_certified=loose_certified)


class LefschetzDatum:
    """An immutable (fiber; cycles) pair with optional handle provenance.

    ``sf_spheres`` records, as (cycle position, handle label) pairs, which
    cycles were re-twisted by subflexibilize; moves that reorder or merge
    cycles clear it.
    """

    __slots__ = ("fiber", "cycles", "sf_spheres")

    def __init__(self, fiber, cycles, sf_spheres=()):
        cycles = tuple(cycles)
        rank = fiber.lattice.rank
        for pos, cyc in enumerate(cycles, start=1):
            if len(cyc.klass.coords) != rank:
                raise MoveError(
                    "cycle class does not live in the fiber lattice",
                    position=pos, rank=rank, got=len(cyc.klass.coords))
        object.__setattr__(self, "fiber", fiber)
        object.__setattr__(self, "cycles", cycles)
        object.__setattr__(self, "sf_spheres", tuple(sf_spheres))

    def __setattr__(self, name, value):
        raise AttributeError("LefschetzDatum is immutable")

    @property
    def n(self):
        return self.fiber.lattice.n

    def _key(self):
        sys = self.fiber.arc_system
        return (
            self.fiber.lattice,
            self.fiber.basis_labels,
            tuple(sorted(self.fiber.stabilizing_spheres.items())),
            None if sys is None else (sys.m, sys.n),
            self.cycles,
            self.sf_spheres,
        )

    def __eq__(self, other):
        if not isinstance(other, LefschetzDatum):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return "LefschetzDatum(rank=%d, k=%d, n=%d)" % (
            self.fiber.lattice.rank, len(self.cycles), self.n)


def _pad_class(s, extra):
    if extra == 0:
        return s
    return SphereClass(s.coords + (0,) * extra, label=s.label)


def _shift_class(s, before, after):
    return SphereClass((0,) * before + s.coords + (0,) * after,
                       label=s.label)


def _embed_word(word, before, after):
    return TwistWord(
        tuple((_shift_class(c, before, after), e) for c, e in word.letters),
        _shift_class(word.base, before, after),
    )


def _embed_cycle(lattice, cyc, before, after, keep_arc=True):
    return VanishingCycle(
        lattice,
        _embed_word(cyc.word, before, after),
        arc=cyc.arc if keep_arc else None,
        stabilization_sphere=cyc.stabilization_sphere,
        loose_certified=cyc.loose_certified,
    )


def _pair_positions(D, i):
    k = len(D.cycles)
    if k < 2:
        raise MoveError("need at least two cycles to move", k=k)
    if not 1 <= i <= k:
        raise MoveError("move position out of range", i=i, k=k)
    return i - 1, i % k


def hurwitz_left(D, i):
    """(..., V_i, V_{i+1}, ...) -> (..., tau_{V_i} V_{i+1}, V_i, ...)."""
    a, b = _pair_positions(D, i)
    vi, vj = D.cycles[a], D.cycles[b]
    word = vj.word.prepend(vi.klass, 1)
    arc = None
    sys = D.fiber.arc_system
    if sys is not None and vi.arc is not None and vj.arc is not None:
        arc = apply_half_twist(sys, vi.arc, vj.arc, 1)
    cycles = list(D.cycles)
    cycles[a] = VanishingCycle(D.fiber.lattice, word, arc=arc)
    cycles[b] = vi
    return LefschetzDatum(D.fiber, cycles)


def hurwitz_right(D, i):
    """(..., V_i, V_{i+1}, ...) -> (..., V_{i+1}, tau^-1_{V_{i+1}} V_i, ...)."""
    a, b = _pair_positions(D, i)
    vi, vj = D.cycles[a], D.cycles[b]
    word = vi.word.prepend(vj.klass, -1)
    arc = None
    sys = D.fiber.arc_system
    if sys is not None and vi.arc is not None and vj.arc is not None:
        arc = apply_half_twist(sys, vj.arc, vi.arc, -1)
    cycles = list(D.cycles)
    cycles[a] = vj
    cycles[b] = VanishingCycle(D.fiber.lattice, word, arc=arc)
    return LefschetzDatum(D.fiber, cycles)


def rotate(D):
    """Cyclic shift: (V_1, V_2, ..., V_k) -> (V_2, ..., V_k, V_1)."""
    if len(D.cycles) < 2:
        return LefschetzDatum(D.fiber, D.cycles)
    return LefschetzDatum(D.fiber, D.cycles[1:] + D.cycles[:1])


def stabilize(D, pairings, label):
    """Attach a fiber handle and append its sphere as a new cycle."""
    fiber, sphere = attach_stabilizing_handle(D.fiber, pairings, label)
    lattice = fiber.lattice
    cycles = [_embed_cycle(lattice, c, 0, 1) for c in D.cycles]
    cycles.append(trivial_cycle(lattice, sphere, stabilization_sphere=True))
    return LefschetzDatum(fiber, cycles)


def subflexibilize(D, disk_pairings, labels=None):
    """Re-twist each cycle V_i to tau^2_{S_i} V_i about a fresh handle.

    ``disk_pairings`` gives, per cycle, the intersection vector of the
    attaching disk with the original basis (or None to skip that cycle).
    Each disk must meet its own cycle exactly once; the new spheres join
    the fiber but not the cycle list.
    """
    k = len(D.cycles)
    disk_pairings = list(disk_pairings)
    if len(disk_pairings) != k:
        raise MoveError("one pairing vector (or None) per cycle",
                        expected=k, got=len(disk_pairings))
    base_rank = D.fiber.lattice.rank
    fiber = D.fiber
    cycles = list(D.cycles)
    provenance = list(D.sf_spheres)
    attached = 0
    for pos, p in enumerate(disk_pairings, start=1):
        if p is None:
            continue
        p = tuple(int(x) for x in p)
        if len(p) != base_rank:
            raise MoveError(
                "pairing vector length must equal the original rank",
                i=pos, expected=base_rank, got=len(p))
        label = labels[pos - 1] if labels is not None else "s%d" % pos
        fiber, sphere = attach_stabilizing_handle(
            fiber, p + (0,) * attached, label)
        attached += 1
        lattice = fiber.lattice
        cycles = [_embed_cycle(lattice, c, 0, 1) for c in cycles]
        target = cycles[pos - 1]
        hits = pairing(lattice, sphere, target.klass)
        if abs(hits) != 1:
            raise MoveError(
                "attaching disk must meet its cycle exactly once",
                i=pos, pairing=hits)
        cycles[pos - 1] = VanishingCycle(
            lattice, target.word.prepend(sphere, 2))
        provenance.append((pos, label))
    if attached == 0:
        return LefschetzDatum(D.fiber, D.cycles, sf_spheres=D.sf_spheres)
    return LefschetzDatum(fiber, cycles, sf_spheres=provenance)


def boundary_connect_sum(D1, D2):
    """Join two data: orthogonal fiber sum, cycle lists concatenated."""
    if D1.n != D2.n:
        raise MoveError("parity mismatch", n1=D1.n, n2=D2.n)
    r1 = D1.fiber.lattice.rank
    r2 = D2.fiber.lattice.rank
    if r2 == 0 and not D2.cycles:
        return D1
    if r1 == 0 and not D1.cycles:
        return D2
    labels = list(D1.fiber.basis_labels)
    rename = {}
    for lab in D2.fiber.basis_labels:
        fresh = lab
        while fresh in labels:
            fresh += "'"
        rename[lab] = fresh
        labels.append(fresh)
    g1, g2 = D1.fiber.lattice.gram, D2.fiber.lattice.gram
    gram = tuple(
        tuple(g1[i]) + (0,) * r2 for i in range(r1)
    ) + tuple(
        (0,) * r1 + tuple(g2[i]) for i in range(r2)
    )
    lattice = IntLattice(gram, D1.n)
    stab = dict(D1.fiber.stabilizing_spheres)
    for lab, vec in D2.fiber.stabilizing_spheres.items():
        stab[rename[lab]] = vec
    fiber = FiberModel(lattice, labels, stab)
    # arcs live in each summand's own disk model; the sum has none
    cycles = [_embed_cycle(lattice, c, 0, r2, keep_arc=False)
              for c in D1.cycles]
    cycles += [_embed_cycle(lattice, c, r1, 0, keep_arc=False)
               for c in D2.cycles]
    return LefschetzDatum(fiber, cycles)


def normalize(D):
    """Freely reduce all words and refresh class caches; idempotent."""
    lattice = D.fiber.lattice
    cycles = [
        VanishingCycle(
            lattice,
            TwistWord(c.word.letters, c.word.base),
            arc=c.arc,
            stabilization_sphere=c.stabilization_sphere,
            loose_certified=c.loose_certified,
        )
        for c in D.cycles
    ]
    return LefschetzDatum(D.fiber, cycles, sf_spheres=D.sf_spheres)
