"""Built-in example data: the x1, x1_plus_cycle, and x2 catalogue entries.

These configurations are fixed catalogue conventions rather than derived
quantities: which cycles carry the stabilization-sphere flag, which basis
handles count as stabilizing, and which matching arcs realize the cycles
cannot be recomputed from the lattice data alone.  Output built from them
is marked "preset".

  x1             W(A2; e1, tw(e2)^2 e1) with the e2 handle recorded as
                 the sphere re-twisting cycle 2.
  x1_plus_cycle  x1 with the e2 sphere inserted as a third cycle; one
                 Hurwitz move then certifies the re-twisted cycle.
  x2             W(A4; e1, tw(e2)^2 e1, e2, e4), flexible after one
                 Hurwitz move (hurwitzR 2 + certify-loose 2).
"""

from .arcs import apply_half_twist, induced_word, standard_arc
from .certify import insert_sphere
from .fibers import FiberModel, ak_matching_fiber
from .presentation import LefschetzDatum, VanishingCycle


class PresetError(ValueError):
    """Raised for unknown preset names."""

    def __init__(self, message, **context):
        super().__init__(message)
        self.context = dict(context)


def _arc_cycle(fiber, arc, stabilization_sphere=False):
    word = induced_word(fiber.arc_system, arc)
    return VanishingCycle(fiber.lattice, word, arc=arc,
                          stabilization_sphere=stabilization_sphere)


def _marked_fiber(m, handles):
    """The A_{m-1} matching fiber with basis handles marked stabilizing.

    Each marked handle records its pairings against the other basis
    spheres in order, i.e. the vector it would have been attached with
    had it come last.
    """
    base = ak_matching_fiber(m, 2)
    gram = base.lattice.gram
    marked = {}
    for label in handles:
        j = base.basis_labels.index(label)
        marked[label] = tuple(
            gram[j][t] for t in range(len(gram)) if t != j)
    return FiberModel(base.lattice, base.basis_labels,
                      stabilizing_spheres=marked,
                      arc_system=base.arc_system)


def x1():
    """W(A2; e1, tw(e2)^2 e1); cycle 2 recorded as re-twisted by e2."""
    fiber = _marked_fiber(3, ("e2",))
    sys = fiber.arc_system
    a1 = standard_arc(sys, 1)
    a2 = standard_arc(sys, 2)
    cycles = (
        _arc_cycle(fiber, a1, stabilization_sphere=True),
        _arc_cycle(fiber, apply_half_twist(sys, a2, a1, power=2)),
    )
    return LefschetzDatum(fiber, cycles, sf_spheres=((2, "e2"),))


def x1_plus_cycle():
    """x1 with the e2 sphere added as a third cycle."""
    return insert_sphere(x1(), 2, "e2")


def x2():
    """W(A4; e1, tw(e2)^2 e1, e2, e4); one Hurwitz move certifies."""
    fiber = _marked_fiber(5, ("e2", "e4"))
    sys = fiber.arc_system
    a1 = standard_arc(sys, 1)
    a2 = standard_arc(sys, 2)
    a4 = standard_arc(sys, 4)
    cycles = (
        _arc_cycle(fiber, a1, stabilization_sphere=True),
        _arc_cycle(fiber, apply_half_twist(sys, a2, a1, power=2)),
        _arc_cycle(fiber, a2, stabilization_sphere=True),
        _arc_cycle(fiber, a4, stabilization_sphere=True),
    )
    return LefschetzDatum(fiber, cycles)


PRESETS = {
    "x1": x1,
    "x1_plus_cycle": x1_plus_cycle,
    "x2": x2,
}


def preset(name):
    """Build a named preset datum."""
    try:
        build = PRESETS[name]
    except KeyError:
        raise PresetError("unknown preset", name=name,
                          known=sorted(PRESETS))
    return build()
