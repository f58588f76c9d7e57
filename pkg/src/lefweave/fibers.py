"""Fiber lattices built from plumbing trees, with stabilizing handles.

A plumbing tree describes a boundary-connected union of disk cotangent
bundles D*S^n, one per vertex, plumbed along edges. The construction only
needs the resulting intersection lattice: diagonal entries are the sphere
self-pairings for the parity of n, off-diagonal entries record one
transverse intersection point per edge (with its sign).

A stabilizing handle extends the Weinstein structure by one handle whose
cocore sphere pairs with the existing basis by a prescribed integer
vector; the lattice grows by one row and column and the new sphere's
label is remembered so later constructions can tell original zero-section
spheres from added ones.
"""

from .arcs import ArcSystem
from .lattice import IntLattice


class FiberError(ValueError):
    """Raised for malformed trees, pairings, or labels."""

    def __init__(self, message, **context):
        super().__init__(message)
        self.context = dict(context)


class PlumbingTree:
    """A labeled forest with signed edges.

    Edges are (u, v) or (u, v, sign) with sign +-1, defaulting to +1.
    """

    __slots__ = ("vertices", "edges")

    def __init__(self, vertices, edges=()):
        vertices = tuple(vertices)
        if not vertices:
            raise FiberError("plumbing tree needs at least one vertex")
        if len(set(vertices)) != len(vertices):
            raise FiberError("duplicate vertex labels", vertices=vertices)
        index = {v: i for i, v in enumerate(vertices)}
        parent = list(range(len(vertices)))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        normalized = []
        for edge in edges:
            if len(edge) == 2:
                u, v = edge
                sign = 1
            elif len(edge) == 3:
                u, v, sign = edge
            else:
                raise FiberError("edge must be (u, v) or (u, v, sign)",
                                 edge=edge)
            if u not in index or v not in index:
                raise FiberError("edge references unknown vertex", edge=edge)
            if u == v:
                raise FiberError("self-loop is not a plumbing", edge=edge)
            if sign not in (1, -1):
                raise FiberError("edge sign must be +-1", edge=edge)
            ru, rv = find(index[u]), find(index[v])
            if ru == rv:
                raise FiberError("edges form a cycle", edge=edge)
            parent[ru] = rv
            normalized.append((u, v, sign))
        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "edges", tuple(normalized))

    def __setattr__(self, name, value):
        raise AttributeError("PlumbingTree is immutable")

    @classmethod
    def path(cls, k, prefix="v"):
        """The A_k chain: k vertices joined in a row."""
        vertices = ["%s%d" % (prefix, i) for i in range(1, k + 1)]
        edges = [(vertices[i], vertices[i + 1]) for i in range(k - 1)]
        return cls(vertices, edges)

    def __repr__(self):
        return "PlumbingTree(%r, %r)" % (list(self.vertices),
                                         list(self.edges))


class FiberModel:
    """An intersection lattice with named basis spheres.

    stabilizing_spheres maps each added handle's label to the pairing
    vector it was attached with (against the basis existing at the time).
    arc_system, when present, models the same fiber's matching arcs.
    """

    __slots__ = ("lattice", "basis_labels", "stabilizing_spheres",
                 "arc_system")

    def __init__(self, lattice, basis_labels, stabilizing_spheres=None,
                 arc_system=None):
        basis_labels = tuple(basis_labels)
        if len(basis_labels) != lattice.rank:
            raise FiberError("one label per basis vector required",
                             labels=basis_labels, rank=lattice.rank)
        if len(set(basis_labels)) != len(basis_labels):
            raise FiberError("duplicate basis labels", labels=basis_labels)
        stab = dict(stabilizing_spheres or {})
        for label in stab:
            if label not in basis_labels:
                raise FiberError("stabilizing label is not in the basis",
                                 label=label)
        if arc_system is not None and arc_system.m - 1 > lattice.rank:
            raise FiberError("arc system larger than the lattice",
                             m=arc_system.m, rank=lattice.rank)
        object.__setattr__(self, "lattice", lattice)
        object.__setattr__(self, "basis_labels", basis_labels)
        object.__setattr__(self, "stabilizing_spheres", stab)
        object.__setattr__(self, "arc_system", arc_system)

    def __setattr__(self, name, value):
        raise AttributeError("FiberModel is immutable")

    def basis_sphere(self, label):
        """The SphereClass of a named basis vector."""
        try:
            i = self.basis_labels.index(label)
        except ValueError:
            raise FiberError("no basis sphere with this label", label=label)
        return self.lattice.basis_sphere(i + 1, label=label)

    def __repr__(self):
        return "FiberModel(rank=%d, labels=%r)" % (
            self.lattice.rank, list(self.basis_labels))


def _self_pairing(n):
    if n % 2 == 1:
        return 0
    return 2 if (n * (n + 1) // 2) % 2 == 0 else -2


def plumbing_lattice(tree, n):
    """Intersection lattice of the plumbing of D*S^n along the tree."""
    if n < 1:
        raise FiberError("fiber dimension must be positive", n=n)
    k = len(tree.vertices)
    index = {v: i for i, v in enumerate(tree.vertices)}
    diag = _self_pairing(n)
    gram = [[diag if i == j else 0 for j in range(k)] for i in range(k)]
    for u, v, sign in tree.edges:
        i, j = index[u], index[v]
        if n % 2 == 0:
            gram[i][j] = gram[j][i] = sign
        else:
            # orient by ascending vertex index
            lo, hi = min(i, j), max(i, j)
            gram[lo][hi] = sign
            gram[hi][lo] = -sign
    lattice = IntLattice(tuple(tuple(row) for row in gram), n)
    return FiberModel(lattice, tree.vertices)


def attach_stabilizing_handle(fiber, pairings, label):
    """Extend the fiber by one handle; returns (fiber', new sphere).

    The new basis sphere s satisfies <s, b_j> = pairings[j] against each
    pre-existing basis vector and has the parity-mandated self-pairing.
    """
    pairings = tuple(int(p) for p in pairings)
    rank = fiber.lattice.rank
    if len(pairings) != rank:
        raise FiberError("pairing vector length must equal the rank",
                         expected=rank, got=len(pairings))
    if label in fiber.basis_labels:
        raise FiberError("label already used in this fiber", label=label)
    n = fiber.lattice.n
    old = fiber.lattice.gram
    flip = 1 if n % 2 == 0 else -1
    gram = tuple(
        tuple(old[i]) + (flip * pairings[i],) for i in range(rank)
    ) + (pairings + (_self_pairing(n),),)
    lattice = IntLattice(gram, n)
    stab = dict(fiber.stabilizing_spheres)
    stab[label] = pairings
    model = FiberModel(lattice, fiber.basis_labels + (label,), stab,
                       fiber.arc_system)
    sphere = lattice.basis_sphere(rank + 1, label=label)
    return model, sphere


def ak_matching_fiber(m, n):
    """The A_{m-1} chain fiber with its m-point matching arc system."""
    if m < 2:
        raise FiberError("a matching fiber needs at least 2 points", m=m)
    tree = PlumbingTree.path(m - 1, prefix="e")
    base = plumbing_lattice(tree, n)
    system = ArcSystem(m, n)
    if system.lattice != base.lattice:
        raise FiberError("arc system and plumbing disagree", m=m, n=n)
    return FiberModel(base.lattice, base.basis_labels,
                      arc_system=system)
