"""Isotopy-exact arcs between marked points of a disk.

The model: m marked points p_1..p_m sit on a horizontal line in the disk.
A matching arc connects two distinct marked points. Arcs are stored as a
base edge plus a word of half-twists applied to it; isotopy questions are
decided through a canonical combinatorial form, never through the twist
word itself.

Encoding. An arc from p_i to p_j is represented by a triple (i, j, w)
where w is a word in the free group on loops x_1..x_m (x_l circles p_l
once counterclockwise, based below the line). w records the route of the
arc relative to the reference routes that approach each point from below;
it is well defined up to x_i-powers on the left and x_j-powers on the
right, an ambiguity the canonical form quotients away. Half-twists act on
triples by the standard substitution

    sigma_k:      x_k -> x_k x_{k+1} x_k^{-1},   x_{k+1} -> x_k
    sigma_k^{-1}: x_k -> x_{k+1},                x_{k+1} -> x_{k+1}^{-1} x_k x_{k+1}

together with connector letters that account for the endpoint being
dragged through the upper half-disk: under sigma_k the point p_{k+1}
travels above the line, so a word based at it picks up x_{k+1}^{+-1}; the
point p_k travels below and stays clean (and mirrored for sigma_k^{-1}).

Canonical form. Fix the fan of rays u_l, d_l running from each p_l up and
down to the boundary, and the gap segments g_0..g_m of the line between
consecutive points. Drawing the route of (i, j, w) through this fan gives
a sequence of crossings; two reductions compute its minimal position:
adjacent equal crossings bound an empty bigon and cancel, and a leading
(trailing) crossing with one of the four rays or gaps at the start (end)
point slides off around that point. The reduced sequence, together with
the endpoints and taken up to reversal, is a complete isotopy invariant.
`coords` are the crossing counts with the interior gaps and the lower
rays; equal arcs have equal coords, but the sequence is what decides
equality, since mirror windings can share all counts.

Classes. `arc_to_class` evaluates the twist word on the base edge's class
in the A_{m-1} lattice. `odd_class` reads the class off the canonical
diagram itself by a sheet-tracked signed crossing count (the homology
class of the arc's double lift, where the covering sheets swap across the
lower rays); it applies no twist formula, so agreement of the two routes
is a real cross-check rather than a tautology. The diagram route lives in
the antisymmetric (fiber dimension odd) lattice by nature.
"""

from .lattice import IntLattice, SphereClass, TwistWord, twist_power


class ArcError(ValueError):
    """Raised for malformed or mismatched arc-system operations."""

    def __init__(self, message, **context):
        super().__init__(message)
        self.context = dict(context)


def _a_path_gram(rank, n):
    """Gram matrix of the A_rank chain of spheres in parity n."""
    if n % 2 == 0:
        diag = 2 if (n * (n + 1) // 2) % 2 == 0 else -2
        return tuple(
            tuple(
                diag if i == j else (1 if abs(i - j) == 1 else 0)
                for j in range(rank)
            )
            for i in range(rank)
        )
    return tuple(
        tuple(
            1 if j == i + 1 else (-1 if j == i - 1 else 0)
            for j in range(rank)
        )
        for i in range(rank)
    )


# ---------------------------------------------------------------------------
# free words on x_1..x_m: tuples of (index, +-1), freely reduced


def _free_reduce(letters):
    out = []
    for l in letters:
        if out and out[-1][0] == l[0] and out[-1][1] == -l[1]:
            out.pop()
        else:
            out.append(l)
    return tuple(out)


def _invert(letters):
    return tuple((idx, -s) for idx, s in reversed(letters))


def _artin_letter(idx, s, k, sign):
    """Image of x_idx^s under sigma_k^sign.

    The positive twist carries p_k below the line, so the loop around it
    arrives at position k+1 unconjugated; the loop around p_{k+1} gets
    dragged over the top and picks up the conjugation.
    """
    if sign > 0:
        if idx == k:
            seq = ((k + 1, 1),)
        elif idx == k + 1:
            seq = ((k + 1, -1), (k, 1), (k + 1, 1))
        else:
            seq = ((idx, 1),)
    else:
        if idx == k:
            seq = ((k, 1), (k + 1, 1), (k, -1))
        elif idx == k + 1:
            seq = ((k, 1),)
        else:
            seq = ((idx, 1),)
    if s < 0:
        seq = _invert(seq)
    return seq


def _act_sigma(triple, k, sign):
    """Transform an arc triple by sigma_k^sign (sign = +-1)."""
    i, j, w = triple
    out = []
    for idx, s in w:
        out.extend(_artin_letter(idx, s, k, sign))
    w = _free_reduce(out)
    # connector letters for endpoints dragged through the upper half-disk
    if sign > 0:
        if i == k + 1:
            w = _free_reduce(((k + 1, 1),) + w)
        if j == k + 1:
            w = _free_reduce(w + ((k + 1, -1),))
    else:
        if i == k:
            w = _free_reduce(((k, -1),) + w)
        if j == k:
            w = _free_reduce(w + ((k, 1),))
    swap = {k: k + 1, k + 1: k}
    return (swap.get(i, i), swap.get(j, j), w)


def _apply_gens(triple, gens):
    """Apply a sequence of sigma-letters, rightmost (innermost) first."""
    for k, s in reversed(gens):
        triple = _act_sigma(triple, k, s)
    return triple


# ---------------------------------------------------------------------------
# drawing a triple through the fan and reducing the crossing sequence


def _draw(triple):
    """Raw crossing sequence of the route of (i, j, w) through the fan.

    Events are ('g', l) for gap segments, ('u', l) / ('d', l) for upper
    and lower rays. The route starts below p_i, realizes each letter as a
    finger over the circled point, and ends below p_j; between letters it
    travels through the lower cells, crossing the intervening d-rays.
    """
    i, j, w = triple
    events = []

    def travel(cur, dst):
        if dst > cur:
            events.extend(("d", l) for l in range(cur + 1, dst + 1))
        else:
            events.extend(("d", l) for l in range(cur, dst, -1))
        return dst

    cur = i
    for idx, s in w:
        if s > 0:
            cur = travel(cur, idx - 1)
            events.extend((("g", idx - 1), ("u", idx), ("g", idx)))
            cur = idx
        else:
            cur = travel(cur, idx)
            events.extend((("g", idx), ("u", idx), ("g", idx - 1)))
            cur = idx - 1
    travel(cur, j)
    return events


def _adjacent_to_point(event, p):
    kind, l = event
    if kind == "g":
        return l == p - 1 or l == p
    return l == p


def _reduce_events(events, i, j):
    """Cancel empty bigons and slide end crossings off around the points."""
    evs = list(events)
    while True:
        stack = []
        for e in evs:
            if stack and stack[-1] == e:
                stack.pop()
            else:
                stack.append(e)
        changed = len(stack) != len(evs)
        evs = stack
        while evs and _adjacent_to_point(evs[0], i):
            evs.pop(0)
            changed = True
        while evs and _adjacent_to_point(evs[-1], j):
            evs.pop()
            changed = True
        if not changed:
            return tuple(evs)


# ---------------------------------------------------------------------------
# the arc objects


class MatchingArc:
    """An unoriented arc between two marked points, up to isotopy.

    `word` is a tuple of (arc, power) half-twist letters, leftmost
    outermost, applied to the standard edge with index `base_index`.
    Equality and hashing go through the canonical form.
    """

    def __init__(self, system, base_index, word=()):
        self.system = system
        self.base_index = base_index
        self.word = tuple(word)
        self._gens = None
        self._triple = None
        self._canon = None

    def _mapping_gens(self):
        if self._gens is None:
            out = []
            for arc, power in self.word:
                if power == 0:
                    continue
                inner = arc._mapping_gens()
                core = [(arc.base_index, 1 if power > 0 else -1)] * abs(power)
                out.extend(inner)
                out.extend(core)
                out.extend((k, -s) for k, s in reversed(inner))
            self._gens = tuple(out)
        return self._gens

    def triple(self):
        if self._triple is None:
            base = (self.base_index, self.base_index + 1, ())
            self._triple = _apply_gens(base, self._mapping_gens())
        return self._triple

    def canonical(self):
        if self._canon is None:
            i, j, w = self.triple()
            evs = _reduce_events(_draw((i, j, w)), i, j)
            self._canon = min((i, j, evs), (j, i, tuple(reversed(evs))))
        return self._canon

    @property
    def endpoints(self):
        c = self.canonical()
        return (c[0], c[1])

    @property
    def coords(self):
        m = self.system.m
        evs = self.canonical()[2]
        gaps = [0] * (m - 1)
        rays = [0] * m
        for kind, l in evs:
            if kind == "g" and 1 <= l <= m - 1:
                gaps[l - 1] += 1
            elif kind == "d":
                rays[l - 1] += 1
        return tuple(gaps) + tuple(rays)

    def __eq__(self, other):
        if not isinstance(other, MatchingArc):
            return NotImplemented
        return (
            self.system.m == other.system.m
            and self.canonical() == other.canonical()
        )

    def __hash__(self):
        return hash((self.system.m, self.canonical()))

    def __repr__(self):
        i, j, _ = self.canonical()
        return "MatchingArc(%d-%d, coords=%r)" % (i, j, self.coords)


class ArcSystem:
    """m marked points on the disk with their standard edges catalogued.

    The associated lattice is the A_{m-1} chain in parity n: standard
    edge k maps to basis sphere e_k.
    """

    def __init__(self, m, n=2):
        if m < 2:
            raise ArcError("an arc system needs at least 2 points", m=m)
        if n < 1:
            raise ArcError("fiber dimension must be positive", n=n)
        self.m = m
        self.n = n
        self.lattice = IntLattice(_a_path_gram(m - 1, n), n)
        self.catalogue = {}
        for k in range(1, m):
            self.catalogue["a%d" % k] = MatchingArc(self, k)

    def register(self, label, arc):
        if label in self.catalogue:
            raise ArcError("catalogue label already used", label=label)
        self.catalogue[label] = arc

    def __repr__(self):
        return "ArcSystem(m=%d, n=%d)" % (self.m, self.n)


def standard_arc(system, k):
    """The straight edge from p_k to p_{k+1}."""
    if not 1 <= k <= system.m - 1:
        raise ArcError(
            "standard arc index out of range", k=k, m=system.m
        )
    return system.catalogue["a%d" % k]


def apply_half_twist(system, arc, target, power=1):
    """Image of `target` under the half-twist along `arc`, to the power."""
    if arc.system.m != system.m or target.system.m != system.m:
        raise ArcError(
            "arcs belong to a different system", m=system.m
        )
    if power == 0:
        return target
    word = target.word
    if word and word[0][0] == arc:
        merged = power + word[0][1]
        rest = word[1:]
        if merged == 0:
            word = rest
        else:
            word = ((arc, merged),) + rest
    else:
        word = ((arc, power),) + word
    return MatchingArc(system, target.base_index, word)


def arcs_isotopic(system, a, b):
    """Whether two arcs are isotopic rel the marked points."""
    if a.system.m != system.m or b.system.m != system.m:
        raise ArcError("arcs belong to a different system", m=system.m)
    return a.canonical() == b.canonical()


def geometric_intersection(system, a, b):
    """Minimal number of interior crossings between the two arcs.

    Pull b back through the mapping class carrying the base edge to a;
    the crossings of the pulled-back arc with the base edge's gap segment
    are exactly the essential crossings. Shared endpoints never count.
    """
    if a.system.m != system.m or b.system.m != system.m:
        raise ArcError("arcs belong to a different system", m=system.m)
    gens = a._mapping_gens()
    inverse = tuple((k, -s) for k, s in reversed(gens))
    i, j, w = _apply_gens(b.triple(), inverse)
    evs = _reduce_events(_draw((i, j, w)), i, j)
    return sum(1 for e in evs if e == ("g", a.base_index))


# ---------------------------------------------------------------------------
# classes in the lattice


def _normalize_sign(coords):
    for c in coords:
        if c > 0:
            return tuple(coords)
        if c < 0:
            return tuple(-x for x in coords)
    return tuple(coords)


def arc_to_class(system, arc):
    """Lattice class of the arc, by evaluating its half-twist word.

    The sign of a matching sphere's class is a choice; the first nonzero
    coordinate is normalized positive.
    """
    v = _raw_class(system, arc)
    return SphereClass(_normalize_sign(v.coords))


def _raw_class(system, arc):
    L = system.lattice
    v = L.basis_sphere(arc.base_index)
    for inner, power in reversed(arc.word):
        center = _raw_class(system, inner)
        v = twist_power(L, center, v, power)
    return v


def induced_word(system, arc):
    """The lattice twist word an arc's half-twist history induces.

    Each half-twist about an inner arc becomes a twist about that arc's
    class; evaluating the word recovers arc_to_class up to the sign
    normalization (twists about S and -S agree).
    """
    letters = tuple(
        (arc_to_class(system, inner), power) for inner, power in arc.word)
    return TwistWord(letters, system.lattice.basis_sphere(arc.base_index))


# cell/side tables for the diagram-route class. Cells ('U', c) and
# ('L', c) are the upper and lower regions over gap c; an event lies on a
# wall or the floor of the cell, to the left or right of the test line
# through the gap (crossing points on gaps are drawn mid-gap, the test
# line sits right of them).


def _piece_cell(e1, e2):
    """The cell both crossing events lie on the boundary of."""
    (k1, l1), (k2, l2) = e1, e2
    if k1 > k2 or (k1 == k2 and l1 > l2):
        (k1, l1), (k2, l2) = (k2, l2), (k1, l1)
    # now sorted: d < g < u, lower index first
    if k1 == "d" and k2 == "d":
        if l2 == l1 + 1:
            return ("L", l1)
    elif k1 == "d" and k2 == "g":
        if l2 == l1 - 1 or l2 == l1:
            return ("L", l2)
    elif k1 == "g" and k2 == "u":
        if l1 == l2 - 1 or l1 == l2:
            return ("U", l1)
    elif k1 == "u" and k2 == "u":
        if l2 == l1 + 1:
            return ("U", l1)
    raise ArcError("events share no cell", first=e1, second=e2)


def _event_side(event, cell):
    kind_cell, c = cell
    kind, l = event
    if kind == "g":
        if l == c:
            return "L"
    elif kind == "u" and kind_cell == "U" or kind == "d" and kind_cell == "L":
        if l == c:
            return "L"
        if l == c + 1:
            return "R"
    raise ArcError("event not on cell boundary", event=event, cell=cell)


def _endpoint_cell(event, p):
    kind, l = event
    key = 1 if l == p + 1 else (-1 if l == p - 1 else 0)
    if kind == "g" or key == 0:
        raise ArcError("crossing cannot follow the endpoint", event=event)
    region = "U" if kind == "u" else "L"
    return (region, p if key == 1 else p - 1)


def _point_side(p, cell):
    _, c = cell
    if p == c:
        return "L"
    if p == c + 1:
        return "R"
    raise ArcError("point not a corner of cell", point=p, cell=cell)


def odd_class(system, arc):
    """Class of the arc read off its canonical diagram alone.

    Tracks the covering sheet of the double lift (sheets swap across the
    lower rays) and counts signed crossings with a test line through each
    interior gap; the count vector is the homology class of the lifted
    circle in the antisymmetric lattice. No twist formula is involved.
    """
    m = system.m
    i, j, evs = arc.canonical()
    counts = [0] * (m - 1)

    def contribute(cell, side_in, side_out, sheet):
        _, c = cell
        if side_in == side_out or not 1 <= c <= m - 1:
            return
        direction = 1 if (side_in, side_out) == ("L", "R") else -1
        counts[c - 1] += direction * sheet

    sheet = 1
    if not evs:
        cell = ("U", min(i, j))
        contribute(cell, _point_side(i, cell), _point_side(j, cell), sheet)
    else:
        cell = _endpoint_cell(evs[0], i)
        contribute(
            cell, _point_side(i, cell), _event_side(evs[0], cell), sheet
        )
        for a, b in zip(evs, evs[1:]):
            if a[0] == "d":
                sheet = -sheet
            cell = _piece_cell(a, b)
            contribute(
                cell, _event_side(a, cell), _event_side(b, cell), sheet
            )
        if evs[-1][0] == "d":
            sheet = -sheet
        cell = _endpoint_cell(evs[-1], j)
        contribute(
            cell, _event_side(evs[-1], cell), _point_side(j, cell), sheet
        )

    # match the lattice's orientation convention, which pairs adjacent
    # basis spheres with +1 rather than the diagram's -1
    coords = tuple(
        c if l % 2 == 0 else -c for l, c in enumerate(counts)
    )
    return SphereClass(_normalize_sign(coords))
