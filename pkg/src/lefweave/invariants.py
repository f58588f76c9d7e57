"""Smooth invariants of the total space of a Lefschetz datum.

The total space is the fiber times a disk with one extra (n+1)-handle
per vanishing cycle.  Its cellular chain complex therefore has one
0-cell, one n-cell per fiber sphere, and one (n+1)-cell per cycle whose
boundary is the cycle's homology class.  Everything below follows from
the Smith normal form of that single boundary matrix:

    H_0 = Z,   H_n = coker d,   H_{n+1} = ker d,   else 0
    chi = chi(fiber) + (-1)^(n+1) k

The middle intersection form lives on ker d.  On thimble generators it
is <klass V_i, klass V_j> for i < j, extended (anti)symmetrically, with
the diagonal fixed by the matching-sphere normalization: a cycle pair
(V, V) presents D*S^(n+1), whose generator must self-pair to chi of the
even-dimensional sphere, forcing diagonal +-1 for odd n and 0 for even.
"""

from collections import namedtuple
from fractions import Fraction

from .lattice import SphereClass, pairing, smith_normal_form

TotalSpaceInvariants = namedtuple(
    "TotalSpaceInvariants",
    ("n", "chi", "homology", "middle_form", "middle_symmetry",
     "form_invariants"),
)


class InvariantError(ValueError):
    """Raised on unsupported inputs or internal consistency failures."""

    def __init__(self, message, **context):
        super().__init__(message)
        self.context = dict(context)


def _boundary_matrix(D):
    rank = D.fiber.lattice.rank
    return [
        [cyc.klass.coords[r] for cyc in D.cycles] for r in range(rank)
    ]


def _divisors_and_kernel(D):
    """Nonzero SNF divisors of d plus an integer basis of ker d."""
    rank = D.fiber.lattice.rank
    k = len(D.cycles)
    if k == 0:
        return [], []
    if rank == 0:
        basis = [tuple(1 if i == j else 0 for i in range(k))
                 for j in range(k)]
        return [], basis
    _, Dm, V = smith_normal_form(_boundary_matrix(D))
    divisors = []
    kernel = []
    for j in range(k):
        if j < rank and Dm[j][j] != 0:
            divisors.append(Dm[j][j])
        else:
            # zero column of D: column j of V is a kernel vector
            kernel.append(tuple(V[i][j] for i in range(k)))
    return divisors, kernel


def _euler_formula(D):
    rank = D.fiber.lattice.rank
    n = D.n
    fiber_chi = 1 + (-1) ** n * rank
    return fiber_chi + (-1) ** (n + 1) * len(D.cycles)


def total_space_homology(D):
    """Homology and chi of the total space; form fields left empty."""
    n = D.n
    rank = D.fiber.lattice.rank
    k = len(D.cycles)
    divisors, kernel = _divisors_and_kernel(D)
    r = len(divisors)
    torsion = tuple(d for d in divisors if d > 1)
    homology = []
    for deg in range(n + 2):
        free, tor = 0, ()
        if deg == 0:
            free = 1
        if deg == n:
            free += rank - r
            tor = torsion
        if deg == n + 1:
            free += k - r
        homology.append((deg, free, tor))
    chi = sum((-1) ** deg * free for deg, free, _ in homology)
    if chi != _euler_formula(D):
        raise InvariantError(
            "homology disagrees with the Euler formula",
            chi=chi, formula=_euler_formula(D))
    return TotalSpaceInvariants(n, chi, tuple(homology), None, None, None)


def euler_characteristic(D):
    """chi(fiber) + (-1)^(n+1) k, cross-checked against homology."""
    return total_space_homology(D).chi


def _diagonal_self_pairing(n):
    if n % 2 == 0:
        return 0
    half = (n + 1) * (n + 2) // 2
    return 1 if half % 2 == 0 else -1


def middle_intersection_form(D):
    """The intersection matrix on a basis of H_{n+1} = ker d.

    On thimbles, Q(t_i, t_j) = <K_i, K_j>/2 for i < j, extended
    (anti)symmetrically, with diagonal delta = +-1 for odd n and 0 for
    even n.  The halves are forced together: the matching-sphere datum
    (V, V) presents D*S^(n+1) whose generator t_1 - t_2 must self-pair
    to +-chi(S^(n+1)), and Hurwitz moves act on thimbles by elementary
    unimodular matrices, which preserves this Q and no other scaling.
    Restricted to ker d the matrix is integral: for odd n the two
    triangular halves agree on kernel vectors, for even n the fiber
    lattice is even.
    """
    n = D.n
    lattice = D.fiber.lattice
    klasses = [cyc.klass for cyc in D.cycles]
    delta = _diagonal_self_pairing(n)
    flip = (-1) ** (n + 1)
    k = len(klasses)
    _, kernel = _divisors_and_kernel(D)
    pair = {}
    for i in range(k):
        for j in range(i + 1, k):
            pair[(i, j)] = pairing(lattice, klasses[i], klasses[j])

    form = []
    for u in kernel:
        row = []
        for v in kernel:
            doubled = 0
            for i in range(k):
                doubled += 2 * delta * u[i] * v[i]
                for j in range(i + 1, k):
                    doubled += (u[i] * v[j] + flip * u[j] * v[i]) \
                        * pair[(i, j)]
            half, rem = divmod(doubled, 2)
            if rem:
                raise InvariantError(
                    "kernel pairing is not integral", doubled=doubled)
            row.append(half)
        form.append(tuple(row))
    return tuple(form)


def form_invariants(matrix, symmetric):
    """(rank, |det| of the nondegenerate part, signature or None)."""
    size = len(matrix)
    if size == 0:
        return (0, 1, 0 if symmetric else None)
    _, Dm, _ = smith_normal_form(matrix)
    divisors = [Dm[t][t] for t in range(size) if Dm[t][t] != 0]
    rank = len(divisors)
    abs_det = 1
    for d in divisors:
        abs_det *= d
    if not symmetric:
        return (rank, abs_det, None)
    return (rank, abs_det, _signature(matrix))


def _signature(matrix):
    """Signature of a symmetric integer matrix, by exact diagonalization."""
    size = len(matrix)
    A = [[Fraction(x) for x in row] for row in matrix]
    pos = neg = 0
    for t in range(size):
        if A[t][t] == 0:
            fix = next(
                (j for j in range(t + 1, size) if A[t][j] != 0), None)
            if fix is None:
                continue
            # make the diagonal entry nonzero; one of the two signs works
            for sgn in (1, -1):
                if A[t][t] + 2 * sgn * A[t][fix] + A[fix][fix] != 0:
                    for j in range(size):
                        A[t][j] += sgn * A[fix][j]
                    for i in range(size):
                        A[i][t] += sgn * A[i][fix]
                    break
        pivot = A[t][t]
        if pivot > 0:
            pos += 1
        elif pivot < 0:
            neg += 1
        else:
            continue
        for i in range(t + 1, size):
            if A[i][t] == 0:
                continue
            mult = A[i][t] / pivot
            for j in range(size):
                A[i][j] -= mult * A[t][j]
            for j in range(size):
                A[j][i] -= mult * A[j][t]
    return pos - neg


def total_space_invariants(D):
    """The full bundle: homology, chi, middle form, form invariants."""
    base = total_space_homology(D)
    form = middle_intersection_form(D)
    symmetric = D.n % 2 == 1
    return base._replace(
        middle_form=form,
        middle_symmetry="symmetric" if symmetric else "antisymmetric",
        form_invariants=form_invariants(form, symmetric),
    )


def _merge_torsion(t1, t2):
    """Combine two divisor chains into one canonical chain."""
    entries = list(t1) + list(t2)
    if not entries:
        return ()
    size = len(entries)
    diag = [[entries[i] if i == j else 0 for j in range(size)]
            for i in range(size)]
    _, Dm, _ = smith_normal_form(diag)
    return tuple(Dm[t][t] for t in range(size) if Dm[t][t] > 1)


def product_with_cotangent_sphere(inv, j):
    """Homology of (total space) x D*S^j via the Kunneth formula."""
    if j < 1:
        raise InvariantError("sphere dimension must be positive", j=j)
    free = {deg: f for deg, f, _ in inv.homology}
    tors = {deg: t for deg, _, t in inv.homology}
    # H_*(D*S^j) = H_*(S^j) is free, so the Kunneth Tor terms all vanish
    new_n = inv.n + j
    homology = []
    for deg in range(new_n + 2):
        f = free.get(deg, 0) + free.get(deg - j, 0)
        t = _merge_torsion(tors.get(deg, ()), tors.get(deg - j, ()))
        homology.append((deg, f, t))
    chi = sum((-1) ** deg * f for deg, f, _ in homology)
    if chi != inv.chi * (1 + (-1) ** j):
        raise InvariantError(
            "product chi disagrees with multiplicativity",
            chi=chi, expected=inv.chi * (1 + (-1) ** j))
    return TotalSpaceInvariants(
        new_n, chi, tuple(homology), None, None, None)
