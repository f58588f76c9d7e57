"""Exact integer lattice algebra: pairings, twist automorphisms, word evaluation, SNF.

Conventions, fixed once here and relied on everywhere else:

- ``n`` is half the fiber dimension; the pairing on the middle homology of a
  2n-dimensional fiber is symmetric for n even and antisymmetric (zero
  diagonal) for n odd.
- A class usable as a twist center must have self-pairing
  (-1)^{n(n+1)/2} * 2 when n is even (so -2 at n=2, +2 at n=4); for n odd the
  self-pairing is automatically 0.
- The twist acts by  tau_S(x) = x + eps * <x,S> * S  with eps = -2/<S,S> for
  n even and eps = +1 for n odd (the odd-n sign is a pure mirror convention).
  Consequences used below: tau_S(S) = (-1)^{n+1} S; for n even tau_S is an
  involution on the lattice, so exponents only matter mod 2; for n odd
  tau_S^m(x) = x + m * <x,S> * S, so the inverse is x - <x,S> S.

All arithmetic is plain Python integers; values are immutable tuples.
"""


class LatticeError(ValueError):
    """Structured error for invalid lattice inputs."""

    def __init__(self, message, **context):
        super().__init__(message)
        self.context = context


def _as_int_rows(rows):
    return tuple(tuple(int(x) for x in row) for row in rows)


class IntLattice:
    """A finitely generated free abelian group with an integer Gram form."""

    __slots__ = ("gram", "n", "rank")

    def __init__(self, gram, n):
        gram = _as_int_rows(gram)
        rank = len(gram)
        if any(len(row) != rank for row in gram):
            raise LatticeError("gram matrix must be square", rank=rank)
        if n < 1:
            raise LatticeError("n must be a positive integer", n=n)
        if n % 2 == 0:
            for i in range(rank):
                for j in range(rank):
                    if gram[i][j] != gram[j][i]:
                        raise LatticeError(
                            "gram must be symmetric for even n", i=i, j=j
                        )
        else:
            for i in range(rank):
                if gram[i][i] != 0:
                    raise LatticeError(
                        "gram diagonal must vanish for odd n", i=i
                    )
                for j in range(rank):
                    if gram[i][j] != -gram[j][i]:
                        raise LatticeError(
                            "gram must be antisymmetric for odd n", i=i, j=j
                        )
        object.__setattr__(self, "gram", gram)
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "rank", rank)

    def __setattr__(self, name, value):
        raise AttributeError("IntLattice is immutable")

    @property
    def symmetric(self):
        return self.n % 2 == 0

    def twist_center_self_pairing(self):
        """Required self-pairing of a twist center (0 for odd n)."""
        if self.n % 2 == 0:
            return (-1) ** (self.n * (self.n + 1) // 2) * 2
        return 0

    def basis_sphere(self, i, label=None):
        """The i-th basis class, 1-based to match the e1, e2, ... notation."""
        if not 1 <= i <= self.rank:
            raise LatticeError("basis index out of range", i=i, rank=self.rank)
        coords = tuple(1 if j == i - 1 else 0 for j in range(self.rank))
        return SphereClass(coords, label=label or "e%d" % i)

    def __eq__(self, other):
        return (
            isinstance(other, IntLattice)
            and self.gram == other.gram
            and self.n == other.n
        )

    def __hash__(self):
        return hash((self.gram, self.n))

    def __repr__(self):
        return "IntLattice(rank=%d, n=%d)" % (self.rank, self.n)


class SphereClass:
    """An integer homology class; equality and hashing use coordinates only."""

    __slots__ = ("coords", "label")

    def __init__(self, coords, label=None):
        object.__setattr__(self, "coords", tuple(int(c) for c in coords))
        object.__setattr__(self, "label", label)

    def __setattr__(self, name, value):
        raise AttributeError("SphereClass is immutable")

    def __eq__(self, other):
        return isinstance(other, SphereClass) and self.coords == other.coords

    def __hash__(self):
        return hash(self.coords)

    def is_zero(self):
        return all(c == 0 for c in self.coords)

    def __repr__(self):
        if self.label:
            return "SphereClass(%r, %s)" % (self.coords, self.label)
        return "SphereClass(%r)" % (self.coords,)


class TwistWord:
    """A symbolic word of twists applied to a base class.

    ``letters`` is a sequence of (center, exponent) pairs, leftmost letter
    outermost; evaluation applies letters right to left.  Construction
    performs free reduction only: adjacent letters with equal center merge
    their exponents and zero exponents are dropped.  No braid relations are
    applied.
    """

    __slots__ = ("letters", "base")

    def __init__(self, letters, base):
        reduced = []
        for center, exp in letters:
            exp = int(exp)
            if exp == 0:
                continue
            if reduced and reduced[-1][0].coords == center.coords:
                merged = reduced[-1][1] + exp
                reduced.pop()
                if merged != 0:
                    reduced.append((reduced_center(center), merged))
            else:
                reduced.append((reduced_center(center), exp))
        object.__setattr__(self, "letters", tuple(reduced))
        object.__setattr__(self, "base", base)

    def __setattr__(self, name, value):
        raise AttributeError("TwistWord is immutable")

    def is_trivial(self):
        return not self.letters

    def prepend(self, center, exp):
        """New word with one more (outermost) letter, freely reduced."""
        return TwistWord(((center, exp),) + self.letters, self.base)

    def __eq__(self, other):
        return (
            isinstance(other, TwistWord)
            and self.letters == other.letters
            and self.base == other.base
        )

    def __hash__(self):
        return hash((self.letters, self.base))

    def __repr__(self):
        parts = ["tw(%r)^%d" % (c.coords, e) for c, e in self.letters]
        return "TwistWord(%s | %r)" % (" ".join(parts) or "1", self.base.coords)


def reduced_center(center):
    # letters keep the original object; helper exists so merged letters keep
    # the first-seen label rather than allocating a new class
    return center


def pairing(L, x, y):
    """Evaluate the Gram form: x^T . gram . y."""
    if len(x.coords) != L.rank or len(y.coords) != L.rank:
        raise LatticeError(
            "class length does not match lattice rank",
            rank=L.rank,
            x=len(x.coords),
            y=len(y.coords),
        )
    total = 0
    for i, xi in enumerate(x.coords):
        if xi == 0:
            continue
        row = L.gram[i]
        total += xi * sum(row[j] * yj for j, yj in enumerate(y.coords) if yj)
    return total


def _check_center(L, S):
    required = L.twist_center_self_pairing()
    if L.n % 2 == 0 and pairing(L, S, S) != required:
        raise LatticeError(
            "invalid twist center: self-pairing must be %d for n=%d"
            % (required, L.n),
            self_pairing=pairing(L, S, S),
        )


def dehn_twist(L, S, x):
    """tau_S(x) = x + eps_n <x,S> S."""
    return twist_power(L, S, x, 1)


def twist_power(L, S, x, exponent):
    """Apply tau_S^exponent exactly (closed form, valid for any integer)."""
    _check_center(L, S)
    if L.n % 2 == 0:
        # involution on the lattice: only exponent parity matters
        if exponent % 2 == 0:
            return SphereClass(x.coords)
        eps = -2 // pairing(L, S, S)
        m = eps * pairing(L, x, S)
    else:
        # transvection: tau^m(x) = x + m <x,S> S
        m = exponent * pairing(L, x, S)
    return SphereClass(
        tuple(x.coords[i] + m * S.coords[i] for i in range(L.rank))
    )


def evaluate_word(L, w):
    """Evaluate a twist word on its base class, innermost letter first."""
    result = w.base
    for center, exp in reversed(w.letters):
        result = twist_power(L, center, result, exp)
    return SphereClass(result.coords)


def smith_normal_form(M):
    """Smith normal form with transforms: returns (U, D, V), U.M.V = D.

    D is diagonal with nonnegative entries in a divisibility chain
    d_i | d_{i+1}; U and V are unimodular.  Pivoting is deterministic:
    the smallest nonzero absolute value in the remaining submatrix wins,
    ties broken by lowest row index, then lowest column index.
    """
    A = [list(map(int, row)) for row in M]
    p = len(A)
    q = len(A[0]) if p else 0
    if any(len(row) != q for row in A):
        raise LatticeError("ragged matrix")
    U = [[1 if i == j else 0 for j in range(p)] for i in range(p)]
    V = [[1 if i == j else 0 for j in range(q)] for i in range(q)]

    def row_swap(a, b):
        A[a], A[b] = A[b], A[a]
        U[a], U[b] = U[b], U[a]

    def col_swap(a, b):
        for row in A:
            row[a], row[b] = row[b], row[a]
        for row in V:
            row[a], row[b] = row[b], row[a]

    def row_add(dst, src, mult):
        # row_dst += mult * row_src
        Ad, As = A[dst], A[src]
        for j in range(q):
            Ad[j] += mult * As[j]
        Ud, Us = U[dst], U[src]
        for j in range(p):
            Ud[j] += mult * Us[j]

    def col_add(dst, src, mult):
        for row in A:
            row[dst] += mult * row[src]
        for row in V:
            row[dst] += mult * row[src]

    def find_pivot(t):
        best = None
        for i in range(t, p):
            for j in range(t, q):
                v = abs(A[i][j])
                if v and (best is None or v < best[0]):
                    best = (v, i, j)
        return best

    for t in range(min(p, q)):
        while True:
            found = find_pivot(t)
            if found is None:
                break
            _, pi, pj = found
            if pi != t:
                row_swap(t, pi)
            if pj != t:
                col_swap(t, pj)
            pivot = A[t][t]
            dirty = False
            for i in range(p):
                if i != t and A[i][t] != 0:
                    quot = A[i][t] // pivot
                    if quot:
                        row_add(i, t, -quot)
                    if A[i][t] != 0:
                        dirty = True
            for j in range(q):
                if j != t and A[t][j] != 0:
                    quot = A[t][j] // pivot
                    if quot:
                        col_add(j, t, -quot)
                    if A[t][j] != 0:
                        dirty = True
            if dirty:
                continue
            # row and column t are clear; enforce divisibility into the rest
            bad = None
            for i in range(t + 1, p):
                for j in range(t + 1, q):
                    if A[i][j] % pivot != 0:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            row_add(t, bad, 1)
        if A[t][t] < 0:
            for j in range(q):
                A[t][j] = -A[t][j]
            for j in range(p):
                U[t][j] = -U[t][j]
        if A[t][t] == 0:
            break

    return (
        tuple(tuple(r) for r in U),
        tuple(tuple(r) for r in A),
        tuple(tuple(r) for r in V),
    )
