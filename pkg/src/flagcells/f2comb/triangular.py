"""Bit-packed upper-triangular matrices over F2 and the moves acting on them.

T^n is the space of n x n upper-triangular matrices with entries in {0, 1}.
An element is stored in a single Python integer: entry (i, j) (1-based,
i <= j) sits at bit N-1-p where p is the row-major position of (i, j) in
the order (1,1), (1,2), ..., (1,n), (2,2), ..., (n,n) and N = n(n+1)/2.
Packing most-significant-first makes integer comparison agree with
lexicographic comparison of the row-major entry sequence, so the canonical
representative of an orbit (its lexicographically minimal member) is simply
the member with the smallest packed value.

The group acting on T^n is generated by the moves g_ij, 1 <= i <= j <= n-1:
take the 2 x 2 sub-matrix on rows i, i+1 and columns j, j+1 (its upper
triangle when i = j) and add its trace to each of its entries mod 2.  Orbits
of this action label the connected components of the intersection of two
opposite big Schubert cells, with the sign matrix of a factorized group
element as the dictionary.

The involution iota reflects across the anti-diagonal and adds 1 to every
entry; it has no fixed points (the upper-right corner bit always flips).
Whether iota preserves or swaps orbits is the central question this package
exists to decide.
"""

from __future__ import annotations

from ..errors import InvalidParity, NotInIn

__all__ = [
    "F2Tri",
    "apply_generator",
    "generator_indices",
    "iota",
    "height",
    "slice_iota_height",
    "is_symmetric_height",
    "is_special_height",
    "special_heights",
    "is_singleton",
    "pairing",
    "translate",
    "phi",
    "phi_star",
    "matrix_E",
    "matrix_R",
    "m_corner_minus",
    "m_corner_plus",
    "n_corner_minus",
    "p_odd_grid",
    "n_corner_plus",
    "hbar",
    "mbar_minus",
    "mbar_plus",
    "nbar_minus",
    "nbar_plus",
    "f_append",
    "named_matrix",
    "orbit_members",
]


def _check_index(n: int, i: int, j: int):
    if not (1 <= i <= j <= n):
        raise IndexError(f"(i, j) = ({i}, {j}) out of the upper triangle of size {n}")


def bit_of(n: int, i: int, j: int) -> int:
    """Bit index of entry (i, j) in the packed representation."""
    _check_index(n, i, j)
    p = (i - 1) * (2 * n - i + 2) // 2 + (j - i)
    return n * (n + 1) // 2 - 1 - p


class F2Tri:
    """An element of T^n, immutable and hashable."""

    __slots__ = ("n", "bits")

    def __init__(self, n: int, bits: int = 0):
        if n < 1:
            raise ValueError("need n >= 1")
        nbits = n * (n + 1) // 2
        if not (0 <= bits < (1 << nbits)):
            raise ValueError(f"bits out of range for n={n}")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "bits", bits)

    def __setattr__(self, name, value):
        raise AttributeError("F2Tri is immutable")

    @classmethod
    def zero(cls, n: int) -> "F2Tri":
        return cls(n, 0)

    @classmethod
    def all_ones(cls, n: int) -> "F2Tri":
        return cls(n, (1 << (n * (n + 1) // 2)) - 1)

    @classmethod
    def from_rows(cls, rows) -> "F2Tri":
        """Build from upper-triangle rows: rows[i-1] lists entries (i,i)..(i,n)."""
        n = len(rows)
        m = cls(n)
        for i, row in enumerate(rows, start=1):
            if len(row) != n - i + 1:
                raise ValueError(f"row {i} must have {n - i + 1} entries")
            for k, v in enumerate(row):
                if v not in (0, 1):
                    raise ValueError("entries must be 0 or 1")
                if v:
                    m = m.with_bit(i, i + k, 1)
        return m

    @classmethod
    def from_text(cls, text: str) -> "F2Tri":
        """Parse the row encoding, e.g. '000/00/0' for the zero element of T^3."""
        rows = []
        for part in text.strip().split("/"):
            part = part.strip()
            if not all(c in "01" for c in part):
                raise ValueError(f"bad row {part!r}")
            rows.append([int(c) for c in part])
        return cls.from_rows(rows)

    def to_rows(self) -> list[list[int]]:
        return [[self.get(i, j) for j in range(i, self.n + 1)] for i in range(1, self.n + 1)]

    def to_text(self) -> str:
        return "/".join("".join(str(v) for v in row) for row in self.to_rows())

    def get(self, i: int, j: int) -> int:
        return (self.bits >> bit_of(self.n, i, j)) & 1

    def with_bit(self, i: int, j: int, v: int) -> "F2Tri":
        b = bit_of(self.n, i, j)
        bits = (self.bits | (1 << b)) if v else (self.bits & ~(1 << b))
        return F2Tri(self.n, bits)

    def __xor__(self, other: "F2Tri") -> "F2Tri":
        if self.n != other.n:
            raise ValueError("size mismatch")
        return F2Tri(self.n, self.bits ^ other.bits)

    def __eq__(self, other):
        return isinstance(other, F2Tri) and self.n == other.n and self.bits == other.bits

    def __lt__(self, other: "F2Tri") -> bool:
        if self.n != other.n:
            raise ValueError("size mismatch")
        return self.bits < other.bits

    def __hash__(self):
        return hash((self.n, self.bits))

    def __repr__(self):
        return f"F2Tri({self.n}, {self.to_text()!r})"


def generator_indices(n: int) -> list[tuple[int, int]]:
    """All generator labels (i, j), 1 <= i <= j <= n-1, in a fixed order."""
    return [(i, j) for i in range(1, n) for j in range(i, n)]


def generator_flip(n: int, i: int, j: int) -> int:
    """Packed bit pattern the move g_ij adds when its trace is 1."""
    if not (1 <= i <= j <= n - 1):
        raise IndexError(f"generator ({i}, {j}) out of range for n={n}")
    if i < j:
        return (
            (1 << bit_of(n, i, j))
            | (1 << bit_of(n, i, j + 1))
            | (1 << bit_of(n, i + 1, j))
            | (1 << bit_of(n, i + 1, j + 1))
        )
    return (
        (1 << bit_of(n, i, i))
        | (1 << bit_of(n, i, i + 1))
        | (1 << bit_of(n, i + 1, i + 1))
    )


def generator_trace_bits(n: int, i: int, j: int) -> tuple[int, int]:
    """Bit indices whose XOR is the trace of the targeted 2 x 2 sub-matrix."""
    if not (1 <= i <= j <= n - 1):
        raise IndexError(f"generator ({i}, {j}) out of range for n={n}")
    return bit_of(n, i, j), bit_of(n, i + 1, j + 1)


def apply_generator(m: F2Tri, i: int, j: int) -> F2Tri:
    """Apply the move g_ij; applying it twice returns the input."""
    a, b = generator_trace_bits(m.n, i, j)
    if ((m.bits >> a) ^ (m.bits >> b)) & 1:
        return F2Tri(m.n, m.bits ^ generator_flip(m.n, i, j))
    return m


def iota(m: F2Tri) -> F2Tri:
    """Anti-diagonal reflection plus the all-ones offset; an involution."""
    n = m.n
    out = F2Tri.zero(n)
    for i in range(1, n + 1):
        for j in range(i, n + 1):
            v = m.get(n + 1 - j, n + 1 - i) ^ 1
            if v:
                out = out.with_bit(i, j, 1)
    return out


def pairing(m: F2Tri, mstar: F2Tri) -> int:
    """The standard pairing <M, M*> = sum of entry products mod 2."""
    if m.n != mstar.n:
        raise ValueError("size mismatch")
    return (m.bits & mstar.bits).bit_count() & 1


def height(m: F2Tri) -> tuple[int, ...]:
    """h_k = <M, R_k>: the parity of the entries (r, s) with r <= k <= s."""
    n = m.n
    return tuple(pairing(m, matrix_R(n, k)) for k in range(1, n + 1))


def slice_iota_height(n: int, h: tuple[int, ...]) -> tuple[int, ...]:
    """Height of the iota-image of the slice at height h.

    From h_k(M) = h_{n+1-k}(iota M) + k(n+1-k) mod 2, the image slice has
    h'_j = h_{n+1-j} + j(n+1-j) mod 2.
    """
    if len(h) != n:
        raise ValueError("height length must equal n")
    return tuple((h[n - j] + j * (n + 1 - j)) % 2 for j in range(1, n + 1))


def is_symmetric_height(h: tuple[int, ...]) -> bool:
    """Palindromic about the middle: h_k = h_{n+1-k} for all k."""
    return h == tuple(reversed(h))


def is_special_height(h: tuple[int, ...]) -> bool:
    """The mixed-parity condition making a slice iota-invariant for odd n:

        h_k = h_{n+1-k}        for even k,
        h_k = h_{n+1-k} + 1    for odd k.

    Equivalently the slice at h is fixed by iota, since for odd n the
    correction term k(n+1-k) has the parity of k.
    """
    n = len(h)
    if n % 2 == 0:
        raise InvalidParity("special slices are defined for odd n")
    return all(h[k - 1] == (h[n - k] + k) % 2 for k in range(1, n + 1))


def special_heights(n: int) -> list[tuple[int, ...]]:
    """All heights of special slices, in lexicographic order."""
    if n % 2 == 0:
        raise InvalidParity("special slices are defined for odd n")
    out = []
    for x in range(1 << n):
        h = tuple((x >> (n - 1 - k)) & 1 for k in range(n))
        if is_special_height(h):
            out.append(h)
    return out


def is_singleton(m: F2Tri) -> bool:
    """Fixed by every move: constant along diagonals (M_ij = M_{i+1,j+1})."""
    n = m.n
    return all(
        m.get(i, j) == m.get(i + 1, j + 1) for i in range(1, n) for j in range(i, n)
    )


def translate(m: F2Tri, i_elem: F2Tri) -> F2Tri:
    """Add an element of the span of the diagonal-constant matrices E_k.

    This action sends orbits to orbits and commutes with iota.
    """
    if not is_singleton(i_elem):
        raise NotInIn("translation element must be constant along diagonals")
    return m ^ i_elem


def phi(m: F2Tri) -> F2Tri:
    """The 2 x 2 window-sum map T^n -> T^{n-1}.

    N_ij = M_ij + M_{i+1,j} + M_{i,j+1} + M_{i+1,j+1}, entries below the
    diagonal of M read as 0.
    """
    n = m.n
    if n < 2:
        raise ValueError("need n >= 2")
    out = F2Tri.zero(n - 1)
    for i in range(1, n):
        for j in range(i, n):
            v = m.get(i, j) ^ m.get(i, j + 1) ^ m.get(i + 1, j + 1)
            if i + 1 <= j:
                v ^= m.get(i + 1, j)
            if v:
                out = out.with_bit(i, j, 1)
    return out


def phi_star(nmat: F2Tri) -> F2Tri:
    """The dual of ``phi``: a linear injection of T^{m} onto the zero-height
    subspace of T^{m+1}.

    On a basis element E_ij the image is E_ij + E_{i,j+1} + E_{i+1,j} +
    E_{i+1,j+1}, with terms below the diagonal dropped.
    """
    m = nmat.n
    out = F2Tri.zero(m + 1)
    for i in range(1, m + 1):
        for j in range(i, m + 1):
            if nmat.get(i, j):
                bits = (
                    (1 << bit_of(m + 1, i, j))
                    | (1 << bit_of(m + 1, i, j + 1))
                    | (1 << bit_of(m + 1, i + 1, j + 1))
                )
                if i + 1 <= j:
                    bits |= 1 << bit_of(m + 1, i + 1, j)
                out = F2Tri(m + 1, out.bits ^ bits)
    return out


# -- named elements used by the orbit-pairing arguments ------------------------

def matrix_E(n: int, k: int) -> F2Tri:
    """E_k: all ones on the (k-1)-th superdiagonal (entries with j-i = k-1)."""
    if not (1 <= k <= n):
        raise IndexError(f"k={k} out of range")
    m = F2Tri.zero(n)
    for i in range(1, n - k + 2):
        m = m.with_bit(i, i + k - 1, 1)
    return m


def matrix_R(n: int, k: int) -> F2Tri:
    """R_k: all ones at the hook of entries (r, s) with r <= k <= s."""
    if not (1 <= k <= n):
        raise IndexError(f"k={k} out of range")
    m = F2Tri.zero(n)
    for r in range(1, k + 1):
        for s in range(k, n + 1):
            m = m.with_bit(r, s, 1)
    return m


def m_corner_minus(n: int) -> F2Tri:
    """Ones exactly on the 2 x 2 block at the upper-right corner."""
    if n < 2:
        raise ValueError("need n >= 2")
    m = F2Tri.zero(n)
    for i in (1, 2):
        for j in (n - 1, n):
            if i <= j:
                m = m.with_bit(i, j, 1)
    return m


def m_corner_plus(n: int) -> F2Tri:
    return iota(m_corner_minus(n))


def n_corner_minus(m: int) -> F2Tri:
    """A single one at the upper-right corner of an m x m matrix."""
    return F2Tri.zero(m).with_bit(1, m, 1)


def p_odd_grid(m: int) -> F2Tri:
    """Ones at the upper-triangle positions with both indices odd."""
    out = F2Tri.zero(m)
    for i in range(1, m + 1, 2):
        for j in range(i, m + 1, 2):
            out = out.with_bit(i, j, 1)
    return out


def n_corner_plus(m: int) -> F2Tri:
    return n_corner_minus(m) ^ p_odd_grid(m)


def hbar(n: int) -> tuple[int, ...]:
    """The reference special height: 1,0,1,...,1 on the first (n-1)/2
    coordinates (ending in 1, which needs n = 3 mod 4), then zeros."""
    if n % 4 != 3:
        raise InvalidParity("hbar needs n = 3 mod 4")
    half = (n - 1) // 2
    return tuple(1 if (k < half and k % 2 == 0) else 0 for k in range(n))


def mbar_minus(n: int) -> F2Tri:
    """The diagonal matrix whose diagonal is hbar; lies in the slice at hbar."""
    h = hbar(n)
    m = F2Tri.zero(n)
    for k in range(1, n + 1):
        if h[k - 1]:
            m = m.with_bit(k, k, 1)
    return m


def mbar_plus(n: int) -> F2Tri:
    return iota(mbar_minus(n))


def nbar_minus(n: int) -> F2Tri:
    """Ones at (i, j) with i odd and i <= (n+1)/2."""
    if n % 2 == 0:
        raise InvalidParity("needs odd n")
    out = F2Tri.zero(n)
    for i in range(1, n + 1, 2):
        if i > (n + 1) // 2:
            break
        for j in range(i, n + 1):
            out = out.with_bit(i, j, 1)
    return out


def nbar_plus(n: int) -> F2Tri:
    """Ones at (i, j) with i, j odd and i <= (n+1)/2, plus those with i odd,
    j even and i >= (n+1)/2."""
    if n % 2 == 0:
        raise InvalidParity("needs odd n")
    out = F2Tri.zero(n)
    half = (n + 1) // 2
    for i in range(1, n + 1, 2):
        for j in range(i, n + 1):
            if j % 2 == 1 and i <= half:
                out = out.with_bit(i, j, 1)
            elif j % 2 == 0 and i >= half:
                out = out.with_bit(i, j, 1)
    return out


def f_append(m: F2Tri) -> F2Tri:
    """Append the column (1,...,1, 0,...,0)^T with (n+1)/2 ones to M as the
    last column of an element of T^{n+1}."""
    n = m.n
    if n % 2 == 0:
        raise InvalidParity("needs odd n")
    out = F2Tri.zero(n + 1)
    for i in range(1, n + 1):
        for j in range(i, n + 1):
            if m.get(i, j):
                out = out.with_bit(i, j, 1)
    for i in range(1, (n + 1) // 2 + 1):
        out = out.with_bit(i, n + 1, 1)
    return out


def orbit_members(m: F2Tri, max_size: int = 1 << 16) -> list["F2Tri"]:
    """The full orbit of one element as a sorted list.

    Plain set-based closure, independent of the vectorized engine (which
    makes it a useful cross-check there); meant for small orbits only.
    """
    from ..errors import ResourceBound

    gens = generator_indices(m.n)
    seen = {m}
    frontier = [m]
    while frontier:
        nxt = []
        for x in frontier:
            for (i, j) in gens:
                y = apply_generator(x, i, j)
                if y not in seen:
                    if len(seen) >= max_size:
                        raise ResourceBound(f"orbit exceeds {max_size} elements")
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return sorted(seen, key=lambda t: t.bits)


_NAMED = {
    "E": matrix_E,
    "R": matrix_R,
    "M-": m_corner_minus,
    "M+": m_corner_plus,
    "N-": n_corner_minus,
    "N+": n_corner_plus,
    "P": p_odd_grid,
    "Mbar-": mbar_minus,
    "Mbar+": mbar_plus,
    "Nbar-": nbar_minus,
    "Nbar+": nbar_plus,
}


def named_matrix(name: str, n: int, k: int | None = None) -> F2Tri:
    """Dispatch on the construction name; 'E' and 'R' take the extra index k."""
    if name not in _NAMED:
        raise KeyError(f"unknown name {name!r}; choose from {sorted(_NAMED)}")
    if name in ("E", "R"):
        if k is None:
            raise ValueError(f"{name} needs the index k")
        return _NAMED[name](n, k)
    return _NAMED[name](n)
