"""Orbit enumeration for the moves on T^n, engineered for desk-scale sizes.

Every orbit stays inside one slice (a translate of the zero-height subspace;
heights are preserved by every move), so the engine always works in F2
*coordinates* on an affine subspace:

  * whole space: coordinates are the packed matrix bits themselves;
  * a slice at height h: the base point is the diagonal matrix with
    diagonal h, and the basis consists of the images under the window-sum
    dual map of the standard basis of T^{n-1}.  This basis is exactly the
    family of flip patterns of the moves, so in slice coordinates every
    generator toggles a *single* coordinate bit, conditioned on an affine
    F2 form of the state.

Three execution strategies share one visited structure:

  * small spaces (dim <= 22): one byte per state, vectorized frontier
    lists, fancy-indexed marking;
  * large spaces: one bit per state (e.g. 32 MiB for 2^28 states), frontier
    lists with bit-test gathers while the frontier is narrow;
  * once a level grows past a threshold in a large space, full-bitmap level
    sweeps: per generator, the mover set is selected by XORing a per-word
    sign with a 64-state parity pattern, and the move itself is a one-bit
    XOR permutation of the bitmap (a masked shift or a block swap).  All
    word passes run into preallocated buffers.

Everything is deterministic: generators are applied in a fixed order and
the reported representative (the member with the smallest packed value,
i.e. the lexicographically minimal matrix) is tracked explicitly, so the
output is independent of chunking or scheduling.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ..errors import ResourceBound
from .triangular import (
    F2Tri,
    bit_of,
    generator_flip,
    generator_indices,
    generator_trace_bits,
    height,
    iota,
)

_ENV_MAX_STATES = "FLAGCELLS_MAX_STATES"
DEFAULT_MAX_STATES = 1 << 30

_BYTE_DIM_MAX = 22          # byte-per-state visited up to 4 MiB
_SWEEP_LEVEL_MIN = 1 << 16  # switch a large space to bitmap sweeps


def max_states_limit(explicit: int | None = None) -> int:
    """Resolve the state bound: explicit argument beats the environment."""
    if explicit is not None:
        return explicit
    env = os.environ.get(_ENV_MAX_STATES)
    if env:
        return int(env)
    return DEFAULT_MAX_STATES


@dataclass(frozen=True)
class OrbitReport:
    """Canonical data of one orbit: representative, size, slice, and the
    canonical representative of the orbit of its iota image."""

    n: int
    representative: F2Tri
    size: int
    height: tuple[int, ...]
    iota_representative: F2Tri
    invariant_under_iota: bool

    def as_json(self) -> dict:
        return {
            "n": self.n,
            "rep": self.representative.to_text(),
            "size": self.size,
            "height": list(self.height),
            "iota_rep": self.iota_representative.to_text(),
            "invariant": self.invariant_under_iota,
        }


class _F2RowSpace:
    """Row space over F2 with coefficient tracking, for expressing packed
    vectors in a given basis."""

    def __init__(self, rows: list[int]):
        self.rows = []   # reduced rows
        self.tags = []   # combination of input rows producing each reduced row
        self.pivots = []
        for k, r in enumerate(rows):
            tag = 1 << k
            for rr, tt, p in zip(self.rows, self.tags, self.pivots):
                if (r >> p) & 1:
                    r ^= rr
                    tag ^= tt
            if r == 0:
                raise ValueError("basis rows are dependent")
            self.rows.append(r)
            self.tags.append(tag)
            self.pivots.append(r.bit_length() - 1)

    def express(self, x: int) -> int:
        coeff = 0
        for rr, tt, p in zip(self.rows, self.tags, self.pivots):
            if (x >> p) & 1:
                x ^= rr
                coeff ^= tt
        if x != 0:
            raise ValueError("vector not in the span")
        return coeff


class _Space:
    """Coordinate system (base point + basis) plus generator tables."""

    def __init__(self, n: int, base: int, basis: list[int], identity_coords: bool):
        self.n = n
        self.base = base
        self.basis = basis
        self.dim = len(basis)
        self.identity_coords = identity_coords
        solver = None if identity_coords else _F2RowSpace(basis)
        self._solver = solver
        self.gens = []
        for (i, j) in generator_indices(n):
            flip = generator_flip(n, i, j)
            a, b = generator_trace_bits(n, i, j)
            vmask = flip if identity_coords else solver.express(flip)
            cmask = 0
            for k, bk in enumerate(basis):
                if (((bk >> a) ^ (bk >> b)) & 1) != 0:
                    cmask |= 1 << k
            bconst = ((base >> a) ^ (base >> b)) & 1
            self.gens.append((vmask, cmask, bconst))
        self._to_packed_tables = None
        self._iota_tables = None

    @classmethod
    def whole(cls, n: int) -> "_Space":
        nbits = n * (n + 1) // 2
        return cls(n, 0, [1 << k for k in range(nbits)], True)

    @classmethod
    def slice_at(cls, n: int, h: tuple[int, ...]) -> "_Space":
        if len(h) != n or any(v not in (0, 1) for v in h):
            raise ValueError("height must be an n-vector of bits")
        base = 0
        for k in range(1, n + 1):
            if h[k - 1]:
                base |= 1 << bit_of(n, k, k)
        if n == 1:
            return cls(n, base, [], False)
        # flip patterns of the moves, indexed by the T^{n-1} bit convention,
        # form a basis of the zero-height subspace
        basis = [0] * ((n - 1) * n // 2)
        for (i, j) in generator_indices(n):
            basis[bit_of(n - 1, i, j)] = generator_flip(n, i, j)
        return cls(n, base, basis, False)

    def to_coords(self, packed: int) -> int:
        if self.identity_coords:
            return packed
        return self._solver.express(packed ^ self.base)

    def to_packed(self, coord: int) -> int:
        if self.identity_coords:
            return coord
        x = self.base
        c = coord
        while c:
            low = c & -c
            x ^= self.basis[low.bit_length() - 1]
            c ^= low
        return x

    def to_packed_batch(self, coords: np.ndarray) -> np.ndarray:
        """Vectorized coords -> packed via two half-width XOR tables."""
        if self.identity_coords:
            return coords
        if self._to_packed_tables is None:
            half = (self.dim + 1) // 2
            lo = np.zeros(1 << half, dtype=np.int64)
            hi = np.zeros(1 << max(self.dim - half, 0), dtype=np.int64)
            for t, off in ((lo, 0), (hi, half)):
                for x in range(1, len(t)):
                    low = x & -x
                    t[x] = t[x ^ low] ^ self.basis[low.bit_length() - 1 + off]
            self._to_packed_tables = (lo, hi, half)
        lo, hi, half = self._to_packed_tables
        out = lo[coords & ((1 << half) - 1)]
        if len(hi) > 1:
            out ^= hi[coords >> half]
        out ^= self.base
        return out

    def iota_packed_batch(self, packed: np.ndarray) -> np.ndarray:
        """Vectorized anti-diagonal reflection + complement on packed values."""
        if self._iota_tables is None:
            self._iota_tables = _iota_tables(self.n)
        tables, ones = self._iota_tables
        out = np.full(packed.shape, ones, dtype=np.int64)
        for k, t in enumerate(tables):
            out ^= t[(packed >> (12 * k)) & 0xFFF]
        return out


@lru_cache(maxsize=None)
def _iota_tables(n: int):
    nbits = n * (n + 1) // 2
    perm = {}
    for i in range(1, n + 1):
        for j in range(i, n + 1):
            perm[bit_of(n, n + 1 - j, n + 1 - i)] = bit_of(n, i, j)
    nchunks = (nbits + 11) // 12
    tables = []
    for k in range(nchunks):
        t = np.zeros(1 << 12, dtype=np.int64)
        for x in range(1, 1 << 12):
            low = x & -x
            src = low.bit_length() - 1 + 12 * k
            t[x] = t[x ^ low] ^ ((1 << perm[src]) if src in perm else 0)
        tables.append(t)
    return tables, (1 << nbits) - 1


_LOW_SWAP_MASKS = [
    0x5555555555555555,
    0x3333333333333333,
    0x0F0F0F0F0F0F0F0F,
    0x00FF00FF00FF00FF,
    0x0000FFFF0000FFFF,
    0x00000000FFFFFFFF,
]


class _Scan:
    """Shared visited structure over one coordinate space, supporting
    repeated orbit closures (for sweeping a whole space or slice)."""

    def __init__(self, space: _Space, max_states: int | None = None):
        self.space = space
        limit = max_states_limit(max_states)
        if (1 << space.dim) > limit:
            raise ResourceBound(
                f"2^{space.dim} states exceed the bound of {limit}; "
                f"raise --max-states or {_ENV_MAX_STATES}"
            )
        self.nstates = 1 << space.dim
        self.byte_mode = space.dim <= _BYTE_DIM_MAX
        if self.byte_mode:
            self.visited = np.zeros(self.nstates, dtype=np.uint8)
        else:
            self.words = np.zeros(self.nstates >> 6, dtype=np.uint64)
            self.visited8 = self.words.view(np.uint8)
        self._scan_ptr = 0
        self._sweep = None

    # -- visited primitives ---------------------------------------------------

    def is_visited(self, coord: int) -> bool:
        if self.byte_mode:
            return bool(self.visited[coord])
        return bool((int(self.words[coord >> 6]) >> (coord & 63)) & 1)

    def _mark_scalar(self, coord: int):
        if self.byte_mode:
            self.visited[coord] = 1
        else:
            self.words[coord >> 6] |= np.uint64(1 << (coord & 63))

    def _filter_and_mark(self, arr: np.ndarray) -> np.ndarray:
        """Keep the unvisited entries of arr (no duplicates by construction)
        and mark them visited."""
        if self.byte_mode:
            fresh = arr[self.visited[arr] == 0]
            self.visited[fresh] = 1
            return fresh
        byte = arr >> 3
        bit = (np.left_shift(1, arr & 7)).astype(np.uint8)
        fresh_sel = (self.visited8[byte] & bit) == 0
        fresh = arr[fresh_sel]
        np.bitwise_or.at(self.visited8, fresh >> 3, (np.left_shift(1, fresh & 7)).astype(np.uint8))
        return fresh

    def next_unvisited(self) -> int | None:
        """Smallest never-visited coordinate, advancing a persistent cursor."""
        if self.byte_mode:
            v = self.visited
            while self._scan_ptr < self.nstates:
                chunk = v[self._scan_ptr : self._scan_ptr + (1 << 16)]
                zeros = np.nonzero(chunk == 0)[0]
                if zeros.size:
                    return self._scan_ptr + int(zeros[0])
                self._scan_ptr += chunk.size
            return None
        full = np.uint64(0xFFFFFFFFFFFFFFFF)
        w = self.words
        ptr = self._scan_ptr >> 6
        while ptr < w.size:
            chunk = w[ptr : ptr + (1 << 14)]
            holes = np.nonzero(chunk != full)[0]
            if holes.size:
                wi = ptr + int(holes[0])
                inv = ~int(w[wi]) & 0xFFFFFFFFFFFFFFFF
                self._scan_ptr = wi << 6
                return (wi << 6) + ((inv & -inv).bit_length() - 1)
            ptr += chunk.size
            self._scan_ptr = ptr << 6
        return None

    # -- frontier-list closure ------------------------------------------------

    def close_orbit(self, start: int, track: bool = True,
                    stop_if_reached: int | None = None):
        """BFS closure of the orbit of ``start``.

        Returns (size, rep_packed, iota_rep_packed, reached) where the
        representatives are None unless ``track``, and reached tells whether
        ``stop_if_reached`` belongs to the orbit (None when not asked).
        If the stop state is reached the closure may end early, in which
        case size is None.
        """
        space = self.space
        if self.is_visited(start):
            raise ValueError("start state already consumed by this scan")
        self._mark_scalar(start)
        frontier = np.array([start], dtype=np.int64)
        size = 1
        min_packed = None
        min_iota = None
        if track:
            p = space.to_packed_batch(frontier)
            min_packed = int(p.min())
            min_iota = int(space.iota_packed_batch(p).min())
        reached = None
        if stop_if_reached is not None:
            reached = stop_if_reached == start
            if reached:
                return size, min_packed, min_iota, True

        # a generator whose trace form is constant 0 on this slice never moves
        gens = [g for g in space.gens if g[1] != 0 or g[2] != 0]
        while frontier.size:
            if (not self.byte_mode and frontier.size >= _SWEEP_LEVEL_MIN):
                return self._sweep_rest(frontier, size, min_packed, min_iota,
                                        track, stop_if_reached, reached)
            parts = []
            for vmask, cmask, bconst in gens:
                if cmask == 0:
                    moved = frontier.copy()
                else:
                    par = _parity_of_masked(frontier, cmask)
                    moved = frontier[par != bconst]
                if not moved.size:
                    continue
                np.bitwise_xor(moved, vmask, out=moved)
                fresh = self._filter_and_mark(moved)
                if fresh.size:
                    parts.append(fresh)
            if not parts:
                break
            frontier = parts[0] if len(parts) == 1 else np.concatenate(parts)
            size += frontier.size
            if track:
                p = space.to_packed_batch(frontier)
                min_packed = min(min_packed, int(p.min()))
                min_iota = min(min_iota, int(space.iota_packed_batch(p).min()))
            if stop_if_reached is not None and not reached:
                if bool(np.any(frontier == stop_if_reached)):
                    reached = True
                    return None, min_packed, min_iota, reached
        return size, min_packed, min_iota, reached

    # -- full-bitmap level sweeps ----------------------------------------------

    def _sweep_tables(self):
        """Per-generator tables for bitmap sweeps: 64-state parity pattern,
        per-word sign (as int8 0/-1), and the flip decomposition."""
        if self._sweep is not None:
            return self._sweep
        nw = self.words.size
        warange = np.arange(nw, dtype=np.int64)
        tmp = np.empty(nw, dtype=np.int64)
        tables = []
        for vmask, cmask, bconst in self.space.gens:
            if cmask == 0 and bconst == 0:
                continue
            clow = cmask & 63
            pat = 0
            for r in range(64):
                if (r & clow).bit_count() & 1:
                    pat |= 1 << r
            chigh = cmask >> 6
            np.bitwise_and(warange, chigh, out=tmp)
            par = np.zeros(nw, dtype=np.int64)
            np.copyto(par, tmp)
            for s in (32, 16, 8, 4, 2, 1):
                np.right_shift(par, s, out=tmp)
                np.bitwise_xor(par, tmp, out=par)
            np.bitwise_and(par, 1, out=par)
            if bconst:
                np.bitwise_xor(par, 1, out=par)
            sign = (-par).astype(np.int8)
            flips = []
            v = vmask
            while v:
                low = v & -v
                flips.append(low.bit_length() - 1)
                v ^= low
            tables.append((np.uint64(pat), sign, flips))
        self._sweep = tables
        return tables

    def _permute_xor_bit(self, src: np.ndarray, dst: np.ndarray, bpos: int):
        """dst = src with state indices XORed by 1 << bpos (bitmap form)."""
        if bpos >= 6:
            k = 1 << (bpos - 6)
            s3 = src.reshape(-1, 2, k)
            d3 = dst.reshape(-1, 2, k)
            d3[:, 0, :] = s3[:, 1, :]
            d3[:, 1, :] = s3[:, 0, :]
        else:
            lomask = np.uint64(_LOW_SWAP_MASKS[bpos])
            s = np.uint64(1 << bpos)
            tmp = self._buf_tmp
            np.bitwise_and(src, lomask, out=tmp)
            np.left_shift(tmp, s, out=dst)
            np.right_shift(src, s, out=tmp)
            np.bitwise_and(tmp, lomask, out=tmp)
            np.bitwise_or(dst, tmp, out=dst)

    def _sweep_rest(self, frontier, size, min_packed, min_iota, track,
                    stop_if_reached, reached):
        """Continue a closure with whole-bitmap sweeps (large spaces only)."""
        nw = self.words.size
        tables = self._sweep_tables()
        fbm = np.zeros(nw, dtype=np.uint64)
        np.bitwise_or.at(
            fbm.view(np.uint8), frontier >> 3,
            (np.left_shift(1, frontier & 7)).astype(np.uint8),
        )
        orbit_bm = fbm.copy() if track else None
        nxt = np.empty(nw, dtype=np.uint64)
        A = np.empty(nw, dtype=np.uint64)
        B = np.empty(nw, dtype=np.uint64)
        sign64 = np.empty(nw, dtype=np.int64)
        self._buf_tmp = np.empty(nw, dtype=np.uint64)
        stop_w = stop_b = None
        if stop_if_reached is not None:
            stop_w, stop_b = stop_if_reached >> 6, stop_if_reached & 63
        while True:
            nxt[:] = 0
            for pat, sign, flips in tables:
                np.copyto(sign64, sign)
                u = sign64.view(np.uint64)
                np.bitwise_xor(u, pat, out=A)
                np.bitwise_and(A, fbm, out=A)
                cur, other = A, B
                for bpos in flips:
                    self._permute_xor_bit(cur, other, bpos)
                    cur, other = other, cur
                np.bitwise_or(nxt, cur, out=nxt)
            np.bitwise_not(self.words, out=A)
            np.bitwise_and(nxt, A, out=nxt)
            lev = int(np.bitwise_count(nxt).sum())
            if lev == 0:
                break
            size += lev
            np.bitwise_or(self.words, nxt, out=self.words)
            if track:
                np.bitwise_or(orbit_bm, nxt, out=orbit_bm)
            if stop_if_reached is not None and not reached:
                if (int(nxt[stop_w]) >> stop_b) & 1:
                    reached = True
                    return None, min_packed, min_iota, reached
            fbm, nxt = nxt, fbm
        if track:
            mp, mi = self._extract_minima(orbit_bm)
            min_packed = mp if min_packed is None else min(min_packed, mp)
            min_iota = mi if min_iota is None else min(min_iota, mi)
        return size, min_packed, min_iota, reached

    def _extract_minima(self, orbit_bm: np.ndarray):
        """Min packed value and min packed iota image over a state bitmap."""
        space = self.space
        min_packed = None
        min_iota = None
        chunk_words = 1 << 17
        for lo in range(0, orbit_bm.size, chunk_words):
            chunk = orbit_bm[lo : lo + chunk_words]
            bits = np.unpackbits(chunk.view(np.uint8), bitorder="little")
            idx = np.nonzero(bits)[0]
            if not idx.size:
                continue
            coords = idx.astype(np.int64) + (lo << 6)
            p = space.to_packed_batch(coords)
            mp = int(p.min())
            mi = int(space.iota_packed_batch(p).min())
            min_packed = mp if min_packed is None else min(min_packed, mp)
            min_iota = mi if min_iota is None else min(min_iota, mi)
        return min_packed, min_iota


def _parity_of_masked(arr: np.ndarray, cmask: int) -> np.ndarray:
    """Per-element parity of popcount(arr & cmask); cmask is sparse here."""
    positions = []
    v = cmask
    while v:
        low = v & -v
        positions.append(low.bit_length() - 1)
        v ^= low
    acc = arr >> positions[0]
    tmp = np.empty_like(arr)
    for p in positions[1:]:
        np.right_shift(arr, p, out=tmp)
        np.bitwise_xor(acc, tmp, out=acc)
    np.bitwise_and(acc, 1, out=acc)
    return acc


# -- public enumeration API ---------------------------------------------------

def _report(n: int, size: int, rep_packed: int, iota_rep_packed: int) -> OrbitReport:
    rep = F2Tri(n, rep_packed)
    return OrbitReport(
        n=n,
        representative=rep,
        size=size,
        height=height(rep),
        iota_representative=F2Tri(n, iota_rep_packed),
        invariant_under_iota=(iota_rep_packed == rep_packed),
    )


def orbit_of(m: F2Tri, max_states: int | None = None) -> OrbitReport:
    """The orbit of one element, enumerated inside its own slice."""
    space = _Space.slice_at(m.n, height(m))
    scan = _Scan(space, max_states)
    size, rep, irep, _ = scan.close_orbit(space.to_coords(m.bits), track=True)
    return _report(m.n, size, rep, irep)


def orbits_in_slice(h: tuple[int, ...], max_states: int | None = None) -> list[OrbitReport]:
    """All orbits inside the slice at height h, sorted by representative."""
    n = len(h)
    space = _Space.slice_at(n, tuple(h))
    scan = _Scan(space, max_states)
    out = []
    while True:
        start = scan.next_unvisited()
        if start is None:
            break
        size, rep, irep, _ = scan.close_orbit(start, track=True)
        out.append(_report(n, size, rep, irep))
    out.sort(key=lambda r: r.representative.bits)
    return out


def all_orbits(n: int, max_states: int | None = None) -> list[OrbitReport]:
    """All orbits in T^n, sorted by representative.

    Up to n = 6 this runs one global scan over the packed states.  From
    n = 7 on it enumerates slice by slice (identical partition, far better
    locality: each slice is 2^{n(n+1)/2 - n} states) and merges.
    """
    if n <= 6:
        space = _Space.whole(n)
        scan = _Scan(space, max_states)
        out = []
        while True:
            start = scan.next_unvisited()
            if start is None:
                break
            size, rep, irep, _ = scan.close_orbit(start, track=True)
            out.append(_report(n, size, rep, irep))
        out.sort(key=lambda r: r.representative.bits)
        return out
    if (1 << (n * (n + 1) // 2)) > max_states_limit(max_states):
        raise ResourceBound(f"T^{n} has 2^{n * (n + 1) // 2} states")
    out = []
    for x in range(1 << n):
        h = tuple((x >> (n - 1 - k)) & 1 for k in range(n))
        out.extend(orbits_in_slice(h, max_states))
    out.sort(key=lambda r: r.representative.bits)
    return out


def slice_reachable(m_from: F2Tri, m_to: F2Tri, max_states: int | None = None) -> bool:
    """Whether two elements of one slice lie in the same orbit.

    Runs a single closure from ``m_from`` and may stop early on success.
    """
    if m_from.n != m_to.n:
        raise ValueError("size mismatch")
    h = height(m_from)
    if height(m_to) != h:
        return False
    space = _Space.slice_at(m_from.n, h)
    scan = _Scan(space, max_states)
    _, _, _, reached = scan.close_orbit(
        space.to_coords(m_from.bits),
        track=False,
        stop_if_reached=space.to_coords(m_to.bits),
    )
    return bool(reached)
