"""Theorem-level pipelines: pairing tables, swap verdicts, censuses, and the
cross-consistency suites tying the exact geometry to the F2 combinatorics.

The involution u -> u^-1 on the intersection of the two opposite big cells
descends to the involution iota on T^n (reflect across the anti-diagonal,
add 1 everywhere), and connected components correspond to orbits of the
moves.  The central question is for which d the involution leaves no
component invariant.  For d <= 7 this is decided by enumerating all orbits;
for d = 8 every orbit outside the sixteen iota-invariant "special" slices
of T^7 is excluded by the height argument, and the sixteen slices are
searched exhaustively, which settles a case the height and quadratic-form
arguments cannot reach.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from . import f2comb
from .errors import InvalidParity, NonGeneric
from .exactq import RatMatrix, corner_minors, inverse_unitriangular
from .factorization import FactorParams, compose, factorize, invert_params, sign_matrix
from .f2comb import F2Tri, OrbitReport
from .flags import Flag, big_cell_coordinates


# -- pairing tables -------------------------------------------------------------

@dataclass(frozen=True)
class PairingRow:
    orbit: OrbitReport
    partner: OrbitReport
    invariant: bool


@dataclass(frozen=True)
class PairingTable:
    n: int
    rows: list[PairingRow]
    total_orbits: int
    invariant_count: int
    singleton_count: int

    def as_json(self) -> dict:
        return {
            "n": self.n,
            "total_orbits": self.total_orbits,
            "invariant_count": self.invariant_count,
            "singleton_count": self.singleton_count,
            "rows": [
                {
                    "orbit": r.orbit.as_json(),
                    "partner": r.partner.as_json(),
                    "invariant": r.invariant,
                }
                for r in self.rows
            ],
        }


def pairing_table(n: int, max_states: int | None = None) -> PairingTable:
    """Match every orbit with the orbit of the iota image of its
    representative.  One row per orbit; invariant orbits are self-paired."""
    orbits = f2comb.all_orbits(n, max_states)
    by_rep = {o.representative.bits: o for o in orbits}
    rows = []
    for o in orbits:
        partner = by_rep[o.iota_representative.bits]
        rows.append(PairingRow(o, partner, o.invariant_under_iota))
    return PairingTable(
        n=n,
        rows=rows,
        total_orbits=len(orbits),
        invariant_count=sum(o.invariant_under_iota for o in orbits),
        singleton_count=sum(o.size == 1 for o in orbits),
    )


# -- swap verdicts --------------------------------------------------------------

@dataclass(frozen=True)
class SwapVerdict:
    """Outcome of checking whether the involution leaves a component
    invariant for a given d."""

    d: int
    status: str               # "all_swapped" | "invariant_orbits" | "undecided"
    method: str               # "enumeration" | "slice-restricted" | "none"
    count: int | None = None
    representatives: list[F2Tri] = field(default_factory=list)
    reason: str | None = None
    certificates: list[dict] = field(default_factory=list)

    def as_json(self) -> dict:
        return {
            "d": self.d,
            "status": self.status,
            "method": self.method,
            "count": self.count,
            "representatives": [r.to_text() for r in self.representatives],
            "reason": self.reason,
            "certificates": self.certificates,
        }


def verify_swaps(d: int, max_states: int | None = None) -> SwapVerdict:
    """Decide whether the involution preserves any component at this d.

    d <= 7 by whole-space enumeration, d = 8 by the special-slice search,
    larger d undecided (the state spaces are beyond the desk-scale bounds).
    """
    if d < 2:
        raise ValueError("need d >= 2")
    if d <= 7:
        orbits = f2comb.all_orbits(d - 1, max_states)
        inv = [o for o in orbits if o.invariant_under_iota]
        if not inv:
            return SwapVerdict(d=d, status="all_swapped", method="enumeration", count=0)
        return SwapVerdict(
            d=d,
            status="invariant_orbits",
            method="enumeration",
            count=len(inv),
            representatives=[o.representative for o in inv],
        )
    if d == 8:
        return decide_d8(max_states)
    return SwapVerdict(
        d=d,
        status="undecided",
        method="none",
        reason=f"T^{d - 1} has 2^{(d - 1) * d // 2} states; beyond the enumeration bound",
    )


def decide_d8(max_states: int | None = None) -> SwapVerdict:
    """Settle the d = 8 case by exhausting the sixteen special slices of T^7.

    For odd n the height of a slice and of its iota image differ unless the
    height satisfies the mixed-parity condition, so every orbit outside a
    special slice is swapped with an orbit in another slice.  Each special
    slice splits into two orbits of equal size; the verdict is whichever
    way iota acts on them, certified by the orbit representatives.
    """
    n = 7
    specials = f2comb.special_heights(n)
    fixed = [
        tuple(h)
        for h in _all_heights(n)
        if f2comb.slice_iota_height(n, h) == tuple(h)
    ]
    if fixed != specials:
        raise RuntimeError("special slices disagree with the height fixed points")
    certificates = []
    preserved_reps: list[F2Tri] = []
    for h in specials:
        orbits = f2comb.orbits_in_slice(h, max_states)
        slice_cert = {
            "height": list(h),
            "orbits": [o.as_json() for o in orbits],
        }
        if len(orbits) != 2 or orbits[0].size != orbits[1].size:
            raise RuntimeError(f"special slice {h} does not split into two equal orbits")
        if orbits[0].invariant_under_iota:
            slice_cert["iota_action"] = "preserves both orbits"
            preserved_reps.extend(o.representative for o in orbits)
        else:
            if orbits[0].iota_representative.bits != orbits[1].representative.bits:
                raise RuntimeError(f"orbits of slice {h} are not iota partners")
            slice_cert["iota_action"] = "swaps the two orbits"
        certificates.append(slice_cert)
    if preserved_reps:
        return SwapVerdict(
            d=8,
            status="invariant_orbits",
            method="slice-restricted",
            count=len(preserved_reps),
            representatives=preserved_reps,
            certificates=certificates,
        )
    return SwapVerdict(
        d=8,
        status="all_swapped",
        method="slice-restricted",
        count=0,
        certificates=certificates,
    )


def _all_heights(n: int):
    for x in range(1 << n):
        yield tuple((x >> (n - 1 - k)) & 1 for k in range(n))


# -- classification -------------------------------------------------------------

def classify_component(obj: RatMatrix | Flag, max_states: int | None = None) -> OrbitReport:
    """Which component does a generic element (or flag) lie in?

    Factorizes, takes the sign matrix, and returns the orbit report of the
    sign matrix.  Raises NotInBigCell for flags outside the big cell and
    NonGeneric for unfactorizable matrices.
    """
    u = big_cell_coordinates(obj) if isinstance(obj, Flag) else obj
    params = factorize(u)
    return f2comb.orbit_of(sign_matrix(params), max_states)


# -- the d = 3 census ------------------------------------------------------------

_D3_REGIONS = ["Omega1", "Omega1_hat", "Omega2", "Omega2_hat", "Omega3", "Omega3_hat"]

_D3_ANCHORS = {
    "Omega1": (4, 2, 2),
    "Omega1_hat": (-1, 1, -2),
    "Omega2": (-2, -1, 1),
    "Omega2_hat": (2, -1, -1),
    "Omega3": (0, 1, 1),
    "Omega3_hat": (0, -1, 1),
}


def d3_region(x: Fraction, y: Fraction, z: Fraction) -> str | None:
    """Label of the component of (x, y, z) by its sign conditions:

        Omega1      x>0, y>0, z>0, xz-y>0        Omega1_hat  x<0, y>0, z<0, xz-y>0
        Omega2      x<0, y<0, z>0, xz-y<0        Omega2_hat  x>0, y<0, z<0, xz-y<0
        Omega3      y>0, xz-y<0                  Omega3_hat  y<0, xz-y>0

    None when y or xz-y vanishes (outside the intersection of the cells).
    The first four regions exhaust their sign class: y > 0 < xz-y forces
    xz > 0, and y < 0 > xz-y forces xz < 0.
    """
    p2 = x * z - y
    if y == 0 or p2 == 0:
        return None
    if y > 0 and p2 > 0:
        return "Omega1" if x > 0 else "Omega1_hat"
    if y < 0 and p2 < 0:
        return "Omega2" if x > 0 else "Omega2_hat"
    return "Omega3" if y > 0 else "Omega3_hat"


def _d3_matrix(x, y, z) -> RatMatrix:
    return RatMatrix([[1, x, y], [0, 1, z], [0, 0, 1]])


def d3_census(grid_radius: int = 3) -> dict:
    """Check that the sign-region label and the orbit label agree on a grid.

    The region-to-orbit dictionary is pinned by one interior sample per
    region and emitted with the report; every generic grid point must then
    classify into the orbit its region dictates.
    """
    bijection = {}
    for name in _D3_REGIONS:
        x, y, z = _D3_ANCHORS[name]
        rep = classify_component(_d3_matrix(x, y, z)).representative
        bijection[name] = rep
    if len({r.bits for r in bijection.values()}) != 6:
        raise RuntimeError("region anchors do not hit six distinct orbits")
    checked = 0
    skipped = 0
    mismatches = []
    r = grid_radius
    for x in range(-r, r + 1):
        for y in range(-r, r + 1):
            for z in range(-r, r + 1):
                region = d3_region(Fraction(x), Fraction(y), Fraction(z))
                if region is None:
                    skipped += 1
                    continue
                try:
                    rep = classify_component(_d3_matrix(x, y, z)).representative
                except NonGeneric:
                    # in a component but outside the factorizable locus (z = 0)
                    skipped += 1
                    continue
                checked += 1
                if rep != bijection[region]:
                    mismatches.append({"xyz": [x, y, z], "region": region,
                                       "orbit": rep.to_text()})
    return {
        "bijection": {k: v.to_text() for k, v in bijection.items()},
        "grid_radius": r,
        "checked": checked,
        "skipped": skipped,
        "mismatches": mismatches,
    }


# -- claim-level slice checks ----------------------------------------------------

def claim2_check(n: int, max_states: int | None = None) -> str:
    """Are the orbits of the two corner-block elements of the zero-height
    slice disjoint or equal?  Returns "disjoint" or "equal"."""
    if n % 2 != 0:
        raise InvalidParity("the corner-block pair is studied for even n")
    if n < 2:
        raise ValueError("need n >= 2")
    m_minus = f2comb.m_corner_minus(n)
    m_plus = f2comb.m_corner_plus(n)
    return "equal" if f2comb.slice_reachable(m_minus, m_plus, max_states) else "disjoint"


# -- randomized exact consistency suite -------------------------------------------

def random_params(n: int, rng: random.Random) -> FactorParams:
    """Nonzero integer parameters in [-9, 9], drawn reproducibly."""
    t = {}
    for i in range(1, n + 1):
        for j in range(1, n + 2 - i):
            v = 0
            while v == 0:
                v = rng.randint(-9, 9)
            t[(i, j)] = Fraction(v)
    return FactorParams(n, t)


def geometric_consistency_suite(d: int, samples: int, seed: int) -> dict:
    """Exact property checks on seeded random generic elements of U_d:

      * the complementary-minor identity p_k(u^-1) = (-1)^{k(d+1)} p_{d-k}(u);
      * sign_matrix(invert_params(t)) = iota(sign_matrix(t));
      * compose(invert_params(t)) . compose(t) = identity;
      * for d = 2 mod 4, the middle minor changes sign under inversion.

    Every failure is reported with the witnessing parameters; the expected
    count is zero.
    """
    if not (2 <= d <= 8):
        raise ValueError("d must be between 2 and 8")
    n = d - 1
    rng = random.Random(seed)
    failures = []
    checks = {"jacobi": 0, "sign_inversion": 0, "exact_inverse": 0, "middle_sign_flip": 0}
    for trial in range(samples):
        t = random_params(n, rng)
        u = compose(t)
        ti = invert_params(t)
        ui = compose(ti)
        p = corner_minors(u)
        q = corner_minors(inverse_unitriangular(u))

        def fail(check, detail):
            failures.append({"trial": trial, "check": check, "detail": detail,
                             "params": [[i, j, str(v)] for (i, j), v in t.items()]})

        ok = all(
            q[k - 1] == (-1) ** (k * (d + 1)) * p[d - k - 1] for k in range(1, d)
        )
        checks["jacobi"] += ok
        if not ok:
            fail("jacobi", {"p": [str(v) for v in p], "p_inv": [str(v) for v in q]})

        ok = sign_matrix(ti) == f2comb.iota(sign_matrix(t))
        checks["sign_inversion"] += ok
        if not ok:
            fail("sign_inversion", {"sign": sign_matrix(t).to_text(),
                                    "sign_inv": sign_matrix(ti).to_text()})

        ok = ui * u == RatMatrix.identity(d)
        checks["exact_inverse"] += ok
        if not ok:
            fail("exact_inverse", {})

        if d % 4 == 2:
            mid = p[d // 2 - 1]
            ok = mid == 0 or (mid > 0) == (q[d // 2 - 1] < 0)
            checks["middle_sign_flip"] += ok
            if not ok:
                fail("middle_sign_flip", {"p_mid": str(mid), "p_inv_mid": str(q[d // 2 - 1])})
    if d % 4 != 2:
        checks.pop("middle_sign_flip")
    return {
        "d": d,
        "samples": samples,
        "seed": seed,
        "checks": checks,
        "failures": failures,
    }
