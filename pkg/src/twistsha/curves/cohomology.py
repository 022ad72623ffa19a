"""Galois cohomology of E(K) for K = Q(sqrt D) at desk scale.

A finitely generated subgroup G of E(K) is modelled as Z^n / L, where n is the
number of generators and L the relation lattice.  Torsion relations are found
by enumeration; generators of infinite order are trusted to be independent
modulo torsion.  sigma acts by an integer matrix S on row vectors, and

    E(F)  = ker(1 - sigma)      R_D = ker(1 + sigma)
    N_D   = im(1 + sigma)       T_D = im(1 - sigma)

are computed as lattices between L and Z^n.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from twistsha.curves import lattice as lat
from twistsha.curves.field import QuadField
from twistsha.curves.torsion import division_points
from twistsha.curves.weierstrass import CurveQ, Point

DEFAULT_BUDGET = 10**5
ORDER_SEARCH_BOUND = 64
SIGMA_SEARCH_BOX = 2

ASSUME_FREE_INDEPENDENT = "free generators independent modulo torsion (trusted input)"
ASSUME_FULL_GENERATORS = "generators span all of E(K) (trusted input)"


class CohomologyError(ValueError):
    pass


class EnumerationBudgetError(CohomologyError):
    pass


class NotSigmaStable(CohomologyError):
    pass


def enumeration_budget() -> int:
    raw = os.environ.get("TWISTSHA_ENUM_BUDGET")
    if raw is None:
        return DEFAULT_BUDGET
    try:
        value = int(raw)
    except ValueError as exc:
        raise CohomologyError(f"TWISTSHA_ENUM_BUDGET must be an integer, got {raw!r}") from exc
    if value < 1:
        raise CohomologyError("TWISTSHA_ENUM_BUDGET must be positive")
    return value


@dataclass
class GeneratedSubgroup:
    """Subgroup of E(K) generated by explicit points.

    ``orders[i]`` is the order of ``generators[i]`` or None for infinite order.
    """

    curve: CurveQ
    field: QuadField | None
    generators: list[Point]
    orders: list[int | None]
    assumptions: list[str] = dc_field(default_factory=list)

    @classmethod
    def from_points(cls, points, curve: CurveQ | None = None, field: QuadField | None = None):
        points = [P for P in points]
        if curve is None:
            if not points:
                raise CohomologyError("need a curve when no generators are given")
            curve = points[0].curve
        if field is None and points:
            field = next((P.field for P in points if P.field is not None), None)
        gens, orders = [], []
        for P in points:
            if P.curve != curve:
                raise CohomologyError("generators lie on different curves")
            if P.field is not None and field is not None and P.field != field:
                raise CohomologyError("generators lie over different fields")
            if P.is_zero:
                continue
            gens.append(P.with_field(field))
            orders.append(P.order(ORDER_SEARCH_BOUND))
        assumptions = [ASSUME_FREE_INDEPENDENT] if any(o is None for o in orders) else []
        return cls(curve, field, gens, orders, assumptions)

    @property
    def free_rank(self) -> int:
        return sum(1 for o in self.orders if o is None)

    @property
    def torsion_orders(self) -> list[int]:
        return [o for o in self.orders if o is not None]

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    def zero(self) -> Point:
        return Point.infinity(self.curve, self.field)

    def evaluate(self, v) -> Point:
        out = self.zero()
        for c, g in zip(v, self.generators):
            if c:
                out = out + g * c
        return out

    def elements(self, budget: int | None = None) -> list[Point]:
        """All elements of a finite generated group, by breadth-first closure."""
        if not self.is_finite:
            raise CohomologyError("cannot enumerate a group of positive rank")
        budget = enumeration_budget() if budget is None else budget
        seen = {self.zero()}
        for g in self.generators:
            layer = list(seen)
            Q = g
            while Q not in seen:
                for P in layer:
                    seen.add(P + Q)
                if len(seen) > budget:
                    raise EnumerationBudgetError(f"group exceeds the enumeration budget {budget}")
                Q = Q + g
        return sorted(seen)

    def __len__(self):
        return len(self.elements())


class SigmaModule:
    """Z^n / L with the sigma action, built from a sigma-stable generating set."""

    def __init__(self, G: GeneratedSubgroup, budget: int | None = None):
        if G.field is None:
            raise CohomologyError("sigma needs a quadratic field")
        self.G = G
        self.n = len(G.generators)
        self.budget = enumeration_budget() if budget is None else budget
        self._torsion_index()
        self._relations()
        self._sigma_matrix()

    # torsion generators: enumerate, recording a coordinate vector per element
    def _torsion_index(self):
        G, n = self.G, self.n
        self.tors_idx = [i for i, o in enumerate(G.orders) if o is not None]
        self.free_idx = [i for i, o in enumerate(G.orders) if o is None]
        table = {G.zero(): (0,) * n}
        self.tors_relations = []
        for i in self.tors_idx:
            g = G.generators[i]
            existing = list(table.items())
            Q, k = g, 1
            while Q not in table:
                for P, v in existing:
                    w = list(v)
                    w[i] += k
                    table.setdefault(P + Q, tuple(w))
                if len(table) > self.budget:
                    raise EnumerationBudgetError(f"torsion exceeds the enumeration budget {self.budget}")
                Q, k = Q + g, k + 1
            # k*g equals a known element with coordinates table[Q]
            rel = [-x for x in table[Q]]
            rel[i] += k
            self.tors_relations.append(tuple(rel))
        self.torsion_table = table

    def _relations(self):
        self.L = lat.basis(self.tors_relations, self.n)

    def coords_of_torsion(self, P: Point):
        return self.torsion_table.get(P.with_field(self.G.field))

    def _sigma_matrix(self):
        G, n = self.G, self.n
        rows = []
        r = len(self.free_idx)
        for i, g in enumerate(G.generators):
            target = g.sigma()
            v = self.coords_of_torsion(target)
            if v is not None:
                rows.append(v)
                continue
            if G.orders[i] is not None:
                raise NotSigmaStable(f"sigma({g}) is not in the generated torsion")
            found = None
            for box in range(1, SIGMA_SEARCH_BOX + 1):
                for c in itertools.product(range(-box, box + 1), repeat=r):
                    if not any(c):
                        continue
                    P = target
                    for cj, j in zip(c, self.free_idx):
                        if cj:
                            P = P - G.generators[j] * cj
                    t = self.coords_of_torsion(P)
                    if t is not None:
                        w = list(t)
                        for cj, j in zip(c, self.free_idx):
                            w[j] += cj
                        found = tuple(w)
                        break
                if found:
                    break
            if found is None:
                raise NotSigmaStable(f"sigma({g}) is not in the generated group")
            rows.append(found)
        self.S = [list(row) for row in rows]
        ident = [[int(i == j) for j in range(n)] for i in range(n)]
        self.I = ident
        self.one_plus = [[ident[i][j] + self.S[i][j] for j in range(n)] for i in range(n)]
        self.one_minus = [[ident[i][j] - self.S[i][j] for j in range(n)] for i in range(n)]
        for rel in self.L:
            if not lat.contains(self.L, lat.mat_vec(rel, self.S), n):
                raise NotSigmaStable("sigma does not preserve the relation lattice")

    # lattices (all contain L)
    @property
    def whole(self):
        return lat.basis([tuple(r) for r in self.I], self.n) if self.n else []

    def fixed(self):
        return lat.preimage(self.one_minus, self.L, self.n)

    def anti_fixed(self):
        return lat.preimage(self.one_plus, self.L, self.n)

    def norms(self):
        return lat.add(lat.image(self.one_plus, self.whole, self.n), self.L, self.n)

    def traces(self):
        """T_D = image of P -> P - sigma(P)."""
        return lat.add(lat.image(self.one_minus, self.whole, self.n), self.L, self.n)

    def double(self, M):
        return lat.add(lat.scale(M, 2, self.n), self.L, self.n)

    def rank(self, M) -> int:
        return len(lat.basis(M, self.n)) - len(self.L)

    def index(self, sub, sup) -> int:
        idx = lat.index(lat.add(sub, self.L, self.n), lat.add(sup, self.L, self.n), self.n)
        if idx is None:
            raise CohomologyError("index is infinite; the generators are incomplete")
        return idx

    def subgroup(self, M) -> GeneratedSubgroup:
        """Generators with exact orders for the subgroup M/L."""
        n = self.n
        H = lat.basis(lat.add(M, self.L, n), n)
        G = self.G
        if not H:
            return GeneratedSubgroup(G.curve, G.field, [], [], list(G.assumptions))
        C = [lat.coordinates(v, H) for v in self.L]
        k = len(H)
        if C:
            d, _, V = lat.smith(C)
        else:
            d, V = [], [[int(i == j) for j in range(k)] for i in range(k)]
        Vinv = lat.inverse_unimodular(V)
        new_basis = [lat.mat_vec(row, H) for row in Vinv]
        gens, orders = [], []
        for i, v in enumerate(new_basis):
            di = d[i] if i < len(d) else 0
            if abs(di) == 1:
                continue
            P = G.evaluate(v)
            gens.append(P)
            orders.append(abs(di) if di else None)
        return GeneratedSubgroup(G.curve, G.field, gens, orders, list(G.assumptions))


@dataclass
class SubgroupImages:
    norms: GeneratedSubgroup
    traces: GeneratedSubgroup
    anti_fixed: GeneratedSubgroup
    fixed: GeneratedSubgroup


def subgroup_images(G: GeneratedSubgroup) -> SubgroupImages:
    """(N_D, T_D, R_D part, E(F) part) of a sigma-stable generated group."""
    if not G.generators:
        return SubgroupImages(G, G, G, G)
    M = SigmaModule(G)
    return SubgroupImages(
        M.subgroup(M.norms()),
        M.subgroup(M.traces()),
        M.subgroup(M.anti_fixed()),
        M.subgroup(M.fixed()),
    )


def index_E_mod_ND(G: GeneratedSubgroup) -> int:
    """(E(F) : N_D(F)) inside the generated group."""
    if not G.generators:
        return 1
    M = SigmaModule(G)
    return M.index(M.norms(), M.fixed())


@dataclass(frozen=True)
class H1Report:
    lhs: Fraction
    rhs: Fraction
    r_F: int
    r_DF: int
    index: int
    assumptions: tuple[str, ...] = ()

    @property
    def equal(self) -> bool:
        return self.lhs == self.rhs


def verify_h1_order(G: GeneratedSubgroup) -> H1Report:
    """Compare #(R_D/T_D) with 2^(r_DF - r_F) (E(F) : N_D)."""
    assumptions = tuple(G.assumptions) + (ASSUME_FULL_GENERATORS,)
    if not G.generators:
        return H1Report(Fraction(1), Fraction(1), 0, 0, 1, assumptions)
    M = SigmaModule(G)
    R, T = M.anti_fixed(), M.traces()
    Ef, N = M.fixed(), M.norms()
    lhs = M.index(T, R)
    r_F, r_DF = M.rank(Ef), M.rank(R)
    idx = M.index(N, Ef)
    rhs = Fraction(2) ** (r_DF - r_F) * idx
    return H1Report(Fraction(lhs), rhs, r_F, r_DF, idx, assumptions)


# -- enumeration-based identities (finite groups) ----------------------------


@dataclass(frozen=True)
class IdentityCheck:
    name: str
    values: tuple
    holds: bool


def _index_sets(big: set, small: set) -> Fraction:
    return Fraction(len(big), len(small))


def enumerated_parts(G: GeneratedSubgroup, budget: int | None = None):
    """Sets E(F), R_D, N_D, T_D inside an enumerated finite group."""
    elems = set(G.elements(budget))
    fixed = {P for P in elems if P.sigma() == P}
    anti = {P for P in elems if P.sigma() == -P}
    norms = {P + P.sigma() for P in elems}
    traces = {P - P.sigma() for P in elems}
    if not norms <= elems or not traces <= elems:
        raise NotSigmaStable("generated group is not sigma-stable")
    return elems, fixed, anti, norms, traces


def lemma_identities(G: GeneratedSubgroup, budget: int | None = None) -> list[IdentityCheck]:
    """Exhaustive checks of the structural identities relating E(F), R_D, N_D, T_D."""
    elems, Ef, R, N, T = enumerated_parts(G, budget)
    out = []
    R2 = {P for P in R if (P + P).is_zero}
    E2 = {P for P in Ef if (P + P).is_zero}
    out.append(IdentityCheck("R_D[2] = R_D cap E(F)", (len(R2), len(R & Ef)), R2 == R & Ef))
    out.append(IdentityCheck("R_D cap E(F) = E(F)[2]", (len(R & Ef), len(E2)), R & Ef == E2))
    twoR = {P + P for P in R}
    twoE = {P + P for P in Ef}
    sum_ER = {P + Q for P in Ef for Q in R}
    pre_phi2 = {P for P in elems if (P - P.sigma()) in twoR}
    pre_phi1 = {P for P in elems if (P + P.sigma()) in twoE}
    out.append(IdentityCheck("phi2^-1(2R_D) = E(F) + R_D", (len(pre_phi2), len(sum_ER)), pre_phi2 == sum_ER))
    out.append(IdentityCheck("E(F) + R_D = phi1^-1(2E(F))", (len(sum_ER), len(pre_phi1)), sum_ER == pre_phi1))
    i1 = _index_sets(elems, sum_ER)
    i2 = _index_sets(T, twoR)
    i3 = _index_sets(N, twoE)
    out.append(IdentityCheck("(E(K) : E(F)+R_D) = (T_D : 2R_D)", (i1, i2), i1 == i2))
    out.append(IdentityCheck("(T_D : 2R_D) = (N_D : 2E(F))", (i2, i3), i2 == i3))
    h1 = _index_sets(R, T)
    rhs = _index_sets(Ef, N)
    out.append(IdentityCheck("#(R_D/T_D) = (E(F) : N_D)", (h1, rhs), h1 == rhs))
    return out


def norm_preimages(P: Point, field: QuadField, anti_fixed_reps) -> list[Point]:
    """Points Q in E(K) with Q + sigma(Q) = P.

    ``anti_fixed_reps`` must represent R_D / 2R_D.  Any such Q satisfies
    2Q = P + (Q - sigma Q), so it is found by halving P + T.
    """
    out = set()
    for T in anti_fixed_reps:
        target = P.with_field(field) + T.with_field(field)
        for Q in division_points(target, 2, field):
            if Q + Q.sigma() == P.with_field(field):
                out.add(Q)
    return sorted(out)


def anti_fixed_torsion(curve: CurveQ, field: QuadField) -> list[Point]:
    from twistsha.curves.torsion import torsion_points

    return [P for P in torsion_points(curve, field) if P.sigma() == -P]


def torsion_subgroup(curve: CurveQ, field: QuadField | None = None) -> GeneratedSubgroup:
    from twistsha.curves.torsion import finite_group_basis, torsion_points

    gens, orders = finite_group_basis(torsion_points(curve, field))
    return GeneratedSubgroup(curve, field, gens, list(orders))
