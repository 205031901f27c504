"""Unipotent curves g_τ on Q and limits of g_τ(C) as τ → ∞.

With s = 1/τ every row of a basis of g_τ(C) becomes a polynomial vector in
s. The limit is the row space at s = 0 once the rows there are independent;
while they are not, a vanishing combination is divided by s and replaces
one of its rows, which lowers the s-valuation of the wedge of the rows.
"""
import random
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .algebra import ModuleRealization
from .errors import Cancelled, DimensionMismatch, EndpointMismatch, QuiverGrassError, RankDrop
from .layering import SemisimpleSequence, dominates, layering_of
from .linalg import nullspace, rank, transpose
from .quiver import ModPath, Path
from .realize import IsoVerdict, QModel, SubmodulePresentation, iso_probe
from .skeleta import ProjectiveContext
from .univariate import RationalFunction, UPoly


class CancellationToken:
    def __init__(self):
        self._event = threading.Event()

    def cancel(self):
        self._event.set()

    @property
    def cancelled(self) -> bool:
        return self._event.is_set()

    def check(self):
        if self._event.is_set():
            raise Cancelled("computation cancelled")


@dataclass(frozen=True)
class CurveTerm:
    coeff: RationalFunction
    path: Path  # from e(source_slot) to e(r), positive length
    source_slot: int


class UnipotentCurve:
    """g_τ(z_r) = z_r + Σ_i a_ri(τ) p_ri z_{j(r,i)}; slots without terms are fixed."""

    def __init__(self, ctx: ProjectiveContext, terms: Dict[int, Sequence[CurveTerm]]):
        self.ctx = ctx
        self.terms: Dict[int, Tuple[CurveTerm, ...]] = {}
        for r, ts in sorted(terms.items()):
            if not 1 <= r <= ctx.t:
                raise EndpointMismatch(f"slot {r} out of range")
            for term in ts:
                if term.path.length < 1:
                    raise EndpointMismatch("curve terms need paths of positive length")
                if not 1 <= term.source_slot <= ctx.t or term.path.source != ctx.e(term.source_slot):
                    raise EndpointMismatch(f"path {term.path} does not start at the vertex of slot {term.source_slot}")
                if term.path.target != ctx.e(r):
                    raise EndpointMismatch(f"path {term.path} does not end at the vertex of slot {r}")
            self.terms[r] = tuple(ts)

    @classmethod
    def from_spec(cls, ctx: ProjectiveContext, spec: Dict[int, Sequence]) -> "UnipotentCurve":
        """``spec[r]`` lists (coefficient, arrows in traversal order, source slot)."""
        from .univariate import parse_rational_function

        terms = {}
        for r, ts in spec.items():
            out = []
            for coeff, arrows, j in ts:
                if isinstance(coeff, str):
                    coeff = parse_rational_function(coeff)
                elif not isinstance(coeff, RationalFunction):
                    coeff = RationalFunction(coeff if isinstance(coeff, UPoly) else UPoly.const(coeff))
                out.append(CurveTerm(coeff, ctx.quiver.path(ctx.e(j), arrows), j))
            terms[r] = out
        return cls(ctx, terms)

    def reparametrize(self, a, b) -> "UnipotentCurve":
        """The curve τ ↦ g_{aτ+b}."""
        return UnipotentCurve(self.ctx, {
            r: [CurveTerm(t.coeff.compose_linear(a, b), t.path, t.source_slot) for t in ts]
            for r, ts in self.terms.items()
        })

    def is_zero(self) -> bool:
        return all(not t.coeff for ts in self.terms.values() for t in ts)


@dataclass
class SubspaceFamily:
    rows: List[List[UPoly]]
    ambient: int
    k: int
    model: QModel = field(repr=False, default=None)

    def at(self, tau) -> List[List[Fraction]]:
        return [[x(tau) for x in row] for row in self.rows]


def _lcm(a: UPoly, b: UPoly) -> UPoly:
    from .univariate import poly_gcd

    return (a * b).divmod(poly_gcd(a, b))[0].monic()


def apply_curve(curve: UnipotentCurve, c_sub: SubmodulePresentation, ctx: Optional[ProjectiveContext] = None,
                seed: int = 0) -> SubspaceFamily:
    """Polynomial rows spanning g_τ(C) over K(τ); C is taken through a K-basis, which is Λ-stable."""
    ctx = ctx or c_sub.ctx
    model = c_sub.model
    q = ctx.quiver
    denom = UPoly.const(1)
    for ts in curve.terms.values():
        for t in ts:
            denom = _lcm(denom, t.coeff.den)
    # D(τ)·g_τ(z_r) as a vector of polynomials
    images: Dict[int, List[UPoly]] = {}
    for r in range(1, ctx.t + 1):
        vec = [UPoly()] * model.dim
        for k, x in model.basis.coords(ctx.top_path(r)).items():
            vec[k] = vec[k] + denom * x
        for t in curve.terms.get(r, ()):
            scale = t.coeff.num * denom.divmod(t.coeff.den)[0]
            for k, x in model.basis.coords(ModPath(t.source_slot, t.path)).items():
                vec[k] = vec[k] + scale * x
        images[r] = vec
    gen_images = []
    for e in model.basis.elements:
        vec = images[e.slot]
        for a in e.path.arrows:
            vec = model.act(a, vec)
        gen_images.append([x if isinstance(x, UPoly) else UPoly.const(x) for x in vec])
    rows = []
    for b in c_sub.basis():
        row = [UPoly()] * model.dim
        for k, x in enumerate(b):
            if x:
                img = gen_images[k]
                row = [acc + y * x if y else acc for acc, y in zip(row, img)]
        rows.append(row)
    fam = SubspaceFamily(rows, model.dim, len(rows), model)
    rng = random.Random(seed)
    for _ in range(3):
        tau = Fraction(rng.randint(10, 10**6), rng.randint(1, 97))
        if rank(fam.at(tau), model.dim) == fam.k:
            return fam
    raise RankDrop("could not certify the generic rank of g_τ(C)")


def limit_at_infinity(fam: SubspaceFamily, token: Optional[CancellationToken] = None) -> SubmodulePresentation:
    """Row space of lim_{τ→∞} g_τ(C), as a submodule of Q."""
    n = fam.ambient
    rows = []
    for row in fam.rows:
        d = max(x.degree for x in row)
        if d < 0:
            raise RankDrop("zero row in subspace family")
        rows.append([x.reversed_to(d) for x in row])
    rows = [_normalize(r) for r in rows]
    guard = 0
    while True:
        if token is not None:
            token.check()
        at0 = [[x.c[0] if x.c else Fraction(0) for x in r] for r in rows]
        # vanishing combinations λ with Σ λ_i at0_i = 0
        combos = nullspace(transpose(at0, n), len(rows)) if rows else []
        if not combos:
            break
        lam = combos[0]
        i = max(j for j, x in enumerate(lam) if x)
        new = [UPoly()] * n
        for j, x in enumerate(lam):
            if x:
                new = [acc + y * x if y else acc for acc, y in zip(new, rows[j])]
        if not any(new):
            raise RankDrop("rows of the family are dependent over K(τ)")
        rows[i] = _normalize(new)
        guard += 1
        if guard > 10_000:
            raise QuiverGrassError("internal: saturation did not terminate")
    limit_rows = [[x.c[0] if x.c else Fraction(0) for x in r] for r in rows]
    sub = SubmodulePresentation(fam.model.ctx, limit_rows, fam.model)
    if sub.dim != fam.k:
        raise QuiverGrassError("internal: limit is not arrow-stable")
    return sub


def _normalize(row: List[UPoly]) -> List[UPoly]:
    v = min(x.valuation() for x in row if x)
    return [x.shift_down(v) if x else x for x in row] if v else row


EQUAL = "equal"
STRICT = "strictly-dominates"
VIOLATES = "violates"


def verify_dominance(m: ModuleRealization, m_prime: ModuleRealization) -> str:
    """Compare radical layerings: equal, strictly-dominates (𝕊(M′) > 𝕊(M)) or violates."""
    s, sp = layering_of(m), layering_of(m_prime)
    if s.total != sp.total:
        raise DimensionMismatch("modules have different dimension vectors")
    if s == sp:
        return EQUAL
    return STRICT if dominates(sp, s) else VIOLATES


@dataclass
class DegenerationReport:
    limit: SubmodulePresentation
    module: ModuleRealization
    limit_module: ModuleRealization
    layering: SemisimpleSequence
    limit_layering: SemisimpleSequence
    verdict: str
    iso: IsoVerdict

    @property
    def proper(self) -> bool:
        return self.iso.kind == "not-isomorphic"


def unipotent_degenerate(ctx: ProjectiveContext, c_sub: SubmodulePresentation, curve: UnipotentCurve,
                         seed: int = 0, iso_trials: int = 10,
                         token: Optional[CancellationToken] = None) -> DegenerationReport:
    fam = apply_curve(curve, c_sub, ctx, seed=seed)
    limit = limit_at_infinity(fam, token)
    m = c_sub.quotient()
    m_prime = limit.quotient()
    verdict = verify_dominance(m, m_prime)
    iso = iso_probe(m, m_prime, trials=iso_trials, seed=seed)
    return DegenerationReport(limit, m, m_prime, layering_of(m), layering_of(m_prime), verdict, iso)
