"""Normal forms modulo the substitution submodule, and the ideal I(σ).

Elements of the free KΓ[X]-module on the top elements are dictionaries
from module-paths to polynomials. A path outside σ is rewritten through
its critical initial subpath: if ``y = u'' (α u' ẑ_r)`` with ``u' ẑ_r`` the
longest initial subpath in σ, then ``y`` is replaced by
``Σ X_{αu'ẑ_r, qẑ_s} u'' q ẑ_s``. Each step strictly lengthens the longest
initial subpath lying in σ, so every term is finished after at most L+1
rounds (L in the small setting).
"""
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Tuple

from .errors import MissingCoordinate, QuiverGrassError
from .polynomial import Polynomial
from .quiver import ModPath, Path
from .skeleta import BIG, Coordinate, CriticalData, Skeleton, critical_data

FreeElement = Dict[ModPath, Polynomial]

STRATEGIES = ("canonical", "reverse", "random")


@dataclass
class ReductionStats:
    steps: int = 0
    max_depth: int = 0
    max_length: int = 0


def _longest_in_sigma(mp: ModPath, sigma: Skeleton) -> int:
    """Length of the longest initial subpath of ``mp`` in σ, or -1 if none."""
    k = -1
    for i in range(mp.length + 1):
        if ModPath(mp.slot, mp.path.prefix(i)) in sigma.paths:
            k = i
        else:
            break
    return k


def normal_form(y: Mapping[ModPath, Polynomial], sigma: Skeleton, critical: Optional[CriticalData] = None,
                strategy: str = "canonical", rng: Optional[random.Random] = None,
                stats: Optional[ReductionStats] = None) -> Dict[ModPath, Polynomial]:
    """Coefficients τ^y_{qẑ_s} with y ≡ Σ τ qẑ_s; only nonzero entries are returned.

    The result does not depend on ``strategy``, which only fixes the order
    in which pending terms are rewritten.
    """
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}")
    critical = critical or critical_data(sigma)
    ctx = sigma.ctx
    L = ctx.algebra.L
    pos = critical.index()
    if strategy == "random" and rng is None:
        rng = random.Random(0)
    work: Dict[ModPath, Polynomial] = {}
    depth: Dict[ModPath, int] = {}
    cap = max([2 * L + 1] + [mp.length + L for mp in y])
    for mp, c in y.items():
        c = c if isinstance(c, Polynomial) else Polynomial.constant(c)
        if c:
            work[mp] = work.get(mp, Polynomial()) + c
            depth[mp] = 0
    done: Dict[ModPath, Polynomial] = {}
    pending = [mp for mp in work if mp not in sigma.paths]
    for mp in list(work):
        if mp in sigma.paths:
            done[mp] = work.pop(mp)
    while pending:
        if strategy == "canonical":
            mp = min(pending, key=ctx.key)
        elif strategy == "reverse":
            mp = max(pending, key=ctx.key)
        else:
            mp = rng.choice(pending)
        pending.remove(mp)
        coeff = work.pop(mp)
        d = depth.pop(mp)
        if not coeff:
            continue
        if stats is not None:
            stats.steps += 1
            stats.max_depth = max(stats.max_depth, d + 1)
            stats.max_length = max(stats.max_length, mp.length)
        if d + 1 > L + 1:
            raise QuiverGrassError("internal: reduction chain exceeded its bound")
        k = _longest_in_sigma(mp, sigma)
        crit = ModPath(mp.slot, mp.path.prefix(k + 1))
        tail = mp.path.suffix(k + 1)
        members = critical.sigma_sets.get(crit)
        if members is None:
            if crit.length <= L:
                raise QuiverGrassError(f"internal: {crit} should be critical")
            continue  # longer than L: zero
        for q in members:
            var = Polynomial.var(pos[Coordinate(crit, q)])
            new = ModPath(q.slot, Path(q.path.stops + tail.stops[1:], q.path.arrows + tail.arrows))
            if new.length > cap:
                raise QuiverGrassError("internal: transient path length exceeded its cap")
            term = coeff * var
            if new in sigma.paths:
                x = done.get(new, Polynomial()) + term
                if x:
                    done[new] = x
                else:
                    done.pop(new, None)
            else:
                if new in work:
                    work[new] = work[new] + term
                    depth[new] = max(depth[new], d + 1)
                else:
                    work[new] = term
                    depth[new] = d + 1
                    pending.append(new)
    return {mp: done[mp] for mp in sigma.ordered if mp in done and done[mp]}


@dataclass
class GrassIdeal:
    skeleton: Skeleton
    critical: CriticalData
    generators: List[Polynomial]
    provenance: List[Tuple[str, int, ModPath]]
    free_variables: List[int] = field(default_factory=list)

    @property
    def variables(self) -> List[Coordinate]:
        return self.critical.N

    def is_zero(self) -> bool:
        return not self.generators

    def to_text(self) -> str:
        lines = [f"# variables {len(self.variables)}"]
        free = set(self.free_variables)
        for i, nu in enumerate(self.variables):
            tag = " free" if i in free else ""
            lines.append(f"X[{i}] = X[{nu.critical} ; {nu.member}]{tag}")
        lines.append(f"# generators {len(self.generators)}")
        lines.extend(g.to_text() for g in self.generators)
        return "\n".join(lines) + "\n"

    def to_json(self):
        return {
            "variables": [{"critical": nu.critical.text(), "member": nu.member.text()} for nu in self.variables],
            "free_variables": list(self.free_variables),
            "generators": [
                {"relation": rel, "slot": slot, "basis_path": bp.text(), "terms": g.to_json()}
                for g, (rel, slot, bp) in zip(self.generators, self.provenance)
            ],
        }


def relation_element(rho, slot: int) -> FreeElement:
    return {ModPath(slot, p): Polynomial.constant(c) for c, p in rho.terms}


def sigma_ideal(sigma: Skeleton, ctx=None, algebra=None, critical: Optional[CriticalData] = None,
                parallel: int = 1) -> GrassIdeal:
    """Generators τ^{ρẑ_r}_{qẑ_s} of I(σ), ρ ranging over a left generating set of I."""
    ctx = ctx or sigma.ctx
    algebra = algebra or ctx.algebra
    critical = critical or critical_data(sigma, ctx)
    jobs = []
    for rho in algebra.left_generators():
        for r in sigma.top_slots:
            if ctx.e(r) == rho.source:
                jobs.append((rho, r))

    def run(job):
        rho, r = job
        return normal_form(relation_element(rho, r), sigma, critical)

    if parallel > 1 and len(jobs) > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=parallel) as ex:
            forms = list(ex.map(run, jobs))
    else:
        forms = [run(j) for j in jobs]
    gens, prov, seen = [], [], set()
    for (rho, r), nf in zip(jobs, forms):
        for mp, poly in nf.items():
            if poly in seen:
                continue
            seen.add(poly)
            gens.append(poly)
            prov.append((str(rho), r, mp))
    free = list(range(critical.n1, len(critical.N))) if ctx.setting == BIG else []
    return GrassIdeal(sigma, critical, gens, prov, free)


def big_presentation(sigma: Skeleton, ctx=None, algebra=None, parallel: int = 1) -> GrassIdeal:
    """GRASS(σ) ≅ Grass(σ) × A^{N₀}: the small generators plus the free N₀ coordinates."""
    ctx = ctx or sigma.ctx
    if ctx.setting != BIG:
        raise ValueError("big_presentation needs a big-setting context")
    ideal = sigma_ideal(sigma, ctx, algebra, parallel=parallel)
    n0 = set(ideal.free_variables)
    for g in ideal.generators:
        if n0.intersection(g.variables()):
            raise QuiverGrassError("internal: a generator mentions a free coordinate")
    return ideal


class PointData:
    """Scalars c_ν on N. Missing coordinates are an error unless ``default_zero`` is set."""

    def __init__(self, critical: CriticalData, values: Mapping = None, default_zero: bool = False):
        self.critical = critical
        self.default_zero = default_zero
        pos = critical.index()
        self.values: Dict[int, Fraction] = {}
        for k, x in (values or {}).items():
            i = pos[k] if isinstance(k, Coordinate) else int(k)
            if not 0 <= i < len(critical.N):
                raise MissingCoordinate(f"coordinate index {i} out of range")
            self.values[i] = Fraction(x)

    def __getitem__(self, i: int) -> Fraction:
        if i in self.values:
            return self.values[i]
        if self.default_zero:
            return Fraction(0)
        raise MissingCoordinate(f"no value for {self.critical.N[i].name()}")

    def get(self, crit: ModPath, member: ModPath) -> Fraction:
        return self[self.critical.index()[Coordinate(crit, member)]]

    def full(self) -> Dict[int, Fraction]:
        return {i: self[i] for i in range(len(self.critical.N))}


def evaluate_membership(ideal: GrassIdeal, c: PointData) -> bool:
    """True iff every generator vanishes at c."""
    values = c.full()
    return all(g.evaluate(values) == 0 for g in ideal.generators)
