"""File formats: algebra JSON, skeleton lists, points, submodules, curves, module dumps."""
import json
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .algebra import AlgebraPresentation, ModuleRealization, Relation
from .errors import ValidationError
from .layering import SemisimpleSequence
from .polynomial import fraction_text
from .quiver import Quiver
from .skeleta import BIG, SMALL, ProjectiveContext, Skeleton, is_skeleton
from .univariate import parse_rational_function

ALGEBRA_KEYS = {"vertices", "arrows", "loewy_bound", "relations"}


class ParseError(ValidationError):
    pass


def _locate(text: str, needle: str) -> str:
    i = text.find(needle)
    if i < 0:
        return ""
    line = text.count("\n", 0, i) + 1
    col = i - (text.rfind("\n", 0, i) + 1) + 1
    return f"line {line}, column {col}: "


def _load_json(text: str, what: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{what}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def parse_fraction(token, text: str = "") -> Fraction:
    if isinstance(token, bool):
        raise ParseError(f"{_locate(text, json.dumps(token))}bad rational {token!r}")
    if isinstance(token, int):
        return Fraction(token)
    if not isinstance(token, str):
        raise ParseError(f"{_locate(text, json.dumps(token))}rationals must be 'p/q' strings, got {token!r}")
    try:
        return Fraction(token.strip())
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"{_locate(text, json.dumps(token))}bad rational token {token!r}") from None


def parse_algebra(text: str) -> AlgebraPresentation:
    data = _load_json(text, "algebra file")
    if not isinstance(data, dict):
        raise ParseError("algebra file: top level must be an object")
    unknown = sorted(set(data) - ALGEBRA_KEYS)
    if unknown:
        raise ParseError(f"{_locate(text, json.dumps(unknown[0]))}unknown key {unknown[0]!r}")
    missing = sorted(ALGEBRA_KEYS - set(data) - {"relations"})
    if missing:
        raise ParseError(f"algebra file: missing key {missing[0]!r}")
    arrows = []
    for a in data["arrows"]:
        if not isinstance(a, dict) or set(a) != {"name", "from", "to"}:
            raise ParseError(f"{_locate(text, json.dumps(a.get('name', '')) if isinstance(a, dict) else '')}"
                             "arrows need exactly the keys name, from, to")
        arrows.append((str(a["name"]), str(a["from"]), str(a["to"])))
    try:
        quiver = Quiver([str(v) for v in data["vertices"]], arrows)
    except ValidationError as exc:
        raise ParseError(f"algebra file: {exc}") from None
    L = data["loewy_bound"]
    if not isinstance(L, int) or isinstance(L, bool) or L < 0:
        where = _locate(text, '"loewy_bound"')
        raise ParseError(f"{where}loewy_bound must be a nonnegative integer")
    relations = []
    for rel in data.get("relations", []):
        terms = []
        for term in rel:
            if not isinstance(term, dict) or set(term) != {"coeff", "path"}:
                raise ParseError(f"{_locate(text, json.dumps(term))}relation terms need exactly coeff and path")
            c = parse_fraction(term["coeff"], text)
            try:
                p = quiver.path_from_arrows([str(x) for x in term["path"]])
            except ValidationError as exc:
                raise ParseError(f"{_locate(text, json.dumps(term['path']))}{exc}") from None
            terms.append((c, p))
        try:
            relations.append(Relation(terms))
        except ValidationError as exc:
            raise ParseError(f"algebra file: {exc}") from None
    return AlgebraPresentation(quiver, relations, L)


def dump_algebra(alg: AlgebraPresentation) -> str:
    q = alg.quiver
    data = {
        "vertices": list(q.vertices),
        "arrows": [{"name": a.name, "from": a.source, "to": a.target} for a in q.arrows],
        "loewy_bound": alg.L,
        "relations": [[{"coeff": fraction_text(c), "path": list(p.arrows)} for c, p in r.terms] for r in alg.relations],
    }
    return json.dumps(data, indent=2) + "\n"


def parse_sequence(text: str) -> SemisimpleSequence:
    data = _load_json(text, "sequence")
    try:
        return SemisimpleSequence(data)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"sequence: {exc}") from None


def dump_skeleta(ctx: ProjectiveContext, skeleta: List[Skeleton], sequence: Optional[SemisimpleSequence] = None) -> str:
    lines = [f"# setting {ctx.setting}", "# slots " + " ".join(ctx.slots)]
    if sequence is not None:
        lines.append("# sequence " + json.dumps(sequence.to_list(), separators=(",", ":")))
    lines.append(f"# count {len(skeleta)}")
    out = "\n".join(lines) + "\n"
    for i, sk in enumerate(skeleta, start=1):
        out += f"\nskeleton {i}\n" + sk.text()
    return out


def parse_skeleta(text: str, algebra: AlgebraPresentation) -> Tuple[ProjectiveContext, List[Skeleton]]:
    setting, slots = SMALL, None
    blocks: List[List[Tuple[int, str]]] = []
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            parts = line[1:].split()
            if parts and parts[0] == "setting" and len(parts) == 2:
                setting = parts[1]
            elif parts and parts[0] == "slots":
                slots = parts[1:]
            continue
        if line.startswith("skeleton"):
            current = []
            blocks.append(current)
            continue
        if current is None:
            current = []
            blocks.append(current)
        current.append((lineno, line))
    if slots is None:
        raise ParseError("skeleton file: missing '# slots' header")
    if setting not in (SMALL, BIG):
        raise ParseError(f"skeleton file: unknown setting {setting!r}")
    for v in slots:
        if v not in algebra.quiver.vertex_index:
            raise ParseError(f"skeleton file: unknown vertex {v!r} in slots header")
    try:
        ctx = ProjectiveContext(algebra, slots, setting)
    except ValidationError as exc:
        raise ParseError(f"skeleton file: {exc}") from None
    out = []
    for block in blocks:
        paths = []
        for lineno, line in block:
            head, sep, tail = line.partition(":")
            if not sep:
                raise ParseError(f"line {lineno}: expected 'slot: arrows'")
            try:
                slot = int(head)
                arrows = [a for a in tail.strip().split(".") if a]
                paths.append(ctx.modpath(slot, arrows))
            except (ValueError, ValidationError) as exc:
                raise ParseError(f"line {lineno}: {exc}") from None
        if not is_skeleton(paths, ctx):
            first = block[0][0] if block else 0
            raise ParseError(f"line {first}: path set is not a skeleton for this algebra")
        out.append(Skeleton(paths, ctx))
    return ctx, out


def parse_point(text: str, critical) -> "PointData":
    from .equations import PointData

    data = _load_json(text, "point file")
    if not isinstance(data, dict) or not set(data) <= {"coordinates", "default_zero"}:
        raise ParseError("point file: expected an object with 'coordinates' and optional 'default_zero'")
    names = {nu.name(): i for i, nu in enumerate(critical.N)}
    values = {}
    coords = data.get("coordinates", {})
    if isinstance(coords, list):
        coords = {str(i): x for i, x in enumerate(coords)}
    for k, x in coords.items():
        if k in names:
            i = names[k]
        else:
            try:
                i = int(k)
            except ValueError:
                raise ParseError(f"{_locate(text, json.dumps(k))}unknown coordinate {k!r}") from None
        if not 0 <= i < len(critical.N):
            raise ParseError(f"{_locate(text, json.dumps(k))}coordinate index {i} out of range")
        values[i] = parse_fraction(x, text)
    return PointData(critical, values, default_zero=bool(data.get("default_zero", False)))


def dump_point(point) -> str:
    data = {
        "coordinates": {str(i): fraction_text(x) for i, x in sorted(point.values.items())},
        "default_zero": point.default_zero,
    }
    return json.dumps(data, indent=2) + "\n"


def parse_submodule(text: str, algebra: AlgebraPresentation):
    """JSON ``{"slots": [...], "generators": [[{"coeff", "slot", "path"}, ...], ...]}``."""
    from .realize import SubmodulePresentation

    data = _load_json(text, "submodule file")
    if not isinstance(data, dict) or set(data) != {"slots", "generators"}:
        raise ParseError("submodule file: expected exactly the keys 'slots' and 'generators'")
    try:
        ctx = ProjectiveContext(algebra, [str(v) for v in data["slots"]], BIG)
    except ValidationError as exc:
        raise ParseError(f"submodule file: {exc}") from None
    gens = []
    for g in data["generators"]:
        terms = []
        for term in g:
            if not isinstance(term, dict) or set(term) != {"coeff", "slot", "path"}:
                raise ParseError(f"{_locate(text, json.dumps(term))}generator terms need coeff, slot, path")
            terms.append((parse_fraction(term["coeff"], text), int(term["slot"]), [str(a) for a in term["path"]]))
        gens.append(terms)
    try:
        return SubmodulePresentation.from_terms(ctx, gens)
    except ValidationError as exc:
        raise ParseError(f"submodule file: {exc}") from None


def parse_curve(text: str, ctx: ProjectiveContext):
    """Lines ``r: (coeff) * a.b -> j ; ...``; the coefficient is a rational function of t."""
    from .degeneration import UnipotentCurve

    spec: Dict[int, list] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, sep, body = line.partition(":")
        try:
            r = int(head)
        except ValueError:
            raise ParseError(f"line {lineno}: bad slot {head.strip()!r}") from None
        terms = spec.setdefault(r, [])
        for chunk in body.split(";"):
            chunk = chunk.strip()
            if not chunk:
                continue
            lhs, arrow, j = chunk.rpartition("->")
            coeff, star, path = lhs.rpartition("*")
            if not arrow or not star:
                raise ParseError(f"line {lineno}: expected 'coeff * path -> slot' in {chunk!r}")
            try:
                terms.append((parse_rational_function(coeff.strip()), [a for a in path.strip().split(".") if a], int(j)))
            except (ValueError, ZeroDivisionError) as exc:
                raise ParseError(f"line {lineno}: {exc}") from None
    try:
        return UnipotentCurve.from_spec(ctx, spec)
    except ValidationError as exc:
        raise ParseError(f"curve file: {exc}") from None


def dump_module(m: ModuleRealization) -> str:
    q = m.algebra.quiver
    lines = ["dims " + " ".join(f"{v}={d}" for v, d in zip(q.vertices, m.dims))]
    for a in q.arrows:
        mat = m.maps[a.name]
        lines.append(f"arrow {a.name} {a.source}->{a.target} {m.dim_at(a.target)}x{m.dim_at(a.source)}")
        for row in mat:
            lines.append(" ".join(fraction_text(x) for x in row))
    for v, vec in m.tops:
        lines.append(f"top {v} " + " ".join(fraction_text(x) for x in vec))
    return "\n".join(lines) + "\n"


def dump_submodule(sub) -> str:
    model = sub.model
    lines = [f"# dim {sub.dim} in Q of dim {model.dim}", "# basis " + " ".join(str(e) for e in model.basis.elements)]
    for row in sub.basis():
        lines.append(" ".join(fraction_text(x) for x in row))
    return "\n".join(lines) + "\n"
