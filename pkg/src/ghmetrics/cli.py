"""Command-line front end: JSON documents in, one JSON result document out.

Exit codes: 0 success, 2 malformed or invalid input, 3 computation-domain error.
"""

from __future__ import annotations

import argparse
import json
import math
import random
import sys
from decimal import Decimal
from fractions import Fraction
from pathlib import Path

from .core import (DEFAULT_TOLERANCE, Correspondence, DomainError, FiniteMetricSpace, GHError,
                   RootedSpace, SpaceMismatch, ValidationError, as_rational, check_space,
                   closed_ball, space_from_edges, validate_space)
from .entropy import covering_number, entropy_convergence_check
from .ghdist import (DistanceResult, Structured, all_correspondences, gh_distance, ghv_upper,
                     pghp_upper, rf_rv_distance, rooted_correspondence, sandwich_check)
from .measuremetrics import FiniteMeasure, measure_system, prohorov, vague
from .rsys import PiecewiseConstantCurve, check_rs_axioms
from .setmetrics import hausdorff, local_hausdorff, quadratic_radius_system, subset_system
from .structures import (Composed, Fixed, Law, LZero, Measure, Point, PointTuple, Product,
                         StepCadlag, Subset, Transform, VarFunction, check_value, function_system,
                         er_distance, skorohod_er, structure_distance)

SCHEMA_VERSION = "1"


class ParseError(ValidationError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        super().__init__(message)
        self.line = line
        self.column = column


class UnknownCommand(ValidationError):
    pass


# ------------------------------------------------------------- documents

class Document:
    """A metric space with optional root, structure value and auxiliary spaces."""

    def __init__(self, space: FiniteMetricSpace, root=None, structure=None, aux: dict | None = None,
                 from_edges: bool = False, edges: list | None = None):
        self.space = space
        self.root = root
        self.structure = structure
        self.aux = aux or {}
        self.from_edges = from_edges
        self.edges = edges

    def __eq__(self, other) -> bool:
        return (isinstance(other, Document) and self.space == other.space and self.root == other.root
                and self.structure == other.structure and self.aux == other.aux)


def _label(raw):
    if isinstance(raw, list):
        return tuple(_label(r) for r in raw)
    if isinstance(raw, (str, int)) and not isinstance(raw, bool):
        return raw
    raise ParseError(f"labels are strings, integers or lists of them, got {raw!r}")


def _unlabel(label):
    if isinstance(label, tuple):
        return [_unlabel(c) for c in label]
    return label


def _num(x) -> str:
    return str(Fraction(x))


def _parse_space(obj) -> tuple:
    if not isinstance(obj, dict) or "labels" not in obj:
        raise ParseError("space needs 'labels' and either 'matrix' or 'edges'")
    labels = [_label(x) for x in obj["labels"]]
    if "matrix" in obj:
        diags = check_space(obj["matrix"], labels)
        if diags:
            raise ValidationError(f"{len(diags)} metric violation(s), first: {diags[0].message}", diags)
        return validate_space(obj["matrix"], labels), False, None
    if "edges" in obj:
        edges = [(_label(a), _label(b), as_rational(w)) for a, b, w in obj["edges"]]
        return space_from_edges(labels, edges), True, edges
    raise ParseError("space needs 'matrix' or 'edges'")


def _dump_space(space: FiniteMetricSpace) -> dict:
    return {"labels": [_unlabel(x) for x in space.labels],
            "matrix": [[_num(v) for v in row] for row in space.dist]}


def _parse_transform(obj, aux: dict) -> Transform:
    name = obj.get("aux")
    if name is not None and name not in aux:
        raise ParseError(f"unknown auxiliary space {name!r}")
    return Transform(int(obj.get("power", 1)), aux[name] if name else None,
                     _label(obj["aux_root"]) if name else None)


def _transform_key(tr: Transform, aux: dict) -> dict:
    out = {"power": tr.power}
    if tr.aux is not None:
        names = [k for k, v in sorted(aux.items()) if v == tr.aux]
        out["aux"] = names[0]
        out["aux_root"] = _unlabel(tr.aux_root)
    return out


def parse_structure(obj, aux: dict):
    if not isinstance(obj, dict) or "kind" not in obj:
        raise ParseError(f"structure needs a 'kind': {obj!r}")
    kind = obj["kind"]
    try:
        if kind == "point":
            return Point(_label(obj["point"]))
        if kind == "tuple":
            return PointTuple(tuple(_label(p) for p in obj["points"]))
        if kind == "fixed":
            if obj["aux"] not in aux:
                raise ParseError(f"unknown auxiliary space {obj['aux']!r}")
            return Fixed(_label(obj["element"]), aux[obj["aux"]])
        if kind == "subset":
            return Subset(_label(p) for p in obj["members"])
        if kind == "measure":
            return Measure(FiniteMeasure([(_label(p), as_rational(m)) for p, m in obj["weights"]]))
        if kind == "step_cadlag":
            horizon = obj.get("horizon")
            return StepCadlag([(as_rational(t), parse_structure(v, aux)) for t, v in obj["jumps"]],
                              None if horizon is None else as_rational(horizon))
        if kind == "var_function":
            tr = _parse_transform(obj.get("transform", {}), aux)
            return VarFunction(tr, [(_label(k), parse_structure(v, aux)) for k, v in obj["graph"]])
        if kind == "lzero":
            return LZero([as_rational(w) for w in obj["weights"]], [_label(v) for v in obj["values"]])
        if kind == "law":
            return Law([(as_rational(w), parse_structure(v, aux)) for w, v in obj["atoms"]])
        if kind == "product":
            return Product(parse_structure(p, aux) for p in obj["parts"])
        if kind == "composed":
            return Composed(_parse_transform(obj.get("transform", {}), aux), parse_structure(obj["inner"], aux))
    except KeyError as exc:
        raise ParseError(f"{kind} structure is missing field {exc.args[0]!r}") from exc
    raise ParseError(f"unknown structure kind {kind!r}")


def dump_structure(value, aux: dict) -> dict:
    if isinstance(value, Point):
        return {"kind": "point", "point": _unlabel(value.point)}
    if isinstance(value, PointTuple):
        return {"kind": "tuple", "points": [_unlabel(p) for p in value.points]}
    if isinstance(value, Fixed):
        names = [k for k, v in sorted(aux.items()) if v == value.aux]
        return {"kind": "fixed", "aux": names[0], "element": _unlabel(value.element)}
    if isinstance(value, Subset):
        return {"kind": "subset", "members": sorted((_unlabel(p) for p in value.members), key=repr)}
    if isinstance(value, Measure):
        return {"kind": "measure", "weights": [[_unlabel(p), _num(m)] for p, m in value.measure.items()]}
    if isinstance(value, StepCadlag):
        return {"kind": "step_cadlag", "horizon": None if value.horizon is None else _num(value.horizon),
                "jumps": [[_num(t), dump_structure(v, aux)] for t, v in value.jumps]}
    if isinstance(value, VarFunction):
        return {"kind": "var_function", "transform": _transform_key(value.transform, aux),
                "graph": [[_unlabel(k), dump_structure(v, aux)] for k, v in value.graph]}
    if isinstance(value, LZero):
        return {"kind": "lzero", "weights": [_num(w) for w in value.weights],
                "values": [_unlabel(v) for v in value.values]}
    if isinstance(value, Law):
        return {"kind": "law", "atoms": [[_num(w), dump_structure(v, aux)] for w, v in value.atoms]}
    if isinstance(value, Product):
        return {"kind": "product", "parts": [dump_structure(p, aux) for p in value.parts]}
    if isinstance(value, Composed):
        return {"kind": "composed", "transform": _transform_key(value.transform, aux),
                "inner": dump_structure(value.inner, aux)}
    raise ValidationError(f"cannot serialize {value!r}")


def parse_document(obj) -> Document:
    if not isinstance(obj, dict):
        raise ParseError("a document is a JSON object")
    version = obj.get("schema_version")
    if version != SCHEMA_VERSION:
        raise ParseError(f"unsupported schema_version {version!r}, expected {SCHEMA_VERSION!r}")
    aux = {}
    for name, sp in sorted((obj.get("auxiliary_spaces") or {}).items()):
        aux[name] = _parse_space(sp)[0]
    space, from_edges, edges = _parse_space(obj.get("space"))
    root = _label(obj["root"]) if obj.get("root") is not None else None
    if root is not None and root not in space:
        raise ValidationError(f"root {root!r} is not a point of the space")
    structure = None
    if obj.get("structure") is not None:
        structure = parse_structure(obj["structure"], aux)
        try:
            check_value(space, structure)
        except DomainError as exc:
            raise ValidationError(str(exc)) from exc
    return Document(space, root, structure, aux, from_edges, edges)


def dump_document(doc: Document) -> dict:
    out = {"schema_version": SCHEMA_VERSION, "space": _dump_space(doc.space)}
    if doc.root is not None:
        out["root"] = _unlabel(doc.root)
    if doc.structure is not None:
        out["structure"] = dump_structure(doc.structure, doc.aux)
    if doc.aux:
        out["auxiliary_spaces"] = {k: _dump_space(v) for k, v in sorted(doc.aux.items())}
    return out


def loads_json(text: str):
    try:
        return json.loads(text, parse_float=Decimal)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg} at line {exc.lineno} column {exc.colno}",
                         exc.lineno, exc.colno) from exc


def load_document(path) -> Document:
    return parse_document(loads_json(Path(path).read_text(encoding="utf-8")))


def load_correspondence(path) -> Correspondence:
    obj = loads_json(Path(path).read_text(encoding="utf-8"))
    pairs = obj.get("pairs") if isinstance(obj, dict) else obj
    if not isinstance(pairs, list):
        raise ParseError("a correspondence file holds {'pairs': [[x, y], ...]}")
    return Correspondence((_label(a), _label(b)) for a, b in pairs)


# ---------------------------------------------------------------- output

def to_jsonable(x):
    if isinstance(x, bool) or x is None or isinstance(x, (str, int)):
        return x
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, float):
        if math.isinf(x):
            return "inf"
        return x
    if isinstance(x, dict):
        return {str(to_jsonable(k)) if not isinstance(k, str) else k: to_jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [to_jsonable(v) for v in x]
    if isinstance(x, (set, frozenset)):
        return sorted((to_jsonable(v) for v in x), key=repr)
    if isinstance(x, FiniteMetricSpace):
        return _dump_space(x)
    if isinstance(x, PiecewiseConstantCurve):
        return {"breakpoints": [to_jsonable(b) for b in x.breakpoints], "values": [to_jsonable(v) for v in x.values]}
    if isinstance(x, Correspondence):
        return to_jsonable(x.sorted_pairs())
    return repr(x)


def result_doc(command: str, value, kind: str, witness=None, **extra) -> dict:
    out = {
        "command": command,
        "value": to_jsonable(value),
        "value_float": None if value is None else (float(value) if not isinstance(value, str) else None),
        "kind": kind,
        "witness": to_jsonable(witness if witness is not None else {}),
        "tolerances": {"eq_tol": DEFAULT_TOLERANCE.eq_tol, "arithmetic": "exact rationals; floats only for "
                       "exponential integrals and log-slope terms"},
    }
    out.update({k: to_jsonable(v) for k, v in extra.items()})
    return out


def emit(doc: dict, stream=None) -> None:
    stream = stream or sys.stdout
    stream.write(json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n")


# --------------------------------------------------------------- commands

def _same_space(a: Document, b: Document) -> None:
    if a.space != b.space:
        raise SpaceMismatch("both documents must describe the same space")


def _need(doc: Document, kind_cls, what: str):
    if not isinstance(doc.structure, kind_cls):
        raise ValidationError(f"{what} needs a {kind_cls.__name__.lower()} structure")
    return doc.structure


def _need_root(doc: Document):
    if doc.root is None:
        raise ValidationError("document needs a root")
    return doc.root


def _measure_of(doc: Document) -> FiniteMeasure:
    return _need(doc, Measure, "this distance").measure


def _structured(doc: Document) -> Structured:
    if doc.structure is None:
        raise ValidationError("document needs a structure")
    return Structured(doc.space, _need_root(doc), doc.structure)


def _corr_arg(args, left, right):
    if args.corr:
        return load_correspondence(args.corr)
    return None


def cmd_validate(args) -> dict:
    doc = load_document(args.file)
    info = {"points": len(doc.space), "completed_from_edges": doc.from_edges,
            "structure_kind": type(doc.structure).__name__ if doc.structure is not None else None,
            "root": doc.root}
    if doc.from_edges:
        info["completed_space"] = doc.space
    return result_doc("validate", None, "valid", info)


def cmd_dist(args) -> dict:
    left, right = load_document(args.left), load_document(args.right)
    kind = args.kind
    if kind == "hausdorff":
        _same_space(left, right)
        a, b = _need(left, Subset, kind), _need(right, Subset, kind)
        return result_doc("dist", hausdorff(left.space, a.members, b.members), "exact", {}, metric=kind)
    if kind == "local-hausdorff":
        _same_space(left, right)
        a, b = _need(left, Subset, kind), _need(right, Subset, kind)
        mode = args.mode or "product"
        v = local_hausdorff(left.space, (a.members, _need_root(left)), (b.members, _need_root(right)), mode)
        return result_doc("dist", v, "exact", {"mode": mode}, metric=kind)
    if kind == "prohorov":
        _same_space(left, right)
        res = prohorov(left.space, _measure_of(left), _measure_of(right))
        return result_doc("dist", res.value, "exact", res.witness, metric=kind)
    if kind == "vague":
        _same_space(left, right)
        mode = args.mode or "product"
        v = vague(left.space, (_measure_of(left), _need_root(left)), (_measure_of(right), _need_root(right)), mode)
        return result_doc("dist", v, "exact", {"mode": mode}, metric=kind)
    if kind == "skorohod":
        _same_space(left, right)
        a, b = _need(left, StepCadlag, kind), _need(right, StepCadlag, kind)
        v = skorohod_er(left.space, a, _need_root(left), b, _need_root(right))
        return result_doc("dist", v, "upper", {"horizon": a.horizon if a.horizon is not None else "full"},
                          metric=kind)
    if kind == "structure":
        _same_space(left, right)
        mode = args.mode or "element_rooted"
        v = structure_distance(left.space, left.structure, right.structure, mode=mode,
                               root=left.root, basepoints=(_need_root(left), _need_root(right)))
        exact = isinstance(v, Fraction) or isinstance(v, int)
        return result_doc("dist", v, "exact" if exact else "exact-float", {"mode": mode}, metric=kind)
    corr = _corr_arg(args, left, right)
    if kind == "gh":
        if args.mode == "lower":
            res = gh_distance(left.space, right.space, "lower")
        elif corr is not None:
            res = gh_distance(left.space, right.space, "upper", corr)
        else:
            res = gh_distance(left.space, right.space, "exact_tiny")
        return result_doc("dist", res.value, res.kind, res.witness, metric=kind)
    if kind in ("pghp", "ghv"):
        fn = pghp_upper if kind == "pghp" else ghv_upper
        la = (left.space, _need_root(left), _measure_of(left))
        rb = (right.space, _need_root(right), _measure_of(right))
        corrs = [corr] if corr is not None else list(all_correspondences(left.space, right.space))
        if kind == "pghp":
            results = [fn(*la, *rb, c) for c in corrs]
        else:
            # both gluings are admissible; keep the smaller bound
            results = [fn(*la, *rb, c, gluing=g) for c in corrs for g in ("correspondence", "root_identify_shift")]
        best = min(results, key=lambda r: (float(r.value), repr(r.witness["correspondence"]),
                                           r.witness.get("gluing", "")))
        witness = dict(best.witness)
        witness["enumerated"] = corr is None
        return result_doc("dist", best.value, "upper", witness, metric=kind)
    if kind in ("rf", "rv"):
        a, b = _structured(left), _structured(right)
        if corr is not None:
            res = rf_rv_distance(a, b, corr, kind, "upper", compact=args.compact)
        else:
            res = rf_rv_distance(a, b, None, kind, "exact_tiny", compact=args.compact)
        return result_doc("dist", res.value, res.kind, res.witness, metric=kind)
    raise UnknownCommand(f"unknown distance kind {kind!r}")


def _parse_eps_list(text: str) -> list:
    return [as_rational(e) for e in text.split(",") if e.strip()]


def cmd_entropy(args) -> dict:
    doc = load_document(args.file)
    subset = None
    if args.restrict is not None:
        subset = closed_ball(doc.space, _need_root(doc), as_rational(args.restrict))
    mode = "greedy" if args.greedy else "exact"
    rows = []
    for eps in _parse_eps_list(args.eps):
        cov = covering_number(doc.space, eps, mode, subset)
        rows.append({"eps": eps, "count": cov.count, "centers": list(cov.centers)})
    value = rows[0]["count"] if len(rows) == 1 else None
    return result_doc("entropy", value, "exact" if mode == "exact" else "upper", {"profile": rows})


def cmd_sandwich(args) -> dict:
    a, b = _structured(load_document(args.left)), _structured(load_document(args.right))
    rng = random.Random(args.seed)
    corrs = [rooted_correspondence(a.space, a.root, b.space, b.root, rng) for _ in range(args.trials)]
    rep = sandwich_check(a, b, corrs, compact=args.compact)
    worst = min(rep.records, key=lambda r: r.margin)
    return result_doc("sandwich", worst.margin, "check", {"worst": worst.__dict__},
                      passed=rep.passed, summary=rep.summary())


def axiom_samples(space, system: str, rng: random.Random, n_objects: int = 6) -> tuple:
    """Centers, radii and objects used to exercise a restriction system on ``space``."""
    labels = list(space.labels)
    dists = sorted({space.d(a, b) for a in labels for b in labels if a != b})
    radii = sorted({Fraction(1, 10), Fraction(1, 2)} | set(dists) | {d / 2 for d in dists})
    if system in ("subset", "custom"):
        objs = {frozenset()} | {frozenset(labels)}
        while len(objs) < min(n_objects, 2 ** len(labels)):
            objs.add(frozenset(p for p in labels if rng.random() < 0.5))
        return labels, radii, sorted(objs, key=lambda s: sorted(map(repr, s)))
    if system == "measure":
        objs = [FiniteMeasure({}), FiniteMeasure({p: 1 for p in labels})]
        for _ in range(n_objects - 2):
            objs.append(FiniteMeasure({p: Fraction(rng.randint(0, 3), rng.randint(1, 3)) for p in labels}))
        return labels, radii, objs
    if system == "function":
        tr = Transform()
        objs = [VarFunction(tr, []), VarFunction(tr, [((p,), Point(p)) for p in labels])]
        for _ in range(n_objects - 2):
            objs.append(VarFunction(tr, [((p,), Point(rng.choice(labels))) for p in labels if rng.random() < 0.6]))
        centers = [(p,) for p in labels]
        return centers, radii, objs
    raise ValidationError(f"unknown system {system!r}")


def build_system(space, system: str):
    if system == "subset":
        return subset_system(space)
    if system == "measure":
        return measure_system(space)
    if system == "custom":
        return quadratic_radius_system(space)
    if system == "function":
        inner = lambda v, x, w, y: er_distance(space, v, x, w, y)
        root = space.labels[0]
        return function_system(space, Transform(), inner, root)
    raise ValidationError(f"unknown system {system!r}")


def cmd_rs_check(args) -> dict:
    doc = load_document(args.file)
    rng = random.Random(args.seed)
    centers, radii, objs = axiom_samples(doc.space, args.system, rng, args.samples)
    rep = check_rs_axioms(build_system(doc.space, args.system), centers, radii, objs)
    return result_doc("rs-check", None, "check", rep.summary(), passed=rep.passed())


def cmd_converge(args) -> dict:
    paths = sorted(p for p in Path(args.dir).iterdir() if p.suffix == ".json")
    if not paths:
        raise ValidationError(f"no .json documents in {args.dir}")
    seq = [load_document(p) for p in paths]
    target = load_document(args.target)
    if args.kind == "gh":
        vals = [gh_distance(d.space, target.space).value for d in seq]
        return result_doc("converge", vals[-1], "exact", {"members": [p.name for p in paths], "gh": vals})
    if args.kind == "entropy":
        rep = entropy_convergence_check([d.space for d in seq], target.space, _parse_eps_list(args.eps))
        return result_doc("converge", None, "check", rep.summary(), passed=rep.passed,
                          members=[p.name for p in paths])
    if args.kind in ("rf", "rv"):
        t = _structured(target)
        vals = [rf_rv_distance(_structured(d), t, None, args.kind, "exact_tiny").value for d in seq]
        return result_doc("converge", vals[-1], "upper", {"members": [p.name for p in paths], args.kind: vals})
    raise ValidationError(f"unknown convergence kind {args.kind!r}")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ghmetrics", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", help="check a document")
    s.add_argument("file")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("dist", help="distance between two documents")
    s.add_argument("--kind", required=True, choices=["hausdorff", "local-hausdorff", "prohorov", "vague",
                                                     "skorohod", "gh", "pghp", "ghv", "rf", "rv", "structure"])
    s.add_argument("left")
    s.add_argument("right")
    g = s.add_mutually_exclusive_group()
    g.add_argument("--corr", help="correspondence file")
    g.add_argument("--enumerate", action="store_true", help="optimize over all correspondences (default)")
    s.add_argument("--mode", help="rooted | product | element_rooted | space_rooted | lower")
    s.add_argument("--compact", action="store_true", help="compact-space variant for rf/rv")
    s.add_argument("--tol", type=float, default=DEFAULT_TOLERANCE.eq_tol)
    s.set_defaults(func=cmd_dist)

    s = sub.add_parser("entropy", help="covering numbers")
    s.add_argument("file")
    s.add_argument("--eps", required=True, help="comma-separated radii")
    g = s.add_mutually_exclusive_group()
    g.add_argument("--exact", action="store_true")
    g.add_argument("--greedy", action="store_true")
    s.add_argument("--restrict", help="restrict to the closed ball of this radius around the root")
    s.set_defaults(func=cmd_entropy)

    s = sub.add_parser("sandwich", help="RF/RV coincidence check over random correspondences")
    s.add_argument("left")
    s.add_argument("right")
    s.add_argument("--trials", type=int, default=20)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--compact", action="store_true")
    s.set_defaults(func=cmd_sandwich)

    s = sub.add_parser("rs-check", help="restriction-system axiom check")
    s.add_argument("file")
    s.add_argument("--system", required=True, choices=["subset", "measure", "function", "custom"])
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--samples", type=int, default=6)
    s.set_defaults(func=cmd_rs_check)

    s = sub.add_parser("converge", help="distances along a sequence of documents")
    s.add_argument("dir")
    s.add_argument("--target", required=True)
    s.add_argument("--kind", required=True, choices=["gh", "entropy", "rf", "rv"])
    s.add_argument("--eps", default="1/2,1,2")
    s.set_defaults(func=cmd_converge)
    return p


def run(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        emit(args.func(args), stdout)
        return 0
    except ParseError as exc:
        emit({"error": "ParseError", "message": str(exc), "line": exc.line, "column": exc.column}, stdout)
        return 2
    except ValidationError as exc:
        emit({"error": type(exc).__name__, "message": str(exc),
              "diagnostics": [d.__dict__ for d in exc.diagnostics]}, stdout)
        return 2
    except (FileNotFoundError, IsADirectoryError) as exc:
        emit({"error": "ParseError", "message": str(exc)}, stdout)
        return 2
    except (DomainError, GHError) as exc:
        emit({"error": type(exc).__name__, "message": str(exc)}, stdout)
        return 3


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
