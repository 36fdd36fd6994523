"""Command line front end.

Every command reads JSON documents and prints a report, either canonical JSON
(``--emit json``, byte-stable) or short text.  Exit status: 0 success, 1
invalid input or failed validation, 2 a size bound was exceeded.
"""

import argparse
import sys
import time

from .cohomology import cohomology_group, validate_module
from .crossed import (
    GroupGroupoid,
    beta,
    delta,
    is_crossed_covering,
    pi0_and_objectgroup,
    transitivity_flags,
    validate_crossed_module,
    validate_group_groupoid,
)
from .errors import AlgebraError, BoundExceeded, DegreeTooHigh, ObstructionNonzero
from .extensions import (
    classify,
    covering_with_kernel,
    oracle_enumerate,
    obstruction_class,
    validate_extension,
)
from .groupoids import (
    covering_from_subgroup,
    is_covering_morphism,
    is_pi0_proper,
    is_regular_covering,
    transitivity,
    validate_groupoid,
)
from .groups import homomorphism_check, validate_group
from .report import Check
from .serialize import Bundle, Registry, SchemaError, dumps


class Failure(Exception):
    """A command-level failure with a report body."""

    def __init__(self, details):
        super().__init__(details.get("error", "failed"))
        self.details = details


def _group_summary(g):
    return {"order": g.order, "abelian": g.is_abelian, "element_orders": sorted(g.element_orders)}


def _check_or_fail(chk, what):
    if not chk:
        raise Failure({"error": f"{what}: {chk.failure}", "witness": list(chk.witness)})


def _valid_crossed(reg, name):
    X = reg.get(name, "crossed_module")
    _check_or_fail(validate_crossed_module(X), f"crossed module {name}")
    return X


def _valid_kernel(reg, name):
    p = reg.docs[name]["payload"]
    _valid_crossed(reg, p.get("crossed_module"))
    k = reg.get(name, "abstract_kernel")
    _check_or_fail(homomorphism_check(k.phi, k.theta.target, k.theta.map), "theta")
    return k


# validate

def validate_document(reg, name):
    kind = reg.kind(name)
    try:
        obj = reg.get(name)
        if kind == "group":
            return validate_group(obj)
        if kind == "morphism":
            return homomorphism_check(obj.source, obj.target, obj.map)
        if kind == "groupoid":
            return validate_group_groupoid(obj) if isinstance(obj, GroupGroupoid) else validate_groupoid(obj)
        if kind == "crossed_module":
            return validate_crossed_module(obj)
        if kind == "abstract_kernel":
            chk = validate_crossed_module(obj.xm)
            if not chk:
                return chk
            return homomorphism_check(obj.phi, obj.theta.target, obj.theta.map)
        if kind == "extension":
            chk = validate_crossed_module(obj.xm)
            if not chk:
                return Check.failed(f"crossed module: {chk.failure}", *chk.witness)
            return validate_extension(obj)
        if kind == "module":
            return validate_module(obj)
    except AlgebraError as exc:
        return Check.failed(str(exc), *(exc.witness or ()))
    return Check.failed(f"unknown kind {kind}")


def cmd_validate(reg, args):
    names = [reg.first(name=args.name)] if args.name else list(reg.primary)
    results = []
    first_fail = None
    for n in names:
        chk = validate_document(reg, n)
        results.append({"name": n, "kind": reg.kind(n), **chk.as_dict()})
        if not chk and first_fail is None:
            first_fail = results[-1]
    details = {"documents": results}
    if first_fail is not None:
        details["first_failure"] = first_fail
        return "fail", details
    return "pass", details


# structure commands

def cmd_beta(reg, args):
    name = reg.first("crossed_module", args.name)
    X = _valid_crossed(reg, name)
    G = beta(X)
    _check_or_fail(validate_group_groupoid(G), "beta image")
    out = Bundle()
    out.groupoid(G, f"beta({name})")
    return "value", {
        "objects": G.underlying.num_objects,
        "arrows": G.underlying.num_arrows,
        "output": out.as_json(),
    }


def _group_groupoid(reg, name):
    G = reg.get(name, "groupoid")
    if not isinstance(G, GroupGroupoid):
        raise Failure({"error": f"{name} has no group structure (object_mul/arrow_mul)"})
    _check_or_fail(validate_group_groupoid(G), f"group-groupoid {name}")
    return G


def cmd_delta(reg, args):
    name = reg.first("groupoid", args.name)
    G = _group_groupoid(reg, name)
    X, costar = delta(G)
    out = Bundle()
    out.crossed_module(X, f"delta({name})")
    return "value", {"costar": list(costar), "output": out.as_json()}


def cmd_pi0(reg, args):
    name = reg.first(("crossed_module", "groupoid"), args.name)
    if reg.kind(name) == "crossed_module":
        X = _valid_crossed(reg, name)
        G = beta(X)
        flags = transitivity_flags(X)
    else:
        G = _group_groupoid(reg, name)
        trans, simple, one = transitivity(G.underlying)
        flags = {"transitive": trans, "simply_transitive": simple, "one_transitive": one}
    pi0, Ge = pi0_and_objectgroup(G)
    out = Bundle()
    out.group(pi0, f"pi0({name})")
    out.group(Ge, f"G(e)({name})")
    return "value", {
        "pi0": _group_summary(pi0),
        "object_group": _group_summary(Ge),
        "transitivity": flags,
        "output": out.as_json(),
    }


def _int_set(text):
    if text is None or text == "":
        return []
    try:
        return sorted({int(x) for x in text.split(",")})
    except ValueError:
        raise SchemaError(f"expected comma separated integers, got {text!r}") from None


def cmd_cover(reg, args):
    name = reg.first("groupoid", args.name)
    G = reg.get(name, "groupoid")
    U = G.underlying if isinstance(G, GroupGroupoid) else G
    _check_or_fail(validate_groupoid(U), f"groupoid {name}")
    x = args.object
    N = _int_set(args.subgroup) or [U.identities[x] if 0 <= x < U.num_objects else 0]
    cov = covering_from_subgroup(U, x, N)
    p = cov.morphism
    out = Bundle()
    out.groupoid(p.source, f"cover({name})")
    return "value", {
        "object": x,
        "subgroup": N,
        "point": cov.point,
        "cosets": [list(c) for c in cov.cosets],
        "object_map": list(p.object_map),
        "arrow_map": list(p.arrow_map),
        "covering": bool(is_covering_morphism(p)),
        "regular": is_regular_covering(p),
        "pi0_proper": is_pi0_proper(p),
        "universal": cov.universal,
        "output": out.as_json(),
    }


# cohomology and extensions

def _bounds(args, phi_default, order_default):
    return (args.max_phi or phi_default), (args.max_order or order_default)


def _cochain_entries(c):
    e = c.module.phi.identity
    return [[list(k), list(v)] for k, v in sorted(c.values.items()) if e not in k and any(v)]


def cmd_cohomology(reg, args):
    name = reg.first("module", args.name)
    A = reg.get(name, "module")
    _check_or_fail(validate_module(A), f"module {name}")
    max_phi, max_a = _bounds(args, 6, 16)
    H = cohomology_group(A, args.n, max_phi, max_a)
    return "value", {
        "degree": args.n,
        "divisors": list(H.divisors),
        "order": H.order,
        "representatives": [_cochain_entries(z) for z in H.representatives],
    }


def cmd_obstruction(reg, args):
    name = reg.first("abstract_kernel", args.name)
    k = _valid_kernel(reg, name)
    max_phi, max_a = _bounds(args, 6, 16)
    ob = obstruction_class(k, max_phi=max_phi, max_a=max_a)
    alt = obstruction_class(k, "reversed", max_phi=max_phi, max_a=max_a)
    return "value", {
        "h3_divisors": list(ob.group.divisors),
        "coordinates": list(ob.classification),
        "zero": ob.is_zero,
        "independent_of_choices": alt.classification == ob.classification,
        "u": list(ob.factor_set.u),
        "cocycle": _cochain_entries(ob.cocycle),
    }


def _extension_report(out, e, name, xm_name, phi_name):
    out.extension(e, name, xm_name, phi_name)
    return {"name": name, "E": _group_summary(e.E)}


def cmd_classify(reg, args):
    name = reg.first("abstract_kernel", args.name)
    k = _valid_kernel(reg, name)
    max_phi, max_a = _bounds(args, 6, 16)
    out = Bundle()
    xm_name = out.crossed_module(k.xm, f"{name}.xm")
    phi_name = out.group(k.phi, f"{name}.phi")
    try:
        c = classify(k, max_phi, max_a)
    except ObstructionNonzero as exc:
        return "value", {"realizable": False, "obstruction": list(exc.witness), "classes": [], "count": 0}
    classes = []
    for idx, (coords, e) in enumerate(c.classes):
        rep = _extension_report(out, e, f"{name}.class{idx}", xm_name, phi_name)
        rep["coordinates"] = list(coords)
        classes.append(rep)
    return "value", {
        "realizable": True,
        "h2_divisors": list(c.h2_divisors),
        "count": len(classes),
        "classes": classes,
        "output": out.as_json(),
    }


def cmd_kernel_cover(reg, args):
    name = reg.first("abstract_kernel", args.name)
    k = _valid_kernel(reg, name)
    N = _int_set(args.subgroup) or [k.xm.M.identity]
    max_phi, max_a = _bounds(args, 6, 16)
    r = covering_with_kernel(k, N, max_phi, max_a)
    details = {"subgroup": sorted(r.N), "realizable": r.realizable, "via_fiber_product": r.via_fiber_product}
    if not r.realizable:
        details["witness"] = list(r.witness)
        return "value", details
    out = Bundle()
    cover = out.crossed_module(r.covering.source, f"{name}.cover")
    details.update(
        {
            "nu": list(r.nu.map),
            "kernel_of_nu": sorted(r.nu.kernel),
            "E": _group_summary(r.extension.E),
            "sigma": list(r.covering.f2.map),
            "crossed_covering": is_crossed_covering(r.covering),
            "cover": cover,
            "output": out.as_json(),
        }
    )
    return "value", details


def cmd_oracle(reg, args):
    name = reg.first("abstract_kernel", args.name)
    k = _valid_kernel(reg, name)
    max_phi, max_m = _bounds(args, 3, 8)
    reps = oracle_enumerate(k, max_phi, max_m, max_m)
    out = Bundle()
    xm_name = out.crossed_module(k.xm, f"{name}.xm")
    phi_name = out.group(k.phi, f"{name}.phi")
    classes = [_extension_report(out, e, f"{name}.oracle{i}", xm_name, phi_name) for i, e in enumerate(reps)]
    return "value", {"count": len(reps), "classes": classes, "output": out.as_json()}


COMMANDS = {
    "validate": (cmd_validate, "run the validator for each document"),
    "beta": (cmd_beta, "group-groupoid of a crossed module"),
    "delta": (cmd_delta, "crossed module of a group-groupoid"),
    "pi0": (cmd_pi0, "components and object group"),
    "cover": (cmd_cover, "covering of a transitive groupoid from a subgroup of G(x)"),
    "cohomology": (cmd_cohomology, "H^n of a module"),
    "obstruction": (cmd_obstruction, "obstruction class of an abstract kernel"),
    "classify": (cmd_classify, "extension classes of an abstract kernel"),
    "kernel-cover": (cmd_kernel_cover, "covering with prescribed kernel N"),
    "oracle": (cmd_oracle, "brute-force enumeration of extensions"),
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("file", help="JSON document or bundle")
    common.add_argument("--include", action="append", default=[], help="extra files for references")
    common.add_argument("--name", help="document to use (default: first of the right kind)")
    common.add_argument("--emit", choices=("json", "text"), default="text")
    common.add_argument("--max-order", type=int, default=None, help="largest coefficient/search group order")
    common.add_argument("--max-phi", type=int, default=None, help="largest |Phi|")
    parser = argparse.ArgumentParser(prog="xmodcov", description="crossed modules, coverings and extensions")
    sub = parser.add_subparsers(dest="command", required=True)
    for cmd, (_, help_text) in COMMANDS.items():
        sp = sub.add_parser(cmd, parents=[common], help=help_text)
        if cmd == "cohomology":
            sp.add_argument("--n", type=int, required=True, help="degree 1..3")
        if cmd == "cover":
            sp.add_argument("--object", type=int, default=0)
            sp.add_argument("--subgroup", help="comma separated loop arrows at the object")
        if cmd == "kernel-cover":
            sp.add_argument("--subgroup", help="comma separated elements of Ker mu")
    return parser


def run(argv):
    """Parse and execute; returns ``(exit code, report dict, seconds, emit mode)``."""
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    report = {"command": args.command}
    try:
        reg = Registry()
        for path in args.include:
            reg.add_file(path, primary=False)
        reg.add_file(args.file)
        status, details = COMMANDS[args.command][0](reg, args)
        code = 1 if status == "fail" else 0
    except (BoundExceeded, DegreeTooHigh) as exc:
        status, details, code = "fail", {"error": str(exc), "bound": True}, 2
    except Failure as exc:
        status, details, code = "fail", exc.details, 1
    except (AlgebraError, OSError) as exc:
        status, details, code = "fail", {"error": str(exc), "witness": list(getattr(exc, "witness", None) or ())}, 1
    report["status"] = status
    report["details"] = details
    return code, report, time.perf_counter() - start, args.emit


def _text(report, seconds):
    lines = [f"{report['command']}: {report['status']}"]
    for key, value in report["details"].items():
        if key == "output":
            names = [d["name"] for d in value["documents"]]
            lines.append(f"  output documents: {', '.join(names)}")
        else:
            lines.append(f"  {key}: {value}")
    lines.append(f"  time: {seconds:.3f}s")
    return "\n".join(lines) + "\n"


def main(argv=None):
    code, report, seconds, emit = run(sys.argv[1:] if argv is None else argv)
    sys.stdout.write(dumps(report) if emit == "json" else _text(report, seconds))
    return code


if __name__ == "__main__":
    sys.exit(main())
