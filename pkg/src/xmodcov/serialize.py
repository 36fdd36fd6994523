"""JSON documents for groups, groupoids, crossed modules, kernels, extensions and modules.

A file holds one document ``{"kind", "name", "payload"}`` or a bundle
``{"documents": [...]}``.  Documents refer to group documents by name.
"""

import json

from .cohomology import PhiModule
from .crossed import CrossedModule, GroupGroupoid
from .errors import AlgebraError
from .extensions import AbstractKernel, ExtensionOfType
from .groupoids import FiniteGroupoid
from .groups import FiniteGroup, GroupMorphism, RightGroupAction

KINDS = ("group", "morphism", "groupoid", "crossed_module", "abstract_kernel", "extension", "module")


class SchemaError(AlgebraError):
    pass


def _need(payload, key, kind):
    if key not in payload:
        raise SchemaError(f"{kind} payload is missing {key!r}")
    return payload[key]


def _int_list(x, what, upper=None):
    if not isinstance(x, list) or not all(isinstance(v, int) and not isinstance(v, bool) for v in x):
        raise SchemaError(f"{what} must be a list of integers")
    if upper is not None and any(not 0 <= v < upper for v in x):
        raise SchemaError(f"{what} has entries outside 0..{upper - 1}")
    return x


def _table(x, rows, cols, what, upper="cols"):
    if not isinstance(x, list) or len(x) != rows:
        raise SchemaError(f"{what} must have {rows} rows")
    bound = cols if upper == "cols" else upper
    out = []
    for r in x:
        if not isinstance(r, list) or len(r) != cols:
            raise SchemaError(f"{what} has a row of the wrong length")
        out.append(_int_list(r, f"{what} row", bound))
    return out


# reading

class Registry:
    """Named documents from one or more files, built into objects on demand."""

    def __init__(self):
        self.docs = {}
        self.order = []
        self.primary = []
        self._cache = {}

    def add_file(self, path, primary=True):
        with open(path, encoding="utf-8") as fh:
            try:
                data = json.load(fh)
            except json.JSONDecodeError as exc:
                raise SchemaError(f"{path}: invalid JSON ({exc.msg})") from None
        self.add(data, primary)

    def add(self, data, primary=True):
        if isinstance(data, dict) and "details" in data:
            # a report from an earlier command: take the documents it emitted
            data = data["details"].get("output") or {"documents": []}
        docs = data["documents"] if isinstance(data, dict) and "documents" in data else [data]
        for d in docs:
            if not isinstance(d, dict) or "kind" not in d or "payload" not in d:
                raise SchemaError("document needs 'kind' and 'payload'")
            if d["kind"] not in KINDS:
                raise SchemaError(f"unknown kind {d['kind']!r}")
            name = d.get("name") or f"doc{len(self.order)}"
            if name in self.docs:
                raise SchemaError(f"duplicate document name {name!r}")
            self.docs[name] = d
            self.order.append(name)
            if primary:
                self.primary.append(name)

    def first(self, kind=None, name=None):
        """The named document, or the first primary one of ``kind``."""
        if name is not None:
            if name not in self.docs:
                raise SchemaError(f"no document named {name!r}")
            return name
        for n in self.primary:
            if kind is None or self.docs[n]["kind"] in (kind if isinstance(kind, tuple) else (kind,)):
                return n
        raise SchemaError(f"no document of kind {kind!r}")

    def kind(self, name):
        return self.docs[name]["kind"]

    def get(self, name, kind=None):
        if name not in self.docs:
            raise SchemaError(f"unresolved reference {name!r}")
        d = self.docs[name]
        if kind is not None and d["kind"] != kind:
            raise SchemaError(f"{name!r} is a {d['kind']}, expected {kind}")
        if name not in self._cache:
            self._cache[name] = _BUILDERS[d["kind"]](self, d["payload"], name)
        return self._cache[name]


def _group(reg, p, name):
    mul = _need(p, "mul", "group")
    n = len(mul) if isinstance(mul, list) else 0
    if "order" in p and p["order"] != n:
        raise SchemaError("group order does not match the table")
    _table(mul, n, n, "mul")
    try:
        return FiniteGroup.from_table(mul, p.get("label", name))
    except ValueError as exc:
        raise SchemaError(f"group {name!r}: {exc}") from None


def _morphism(reg, p, name):
    src = reg.get(_need(p, "source", "morphism"), "group")
    tgt = reg.get(_need(p, "target", "morphism"), "group")
    fmap = _int_list(_need(p, "map", "morphism"), "map", tgt.order)
    if len(fmap) != src.order:
        raise SchemaError("map length must equal the source order")
    return GroupMorphism(src, tgt, tuple(fmap))


def _groupoid(reg, p, name):
    n = _need(p, "objects", "groupoid")
    arrows = _need(p, "arrows", "groupoid")
    if not isinstance(n, int) or n < 0:
        raise SchemaError("objects must be a non-negative integer")
    arrows = [tuple(_int_list(a, "arrow", n)) for a in arrows]
    if any(len(a) != 2 for a in arrows):
        raise SchemaError("arrows are [source, target] pairs")
    k = len(arrows)
    compose = {}
    for entry in _need(p, "compose", "groupoid"):
        g, h, c = _int_list(entry, "compose entry", k)
        compose[(g, h)] = c
    ident = _int_list(_need(p, "identities", "groupoid"), "identities", k)
    inv = _int_list(_need(p, "inverse", "groupoid"), "inverse", k)
    if len(ident) != n or len(inv) != k:
        raise SchemaError("identities/inverse have the wrong length")
    G = FiniteGroupoid(n, tuple(arrows), compose, tuple(ident), tuple(inv))
    if "object_mul" in p or "arrow_mul" in p:
        try:
            OG = FiniteGroup.from_table(_table(_need(p, "object_mul", "groupoid"), n, n, "object_mul"), f"{name}.objects")
            AG = FiniteGroup.from_table(_table(_need(p, "arrow_mul", "groupoid"), k, k, "arrow_mul"), f"{name}.arrows")
        except ValueError as exc:
            raise SchemaError(f"groupoid {name!r}: {exc}") from None
        return GroupGroupoid(G, OG, AG, p.get("label", name))
    return G


def _crossed(reg, p, name):
    M = reg.get(_need(p, "M", "crossed_module"), "group")
    P = reg.get(_need(p, "P", "crossed_module"), "group")
    mu = _int_list(_need(p, "mu", "crossed_module"), "mu", P.order)
    if len(mu) != M.order:
        raise SchemaError("mu length must equal |M|")
    act = _table(_need(p, "action", "crossed_module"), M.order, P.order, "action", upper=M.order)
    return CrossedModule(
        M, P, GroupMorphism(M, P, tuple(mu)), RightGroupAction(P, M, tuple(map(tuple, act))), p.get("label", name)
    )


def _kernel(reg, p, name):
    X = reg.get(_need(p, "crossed_module", "abstract_kernel"), "crossed_module")
    phi = reg.get(_need(p, "phi", "abstract_kernel"), "group")
    Q, q = X.cokernel
    if "theta_lift" in p:
        lift = _int_list(p["theta_lift"], "theta_lift", X.P.order)
        theta = [q.map[x] for x in lift]
    else:
        theta = _int_list(_need(p, "theta", "abstract_kernel"), "theta", Q.order)
    if len(theta) != phi.order:
        raise SchemaError("theta length must equal |Phi|")
    return AbstractKernel(X, phi, GroupMorphism(phi, Q, tuple(theta)))


def _extension(reg, p, name):
    X = reg.get(_need(p, "crossed_module", "extension"), "crossed_module")
    E = reg.get(_need(p, "E", "extension"), "group")
    phi = reg.get(_need(p, "phi", "extension"), "group")
    i = _int_list(_need(p, "i", "extension"), "i", E.order)
    pr = _int_list(_need(p, "p", "extension"), "p", phi.order)
    s = _int_list(_need(p, "sigma", "extension"), "sigma", X.P.order)
    if len(i) != X.M.order or len(pr) != E.order or len(s) != E.order:
        raise SchemaError("extension maps have the wrong length")
    return ExtensionOfType(
        X, E, GroupMorphism(X.M, E, tuple(i)), GroupMorphism(E, phi, tuple(pr)), GroupMorphism(E, X.P, tuple(s))
    )


def _module(reg, p, name):
    phi = reg.get(_need(p, "phi", "module"), "group")
    divs = _int_list(_need(p, "divisors", "module"), "divisors")
    if any(d < 2 for d in divs):
        raise SchemaError("divisors must be at least 2")
    r = len(divs)
    mats = _need(p, "action", "module")
    if not isinstance(mats, list) or len(mats) != phi.order:
        raise SchemaError("one action matrix per element of Phi")
    action = tuple(tuple(tuple(row) for row in _table(m, r, r, "action matrix", upper=None)) for m in mats)
    mod = PhiModule(phi, tuple(divs), action)
    return PhiModule(phi, tuple(divs), tuple(mod.reduce_matrix(R) for R in action))


_BUILDERS = {
    "group": _group,
    "morphism": _morphism,
    "groupoid": _groupoid,
    "crossed_module": _crossed,
    "abstract_kernel": _kernel,
    "extension": _extension,
    "module": _module,
}


# writing

class Bundle:
    """Collects documents for output; groups are deduplicated by name."""

    def __init__(self):
        self.docs = []
        self.names = set()

    def _push(self, kind, name, payload):
        if name in self.names:
            return name
        self.names.add(name)
        self.docs.append({"kind": kind, "name": name, "payload": payload})
        return name

    def group(self, g, name):
        return self._push("group", name, {"order": g.order, "mul": [list(r) for r in g.mul], "label": g.label or name})

    def morphism(self, f, name, src, tgt):
        return self._push("morphism", name, {"source": src, "target": tgt, "map": list(f.map)})

    def groupoid(self, G, name):
        und = G.underlying if isinstance(G, GroupGroupoid) else G
        payload = {
            "objects": und.num_objects,
            "arrows": [list(a) for a in und.arrows],
            "compose": [[g, h, c] for (g, h), c in sorted(und.compose.items())],
            "identities": list(und.identities),
            "inverse": list(und.inverse),
        }
        if isinstance(G, GroupGroupoid):
            payload["object_mul"] = [list(r) for r in G.object_group.mul]
            payload["arrow_mul"] = [list(r) for r in G.arrow_group.mul]
            payload["label"] = G.label or name
        return self._push("groupoid", name, payload)

    def crossed_module(self, X, name):
        m = self.group(X.M, f"{name}.M")
        p = self.group(X.P, f"{name}.P")
        return self._push(
            "crossed_module",
            name,
            {"M": m, "P": p, "mu": list(X.mu.map), "action": [list(r) for r in X.action.act], "label": X.label or name},
        )

    def abstract_kernel(self, k, name, xm_name=None):
        xm = xm_name or self.crossed_module(k.xm, f"{name}.xm")
        phi = self.group(k.phi, f"{name}.phi")
        lift = [k.lift_classes[c][0] for c in k.theta.map]
        return self._push(
            "abstract_kernel", name, {"crossed_module": xm, "phi": phi, "theta": list(k.theta.map), "theta_lift": lift}
        )

    def extension(self, e, name, xm_name=None, phi_name=None):
        xm = xm_name or self.crossed_module(e.xm, f"{name}.xm")
        E = self.group(e.E, f"{name}.E")
        phi = phi_name or self.group(e.phi, f"{name}.phi")
        return self._push(
            "extension",
            name,
            {
                "crossed_module": xm, "E": E, "phi": phi,
                "i": list(e.i.map), "p": list(e.p.map), "sigma": list(e.sigma.map),
            },
        )

    def module(self, A, name):
        phi = self.group(A.phi, f"{name}.phi")
        return self._push(
            "module",
            name,
            {"phi": phi, "divisors": list(A.divisors), "action": [[list(r) for r in R] for R in A.action]},
        )

    def as_json(self):
        return {"documents": self.docs}


def dumps(obj):
    """Canonical JSON: sorted keys, fixed separators, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=1, separators=(",", ": ")) + "\n"
