"""JSON workspaces: named algebras, modules, coalgebroids, bialgebroids, cells and twists.

Matrices are stored sparsely as ``{"shape": [r, c], "entries": [[i, j, "v"], ...]}``
with canonical scalar strings, so saving is byte-deterministic.  Objects
refer to each other by name; loading resolves every reference and runs
the structural constructors (axiom checks are left to the caller).
"""

import json

from .algkit import AlgebraError, FiniteAlgebra
from .bgdkit import Bialgebroid, BialgebroidError
from .cgdkit import Coalgebroid, CoalgebroidError
from .exactfield import Field, FieldError
from .modkit import Bimodule, ModuleError, Multimodule
from .moritakit import CellError, OneCell, TwoCell

KINDS = ("algebras", "bimodules", "coalgebroids", "bialgebroids", "one_cells", "two_cells", "twists")
LOOKUP_ORDER = ("one_cells", "two_cells", "twists", "bialgebroids", "coalgebroids", "bimodules", "algebras")


class WorkspaceError(ValueError):
    """Malformed input: parse errors, dangling references, ill-shaped data."""


def encode_matrix(M):
    return {"shape": [M.rows, M.cols], "entries": [[i, j, str(v)] for i, j, v in M.nonzero()]}


def decode_matrix(field, d, where=""):
    try:
        r, c = d["shape"]
        items = {}
        for i, j, v in d["entries"]:
            if not (0 <= i < r and 0 <= j < c):
                raise WorkspaceError("%s: entry (%d, %d) outside shape %dx%d" % (where, i, j, r, c))
            items[(i, j)] = field(v)
    except (KeyError, TypeError, ValueError) as e:
        if isinstance(e, WorkspaceError):
            raise
        raise WorkspaceError("%s: bad matrix (%s)" % (where, e))
    return field.from_sparse(r, c, items)


class Workspace:
    """Named objects over one field.  ``add_*`` registers dependencies under derived names."""

    def __init__(self, field):
        self.field = field
        self.objects = {k: {} for k in KINDS}
        self._names = {}

    # lookup

    def resolve(self, name):
        """``(kind, object)`` for ``name`` or ``kind:name``; bare names prefer higher-level kinds."""
        if ":" in name and name.split(":", 1)[0] in KINDS:
            kind, name = name.split(":", 1)
            kinds = [kind]
        else:
            kinds = LOOKUP_ORDER
        for k in kinds:
            if name in self.objects[k]:
                return k, self.objects[k][name]
        raise WorkspaceError("unknown object %r" % name)

    def get(self, name, kind=None):
        return self.resolve("%s:%s" % (kind, name) if kind else name)[1]

    def names(self):
        return sorted((k, n) for k in KINDS for n in self.objects[k])

    # registration

    def _register(self, kind, obj, name):
        if id(obj) in self._names:
            return self._names[id(obj)]
        name = name or getattr(obj, "name", None) or kind[:-1]
        base, i = name, 2
        while name in self.objects[kind]:
            name = "%s_%d" % (base, i)
            i += 1
        self.objects[kind][name] = obj
        self._names[id(obj)] = name
        return name

    def _check_field(self, obj):
        if obj.field != self.field:
            raise WorkspaceError("object over %s in a workspace over %s" % (obj.field.name, self.field.name))

    def add_algebra(self, A, name=None):
        self._check_field(A)
        return self._register("algebras", A, name)

    def add_bimodule(self, M, name=None):
        self.add_algebra(M.left_alg)
        self.add_algebra(M.right_alg)
        return self._register("bimodules", M, name)

    def add_coalgebroid(self, C, name=None):
        self.add_algebra(C.R)
        self.add_algebra(C.S)
        return self._register("coalgebroids", C, name)

    def add_bialgebroid(self, B, name=None):
        self.add_algebra(B.total)
        self.add_algebra(B.base)
        return self._register("bialgebroids", B, name)

    def add_one_cell(self, P, name=None):
        self.add_bialgebroid(P.source)
        self.add_bialgebroid(P.target)
        return self._register("one_cells", P, name)

    def add_two_cell(self, alpha, name=None):
        self.add_one_cell(alpha.source)
        self.add_one_cell(alpha.target)
        return self._register("two_cells", alpha, name)

    def add_twist(self, TD, name=None):
        self.add_bialgebroid(TD.bialgebroid)
        return self._register("twists", TD, name)

    # serialisation

    def to_dict(self):
        ref = self._names.get
        enc = encode_matrix
        mats = lambda ms: [enc(m) for m in ms]
        out = {"field": self.field.name}
        o = self.objects
        out["algebras"] = {n: {"left": mats(A.left), "unit": enc(A.unit)} for n, A in o["algebras"].items()}
        out["bimodules"] = {n: {"left_algebra": ref(id(M.left_alg)), "right_algebra": ref(id(M.right_alg)),
                                "left": mats(M.left_act), "right": mats(M.right_act)}
                            for n, M in o["bimodules"].items()}
        cg = {}
        for n, C in o["coalgebroids"].items():
            c = C.carrier
            cg[n] = {"R": ref(id(C.R)), "S": ref(id(C.S)), "lower_left": mats(c.lower_left),
                     "lower_right": mats(c.lower_right), "upper_left": mats(c.upper_left),
                     "upper_right": mats(c.upper_right), "delta": enc(C.delta), "epsilon": enc(C.epsilon)}
        out["coalgebroids"] = cg
        out["bialgebroids"] = {n: {"total": ref(id(B.total)), "base": ref(id(B.base)), "s": enc(B.s),
                                   "t": enc(B.t), "delta": enc(B.delta), "epsilon": enc(B.epsilon)}
                               for n, B in o["bialgebroids"].items()}
        out["one_cells"] = {n: {"source": ref(id(P.source)), "target": ref(id(P.target)), "left": mats(P.left_act),
                                "right": mats(P.right_act), "delta": enc(P.delta), "epsilon": enc(P.epsilon)}
                            for n, P in o["one_cells"].items()}
        out["two_cells"] = {n: {"source": ref(id(a.source)), "target": ref(id(a.target)), "matrix": enc(a.matrix)}
                            for n, a in o["two_cells"].items()}
        out["twists"] = {n: {"bialgebroid": ref(id(T.bialgebroid)), "J": enc(T.J), "J_inv": enc(T.J_inv)}
                         for n, T in o["twists"].items()}
        return out

    def dumps(self):
        return json.dumps(self.to_dict(), sort_keys=True, indent=1) + "\n"

    def save(self, path):
        with open(path, "w") as fh:
            fh.write(self.dumps())

    @classmethod
    def from_dict(cls, data, field=None):
        if not isinstance(data, dict):
            raise WorkspaceError("workspace must be a JSON object")
        try:
            fld = Field.parse(data.get("field", field.name if field else "Q"))
        except FieldError as e:
            raise WorkspaceError(str(e))
        if field is not None and field != fld:
            raise WorkspaceError("--field %s disagrees with the workspace field %s" % (field.name, fld.name))
        ws = cls(fld)
        unknown = set(data) - set(KINDS) - {"field"}
        if unknown:
            raise WorkspaceError("unknown workspace sections: %s" % ", ".join(sorted(unknown)))
        for kind in KINDS:
            if not isinstance(data.get(kind, {}), dict):
                raise WorkspaceError("section %r must be an object" % kind)
        mat = lambda d, w: decode_matrix(fld, d, w)
        mats = lambda ds, w: [mat(d, "%s[%d]" % (w, i)) for i, d in enumerate(ds)]

        def build(kind, name, spec, fn):
            where = "%s %r" % (kind[:-1].replace("_", " "), name)
            try:
                obj = fn(spec, where)
            except KeyError as e:
                raise WorkspaceError("%s: missing field %s" % (where, e))
            except (AlgebraError, ModuleError, CoalgebroidError, BialgebroidError, CellError, TypeError) as e:
                raise WorkspaceError("%s: %s" % (where, e))
            ws.objects[kind][name] = obj
            ws._names[id(obj)] = name

        def dep(name, kind, where):
            if name not in ws.objects[kind]:
                raise WorkspaceError("%s refers to unknown %s %r" % (where, kind[:-1].replace("_", " "), name))
            return ws.objects[kind][name]

        sections = {k: data.get(k, {}) for k in KINDS}
        for n, s in sorted(sections["algebras"].items()):
            build("algebras", n, s, lambda s, w: FiniteAlgebra(fld, mats(s["left"], w), mat(s["unit"], w), name=n))
        for n, s in sorted(sections["bimodules"].items()):
            build("bimodules", n, s, lambda s, w: Bimodule(
                dep(s["left_algebra"], "algebras", w), dep(s["right_algebra"], "algebras", w),
                mats(s["left"], w), mats(s["right"], w), name=n))
        for n, s in sorted(sections["coalgebroids"].items()):
            def mk(s, w, n=n):
                R, S = dep(s["R"], "algebras", w), dep(s["S"], "algebras", w)
                c = Multimodule(R, S, mats(s["lower_left"], w), mats(s["lower_right"], w),
                                mats(s["upper_left"], w), mats(s["upper_right"], w), name=n)
                return Coalgebroid(c, mat(s["delta"], w), mat(s["epsilon"], w), name=n)
            build("coalgebroids", n, s, mk)
        for n, s in sorted(sections["bialgebroids"].items()):
            build("bialgebroids", n, s, lambda s, w: Bialgebroid(
                dep(s["total"], "algebras", w), dep(s["base"], "algebras", w), mat(s["s"], w), mat(s["t"], w),
                mat(s["delta"], w), mat(s["epsilon"], w), name=n))
        for n, s in sorted(sections["one_cells"].items()):
            build("one_cells", n, s, lambda s, w: OneCell(
                dep(s["source"], "bialgebroids", w), dep(s["target"], "bialgebroids", w), mats(s["left"], w),
                mats(s["right"], w), mat(s["delta"], w), mat(s["epsilon"], w), name=n))
        for n, s in sorted(sections["two_cells"].items()):
            build("two_cells", n, s, lambda s, w: TwoCell(
                dep(s["source"], "one_cells", w), dep(s["target"], "one_cells", w), mat(s["matrix"], w), name=n))
        from .examples import TwistData
        for n, s in sorted(sections["twists"].items()):
            build("twists", n, s, lambda s, w: TwistData(
                dep(s["bialgebroid"], "bialgebroids", w), mat(s["J"], w), mat(s["J_inv"], w), name=n))
        return ws

    @classmethod
    def loads(cls, text, field=None):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise WorkspaceError("invalid JSON: %s" % e)
        return cls.from_dict(data, field)

    @classmethod
    def load(cls, path, field=None):
        try:
            with open(path) as fh:
                text = fh.read()
        except OSError as e:
            raise WorkspaceError("cannot read workspace: %s" % e)
        return cls.loads(text, field)
