"""Itemised pass/fail reports with deterministic serialisation."""

import json

import flint

from .exactfield import Matrix


def jsonable(x):
    """Convert scalars/matrices/containers into canonical JSON-ready data."""
    if isinstance(x, Matrix):
        return [[str(v) for v in row] for row in x.tolist()]
    if isinstance(x, (flint.fmpq, flint.nmod)):
        return str(x)
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    if isinstance(x, float):
        raise TypeError("floats are not allowed in reports")
    return str(x)


class Report:
    """Named verdicts keyed by stable check identifiers.

    ``ok`` is the conjunction of all items; an empty report passes.
    """

    def __init__(self, subject, items=None):
        self.subject = subject
        self.items = {}
        self.meta = {}
        for k, v in (items or {}).items():
            self.items[k] = v

    def add(self, check_id, passed, witness=None):
        self.items[check_id] = {"pass": bool(passed), "witness": jsonable(witness)}
        return bool(passed)

    def merge(self, other, prefix=""):
        for k, v in other.items.items():
            self.items[prefix + k] = v
        return other.ok

    @property
    def ok(self):
        return all(v["pass"] for v in self.items.values())

    def __bool__(self):
        return self.ok

    def passed(self, check_id):
        return self.items[check_id]["pass"]

    def failures(self):
        return sorted(k for k, v in self.items.items() if not v["pass"])

    def to_dict(self):
        d = {
            "subject": self.subject,
            "overall": "pass" if self.ok else "fail",
            "checks": {k: {"verdict": "pass" if v["pass"] else "fail", "witness": v["witness"]}
                       for k, v in sorted(self.items.items())},
        }
        if self.meta:
            d["meta"] = jsonable(self.meta)
        return d

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    def render_text(self):
        d = self.to_dict()
        lines = ["%s: %s" % (d["subject"], d["overall"].upper())]
        for k, v in d["checks"].items():
            line = "  [%s] %s" % (v["verdict"], k)
            if v["verdict"] == "fail" and v["witness"] is not None:
                line += "  witness=%s" % json.dumps(v["witness"], sort_keys=True)
            lines.append(line)
        for k, v in sorted(d.get("meta", {}).items()):
            lines.append("  %s: %s" % (k, json.dumps(v, sort_keys=True)))
        return "\n".join(lines) + "\n"

    def __repr__(self):
        return "Report(%r, %s, failures=%r)" % (self.subject, "pass" if self.ok else "fail", self.failures())
