"""JSON readers for the document formats the CLI accepts.

Degrees and bidegrees are string keys ("3", "1,2"); summands are "Z" or
"Z/m"; rational coefficients are numbers or strings like "2/3".  The
schemas/ directory ships a JSON Schema per format.
"""

import json
from fractions import Fraction

from .aq import CoefficientModule, Generator, GradedCommutativePresentation
from .cosimplicial import DoubleCochainComplex, FiniteBicosimplicialSet
from .errors import InputError
from .linalg import field_from_name
from .specseq import ChainComplex, GradedAbelianGroup


def load_document(arg):
    """Parse inline JSON (starts with '{' or '[') or read a file path."""
    text = arg
    if not arg.lstrip().startswith(("{", "[")):
        try:
            with open(arg, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise InputError(f"cannot read {arg}: {exc}")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"bad JSON in {arg!r}: {exc}")


def graded_group(doc):
    if not isinstance(doc, dict):
        raise InputError("graded group document must be an object")
    return GradedAbelianGroup.from_json(doc)


def homotopy_list(doc):
    """[(degree, "Z" | "Z/m"), ...] from the graded-group format."""
    if not isinstance(doc, dict):
        raise InputError("homotopy document must be an object")
    out = []
    for deg in sorted(doc, key=int):
        for name in doc[deg]:
            out.append((int(deg), name))
    return out


def coefficients_table(doc):
    if not isinstance(doc, dict):
        raise InputError("coefficients document must be an object")
    return {int(k): int(v) for k, v in doc.items()}


def chain_complex(doc):
    return ChainComplex.from_json(doc)


def _fraction(x):
    if isinstance(x, (int, str)):
        try:
            return Fraction(x)
        except (ValueError, ZeroDivisionError):
            raise InputError(f"bad rational {x!r}")
    raise InputError(f"bad rational {x!r} (use ints or strings like \"2/3\")")


def presentation(doc):
    if not isinstance(doc, dict):
        raise InputError("presentation document must be an object")
    gens = [Generator(g["name"], int(g["degree"]))
            for g in doc.get("generators", [])]
    names = {g.name: i for i, g in enumerate(gens)}
    rels = []
    for rel_doc in doc.get("relations", []):
        rels.append(_polynomial(rel_doc, gens, names))
    return GradedCommutativePresentation(gens, rels, doc.get("pi0", "Q"))


def _polynomial(terms, gens, names):
    poly = {}
    for term in terms:
        exps = [0] * len(gens)
        for name, e in term.get("exps", {}).items():
            if name not in names:
                raise InputError(f"unknown generator {name!r} in polynomial")
            exps[names[name]] = int(e)
        c = _fraction(term.get("coeff", 1))
        key = tuple(exps)
        acc = poly.get(key, Fraction(0)) + c
        if acc:
            poly[key] = acc
        else:
            poly.pop(key, None)
    return poly


def polynomial_in(pres, terms):
    names = {g.name: i for i, g in enumerate(pres.generators)}
    return _polynomial(terms, pres.generators, names)


def coefficient_module(doc):
    if not isinstance(doc, dict) or "target" not in doc:
        raise InputError("coefficient document needs a \"target\" presentation")
    target = presentation(doc["target"])
    fmap = {name: polynomial_in(target, terms)
            for name, terms in doc.get("map", {}).items()}
    return CoefficientModule(target, fmap, int(doc.get("shift", 0)))


def assignment_map(target, doc):
    if not isinstance(doc, dict):
        raise InputError("assignment document must be an object")
    return {name: polynomial_in(target, terms) for name, terms in doc.items()}


def _pair_key(key):
    try:
        a, b = key.split(",")
        return (int(a), int(b))
    except ValueError:
        raise InputError(f"bad bidegree key {key!r}; expected \"h,v\"")


def double_complex(doc):
    if not isinstance(doc, dict):
        raise InputError("double complex document must be an object")
    field = field_from_name(doc.get("field", "Q"))
    conv = field.of
    dims = {_pair_key(k): int(v) for k, v in doc.get("dims", {}).items()}
    dh = {_pair_key(k): [[conv(x) for x in row] for row in m]
          for k, m in doc.get("horizontal", {}).items()}
    dv = {_pair_key(k): [[conv(x) for x in row] for row in m]
          for k, m in doc.get("vertical", {}).items()}
    return DoubleCochainComplex(field, dims, dh, dv).validate()


def bicosimplicial_set(doc):
    if not isinstance(doc, dict):
        raise InputError("bicosimplicial set document must be an object")
    sizes = {_pair_key(k): int(v) for k, v in doc.get("sizes", {}).items()}

    def table(name):
        return {_pair_key(k): [list(map(int, f)) for f in v]
                for k, v in doc.get(name, {}).items()}

    return FiniteBicosimplicialSet(
        sizes, table("h_faces"), table("v_faces"),
        table("h_degen"), table("v_degen"), int(doc.get("levels", 2))).validate()


def dump(doc):
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"
