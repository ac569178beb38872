"""JSON schemas for every artifact the CLI reads or writes.

All scalars serialize as reduced "a/b+c/d*i" strings, block keys as
"(2d', 2d'', n)" and "(2d', 2d'', n, m, sigma)" tuples, and documents
are dumped with sorted keys so identical inputs produce byte-identical
files.
"""

from __future__ import annotations

import hashlib
import json

from . import chiral as ch
from . import conformal as cf
from . import graded as gr
from . import linalg as la
from . import reconstruct as rc
from .errors import FormatError, StructureError
from .scalar import Scalar, ZERO

SPEC_FORMAT = "vertexalg/spec-v1"
MUD_FORMAT = "vertexalg/mud-v1"
REPORT_FORMAT = "vertexalg/report-v1"


def canonical_dumps(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=1, separators=(",", ": "))


def sha256_of(doc) -> str:
    return hashlib.sha256(canonical_dumps(doc).encode()).hexdigest()


def _mat_json(mat):
    return [[str(x) for x in row] for row in mat]


def _mat_parse(rows):
    try:
        return [[Scalar.parse(x) for x in row] for row in rows]
    except (ValueError, TypeError) as exc:
        raise FormatError(f"bad scalar entry: {exc}") from exc


def space_to_json(space: gr.GradedSpace):
    comps = []
    for d2 in space.grades():
        comps.append({
            "grade2": d2,
            "labels": [
                {"cartan": [str(c) for c in lab.cartan], "parity": lab.parity}
                for lab in space.labels(d2)
            ],
            "gram": _mat_json(space.gram[d2]),
        })
    return {"cutoff2": space.cutoff2, "components": comps}


def space_from_json(doc) -> gr.GradedSpace:
    try:
        cutoff2 = int(doc["cutoff2"])
        components = {}
        gram = {}
        for comp in doc["components"]:
            d2 = int(comp["grade2"])
            labels = []
            for k, lab in enumerate(comp["labels"]):
                cartan = tuple(Scalar.parse(c) for c in lab["cartan"])
                labels.append(gr.WeightLabel(d2, cartan, int(lab.get("parity", 0)), k))
            components[d2] = labels
            gram[d2] = _mat_parse(comp["gram"])
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"malformed space section: {exc}") from exc
    try:
        return gr.GradedSpace(components, gram, cutoff2)
    except StructureError as exc:
        raise FormatError(str(exc)) from exc


def blockmap_to_json(f: gr.BlockMap):
    return {str(d2): _mat_json(m) for d2, m in sorted(f.blocks.items())}


def blockmap_from_json(space, degree2, doc) -> gr.BlockMap:
    f = gr.BlockMap(space, degree2)
    try:
        for key, rows in doc.items():
            f.set_block(int(key), _mat_parse(rows))
    except (StructureError, ValueError) as exc:
        raise FormatError(f"malformed operator block: {exc}") from exc
    return f


def rep_to_json(rep: cf.CLieRep):
    return {name: blockmap_to_json(f) for name, f in sorted(rep.action.items())}


def rep_from_json(dim, space, doc) -> cf.CLieRep:
    action = {}
    for name in cf.generator_names(dim):
        if name not in doc:
            raise FormatError(f"missing generator {name} in the lie section")
        action[name] = blockmap_from_json(space, cf.expected_degree2(name), doc[name])
    return cf.CLieRep(dim, space, action)


def _mode_key(d2a, d2b, n):
    return f"({d2a},{d2b},{n})"


def _parse_key(key, arity):
    body = key.strip()
    if not (body.startswith("(") and body.endswith(")")):
        raise FormatError(f"malformed block key {key!r}")
    parts = body[1:-1].split(",")
    if len(parts) != arity:
        raise FormatError(f"block key {key!r} needs {arity} integers")
    try:
        return tuple(int(p) for p in parts)
    except ValueError as exc:
        raise FormatError(f"block key {key!r}: {exc}") from exc


def table_to_json(table: ch.ModeTable):
    return {
        "vacuum_index": table.vacuum_index,
        "blocks": {
            _mode_key(*key): _mat_json(mat)
            for key, mat in sorted(table.blocks.items())
        },
    }


def table_from_json(space, t_map, doc) -> ch.ModeTable:
    try:
        table = ch.ModeTable(space, int(doc["vacuum_index"]), t_map)
        for key, rows in doc.get("blocks", {}).items():
            d2a, d2b, n = _parse_key(key, 3)
            table.set_block(d2a, d2b, n, _mat_parse(rows))
    except (StructureError, KeyError, ValueError) as exc:
        raise FormatError(f"malformed modes section: {exc}") from exc
    return table


def spec_to_json(dim, space, rep, table, name=""):
    return {
        "format": SPEC_FORMAT,
        "meta": {"dim": dim, "cutoff2": space.cutoff2, "name": name},
        "space": space_to_json(space),
        "lie": rep_to_json(rep),
        "modes": table_to_json(table),
    }


def spec_from_json(doc):
    if not isinstance(doc, dict) or doc.get("format") != SPEC_FORMAT:
        raise FormatError(f"not a {SPEC_FORMAT} document")
    try:
        dim = int(doc["meta"]["dim"])
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"malformed meta section: {exc}") from exc
    space = space_from_json(doc["space"])
    if "lie" not in doc or "modes" not in doc:
        raise FormatError("spec document needs lie and modes sections")
    rep = rep_from_json(dim, space, doc["lie"])
    table = table_from_json(space, rep.action["T1"], doc["modes"])
    return dim, space, rep, table


def mud_to_json(mud: rc.MuDTable, input_hash: str):
    meta = {
        "dim": mud.dim,
        "cutoff2": mud.cutoff2,
        "basis": mud.basis_kind,
        "input_sha256": input_hash,
        "solver": mud.meta.get("solver", ""),
    }
    degrees = sorted({key[3] for key in mud.blocks})
    harmonic = {}
    for m in degrees:
        basis = mud.basis(m)
        harmonic[str(m)] = {
            "line_values": [str(v) for v in basis.line_values],
            "polys": [
                [[list(mono), str(c)] for mono, c in p.sorted_terms()]
                for p in basis.polys
            ],
        }
    return {
        "format": MUD_FORMAT,
        "meta": meta,
        "harmonic": harmonic,
        "blocks": {
            f"({a},{b},{n},{m},{s})": _mat_json(mat)
            for (a, b, n, m, s), mat in sorted(mud.blocks.items())
        },
    }


def mud_from_json(space, doc) -> rc.MuDTable:
    if not isinstance(doc, dict) or doc.get("format") != MUD_FORMAT:
        raise FormatError(f"not a {MUD_FORMAT} document")
    meta = doc.get("meta", {})
    try:
        mud = rc.MuDTable(int(meta["dim"]), space, meta["basis"], dict(meta))
        for key, rows in doc.get("blocks", {}).items():
            d2a, d2b, n, m, sigma = _parse_key(key, 5)
            mud.set_block(d2a, d2b, n, m, sigma, _mat_parse(rows))
    except (StructureError, KeyError, ValueError) as exc:
        raise FormatError(f"malformed table document: {exc}") from exc
    return mud


def report_to_json(reports) -> dict:
    doc = reports.to_dict()
    doc["format"] = REPORT_FORMAT
    return doc


def truncate_model(dim, space, rep, table, cutoff2):
    """Restrict a loaded model to a smaller cutoff."""
    if cutoff2 >= space.cutoff2:
        return dim, space, rep, table
    comps = {d2: labs for d2, labs in space.components.items() if d2 <= cutoff2}
    gram = {d2: space.gram[d2] for d2 in comps}
    small = gr.GradedSpace(comps, gram, cutoff2)
    action = {}
    for name, f in rep.action.items():
        g = gr.BlockMap(small, f.degree2, f.parity)
        for d2, mat in f.blocks.items():
            if g.is_defined(d2) and d2 + f.degree2 <= cutoff2 and d2 <= cutoff2:
                g.set_block(d2, mat)
        action[name] = g
    rep2 = cf.CLieRep(dim, small, action)
    table2 = ch.ModeTable(small, table.vacuum_index, action["T1"])
    for (d2a, d2b, n), mat in table.blocks.items():
        if table2.in_region(d2a, d2b, n):
            table2.set_block(d2a, d2b, n, mat)
    return dim, small, rep2, table2
