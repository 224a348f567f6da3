"""File exports: spine cells (JSON), planar corner-locus segments (CSV), Sigma surfaces (OFF)."""

from __future__ import annotations

import csv
import io
import json
from fractions import Fraction

from .errors import ValidationError
from .instance import Instance
from .reports import header, jsonable, spine_report
from .sigma import SigmaComplex, build_sigma
from .spine import corner_locus_segments


def dumps(report: dict) -> str:
    """Canonical JSON: sorted keys, two-space indent, trailing newline."""
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def spine_json(inst: Instance) -> str:
    rep = spine_report(inst, cells=True)
    rep["command"] = "export"
    rep["format"] = "json"
    return dumps(rep)


def segments_csv(inst: Instance, window) -> str:
    if inst.d != 2:
        raise ValidationError("corner-locus segments are exported for d = 2 only")
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["x0", "y0", "x1", "y1"])
    for a, b in corner_locus_segments(inst.lam, [Fraction(x) for x in window]):
        w.writerow([jsonable(a[0]), jsonable(a[1]), jsonable(b[0]), jsonable(b[1])])
    return buf.getvalue()


def rows_csv(rows: list[dict], columns: list[str]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([r[c] for c in columns])
    return buf.getvalue()


def sigma_off(inst: Instance, sg: SigmaComplex | None = None) -> str:
    """Staircase triangulation of Sigma for d = 3, vertex ``(s, t)`` placed at ``bary(s) + bary(t)``.

    The placement is a viewing aid and need not be an embedding.
    """
    if inst.d != 3:
        raise ValidationError("OFF export is for d = 3 surfaces")
    sg = sg or build_sigma(inst.S, inst.T)
    coords = []
    for s, t in sg.vertices:
        bs = [Fraction(sum(p[i] for p in s), len(s)) for i in range(3)]
        bt = [Fraction(sum(p[i] for p in t), len(t)) for i in range(3)]
        coords.append([float(a + b) for a, b in zip(bs, bt)])
    tris = sg.staircase_simplices()
    lines = ["OFF", f"# {header(inst, 'export')['instance_sha256']}", f"{len(coords)} {len(tris)} 0"]
    lines += [" ".join(f"{x:.6f}" for x in c) for c in coords]
    lines += ["3 " + " ".join(str(i) for i in t) for t in tris]
    return "\n".join(lines) + "\n"
