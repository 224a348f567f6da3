"""Report builders behind the CLI commands. Every report is plain JSON data."""

from __future__ import annotations

import itertools
import math
import random
from collections import Counter
from fractions import Fraction

from . import __version__
from .errors import ValidationError
from .instance import Instance, format_point, heights_to_json
from .monodromy import Atlas, local_monodromy, mirror_transition_check, primary_loops
from .polyhedra import f_vector, lattice_points
from .sigma import SigmaComplex, build_sigma, mirror_model, nerve_check
from .subdivision import perturbation_threshold, same_secondary_cone
from .spine import (
    check_qe_item1,
    check_qe_item2,
    check_qe_item3,
    equivalence_threshold,
    spine,
    verify_qcell_minkowski,
)

ITEM1_EXHAUSTIVE_LIMIT = 6000


def jsonable(x):
    """Exact numbers as ints or ``"p/q"`` strings; tuples as lists."""
    if isinstance(x, bool) or x is None or isinstance(x, (str, float)):
        return x
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    return str(x)


def _f(x: float) -> float:
    """Floats rounded to 12 significant digits so reports do not depend on the kernel backend."""
    return float(f"{x:.12g}")


def header(inst: Instance, command: str) -> dict:
    return {
        "command": command,
        "instance": inst.name,
        "instance_sha256": inst.sha256,
        "seed": inst.seed,
        "version": __version__,
    }


def _pt(p) -> str:
    return format_point(p) if all(Fraction(x).denominator == 1 for x in p) else ",".join(str(jsonable(x)) for x in p)


def _simplex(s) -> list[str]:
    return [_pt(p) for p in s]


# ---------------------------------------------------------------------------


def check_report(inst: Instance) -> dict:
    out = header(inst, "check")
    out["d"] = inst.d
    out["reflexive"] = True
    out["delta_vertices"] = [_pt(v) for v in inst.delta.vertices]
    out["delta_dual_vertices"] = [_pt(v) for v in inst.delta_dual.vertices]
    out["lattice_points"] = {"delta": len(lattice_points(inst.delta)), "delta_dual": len(lattice_points(inst.delta_dual))}
    out["f_vector"] = {"delta": list(f_vector(inst.delta)), "delta_dual": list(f_vector(inst.delta_dual))}
    for key, P, h, central, bnd, auto in (
        ("lambda", inst.delta, inst.lam, inst.central_S, inst.S, inst.lambda_auto),
        ("nu", inst.delta_dual, inst.nu, inst.central_T, inst.T, inst.nu_auto),
    ):
        eps = perturbation_threshold(P, h)
        out[key] = {
            "auto": auto,
            "heights": heights_to_json(h),
            "generic": True,
            "central_cells": len(central.cells),
            "boundary_cells": len(bnd.cells),
            "boundary_vertices": len(bnd.vertices),
            "uses_all_boundary_points": bnd.uses_all(p for p in lattice_points(P) if any(p)),
            "secondary_cone": {
                "perturbation_threshold": jsonable(eps),
                "stable_under_threshold_shift": same_secondary_cone(h, h.shifted(eps), P),
            },
        }
    return out


def _sigma(inst: Instance) -> SigmaComplex:
    return build_sigma(inst.S, inst.T)


def sigma_report(inst: Instance, sg: SigmaComplex | None = None) -> dict:
    sg = sg or _sigma(inst)
    out = header(inst, "sigma")
    H = sg.homology()
    G = sg.gamma()
    nerve = nerve_check(sg)
    types = Counter(sg.vertex_type(v) for v in sg.discriminant_vertices)
    degrees = Counter((sg.vertex_type(v), k) for v, k in sg.discriminant_graph_degrees().items())
    out["sigma"] = {
        "cells": len(sg.cells),
        "f_vector": list(sg.f_vector()),
        "euler_characteristic": sg.euler_characteristic,
        "betti": list(H.betti),
        "torsion": [list(t) for t in H.torsion],
        "pseudomanifold": sg.is_pseudomanifold(),
        "connected": sg.is_connected(),
    }
    out["discriminant"] = {
        "vertices": len(sg.discriminant_vertices),
        "cells": len(sg.discriminant_cells),
        "types": {f"{k},{l}": n for (k, l), n in sorted(types.items())},
        "degrees": {f"{k},{l}:{deg}": n for ((k, l), deg), n in sorted(degrees.items())},
    }
    out["gamma"] = {
        "left": len(G.left),
        "right": len(G.right),
        "edges": len(G.edges),
        "connected": G.is_connected,
        "cycle_rank": G.cycle_rank,
    }
    out["nerve"] = {
        "ok": nerve.ok,
        "intersections_match_gamma": nerve.intersections_match_gamma,
        "intersections_are_stars": nerve.intersections_are_stars,
        "union_is_complement": nerve.union_is_complement,
        "b1": nerve.nerve_b1,
    }
    out["summary"] = f"|D| = {len(sg.discriminant_vertices)}; Betti {tuple(H.betti)}"
    return out


def monodromy_report(inst: Instance, loop: list | None = None, sg: SigmaComplex | None = None) -> dict:
    sg = sg or _sigma(inst)
    atlas = Atlas()
    out = header(inst, "monodromy")
    G = sg.gamma()
    loops = primary_loops(G.edges)
    agree = sum(atlas.monodromy([v0, w0, v1, w1, v0]) == atlas.primary_formula(v0, w0, v1, w1) for v0, w0, v1, w1 in loops)
    out["primary_loops"] = {"count": len(loops), "match_closed_form": agree}
    rows = []
    for s, t in sg.discriminant_vertices:
        L = local_monodromy(s, t, atlas)
        k, l = L.type
        rows.append(
            {
                "sigma": _simplex(s),
                "tau": _simplex(t),
                "type": [k, l],
                "generators": len(L.generators),
                "rank": L.rank,
                "commute": L.commute,
                "square_zero": L.square_zero,
                "vol_sigma": L.vol_sigma,
                "vol_tau": L.vol_tau,
                "index": L.index,
                "vol_product": L.paper_index,
                "tensor_index": L.tensor_index,
            }
        )
    out["local"] = rows
    out["local_ok"] = all(
        r["generators"] == r["type"][0] * r["type"][1] and r["commute"] and r["square_zero"] and r["index"] == r["vol_product"]
        for r in rows
    )
    if loop is not None:
        M = atlas.monodromy(loop)
        out["loop"] = {"vertices": [_pt(p) for p in loop], "matrix": M.tolist()}
    return out


def mirror_report(inst: Instance, sg: SigmaComplex | None = None) -> dict:
    sg = sg or _sigma(inst)
    out = header(inst, "mirror")
    _, rep = mirror_model(sg)
    out["mirror"] = {
        "ok": rep.ok,
        "cells_match": rep.cells_match,
        "discriminant_match": rep.discriminant_match,
        "types_swapped": rep.types_swapped,
        "covers_swapped": rep.covers_swapped,
        "transitions_dual": mirror_transition_check(sg.gamma().edges),
    }
    return out


def _item1_subsets(sp, seed: int) -> list:
    """All subsets of size <= d+1 when that is affordable, else a seeded sample."""
    dom = sp.lam.domain
    k = sp.delta.d + 1
    total = sum(math.comb(len(dom), r) for r in range(1, k + 1))
    if total <= ITEM1_EXHAUSTIVE_LIMIT:
        return [c for r in range(1, k + 1) for c in itertools.combinations(dom, r)]
    rng = random.Random(seed)
    subsets = set(sp.labels)
    subsets.update(itertools.combinations(dom, 2))
    for lab in sp.labels:
        for m in dom:
            if m not in lab and len(lab) < k:
                subsets.add(tuple(sorted(lab + (m,))))
    while len(subsets) < ITEM1_EXHAUSTIVE_LIMIT:
        subsets.add(tuple(sorted(rng.sample(dom, rng.randint(1, k)))))
    return sorted(subsets, key=lambda s: (len(s), s))


def spine_report(inst: Instance, cells: bool = True) -> dict:
    out = header(inst, "spine")
    sp = spine(inst.delta, inst.lam)
    origin = (0,) * inst.d
    cell_rows = []
    mink = True
    for c in sp.cells:
        ok = verify_qcell_minkowski(sp, c)
        mink = mink and ok
        if cells:
            P = c.polyhedron
            cell_rows.append(
                {
                    "label": _simplex(c.label),
                    "dim": c.dim,
                    "bounded": c.bounded,
                    "vertices": [_pt(p) for p in P.points],
                    "rays": [_pt(r) for r in P.rays],
                    "equalities": [[jsonable(a), jsonable(b)] for a, b in c.hrep.equalities],
                    "inequalities": [[jsonable(a), jsonable(b)] for a, b, _ in c.hrep.inequalities],
                    "minkowski_ok": ok,
                }
            )
    subsets = _item1_subsets(sp, inst.seed)
    S_vertices = sorted({m for lab in sp.labels for m in lab if m != origin})
    i3 = [check_qe_item3(sp, w) for w in inst.T.vertices]
    thr = equivalence_threshold(inst.lam, [origin])
    dims = Counter(c.dim for c in sp.cells)
    out["spine"] = {
        "cells": len(sp.cells),
        "by_dim": {str(k): n for k, n in sorted(dims.items())},
        "bounded_top_cells": sum(1 for c in sp.cells if c.bounded and c.dim == inst.d),
        "unbounded_top_cells": sum(1 for c in sp.cells if not c.bounded and c.dim == inst.d),
        "minkowski_all": mink,
    }
    out["qe"] = {
        "item1": check_qe_item1(sp, subsets=subsets),
        "item1_subsets_checked": len(subsets),
        "item2": all(check_qe_item2(sp, v) for v in S_vertices),
        "item3": all(r.equal for r in i3),
        "item3_superset": all(r.superset for r in i3),
        "item3_contains_cone": all(r.contains_cone for r in i3),
        "item3_failures": [
            {"w": _pt(r.w), "extra_vertices": [_pt(p) for p in r.extra_vertices]} for r in i3 if not r.equal
        ],
        "origin_on_truncation_boundary": all(r.origin_on_boundary for r in i3),
        "w_in_normal_cone": all(r.w_in_normal_cone for r in i3),
    }
    out["equivalence_threshold_origin"] = None if thr is None else _f(float(thr))
    if cells:
        out["cell_list"] = cell_rows
    return out


def amoeba_report(inst: Instance, window=None, s_ladder=None, grid=None) -> dict:
    from .amoeba import (
        DEFAULT_LADDER,
        LaurentInstance,
        convergence_experiment,
        dominance_bound,
        dominance_check,
        laurent_string,
        sample_amoeba,
    )

    if inst.d != 2:
        raise ValidationError("the amoeba experiment needs d = 2")
    window = tuple(window or inst.option("window", (-3, -3, 3, 3)))
    s_ladder = tuple(s_ladder or inst.option("s_ladder", DEFAULT_LADDER))
    grid = tuple(grid or inst.option("grid", (300, 48)))
    spread = max(inst.lam.values.values()) - min(inst.lam.values.values())
    if float(spread) * math.log(max(s_ladder)) > 600:
        raise ValidationError("heights too spread out for double precision at this s; supply explicit small heights")
    base = LaurentInstance.from_heights(inst.lam, s_ladder[0])
    rows = convergence_experiment(base, s_ladder, window, grid, check=False)
    out = header(inst, "amoeba")
    out["polynomial"] = laurent_string(base)
    out["window"] = list(window)
    out["grid"] = list(grid)
    out["rows"] = [
        {
            "s": _f(r.s),
            "log_s": _f(r.log_s),
            "points": r.n_points,
            "sup_dist": _f(r.sup_dist),
            "spine_cover_dist": _f(r.spine_cover_dist),
            "hausdorff": _f(r.hausdorff),
        }
        for r in rows
    ]
    out["hausdorff_decreasing"] = all(b.hausdorff < a.hausdorff for a, b in zip(rows, rows[1:]))
    out["sup_dist_within_slack"] = all(b.sup_dist <= 1.1 * a.sup_dist for a, b in zip(rows, rows[1:]))
    dom = []
    for s in s_ladder:
        li = base.with_s(s)
        smp = sample_amoeba(li, window, grid)
        dom.append({"s": _f(s), "bound": _f(dominance_bound(li)), "ok": dominance_check(smp, li)})
    out["dominance"] = dom
    return out

