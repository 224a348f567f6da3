"""One test per acceptance criterion; each records a PASS/FAIL line for the summary."""

from __future__ import annotations

import itertools
import math
import time
from fractions import Fraction

import pytest

import oracles
from conftest import ACCEPTANCE, CORPUS, CUBIC, INSTANCES, PYRAMID, RUNNING, instance_json
from syzmodel.amoeba import LaurentInstance, convergence_experiment, distance_to_spine, sample_amoeba
from syzmodel.instance import load_instance_text
from syzmodel.monodromy import Atlas, local_monodromy, mirror_transition_check, primary_loops
from syzmodel.polyhedra import Polyhedron, _dot
from syzmodel.posets import Poset
from syzmodel.sigma import build_sigma, mirror_model, nerve_check
from syzmodel.spine import qe_report, spine, verify_qcell_minkowski
from syzmodel.subdivision import (
    HeightFunction,
    combinatorial_bsd,
    geometric_bsd,
    nonempty_face_poset,
    pull,
    trivial_subdivision,
)


def record(k: int, ok: bool, detail: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'} criterion {k}: {detail}"
    ACCEPTANCE[k] = line
    print(line)


def _edges(inst):
    vs = sorted(set().union(*inst.S.cells))
    ws = sorted(set().union(*inst.T.cells))
    return [(v, w) for v in vs for w in ws if _dot(v, w) == 1]


def test_criterion_1_sphericity():
    rows = []
    ok = True
    for label, text, betti in [
        ("cubic auto", instance_json(CUBIC), (1, 1)),
        ("pyramid", (INSTANCES / "pyramid_d3.json").read_text(), (1, 0, 1)),
    ]:
        t0 = time.perf_counter()  # heights, triangulations and Sigma
        inst = load_instance_text(text)
        sg = build_sigma(inst.S, inst.T)
        H = sg.homology()
        good = sg.is_connected() and sg.is_pseudomanifold() and H.betti == betti and H.torsion_free
        dt = time.perf_counter() - t0
        good = good and dt < 30
        ok = ok and good
        rows.append(f"{label} H={H.betti} {dt:.2f}s")
    record(1, ok, "; ".join(rows))
    assert ok


def test_criterion_2_twenty_four_points():
    full = load_instance_text(instance_json(PYRAMID))
    n_full = len(build_sigma(full.S, full.T).discriminant_vertices)
    sparse = load_instance_text(instance_json(PYRAMID, options={"nu_points": "vertices"}))
    n_sparse = len(build_sigma(sparse.S, sparse.T).discriminant_vertices)
    ok = n_full == 24 and n_sparse <= 24
    record(2, ok, f"|D| = {n_full} with all lattice points, {n_sparse} with a vertex-only T")
    assert ok


def test_criterion_3_monodromy_closed_form(corpus):
    atlas = Atlas()
    counts = {}
    ok = True
    for name in CORPUS:
        loops = primary_loops(_edges(corpus[name]))
        counts[name] = len(loops)
        ok = ok and all(atlas.monodromy([a, b, c, d, a]) == atlas.primary_formula(a, b, c, d) for a, b, c, d in loops)
    record(3, ok, "primary loops checked " + ", ".join(f"{k}={v}" for k, v in counts.items()))
    assert ok and counts["pyramid_d3"] == 192


def test_criterion_4_local_monodromy(sigmas):
    atlas = Atlas()
    n = 0
    ok = True
    for name in CORPUS:
        for s, t in sigmas[name].discriminant_vertices:
            lm = local_monodromy(s, t, atlas)
            k, l = lm.type
            n += 1
            ok = ok and len(lm.generators) == k * l and lm.commute and lm.square_zero
            ok = ok and lm.index == lm.vol_sigma * lm.vol_tau
    record(4, ok, f"{n} discriminant vertices, generators k*l, commuting, (M-I)^2 = 0, index = vol*vol")
    assert ok


def test_criterion_5_mirror(corpus, sigmas):
    ok = True
    for name in CORPUS:
        _, rep = mirror_model(sigmas[name])
        ok = ok and rep.ok and mirror_transition_check(_edges(corpus[name]))
    record(5, ok, "mirror complex isomorphic with D, types and transitions swapped on all instances")
    assert ok


@pytest.fixture(scope="module")
def qe_reports(corpus):
    out = {}
    for name in CORPUS:
        inst = corpus[name]
        sp = spine(inst.delta, inst.lam)
        out[name] = (sp, qe_report(sp, inst.T.vertices, item1_subsets=_item1_subsets(sp)))
    return out


def _item1_subsets(sp):
    # all subsets up to size d+1 for d <= 3; for d = 4 the labels and their one-point extensions
    dom = sp.lam.domain
    k = sp.delta.d + 1
    if sum(math.comb(len(dom), r) for r in range(1, k + 1)) <= 6000:
        return [c for r in range(1, k + 1) for c in itertools.combinations(dom, r)]
    subs = set(sp.labels) | set(itertools.combinations(dom, 2))
    for lab in sp.labels:
        subs.update(tuple(sorted(lab + (m,))) for m in dom if m not in lab and len(lab) < k)
    return sorted(subs, key=lambda s: (len(s), s))


@pytest.mark.xfail(
    strict=True,
    reason="Qe item (3) equality fails on the pyramid pair with seed-0 heights; "
    "the closure strictly contains the Minkowski sum for the four upper vertices of T",
)
def test_criterion_6_q_cells(qe_reports):
    parts = []
    ok = True
    for name, (sp, rep) in qe_reports.items():
        mink = all(verify_qcell_minkowski(sp, c) for c in sp.cells)
        good = mink and rep.item1 and rep.item2 and rep.item3_weak and rep.item3_equal
        ok = ok and good
        bad = [r.w for r in rep.item3 if not r.equal]
        parts.append(f"{name} {'ok' if good else f'item3 equality fails at {bad}'}")
    record(6, ok, "; ".join(parts))
    assert ok


def test_criterion_6_parts_that_hold(qe_reports):
    """Everything in criterion 6 except the item (3) equality holds on the whole corpus."""
    for name, (sp, rep) in qe_reports.items():
        assert all(verify_qcell_minkowski(sp, c) for c in sp.cells), name
        assert rep.item1 and rep.item2 and rep.item3_weak, name
    assert qe_reports["cubic_d2"][1].item3_equal and qe_reports["simplex_d4"][1].item3_equal


def test_criterion_7_hausdorff_convergence():
    t0 = time.perf_counter()
    inst = LaurentInstance.from_heights(RUNNING, math.e**2)
    rows = convergence_experiment(inst, grid=(300, 48))
    h = [r.hausdorff for r in rows]
    strictly = all(b < a for a, b in zip(h, h[1:]))
    slack = all(b <= 1.1 * a for a, b in zip(h, h[1:]))
    # exact case: a binomial's amoeba is its spine
    binom = LaurentInstance.from_heights({(0, 0): 0, (1, 0): 0}, math.e**3)
    window = (-3, -3, 3, 3)
    sup, _ = distance_to_spine(sample_amoeba(binom, window, (60, 16)), HeightFunction({(0, 0): 0, (1, 0): 0}), window)
    dt = time.perf_counter() - t0
    ok = strictly and slack and sup == 0.0 and dt < 60
    record(7, ok, "hausdorff " + " > ".join(f"{x:.3f}" for x in h) + f", binomial sup {sup}, {dt:.1f}s")
    assert ok


_SQUARE = [(-1, -1), (-1, 1), (1, -1), (1, 1)]


def test_criterion_8_subdivision_identities():
    ok = True
    # barycentric subdivision by a point: f-vector counts chains by length
    for pts in ([(0, 0), (1, 0), (0, 1)], _SQUARE, PYRAMID):
        Q = Polyhedron.from_vrep(pts)
        poset, _ = nonempty_face_poset(Q)
        chains = poset.chains() if len(poset) > 16 else oracles.subset_chains(poset.elements, poset.leq)
        fv = geometric_bsd(Q, Polyhedron.from_vrep([(0,) * Q.d])).f_vector()
        ok = ok and fv == tuple(sum(1 for c in chains if len(c) == k + 1) for k in range(Q.d + 1))
    # pull equals the subdivision of its own heights
    pulled = pull(trivial_subdivision(_SQUARE), [(Fraction(-1, 2), 0), (Fraction(1, 2), 0)])
    h = pulled.heights.values
    ok = ok and {frozenset(c) for c in pulled.cells} == oracles.upper_envelope_cells(list(h), h)
    # combinatorial bsd sizes against a dynamic-programming count
    posets = [
        nonempty_face_poset(Polyhedron.from_vrep(list(itertools.product((0, 1), repeat=3))))[0],
        Poset.from_sets(frozenset(s) for r in range(1, 6) for s in itertools.combinations(range(5), r)),
        Poset.from_relation([k for k in range(1, 721) if 720 % k == 0], lambda a, b: b % a == 0, _omega),
    ]
    for Q in posets:
        assert len(Q) <= 50
        kappa = {q: q for q in Q}
        ok = ok and len(combinatorial_bsd(Q, kappa, Q)) == oracles.bsd_count(Q.elements, Q.leq, kappa, Q.elements, Q.leq)
    record(8, ok, "bsd f-vectors = chain counts, pull = height subdivision, bsd sizes = brute force")
    assert ok


def _omega(a: int) -> int:
    n, k = 0, 2
    while a > 1:
        while a % k == 0:
            a //= k
            n += 1
        k += 1
    return n


def test_criterion_9_nerve(sigmas):
    parts = []
    ok = True
    for name in CORPUS:
        sg = sigmas[name]
        rep = nerve_check(sg)
        G = sg.gamma()
        good = rep.ok and rep.nerve_b1 == len(G.edges) - len(G.left) - len(G.right) + 1
        ok = ok and good
        parts.append(f"{name} b1={rep.nerve_b1}")
    record(9, ok, "; ".join(parts))
    assert ok
