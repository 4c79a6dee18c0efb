"""Acceptance gate: one test per criterion, each logging a pass/fail line."""

from fractions import Fraction
from itertools import combinations, permutations
import json
import random

import pytest

from lipfree import (
    FreeVector,
    LipFunction,
    NotZeroHyperbolic,
    SeparationZero,
    bm_lower_certified,
    bm_lower_formula,
    diam,
    dual_witness,
    ell1_verdict,
    extend_inf,
    extend_sup,
    four_point_check,
    free_norm,
    free_norm_lp,
    free_norm_tree,
    godard_embed,
    is_extreme_lip,
    is_extreme_lip_lp,
    lip_norm,
    missing_branch_points,
    molecule,
    pairing,
    primal_witness,
    realize,
    sep,
    transport_norm,
    tree_distance,
    validate_metric,
)
from lipfree.bm import peaking_family
from lipfree.cli import main
from lipfree.extremal import (
    NOT_HYPERBOLIC,
    NOT_ISOMETRIC,
    extreme_molecules,
    is_extreme_molecule_lp,
    is_extreme_molecule_segment,
)
from lipfree.generate import cycle_metric, gen_instance
from lipfree.report import make_report

from oracles import brute_force_transport, four_point_brute, nx_tree_metric, nx_ultrametric

pytestmark = pytest.mark.acceptance


def record(log, number, failures, detail):
    status = "PASS" if not failures else "FAIL"
    line = f"[{status}] criterion {number}: {detail}"
    if failures:
        line += f" ({len(failures)} failures, first: {failures[0]})"
    log.append(line)
    print(line)
    assert not failures, line


def random_vector(rng, M):
    return FreeVector({i: Fraction(rng.randint(-6, 6), rng.randint(1, 4))
                       for i in M.points() if i != M.base})


def tree_corpus():
    rng = random.Random("acceptance-trees")
    out = []
    for k in range(220):
        n = 4 + k % 9
        out.append(nx_tree_metric(rng, n, leaves_only=(k % 3 == 0)))
    return out


TREES = tree_corpus()


def brute_lip(M, vals):
    return max(abs(vals[x] - vals[y]) / M.d(x, y) for x, y in permutations(M.points(), 2))


# ------------------------------------------------------------------ 1

def test_criterion_1_roundtrip(acceptance_log):
    fails = []
    for k, M in enumerate(TREES):
        if four_point_check(M) is not None or four_point_brute(M.dist) is not None:
            fails.append(f"instance {k}: four-point check failed")
            continue
        T = realize(M)
        for x, y in combinations(M.points(), 2):
            if tree_distance(T, x, y) != M.d(x, y):
                fails.append(f"instance {k}: d({x},{y}) not reproduced")
    sizes = sorted({M.n for M in TREES})
    record(acceptance_log, 1, fails,
           f"{len(TREES)} random tree metrics ({sizes[0]}-{sizes[-1]} points) realized exactly")


# ------------------------------------------------------------------ 2

def test_criterion_2_norm_oracles(acceptance_log):
    rng = random.Random("acceptance-norms")
    fails = []
    brute = 0
    for k, M in enumerate(TREES):
        T = realize(M)
        for r in range(3):
            a = random_vector(rng, M)
            res = transport_norm(M, a)
            tree = free_norm_tree(T, a)
            if res.value != tree:
                fails.append(f"instance {k}: transport {res.value} != tree {tree}")
            if r == 0 and free_norm_lp(M, a) != res.value:
                fails.append(f"instance {k}: flow simplex disagrees")
            if M.n <= 6:
                brute += 1
                if brute_force_transport(M.dist, a.masses(M)) != res.value:
                    fails.append(f"instance {k}: brute force disagrees")
            if pairing(M, a, res.dual) != res.value or brute_lip(M, res.dual.values) > 1:
                fails.append(f"instance {k}: dual certificate invalid")
    record(acceptance_log, 2, fails,
           f"transport = flow simplex = tree norm on {len(TREES)} instances, "
           f"brute force on {brute} vectors (<= 6 points), dual certificates tight")


# ------------------------------------------------------------------ 3

def test_criterion_3_godard(acceptance_log):
    rng = random.Random("acceptance-godard")
    fails = []
    count = 0
    for k in range(60):
        M = nx_tree_metric(rng, 3 + k % 8, extra=0 if k % 2 else None)
        T = realize(M)
        if missing_branch_points(T):
            continue
        count += 1
        if len(godard_embed(T, FreeVector({}))) != M.n - 1:
            fails.append(f"instance {k}: wrong coordinate count")
        for _ in range(50):
            a = random_vector(rng, M)
            if sum(abs(c) for c in godard_embed(T, a)) != free_norm(M, a):
                fails.append(f"instance {k}: l1 norm differs from free norm")
                break
        ext = [(x, y) for x, y in combinations(M.points(), 2) if is_extreme_molecule_lp(M, x, y)]
        if len(ext) != M.n - 1 or len(extreme_molecules(T)) != M.n - 1:
            fails.append(f"instance {k}: {len(ext)} extreme molecules, expected {M.n - 1}")
        signed = [s * molecule(M, x, y) for x, y in ext for s in (1, -1)]
        for u, v in combinations(signed, 2):
            if free_norm(M, u - v) != 2:
                fails.append(f"instance {k}: extreme points not at distance 2")
                break
    if count < 20:
        fails.append(f"only {count} instances without missing branch points")
    record(acceptance_log, 3, fails,
           f"{count} trees without missing branch points: |M|-1 coordinates, "
           f"isometry on 50 vectors each, |M|-1 extreme molecules pairwise at distance 2")


# ------------------------------------------------------------------ 4

def test_criterion_4_witnesses(acceptance_log, tmp_path, capsys):
    rng = random.Random("acceptance-witness")
    fails = []
    spaces = [nx_ultrametric(rng, 3 + k % 6) for k in range(20)]
    spaces += [nx_tree_metric(rng, 4 + k % 5, leaves_only=True) for k in range(30)]
    checked = 0
    for k, M in enumerate(spaces):
        T = realize(M)
        missing = missing_branch_points(T)
        if not missing:
            continue
        for b in missing:
            checked += 1
            p = primal_witness(T, b)
            for name, (x, y) in (("mu", (p.x, p.y)), ("nu", (p.z, p.y))):
                if not is_extreme_molecule_lp(M, x, y):
                    fails.append(f"instance {k}: {name} not extreme")
            if free_norm(M, p.mu(M) - p.nu(M)) > 1:
                fails.append(f"instance {k}: primal distance exceeds 1")
            w = dual_witness(T, b)
            for name, h in (("f", w.f), ("g", w.g)):
                if brute_lip(M, h.values) != 1 or not is_extreme_lip_lp(M, h) or not is_extreme_lip(M, h):
                    fails.append(f"instance {k}: {name} not an extreme unit function")
            if not brute_lip(M, (w.f - w.g).values) < 2:
                fails.append(f"instance {k}: dual distance not below 2")
        path = tmp_path / f"verdict{k}.json"
        path.write_text(json.dumps(make_report("verdict", M)))
        if main(["verify", str(path)]) != 0:
            fails.append(f"instance {k}: stored verdict failed verification")
        capsys.readouterr()
    record(acceptance_log, 4, fails,
           f"{checked} missing branch points: primal <= 1 and dual < 2 with extreme witnesses, "
           f"reports re-verified")


# ------------------------------------------------------------------ 5

def test_criterion_5_ultrametrics(acceptance_log):
    rng = random.Random("acceptance-ultra")
    fails = []
    spaces = [nx_ultrametric(rng, 3 + k % 8) for k in range(100)]
    spaces += [gen_instance("random-ultrametric", 3 + k % 8, k) for k in range(40)]
    for k, M in enumerate(spaces):
        cert = ell1_verdict(M)
        if cert.verdict != NOT_ISOMETRIC or not cert.missing:
            fails.append(f"instance {k}: verdict {cert.verdict}")
    record(acceptance_log, 5, fails,
           f"{len(spaces)} random ultrametrics (3-10 points) are NotIsometric with missing branch points")


# ------------------------------------------------------------------ 6

def test_criterion_6_banach_mazur(acceptance_log):
    fails = []
    M3 = validate_metric(["0", "a", "b"], "0", [[0, 1, 1], [1, 0, 1], [1, 1, 0]])
    if bm_lower_formula(M3) != Fraction(8, 7):
        fails.append("M3 formula bound is not 8/7")
    c = bm_lower_certified(realize(M3))
    if c.certified_bound < Fraction(4, 3):
        fails.append(f"M3 certified bound {c.certified_bound} < 4/3")

    rng = random.Random("acceptance-bm")
    spaces = []
    while len(spaces) < 30:
        k = len(spaces)
        M = nx_ultrametric(rng, 3 + k % 4) if k % 2 else nx_tree_metric(rng, 3 + k % 4, leaves_only=True)
        if M.n >= 3 and sep(M) > 0:
            spaces.append(M)
    for k, M in enumerate(spaces):
        cert = bm_lower_certified(realize(M))
        if not cert.certified_bound >= cert.formula_bound > 1:
            fails.append(f"instance {k}: bounds out of order")
        fam = peaking_family(realize(M))
        norms = {}
        for a, b in combinations(cert.selected, 2):
            norms[(a, b)] = brute_lip(M, ((fam[a] + fam[b]) * Fraction(1, 2)).values)
        if len(cert.selected) != 2 * (M.n - 1) + 1 or max(norms.values()) != cert.worst_norm:
            fails.append(f"instance {k}: claimed midpoint norms do not re-verify")
        if cert.certified_bound != 1 / cert.worst_norm:
            fails.append(f"instance {k}: certified bound inconsistent")
        if cert.worst_norm > 1 - sep(M) / (2 * diam(M)):
            fails.append(f"instance {k}: midpoint above the separation bound")

    rng = random.Random("acceptance-linf")
    grid = [Fraction(k, 4) for k in range(-6, 7)]
    for n in range(1, 5):
        for _ in range(300):
            fam = []
            for _ in range(60):
                v = [rng.choice(grid) for _ in range(n)]
                if max(map(abs, v)) >= 1 and all(
                        max(abs(a + b) / 2 for a, b in zip(v, u)) < 1 for u in fam):
                    fam.append(v)
            if len(fam) > 2 * n:
                fails.append(f"l_inf^{n}: family of size {len(fam)}")
    record(acceptance_log, 6, fails,
           f"M3 bounds 8/7 and {c.certified_bound}; {len(spaces)} separated instances certified "
           f">= formula > 1; no l_inf^n family above 2n for n <= 4")


# ------------------------------------------------------------------ 7

def lipschitz_corpus(rng, M):
    """Unit-ball functions of several flavors, extreme and not."""
    base = M.base
    out = []
    pts = list(M.points())
    x = rng.choice(pts)
    out.append(LipFunction(tuple(M.d(x, w) - M.d(x, base) for w in pts)))
    A = sorted(set(rng.sample(pts, rng.randint(1, len(pts)))) | {base})
    vals = {a: Fraction(0) if a == base else M.d(base, a) * Fraction(rng.randint(-4, 4), 4) for a in A}
    if brute_lip_sub(M, vals) <= 1:
        ext = extend_sup if rng.random() < 0.5 else extend_inf
        out.append(ext(M, A, vals))
    raw = [Fraction(0) if w == base else Fraction(rng.randint(-20, 20), rng.randint(1, 5)) for w in pts]
    L = brute_lip(M, raw)
    if L:
        out.append(LipFunction(tuple(v / L for v in raw)))
    f, g = out[0], out[-1]
    t = Fraction(rng.randint(1, 3), 4)
    out.append(f * t + g * (1 - t))
    return out


def brute_lip_sub(M, vals):
    keys = list(vals)
    if len(keys) < 2:
        return Fraction(0)
    return max(abs(vals[a] - vals[b]) / M.d(a, b) for a, b in combinations(keys, 2))


def test_criterion_7_extremality(acceptance_log):
    rng = random.Random("acceptance-extremality")
    fails = []
    molecules = 0
    trees = [nx_tree_metric(rng, 3 + k % 6, leaves_only=bool(k % 2)) for k in range(40)]
    trees += [nx_ultrametric(rng, 3 + k % 6) for k in range(20)]
    for k, M in enumerate(trees):
        T = realize(M)
        for x, y in combinations(M.points(), 2):
            molecules += 1
            if is_extreme_molecule_lp(M, x, y) != is_extreme_molecule_segment(T, x, y):
                fails.append(f"instance {k}: molecule ({x},{y}) classified differently")

    funcs = extreme = 0
    spaces = trees + [gen_instance("perturbed-non-hyperbolic", 4 + k % 4, k) for k in range(30)]
    while funcs < 520:
        M = rng.choice(spaces)
        for f in lipschitz_corpus(rng, M):
            funcs += 1
            a, b = is_extreme_lip(M, f), is_extreme_lip_lp(M, f)
            extreme += a
            if a != b:
                fails.append(f"function {f.values} on {M.labels}: tight graph {a}, LP {b}")
    if not (100 <= extreme <= funcs - 100):
        fails.append(f"corpus not mixed: {extreme} extreme of {funcs}")
    record(acceptance_log, 7, fails,
           f"LP vertex test = segment criterion on {molecules} molecules; tight graph = "
           f"perturbation LP on {funcs} functions ({extreme} extreme)")


# ------------------------------------------------------------------ 8

def test_criterion_8_negative_controls(acceptance_log, tmp_path, capsys):
    fails = []
    C4 = validate_metric(["p0", "p1", "p2", "p3"], "p0",
                         [[0, 1, 2, 1], [1, 0, 1, 2], [2, 1, 0, 1], [1, 2, 1, 0]])
    rng = random.Random("acceptance-cycles")
    cycles = [C4] + [cycle_metric(4 + k % 6, rng) for k in range(30)]
    for k, M in enumerate(cycles):
        cert = ell1_verdict(M)
        if cert.verdict != NOT_HYPERBOLIC or cert.quadruple is None:
            fails.append(f"cycle {k}: verdict {cert.verdict}")
            continue
        a, b, c, d = cert.quadruple
        if not M.d(a, b) + M.d(c, d) > max(M.d(a, c) + M.d(b, d), M.d(b, c) + M.d(a, d)):
            fails.append(f"cycle {k}: quadruple does not violate the condition")
        try:
            realize(M)
            fails.append(f"cycle {k}: realized a non-hyperbolic space")
        except NotZeroHyperbolic:
            pass

    rng = random.Random("acceptance-sep0")
    flat = [validate_metric(["0", "1", "2"], "0", [[0, 1, 2], [1, 0, 1], [2, 1, 0]])]
    while len(flat) < 20:
        M = nx_tree_metric(rng, 4 + len(flat) % 5, extra=0)
        if sep(M) == 0:
            flat.append(M)
    for k, M in enumerate(flat):
        for fn in (bm_lower_formula, lambda M: bm_lower_certified(realize(M))):
            try:
                fn(M)
                fails.append(f"flat {k}: produced a bound with sep = 0")
            except SeparationZero:
                pass
        path = tmp_path / f"flat{k}.json"
        path.write_text(json.dumps(M.to_json()))
        if main(["bm", str(path)]) != 2:
            fails.append(f"flat {k}: CLI did not report invalid input")
        capsys.readouterr()
    record(acceptance_log, 8, fails,
           f"{len(cycles)} cycle metrics give NotZeroHyperbolic with a violating quadruple; "
           f"{len(flat)} sep = 0 inputs raise SeparationZero")
