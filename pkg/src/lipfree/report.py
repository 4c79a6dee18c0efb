"""Analysis reports: building them, serializing them, and re-verifying them.

A report carries its input space, so ``verify_report`` can re-derive every
numeric claim without access to the original files.
"""

from __future__ import annotations

import hashlib
import json
from datetime import datetime, timezone
from fractions import Fraction
from itertools import combinations, permutations

from . import __version__
from .bm import bm_lower_certified, bm_lower_formula, midpoint_norm, peaking_family
from .errors import LipfreeError
from .extremal import (
    ISOMETRIC,
    NOT_HYPERBOLIC,
    NOT_ISOMETRIC,
    Certificate,
    apply_coordinates,
    ell1_verdict,
    extreme_molecules,
    godard_coordinates,
    is_extreme_lip,
    is_extreme_lip_lp,
    is_extreme_molecule_lp,
)
from .freespace import (
    FreeVector,
    LipFunction,
    beyond_points,
    free_norm,
    lip_norm,
    lip_norm_witness,
    molecule,
    pairing,
    transport_norm,
)
from .metric import (
    FiniteMetricSpace,
    diam,
    four_point_check,
    is_zero_hyperbolic,
    sep,
    sep_witness,
    ultrametric_violation,
)
from .rational import rational_json, to_fraction
from .tree import RealizedTree, branching_points, missing_branch_points, realize, tree_from_json

COMMANDS = ("check", "realize", "norm", "verdict", "bm")


class VerificationError(LipfreeError):
    pass


def _q(x) -> str:
    return str(Fraction(x))


def _rj(x) -> dict:
    return rational_json(Fraction(x))


def _val(node) -> Fraction:
    return to_fraction(node["value"] if isinstance(node, dict) else node)


def canonical_digest(M: FiniteMetricSpace) -> tuple[str, list[str]]:
    """SHA-256 of the space relabeled in sorted-label order, and that order."""
    order = sorted(M.points(), key=lambda i: M.labels[i])
    canon = M.permuted(order).to_json()
    blob = json.dumps(canon, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest(), [M.labels[i] for i in order]


# ------------------------------------------------------------ serialization

def _labels(M, pts):
    return [M.labels[p] for p in pts]


def function_json(M: FiniteMetricSpace, f) -> dict:
    vals = f.values if isinstance(f, LipFunction) else f
    return {M.labels[i]: _q(v) for i, v in enumerate(vals)}


def vector_json(M: FiniteMetricSpace, a: FreeVector) -> dict:
    return {M.labels[i]: _q(v) for i, v in a.coeffs.items()}


def certificate_json(cert: Certificate) -> dict:
    if cert.verdict == NOT_HYPERBOLIC:
        raise ValueError("use verdict_json, which knows the space")
    T = cert.tree
    M = T.space
    out = {"verdict": cert.verdict, "ultrametric": cert.ultrametric, "tree": T.to_json()}
    if cert.verdict == ISOMETRIC:
        out["coordinates"] = [
            {"edge": c["edge"], "length": _q(c["length"]), "beyond": _labels(M, c["beyond"])}
            for c in godard_coordinates(T)
        ]
        out["extreme_molecules"] = [_labels(M, p) for p in extreme_molecules(T)]
        return out
    p, d = cert.primal, cert.dual
    out["missing_branch_points"] = cert.missing
    out["branch_node"] = p.branch_node
    out["primal"] = {
        "mu": [M.labels[p.x], M.labels[p.y]],
        "nu": [M.labels[p.z], M.labels[p.y]],
        "distance": _rj(p.distance),
    }
    out["dual"] = {
        "anchor": M.labels[d.anchor],
        "z": M.labels[d.z],
        "f": function_json(M, d.f),
        "g": function_json(M, d.g),
        "distance": _rj(d.distance),
    }
    return out


def verdict_json(M: FiniteMetricSpace, cert: Certificate) -> dict:
    if cert.verdict == NOT_HYPERBOLIC:
        a, b, c, e = cert.quadruple
        return {
            "verdict": NOT_HYPERBOLIC,
            "quadruple": _labels(M, cert.quadruple),
            "lhs": _q(M.d(a, b) + M.d(c, e)),
            "rhs": _q(max(M.d(a, c) + M.d(b, e), M.d(b, c) + M.d(a, e))),
        }
    return certificate_json(cert)


def bm_json(M: FiniteMetricSpace, T: RealizedTree) -> dict:
    c = bm_lower_certified(T)
    return {
        "formula_bound": _rj(c.formula_bound),
        "certified_bound": _rj(c.certified_bound),
        "epsilon": _rj(c.epsilon),
        "floor_epsilon": _rj(c.floor_epsilon),
        "method": c.method,
        "selected": [_labels(M, p) for p in c.selected],
        "worst_pair": [_labels(M, p) for p in c.worst_pair],
        "worst_norm": _rj(c.worst_norm),
        "sep": _rj(sep(M)),
        "diam": _rj(diam(M)),
    }


# ----------------------------------------------------------------- commands

def run_command(command: str, M: FiniteMetricSpace, vector=None) -> dict:
    """Result payload of one command; deterministic in its inputs."""
    if command == "check":
        quad = four_point_check(M)
        uv = ultrametric_violation(M)
        out = {
            "n": M.n,
            "base": M.base_label,
            "zero_hyperbolic": quad is None,
            "four_point_violation": None if quad is None else _labels(M, quad),
            "ultrametric": uv is None,
            "ultrametric_violation": None if uv is None else _labels(M, uv),
            "diam": _rj(diam(M)),
            "sep": None,
            "sep_triple": None,
        }
        if M.n >= 3:
            out["sep"] = _rj(sep(M))
            out["sep_triple"] = _labels(M, sep_witness(M))
        return out
    if command == "realize":
        T = realize(M)
        return {
            "tree": T.to_json(),
            "branching_points": branching_points(T),
            "missing_branch_points": missing_branch_points(T),
        }
    if command == "norm":
        if isinstance(vector, FreeVector):
            res = transport_norm(M, vector)
            return {
                "kind": "free",
                "coeffs": vector_json(M, vector),
                "norm": _rj(res.value),
                "plan": [{"from": M.labels[x], "to": M.labels[y], "mass": _q(m)}
                         for x, y, m in res.plan],
                "dual": function_json(M, res.dual),
            }
        if isinstance(vector, LipFunction):
            norm, pair = lip_norm_witness(M, vector)
            out = {
                "kind": "lip",
                "values": function_json(M, vector),
                "norm": _rj(norm),
                "attained_at": None if pair is None else _labels(M, pair),
            }
            if norm <= 1:
                out["extreme"] = is_extreme_lip(M, vector)
            return out
        raise ValueError("norm needs a FreeVector or a LipFunction")
    if command == "verdict":
        return verdict_json(M, ell1_verdict(M))
    if command == "bm":
        return bm_json(M, realize(M))
    raise ValueError(f"unknown command {command!r}")


def make_report(command: str, M: FiniteMetricSpace, vector=None, timestamp: str | None = None) -> dict:
    digest, order = canonical_digest(M)
    inp = {"digest": digest, "canonical_order": order, "space": M.to_json()}
    if isinstance(vector, FreeVector):
        inp["vector"] = {"coeffs": vector_json(M, vector)}
    elif isinstance(vector, LipFunction):
        inp["vector"] = {"values": function_json(M, vector)}
    return {
        "tool": "lipfree",
        "version": __version__,
        "command": command,
        "timestamp": timestamp or datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "input": inp,
        "result": run_command(command, M, vector),
    }


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


# ------------------------------------------------------------- verification

def _expect(cond, msg, failures):
    if not cond:
        failures.append(msg)


def verify_certificate(M: FiniteMetricSpace, cert: dict) -> list[str]:
    """Independently re-check a verdict payload; returns the failed claims."""
    fails: list[str] = []
    idx = M.index
    verdict = cert.get("verdict")
    if verdict == NOT_HYPERBOLIC:
        a, b, c, e = (idx(l) for l in cert["quadruple"])
        lhs = M.d(a, b) + M.d(c, e)
        rhs = max(M.d(a, c) + M.d(b, e), M.d(b, c) + M.d(a, e))
        _expect(lhs == _val(cert["lhs"]) and rhs == _val(cert["rhs"]), "quadruple sums differ", fails)
        _expect(lhs > rhs, "quadruple does not violate the four-point condition", fails)
        return fails

    try:
        T = tree_from_json(M, cert["tree"])
    except (LipfreeError, ValueError) as exc:
        return [f"tree invalid: {exc}"]

    if verdict == ISOMETRIC:
        _expect(not any(T.is_steiner(v) for v in branching_points(T)),
                "tree has a Steiner branching node", fails)
        coords = [{"edge": c["edge"], "length": _val(c["length"]),
                   "beyond": [idx(l) for l in c["beyond"]]} for c in cert["coordinates"]]
        _expect(len(coords) == M.n - 1, "coordinate count is not |M| - 1", fails)
        _expect([sorted(c["beyond"]) for c in coords] == beyond_points(T),
                "coordinate supports disagree with the tree", fails)
        for x, y in permutations(M.points(), 2):
            a = molecule(M, x, y)
            l1 = sum((abs(v) for v in apply_coordinates(coords, M, a)), Fraction(0))
            if l1 != free_norm(M, a):
                fails.append(f"coordinates not isometric on molecule {M.labels[x]},{M.labels[y]}")
                break
        claimed = {tuple(sorted(idx(l) for l in p)) for p in cert["extreme_molecules"]}
        lp_ext = {(x, y) for x, y in combinations(M.points(), 2) if is_extreme_molecule_lp(M, x, y)}
        _expect(claimed == lp_ext, "extreme molecule list disagrees with the vertex LP", fails)
        _expect(len(claimed) == M.n - 1, "extreme molecule count is not |M| - 1", fails)
        return fails

    if verdict == NOT_ISOMETRIC:
        b = cert["branch_node"]
        _expect(b in missing_branch_points(T), "branch node is not a missing branching point", fails)
        p = cert["primal"]
        x, y = (idx(l) for l in p["mu"])
        z, y2 = (idx(l) for l in p["nu"])
        _expect(y == y2, "molecules do not share their second point", fails)
        dist = free_norm(M, molecule(M, x, y) - molecule(M, z, y2))
        _expect(dist == _val(p["distance"]), "primal distance does not re-verify", fails)
        _expect(dist <= 1, "primal distance exceeds 1", fails)
        _expect(is_extreme_molecule_lp(M, x, y) and is_extreme_molecule_lp(M, z, y2),
                "primal molecules are not extreme", fails)
        d = cert["dual"]
        f = LipFunction(tuple(to_fraction(d["f"][l]) for l in M.labels))
        g = LipFunction(tuple(to_fraction(d["g"][l]) for l in M.labels))
        _expect(f.values[M.base] == 0 and g.values[M.base] == 0, "dual functions do not vanish at base", fails)
        _expect(f != g, "dual functions coincide", fails)
        dl = lip_norm(M, f - g)
        _expect(dl == _val(d["distance"]), "dual distance does not re-verify", fails)
        _expect(dl < 2, "dual distance is not below 2", fails)
        for name, h in (("f", f), ("g", g)):
            if lip_norm(M, h) != 1:
                fails.append(f"dual {name} does not have norm 1")
            elif not (is_extreme_lip(M, h) and is_extreme_lip_lp(M, h)):
                fails.append(f"dual {name} is not extreme")
        return fails
    return [f"unknown verdict {verdict!r}"]


def _verify_bm(M: FiniteMetricSpace, res: dict) -> list[str]:
    fails: list[str] = []
    T = realize(M)
    fam = peaking_family(T)
    sel = [tuple(M.index(l) for l in p) for p in res["selected"]]
    _expect(len(sel) == 2 * (M.n - 1) + 1 and len(set(sel)) == len(sel),
            "selected family does not have 2n + 1 distinct members", fails)
    for key in sel:
        _expect(lip_norm(M, fam[key]) == 1, f"f{key} is not on the unit sphere", fails)
    worst = max(midpoint_norm(M, fam[a], fam[b]) for a, b in combinations(sel, 2))
    _expect(worst == _val(res["worst_norm"]), "maximal midpoint norm does not re-verify", fails)
    wa, wb = (tuple(M.index(l) for l in p) for p in res["worst_pair"])
    _expect(midpoint_norm(M, fam[wa], fam[wb]) == worst, "worst pair does not attain the maximum", fails)
    _expect(_val(res["epsilon"]) == 1 - worst, "epsilon mismatch", fails)
    _expect(_val(res["certified_bound"]) == 1 / worst, "certified bound mismatch", fails)
    formula = bm_lower_formula(M)
    _expect(_val(res["formula_bound"]) == formula, "formula bound mismatch", fails)
    _expect(1 / worst >= formula > 1, "certified bound below formula bound", fails)
    return fails


def _verify_norm(M: FiniteMetricSpace, res: dict, vector) -> list[str]:
    fails: list[str] = []
    if isinstance(vector, FreeVector):
        masses = vector.masses(M)
        flow = [Fraction(0)] * M.n
        cost = Fraction(0)
        for step in res["plan"]:
            x, y, m = M.index(step["from"]), M.index(step["to"]), to_fraction(step["mass"])
            _expect(m > 0, "plan has a non-positive mass", fails)
            flow[x] += m
            flow[y] -= m
            cost += m * M.d(x, y)
        _expect(flow == masses, "plan marginals differ from the vector", fails)
        norm = _val(res["norm"])
        _expect(cost == norm, "plan cost differs from the claimed norm", fails)
        dual = LipFunction(tuple(to_fraction(res["dual"][l]) for l in M.labels))
        _expect(lip_norm(M, dual) <= 1, "dual certificate is not 1-Lipschitz", fails)
        _expect(pairing(M, vector, dual) == norm, "dual pairing differs from the norm", fails)
    else:
        _expect(lip_norm(M, vector) == _val(res["norm"]), "Lipschitz norm does not re-verify", fails)
    return fails


def verify_report(report: dict) -> list[str]:
    """Re-derive every claim in a stored report. Empty list means pass."""
    from .io import space_from_json, vector_from_json

    try:
        inp = report["input"]
        command = report["command"]
        M = space_from_json(inp["space"])
        vector = vector_from_json(M, inp["vector"]) if "vector" in inp else None
    except (KeyError, TypeError, LipfreeError) as exc:
        return [f"report is malformed: {exc}"]
    fails: list[str] = []
    digest, _ = canonical_digest(M)
    _expect(digest == inp.get("digest"), "input digest mismatch", fails)
    res = report.get("result")
    try:
        _expect(run_command(command, M, vector) == res, "result is not reproduced by re-running", fails)
        if command == "verdict":
            fails += verify_certificate(M, res)
        elif command == "bm":
            fails += _verify_bm(M, res)
        elif command == "norm":
            fails += _verify_norm(M, res, vector)
        elif command == "realize":
            tree_from_json(M, res["tree"])
        elif command == "check":
            _expect(res["zero_hyperbolic"] == is_zero_hyperbolic(M), "hyperbolicity flag wrong", fails)
    except (KeyError, TypeError, ValueError) as exc:
        fails.append(f"claim could not be checked: {exc}")
    return fails
