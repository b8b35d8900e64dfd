"""Recompute every published fixture and compare with its expected values."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations

import numpy as np

from . import numkit as nk
from .companion import companion_of, diagonalizability_report
from .document import parse_complex
from .errors import PolyspecError
from .gen import PaperFixture, fixtures
from .hoffman import best_matching, cost_matrix, hw_type_check
from .matpoly import classify, polyeig
from .numkit import DEFAULT_TOL, Tolerances

# Comparison thresholds for published values: exact integers are compared at
# EXACT_TOL, printed irrational eigenvalues at VALUE_TOL, and rounded printed
# lower bounds are allowed ROUNDING_TOL of slack.
EXACT_TOL = 1e-9
VALUE_TOL = 1e-6
ROUNDING_TOL = 1e-3


@dataclass
class Check:
    name: str
    ok: bool
    detail: str = ""


@dataclass
class FixtureResult:
    id: str
    title: str
    checks: list = field(default_factory=list)
    error: str | None = None

    @property
    def passed(self) -> bool:
        return self.error is None and all(c.ok for c in self.checks)

    def to_dict(self) -> dict:
        out = {
            "id": self.id,
            "status": "PASS" if self.passed else "FAIL",
            "checks": [{"name": c.name, "ok": c.ok, "detail": c.detail} for c in self.checks],
        }
        if self.error:
            out["error"] = self.error
        return out


def _multiset_gap(found, wanted) -> float:
    """Largest |found - wanted| under the optimal pairing."""
    a = np.asarray(found, dtype=np.complex128)
    b = np.asarray(wanted, dtype=np.complex128)
    perm = best_matching(a, b).permutation
    return float(max(abs(a[i] - b[j]) for i, j in enumerate(perm)))


def _values(raw) -> np.ndarray:
    return np.array([parse_complex(z) for z in raw], dtype=np.complex128)


def _check_pair(fx: PaperFixture, tol: Tolerances, out: list):
    p, q = fx.payload["pair"]
    c, d = companion_of(p), companion_of(q)
    exp = fx.expected
    lam, mu = nk.eigvals(c), nk.eigvals(d)
    for key, found in (("eigenvalues_c", lam), ("eigenvalues_d", mu)):
        if key in exp:
            gap = _multiset_gap(found, _values(exp[key]))
            out.append(Check(key, gap <= VALUE_TOL, f"max deviation {gap:.3e}"))
    frob_sq = nk.frobenius_norm(c - d) ** 2
    if "frob_sq" in exp:
        out.append(Check("frob_sq", abs(frob_sq - exp["frob_sq"]) <= EXACT_TOL, f"{frob_sq:.12g}"))
    if "every_permutation_cost" in exp:
        cm = cost_matrix(lam, mu)
        costs = [sum(cm[i, j] for i, j in enumerate(pm)) for pm in permutations(range(len(lam)))]
        worst = max(abs(x - exp["every_permutation_cost"]) for x in costs)
        out.append(Check("every_permutation_cost", worst <= EXACT_TOL,
                         f"{len(costs)} permutations, max deviation {worst:.3e}"))
    best = best_matching(lam, mu).cost
    if "best_cost_min" in exp:
        out.append(Check("best_cost_min", best >= exp["best_cost_min"] - ROUNDING_TOL, f"{best:.6f}"))
    if {"holds_plain", "holds_kappa", "kappa_sq_max"} & exp.keys():
        rep = hw_type_check(c, d, tol=tol)
        for key in ("holds_plain", "holds_kappa"):
            if key in exp:
                out.append(Check(key, getattr(rep, key) == exp[key], str(getattr(rep, key))))
        if "kappa_sq_max" in exp:
            out.append(Check("kappa_sq_max", rep.kappa_sq < exp["kappa_sq_max"], f"{rep.kappa_sq:.6f}"))


def _check_single(fx: PaperFixture, tol: Tolerances, out: list):
    exp = fx.expected
    for k, p in enumerate(fx.payload["polynomials"]):
        tag = f"[{k}]" if len(fx.payload["polynomials"]) > 1 else ""
        c = companion_of(p)
        eig = polyeig(p, tol)
        if "diagonalizable" in exp or "clusters" in exp:
            rep = diagonalizability_report(c, tol)
            if "diagonalizable" in exp:
                out.append(Check("diagonalizable" + tag, rep.diagonalizable == exp["diagonalizable"],
                                 str(rep.diagonalizable)))
            for want in exp.get("clusters", []):
                z = parse_complex(want["value"])
                hit = [cl for cl in rep.clusters if abs(cl.value - z) <= VALUE_TOL]
                ok = len(hit) == 1 and (hit[0].algebraic, hit[0].geometric) == (
                    want["algebraic"], want["geometric"])
                detail = f"{(hit[0].algebraic, hit[0].geometric)}" if hit else "missing"
                out.append(Check(f"cluster {z:g}{tag}", ok, detail))
        if "commuting_family" in exp:
            fam = classify(p, tol).commuting_family
            out.append(Check("commuting_family" + tag, fam == exp["commuting_family"], str(fam)))
        if "eigenvalues" in exp:
            gap = _multiset_gap(eig.values, _values(exp["eigenvalues"]))
            out.append(Check("eigenvalues" + tag, gap <= VALUE_TOL, f"max deviation {gap:.3e}"))
        if "contains_eigenvalue" in exp:
            z = parse_complex(exp["contains_eigenvalue"])
            dist = float(np.min(np.abs(eig.values - z)))
            out.append(Check("contains_eigenvalue" + tag, dist <= VALUE_TOL, f"distance {dist:.3e}"))
        if "min_modulus_below" in exp:
            out.append(Check("min_modulus_below" + tag, eig.min_modulus < exp["min_modulus_below"],
                             f"{eig.min_modulus:.6f}"))
        if "max_modulus" in exp:
            out.append(Check("max_modulus" + tag, abs(eig.max_modulus - exp["max_modulus"]) <= VALUE_TOL,
                             f"{eig.max_modulus:.6f}"))
        if "max_modulus_above" in exp:
            out.append(Check("max_modulus_above" + tag, eig.max_modulus > exp["max_modulus_above"],
                             f"{eig.max_modulus:.6f}"))
        if "eigenvectors" in exp:
            vals = _values(exp["eigenvectors"]["values"])
            vecs = np.column_stack([_values(v) for v in exp["eigenvectors"]["vectors"]])
            res = max(nk.frobenius_norm(c @ vecs[:, j] - vals[j] * vecs[:, j]) for j in range(len(vals)))
            rank = nk.rank_tol(vecs, tol)
            out.append(Check("eigenvectors" + tag, res <= tol.tol_verify and rank == c.shape[0],
                             f"max residual {res:.3e}, rank {rank}"))


def check_fixture(fx: PaperFixture, tol: Tolerances = DEFAULT_TOL) -> FixtureResult:
    """Never raises on numerical or shape trouble: failures become a FAIL with the error text."""
    result = FixtureResult(fx.id, fx.title)
    try:
        if "pair" in fx.payload:
            _check_pair(fx, tol, result.checks)
        else:
            _check_single(fx, tol, result.checks)
    except (PolyspecError, ValueError) as exc:
        result.error = f"{type(exc).__name__}: {exc}"
    return result


def reproduce(only=None, tol: Tolerances = DEFAULT_TOL) -> list:
    wanted = set(only) if only else None
    chosen = [fx for fx in fixtures() if wanted is None or fx.id in wanted]
    if wanted is not None:
        unknown = wanted - {fx.id for fx in chosen}
        if unknown:
            raise KeyError(", ".join(sorted(unknown)))
    return [check_fixture(fx, tol) for fx in chosen]
