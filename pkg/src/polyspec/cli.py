"""polyspec command line: analyze, hw, reproduce, campaign.

Exit codes: 0 success, 1 fixture failure, 2 parse or usage error,
3 numeric or hypothesis failure, 4 anomaly or counterexample.
"""
from __future__ import annotations

import functools
import json
import os
from dataclasses import replace

import click
import numpy as np

from . import numkit as nk
from .campaign import THEOREMS, CampaignConfig, run_campaign
from .companion import (
    companion_of,
    diagonalizability_report,
    diagonalize_commuting_unitary_quadratic,
    ds_2x2_linear_companion,
    ds_2x2_quadratic_spectrum,
)
from .document import dump_complex, load_input, read_json
from .errors import InvalidSpec, NotDiagonalizable, ParseError, PolyspecError
from .gen import FIXTURE_IDS
from .hoffman import hw_type_check, kappa_linear_pd, linear_pd_diagonalizer
from .matpoly import MatrixPolynomial, Tag, classify, is_diagonal, monicize, polyeig
from .numkit import DEFAULT_TOL, Tolerances
from .reproduce import reproduce

EXIT_OK, EXIT_FIXTURE, EXIT_PARSE, EXIT_NUMERIC, EXIT_ANOMALY = range(5)
SEED_ENV = "POLYSPEC_SEED"


def _default(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, complex):
        return dump_complex(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def emit(obj) -> None:
    click.echo(json.dumps(obj, indent=2, default=_default, allow_nan=False))


def _fail(code: int, message: str):
    click.echo(f"error: {message}", err=True)
    raise SystemExit(code)


def guarded(fn):
    """Map library exceptions onto the exit-code contract."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except (ParseError, InvalidSpec) as exc:
            _fail(EXIT_PARSE, str(exc))
        except PolyspecError as exc:
            _fail(EXIT_NUMERIC, f"{type(exc).__name__}: {exc}")

    return wrapper


def tolerance_options(fn):
    for name, default in reversed(DEFAULT_TOL.as_dict().items()):
        flag = "--" + name.replace("_", "-")
        fn = click.option(flag, name, type=float, default=None,
                          help=f"Override {name} (default {default:g}).")(fn)
    return fn


def _tolerances(base: Tolerances = DEFAULT_TOL, **overrides) -> Tolerances:
    values = base.as_dict()
    values.update({k: v for k, v in overrides.items() if v is not None})
    return Tolerances(**values)


def _cvals(values) -> list:
    return [dump_complex(z) for z in np.asarray(values)]


# --- analyze ----------------------------------------------------------------


def _constructive(p: MatrixPolynomial, cls, tol: Tolerances) -> dict | None:
    """Run the closed-form diagonalization that matches p's coefficient class, if any."""
    if p.m == 2 and cls.all_have(Tag.UNITARY) and cls.commuting_family:
        d = diagonalize_commuting_unitary_quadratic(p, tol)
        return {
            "construction": "commuting-unitary-quadratic",
            "eigenvalues": _cvals(d.eigenvalues),
            "kappa_v": d.kappa_v,
            "similarity_residual": d.similarity_residual,
        }
    if p.n == 2 and p.m == 2 and cls.all_have(Tag.PERMUTATION, (0, 2)) and cls.coefficients[1].has(
        Tag.DOUBLY_STOCHASTIC
    ):
        pm = monicize(p)
        a, b = float(pm.coeffs[1][0, 0].real), float(pm.coeffs[0][0, 0].real)
        return {
            "construction": "ds-2x2-quadratic",
            "a": a,
            "b": b,
            "eigenvalues": _cvals(ds_2x2_quadratic_spectrum(a, b)),
        }
    if p.n == 2 and p.m == 1 and cls.all_have(Tag.DOUBLY_STOCHASTIC):
        a, b = float(p.coeffs[1][0, 0].real), float(p.coeffs[0][0, 0].real)
        return {
            "construction": "ds-2x2-linear",
            "a": a,
            "b": b,
            "companion": ds_2x2_linear_companion(a, b, tol).tolist(),
        }
    if p.m == 1 and cls.coefficients[1].has(Tag.POSITIVE_DEFINITE) and cls.coefficients[0].has(
        Tag.POSITIVE_SEMIDEFINITE
    ):
        _, values = linear_pd_diagonalizer(p.coeffs[1], p.coeffs[0], tol)
        return {
            "construction": "linear-positive-definite",
            "eigenvalues": _cvals(values),
            "kappa": kappa_linear_pd(p.coeffs[1], tol),
        }
    return None


def _diag_dict(rep) -> dict:
    return {
        "diagonalizable": rep.diagonalizable,
        "clusters": [
            {"value": dump_complex(c.value), "algebraic": c.algebraic, "geometric": c.geometric}
            for c in rep.clusters
        ],
        "certificate_kappa": rep.certificate_kappa,
    }


def analyze_polynomial(p: MatrixPolynomial, tol: Tolerances) -> dict:
    cls = classify(p, tol)
    eig = polyeig(p, tol)
    rep = diagonalizability_report(companion_of(p), tol)
    return {
        "kind": "polynomial",
        "n": p.n,
        "m": p.m,
        "classification": {
            "coefficients": [
                {"tag": c.tag.value, "traits": sorted(t.value for t in c.traits)} for c in cls.coefficients
            ],
            "commuting_family": cls.commuting_family,
        },
        "spectrum": {
            "eigenvalues": _cvals(eig.values),
            "min_modulus": eig.min_modulus,
            "max_modulus": eig.max_modulus,
            "annulus_ok": eig.annulus_ok,
            "annulus_marginal": eig.marginal,
            "annulus_hypothesis": eig.hypothesis,
        },
        "diagonalizability": _diag_dict(rep),
        "constructive": _constructive(p, cls, tol),
        "tolerances": tol.as_dict(),
    }


def analyze_matrix(a, tol: Tolerances) -> dict:
    rep = diagonalizability_report(a, tol)
    return {
        "kind": "matrix",
        "n": a.shape[0],
        "spectrum": {"eigenvalues": _cvals(rep.values)},
        "diagonalizability": _diag_dict(rep),
        "tolerances": tol.as_dict(),
    }


def _analyze_text(report: dict) -> str:
    lines = [f"{report['kind']}: n = {report['n']}" + (f", m = {report['m']}" if "m" in report else "")]
    if "classification" in report:
        tags = ", ".join(c["tag"] for c in report["classification"]["coefficients"])
        lines.append(f"coefficient classes (A_0..A_m): {tags}")
        lines.append(f"commuting family: {report['classification']['commuting_family']}")
    spec = report["spectrum"]
    lines.append("eigenvalues:")
    lines += [f"  {complex(*z):.10g}" for z in spec["eigenvalues"]]
    if "min_modulus" in spec:
        lines.append(f"modulus range: [{spec['min_modulus']:.6g}, {spec['max_modulus']:.6g}]"
                     f"  inside (1/2, 2): {spec['annulus_ok']}")
    diag = report["diagonalizability"]
    lines.append(f"diagonalizable: {diag['diagonalizable']}")
    for c in diag["clusters"]:
        lines.append(f"  {complex(*c['value']):.8g}: algebraic {c['algebraic']}, geometric {c['geometric']}")
    if diag["certificate_kappa"] is not None:
        lines.append(f"certificate kappa: {diag['certificate_kappa']:.10g}")
    cons = report.get("constructive")
    if cons:
        extra = {k: v for k, v in cons.items() if k in ("kappa_v", "kappa", "a", "b", "similarity_residual")}
        lines.append(f"construction: {cons['construction']} " + " ".join(f"{k}={v:.6g}" for k, v in extra.items()))
    return "\n".join(lines)


# --- hw ---------------------------------------------------------------------


def _as_companion(obj):
    return companion_of(obj) if isinstance(obj, MatrixPolynomial) else obj


def _constructed_x(first, tol: Tolerances):
    if not isinstance(first, MatrixPolynomial):
        raise NotDiagonalizable("--x-from construction needs a polynomial document for the first input")
    cls = classify(first, tol)
    if first.m == 2 and cls.all_have(Tag.UNITARY) and cls.commuting_family:
        return diagonalize_commuting_unitary_quadratic(first, tol).x
    if first.m == 1:
        a0, a1 = first.coeffs
        if cls.coefficients[1].has(Tag.POSITIVE_DEFINITE) and cls.coefficients[0].has(Tag.POSITIVE_SEMIDEFINITE):
            return linear_pd_diagonalizer(a1, a0, tol)[0]
        c = companion_of(first)
        if is_diagonal(c, tol):
            return np.eye(first.n)
        if nk.is_normal(c, tol):
            return nk.schur(c)[1]
    raise NotDiagonalizable("no closed-form diagonalizer is known for this coefficient class")


# --- click wiring -----------------------------------------------------------


@click.group()
@click.version_option(package_name="artifact", prog_name="polyspec")
def main():
    """Companion-matrix spectra, diagonalizability and Hoffman-Wielandt checks."""


@main.command()
@click.argument("path", type=click.Path(dir_okay=False))
@click.option("--json/--text", "as_json", default=True, help="Output format (default JSON).")
@tolerance_options
@guarded
def analyze(path, as_json, **tol_flags):
    """Analyze a polynomial or matrix document."""
    tol = _tolerances(**tol_flags)
    obj = load_input(path, tol)
    if isinstance(obj, MatrixPolynomial):
        report = analyze_polynomial(obj, tol)
    else:
        report = analyze_matrix(obj, tol)
    if as_json:
        emit(report)
    else:
        click.echo(_analyze_text(report))


@main.command()
@click.argument("first", type=click.Path(dir_okay=False))
@click.argument("second", type=click.Path(dir_okay=False))
@click.option("--x-from", "x_from", type=click.Choice(["certificate", "construction"]),
              default="certificate", show_default=True,
              help="Diagonalizer of the first matrix: eigenvector certificate or closed-form construction.")
@tolerance_options
@guarded
def hw(first, second, x_from, **tol_flags):
    """Hoffman-Wielandt type check of FIRST (diagonalizable) against SECOND."""
    tol = _tolerances(**tol_flags)
    a, b = load_input(first, tol), load_input(second, tol)
    if isinstance(a, MatrixPolynomial) != isinstance(b, MatrixPolynomial):
        raise ParseError("inputs must both be polynomials or both be matrices")
    x = _constructed_x(a, tol) if x_from == "construction" else None
    report = hw_type_check(_as_companion(a), _as_companion(b), x, tol)
    out = report.to_dict()
    out["x_from"] = x_from
    emit(out)
    if report.anomaly:
        _fail(EXIT_ANOMALY, "X diagonalizes C yet the kappa-weighted bound fails")
    if not report.holds_kappa:
        _fail(EXIT_NUMERIC, "bound fails and X does not diagonalize C within tolerance")


@main.command("reproduce")
@click.option("--only", "only", multiple=True, type=click.Choice(FIXTURE_IDS),
              help="Restrict to one fixture id (repeatable).")
@click.option("--json/--text", "as_json", default=False, help="Output format (default text table).")
@tolerance_options
@guarded
def reproduce_cmd(only, as_json, **tol_flags):
    """Recompute every published fixture and compare with its expected values."""
    tol = _tolerances(**tol_flags)
    results = reproduce(only or None, tol)
    failing = [r.id for r in results if not r.passed]
    if as_json:
        emit({"results": [r.to_dict() for r in results], "tolerances": tol.as_dict(),
              "passed": len(results) - len(failing), "total": len(results)})
    else:
        for r in results:
            status = "PASS" if r.passed else "FAIL"
            click.echo(f"{r.id:<4} {status}  {r.title}")
            for c in r.checks:
                if not c.ok:
                    click.echo(f"       {c.name}: {c.detail}")
            if r.error:
                click.echo(f"       {r.error}")
        click.echo(f"{len(results) - len(failing)}/{len(results)} PASS")
    if failing:
        _fail(EXIT_FIXTURE, "failing fixtures: " + ", ".join(failing))


def _env_seed():
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return None
    try:
        return int(raw)
    except ValueError as exc:
        raise InvalidSpec(f"{SEED_ENV} must be an integer, got {raw!r}") from exc


@main.command()
@click.argument("config", required=False, type=click.Path(dir_okay=False))
@click.option("--theorem", type=click.Choice(sorted(THEOREMS)), help="Theorem id (overrides the config).")
@click.option("--seed", type=click.IntRange(0, 2**64 - 1), default=None,
              help=f"Base seed; falls back to the config, then ${SEED_ENV}, then 0.")
@click.option("--trials", type=click.IntRange(min=1), default=None)
@click.option("--expect-violations", is_flag=True, default=None,
              help="Hypothesis-violating ensemble: count violations instead of failing.")
@tolerance_options
@guarded
def campaign(config, theorem, seed, trials, expect_violations, **tol_flags):
    """Run a randomized campaign and print its JSON summary."""
    doc = read_json(config) if config else {}
    if not isinstance(doc, dict):
        raise InvalidSpec("campaign config must be a JSON object")
    doc = dict(doc)
    if theorem:
        doc["theorem"] = theorem
    if "theorem" not in doc:
        raise InvalidSpec("no theorem given (config key or --theorem)")
    if seed is None and "seed" not in doc:
        seed = _env_seed()
    if seed is not None:
        doc["seed"] = seed
    if trials is not None:
        doc["trials"] = trials
    if expect_violations is not None:
        doc["expect_violations"] = expect_violations
    cfg = CampaignConfig.from_dict(doc)
    overrides = {k: v for k, v in tol_flags.items() if v is not None}
    if overrides:
        cfg = replace(cfg, tolerances=_tolerances(cfg.tolerances, **overrides))
    summary = run_campaign(cfg)
    emit(summary)
    if summary["counterexamples"]:
        _fail(EXIT_ANOMALY, f"{summary['counterexamples']} counterexample(s) in a theorem-backed campaign")


if __name__ == "__main__":  # pragma: no cover
    main()
