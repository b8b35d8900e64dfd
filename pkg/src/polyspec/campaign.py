"""Randomized property campaigns, one per theorem-level claim.

A campaign draws `trials` independent samples from the ensemble its claim
quantifies over and checks the claim on each. Trial i is seeded by
``derive_seed(seed, i)`` (sub-streams ``derive_seed(seed, i, k)``), so any
single trial can be replayed, and the summary is a pure function of the config.

Campaigns sharing a sampler see identical inputs for identical seeds: that is
how `kappa-v` inspects exactly the polynomials `diag-unitary` diagonalized.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import numkit as nk
from .companion import (
    companion_of,
    diagonalizability_report,
    diagonalize_commuting_unitary_quadratic,
    ds_2x2,
    ds_2x2_linear_companion,
    ds_2x2_quadratic_spectrum,
)
from .errors import InvalidSpec, PolyspecError, SingularMatrix
from .gen import EnsembleSpec, Kind, derive_seed, rng_for, sample
from .hoffman import (
    best_matching,
    hw_equality_check,
    hw_type_check,
    kappa_linear_pd,
    kappa_v_closed_form,
    linear_pd_diagonalizer,
)
from .matpoly import MatrixPolynomial, monicize, polyeig
from .numkit import DEFAULT_TOL, Tolerances

# Thresholds pinned by the claims themselves rather than by Tolerances.
SIMILARITY_TOL = 1e-8  # relative to ||C||_F
GRAM_TOL = 1e-8  # closed-form vs computed spectrum of V V*, relative
S_RANGE_TOL = 1e-9
SPECTRUM_TOL = 1e-8
LINEAR_DS_MIN_GAP = 1e-6  # |2a - 1| below this makes A_1 too close to singular to compare


@dataclass
class Trial:
    index: int
    seed: int
    n: int
    m: int
    ok: bool = True
    skipped: bool = False
    failed: list = field(default_factory=list)
    metrics: dict = field(default_factory=dict)
    detail: str = ""

    def check(self, name: str, ok) -> None:
        if not ok:
            self.ok = False
            self.failed.append(name)


@dataclass(frozen=True)
class CampaignConfig:
    theorem: str
    trials: int = 100
    seed: int = 0
    n: tuple = ()  # sizes to draw from; empty means the theorem default
    m: tuple = ()  # degrees, where the theorem allows a choice
    extras: dict = field(default_factory=dict)
    tolerances: Tolerances = DEFAULT_TOL
    expect_violations: bool = False

    def __post_init__(self):
        if self.theorem not in THEOREMS:
            raise InvalidSpec(f"unknown theorem id {self.theorem!r}; known: {', '.join(THEOREMS)}")
        if not isinstance(self.trials, int) or isinstance(self.trials, bool) or self.trials < 1:
            raise InvalidSpec("trials must be an integer >= 1")
        if not isinstance(self.seed, int) or isinstance(self.seed, bool) or not 0 <= self.seed < 2**64:
            raise InvalidSpec("seed must be an unsigned 64-bit integer")
        spec = THEOREMS[self.theorem]
        for key, default in (("n", spec.n), ("m", spec.m)):
            values = getattr(self, key)
            values = (values,) if isinstance(values, int) else tuple(values or default)
            if not values or any(not isinstance(v, int) or isinstance(v, bool) or v < 1 for v in values):
                raise InvalidSpec(f"{key} must be a positive integer or a list of them")
            if spec.fixed_n and key == "n" and set(values) != {spec.fixed_n}:
                raise InvalidSpec(f"{self.theorem} is stated for n = {spec.fixed_n} only")
            object.__setattr__(self, key, values)

    @classmethod
    def from_dict(cls, doc: dict) -> "CampaignConfig":
        if not isinstance(doc, dict):
            raise InvalidSpec("campaign config must be a JSON object")
        known = {"theorem", "trials", "seed", "ensemble", "tolerances", "expect_violations"}
        unknown = set(doc) - known
        if unknown:
            raise InvalidSpec(f"unknown config keys: {', '.join(sorted(unknown))}")
        ens = doc.get("ensemble")
        ens = {} if ens is None else ens
        if not isinstance(ens, dict):
            raise InvalidSpec("ensemble must be an object")
        if "kind" in ens:
            try:
                Kind(ens["kind"])
            except ValueError as exc:
                raise InvalidSpec(f"unknown ensemble kind {ens['kind']!r}") from exc
        tol = doc.get("tolerances")
        tol = {} if tol is None else tol
        if not isinstance(tol, dict) or set(tol) - set(DEFAULT_TOL.as_dict()):
            raise InvalidSpec("tolerances must be an object with tol_* keys")
        return cls(
            theorem=doc.get("theorem"),
            trials=doc.get("trials", 100),
            seed=doc.get("seed", 0),
            n=ens.get("n", ()),
            m=ens.get("m", ()),
            extras=dict(ens.get("extras", {}) or {}),
            tolerances=Tolerances(**{**DEFAULT_TOL.as_dict(), **tol}),
            expect_violations=bool(doc.get("expect_violations", False)),
        )

    def to_dict(self) -> dict:
        return {
            "theorem": self.theorem,
            "trials": self.trials,
            "seed": self.seed,
            "ensemble": {"n": list(self.n), "m": list(self.m), "extras": dict(self.extras)},
            "tolerances": self.tolerances.as_dict(),
            "expect_violations": self.expect_violations,
        }


# --- samplers ---------------------------------------------------------------


def _draw(kind: Kind, n: int, base: int, index: int, stream: int, **extras):
    return sample(EnsembleSpec(kind, n, derive_seed(base, index, stream), extras))


def _ginibre_quadratic(cfg, t: Trial, first_stream: int) -> MatrixPolynomial:
    g = [_draw(Kind.GINIBRE, t.n, cfg.seed, t.index, first_stream + k) / np.sqrt(t.n) for k in range(2)]
    return MatrixPolynomial((g[0], g[1], np.eye(t.n)), cfg.tolerances)


def commuting_unitary_quadratic(cfg, t: Trial) -> MatrixPolynomial:
    """I z^2 + U_1 z + U_0 with commuting unitaries; with extras monic=false the
    leading coefficient is a third commuting unitary."""
    if cfg.extras.get("monic", True):
        u0, u1 = _draw(Kind.COMMUTING_UNITARY_PAIR, t.n, cfg.seed, t.index, 0)
        return MatrixPolynomial((u0, u1, np.eye(t.n)), cfg.tolerances)
    u0, u1, u2 = _draw(Kind.COMMUTING_UNITARY_PAIR, t.n, cfg.seed, t.index, 0, count=3)
    return MatrixPolynomial((u0, u1, u2), cfg.tolerances)


def _ds_2x2_uniform(rng) -> tuple:
    """Convex combination of the two 2 x 2 permutations with Dirichlet(1, 1) weights."""
    a = float(rng.uniform())
    return a, ds_2x2(a)


# --- per-theorem trials -----------------------------------------------------


def _eq1_equality(cfg, t, rng):
    a, b = _draw(Kind.COMMUTING_NORMAL_PAIR, t.n, cfg.seed, t.index, 0)
    rep = hw_equality_check(a, b, cfg.tolerances)
    scale = 1.0 + rep.frob_sq
    t.check("paired_identity", rep.equality_gap is not None and rep.equality_gap <= SIMILARITY_TOL * scale)
    t.check("holds_plain", rep.holds_plain)
    t.metrics.update(
        frob_sq=rep.frob_sq,
        optimal_gap=(rep.frob_sq - rep.best.cost) / scale,
        optimal_below_frob=float(rep.frob_sq - rep.best.cost > SIMILARITY_TOL * scale),
    )


def _hw_classical(cfg, t, rng):
    u = _draw(Kind.UNITARY_HAAR_LIKE, t.n, cfg.seed, t.index, 0)
    v = _draw(Kind.UNITARY_HAAR_LIKE, t.n, cfg.seed, t.index, 1)
    da = _draw(Kind.DIAGONAL, t.n, cfg.seed, t.index, 2)
    db = _draw(Kind.DIAGONAL, t.n, cfg.seed, t.index, 3)
    rep = hw_equality_check(u @ da @ u.conj().T, v @ db @ v.conj().T, cfg.tolerances)
    t.check("holds_plain", rep.holds_plain)
    t.metrics.update(ratio=rep.best.cost / max(rep.frob_sq, nk.EPS))


def _hw_type_unitary(cfg, t, rng):
    p = commuting_unitary_quadratic(cfg, t)
    q = _ginibre_quadratic(cfg, t, 10)
    c, d = companion_of(p), companion_of(q)
    source = cfg.extras.get("x_from", "construction")
    x = diagonalize_commuting_unitary_quadratic(p, cfg.tolerances).x if source == "construction" else None
    rep = hw_type_check(c, d, x, cfg.tolerances)
    t.check("x_diagonalizes", rep.x_diagonalizes)
    t.check("holds_kappa", rep.holds_kappa)
    if source == "construction":
        t.check("kappa_sq_lt_4", rep.kappa_sq < 4)
    t.metrics.update(kappa_sq=rep.kappa_sq, ratio=rep.best.cost / max(rep.rhs, nk.EPS))


_LINEAR_CLASSES = ("unitary", "diagonal", "pd")


def _hw_type_linear(cfg, t, rng):
    classes = tuple(cfg.extras.get("classes", _LINEAR_CLASSES))
    if not classes or set(classes) - set(_LINEAR_CLASSES):
        raise InvalidSpec(f"classes must be drawn from {_LINEAR_CLASSES}")
    cls = classes[int(rng.integers(len(classes)))]
    kind = {"unitary": Kind.UNITARY_HAAR_LIKE, "diagonal": Kind.DIAGONAL, "pd": Kind.POSITIVE_DEFINITE}[cls]
    a0 = _draw(kind, t.n, cfg.seed, t.index, 0)
    a1 = _draw(kind, t.n, cfg.seed, t.index, 1)
    c = companion_of(MatrixPolynomial((a0, a1), cfg.tolerances))
    if cls == "unitary":
        x = nk.schur(c)[1]  # C is unitary, so its Schur vectors are eigenvectors
    elif cls == "diagonal":
        x = np.eye(t.n)
    else:
        x, _ = linear_pd_diagonalizer(a1, a0, cfg.tolerances)
        expected = kappa_linear_pd(a1, cfg.tolerances)
        got = nk.spectral_condition(x, cfg.tolerances)
        t.check("kappa_matches_closed_form", abs(got - expected) <= GRAM_TOL * expected)
    g = [_draw(Kind.GINIBRE, t.n, cfg.seed, t.index, 10 + k) for k in range(2)]
    d = companion_of(MatrixPolynomial((g[0], g[1] + 2 * np.sqrt(t.n) * np.eye(t.n)), cfg.tolerances))
    rep = hw_type_check(c, d, x, cfg.tolerances)
    t.check("x_diagonalizes", rep.x_diagonalizes)
    t.check("holds_kappa", rep.holds_kappa)
    t.detail = cls
    t.metrics.update(kappa_sq=rep.kappa_sq, ratio=rep.best.cost / max(rep.rhs, nk.EPS))


def _ds_quadratic(cfg, t, rng) -> tuple:
    ends = [_draw(Kind.PERMUTATION, 2, cfg.seed, t.index, k) for k in (0, 1)]
    _, middle = _ds_2x2_uniform(rng)
    return MatrixPolynomial((ends[0], middle, ends[1]), cfg.tolerances)


def _hw_type_ds(cfg, t, rng):
    p = _ds_quadratic(cfg, t, rng)
    q = _ginibre_quadratic(cfg, t, 10)
    rep = hw_type_check(companion_of(p), companion_of(q), None, cfg.tolerances)
    t.check("x_diagonalizes", rep.x_diagonalizes)
    t.check("holds_kappa", rep.holds_kappa)
    t.metrics.update(kappa_sq=rep.kappa_sq, ratio=rep.best.cost / max(rep.rhs, nk.EPS))


def _annulus(cfg, t, p):
    res = polyeig(p, cfg.tolerances)
    t.check("annulus", res.annulus_ok)
    t.metrics.update(min_modulus=res.min_modulus, max_modulus=res.max_modulus)


def _annulus_unitary(cfg, t, rng):
    coeffs = [_draw(Kind.UNITARY_HAAR_LIKE, t.n, cfg.seed, t.index, k) for k in range(t.m + 1)]
    _annulus(cfg, t, MatrixPolynomial(tuple(coeffs), cfg.tolerances))


def _annulus_ds(cfg, t, rng):
    terms = cfg.extras.get("terms", 3)
    birkhoff_ends = cfg.extras.get("ends", "permutation") == "birkhoff"
    coeffs = []
    for k in range(t.m + 1):
        if k in (0, t.m) and not birkhoff_ends:
            coeffs.append(_draw(Kind.PERMUTATION, t.n, cfg.seed, t.index, k))
        else:
            coeffs.append(_draw(Kind.DOUBLY_STOCHASTIC_BIRKHOFF, t.n, cfg.seed, t.index, k, terms=terms))
    _annulus(cfg, t, MatrixPolynomial(tuple(coeffs), cfg.tolerances))


def _diag_unitary(cfg, t, rng):
    p = commuting_unitary_quadratic(cfg, t)
    diag = diagonalize_commuting_unitary_quadratic(p, cfg.tolerances)
    cnorm = nk.frobenius_norm(diag.companion)
    t.check("similarity_residual", diag.similarity_residual <= SIMILARITY_TOL * cnorm)
    t.check("diagonalizable", diagonalizability_report(diag.companion, cfg.tolerances).diagonalizable)
    sep = np.abs(np.diag(diag.x1) - np.diag(diag.x2)) ** 2
    t.check("root_separation", sep.min() >= 3 - S_RANGE_TOL)
    t.metrics.update(
        kappa_v=diag.kappa_v,
        relative_residual=diag.similarity_residual / cnorm,
        min_root_separation_sq=float(sep.min()),
    )


def _kappa_v(cfg, t, rng):
    p = commuting_unitary_quadratic(cfg, t)
    diag = diagonalize_commuting_unitary_quadratic(p, cfg.tolerances)
    bound = kappa_v_closed_form(np.diag(diag.x1), np.diag(diag.x2))
    gram, _ = nk.eig_hermitian(diag.v @ diag.v.conj().T, cfg.tolerances)
    closed = np.sort(np.concatenate([bound.alphas_closed, bound.betas_closed]))
    rel = float(np.max(np.abs(gram - closed)) / closed[-1])
    t.check("gram_spectrum", rel <= GRAM_TOL)
    t.check("s_range", bool(np.all((bound.s >= 2 - S_RANGE_TOL) & (bound.s <= 3 + S_RANGE_TOL))))
    t.check("kappa_lt_2", diag.kappa_v < 2 and bound.kappa < 2)
    t.check("kappa_closed_vs_svd", abs(bound.kappa - diag.kappa_v) <= GRAM_TOL)
    t.metrics.update(
        kappa_v=diag.kappa_v,
        gram_relative_error=rel,
        s_min=float(bound.s.min()),
        s_max=float(bound.s.max()),
    )


def _diag_ds_linear(cfg, t, rng):
    a, a1 = _ds_2x2_uniform(rng)
    b, a0 = _ds_2x2_uniform(rng)
    if abs(2 * a - 1) < LINEAR_DS_MIN_GAP:
        t.skipped, t.detail = True, "A_1 numerically singular"
        return
    closed = ds_2x2_linear_companion(a, b, cfg.tolerances)
    c = companion_of(MatrixPolynomial((a0, a1), cfg.tolerances))
    scale = max(nk.frobenius_norm(closed), 1.0)
    t.check("closed_form", nk.frobenius_norm(c - closed) <= SPECTRUM_TOL * scale)
    t.check("symmetric", nk.frobenius_norm(c - c.T) <= SPECTRUM_TOL * scale)
    t.check("diagonalizable", diagonalizability_report(c, cfg.tolerances).diagonalizable)
    t.metrics.update(companion_norm=nk.frobenius_norm(c))


def _diag_ds_quadratic(cfg, t, rng):
    p = _ds_quadratic(cfg, t, rng)
    pm = monicize(p)
    b1, b0 = pm.coeffs[1], pm.coeffs[0]
    a, b = float(b1[0, 0].real), float(b0[0, 0].real)
    t.check("monic_form", nk.frobenius_norm(b1 - ds_2x2(a)) + nk.frobenius_norm(b0 - ds_2x2(b)) <= SPECTRUM_TOL)
    closed = ds_2x2_quadratic_spectrum(a, b)
    found = polyeig(p, cfg.tolerances).values
    perm = best_matching(found, closed).permutation
    gap = float(max(abs(found[i] - closed[j]) for i, j in enumerate(perm)))
    t.check("spectrum", gap <= SPECTRUM_TOL)
    sep = min(abs(closed[i] - closed[j]) for i in range(4) for j in range(i + 1, 4))
    if not (abs(a - 1) <= SPECTRUM_TOL and abs(b - 1) <= SPECTRUM_TOL):
        t.check("distinct", sep > cfg.tolerances.tol_cluster)
    t.check("diagonalizable", diagonalizability_report(companion_of(p), cfg.tolerances).diagonalizable)
    t.metrics.update(spectrum_gap=gap, min_separation=float(sep))


@dataclass(frozen=True)
class TheoremSpec:
    run: Callable
    n: tuple
    m: tuple = (2,)
    fixed_n: int | None = None


THEOREMS = {
    "eq1-equality": TheoremSpec(_eq1_equality, n=(2, 3, 4, 5, 6), m=(1,)),
    "hw-classical": TheoremSpec(_hw_classical, n=(2, 3, 4, 5, 6), m=(1,)),
    "hw-type-unitary": TheoremSpec(_hw_type_unitary, n=(2, 3, 4, 5, 6)),
    "hw-type-linear": TheoremSpec(_hw_type_linear, n=(2, 3, 4, 5, 6), m=(1,)),
    "hw-type-ds": TheoremSpec(_hw_type_ds, n=(2,), fixed_n=2),
    "annulus-unitary": TheoremSpec(_annulus_unitary, n=(2, 3, 4, 5), m=(1, 2, 3)),
    "annulus-ds": TheoremSpec(_annulus_ds, n=(2, 3, 4, 5), m=(1, 2, 3)),
    "diag-unitary": TheoremSpec(_diag_unitary, n=(2, 3, 4, 5, 6)),
    "diag-ds-linear": TheoremSpec(_diag_ds_linear, n=(2,), m=(1,), fixed_n=2),
    "diag-ds-quadratic": TheoremSpec(_diag_ds_quadratic, n=(2,), fixed_n=2),
    "kappa-v": TheoremSpec(_kappa_v, n=(2, 3, 4, 5, 6)),
}


def run_trial(cfg: CampaignConfig, index: int) -> Trial:
    seed = derive_seed(cfg.seed, index)
    rng = rng_for(seed)
    n = cfg.n[int(rng.integers(len(cfg.n)))]
    m = cfg.m[int(rng.integers(len(cfg.m)))]
    t = Trial(index=index, seed=seed, n=n, m=m)
    try:
        THEOREMS[cfg.theorem].run(cfg, t, rng)
    except SingularMatrix as exc:
        # a sampled leading coefficient can be singular outside the hypothesis class
        t.skipped, t.detail = True, f"SingularMatrix: {exc}"
    except InvalidSpec:
        raise
    except PolyspecError as exc:
        t.check("no_error", False)
        t.detail = f"{type(exc).__name__}: {exc}"
    return t


def summarize(cfg: CampaignConfig, trials: list) -> dict:
    trials = sorted(trials, key=lambda t: t.index)
    done = [t for t in trials if not t.skipped]
    bad = [t for t in done if not t.ok]
    extremes = {}
    for t in done:
        for key, value in t.metrics.items():
            lo, hi = extremes.get(key, (value, value))
            extremes[key] = (min(lo, value), max(hi, value))
    failures = {}
    for t in bad:
        for name in t.failed:
            failures[name] = failures.get(name, 0) + 1
    backed = not cfg.expect_violations
    return {
        "config": cfg.to_dict(),
        "theorem_backed": backed,
        "evaluated": len(done),
        "skipped": len(trials) - len(done),
        "passed": len(done) - len(bad),
        "counterexamples": len(bad) if backed else 0,
        "violations": 0 if backed else len(bad),
        "failed_checks": dict(sorted(failures.items())),
        "extremes": {k: {"min": lo, "max": hi} for k, (lo, hi) in sorted(extremes.items())},
        "anomalies": [
            {"trial": t.index, "seed": t.seed, "n": t.n, "m": t.m, "failed": t.failed, "detail": t.detail}
            for t in bad
        ],
    }


def run_campaign(cfg: CampaignConfig) -> dict:
    return summarize(cfg, [run_trial(cfg, i) for i in range(cfg.trials)])
