"""Run configuration, check suites and JSON reports.

Reports carry no timings, so identical configurations give byte-identical
output. Exact numbers are written as "p/q" strings.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction

from . import __version__
from .context import AlgebraContext, ConfigError
from .exact import rat_str

SCHEMA = "yangcenter-report/1"
SERIES_SCHEMA = "yangcenter-series/1"

SUITES = ("rmatrix", "fseries", "brauer", "engine", "classical", "center", "center-negative",
          "phi", "smap", "completed", "commutativity")
DEFAULT_SUITES = ("rmatrix", "fseries", "brauer", "engine", "classical", "center", "phi",
                  "smap", "completed")
TARGETS = ("fseries", "symmetrizer", "Tplus", "Phi", "segal-sugawara")

# one line per check family, echoed into the report
CLAIMS = {
    "formulae": "P, Q relations and their prime transposes",
    "yang-baxter": "Yang-Baxter equation for R(u)",
    "almost-unitarity": "R(u)R(-u) and R(u)R(u+h kappa)' equal 1 - h^2/u^2",
    "normalizing-series": "first coefficients and defining identities of f",
    "rbar-suite": "unitarity and crossing symmetry of Rbar mod h^K",
    "fusion": "projection symmetrizer equals the fused R-matrix product",
    "trace-reduction": "tr_m S_m = a_m S_{m-1}",
    "conjugation": "symmetrizer intertwines the two Rbar products",
    "classical-oracle": "engine normal forms at h^0 match classical PBW straightening",
    "confluence": "random rewriting orders agree",
    "relation-residuals": "leftover RTT equations vanish in normal form",
    "jacobi": "Jacobi identity for the affine bracket",
    "segal-sugawara-annihilation": "phi_{m,m} is killed by non-negative modes",
    "classical-limit": "classical limit of Phi_{m,0} equals phi_{m,m}",
    "centrality": "t^{(r)}_ij annihilates every coefficient of T+_m(u) 1",
    "centrality-negative": "off the critical level some coefficient is not annihilated",
    "alternate-form": "both shift orders give the same T+_m(u)",
    "divisibility": "sum_k b_k T+_k(u) e^{-kh d/du} vanishes mod h^m",
    "smap-fixed-point": "the braiding fixes T+_1(u) 1 (x) T+_1(v) 1",
    "completed-centrality": "T_m(u) commutes with t^{(+-r)}_ij on low basis words",
    "operator-on-vacuum": "T_m(u) 1 = T+_m(u) 1",
    "vertex-consistency": "T_m(u) agrees with the vertex operator of T+_m(0) 1",
    "commutativity-probe": "low coefficients of T+_1, T+_2 commute (informational)",
}

NON_GATING = {"commutativity-probe"}


@dataclass
class RunConfig:
    kind: str = "o"
    N: int = 3
    level: str = "crit"
    K: int = 2
    D: int = 3
    U: int = 2
    M: int = 8
    suites: list = field(default_factory=lambda: list(DEFAULT_SUITES))
    m: list = field(default_factory=list)
    out: str | None = None
    seed: int = 0

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        known = set(cls.__dataclass_fields__)
        extra = set(d) - known
        if extra:
            raise ConfigError(f"unknown config keys: {sorted(extra)}")
        cfg = cls(**d)
        if isinstance(cfg.suites, str):
            cfg.suites = [s for s in cfg.suites.split(",") if s]
        cfg.level = str(cfg.level)
        cfg.validate()
        return cfg

    def to_dict(self) -> dict:
        d = asdict(self)
        d.pop("out")
        return d

    def validate(self):
        for s in self.suites:
            if s not in SUITES and s != "all":
                raise ConfigError(f"unknown suite {s!r}")
        self.context()

    def level_value(self):
        if self.level in ("crit", "critical"):
            return None
        try:
            return Fraction(self.level)
        except (ValueError, ZeroDivisionError):
            raise ConfigError(f"level must be 'crit' or a rational, got {self.level!r}") from None

    def context(self) -> AlgebraContext:
        return AlgebraContext(self.N, self.kind, self.level_value(), self.K, self.D, self.U, self.M)

    def m_values(self, ctx):
        from .brauer import max_m
        ms = self.m or [1, 2]
        return [m for m in ms if 1 <= m <= max_m(ctx)]


# ---------------------------------------------------------------- check plan

def _plan(cfg: RunConfig):
    """List of (module, function, kwargs) in report order."""
    from .brauer import max_m

    ctx = cfg.context()
    suites = list(SUITES) if "all" in cfg.suites else cfg.suites
    plan = []
    add = lambda mod, fn, **kw: plan.append((mod, fn, kw))
    for s in suites:
        if s == "rmatrix":
            add("identities", "check_formulae", ctx=ctx)
            add("identities", "check_ybe", ctx=ctx)
            add("identities", "check_almost", ctx=ctx)
            add("identities", "check_rbar", ctx=ctx, K=cfg.K, M=max(cfg.M, cfg.K))
        elif s == "fseries":
            add("identities", "check_fseries", ctx=ctx, M=cfg.M)
        elif s == "brauer":
            for m in range(1, min(max_m(ctx), 3) + 1):
                add("brauer", "check_fusion", ctx=ctx, m=m)
                add("brauer", "check_trace_reduction", ctx=ctx, m=m)
                add("brauer", "verify_conjugation", ctx=ctx, m=m, K=cfg.K)
        elif s == "engine":
            add("engine", "check_classical_oracle", ctx=ctx, max_modes=3, max_weight=cfg.D)
            add("engine", "check_confluence", ctx=ctx, seed=cfg.seed)
            add("engine", "check_relation_residuals", ctx=ctx)
        elif s == "classical":
            add("classical", "check_jacobi", ctx=ctx)
            if max_m(ctx) >= 2:
                add("classical", "check_annihilated", ctx=ctx, m=2)
        elif s == "center":
            for m in cfg.m_values(ctx):
                add("central", "verify_centrality", ctx=ctx, m=m)
                if ctx.kind == "o" and m >= 2:
                    add("central", "verify_alternate_form", ctx=ctx, m=m)
        elif s == "center-negative":
            lv = cfg.level_value()
            for m in cfg.m_values(ctx):
                add("central", "centrality_control", ctx=ctx.with_(level=None), m=m,
                    level=0 if lv is None else lv)
        elif s == "phi":
            for m in cfg.m_values(ctx):
                if m >= 2:
                    add("central", "verify_divisibility", ctx=ctx, m=m)
                add("central", "compare_classical", ctx=ctx, m=m)
        elif s == "smap":
            add("central", "verify_smap_fixed", ctx=ctx)
        elif s == "completed":
            add("central", "verify_completed_centrality", ctx=ctx, m=1)
            add("central", "verify_vacuum_image", ctx=ctx, m=1)
            add("central", "verify_vertex_consistency", ctx=ctx, m=1)
        elif s == "commutativity":
            add("central", "commutativity_probe", ctx=ctx)
    return plan


def _run_one(item):
    import importlib

    mod, fn, kw = item
    f = getattr(importlib.import_module(f"yangcenter.{mod}"), fn)
    try:
        rec = f(**kw)
    except (ArithmeticError, ValueError, NotImplementedError) as e:
        rec = {"name": fn, "status": "error", "witness": {"error": f"{type(e).__name__}: {e}"}}
    params = {k: (v.to_json() if isinstance(v, AlgebraContext) else v) for k, v in kw.items()}
    rec = dict(rec)
    rec["claim"] = CLAIMS.get(rec["name"], "")
    rec["params"] = _jsonable(params)
    if rec["name"] in NON_GATING:
        rec["gating"] = False
    return _jsonable(rec)


def _jsonable(x):
    if isinstance(x, Fraction):
        return rat_str(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def run_suite(cfg: RunConfig, jobs: int = 1):
    """Run the selected checks; returns (report, exit code)."""
    plan = _plan(cfg)
    if jobs > 1 and len(plan) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            records = list(ex.map(_run_one, plan))
    else:
        records = [_run_one(p) for p in plan]
    gating = [r for r in records if r.get("gating", True)]
    summary = {"checks": len(records),
               "passed": sum(r["status"] == "pass" for r in gating),
               "failed": sum(r["status"] == "fail" for r in gating),
               "errors": sum(r["status"] == "error" for r in gating)}
    ok = summary["failed"] == 0 and summary["errors"] == 0
    report = {"schema": SCHEMA, "version": __version__, "config": _jsonable(cfg.to_dict()),
              "checks": records, "summary": summary, "status": "pass" if ok else "fail"}
    return report, 0 if ok else 1


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False, ensure_ascii=True) + "\n"


def write_json(obj, path=None) -> str:
    text = dumps(obj)
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text


def load_json(path):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


# ---------------------------------------------------------------- series emission

def symmetrizer_json(S) -> list:
    return [{"row": [i + 1 for i in r], "col": [j + 1 for j in c], "value": rat_str(v)}
            for (r, c), v in sorted(S.entries.items())]


def emit_series(cfg: RunConfig, target: str, m: int | None = None) -> dict:
    from .brauer import symmetrizer
    from .central import build_Phi, build_T_plus, make_engine
    from .classical import segal_sugawara
    from .tensor import f_series

    if target not in TARGETS:
        raise ConfigError(f"unknown target {target!r}; choose from {TARGETS}")
    ctx = cfg.context()
    if m is None:
        m = cfg.m[0] if cfg.m else (1 if target == "symmetrizer" else 2)
    out = {"schema": SERIES_SCHEMA, "version": __version__, "target": target,
           "config": _jsonable(cfg.to_dict())}
    if target == "fseries":
        out["coefficients"] = [rat_str(c) for c in f_series(ctx, cfg.M).coeffs]
    elif target == "symmetrizer":
        b = symmetrizer(ctx, m)
        out.update(m=m, rank=b.rank, entries=symmetrizer_json(b.S))
    elif target == "Tplus":
        out["series"] = build_T_plus(ctx, m, make_engine(ctx)).to_json()
    elif target == "Phi":
        eng = make_engine(ctx, K=max(cfg.K, m + 1), D=max(cfg.D, m))
        out["series"] = build_Phi(ctx, m, eng, U=0).to_json()
    else:
        out.update(m=m, phi=[p.to_json() for p in segal_sugawara(ctx, m)])
    return _jsonable(out)
