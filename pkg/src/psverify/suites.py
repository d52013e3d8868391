"""Verification suites and the deterministic JSON report shared by the CLI and the tests."""
from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from gmpy2 import mpq

from .characters import SmoothChar, unit_characters
from .coeff import INF, CycloNum, ExactMatrix, kernel_basis, set_order_cap, order_cap
from .criterion import (CharTuple, decide_gl2, decide_gl3, decide_gln, jacquet_constituents,
                        q_parabolic)
from .density import ConfigError, DensityConfig, check_density_hypotheses
from .explicit import (CheckRecord, DegenerateCharacter, DensityIntegrals, EtaPair, special_g, verify_explicit_formulas,
                       verify_int_chi, verify_roundtrip, verify_s2s1_identities)
from .padic import PrecisionError
from .prinseries import Eigenspace, FlagModel, LevelOverflow, LeviModel

SUITES = ("explicit", "density", "lemmas", "eigenspace")
REPORT_SCHEMA = "psverify-report/1"
DEFAULT_BUDGET = 10 ** 13


class BudgetExceeded(ConfigError):
    """The requested (q, M) costs more than the configured budget."""


def enumeration_cost(q: int, level: int) -> int:
    """Size bound q^(9M) for brute-force work over GL_3(O/p^M)."""
    return q ** (9 * level)


def check_budget(p: int, f: int, level: int, budget: int) -> int:
    cost = enumeration_cost(p ** f, level)
    if cost > budget:
        raise BudgetExceeded(f"q^(9M) = {cost} exceeds the budget {budget} at p={p}, f={f}, M={level}")
    return cost


@dataclass
class CharFixture:
    """A named triple of smooth characters."""

    name: str
    chis: tuple

    def to_json(self):
        return {"name": self.name, "characters": [c.to_json() for c in self.chis]}


def _unramified(p, f, value):
    return SmoothChar.unramified(p, f, value)


def smallest_ramified(p: int, f: int, level: int):
    """A character of the smallest positive conductor <= level, or None if there is none."""
    for c in range(1, level + 1):
        found = [u for u in unit_characters(p, f, c) if u.conductor == c]
        if found:
            return found[0]
    return None


def is_generic(chis) -> bool:
    c1, c2, c3 = chis
    if c2 == c3.twist_norm(1) or c1 == c3.twist_norm(2):
        return False
    try:
        EtaPair.from_chis(chis)
    except DegenerateCharacter:
        return False
    return True


def _coprime_values(p, count, start=1):
    out, v = [], start
    while len(out) < count:
        if v % p:
            out.append(v)
        v += 1
    return out


def default_fixtures(p: int, f: int, level: int) -> list:
    """Generic triples: unramified, then with c(eta_2) >= 1, then with c(eta_1 eta_2) >= 1 and c(eta_2) = 0.

    The ramified triples need a character of conductor <= level; without one three unramified
    triples are used instead.
    """
    a, b, c, d, e = _coprime_values(p, 5, 2)
    out = [CharFixture("unramified", tuple(_unramified(p, f, v) for v in (1, a, b)))]
    psi = smallest_ramified(p, f, level)
    if psi is not None:
        out.append(CharFixture(f"ramified_chi3_c{psi.conductor}",
                               (_unramified(p, f, 1), _unramified(p, f, a), psi * _unramified(p, f, b))))
        out.append(CharFixture(f"ramified_chi1_c{psi.conductor}",
                               (psi * _unramified(p, f, 1), _unramified(p, f, a), _unramified(p, f, b))))
    else:
        out.append(CharFixture("unramified_2", tuple(_unramified(p, f, v) for v in (1, c, d))))
        out.append(CharFixture("unramified_3", tuple(_unramified(p, f, v) for v in (a, 1, e))))
    for fx in out:
        if not is_generic(fx.chis):
            raise AssertionError(f"default fixture {fx.name} is not generic")
    return out


def degenerate_fixtures(p: int, f: int) -> list:
    """Triples violating chi_2 != chi_3|.| and chi_1 != chi_3|.|^2 respectively."""
    a, b = _coprime_values(p, 2, 2)
    chi3 = _unramified(p, f, b)
    return [
        CharFixture("degenerate_chi2_eq_chi3_norm", (_unramified(p, f, a), chi3.twist_norm(1), chi3)),
        CharFixture("degenerate_chi1_eq_chi3_norm_sq", (chi3.twist_norm(2), _unramified(p, f, a), chi3)),
    ]


def density_fixture(p: int, f: int) -> CharFixture:
    """Unramified triple with eta_2(p) coprime to p, so |q / eta_2(p)| < 1."""
    first, eta2_value = _coprime_values(p, 2, 2)
    chis = (_unramified(p, f, first), _unramified(p, f, 1), _unramified(p, f, eta2_value))
    return CharFixture("density_unramified", chis)


def required_level(chis) -> int:
    return max(1, max(c.conductor for c in chis))


def int_chi_values(q: int) -> list:
    """Five rational eta_2(p) values, none equal to q."""
    return [v for v in (mpq(1), mpq(-1), mpq(1, 2), mpq(3), mpq(5), mpq(7)) if v != q][:5]


# suite bodies; each returns JSON-ready record dicts in a fixed order

@dataclass
class SuiteConfig:
    p: int
    f: int = 1
    level: int = 1
    seed: int = 0
    budget: int = DEFAULT_BUDGET
    n_max: int = 1000
    jobs: int = 1
    fixtures: list | None = None

    def to_json(self):
        return {"p": self.p, "f": self.f, "level": self.level, "seed": self.seed,
                "budget": self.budget, "n_max": self.n_max}


def _tag(records, fixture_name):
    out = []
    for r in records:
        d = r.to_json()
        d["fixture"] = fixture_name
        out.append(d)
    return out


def _level_error(fx: CharFixture, level: int):
    need = required_level(fx.chis)
    if need > level:
        raise LevelOverflow(f"fixture {fx.name} has conductor {need}; minimal level M = {need}")


def run_explicit_fixture(args):
    p, f, level, fx = args
    _level_error(fx, level)
    model = FlagModel(p, f, level)
    eig = Eigenspace(model, fx.chis)
    records = verify_explicit_formulas(model, fx.chis, eigenspace=eig)
    records += verify_roundtrip(model, fx.chis, eig)
    return _tag(records, fx.name)


def generalized_eigenspace_dimension(eig: Eigenspace) -> int:
    """dim ker (A - lambda)^2 for the tau_z1 matrix A on orbit coordinates."""
    n = len(eig.matrix)
    shifted = [[a - (eig.eigenvalue if i == j else CycloNum.rational(0)) for j, a in enumerate(row)]
               for i, row in enumerate(eig.matrix)]
    square = [[sum((shifted[i][k] * shifted[k][j] for k in range(n)), CycloNum.rational(0))
               for j in range(n)] for i in range(n)]
    return len(kernel_basis(ExactMatrix(square))) if n else 0


def run_eigenspace_fixture(args):
    p, f, level, fx, degenerate = args
    _level_error(fx, level)
    model = FlagModel(p, f, level)
    eig = Eigenspace(model, fx.chis)
    levi_dim = len(LeviModel(p, f, level))
    constituents = jacquet_constituents(fx.chis)
    measured = {"eigenspace_dimension": eig.dimension, "levi_dimension": levi_dim,
                "generalized_dimension": generalized_eigenspace_dimension(eig),
                "chi2_ne_chi3_norm": constituents.differs_from_prime,
                "chi1_ne_chi3_norm_sq": constituents.differs_from_double_prime}
    if degenerate:
        rec = CheckRecord("degenerate_dimension_exceeds_levi", "degenerate eigenspace flag")
        rec.record(eig.dimension > levi_dim, dict(measured))
    else:
        rec = CheckRecord("eigenspace_dimension_equals_levi", "levi restriction map")
        rec.record(eig.dimension == levi_dim, dict(measured))
    rec.measured.update(measured)
    return _tag([rec], fx.name)


def run_lemmas(cfg: SuiteConfig) -> list:
    p, f = cfg.p, cfg.f
    q = p ** f
    out = []
    for c in (0, 1, 2):
        for u in unit_characters(p, f, c):
            if u.conductor != c:
                continue
            for value in int_chi_values(q):
                eta2 = u * _unramified(p, f, CycloNum.rational(value))
                rec = verify_int_chi(eta2, 4)
                rec.check = f"annulus_integral_c{c}"
                rec.measured["eta2_at_p"] = str(value)
                rec.measured["unit_char"] = list(u.unit_char.exps)
                out.append(rec.to_json() | {"fixture": f"eta2_c{c}"})
    fixtures = cfg.fixtures or default_fixtures(p, f, cfg.level)
    for fx in fixtures[:1]:
        _level_error(fx, cfg.level)
        model = FlagModel(p, f, cfg.level)
        eig = Eigenspace(model, fx.chis)
        out += _tag(verify_s2s1_identities(model, fx.chis, eig.basis), fx.name)
    for fx in fixtures:
        eta = EtaPair.from_chis(fx.chis)
        out += _tag([check_special_g(eta)], fx.name)
    return out


def check_special_g(eta: EtaPair) -> CheckRecord:
    """g integrates to zero, h(0, -1) = 1 - const_s2 is nonzero, and k vanishes where it should.

    k(a, b, c) must vanish when b + cO misses O, and when b + cO contains O outside the region
    val(b) >= val(c) > val(a) - c(eta_2); also k(a, 0, 1) = 0 once val(a) >= c(eta_2).
    """
    g = special_g(eta.eta2)
    ints = DensityIntegrals(eta, g)
    gr = ints.h_ring.gr
    rec = CheckRecord("special_g_properties", "auxiliary function g")
    total = g.integral()
    rec.record(total == 0, {"property": "integral", "value": str(total)})
    h0 = ints.h(gr.from_int(0, g.level), gr.from_int(-1, g.level))
    expected = CycloNum.rational(1) - eta.const_s2
    rec.record(h0 == expected and not h0.is_zero(), {"property": "h(0,-1)", "value": h0, "expected": expected})
    ctx = ints.ctx
    p = g.p
    samples = [ctx.zero()] + [ctx.uniformizer_power(e) for e in range(-2, 3)] + [ctx.rational(1 + p), ctx.rational(-1)]
    for a in [ctx.uniformizer_power(e) for e in (1, 2)] + [ctx.rational(p * (1 + p))]:
        for b in samples:
            for c in samples:
                vb = INF if b.is_exact_zero() else b.val
                vc = INF if c.is_exact_zero() else c.val
                disjoint = vb < 0 and vc > vb
                contains = vc <= min(0, vb)
                if not disjoint and not (contains and not vb >= vc > a.val - eta.c2):
                    continue
                value = ints.k(a, b, c)
                rec.record(value.is_zero(), {"property": "k support", "a": str(a), "b": str(b), "c": str(c),
                                             "value": value})
        if a.val >= eta.c2:
            value = ints.k(a, ctx.zero(), ctx.one())
            rec.record(value.is_zero(), {"property": "k(a,0,1)", "a": str(a), "value": value})
    rec.measured["level"] = g.level
    rec.measured["h_0_minus_1"] = h0
    return rec


def run_density(cfg: SuiteConfig) -> tuple:
    fixtures = cfg.fixtures or [density_fixture(cfg.p, cfg.f)]
    records, measured = [], {}
    for fx in fixtures:
        try:
            dcfg = DensityConfig(fx.chis, cfg.level)
        except ConfigError as exc:
            eta = EtaPair.from_chis(fx.chis)
            need = max(eta.c2, 1) + special_g(eta.eta2).level
            if "empty range" in str(exc):
                raise LevelOverflow(f"{exc}; minimal level M = {need}") from exc
            raise
        rep = check_density_hypotheses(dcfg, seed=cfg.seed)
        records += _tag(rep.records, fx.name)
        measured[fx.name] = {"n_range": dcfg.n_range, "r1": rep.r1,
                             "gamma_valuation": dcfg.gamma_val,
                             "sup_valuations": {str(k): v for k, v in sorted(rep.sup_valuations.items())}}
    return records, measured


def _map(fn, items, jobs):
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


def run_suite(suite: str, cfg: SuiteConfig) -> dict:
    """Run one suite and return the report dictionary."""
    if suite not in SUITES:
        raise ConfigError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    check_budget(cfg.p, cfg.f, cfg.level, cfg.budget)
    previous_cap = order_cap()
    set_order_cap(cfg.n_max)
    try:
        measured = {}
        if suite == "explicit":
            used = cfg.fixtures or default_fixtures(cfg.p, cfg.f, cfg.level)
            chunks = _map(run_explicit_fixture, [(cfg.p, cfg.f, cfg.level, fx) for fx in used], cfg.jobs)
            records = [r for chunk in chunks for r in chunk]
        elif suite == "eigenspace":
            generic = cfg.fixtures or default_fixtures(cfg.p, cfg.f, cfg.level)
            degenerate = degenerate_fixtures(cfg.p, cfg.f)
            used = generic + degenerate
            items = [(cfg.p, cfg.f, cfg.level, fx, False) for fx in generic]
            items += [(cfg.p, cfg.f, cfg.level, fx, True) for fx in degenerate]
            chunks = _map(run_eigenspace_fixture, items, cfg.jobs)
            records = [r for chunk in chunks for r in chunk]
        elif suite == "lemmas":
            used = cfg.fixtures or default_fixtures(cfg.p, cfg.f, cfg.level)
            records = run_lemmas(cfg)
        else:
            used = cfg.fixtures or [density_fixture(cfg.p, cfg.f)]
            records, measured = run_density(cfg)
    finally:
        set_order_cap(previous_cap)
    config = cfg.to_json()
    config["fixtures"] = [fx.to_json() for fx in used]
    return build_report(suite, config, records, measured)


def build_report(suite: str, config: dict, records: list, measured: dict | None = None) -> dict:
    failed = sum(1 for r in records if r["status"] == "fail")
    report = {
        "schema": REPORT_SCHEMA,
        "suite": suite,
        "config": config,
        "records": records,
        "summary": {"checks": len(records), "passed": len(records) - failed, "failed": failed,
                    "status": "pass" if failed == 0 else "fail"},
    }
    if measured:
        report["measured"] = measured
    return report


def dump_report(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2, default=str) + "\n"


# decisions on fixture tuples

def decide_tuple(chars) -> dict:
    """Verdict record for one tuple; the primary verdict uses the sharpest available criterion."""
    t = CharTuple(chars)
    out = {"n": t.n}
    if t.n == 2:
        out["verdict"] = decide_gl2(t).to_json()
    elif t.n == 3:
        out["verdict"] = decide_gl3(t).to_json()
        out["gln_verdict"] = decide_gln(t).to_json()
        out["parabolic"] = q_parabolic(t)
    else:
        out["verdict"] = decide_gln(t).to_json()
    return out


ANCHORS = {2: "GL2 criterion", 3: "GL3 criterion"}


def run_decide(fixture) -> dict:
    records = []
    for tf in fixture.tuples:
        info = decide_tuple(tf.characters)
        rec = CheckRecord(f"decide[{tf.name}]", ANCHORS.get(len(tf.characters), "GLn criterion"))
        got = info["verdict"]["decision"]
        ok = tf.expect is None or tf.expect == got
        rec.record(ok, {"expected": tf.expect, "got": got})
        rec.measured.update(info)
        if tf.expect is not None:
            rec.measured["expected"] = tf.expect
        d = rec.to_json()
        d["fixture"] = tf.name
        records.append(d)
    return build_report("decide", {"p": fixture.p, "f": fixture.f}, records)


__all__ = [
    "SUITES", "REPORT_SCHEMA", "DEFAULT_BUDGET", "BudgetExceeded", "enumeration_cost", "check_budget",
    "CharFixture", "default_fixtures", "degenerate_fixtures", "density_fixture", "is_generic",
    "SuiteConfig", "run_suite", "build_report", "dump_report", "decide_tuple", "run_decide",
    "generalized_eigenspace_dimension", "PrecisionError", "LevelOverflow",
]
