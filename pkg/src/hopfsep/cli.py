"""Command line front end.

    hopfsep verify [--config FILE] [--n N] [--family F] [--mode M] [--suite S ...]
                   [--seed K] [--symbolic] [--out PATH] [--no-timestamp]
    hopfsep table  [same selection flags]
    hopfsep matchings 2 3 5 8
    hopfsep lemmas [--bound 8]

Exit codes: 0 everything passed, 1 a verification failed, 2 bad configuration.
"""

from __future__ import annotations

import argparse
import datetime
import json
import sys
from dataclasses import dataclass, field as dc_field

from . import __version__
from .casimir import (
    EtaAssignment,
    FamilyTag,
    build_casimir_rt,
    build_casimir_rth,
    classify,
)
from .clifford import CliffordAlgebra, CliffordParams, canonical_tuple
from .cowreath import (
    Cowreath,
    VerificationReport,
    check_casimir_general,
    check_casimir_reduced,
    check_casimir_rt,
    check_clifford_conditions,
    check_comodule_axioms,
    check_cowreath_axioms,
    check_en_conditions,
    check_hopf_axioms,
    merge_seed_reports,
)
from .scalar import (
    QQ_FIELD,
    ParamName,
    SymbolicField,
    alpha as alpha_name,
    beta as beta_name,
    gamma as gamma_name,
    lam as lam_name,
    mu as mu_name,
    random_assignment,
    standard_names,
)
from .setcombin import (
    double_factorial_odd,
    elements_of,
    enumerate_matchings,
    inversion_sign,
    mask_of,
    matching_sign,
    s_count_mask,
    submasks,
)

SCHEMA = 1
SUITES = ("lemmas", "hopf", "comodule", "cowreath", "casimir-rt", "casimir-rth", "general")
FAMILIES = ("zero", "alpha", "custom")
MODES = ("rt", "rth")
DEFAULT_SEEDS = (1, 2, 3)
# the layered rt/reduced/general checkers quantify over up to four basis
# elements, so by default they only run for small n
LAYER_CHECK_MAX_N = 2


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    n: int = 1
    family: str = "alpha"
    mode: str = "rt"
    params: dict = dc_field(default_factory=dict)
    eta: object = None
    mu: str | None = None
    strategy: str | None = None
    seeds: list = dc_field(default_factory=lambda: list(DEFAULT_SEEDS))
    suites: list = dc_field(default_factory=list)
    lemma_bound: int = 8
    allow_symbolic: bool = False
    output: str | None = None
    timestamp: bool = True

    def validate(self) -> "RunConfig":
        if not isinstance(self.n, int) or isinstance(self.n, bool) or self.n < 1:
            raise ConfigError("n must be an integer >= 1")
        if self.n > 16:
            raise ConfigError("n is capped at 16")
        if self.family not in FAMILIES:
            raise ConfigError(f"family must be one of {', '.join(FAMILIES)}")
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {', '.join(MODES)}")
        if self.mode == "rth" and self.family == "zero":
            raise ConfigError("mode rth is impossible for the zero family: (t_{1,∅})^2 = mu^2 * 0 cannot equal 1")
        if self.mode == "rth" and self.family != "alpha":
            raise ConfigError("mode rth requires family alpha")
        if not self.suites:
            self.suites = ["casimir-rt", "casimir-rth"] if self.mode == "rth" else ["casimir-rt"]
        for s in self.suites:
            if s not in SUITES:
                raise ConfigError(f"unknown suite {s!r}; choose from {', '.join(SUITES)}")
        if "casimir-rth" in self.suites and self.mode != "rth":
            raise ConfigError("suite casimir-rth needs mode rth")
        if self.strategy is None:
            self.strategy = "symbolic" if self.n <= 3 else "random"
        if self.strategy not in ("symbolic", "random"):
            raise ConfigError("strategy must be symbolic or random")
        if self.strategy == "symbolic" and self.n > 3 and not self.allow_symbolic:
            raise ConfigError("symbolic strategy is limited to n <= 3; pass --symbolic to force it")
        if self.strategy == "random" and len(self.seeds) < 1:
            raise ConfigError("random strategy needs at least one seed")
        if not isinstance(self.params, dict):
            raise ConfigError("params must be an object of name -> expression")
        for k in self.params:
            try:
                nm = ParamName.parse(k)
            except ValueError as exc:
                raise ConfigError(str(exc)) from None
            if nm.kind in ("eta", "mu"):
                raise ConfigError(f"{k} belongs in the eta/mu fields, not params")
            if nm.indices and max(nm.indices) > self.n:
                raise ConfigError(f"{k} refers to an index above n={self.n}")
        if self.family == "zero" and self.params:
            raise ConfigError("the zero family takes no params")
        if self.family == "alpha":
            for k in self.params:
                nm = ParamName.parse(k)
                if nm.kind in ("beta", "lambda"):
                    raise ConfigError(f"{k} is derived in the alpha family")
                if nm.kind == "alpha" and self.mode == "rth":
                    raise ConfigError("alpha is fixed to mu^-2 in mode rth")
        if self.eta not in (None, "free") and not isinstance(self.eta, dict):
            raise ConfigError('eta must be "free" or an object of eta_S -> expression')
        if isinstance(self.eta, dict):
            for k in self.eta:
                try:
                    nm = ParamName.parse(k)
                except ValueError as exc:
                    raise ConfigError(str(exc)) from None
                if nm.kind != "eta" or max(nm.indices) > self.n:
                    raise ConfigError(f"bad eta key {k}")
                if self.family == "alpha" and len(nm.indices) % 2:
                    raise ConfigError(f"{k}: odd eta values are derived in the alpha family")
        return self

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "family": self.family,
            "mode": self.mode,
            "params": dict(sorted(self.params.items())),
            "eta": self.eta if not isinstance(self.eta, dict) else dict(sorted(self.eta.items())),
            "mu": self.mu,
            "strategy": self.strategy,
            "seeds": list(self.seeds) if self.strategy == "random" else [],
            "suites": list(self.suites),
            "lemma_bound": self.lemma_bound,
        }


def load_config(path: str | None, overrides: dict) -> RunConfig:
    data: dict = {}
    if path:
        try:
            with open(path) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
    data.update({k: v for k, v in overrides.items() if v is not None})
    known = set(RunConfig.__dataclass_fields__)
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
    try:
        cfg = RunConfig(**data)
    except TypeError as exc:
        raise ConfigError(str(exc)) from None
    return cfg.validate()


# ---------------------------------------------------------------- setup


@dataclass
class Setup:
    field: object
    params: CliffordParams
    eta: EtaAssignment
    mu: object
    seed: int | None = None


def _parser_for(field, values):
    if values is None:
        return field.parse
    return lambda text: field.parse(text, values)


def _value(field, values, name: ParamName):
    return field.param(name) if values is None else field.convert(values[name])


def build_setup(cfg: RunConfig, seed: int | None = None) -> Setup:
    """Parameters, eta and mu for config; symbolic when ``seed`` is None."""
    n = cfg.n
    if seed is None:
        fld = SymbolicField.for_n(n)
        values = None
    else:
        fld = QQ_FIELD
        values = None
    attempt = 0
    while True:
        if seed is not None:
            values = random_assignment(standard_names(n), seed, attempt)
        try:
            return _build_setup(cfg, fld, values, seed)
        except ZeroDivisionError:
            if seed is None:
                raise ConfigError("a parameter expression divides by zero") from None
            attempt += 1
            if attempt > 32:
                raise ConfigError("no valid random assignment found") from None
        except ValueError as exc:
            raise ConfigError(str(exc)) from None


def _build_setup(cfg: RunConfig, fld, values, seed) -> Setup:
    n = cfg.n
    parse = _parser_for(fld, values)
    given = {ParamName.parse(k): parse(str(v)) for k, v in cfg.params.items()}
    mu = parse(cfg.mu) if cfg.mu is not None else None
    if cfg.family == "zero":
        p = CliffordParams.zero(fld, n)
        if mu is None:
            mu = fld.one
    elif cfg.family == "alpha":
        if mu is None:
            mu = _value(fld, values, mu_name())
        gam = {i: given.get(gamma_name(i), _value(fld, values, gamma_name(i))) for i in range(1, n + 1)}
        if cfg.mode == "rth":
            if not mu:
                raise ConfigError("mu must be nonzero in mode rth")
            al = mu ** -2
        else:
            al = given.get(alpha_name(), _value(fld, values, alpha_name()))
        if not al:
            raise ConfigError("the alpha family needs alpha != 0")
        p = CliffordParams.alpha_family(fld, n, alpha=al, gamma=gam)
    else:
        if mu is None:
            mu = _value(fld, values, mu_name())

        def get(nm):
            return given.get(nm, _value(fld, values, nm))

        p = CliffordParams(
            fld, n, get(alpha_name()),
            {i: get(beta_name(i)) for i in range(1, n + 1)},
            {i: get(gamma_name(i)) for i in range(1, n + 1)},
            {(i, j): get(lam_name(i, j)) for i in range(1, n + 1) for j in range(i + 1, n + 1)},
        )
    tag = classify(p)
    derive = p if (tag is not FamilyTag.ZERO and p.alpha) else None
    full = ((1 << n) - 1) << 1
    if cfg.eta == "free":
        vals = {}
        for m in submasks(full):
            if m and (derive is None or m.bit_count() % 2 == 0):
                nm = ParamName("eta", elements_of(m))
                vals[m] = _value(fld, values, nm)
        eta = EtaAssignment(fld, n, vals, derive)
    else:
        vals = {}
        for k, v in (cfg.eta or {}).items():
            vals[mask_of(ParamName.parse(k).indices)] = parse(str(v))
        eta = EtaAssignment(fld, n, vals, derive)
    return Setup(fld, p, eta, mu, seed)


# ---------------------------------------------------------------- suites


def lemma_sweep(bound: int = 8) -> VerificationReport:
    """Exhaustive check of the position-sign identities over subsets of {1..bound}
    and of the matching counts and signs over even subsets of {0..bound+1}."""
    rep = VerificationReport(f"combinatorics, bound {bound}")
    full = ((1 << bound) - 1) << 1
    masks = list(submasks(full))

    def positions(f, p):
        els = elements_of(p)
        js = [els.index(e) + 1 for e in elements_of(f)]
        r = len(js)
        return sum(js) - r * (r + 1) // 2

    with rep.condition("s-count-positions", "F ⊆ P ⊆ {1..bound}") as c:
        for p in masks:
            for f in submasks(p):
                c.check({"F": elements_of(f), "P": elements_of(p)}, s_count_mask(f, p) - positions(f, p))
    with rep.condition("s-count-drop-one", "i ∈ P ⊆ {1..bound}") as c:
        for p in masks:
            size = p.bit_count()
            for i in elements_of(p):
                b = 1 << i
                lhs = s_count_mask(p ^ b, p)
                bigger = (p >> (i + 1)).bit_count()
                c.check({"P": elements_of(p), "i": i}, lhs - (size - 1 - s_count_mask(b, p)))
                c.check({"P": elements_of(p), "i": i, "form": "count"}, lhs - bigger)
    with rep.condition("s-count-singleton-sum", "F ⊆ P ⊆ {1..bound}") as c:
        for p in masks:
            for f in submasks(p):
                k = f.bit_count()
                lhs = sum(s_count_mask(1 << e, p) for e in elements_of(f))
                c.check({"F": elements_of(f), "P": elements_of(p)}, lhs - s_count_mask(f, p) - k * (k - 1) // 2)
    with rep.condition("s-count-complement", "F ⊆ P ⊆ {1..bound}") as c:
        for p in masks:
            for f in submasks(p):
                k = f.bit_count()
                lhs = s_count_mask(f, p) + s_count_mask(p ^ f, p)
                c.check({"F": elements_of(f), "P": elements_of(p)}, lhs - k * (p.bit_count() - k))
    with rep.condition("s-count-disjoint-sum", "F ⊆ P ⊆ {1..bound}, F' ⊆ P∖F") as c:
        for p in masks:
            for f in submasks(p):
                for f2 in submasks(p ^ f):
                    lhs = sum(s_count_mask(1 << j, f | (1 << j)) for j in elements_of(f2))
                    rhs = s_count_mask(f2, p) - s_count_mask(f2, p ^ f)
                    c.check({"F'": elements_of(f2), "F": elements_of(f), "P": elements_of(p)}, lhs - rhs)
    with rep.condition("s-count-remove-subset", "F' ⊆ F ⊆ P ⊆ {1..bound}") as c:
        for p in masks:
            for f in submasks(p):
                sfp = s_count_mask(f, p)
                for f2 in submasks(f):
                    lhs = s_count_mask(f ^ f2, p ^ f2)
                    mid = sfp - sum(s_count_mask(1 << l, p) - s_count_mask(1 << l, f) for l in elements_of(f2))
                    rhs = sfp - s_count_mask(f2, p) + s_count_mask(f2, f)
                    inst = {"F'": elements_of(f2), "F": elements_of(f), "P": elements_of(p)}
                    c.check(inst, lhs - mid)
                    c.check(inst, lhs - rhs)
    with rep.condition("s-count-append-max", "F ⊆ P ⊆ {1..bound}, i > max P") as c:
        for p in masks:
            top = p.bit_length()
            for i in range(max(top, 1), bound + 1):
                b = 1 << i
                for f in submasks(p):
                    lhs = s_count_mask(f | b, p | b)
                    rhs = s_count_mask(f, p) + p.bit_count() - f.bit_count()
                    c.check({"F": elements_of(f), "P": elements_of(p), "i": i}, lhs - rhs)
    top = bound + 1
    with rep.condition("matching-count", "even S ⊆ {0..bound+1}") as c:
        sums = {}
        for s in submasks((1 << (top + 1)) - 1):
            if s.bit_count() % 2:
                continue
            ms = enumerate_matchings(s)
            c.check({"S": elements_of(s)}, len(ms) - double_factorial_odd(s.bit_count()))
            sums[s] = ms
    with rep.condition("matching-sign-sum", "even S ⊆ {0..bound+1}") as c:
        for s, ms in sums.items():
            c.check({"S": elements_of(s)}, sum(matching_sign(m) for m in ms) - 1)
    with rep.condition("matching-sign-inversions", "matchings of even S ⊆ {0..bound+1}") as c:
        for s, ms in sums.items():
            for m in ms:
                c.check({"S": elements_of(s), "matching": str(m)}, matching_sign(m) - inversion_sign(m.one_line()))
    return rep


def _casimir_reports(suite: str, cfg: RunConfig, st: Setup) -> list[VerificationReport]:
    A = CliffordAlgebra(st.params)
    extra = None if cfg.n <= 5 else 256
    seed = st.seed or 0
    reports = []
    if cfg.mode == "rth":
        table = build_casimir_rth(A, st.mu)
    else:
        table = build_casimir_rt(A, st.eta, st.mu, strict=False)
    rth = suite == "casimir-rth"
    rep = check_clifford_conditions(A, table.t, table, rth=rth, extra_sample=extra, seed=seed)
    rep.title = ("h-separability" if rth else "rt-separability") + " (Clifford form)"
    reports.append(rep)
    rep = check_en_conditions(A, canonical_tuple(A), table.t, table, rth=rth, extra_sample=extra, seed=seed)
    rep.title = ("h-separability" if rth else "rt-separability") + " (E(n)-tuple form)"
    reports.append(rep)
    if cfg.n <= LAYER_CHECK_MAX_N:
        cw = Cowreath(A)
        r1 = check_casimir_rt(cw, table)
        r2 = check_casimir_reduced(cw, table)
        if not rth:
            # h-separability conditions belong to the rth suite
            r1.conditions = [c for c in r1.conditions if c.id != "B4S"]
            r2.conditions = [c for c in r2.conditions if c.id != "B4S1"]
        reports += [r1, r2]
    return reports


def run_suite(suite: str, cfg: RunConfig, st: Setup) -> list[VerificationReport]:
    if suite == "lemmas":
        return [lemma_sweep(cfg.lemma_bound)]
    A = CliffordAlgebra(st.params)
    if suite == "hopf":
        return [check_hopf_axioms(A.hopf)]
    if suite == "comodule":
        return [check_comodule_axioms(A)]
    if suite == "cowreath":
        return [check_cowreath_axioms(Cowreath(A))]
    if suite in ("casimir-rt", "casimir-rth"):
        return _casimir_reports(suite, cfg, st)
    if suite == "general":
        table = build_casimir_rth(A, st.mu) if cfg.mode == "rth" else build_casimir_rt(A, st.eta, st.mu, strict=False)
        rep = check_casimir_general(Cowreath(A), table)
        if cfg.mode == "rt":
            rep.conditions = [c for c in rep.conditions if c.id != "B4"]
        return [rep]
    raise ConfigError(f"unknown suite {suite}")


def verify(cfg: RunConfig) -> dict:
    """Run every selected suite; returns the JSON report as a dict."""
    symbolic = cfg.strategy == "symbolic"
    setups = [build_setup(cfg)] if symbolic else [build_setup(cfg, s) for s in cfg.seeds]
    family = classify(setups[0].params).value
    suites_out = []
    overall_ok = True
    probabilistic = False
    for suite in cfg.suites:
        if suite == "lemmas" or symbolic:
            reports = run_suite(suite, cfg, setups[0])
        else:
            per_seed = [(st.seed, run_suite(suite, cfg, st)) for st in setups]
            reports = []
            for idx, rep in enumerate(per_seed[0][1]):
                reports.append(merge_seed_reports(rep.title, [(s, reps[idx]) for s, reps in per_seed]))
        ok = all(r.passed for r in reports)
        overall_ok &= ok
        prob = any(r.status == "probabilistic-pass" for r in reports)
        probabilistic |= prob
        suites_out.append({
            "suite": suite,
            "status": "fail" if not ok else ("probabilistic-pass" if prob else "pass"),
            "reports": [r.to_json(timings=cfg.timestamp) for r in reports],
        })
    st = setups[0]
    out = {"schema": SCHEMA, "tool": "hopfsep", "version": __version__}
    if cfg.timestamp:
        out["timestamp"] = datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds")
    out["config"] = cfg.to_json()
    out["family"] = family
    if symbolic:
        out["parameters"] = st.params.to_json()
    out["status"] = "fail" if not overall_ok else ("probabilistic-pass" if probabilistic else "pass")
    out["suites"] = suites_out
    return out


def cmd_verify(cfg: RunConfig) -> tuple[int, dict]:
    report = verify(cfg)
    return (0 if report["status"] != "fail" else 1), report


def cmd_table(cfg: RunConfig) -> dict:
    seed = None if cfg.strategy == "symbolic" else cfg.seeds[0]
    st = build_setup(cfg, seed)
    A = CliffordAlgebra(st.params)
    if cfg.mode == "rth":
        table = build_casimir_rth(A, st.mu)
    else:
        if classify(st.params) is FamilyTag.NOT_RT:
            raise ConfigError("parameters are NotRT: no right-trivial Casimir table exists")
        table = build_casimir_rt(A, st.eta, st.mu)
    out = {
        "schema": SCHEMA,
        "n": cfg.n,
        "mode": cfg.mode,
        "family": table.family.value,
        "strategy": cfg.strategy,
        "parameters": st.params.to_json(),
        "mu": st.field.fmt(table.mu),
        "eta": table.eta.to_json(),
        "entries": table.to_json(),
    }
    if seed is not None:
        out["seed"] = seed
    return out


def cmd_matchings(S) -> dict:
    els = sorted(set(S))
    if len(els) != len(list(S)):
        raise ConfigError("repeated elements in S")
    if len(els) % 2:
        raise ConfigError("perfect matchings need a set of even size")
    if any(e < 0 or e > 16 for e in els):
        raise ConfigError("elements must lie in 0..16")
    rows = [{"matching": str(m), "sign": matching_sign(m)} for m in enumerate_matchings(els)]
    return {"S": els, "count": len(rows), "rows": rows, "sign_sum": sum(r["sign"] for r in rows)}


def cmd_lemmas(bound: int = 8) -> VerificationReport:
    if bound < 1 or bound > 12:
        raise ConfigError("bound must lie in 1..12")
    return lemma_sweep(bound)


# ---------------------------------------------------------------- argparse


def _selection_args(sp):
    sp.add_argument("--config", help="JSON config file")
    sp.add_argument("--n", type=int)
    sp.add_argument("--family", choices=FAMILIES)
    sp.add_argument("--mode", choices=MODES)
    sp.add_argument("--suite", action="append", choices=SUITES, help="repeatable")
    sp.add_argument("--seed", type=int, help="base seed; seeds K, K+1, K+2 are used")
    sp.add_argument("--symbolic", action="store_true", help="force symbolic evaluation (slow for n >= 4)")
    sp.add_argument("--out", help="write the JSON report here")
    sp.add_argument("--no-timestamp", action="store_true", help="omit timestamp and timings")


def _overrides(args) -> dict:
    ov = {"n": args.n, "family": args.family, "mode": args.mode, "suites": args.suite, "output": args.out}
    if args.seed is not None:
        ov["seeds"] = [args.seed, args.seed + 1, args.seed + 2]
    if args.symbolic:
        ov["strategy"] = "symbolic"
        ov["allow_symbolic"] = True
    if args.no_timestamp:
        ov["timestamp"] = False
    return ov


def _warn_symbolic(cfg: RunConfig):
    if cfg.strategy == "symbolic" and cfg.n > 3:
        print(f"warning: symbolic evaluation at n={cfg.n} may take very long", file=sys.stderr)


def _emit(obj, path):
    text = json.dumps(obj, indent=2, ensure_ascii=False) + "\n"
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="hopfsep", description="Exact verification of coseparability conditions.")
    sub = ap.add_subparsers(dest="cmd", required=True)
    _selection_args(sub.add_parser("verify", help="run verification suites"))
    _selection_args(sub.add_parser("table", help="print the Casimir table"))
    m = sub.add_parser("matchings", help="list perfect matchings with signs")
    m.add_argument("elements", nargs="*", type=int)
    m.add_argument("--json", action="store_true")
    lm = sub.add_parser("lemmas", help="brute-force sweep of the combinatorial identities")
    lm.add_argument("--bound", type=int, default=8)
    lm.add_argument("--json", action="store_true")
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        if args.cmd == "verify":
            cfg = load_config(args.config, _overrides(args))
            _warn_symbolic(cfg)
            code, report = cmd_verify(cfg)
            _emit(report, cfg.output)
            if cfg.output:
                print(f"status: {report['status']} (report written to {cfg.output})", file=sys.stderr)
            return code
        if args.cmd == "table":
            cfg = load_config(args.config, _overrides(args))
            _warn_symbolic(cfg)
            _emit(cmd_table(cfg), cfg.output)
            return 0
        if args.cmd == "matchings":
            res = cmd_matchings(args.elements)
            if args.json:
                _emit(res, None)
            else:
                for r in res["rows"]:
                    print(f"{r['matching']:<40} {r['sign']:+d}")
                print(f"count {res['count']}, sign sum {res['sign_sum']}")
            return 0
        if args.cmd == "lemmas":
            rep = cmd_lemmas(args.bound)
            if args.json:
                _emit({"schema": SCHEMA, **rep.to_json(timings=False)}, None)
            else:
                print(rep.summary())
            return 0 if rep.passed else 1
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    return 2


if __name__ == "__main__":
    sys.exit(main())
