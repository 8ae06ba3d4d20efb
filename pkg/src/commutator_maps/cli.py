"""Command-line front end.

Every report starts with a header naming the tool version, the group, the
product convention, the seed and whether the table cache is in use, followed
by a summary block and a table of rows.  Exit codes: 0 success, 2 unsupported
input, 3 resource cap, 4 verification mismatch.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import shlex
import sys
from dataclasses import dataclass, fields
from fractions import Fraction

import numpy as np

from . import __version__
from .cache import ENV_VAR, cache_roundtrip, cached_table, default_cache_dir
from .character import CharacterTableError, orthogonality_errors, real_characters
from .groups import (CONVENTION, GroupError, PermutationGroup, ResourceCapError,
                     UnsupportedAutomorphisms, aut_class_orbits, automorphism_action,
                     group_new, min_centralizer_order)
from .spectral import (an_fixed_point_tail, commutator_count_check, delta_bound,
                       delta_epsilon, deviation_report, epsilon_bound,
                       equidistribution_witness, frobenius_fibers, l1_to_uniform,
                       witness_roundtrip, measure_preservation_check, closed_form_rows,
                       real_bound, sn_character_bound_check, squares_word_fibers,
                       witten_zeta, zeta2_exact, zeta_trend_report)
from .tsys import (MoveSet, commutator_generating_coverage, generating_tuples,
                   graph_components, higman_constant_on_t_systems, higman_invariant,
                   pra_component_invariant_check, pra_walk, t2_invariant_census, t_systems)
from .words import WordSyntaxError, brute_force_fibers, parse_word, sampled_fibers

log = logging.getLogger("commutator_maps")

EXIT_OK, EXIT_UNSUPPORTED, EXIT_CAP, EXIT_MISMATCH = 0, 2, 3, 4
FORMULA_WORDS = {"x1^-1x2^-1x1x2": "commutator", "x1x1x2x2": "squares"}


@dataclass(frozen=True)
class RunConfig:
    command: str
    group: str | None = None
    word: str | None = None
    mode: str | None = None
    k: int | None = None
    q: int | None = None
    s: float | None = None
    eps: str | None = None
    extended: bool = False
    family: str | None = None
    params: str | None = None
    seed: int | None = None
    steps: int | None = None
    burn_in: int | None = None
    samples: int | None = None
    fmt: str = "text"
    cache_dir: str | None = None

    def canonical(self) -> str:
        """Stable key=value form; the cache location is left out since it
        never changes a computed value."""
        parts = []
        for f in fields(self):
            v = getattr(self, f.name)
            if f.name == "cache_dir" or v is None or v is False:
                continue
            parts.append(shlex.quote(f"{f.name}={v}"))
        return " ".join(parts)

    @classmethod
    def from_canonical(cls, text: str, cache_dir: str | None = None) -> RunConfig:
        kinds = {f.name: f.type for f in fields(cls)}
        kw: dict = {"cache_dir": cache_dir}
        for item in shlex.split(text):
            key, _, raw = item.partition("=")
            t = kinds[key]
            if "bool" in t:
                kw[key] = raw == "True"
            elif "int" in t:
                kw[key] = int(raw)
            elif "float" in t:
                kw[key] = float(raw)
            else:
                kw[key] = raw
        return cls(**kw)


@dataclass
class Report:
    summary: dict
    rows: list[dict]
    exit_code: int = EXIT_OK


# -- formatting -------------------------------------------------------------

def _fmt(v):
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, (float, np.floating)):
        return float(format(float(v), ".12g"))
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (tuple, list)):
        return [_fmt(x) for x in v]
    if isinstance(v, dict):
        return {k: _fmt(x) for k, x in v.items()}
    return v


def _cell(v) -> str:
    v = _fmt(v)
    if isinstance(v, float):
        return format(v, ".12g")
    if isinstance(v, list):
        return " ".join(str(x) for x in v) if all(not isinstance(x, list) for x in v) \
            else json.dumps(v)
    return str(v)


def render(header: dict, report: Report, fmt: str) -> str:
    summary = _fmt(report.summary)
    rows = [_fmt(r) for r in report.rows]
    if fmt == "json":
        return json.dumps({"header": header, "summary": summary, "rows": rows}, indent=2) + "\n"
    out = io.StringIO()
    for key, val in header.items():
        out.write(f"# {key}: {val}\n")
    if fmt == "csv":
        for key, val in summary.items():
            out.write(f"# {key}: {_cell(val)}\n")
        if rows:
            w = csv.DictWriter(out, fieldnames=list(rows[0]), lineterminator="\n")
            w.writeheader()
            for r in rows:
                w.writerow({k: _cell(v) for k, v in r.items()})
        return out.getvalue()
    for key, val in summary.items():
        out.write(f"{key}: {_cell(val)}\n")
    if rows:
        cols = list(rows[0])
        cells = [[_cell(r[c]) for c in cols] for r in rows]
        widths = [max(len(c), *(len(row[i]) for row in cells)) for i, c in enumerate(cols)]
        out.write("\n" + "  ".join(c.ljust(w) for c, w in zip(cols, widths)).rstrip() + "\n")
        for row in cells:
            out.write("  ".join(x.ljust(w) for x, w in zip(row, widths)).rstrip() + "\n")
    return out.getvalue()


# -- commands ---------------------------------------------------------------

def _group_and_table(cfg: RunConfig):
    if not cfg.group:
        raise GroupError("--group is required")
    G = group_new(cfg.group)
    table, status = cached_table(G, cfg.cache_dir)
    if status != "disabled":
        log.info("cache %s for %s", status, G.descriptor)
    return G, table


def _class_rows(G, extra=None):
    cd = G.classes
    rows = []
    for t in range(cd.k):
        row = {"class": cd.label(t), "order": cd.orders[t], "size": cd.sizes[t],
               "centralizer": cd.centralizer_orders[t], "rep": G.label(cd.reps[t])}
        if extra:
            row.update(extra(t))
        rows.append(row)
    return rows


def cmd_info(cfg: RunConfig) -> Report:
    G, table = _group_and_table(cfg)
    d, e = delta_epsilon(table)
    summary = {"order": G.order, "k": table.k, "c": min_centralizer_order(G)}
    try:
        act = automorphism_action(G)
        summary["out"] = act.out_order
        summary["aut"] = act.description
    except UnsupportedAutomorphisms as exc:
        summary["out"] = "unavailable"
        summary["aut"] = str(exc)
    real = set(real_characters(table))
    summary.update({"degrees": list(table.degrees),
                    "real_characters": sorted(real),
                    "zeta2": witten_zeta(table, 2), "zeta2_exact": zeta2_exact(table),
                    "delta": d, "epsilon": e})
    return Report(summary, _class_rows(G))


def _formula_kind(word) -> str | None:
    return FORMULA_WORDS.get(str(word))


def cmd_fibers(cfg: RunConfig) -> Report:
    G, table = _group_and_table(cfg)
    w = parse_word(cfg.word or "[x1,x2]")
    mode = cfg.mode or "both"
    kind = _formula_kind(w)
    cd = G.classes
    formula = brute = sampled = None
    if mode in ("formula", "both"):
        if kind is None:
            raise GroupError(f"no character formula for the word {w}; use --mode brute")
        formula = frobenius_fibers(table) if kind == "commutator" else squares_word_fibers(table)
    if mode in ("brute", "both"):
        brute = brute_force_fibers(w, G)
    if mode == "sampled":
        sampled = sampled_fibers(w, G, cfg.samples or 10**6, cfg.seed or 0)
        est = sampled.per_element()
        rows = _class_rows(G, lambda t: {"hits": sampled.hits[t], "P_estimate": est[t]})
        return Report({"word": str(w), "arity": w.arity, "enumeration": "sampled",
                       "samples": sampled.samples}, rows)
    exact = formula or brute
    summary = {"word": str(w), "arity": w.arity, "enumeration": "exhaustive",
               "domain": exact.domain_size}
    E = deviation_report(table, exact).E if kind == "commutator" else None

    def extra(t):
        row = {}
        if formula:
            row["N_formula"] = formula.counts[t]
        if brute:
            row["N_brute"] = brute.counts[t]
        row["ratio"] = exact.ratio(t)
        row["deviation"] = exact.deviation(t)
        row["deviation_float"] = float(exact.deviation(t))
        if E is not None:
            row["E"] = E[t]
        return row

    rows = _class_rows(G, extra)
    l1 = l1_to_uniform(exact)
    summary.update({"conserved": sum(c * s for c, s in zip(exact.counts, cd.sizes)) == exact.domain_size,
                    "l1": l1, "l1_float": float(l1)})
    if kind is not None:
        bound = delta_bound(table) if kind == "commutator" else real_bound(table)
        summary["l1_bound"] = float(bound)
        summary["l1_within_bound"] = bound.ge(l1)
    code = EXIT_OK
    if formula and brute:
        match = formula.counts == brute.counts
        summary["formula_matches_brute"] = match
        if not match:
            code = EXIT_MISMATCH
    return Report(summary, rows, code)


def cmd_closed_forms(cfg: RunConfig) -> Report:
    q = cfg.q
    if cfg.group:
        G = group_new(cfg.group)
        if not hasattr(G, "q"):
            raise GroupError("closed-forms needs a PSL2(q) group")
        q = G.q
    if q is None:
        raise GroupError("closed-forms needs --group PSL2(q)")
    _group_and_table(RunConfig("closed-forms", group=f"PSL2({q})", cache_dir=cfg.cache_dir))
    rows = []
    for r in closed_form_rows(q):
        rows.append({"type": r.kind, "power": r.exponent, "class": r.class_index,
                     "order": r.element_order, "closed_form": r.closed_form,
                     "from_table": r.table_value, "match": r.match})
    ok = all(r["match"] for r in rows)
    return Report({"q": q, "rows": len(rows), "all_match": ok}, rows,
                  EXIT_OK if ok else EXIT_MISMATCH)


def cmd_zeta(cfg: RunConfig) -> Report:
    s = cfg.s if cfg.s is not None else 2.0
    if cfg.family:
        fam = "A" if cfg.family.upper() in ("A", "AN", "ALTERNATING") else "P"
        params = [int(x) for x in (cfg.params or ("5,6,7,8,9" if fam == "A" else "5,7,8,9,11,13")).split(",")]
        for x in params:
            _group_and_table(RunConfig("zeta", group=f"A{x}" if fam == "A" else f"PSL2({x})",
                                       cache_dir=cfg.cache_dir))
        trend = zeta_trend_report(fam, params, s)
        rows = [{"parameter": p, "order": n, "zeta_minus_1": z, "scaled": sc}
                for p, n, z, sc in trend.rows]
        return Report({"family": "A_n" if fam == "A" else "PSL2(q)", "s": s,
                       "scaling": "n^s" if fam == "A" else "q",
                       "decreasing": trend.decreasing, "max_scaled": trend.max_scaled}, rows)
    G, table = _group_and_table(cfg)
    counts = table.degree_counts()
    rows = [{"degree": d, "count": counts[d]} for d in sorted(counts)]
    return Report({"s": s, "zeta": witten_zeta(table, s), "zeta2_exact": zeta2_exact(table)}, rows)


def _aut(G):
    act = automorphism_action(G)
    return act, aut_class_orbits(G, act)


def cmd_tsystems(cfg: RunConfig) -> Report:
    G, _ = _group_and_table(cfg)
    k = cfg.k or 2
    act, orbits = _aut(G)
    V = generating_tuples(G, k)
    chi = graph_components(G, V, MoveSet(k))
    chi_ext = graph_components(G, V, MoveSet(k, extended=True))
    ts = t_systems(G, V, act, orbits)
    summary = {"k": k, "tuples": len(V), "chi": chi.count, "chi_extended": chi_ext.count,
               "t_systems": ts.count, "out": act.out_order}
    ok = ts.count <= chi_ext.count <= chi.count <= 2 * chi_ext.count
    if k == 2:
        census = t2_invariant_census(G, V, act, orbits)
        summary.update({"census": census.size, "census_labels": [list(x) for x in census.labels],
                        "c": census.c, "c_over_2out": census.centralizer_ratio,
                        "higman_constant": higman_constant_on_t_systems(G, V, ts, orbits),
                        "pra_class_invariant": pra_component_invariant_check(G, V, chi)})
        ok = ok and census.size <= ts.count and summary["higman_constant"] \
            and summary["pra_class_invariant"]
    summary["connectivity_agrees"] = (chi.count == 1) == (chi_ext.count == 1)
    summary["chain_ok"] = ok
    rows = []
    for c in range(ts.count):
        r = ts.representatives[c]
        row = {"component": c, "size": ts.sizes[c], "representative": list(V.tuples[r])}
        if ts.higman is not None:
            row["higman"] = list(ts.higman[c])
        rows.append(row)
    return Report(summary, rows, EXIT_OK if ok else EXIT_MISMATCH)


def cmd_components(cfg: RunConfig) -> Report:
    G, _ = _group_and_table(cfg)
    k = cfg.k or 2
    V = generating_tuples(G, k)
    cs = graph_components(G, V, MoveSet(k, extended=cfg.extended))
    orbits = None
    if k == 2:
        try:
            orbits = _aut(G)[1]
        except UnsupportedAutomorphisms:
            orbits = None
    rows = []
    for c in range(cs.count):
        r = cs.representatives[c]
        tup = V.tuples[r]
        row = {"component": c, "size": cs.sizes[c], "representative": list(tup)}
        if k == 2:
            row["commutator_class"] = int(G.classes.class_of[G.commutator(int(tup[0]), int(tup[1]))])
            if orbits is not None:
                row["higman"] = list(higman_invariant(G, tup, orbits))
        rows.append(row)
    summary = {"k": k, "edges": "extended" if cfg.extended else "pra",
               "tuples": len(V), "components": cs.count}
    return Report(summary, rows)


def cmd_walk(cfg: RunConfig) -> Report:
    G, _ = _group_and_table(cfg)
    k = cfg.k or 3
    steps = 1 if cfg.steps is None else cfg.steps
    burn = 1000 if cfg.burn_in is None else cfg.burn_in
    n_samples = cfg.samples or 10**4
    seed = cfg.seed or 0
    w = pra_walk(G, k, steps, burn, n_samples, seed)
    rows = [{"sample": i, "element": int(x), "label": G.label(int(x))}
            for i, x in enumerate(w.samples)]
    summary = {"k": k, "steps": steps, "burn_in": burn, "samples": n_samples,
               "start": list(w.start), "l1_to_uniform": w.l1_to_uniform(G.order)}
    return Report(summary, rows)


def cmd_census(cfg: RunConfig) -> Report:
    G, _ = _group_and_table(cfg)
    act, orbits = _aut(G)
    V = generating_tuples(G, 2)
    census = t2_invariant_census(G, V, act, orbits)
    cov = commutator_generating_coverage(G, V)
    rows = [{"label": list(lab), "classes": " ".join(G.classes.label(t) for t in lab)}
            for lab in census.labels]
    summary = {"census": census.size, "c": census.c, "out": census.out_order,
               "c_over_2out": census.centralizer_ratio, "pairs": len(V),
               "covered": len(cov.covered), "covered_fraction": cov.fraction,
               "coverage_lower_bound": cov.lower_bound, "coverage_bound_holds": cov.verdict,
               "coverage_bound_vacuous": cov.vacuous}
    return Report(summary, rows, EXIT_OK if cov.verdict else EXIT_MISMATCH)


def cmd_bound_check(cfg: RunConfig) -> Report:
    G, table = _group_and_table(cfg)
    fib = frobenius_fibers(table)
    sq = squares_word_fibers(table)
    eps = Fraction(cfg.eps) if cfg.eps else epsilon_bound(table)
    delta = delta_bound(table)
    l1, l1sq = l1_to_uniform(fib), l1_to_uniform(sq)
    wit = equidistribution_witness(fib, eps)
    count = commutator_count_check(fib, delta)
    rt = witness_roundtrip(fib, eps)
    rng = np.random.default_rng(cfg.seed or 0)
    subsets_ok = True
    for _ in range(cfg.samples or 50):
        chosen = np.flatnonzero(rng.random(G.order) < rng.random())
        subsets_ok &= measure_preservation_check(fib, chosen, eps, G.classes.class_of).ok
    row_err, col_err = orthogonality_errors(table)
    checks = {
        "orthogonality": max(row_err, col_err) <= 1e-8,
        "commutator_l1_le_delta": delta.ge(l1),
        "squares_l1_le_real_bound": real_bound(table).ge(l1sq),
        "deviation_le_E": deviation_report(table, fib).ok,
        "witness_at_epsilon": wit.verdict,
        "roundtrip": rt.forward_ok and rt.backward_ok,
        "measure_preservation": bool(subsets_ok),
        "commutator_count": count.verdict,
    }
    summary = {"zeta2": witten_zeta(table, 2), "delta": float(delta), "epsilon": float(eps),
               "l1_commutator": l1, "l1_squares": l1sq, "commutators": count.count,
               "commutator_bound_vacuous": count.vacuous}
    # with a user-chosen tolerance the epsilon-dependent checks are observations only
    soft = {"witness_at_epsilon", "roundtrip", "measure_preservation"} if cfg.eps else set()
    rows = [{"check": name, "holds": ok, "binding": name not in soft}
            for name, ok in checks.items()]
    if isinstance(G, PermutationGroup) and not G.alternating and 5 <= G.n <= 8:
        rep = sn_character_bound_check(G.n, table, G.classes)
        rows.append({"check": "sn_character_bound", "holds": rep.ok, "binding": True})
        summary["sn_classes_checked"] = len(rep.checked)
        summary["sn_classes_skipped"] = len(rep.skipped)
    if isinstance(G, PermutationGroup) and G.alternating:
        tails = [an_fixed_point_tail(G.n, f) for f in range(1, G.n + 1)]
        rows.append({"check": "fixed_point_tail", "holds": all(t.ok for t in tails), "binding": True})
    ok = all(r["holds"] for r in rows if r["binding"])
    return Report(summary, rows, EXIT_OK if ok else EXIT_MISMATCH)


def cmd_cache_check(cfg: RunConfig) -> Report:
    if not cfg.cache_dir:
        raise GroupError(f"cache-check needs --cache-dir or ${ENV_VAR}")
    G = group_new(cfg.group or "")
    res = cache_roundtrip(G, cfg.cache_dir)
    ok = all(res.values())
    return Report(res, [], EXIT_OK if ok else EXIT_MISMATCH)


COMMANDS = {
    "info": cmd_info, "fibers": cmd_fibers, "closed-forms": cmd_closed_forms, "zeta": cmd_zeta,
    "tsystems": cmd_tsystems, "components": cmd_components, "walk": cmd_walk,
    "census": cmd_census, "bound-check": cmd_bound_check, "cache-check": cmd_cache_check,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--group", help='group descriptor, e.g. "A5", "S6", "PSL2(7)", "C12", "S3xC2"')
    common.add_argument("--format", dest="fmt", choices=("json", "csv", "text"), default="text")
    common.add_argument("--cache-dir", help=f"character-table cache (default: ${ENV_VAR})")
    common.add_argument("--seed", type=int)
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="commutator-maps",
                                description="Exact commutator-map and word-map computations.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("info", parents=[common], help="orders, classes, zeta(2), delta, epsilon")
    f = sub.add_parser("fibers", parents=[common], help="word-map fiber table")
    f.add_argument("--word", default="[x1,x2]")
    f.add_argument("--mode", choices=("formula", "brute", "both", "sampled"), default="both")
    f.add_argument("--samples", type=int)
    pr = sub.add_parser("closed-forms", parents=[common], help="PSL2(q) closed-form deviations")
    pr.add_argument("--q", type=int)
    z = sub.add_parser("zeta", parents=[common], help="Witten zeta values and trends")
    z.add_argument("--s", type=float)
    z.add_argument("--family", choices=("A", "PSL2"))
    z.add_argument("--params", help="comma-separated n or q values")
    for name, helptext in (("tsystems", "T-systems, Higman census, component chain"),
                           ("components", "components of the PRA or extended graph")):
        t = sub.add_parser(name, parents=[common], help=helptext)
        t.add_argument("--k", type=int, default=2)
        if name == "components":
            t.add_argument("--extended", action="store_true")
    w = sub.add_parser("walk", parents=[common], help="product replacement walk samples")
    w.add_argument("--k", type=int, default=3)
    w.add_argument("--steps", type=int)
    w.add_argument("--burn-in", type=int)
    w.add_argument("--samples", type=int)
    sub.add_parser("census", parents=[common], help="Higman labels and commutator coverage")
    b = sub.add_parser("bound-check", parents=[common], help="inequality suite for one group")
    b.add_argument("--samples", type=int, help="number of random subsets")
    b.add_argument("--eps", help="tolerance override as a rational, e.g. 3/4")
    sub.add_parser("cache-check", parents=[common], help="write, reload and compare a table")
    return p


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    names = {f.name for f in fields(RunConfig)}
    kw = {k: v for k, v in vars(ns).items() if k in names}
    if kw.get("cache_dir") is None:
        env = default_cache_dir()
        kw["cache_dir"] = str(env) if env else None
    return RunConfig(**kw)


def header(cfg: RunConfig) -> dict:
    return {"tool": "commutator-maps", "version": __version__, "command": cfg.command,
            "group": cfg.group or "-", "convention": CONVENTION,
            "seed": "-" if cfg.seed is None else cfg.seed,
            "cache": "enabled" if cfg.cache_dir else "disabled",
            "config": cfg.canonical()}


def run(cfg: RunConfig) -> tuple[str, int]:
    """Execute one configuration; returns the rendered report and exit code."""
    report = COMMANDS[cfg.command](cfg)
    return render(header(cfg), report, cfg.fmt), report.exit_code


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if ns.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s", stream=sys.stderr)
    logging.captureWarnings(True)
    cfg = config_from_args(ns)
    try:
        text, code = run(cfg)
    except (GroupError, WordSyntaxError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except (ResourceCapError, CharacterTableError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    sys.stdout.write(text)
    if code == EXIT_MISMATCH:
        print("verification mismatch", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
