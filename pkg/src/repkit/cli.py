"""Command-line front end.

Every command takes --seed and produces deterministic output for a fixed
configuration (JSON with sorted keys, or CSV with a versioned header
comment).  Sweep-style commands order their rows by grid point.  The
REPKIT_WORKERS environment variable caps the process pool used by sweeps
(default 1: sequential).
"""

import argparse
import csv
import io
import json
import math
import os
import sys

import numpy as np

from . import graphstab, compiler, rep_protocol, purification, lme_classical
from .canonical_form import CFParams, cf_circuit, param_count


def _rng(args):
    return np.random.default_rng(args.seed)


def _emit(args, text):
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


def _load_graph(name_or_path):
    if name_or_path in ("rep8", "mes6"):
        return graphstab.builtin_graph(name_or_path)
    with open(name_or_path) as fh:
        return graphstab.Graph.from_json(fh.read())


def _parse_angles(text, expected):
    vals = [float(x) for x in text.split(",")]
    if len(vals) != expected:
        raise SystemExit(f"expected {expected} angles, got {len(vals)}")
    return vals


def _parse_qubits(text):
    return tuple(int(x) for x in text.split(","))


# ---------------------------------------------------------------------------
# rep


def cmd_rep_run(args):
    rng = _rng(args)
    if args.random:
        params = CFParams.random(args.n, rng)
    elif args.angles:
        params = CFParams(args.n, _parse_angles(args.angles, param_count(args.n)))
    else:
        raise SystemExit("provide --angles or --random")
    runs = [rep_protocol.run_rep(args.n, params, rng) for _ in range(args.runs)]
    if args.format == "csv":
        _emit(args, rep_protocol.runs_to_csv(runs))
    else:
        payload = [r.to_dict() for r in runs]
        _emit(args, json.dumps(payload[0] if args.runs == 1 else payload,
                               sort_keys=True, indent=1))
    return 0 if all(r.bob_state_fidelity >= 1 - 1e-9 for r in runs) else 1


def cmd_rep_mes(args):
    rng = _rng(args)
    if args.random:
        a1, a2, a5 = rng.uniform(0, 2 * math.pi, size=3)
    else:
        a1, a2, a5 = _parse_angles(args.angles, 3)
    run = rep_protocol.run_mes_rep(a1, a2, a5, rng)
    _emit(args, json.dumps(run.to_dict(), sort_keys=True, indent=1))
    return 0 if run.bob_state_fidelity >= 1 - 1e-9 else 1


def cmd_rep_audit(args):
    rng = _rng(args)
    pa = (CFParams(args.n, _parse_angles(args.params_a, param_count(args.n)))
          if args.params_a else CFParams.random(args.n, rng))
    pb = (CFParams(args.n, _parse_angles(args.params_b, param_count(args.n)))
          if args.params_b else CFParams.random(args.n, rng))
    report = rep_protocol.obliviousness_audit(args.n, pa, pb, args.runs, rng)
    _emit(args, json.dumps(report.to_dict(), sort_keys=True, indent=1))
    return 0 if (report.message_independent and report.resource_independent) else 1


# ---------------------------------------------------------------------------
# compile


def cmd_compile(args):
    seq = cf_circuit(args.n, mes=args.mes)
    cp = compiler.compile_sequence(seq)
    _emit(args, cp.to_json())
    return 0


# ---------------------------------------------------------------------------
# graph


def cmd_graph_color(args):
    g = _load_graph(args.graph)
    chi, coloring = graphstab.chromatic_info(g)
    out = {"graph": args.graph, "n": g.n, "chromatic_number": chi,
           "coloring": coloring}
    third = graphstab.singleton_third_color_coloring(g)
    if chi == 3 and third is not None:
        out["singleton_third_color"] = sorted(third[2])
    _emit(args, json.dumps(out, sort_keys=True, indent=1))
    return 0


def cmd_graph_lc_orbit(args):
    g = _load_graph(args.graph)
    orbit = graphstab.lc_orbit(g, max_size=args.max_size)
    out = {"graph": args.graph, "classes_up_to_isomorphism": len(orbit),
           "complete": orbit.complete}
    if args.find_bipartite:
        bip = orbit.bipartite_members()
        out["bipartite_member_found"] = bool(bip)
        if bip:
            out["bipartite_edges"] = [list(e) for e in bip[0].edges()]
            labeled = graphstab.bipartite_lc_representative(g)
            if labeled is not None:
                out["labeled_bipartite_edges"] = [list(e) for e in labeled.edges()]
    _emit(args, json.dumps(out, sort_keys=True, indent=1))
    return 0


def cmd_graph_lc_equiv(args):
    ga = _load_graph(args.graph_a)
    gb = _load_graph(args.graph_b)
    eq = graphstab.is_lc_equivalent(ga, gb, max_size=args.max_size)
    _emit(args, json.dumps({"graph_a": args.graph_a, "graph_b": args.graph_b,
                            "lc_equivalent": eq}, sort_keys=True, indent=1))
    return 0


# ---------------------------------------------------------------------------
# purify

_THRESHOLD_CSV_HEADER = "# repkit purify threshold v1"


def _threshold_csv_rows(rows):
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow([_THRESHOLD_CSV_HEADER])
    w.writerow(["graph", "q", "transmitted", "p_star",
                "iterations_at_threshold", "seconds"])
    for r in rows:
        w.writerow([r["graph"], f"{r['q']:.6g}",
                    ";".join(map(str, r["transmitted"])),
                    f"{r['p_star']:.4f}", r["iterations_at_threshold"],
                    f"{r['seconds']:.3f}"])
    return buf.getvalue()


def _default_transmitted(name):
    if name == "rep8":
        return graphstab.REP8_BOB_QUBITS
    if name == "mes6":
        return graphstab.MES6_BOB_QUBITS
    raise SystemExit("--transmitted is required for graphs loaded from files")


def _threshold_row(name_or_path, q, transmitted, tol):
    if name_or_path in ("rep8", "mes6"):
        g, coloring = purification.scenario(name_or_path)
    else:
        g = _load_graph(name_or_path)
        chi, colors = graphstab.chromatic_info(g)
        coloring = [set(v + 1 for v in range(g.n) if colors[v] == c)
                    for c in range(chi)]
    res = purification.threshold_search(g, coloring, transmitted, q, tol=tol)
    return {"graph": name_or_path, "q": q, "transmitted": tuple(transmitted),
            "p_star": res.p_star,
            "iterations_at_threshold": res.iterations_at_threshold,
            "seconds": res.seconds}


def cmd_purify_threshold(args):
    if args.tol <= 0:
        raise SystemExit("--tol must be positive")
    transmitted = (_parse_qubits(args.transmitted) if args.transmitted
                   else _default_transmitted(args.graph))
    row = _threshold_row(args.graph, args.q, transmitted, args.tol)
    _emit(args, _threshold_csv_rows([row]))
    return 0


def cmd_purify_sweep(args):
    if args.tol <= 0:
        raise SystemExit("--tol must be positive")
    transmitted = (_parse_qubits(args.transmitted) if args.transmitted
                   else _default_transmitted(args.graph))
    qs = sorted({float(x) for x in args.q_list.split(",")}, reverse=True)
    jobs = [(args.graph, q, transmitted, args.tol) for q in qs]
    workers = int(os.environ.get("REPKIT_WORKERS", "1"))
    if workers > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_threshold_row_star, jobs))
    else:
        rows = [_threshold_row_star(j) for j in jobs]
    rows.sort(key=lambda r: -r["q"])
    _emit(args, _threshold_csv_rows(rows))
    return 0


def _threshold_row_star(job):
    return _threshold_row(*job)


def cmd_purify_variants(args):
    rows = purification.variant_thresholds(tol=args.tol)
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(["# repkit purify variants v1"])
    w.writerow(["graph", "q", "transmitted", "kept_receiver_qubit", "p_star",
                "iterations_at_threshold", "seconds"])
    for r in rows:
        w.writerow([r["graph"], f"{r['q']:.6g}",
                    ";".join(map(str, r["transmitted"])),
                    r["kept_receiver_qubit"], f"{r['p_star']:.4f}",
                    r["iterations_at_threshold"], f"{r['seconds']:.3f}"])
    _emit(args, buf.getvalue())
    return 0


# ---------------------------------------------------------------------------
# ppt / lme


def cmd_ppt_wstate(args):
    boundary = purification.w_ppt_boundary(tol=args.tol)
    _emit(args, json.dumps({"w_ppt_boundary": round(boundary, 6),
                            "tol": args.tol}, sort_keys=True, indent=1))
    return 0


def cmd_lme_send(args):
    rng = _rng(args)
    with open(args.spec) as fh:
        spec = lme_classical.LmesSpec.from_json(fh.read())
    raw = bytes.fromhex(args.bits)
    bits = [(byte >> (7 - i)) & 1 for byte in raw for i in range(8)]
    bits = bits[:len(lme_classical.default_carriers(spec))]
    run = lme_classical.classical_channel_demo(spec, bits, rng)
    out = {"carriers": list(run.carriers), "payload": run.payload,
           "received": run.received,
           "delivered": run.payload == run.received}
    _emit(args, json.dumps(out, sort_keys=True, indent=1))
    return 0 if run.payload == run.received else 1


# ---------------------------------------------------------------------------


def build_parser():
    p = argparse.ArgumentParser(prog="repkit",
                                description="remote entanglement preparation toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    def add_common(sp):
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--out", default=None, help="write output to a file")

    rep = sub.add_parser("rep", help="run the preparation protocol")
    rep_sub = rep.add_subparsers(dest="rep_command", required=True)

    r = rep_sub.add_parser("run", help="full protocol run(s)")
    r.add_argument("--n", type=int, default=3, choices=(2, 3))
    r.add_argument("--angles", help="comma-separated parameter angles")
    r.add_argument("--random", action="store_true")
    r.add_argument("--runs", type=int, default=1)
    r.add_argument("--format", choices=("json", "csv"), default="json")
    add_common(r)
    r.set_defaults(func=cmd_rep_run)

    m = rep_sub.add_parser("mes", help="three-parameter 6-qubit variant")
    m.add_argument("--angles", help="a1,a2,a5")
    m.add_argument("--random", action="store_true")
    add_common(m)
    m.set_defaults(func=cmd_rep_mes)

    a = rep_sub.add_parser("audit", help="obliviousness audit")
    a.add_argument("--n", type=int, default=2, choices=(2, 3))
    a.add_argument("--params-a")
    a.add_argument("--params-b")
    a.add_argument("--runs", type=int, default=4096)
    add_common(a)
    a.set_defaults(func=cmd_rep_audit)

    c = sub.add_parser("compile", help="emit the compiled protocol as JSON")
    c.add_argument("--n", type=int, default=3, choices=(2, 3))
    c.add_argument("--mes", action="store_true")
    add_common(c)
    c.set_defaults(func=cmd_compile)

    gr = sub.add_parser("graph", help="graph-state tooling")
    gr_sub = gr.add_subparsers(dest="graph_command", required=True)

    gc = gr_sub.add_parser("color", help="exact chromatic number")
    gc.add_argument("--graph", default="rep8")
    add_common(gc)
    gc.set_defaults(func=cmd_graph_color)

    go = gr_sub.add_parser("lc-orbit", help="orbit under local complementation")
    go.add_argument("--graph", default="rep8")
    go.add_argument("--find-bipartite", action="store_true")
    go.add_argument("--max-size", type=int, default=100000)
    add_common(go)
    go.set_defaults(func=cmd_graph_lc_orbit)

    ge = gr_sub.add_parser("lc-equiv", help="LC equivalence of two graphs")
    ge.add_argument("--graph-a", required=True)
    ge.add_argument("--graph-b", required=True)
    ge.add_argument("--max-size", type=int, default=100000)
    add_common(ge)
    ge.set_defaults(func=cmd_graph_lc_equiv)

    pu = sub.add_parser("purify", help="purification thresholds")
    pu_sub = pu.add_subparsers(dest="purify_command", required=True)

    pt = pu_sub.add_parser("threshold", help="single threshold search")
    pt.add_argument("--graph", default="rep8")
    pt.add_argument("--q", type=float, default=1.0)
    pt.add_argument("--transmitted", help="comma-separated qubit ids")
    pt.add_argument("--tol", type=float, default=1e-3)
    add_common(pt)
    pt.set_defaults(func=cmd_purify_threshold)

    ps = pu_sub.add_parser("sweep", help="threshold sweep over q values")
    ps.add_argument("--graph", default="rep8")
    ps.add_argument("--q-list", default="1.0,0.99,0.97")
    ps.add_argument("--transmitted")
    ps.add_argument("--tol", type=float, default=1e-3)
    add_common(ps)
    ps.set_defaults(func=cmd_purify_sweep)

    pv = pu_sub.add_parser("variants", help="two-transmitted-qubit scenarios")
    pv.add_argument("--tol", type=float, default=1e-3)
    add_common(pv)
    pv.set_defaults(func=cmd_purify_variants)

    pp = sub.add_parser("ppt", help="partial-transpose boundaries")
    pp_sub = pp.add_subparsers(dest="ppt_command", required=True)
    pw = pp_sub.add_parser("wstate", help="W-state PPT boundary")
    pw.add_argument("--tol", type=float, default=1e-3)
    add_common(pw)
    pw.set_defaults(func=cmd_ppt_wstate)

    lm = sub.add_parser("lme", help="classical channel over LME preparation")
    lm_sub = lm.add_subparsers(dest="lme_command", required=True)
    ls = lm_sub.add_parser("send", help="send payload bits")
    ls.add_argument("--spec", required=True, help="LME spec JSON file")
    ls.add_argument("--bits", required=True, help="payload as hex")
    add_common(ls)
    ls.set_defaults(func=cmd_lme_send)

    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
