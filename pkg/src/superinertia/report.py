"""Reports (JSON, text, DOT) and the corpus runner behind ``check``."""

from __future__ import annotations

import json
import time
from fractions import Fraction

from .documents import corpus, document_of, parse_document
from .errors import VerdictFailure
from .pipeline import Analysis
from .valued import format_value, point_labels


def _q(x) -> str:
    return format_value(x)


def _matrix(rows) -> list[list[str]]:
    return [[_q(x) for x in row] for row in rows]


def _members(config, s) -> list[str]:
    labels = point_labels(config.h)
    return [labels[k] for k in sorted(s.members)]


def run_report(doc, oracle: bool = False, ell: int | None = None, power: int = 1) -> dict:
    """Full deterministic report for one input document.

    Validation errors propagate as exceptions carrying their exit code;
    cross-check outcomes are recorded under ``verdicts``.
    """
    config = parse_document(doc)
    a = Analysis(config)
    tree, classes, sk, engine = a.tree, a.classes, a.skeleton, a.engine

    clusters = []
    for s in tree.non_singletons():
        clusters.append({
            "id": s.id,
            "members": _members(config, s),
            "depth": _q(s.depth),
            "parent": s.parent,
            "even_partitionable": tree.is_even_partitionable(s),
            "ubereven": classes.is_ubereven(s),
            "pair_index": classes.pair_index(s),
        })

    points = {}
    for i, d in sk.all_distinguished.items():
        points[str(i)] = {"vbar": str(d.vbar), "vhat": str(d.vhat), "tilde_down": str(d.tilde_down),
                          "tilde_up": str(d.tilde_up), "parent": d.parent}

    transvections = [{
        "cluster": _members(config, d.cluster),
        "partner": _members(config, d.partner),
        "exponent": _q(d.exponent),
        "support": list(d.support),
        "ubereven": d.ubereven,
    } for d in a.plan]

    grams = {"formula": _matrix(a.gram_formula), "transvections": _matrix(a.gram_transvections)}
    if oracle:
        grams["oracle"] = _matrix(a.gram_oracle)

    verdicts = a.verdicts(with_oracle=oracle)
    monodromy: dict = {"block": None, "factored": None}
    if verdicts.get("monodromy_block_matches_product"):
        mono = a.monodromy
        monodromy["block"] = _matrix(mono.block)
        if mono.factored is not None:
            monodromy["factored"] = mono.factored.tolist()
            if ell is not None:
                modulus = ell ** power
                monodromy["reduced"] = {"modulus": modulus,
                                        "matrix": (mono.factored % modulus).tolist()}

    torsion = []
    for i in range(config.h + 1):
        row = {"index": i, "sigma": list(a.torsion.sigma_char(i).values),
               "abel_jacobi": list(a.torsion.aj_ramification(i).values)}
        if i >= 1:
            try:
                row["subtree"] = sorted(a.torsion.subtree_indices(i))
                row["weighted_reduction"] = list(a.torsion.weighted_reduction(i).values)
                row["identity_holds"] = True
            except VerdictFailure:
                row["identity_holds"] = False
        torsion.append(row)

    return {
        "config": document_of(config),
        "genus": config.genus,
        "tube_radius": _q(config.tube),
        "clusters": clusters,
        "index_tree": [list(e) for e in sk.index_tree_edges()],
        "distinguished_points": points,
        "transvections": transvections,
        "gram": grams,
        "monodromy": monodromy,
        "torsion": torsion,
        "verdicts": verdicts,
        "findings": {
            "stated_condition_mismatches": [list(t) for t in engine.stated_condition_mismatches()],
            "containment_support_differences": a.containment_support_differences(),
        },
    }


def failed_verdicts(report: dict) -> list[str]:
    return [k for k, ok in report["verdicts"].items() if not ok]


def emit_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2)


def emit_text(report: dict) -> str:
    cfg = report["config"]
    lines = [f"p = {cfg['p']}, vp = {cfg['vp']}, mode = {cfg['mode']}, genus = {report['genus']}, "
             f"tube radius = {report['tube_radius']}", "", "clusters:"]
    for c in report["clusters"]:
        flags = [name for name in ("even_partitionable", "ubereven") if c[name]]
        if c["pair_index"] is not None:
            flags.append(f"pair {c['pair_index']}")
        lines.append(f"  #{c['id']} {{{', '.join(c['members'])}}} depth {c['depth']} "
                     f"parent {c['parent']} {' '.join(flags)}".rstrip())
    lines.append("index tree: " + ", ".join(f"{a}->{b}" for a, b in report["index_tree"]))
    lines += ["", "transvections:"]
    for t in report["transvections"]:
        lines.append(f"  {{{', '.join(t['cluster'])}}} -> {{{', '.join(t['partner'])}}} "
                     f"m = {t['exponent']} support {t['support']}")
    for name, rows in report["gram"].items():
        lines += ["", f"gram ({name}):"] + ["  " + "  ".join(f"{x:>4}" for x in row) for row in rows]
    lines += ["", "verdicts:"]
    lines += [f"  {'ok  ' if ok else 'FAIL'} {k}" for k, ok in sorted(report["verdicts"].items())]
    return "\n".join(lines) + "\n"


def emit_dot(report: dict) -> str:
    out = ["digraph clusters {", "  node [shape=box];"]
    for c in report["clusters"]:
        flags = "".join(f"\\n{name}" for name in ("ubereven",) if c[name])
        if c["pair_index"] is not None:
            flags += f"\\npair {c['pair_index']}"
        out.append(f'  c{c["id"]} [label="{{{", ".join(c["members"])}}}\\ndepth {c["depth"]}{flags}"];')
    for c in report["clusters"]:
        if c["parent"] is not None:
            out.append(f"  c{c['parent']} -> c{c['id']};")
    out += ["}", "digraph index_tree {"]
    h = len(report["config"]["branch"]) - 1
    out += [f"  i{k} [label=\"{k}\"];" for k in range(h + 1)]
    out += [f"  i{a} -> i{b};" for a, b in report["index_tree"]]
    out.append("}")
    return "\n".join(out) + "\n"


def run_corpus(count: int, with_oracle: bool = True) -> dict:
    """Analyze ``count`` generated instances; returns failure keys and timing."""
    start = time.perf_counter()
    failures = []
    for key, doc in corpus(count):
        try:
            results = Analysis(parse_document(doc)).verdicts(with_oracle)
        except Exception as exc:  # any crash is a corpus failure
            failures.append({"instance": _key(key), "error": f"{type(exc).__name__}: {exc}"})
            continue
        bad = [k for k, ok in results.items() if not ok]
        if bad:
            failures.append({"instance": _key(key), "failed": bad})
    return {"instances": count, "failures": failures, "seconds": round(time.perf_counter() - start, 3)}


def _key(key) -> list:
    p, h, vp, seed = key
    return [p, h, _q(Fraction(vp)), seed]
