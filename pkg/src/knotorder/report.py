"""JSON report builders and their plain-text rendering.

Reports are plain dicts of str/int/bool/list so ``json.loads(json.dumps(r))
== r`` holds. Fractions are written as "a/b" strings. Keys are emitted
sorted, so identical inputs give byte-identical output.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from typing import Any

from . import __version__
from .algebra import FiniteAbelianGroup, IntPolynomial
from .classify import (
    COROLLARY_4_2,
    THEOREM_1_2,
    classify_twisted_double,
    corollary_4_2,
    double_verdict,
    full_verdict,
    theorem_1_2_gate,
)
from .errors import InvalidSeifertMatrix
from .knots import (
    SeifertMatrix,
    alexander_polynomial,
    double_cover_homology,
    linking_form,
    twisted_double_seifert,
    two_bridge,
)
from .metabolizers import PrimaryForm, enumerate_metabolizers, verify_structure
from .numtheory import factorize
from .replay import replay

SCHEMA = 1
_INT_RE = re.compile(r"^[+-]?\d+$")


def parse_seifert(obj: Any) -> SeifertMatrix:
    """Accept {"seifert": [[...]]} or a bare nested list; entries are ints or decimal strings."""
    if isinstance(obj, dict):
        if "seifert" not in obj:
            raise InvalidSeifertMatrix('expected an object with a "seifert" key')
        obj = obj["seifert"]
    if not isinstance(obj, list) or any(not isinstance(r, list) for r in obj):
        raise InvalidSeifertMatrix("Seifert matrix must be a list of rows")
    rows = []
    for r in obj:
        row = []
        for x in r:
            if isinstance(x, bool) or not isinstance(x, (int, str)):
                raise InvalidSeifertMatrix(f"non-integer entry {x!r}")
            if isinstance(x, str):
                if not _INT_RE.match(x.strip()):
                    raise InvalidSeifertMatrix(f"non-integer entry {x!r}")
                x = int(x.strip())
            row.append(x)
        rows.append(row)
    if rows and any(len(r) != len(rows) for r in rows):
        raise InvalidSeifertMatrix("Seifert matrix must be square")
    return SeifertMatrix(rows)


def _frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _poly(f: IntPolynomial) -> dict:
    return {"coefficients": list(f.coeffs), "text": str(f)}


def _group(G: FiniteAbelianGroup) -> dict:
    return {
        "invariant_factors": list(G.invariant_factors),
        "order": G.order,
        "primary": {str(p): qs for p, qs in G.primary_decomposition().items()},
        "text": str(G),
    }


def _factorization(n: int) -> dict:
    return {str(p): e for p, e in factorize(abs(n)).pairs} if n else {}


def _header(command: str, inp: dict) -> dict:
    return {"schema": SCHEMA, "version": __version__, "command": command, "input": inp}


def analyze_report(S: SeifertMatrix) -> dict:
    delta = alexander_polynomial(S)
    H = double_cover_homology(S)
    form = linking_form(S)
    verdict = full_verdict(S)
    rep = _header("analyze", {"seifert": S.tolist()})
    rep.update(
        {
            "alexander_polynomial": _poly(delta),
            "delta_at_1": delta(1),
            "delta_at_minus_1": delta(-1),
            "delta_at_minus_1_factorization": _factorization(delta(-1)),
            "homology": _group(H),
            "linking_form": [[_frac(x) for x in row] for row in form.gram],
            "verdict": verdict.to_json(),
        }
    )
    return rep


def double_report(a: int) -> dict:
    S = twisted_double_seifert(a)
    delta = alexander_polynomial(S)
    verdict = double_verdict(a)
    rep = _header("double", {"a": a})
    rep.update(
        {
            "seifert": S.tolist(),
            "alexander_polynomial": _poly(delta),
            "four_a_plus_1": 4 * a + 1,
            "four_a_plus_1_factorization": _factorization(4 * a + 1),
            "homology": _group(double_cover_homology(S)),
            "verdict": verdict.to_json(),
        }
    )
    return rep


def double_table(lo: int, hi: int) -> dict:
    rows = []
    for a in range(lo, hi + 1):
        alg = classify_twisted_double(a)
        v = double_verdict(a)
        rows.append(
            {
                "a": a,
                "four_a_plus_1": 4 * a + 1,
                "clause": alg.clause,
                "algebraic_order": alg.kind.value,
                "witnesses": [list(w) for w in alg.witnesses],
                "status": v.status.value,
            }
        )
    rep = _header("double-table", {"from": lo, "to": hi})
    rep["rows"] = rows
    return rep


def twobridge_report(p: int, q: int) -> dict:
    K = two_bridge(p, q)
    gate = theorem_1_2_gate(K.homology)
    wit = corollary_4_2(p)
    rep = _header("twobridge", {"p": p, "q": q})
    rep.update(
        {
            "homology": _group(K.homology),
            "linking_value": _frac(K.linking_form.gram[0][0]),
            "rules": [
                {"rule": COROLLARY_4_2, "applies": wit is not None, "witnesses": [] if wit is None else [wit]},
                {"rule": THEOREM_1_2, "applies": bool(gate), "witnesses": [list(w) for w in gate]},
            ],
            "status": "infinite" if wit is not None else "unresolved",
        }
    )
    return rep


def metab_report(
    F: PrimaryForm,
    verify: bool = False,
    do_replay: bool = False,
    budget: int = 10**8,
    override: bool = False,
    jobs: int = 1,
) -> dict:
    mets = enumerate_metabolizers(F, budget=budget, override=override, jobs=jobs)
    rep = _header(
        "metab",
        {"p": F.p, "n": F.n, "d": F.d, "eps": list(F.eps), "budget": budget, "budget_override": override},
    )
    rep["count"] = len(mets)
    rep["metabolizers"] = [L.to_json() for L in mets]
    if verify:
        reports = [verify_structure(L, F) for L in mets]
        rep["structure"] = [r.to_json() for r in reports]
        rep["structure_all_passed"] = all(r.passed for r in reports)
    if do_replay:
        certs = [replay(F, L) for L in mets]
        rep["certificates"] = [c.to_json() for c in certs]
        rep["certificates_all_valid"] = all(c.valid for c in certs)
    return rep


def dumps(rep: dict) -> str:
    return json.dumps(rep, indent=2, sort_keys=True)


def render_text(rep: dict) -> str:
    cmd = rep["command"]
    out = [f"knotorder {rep['version']}  [{cmd}]"]
    if cmd in ("analyze", "double"):
        if cmd == "double":
            out.append(f"a = {rep['input']['a']}   Seifert matrix {rep['seifert']}")
        else:
            out.append(f"Seifert matrix {rep['input']['seifert']}")
        out.append(f"Alexander polynomial: {rep['alexander_polynomial']['text']}")
        if cmd == "analyze":
            fac = " ".join(f"{p}^{e}" for p, e in rep["delta_at_minus_1_factorization"].items())
            out.append(f"Delta(1) = {rep['delta_at_1']}, Delta(-1) = {rep['delta_at_minus_1']} = {fac or '1'}")
        out.append(f"H_1(double cover) = {rep['homology']['text']}")
        v = rep["verdict"]
        alg = v["algebraic_order"]
        wit = ", ".join(f"{p}^{e}" for p, e in alg["witnesses"])
        out.append(f"algebraic order: {alg['kind']} ({alg['rule']} {alg['clause']}){'  witnesses ' + wit if wit else ''}")
        for r in v["rules"]:
            mark = "fires" if r["applies"] else "silent"
            out.append(f"  {r['rule']}: {mark}  {r['detail']}")
        out.append(f"concordance: {v['status']}  ({v['reason']})")
    elif cmd == "double-table":
        out.append("a\t4a+1\tclause\talgebraic\tconcordance")
        for r in rep["rows"]:
            out.append(f"{r['a']}\t{r['four_a_plus_1']}\t{r['clause']}\t{r['algebraic_order']}\t{r['status']}")
    elif cmd == "twobridge":
        i = rep["input"]
        out.append(f"K({i['p']}, {i['q']}): H_1 = {rep['homology']['text']}, linking value {rep['linking_value']}")
        for r in rep["rules"]:
            out.append(f"  {r['rule']}: {'fires' if r['applies'] else 'silent'} {r['witnesses']}")
        out.append(f"concordance: {rep['status']}")
    elif cmd == "metab":
        i = rep["input"]
        out.append(f"(Z_{i['p']}^{i['n']})^{i['d']} with eps {tuple(i['eps'])}: {rep['count']} metabolizers")
        for idx, m in enumerate(rep["metabolizers"]):
            out.append(f"  #{idx} profile {tuple(m['profile'])} rows {m['rows']}")
        if "structure" in rep:
            out.append(f"structure checks: {'all passed' if rep['structure_all_passed'] else 'FAILED'}")
        if "certificates" in rep:
            out.append(f"replay certificates: {'all valid' if rep['certificates_all_valid'] else 'INVALID'}")
            for idx, c in enumerate(rep["certificates"]):
                lv = "; ".join(f"l={r['level']} q={r['q']} f={r['relation_str']} N={r['N']}" for r in c["levels"])
                out.append(f"  #{idx} {lv}")
    return "\n".join(out)
