"""Batch driver: validate a JSON task document, run its checks, print a report.

Exit codes: 0 when every check passes, 1 when some check fails, 2 when the
input is malformed (the diagnostic names the offending JSON path).
"""

from __future__ import annotations

import argparse
import json
import sys

import jsonschema

from . import documents as docs
from .bundle import is_subbundle, principal_defects, square_witness, verify_bun_subobject_axioms
from .chains import fibre_chain, make_chain, verify_chaincat_subobject_axioms
from .errors import BunchainError, MalformedDocument, UnknownKind
from .exact import SequenceLadder, is_exact, is_subsequence, validate_ladder
from .fincat import SubobjectChoice, category_from_json, check_category_laws, verify_subobject_choice
from .jets import (
    curve_probe,
    equivalent_to_order,
    jet_chain_descriptor,
    jet_of,
    project,
    prolong,
    prolong_section,
)
from .report import VerificationReport
from .schemas import KINDS, emit_schema, schema_for

EXIT_PASS, EXIT_FAIL, EXIT_MALFORMED = 0, 1, 2


# --- dispatch ------------------------------------------------------------------


def _category(payload, report, seed):
    with docs.at("$.payload"):
        cat = category_from_json(payload)
    with docs.at("$.payload.subobjects"):
        choice = SubobjectChoice(cat, payload["subobjects"]).check_subcategory()
    report.extend(check_category_laws(cat), "laws.")
    report.extend(verify_subobject_choice(choice))
    report.data.update(objects=len(cat.objects), morphisms=len(cat.morphisms))


def _bundle_family(payload, report, seed):
    family = docs.load_bundles(payload["bundles"], "$.payload.bundles")
    with docs.at("$.payload"):
        sub = verify_bun_subobject_axioms(family, choice=payload.get("choice", "inclusions"),
                                          method=payload.get("method", "auto"))
    report.extend(sub)
    report.data.update(sub.data)


def _load_chain(payload, path):
    """Bundles plus link pairs; square failures are left to the caller."""
    bundles = docs.load_bundles(payload["bundles"], f"{path}.bundles")
    links = payload["links"]
    if len(links) != len(bundles) - 1:
        raise MalformedDocument(f"{path}.links", f"{len(bundles)} bundles need {len(bundles) - 1} links")
    pairs = [docs.load_link(v, bundles[i], bundles[i + 1], f"{path}.links[{i}]") for i, v in enumerate(links)]
    return bundles, pairs


def _chain(payload, report, seed):
    bundles, pairs = _load_chain(payload, "$.payload")
    for i, (u, f) in enumerate(pairs):
        bad = square_witness(bundles[i], bundles[i + 1], u, f)
        report.add(f"link[{i}]", bad is None,
                   bad and {"element": bad[0], "via_top": bad[1], "via_bottom": bad[2]},
                   "link square commutes")
    if report.passed:
        make_chain(bundles, pairs, payload.get("name"))
    actions = payload.get("actions")
    if actions is None:
        return
    if len(actions) != len(bundles):
        raise MalformedDocument("$.payload.actions", "give one action (or null) per bundle")
    orders = []
    for i, spec in enumerate(actions):
        if spec is None:
            report.skip(f"principal[{i}]", "no action supplied")
            orders.append(None)
            continue
        action = docs.load_action(spec, bundles[i], f"$.payload.actions[{i}]")
        defects = principal_defects(bundles[i], action)
        report.add(f"principal[{i}]", not defects, defects,
                   f"free transitive action of a group of order {len(action.group.elements)} on every fibre")
        orders.append(len(action.group.elements))
    report.data.update(stages=len(bundles), group_orders=orders)


def _chain_family(payload, report, seed):
    family = []
    for i, c in enumerate(payload["chains"]):
        path = f"$.payload.chains[{i}]"
        bundles, pairs = _load_chain(c, path)
        with docs.at(path):
            family.append(make_chain(bundles, pairs, c.get("name")))
    kwargs = {"cap": payload["cap"]} if "cap" in payload else {}
    with docs.at("$.payload.chains"):
        sub = verify_chaincat_subobject_axioms(family, **kwargs)
    report.extend(sub)
    report.data.update(sub.data)


def _fibre_chain(payload, report, seed):
    nested = docs.load_bundles(payload["bundles"], "$.payload.bundles")
    b = payload["base_point"]
    bad = next((i for i in range(len(nested) - 1) if not is_subbundle(nested[i], nested[i + 1])), None)
    report.add("nested", bad is None, {"index": bad}, "each bundle is a subbundle of the next")
    if bad is not None:
        report.skip("restriction_coherence", "bundles are not nested")
        return
    with docs.at("$.payload.base_point"):
        fc = fibre_chain(nested, b)
    top = fc.stages[-1]
    witness = next(({"stage": i} for i, (s, x) in enumerate(zip(fc.stages, nested)) if s != top & x.total), None)
    report.add("restriction_coherence", witness is None, witness, "each stage is the last stage cut down to E_i")
    report.data.update(fibre_chain=fc.to_json())


def _sequence(payload, report, seed):
    seq = docs.load_sequence(payload, "$.payload")
    report.extend(is_exact(seq))


def _ladder(payload, report, seed):
    top = docs.load_sequence(payload["top"], "$.payload.top")
    bottom = docs.load_sequence(payload["bottom"], "$.payload.bottom")
    verticals = docs.load_verticals(payload["verticals"], top, bottom, "$.payload.verticals")
    with docs.at("$.payload"):
        report.extend(validate_ladder(SequenceLadder(top, bottom, verticals)))
    if "embeddings" in payload:
        path = "$.payload.embeddings"
        embeddings = docs.load_verticals(payload["embeddings"], top, bottom, path)
        with docs.at(path):
            ok = is_subsequence(top, bottom, embeddings)
        report.add("subsequence", ok, {"embeddings": "not injective or squares fail"},
                   "top row embeds levelwise into the bottom row")


def _expected_values(payload, report, values):
    if "expected" not in payload:
        return
    expected = payload["expected"]
    if not isinstance(expected, list):
        raise MalformedDocument("$.payload.expected", "expected a list of rationals")
    want = [docs.load_rational(v, f"$.payload.expected[{i}]") for i, v in enumerate(expected)]
    report.add("expected", want == list(values),
               {"expected": want, "computed": list(values)}, "computed values match the expected tuple")


def _jet_task(payload, report, seed):
    cmd, m = payload["command"], payload["base_dim"]
    if cmd == "descriptor":
        stages = jet_chain_descriptor(m, payload["kmax"])
        report.data.update(stages=stages)
        if "expected" in payload:
            got = [s["coordinates"] for s in stages]
            report.add("expected", payload["expected"] == got, {"expected": payload["expected"], "computed": got})
        return
    phi = docs.load_section(payload["section"], m, "$.payload.section")
    x = docs.load_point(payload["point"], m, "$.payload.point")
    k = payload["order"]
    if cmd in ("jet_of", "project", "prolong"):
        j = jet_of(phi, x, k)
        if cmd == "project":
            with docs.at("$.payload.to_order"):
                j = project(j, payload["to_order"])
            lower = jet_of(phi, x, payload["to_order"])
            report.add("projection_is_lower_jet", j == lower, {"projected": j, "direct": lower})
        elif cmd == "prolong":
            spec = docs.load_spec(payload["spec"], m, "$.payload.spec")
            out = prolong(spec, j)
            direct = prolong_section(spec, phi, x, k)
            report.add("well_defined", out == direct, {"from_jet": out, "from_section": direct},
                       "prolonging the jet equals the jet of the transformed section")
            j = out
        report.data.update(jet=j)
        _expected_values(payload, report, j.values)
        return
    psi = docs.load_section(payload["other"], m, "$.payload.other")
    eq = equivalent_to_order(phi, psi, x, k)
    report.data.update(equivalent=eq)
    if cmd == "curve_probe":
        probe = curve_probe(phi, psi, x, k, payload.get("trials", 8), seed)
        agrees = (probe.fails == 0) == eq
        report.add("consistency", agrees, probe.witnesses or {"equivalent": eq},
                   "curve derivatives agree exactly when the jets agree")
        report.data.update(probe=probe.to_json())
    if "expected" in payload:
        report.add("expected", payload["expected"] == eq, {"expected": payload["expected"], "computed": eq})


DISPATCH = {
    "category": _category,
    "bundle_family": _bundle_family,
    "chain": _chain,
    "chain_family": _chain_family,
    "fibre_chain": _fibre_chain,
    "sequence": _sequence,
    "ladder": _ladder,
    "jet_task": _jet_task,
}
assert set(DISPATCH) == set(KINDS)


# --- validation and running -----------------------------------------------------


def validate_document(doc) -> str:
    """Check ``doc`` against its kind's schema; return the kind."""
    if not isinstance(doc, dict):
        raise MalformedDocument("$", "a task document must be a JSON object")
    kind = doc.get("kind")
    if kind not in DISPATCH:
        raise MalformedDocument("$.kind", str(UnknownKind(kind)))
    validator = jsonschema.Draft202012Validator(schema_for(kind))
    error = jsonschema.exceptions.best_match(validator.iter_errors(doc))
    if error is not None:
        raise MalformedDocument(error.json_path, error.message)
    return kind


def run_document(doc, seed=None) -> VerificationReport:
    kind = validate_document(doc)
    if seed is None:
        seed = doc.get("seed", 0)
    report = VerificationReport(doc.get("task", kind))
    try:
        DISPATCH[kind](doc["payload"], report, seed)
    except MalformedDocument:
        raise
    except BunchainError as exc:
        raise MalformedDocument("$.payload", str(exc)) from None
    report.data.update(kind=kind, seed=seed)
    return report


def render(report: VerificationReport, quiet=False) -> str:
    return json.dumps(report.to_json(quiet=quiet), sort_keys=True, ensure_ascii=False, default=str)


def _read(path):
    if path == "-":
        return json.load(sys.stdin)
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bunchain", description=__doc__.splitlines()[0])
    parser.add_argument("--input", metavar="PATH", help="task document, or - for standard input")
    parser.add_argument("--seed", type=int, help="seed for randomized probes (overrides the document)")
    parser.add_argument("--schema", metavar="KIND", help="print the JSON schema of a document kind and exit")
    parser.add_argument("--quiet", action="store_true", help="omit passing checks from the report")
    return parser


def _malformed(path, message):
    print(f"malformed input at {path}: {message}", file=sys.stderr)
    print(json.dumps({"overall": "malformed", "path": path, "error": message}, sort_keys=True))
    return EXIT_MALFORMED


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.schema is not None:
        try:
            sys.stdout.write(emit_schema(args.schema))
        except UnknownKind as exc:
            print(exc, file=sys.stderr)
            return EXIT_MALFORMED
        return EXIT_PASS
    if args.input is None:
        print("nothing to do: pass --input PATH or --schema KIND", file=sys.stderr)
        return EXIT_MALFORMED
    try:
        doc = _read(args.input)
    except OSError as exc:
        return _malformed("$", f"cannot read input: {exc}")
    except json.JSONDecodeError as exc:
        return _malformed("$", f"invalid JSON: {exc}")
    try:
        report = run_document(doc, args.seed)
    except MalformedDocument as exc:
        return _malformed(exc.path, exc.message)
    print(render(report, args.quiet))
    return EXIT_PASS if report.passed else EXIT_FAIL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
