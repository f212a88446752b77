"""File-driven command line: parse documents, run kernel operations, and
render deterministic reports.

Exit codes: 0 for a clean result, 1 for semantic violations or negative
findings (and kernel-level argument errors), 2 for parse and IO errors.
Human-readable output is the default; ``--json`` switches every command to
a machine-readable report with sorted keys.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import documents as docs
from .covering import monodromy, monodromy_ruptured
from .derivability import check_derivable, detect_derivability_horn
from .errors import DocumentError, KernelError
from .fibration import (
    Coherent,
    Gapped,
    compose_fibrations,
    transport,
    validate_fibration_deep,
)
from .judgments import (
    ExclusionViolation,
    WitnessStore,
    add_witness,
    is_coherent_fragment,
    is_open,
    level_up,
    make_horn,
)
from .ruptured import (
    CoherentlyFilled,
    GapWitnessed,
    classify_horn,
    coherent_core,
    product,
    validate_ruptured,
)
from .simplicial import SimplexId, enumerate_horns, is_kan_up_to, validate_complex


def _emit_json(payload) -> None:
    print(json.dumps(payload, indent=2, sort_keys=True))


def _mode_text(mode) -> str:
    return f"gapped ({mode.kind})" if mode is not None else "gapped"


def _load(path, *kinds) -> docs.Document:
    doc = docs.load_document(path)
    if kinds and doc.kind not in kinds:
        raise DocumentError(
            f"expected a {' or '.join(kinds)} document, got '{doc.kind}'", str(path)
        )
    return doc


# -- commands -------------------------------------------------------------------


def cmd_validate(args) -> int:
    doc = _load(args.path)
    if doc.kind == "complex":
        report = validate_complex(doc.body)
    elif doc.kind == "ruptured":
        report = validate_ruptured(doc.body)
    elif doc.kind == "fibration":
        report = validate_fibration_deep(doc.body)
    else:
        report = []
    kan = None
    if args.max_dim is not None and not report:
        target = doc.body.underlying if doc.kind == "ruptured" else doc.body
        if doc.kind in ("complex", "ruptured"):
            filled, witness = is_kan_up_to(target, args.max_dim)
            kan = {"max_dim": args.max_dim, "filled": filled}
            if witness is not None:
                kan["witness"] = docs.horn_to_body(witness)
    if args.json:
        payload = {
            "kind": doc.kind,
            "valid": not report,
            "violations": [{"kind": v.kind, "message": v.message} for v in report],
        }
        if kan is not None:
            payload["kan"] = kan
        _emit_json(payload)
    else:
        if not report:
            print(f"valid {doc.kind}")
        for v in report:
            print(str(v))
        if kan is not None:
            if kan["filled"]:
                print(f"kan up to {args.max_dim}: yes")
            else:
                print(f"kan up to {args.max_dim}: no, first unfilled "
                      f"n={kan['witness']['n']} k={kan['witness']['k']}")
    if report:
        return 1
    if kan is not None and not kan["filled"]:
        return 1
    return 0


def _horn_line(complex_, h, outcome) -> str:
    faces = ",".join(f"{i}:{f}" for i, f in h.face_map().items())
    head = f"n={h.n} k={h.k} faces {faces}"
    if isinstance(outcome, CoherentlyFilled):
        ids = ",".join(str(s.index) for s in outcome.fillers)
        return f"{head} -> coherent fillers {ids}"
    if isinstance(outcome, GapWitnessed):
        return f"{head} -> {_mode_text(outcome.mode)}"
    return f"{head} -> open"


def cmd_horns(args) -> int:
    doc = _load(args.path, "ruptured")
    r = doc.body
    horns = enumerate_horns(r.underlying, args.dim, args.missing)
    rows = [(h, classify_horn(r, h)) for h in horns]
    if args.json:
        payload = []
        for h, outcome in rows:
            entry = {"horn": docs.horn_to_body(h)}
            if isinstance(outcome, CoherentlyFilled):
                entry["state"] = "coherent"
                entry["fillers"] = [s.index for s in outcome.fillers]
            elif isinstance(outcome, GapWitnessed):
                entry["state"] = "gapped"
                entry["mode"] = docs.mode_to_body(outcome.mode)
            else:
                entry["state"] = "open"
            payload.append(entry)
        _emit_json(payload)
    else:
        for h, outcome in rows:
            print(_horn_line(r.underlying, h, outcome))
    return 0


def cmd_transport(args) -> int:
    doc = _load(args.path, "fibration")
    f = doc.body
    e = SimplexId(0, args.term)
    path = SimplexId(1, args.path_edge)
    outcome = transport(f, e, path)
    if args.json:
        if isinstance(outcome, Coherent):
            _emit_json(
                {
                    "state": "coherent",
                    "target": outcome.target.index,
                    "multiplicity": outcome.multiplicity,
                }
            )
        elif isinstance(outcome, Gapped):
            _emit_json({"state": "gapped", "mode": docs.mode_to_body(outcome.mode)})
        else:
            _emit_json({"state": "open"})
    else:
        if isinstance(outcome, Coherent):
            name = f.total.underlying.name(outcome.target)
            print(f"coherent -> {name} (multiplicity {outcome.multiplicity})")
        elif isinstance(outcome, Gapped):
            print(_mode_text(outcome.mode))
        else:
            print("open")
    return 0


def cmd_monodromy(args) -> int:
    fib_doc = _load(args.path, "fibration")
    task_doc = _load(args.task, "covering-task")
    f, task = fib_doc.body, task_doc.body
    ruptured = monodromy_ruptured(f, task.basepoint, list(task.loops))
    results = []
    for i, loop in enumerate(task.loops):
        perm = monodromy(f, task.basepoint, loop)
        results.append((i, loop, perm))
    if args.json:
        payload = {
            "basepoint": task.basepoint.index,
            "loops": [
                {
                    "loop": i,
                    "permutation": perm.cycles(),
                    "images": [list(p) for p in perm.mapping],
                }
                for i, _, perm in results
            ],
            "gapped_closures": [
                {
                    "loop": list(list(s) for s in key[0]),
                    "start": key[1],
                    "mode": docs.mode_to_body(entry.mode),
                }
                for key, entry in sorted(ruptured.loop_gaps.items())
                if entry.gapped
            ],
        }
        _emit_json(payload)
    else:
        for i, _, perm in results:
            print(f"loop {i}: permutation: {perm.cycles()}")
        gapped = [
            (key, entry)
            for key, entry in sorted(ruptured.loop_gaps.items())
            if entry.gapped
        ]
        print(f"gapped closures: {len(gapped)}")
        for (loop_key, start), entry in gapped:
            name = f.total.underlying.name(SimplexId(0, start))
            print(f"  at {name}: {_mode_text(entry.mode)}")
    return 0


def cmd_core(args) -> int:
    doc = _load(args.path, "ruptured")
    r = doc.body
    core, inclusion = coherent_core(r)
    if args.json:
        _emit_json(
            {
                "core": docs.complex_to_body(core),
                "inclusion": {
                    str(n): list(level) for n, level in enumerate(inclusion.levels)
                },
            }
        )
    else:
        for n in range(core.dim_bound + 1):
            kept = ",".join(str(i) for i in inclusion.levels[n])
            print(
                f"dim {n}: {core.count(n)} of {r.underlying.count(n)} kept"
                + (f" ({kept})" if kept else "")
            )
    return 0


def cmd_product(args) -> int:
    left = _load(args.left, "ruptured")
    right = _load(args.right, "ruptured")
    result = product(left.body, right.body)
    if args.json:
        print(docs.serialize_document(docs.Document("ruptured", result)), end="")
    else:
        x = result.underlying
        counts = ", ".join(str(x.count(n)) for n in range(x.dim_bound + 1))
        print(f"product dim_bound {x.dim_bound}; counts {counts}")
        print(f"gapped horns: {len(result.gap)}")
    return 0


def cmd_compose(args) -> int:
    first = _load(args.first, "fibration")
    second = _load(args.second, "fibration")
    result = compose_fibrations(first.body, second.body)
    if args.json:
        print(docs.serialize_document(docs.Document("fibration", result)), end="")
    else:
        print(f"composite gap-marked problems: {len(result.gap_lifts)}")
        for key in sorted(result.gap_lifts, key=lambda k: (k.horn, k.base)):
            print(f"  {key} -> {_mode_text(result.gap_lifts[key])}")
    return 0


def cmd_derive(args) -> int:
    doc = _load(args.task, "derive-task")
    task = doc.body
    gamma_result = check_derivable(task.gamma, task.term, task.goal)
    from .derivability import apply_substitution

    delta_result = check_derivable(
        task.delta, apply_substitution(task.term, task.sigma), task.goal
    )
    horn = detect_derivability_horn(
        task.gamma, task.delta, task.sigma, task.term, task.goal
    )
    if args.json:
        def cert_body(cert):
            return {
                "counts": {var: n for var, n in cert.counts},
                "verdicts": {var: ok for var, ok in cert.verdicts},
                "type_error": cert.type_error,
            }

        _emit_json(
            {
                "gamma": {
                    "derivable": gamma_result.derivable,
                    "certificate": cert_body(gamma_result.certificate),
                },
                "delta": {
                    "derivable": delta_result.derivable,
                    "certificate": cert_body(delta_result.certificate),
                },
                "horn": horn is not None,
            }
        )
    else:
        for name, result in (("gamma", gamma_result), ("delta", delta_result)):
            verdict = "derivable" if result.derivable else "underivable"
            counts = ", ".join(f"{var}={n}" for var, n in result.certificate.counts)
            print(f"{name}: {verdict} (counts: {counts})")
            for line in result.certificate.violations():
                print(f"  {name} violation: {line}")
        print(f"horn: {'inhabited' if horn is not None else 'none'}")
    return 0


def cmd_judgments(args) -> int:
    doc = _load(args.script, "judgment-script")
    store = WitnessStore()
    lines = []
    failures = 0
    for cmd in doc.body:
        if cmd.op == "add":
            try:
                store = add_witness(store, cmd.judgment, cmd.polarity, cmd.payload)
                lines.append(
                    f"add {cmd.judgment} {cmd.polarity.value}: "
                    f"{store.entries[-1].witness_id}"
                )
            except ExclusionViolation as exc:
                failures += 1
                lines.append(f"add {cmd.judgment} {cmd.polarity.value}: rejected ({exc})")
        elif cmd.op == "is_open":
            lines.append(f"open {cmd.judgment}: {is_open(store, cmd.judgment)}")
        elif cmd.op == "horn":
            try:
                triple = make_horn(store, cmd.first, cmd.second, cmd.gap)
                lines.append(f"horn ({triple.first}, {triple.second}, {triple.gap})")
            except KernelError as exc:
                failures += 1
                lines.append(f"horn error: {exc}")
        else:
            store = level_up(store)
            universe = ",".join(sorted(store.universe or ()))
            lines.append(f"level {store.level} universe [{universe}]")
    if args.json:
        _emit_json(
            {
                "log": lines,
                "entries": [
                    {
                        "id": e.witness_id,
                        "judgment": docs.judgment_to_body(e.judgment),
                        "polarity": e.polarity.value,
                    }
                    for e in store.entries
                ],
                "level": store.level,
                "coherent_fragment": is_coherent_fragment(store),
                "failures": failures,
            }
        )
    else:
        for line in lines:
            print(line)
        print(f"final level {store.level}, {len(store.entries)} entries, "
              f"coherent fragment: {is_coherent_fragment(store)}")
    return 1 if failures else 0


# -- entry point ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rupture-kit",
        description="Finite ruptured simplicial structures: validation, horn "
        "classification, transport, monodromy, derivability, and witness stores.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, handler, configure):
        p = sub.add_parser(name)
        p.add_argument("--json", action="store_true", help="machine-readable output")
        configure(p)
        p.set_defaults(handler=handler)
        return p

    def validate_args(p):
        p.add_argument("path")
        p.add_argument(
            "--max-dim",
            type=int,
            default=None,
            help="also check inner-horn filling up to this dimension",
        )

    add("validate", cmd_validate, validate_args)

    def horns_args(p):
        p.add_argument("path")
        p.add_argument("--dim", type=int, required=True)
        p.add_argument("--missing", type=int, required=True)

    add("horns", cmd_horns, horns_args)

    def transport_args(p):
        p.add_argument("path")
        p.add_argument("--term", type=int, required=True, help="total-space vertex index")
        p.add_argument(
            "--path", dest="path_edge", type=int, required=True, help="base edge index"
        )

    add("transport", cmd_transport, transport_args)

    def monodromy_args(p):
        p.add_argument("path")
        p.add_argument("task")

    add("monodromy", cmd_monodromy, monodromy_args)
    add("core", cmd_core, lambda p: p.add_argument("path"))

    def product_args(p):
        p.add_argument("left")
        p.add_argument("right")

    add("product", cmd_product, product_args)

    def compose_args(p):
        p.add_argument("first")
        p.add_argument("second")

    add("compose", cmd_compose, compose_args)
    add("derive", cmd_derive, lambda p: p.add_argument("task"))
    add("judgments", cmd_judgments, lambda p: p.add_argument("script"))
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except DocumentError as exc:
        print(f"parse error: {exc}")
        return 2
    except KernelError as exc:
        print(f"error: {exc}")
        return 1


if __name__ == "__main__":
    sys.exit(main())
