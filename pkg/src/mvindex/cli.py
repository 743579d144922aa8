"""Command-line front end: load inputs, run one strategy or a budget sweep.

Exit codes: 0 success, 1 input or usage error, 2 budget constraint error.
Reports are byte-identical across runs with identical inputs.
"""

from __future__ import annotations

import argparse
import json
import sys

from .baselines import (
    INDEXES_ONLY,
    VIEWS_ONLY,
    enumerate_exhaustive_objects,
    exhaustive_select,
    isolated_select,
)
from .benefit import ObjectiveParams
from .candidates import (
    build_matrices,
    generate_index_candidates,
    generate_view_candidates,
    load_candidates,
)
from .catalog import load_catalog
from .costmodel import COST_MODEL_ID, Configuration, CostContext, object_size, workload_cost
from .errors import AdvisorError, InvalidBudgetError, ParseError
from .selector import SelectionResult, enumerate_objects, greedy_select
from .workload import load_workload

SWEEP_STRATEGIES = ("none", "views", "indexes", "simultaneous")
SWEEP_HEADER = "budget_fraction,strategy,total_cost_blocks,used_bytes,objects"


class _Parser(argparse.ArgumentParser):
    # usage problems are input errors: exit 1, not argparse's default 2
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(1)


def make_parser() -> argparse.ArgumentParser:
    p = _Parser(
        prog="mvindex",
        description="Select materialized views and indexes for a star-schema workload "
        "under a storage budget.",
    )
    p.add_argument("--schema", required=True, help="catalog file")
    p.add_argument("--workload", required=True, help="workload file")
    p.add_argument("--candidates", help="optional fixed candidates file")
    p.add_argument(
        "--budget",
        help="storage budget: bytes, or N%% of the space an unconstrained run uses",
    )
    p.add_argument(
        "--mode",
        choices=["simultaneous", "view-only", "index-only", "exhaustive", "none"],
        default="simultaneous",
    )
    p.add_argument("--refresh-ratio", type=float, default=None,
                   help="refresh-to-query ratio (default: workload header or 0)")
    p.add_argument("--min-support", type=int, default=1,
                   help="attribute support threshold for generated index candidates")
    p.add_argument("--objective", choices=["normalized", "literal"], default="normalized")
    p.add_argument("--sweep", help="comma-separated budget fractions in (0,1]")
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.add_argument("--trace", action="store_true", help="include per-iteration trace")
    return p


def _load_inputs(args):
    with open(args.schema, encoding="utf-8") as fh:
        catalog = load_catalog(fh.read(), args.schema)
    with open(args.workload, encoding="utf-8") as fh:
        workload = load_workload(fh.read(), catalog, args.workload)
    if args.candidates:
        with open(args.candidates, encoding="utf-8") as fh:
            views, indexes = load_candidates(fh.read(), catalog, args.candidates)
    else:
        views = generate_view_candidates(workload, catalog)
        indexes = generate_index_candidates(workload, views, catalog, args.min_support)
    matrices = build_matrices(workload, views, indexes)
    return catalog, workload, views, indexes, matrices


def _reference_space(queries, views, indexes, matrices, catalog, params) -> int:
    """Bytes used by an unconstrained simultaneous run; budget percentages and
    sweep fractions are relative to this."""
    objects = enumerate_objects(views, indexes, matrices, catalog)
    unconstrained = sum(o.full_size(catalog) for o in objects) + 1
    result = greedy_select(queries, views, indexes, matrices, catalog, unconstrained, params)
    return result.used_bytes


def _parse_budget(text: str, reference_space: int) -> int:
    text = text.strip()
    if text.endswith("%"):
        fraction = float(text[:-1]) / 100.0
        return int(reference_space * fraction)
    return int(text)


def _run_strategy(mode, queries, views, indexes, matrices, catalog, budget, params):
    if mode == "none":
        empty = SelectionResult(
            config=Configuration(), selected=[], used_bytes=0, iterations=[],
            stop_reason="not_run",
        )
        ctx = CostContext(queries, views, indexes, matrices, catalog)
        empty.final_cost = ctx.workload_total(Configuration())
        return empty
    if mode == "simultaneous":
        return greedy_select(queries, views, indexes, matrices, catalog, budget, params)
    if mode == "view-only":
        return isolated_select(VIEWS_ONLY, queries, views, indexes, matrices, catalog, budget, params)
    if mode == "index-only":
        return isolated_select(INDEXES_ONLY, queries, views, indexes, matrices, catalog, budget, params)
    raise AdvisorError(f"unhandled mode {mode!r}")


def _selection_payload(result: SelectionResult, trace: bool) -> dict:
    payload = {
        "selected": [{"id": m.id, "kind": m.kind, "bytes": m.bytes} for m in result.selected],
        "used_bytes": result.used_bytes,
        "stop_reason": result.stop_reason,
        "total_cost_blocks": result.final_cost,
    }
    if trace:
        payload["iterations"] = [
            {
                "step": it.step,
                "object": it.object_id,
                "kind": it.kind,
                "objective": it.objective,
                "incremental_bytes": it.incremental_bytes,
                "remaining_budget": it.remaining_budget,
                "workload_cost": it.workload_cost,
                "skipped_unaffordable": list(it.skipped_unaffordable),
            }
            for it in result.iterations
        ]
    return payload


def _matrix_rows(matrix) -> list[list[int]]:
    return [[int(x) for x in row] for row in matrix]


def run_advise(args) -> tuple[str, int]:
    """Run one strategy and return (report text, exit code)."""
    catalog, workload, views, indexes, matrices = _load_inputs(args)
    queries = list(workload.queries)
    refresh = args.refresh_ratio if args.refresh_ratio is not None else workload.refresh_ratio
    n_objects = max(1, len(views) + len(indexes))
    params = ObjectiveParams(
        refresh_ratio=refresh, total_object_count=n_objects, mode=args.objective
    )

    if args.budget is None:
        raise ParseError("--budget is required unless --sweep is given")
    needs_reference = args.budget.strip().endswith("%")
    reference = (
        _reference_space(queries, views, indexes, matrices, catalog, params)
        if needs_reference
        else 0
    )
    budget = _parse_budget(args.budget, reference)
    if budget < 0:
        raise InvalidBudgetError(f"budget must be >= 0, got {budget}")

    before = workload_cost(queries, Configuration(), matrices, catalog, views, indexes)

    if args.mode == "exhaustive":
        objects = enumerate_exhaustive_objects(views, indexes, matrices, catalog)
        ex = exhaustive_select(queries, objects, matrices, catalog, budget, params,
                               views=views, indexes=indexes)
        result = SelectionResult(
            config=ex.config,
            selected=[],
            used_bytes=ex.used_bytes,
            iterations=[],
            stop_reason="exhaustive",
            final_cost=ex.total_cost,
        )
        selected_ids = list(ex.selected_ids)
    else:
        result = _run_strategy(
            args.mode, queries, views, indexes, matrices, catalog, budget, params
        )
        selected_ids = result.selected_ids()

    after = workload_cost(queries, result.config, matrices, catalog, views, indexes)

    report = {
        "cost_model": COST_MODEL_ID,
        "mode": args.mode,
        "objective": args.objective,
        "refresh_ratio": refresh,
        "budget_bytes": budget,
        "candidates": {
            "views": [
                {
                    "id": v.id,
                    "tables": sorted(v.joined_tables),
                    "group_by": [f"{t}.{a}" for t, a in v.group_by],
                    "aggregates": [f"{f}({t}.{a})" for f, (t, a) in v.aggregates],
                    "rows": v.row_count,
                    "bytes": object_size(v, catalog),
                }
                for v in views
            ],
            "indexes": [
                {
                    "id": i.id,
                    "target": i.target,
                    "attribute": f"{i.attribute[0]}.{i.attribute[1]}",
                    "bytes": object_size(i, catalog),
                }
                for i in indexes
            ],
        },
        "matrices": {
            "query_ids": list(matrices.query_ids),
            "view_ids": list(matrices.view_ids),
            "index_ids": list(matrices.index_ids),
            "query_view": _matrix_rows(matrices.query_view),
            "query_index": _matrix_rows(matrices.query_index),
            "view_index": _matrix_rows(matrices.view_index),
        },
        "selection": {**_selection_payload(result, args.trace), "objects": selected_ids},
        "costs": {
            "before": {"per_query": before.per_query_cost, "total": before.total},
            "after": {
                "per_query": after.per_query_cost,
                "rewriting": after.chosen_rewriting,
                "total": after.total,
            },
        },
    }

    if args.format == "json":
        return json.dumps(report, indent=2, sort_keys=True) + "\n", 0
    return _format_text_report(report), 0


def _format_text_report(report: dict) -> str:
    lines = []
    add = lines.append
    add(f"cost model      {report['cost_model']}")
    add(f"mode            {report['mode']}")
    add(f"objective       {report['objective']}")
    add(f"refresh ratio   {report['refresh_ratio']}")
    add(f"budget bytes    {report['budget_bytes']}")
    add("")
    add("candidate views")
    for v in report["candidates"]["views"]:
        add(f"  {v['id']:>6}  rows {v['rows']:>12}  bytes {v['bytes']:>14}  "
            f"over {','.join(v['tables'])}")
    add("candidate indexes")
    for i in report["candidates"]["indexes"]:
        add(f"  {i['id']:>6}  on {i['target']:<12} key {i['attribute']:<32} bytes {i['bytes']:>12}")
    add("")
    m = report["matrices"]
    add("query-view matrix (rows: " + ",".join(m["query_ids"]) + "; cols: " + ",".join(m["view_ids"]) + ")")
    for row in m["query_view"]:
        add("  " + " ".join(str(x) for x in row))
    add("query-index matrix (cols: " + ",".join(m["index_ids"]) + ")")
    for row in m["query_index"]:
        add("  " + " ".join(str(x) for x in row))
    add("view-index matrix")
    for row in m["view_index"]:
        add("  " + " ".join(str(x) for x in row))
    add("")
    sel = report["selection"]
    add(f"selection stop reason: {sel['stop_reason']}")
    add(f"selected objects ({len(sel['objects'])}): " + (", ".join(sel["objects"]) or "none"))
    for mrec in sel["selected"]:
        add(f"  {mrec['id']:>10}  {mrec['kind']:<11} bytes {mrec['bytes']:>14}")
    add(f"used bytes: {sel['used_bytes']}")
    if "iterations" in sel:
        add("trace")
        for it in sel["iterations"]:
            add(
                f"  step {it['step']:>3}  {it['object']:<12} objective {it['objective']:.9g}  "
                f"+{it['incremental_bytes']} B  remaining {it['remaining_budget']} B  "
                f"cost {it['workload_cost']}"
            )
    add("")
    costs = report["costs"]
    add("per-query cost (blocks)")
    add(f"  {'query':>6} {'before':>12} {'after':>12}  rewriting")
    for qid in costs["before"]["per_query"]:
        add(
            f"  {qid:>6} {costs['before']['per_query'][qid]:>12} "
            f"{costs['after']['per_query'][qid]:>12}  {costs['after']['rewriting'][qid]}"
        )
    add(f"  {'total':>6} {costs['before']['total']:>12} {costs['after']['total']:>12}")
    return "\n".join(lines) + "\n"


def run_sweep(args) -> tuple[str, int]:
    """Run every strategy at each budget fraction; returns CSV."""
    catalog, workload, views, indexes, matrices = _load_inputs(args)
    queries = list(workload.queries)
    refresh = args.refresh_ratio if args.refresh_ratio is not None else workload.refresh_ratio
    n_objects = max(1, len(views) + len(indexes))
    params = ObjectiveParams(
        refresh_ratio=refresh, total_object_count=n_objects, mode=args.objective
    )

    fractions = []
    for tok in args.sweep.split(","):
        f = float(tok)
        if not 0.0 < f <= 1.0:
            raise ParseError(f"sweep fraction {tok!r} outside (0, 1]")
        fractions.append(f)

    reference = _reference_space(queries, views, indexes, matrices, catalog, params)
    rows = [SWEEP_HEADER]
    for fraction in fractions:
        budget = int(reference * fraction)
        for strategy in SWEEP_STRATEGIES:
            mode = {
                "none": "none",
                "views": "view-only",
                "indexes": "index-only",
                "simultaneous": "simultaneous",
            }[strategy]
            result = _run_strategy(
                mode, queries, views, indexes, matrices, catalog, budget, params
            )
            objects = ";".join(result.selected_ids()) if result.selected else ""
            rows.append(
                f"{fraction},{strategy},{result.final_cost},{result.used_bytes},{objects}"
            )
    return "\n".join(rows) + "\n", 0


def main(argv=None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.sweep:
            text, code = run_sweep(args)
        else:
            text, code = run_advise(args)
    except InvalidBudgetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (AdvisorError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
