"""Reference strategies: exhaustive optimum on small instances, isolated greedy.

The exhaustive search is the test oracle: it enumerates every feasible
subset of singleton objects (respecting the budget and the rule that an
on-view index needs its view) and returns the one minimizing total
workload cost plus the maintenance penalty.  The isolated strategies rerun
the greedy loop restricted to one structure family, mirroring the
views-only / indexes-only comparison axes.
"""

from __future__ import annotations

from dataclasses import dataclass

from .benefit import ObjectiveParams, SelectionObject, index_object, pair_object, view_object, update_weight
from .candidates import IndexCandidate, UsageMatrices, ViewCandidate
from .catalog import SchemaCatalog
from .costmodel import Configuration, CostContext
from .errors import InvalidBudgetError, TooManyObjectsError, ValidationError
from .selector import SelectionResult, greedy_core, incremental_size

EXHAUSTIVE_LIMIT = 20

VIEWS_ONLY = "views_only"
INDEXES_ONLY = "indexes_only"


@dataclass(frozen=True)
class ExhaustiveResult:
    config: Configuration
    selected_ids: tuple[str, ...]
    used_bytes: int
    total_cost: int  # workload blocks, before penalty
    objective: float  # cost plus weighted maintenance


def enumerate_exhaustive_objects(
    views: list[ViewCandidate],
    indexes: list[IndexCandidate],
    matrices: UsageMatrices,
    catalog: SchemaCatalog,
) -> list[SelectionObject]:
    """Singleton objects only; on-view indexes appear once per view-index cell."""
    objects = [view_object(v) for v in views]
    objects += [index_object(i) for i in indexes if i.is_base()]
    seen_keys = set()
    index_by_id = {i.id: i for i in indexes}
    for i in indexes:
        if not i.is_base():
            key = (i.target, i.attribute)
            if key not in seen_keys:
                seen_keys.add(key)
                objects.append(index_object(i))
    for vid_pos, vid in enumerate(matrices.view_ids):
        view = next(v for v in views if v.id == vid)
        for iid_pos, iid in enumerate(matrices.index_ids):
            if matrices.view_index[vid_pos, iid_pos]:
                pair = pair_object(view, index_by_id[iid], catalog)
                key = (pair.index.target, pair.index.attribute)
                if key not in seen_keys:
                    seen_keys.add(key)
                    objects.append(index_object(pair.index))
    return objects


def exhaustive_select(
    queries,
    objects: list[SelectionObject],
    matrices: UsageMatrices,
    catalog: SchemaCatalog,
    budget_bytes: int,
    params: ObjectiveParams,
    views: list[ViewCandidate] | None = None,
    indexes: list[IndexCandidate] | None = None,
    ctx: CostContext | None = None,
) -> ExhaustiveResult:
    """Best feasible subset by brute force; refuses more than 20 objects."""
    n = len(objects)
    if budget_bytes < 0:
        raise InvalidBudgetError(f"budget must be >= 0, got {budget_bytes}")
    if n > EXHAUSTIVE_LIMIT:
        raise TooManyObjectsError(f"{n} objects exceed the exhaustive limit of {EXHAUSTIVE_LIMIT}")
    for o in objects:
        if o.kind == "pair":
            raise ValidationError("exhaustive enumeration expects singleton objects")
    if ctx is None:
        views = views if views is not None else [o.view for o in objects if o.kind == "view"]
        if indexes is None:
            indexes = [o.index for o in objects if o.kind == "index"]
        ctx = CostContext(queries, views, indexes, matrices, catalog)

    sizes = [incremental_size(o, Configuration(), catalog) for o in objects]
    maint = [o.maintenance(catalog) for o in objects]
    beta = update_weight(params, len(queries))

    best = None
    for mask in range(2**n):
        used = 0
        config = Configuration()
        members = []
        feasible = True
        for b in range(n):
            if mask >> b & 1:
                used += sizes[b]
                if used > budget_bytes:
                    feasible = False
                    break
                members.append(b)
        if not feasible:
            continue
        chosen = [objects[b] for b in members]
        # an on-view index is only legal alongside its view
        selected_views = {o.view.id for o in chosen if o.kind == "view"}
        ok = all(
            o.index.is_base() or o.index.target in selected_views
            for o in chosen
            if o.kind == "index"
        )
        if not ok:
            continue
        for o in chosen:
            config = o.apply_to(config)
        cost = ctx.workload_total(config)
        objective = cost + beta * sum(maint[b] for b in members)
        ids = tuple(sorted(o.id for o in chosen))
        key = (objective, used, ids)
        if best is None or key < best[0]:
            best = (key, config, ids, used, cost)

    _, config, ids, used, cost = best
    return ExhaustiveResult(
        config=config,
        selected_ids=ids,
        used_bytes=used,
        total_cost=cost,
        objective=best[0][0],
    )


def isolated_select(
    kind: str,
    queries,
    views: list[ViewCandidate],
    indexes: list[IndexCandidate],
    matrices: UsageMatrices,
    catalog: SchemaCatalog,
    budget_bytes: int,
    params: ObjectiveParams,
) -> SelectionResult:
    """Greedy over a single structure family: views only, or base indexes only."""
    if kind == VIEWS_ONLY:
        objects = [view_object(v) for v in views]
    elif kind == INDEXES_ONLY:
        objects = [index_object(i) for i in indexes if i.is_base()]
    else:
        raise ValidationError(f"unknown isolated strategy {kind!r}")
    return greedy_core(
        queries, objects, views, indexes, matrices, catalog, budget_bytes, params
    )
