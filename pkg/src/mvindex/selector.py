"""Greedy simultaneous selection of views and indexes under a storage budget.

Each round scores every remaining candidate object (views, indexes, and
view-index pairs) with the objective against the current configuration,
commits the best-scoring affordable object, and rescores: benefits depend
on what is already selected, which is how view/index interactions steer
the search.  Selection stops when no object scores positive, when the
candidate space is exhausted, or when the budget is.

Scoring is pure over an immutable configuration snapshot, so a parallel
scoring pass would be legal; this implementation is sequential and its
traces are the reference ordering any parallel variant must reproduce.
"""

from __future__ import annotations

from dataclasses import dataclass

from .benefit import (
    ObjectiveParams,
    SelectionObject,
    index_object,
    objective_value,
    pair_object,
    view_object,
)
from .candidates import IndexCandidate, UsageMatrices, ViewCandidate
from .catalog import SchemaCatalog
from .costmodel import Configuration, CostContext, object_size
from .errors import InvalidBudgetError

STOP_NO_POSITIVE_OBJECTIVE = "no_positive_objective"
STOP_CANDIDATES_EXHAUSTED = "candidates_exhausted"
STOP_BUDGET_EXHAUSTED = "budget_exhausted"


@dataclass(frozen=True)
class IterationRecord:
    step: int
    object_id: str
    kind: str
    objective: float
    incremental_bytes: int
    remaining_budget: int
    workload_cost: int
    skipped_unaffordable: tuple[str, ...] = ()


@dataclass(frozen=True)
class SelectedMember:
    id: str
    kind: str  # "view" | "base_index" | "view_index"
    bytes: int


@dataclass
class SelectionResult:
    config: Configuration
    selected: list[SelectedMember]
    used_bytes: int
    iterations: list[IterationRecord]
    stop_reason: str
    final_cost: int = 0

    def selected_ids(self) -> list[str]:
        return [m.id for m in self.selected]


def enumerate_objects(
    views: list[ViewCandidate],
    indexes: list[IndexCandidate],
    matrices: UsageMatrices,
    catalog: SchemaCatalog,
) -> list[SelectionObject]:
    """All scorable objects: view singletons, index singletons, then
    one pair per unit cell of the view-index matrix."""
    objects = [view_object(v) for v in views]
    objects += [index_object(i) for i in indexes]
    index_by_id = {i.id: i for i in indexes}
    for vid_pos, vid in enumerate(matrices.view_ids):
        view = next(v for v in views if v.id == vid)
        for iid_pos, iid in enumerate(matrices.index_ids):
            if matrices.view_index[vid_pos, iid_pos]:
                objects.append(pair_object(view, index_by_id[iid], catalog))
    return objects


def incremental_size(obj: SelectionObject, config: Configuration, catalog: SchemaCatalog) -> int:
    """Bytes a commit would add: members already selected contribute nothing."""
    total = 0
    members = obj.config_members()
    for vid in members.views:
        if vid not in config.views:
            total += object_size(obj.view, catalog)
    for iid in members.base_indexes:
        if iid not in config.base_indexes:
            total += object_size(obj.index, catalog)
    for key in members.view_indexes:
        if key not in config.view_indexes:
            total += object_size(obj.index, catalog)
    return total


def _member_records(obj: SelectionObject, config: Configuration, catalog: SchemaCatalog):
    records = []
    members = obj.config_members()
    for vid in sorted(members.views):
        if vid not in config.views:
            records.append(SelectedMember(vid, "view", object_size(obj.view, catalog)))
    for iid in sorted(members.base_indexes):
        if iid not in config.base_indexes:
            records.append(SelectedMember(iid, "base_index", object_size(obj.index, catalog)))
    for key in sorted(members.view_indexes):
        if key not in config.view_indexes:
            records.append(
                SelectedMember(obj.index.id, "view_index", object_size(obj.index, catalog))
            )
    return records


def greedy_core(
    queries,
    objects: list[SelectionObject],
    views: list[ViewCandidate],
    indexes: list[IndexCandidate],
    matrices: UsageMatrices,
    catalog: SchemaCatalog,
    budget_bytes: int,
    params: ObjectiveParams,
    ctx: CostContext | None = None,
) -> SelectionResult:
    """Greedy loop over an explicit object list (isolated strategies reuse it)."""
    if budget_bytes < 0:
        raise InvalidBudgetError(f"budget must be >= 0, got {budget_bytes}")
    if ctx is None:
        ctx = CostContext(queries, views, indexes, matrices, catalog)

    config = Configuration()
    selected: list[SelectedMember] = []
    iterations: list[IterationRecord] = []
    used = 0
    remaining = list(objects)
    stop = None
    step = 0

    while True:
        if budget_bytes - used <= 0:
            stop = STOP_BUDGET_EXHAUSTED
            break
        remaining = [o for o in remaining if not o.fully_selected(config)]
        if not remaining:
            stop = STOP_CANDIDATES_EXHAUSTED
            break

        scored = []
        for o in remaining:
            value = objective_value(
                o, queries, config, matrices, catalog, views, indexes, params, ctx
            )
            if value > 0.0:
                scored.append((-value, incremental_size(o, config, catalog), o.id, o))
        if not scored:
            stop = STOP_NO_POSITIVE_OBJECTIVE
            break
        scored.sort(key=lambda s: s[:3])

        chosen = None
        skipped: list[str] = []
        for neg_value, inc, oid, obj in scored:
            if inc <= budget_bytes - used:
                chosen = (-neg_value, inc, obj)
                break
            skipped.append(oid)
        if chosen is None:
            stop = STOP_BUDGET_EXHAUSTED
            break

        value, inc, obj = chosen
        selected.extend(_member_records(obj, config, catalog))
        config = obj.apply_to(config)
        used += inc
        step += 1
        iterations.append(
            IterationRecord(
                step=step,
                object_id=obj.id,
                kind=obj.kind,
                objective=value,
                incremental_bytes=inc,
                remaining_budget=budget_bytes - used,
                workload_cost=ctx.workload_total(config),
                skipped_unaffordable=tuple(skipped),
            )
        )

    return SelectionResult(
        config=config,
        selected=selected,
        used_bytes=used,
        iterations=iterations,
        stop_reason=stop,
        final_cost=ctx.workload_total(config),
    )


def greedy_select(
    queries,
    views: list[ViewCandidate],
    indexes: list[IndexCandidate],
    matrices: UsageMatrices,
    catalog: SchemaCatalog,
    budget_bytes: int,
    params: ObjectiveParams,
) -> SelectionResult:
    """Simultaneous selection over views, indexes and view-index pairs."""
    objects = enumerate_objects(views, indexes, matrices, catalog)
    return greedy_core(
        queries, objects, views, indexes, matrices, catalog, budget_bytes, params
    )
