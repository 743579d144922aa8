"""Interaction-aware benefit of adding a view or index, and the greedy objective.

The benefit of an object is the workload cost reduction it causes divided
by storage bytes: a density in blocks per byte.  When the object interacts
with already-selected structures (an index related to selected views, or a
view related to selected indexes), the denominator also counts those
structures' sizes, which damps the density of piling more storage onto the
same interaction.

The objective subtracts a maintenance penalty weighted by the expected
update frequency: ``penalty_weight = n_queries * refresh_ratio / n_objects``.
In the default ``normalized`` mode the penalty is divided by the object's
size so both terms are per-byte densities; ``literal`` mode subtracts the
raw block count instead.
"""

from __future__ import annotations

from dataclasses import dataclass

from .candidates import IndexCandidate, UsageMatrices, ViewCandidate, make_view_index
from .catalog import SchemaCatalog
from .costmodel import Configuration, CostContext, maintenance_cost, object_size
from .errors import ValidationError
from .workload import Query

MODE_NORMALIZED = "normalized"
MODE_LITERAL = "literal"


@dataclass(frozen=True)
class ObjectiveParams:
    refresh_ratio: float = 0.0
    total_object_count: int = 1
    mode: str = MODE_NORMALIZED

    def __post_init__(self):
        if self.refresh_ratio < 0:
            raise ValidationError("refresh_ratio must be >= 0")
        if self.total_object_count < 1:
            raise ValidationError("total_object_count must be >= 1")
        if self.mode not in (MODE_NORMALIZED, MODE_LITERAL):
            raise ValidationError(f"unknown objective mode {self.mode!r}")


def update_weight(params: ObjectiveParams, n_queries: int) -> float:
    """Expected updates per refresh cycle: |Q| * (1/|O|) * refresh ratio."""
    return n_queries * params.refresh_ratio / params.total_object_count


def benefit_density(cost_before: int, cost_after: int, denominator_bytes: int) -> float:
    """Blocks saved per byte of storage; zero-size objects floor at one byte."""
    return (cost_before - cost_after) / max(denominator_bytes, 1)


@dataclass(frozen=True)
class SelectionObject:
    """One scorable unit: a view, an index, or a view paired with an index on it.

    ``view_index_key`` identifies the physical on-view index; pairs carry
    both the view and that index.
    """

    id: str
    kind: str  # "view" | "index" | "pair"
    view: ViewCandidate | None = None
    index: IndexCandidate | None = None

    def members(self):
        if self.view is not None:
            yield self.view
        if self.index is not None:
            yield self.index

    def config_members(self) -> Configuration:
        views = {self.view.id} if self.view is not None else set()
        base, vidx = set(), set()
        if self.index is not None:
            if self.index.is_base():
                base.add(self.index.id)
            else:
                vidx.add((self.index.target, self.index.attribute))
        return Configuration(frozenset(views), frozenset(base), frozenset(vidx))

    def fully_selected(self, config: Configuration) -> bool:
        m = self.config_members()
        return (
            m.views <= config.views
            and m.base_indexes <= config.base_indexes
            and m.view_indexes <= config.view_indexes
        )

    def apply_to(self, config: Configuration) -> Configuration:
        m = self.config_members()
        return config.with_members(m.views, m.base_indexes, m.view_indexes)

    def full_size(self, catalog: SchemaCatalog) -> int:
        return sum(object_size(member, catalog) for member in self.members())

    def maintenance(self, catalog: SchemaCatalog) -> int:
        return sum(maintenance_cost(member, catalog) for member in self.members())


def view_object(v: ViewCandidate) -> SelectionObject:
    return SelectionObject(id=v.id, kind="view", view=v)


def index_object(i: IndexCandidate) -> SelectionObject:
    return SelectionObject(id=i.id, kind="index", index=i)


def pair_object(v: ViewCandidate, i: IndexCandidate, catalog: SchemaCatalog) -> SelectionObject:
    """View plus an index built on it; a base candidate is re-targeted onto the view."""
    if i.is_base():
        on_view = make_view_index(f"{i.id}@{v.id}", v, i.attribute, catalog)
    else:
        if i.target != v.id:
            raise ValidationError(f"index {i.id} targets {i.target}, not view {v.id}")
        on_view = i
    return SelectionObject(id=f"{v.id}+{i.id}", kind="pair", view=v, index=on_view)


def related_selected_views(
    i: IndexCandidate, config: Configuration, matrices: UsageMatrices
) -> list[str]:
    """Selected views the index is defined on (the view-index matrix row)."""
    if not i.is_base():
        return [i.target] if i.target in config.views else []
    if i.id not in matrices.index_ids:
        return []
    return [vid for vid in matrices.view_ids if matrices.vi(vid, i.id) and vid in config.views]


def related_selected_indexes(
    v: ViewCandidate, config: Configuration, matrices: UsageMatrices
) -> list[str]:
    """Selected base-index candidates defined on the view's attributes."""
    if v.id not in matrices.view_ids:
        return []
    return [
        iid
        for iid in matrices.base_index_ids
        if matrices.vi(v.id, iid) and iid in config.base_indexes
    ]


def _context(queries, matrices, catalog, views, indexes, ctx):
    if ctx is not None:
        return ctx
    return CostContext(queries, views, indexes, matrices, catalog)


def index_benefit(
    i: IndexCandidate,
    queries: list[Query],
    config: Configuration,
    matrices: UsageMatrices,
    catalog: SchemaCatalog,
    views: list[ViewCandidate],
    indexes: list[IndexCandidate],
    ctx: CostContext | None = None,
) -> float:
    """Benefit density of adding one index to the configuration.

    With no related selected view the density is cost saved over the
    index's own size.  With related selected views their sizes join the
    denominator.  An index whose only related views are unselected can
    still earn direct benefit on base tables; it scores zero only when it
    improves nothing.
    """
    ctx = _context(queries, matrices, catalog, views, indexes, ctx)
    if i.is_base():
        added = config.with_members(base_indexes={i.id})
    else:
        added = config.with_members(view_indexes={(i.target, i.attribute)})
    before = ctx.workload_total(config)
    after = ctx.workload_total(added)
    denom = object_size(i, catalog)
    for vid in related_selected_views(i, config, matrices):
        denom += object_size(ctx.views[vid], catalog)
    return benefit_density(before, after, denom)


def view_benefit(
    v: ViewCandidate,
    queries: list[Query],
    config: Configuration,
    matrices: UsageMatrices,
    catalog: SchemaCatalog,
    views: list[ViewCandidate],
    indexes: list[IndexCandidate],
    ctx: CostContext | None = None,
) -> float:
    """Benefit density of adding one view; mirror image of index_benefit."""
    ctx = _context(queries, matrices, catalog, views, indexes, ctx)
    added = config.with_members(views={v.id})
    before = ctx.workload_total(config)
    after = ctx.workload_total(added)
    denom = object_size(v, catalog)
    for iid in related_selected_indexes(v, config, matrices):
        denom += object_size(ctx.indexes[iid], catalog)
    return benefit_density(before, after, denom)


def object_benefit(
    obj: SelectionObject,
    queries: list[Query],
    config: Configuration,
    matrices: UsageMatrices,
    catalog: SchemaCatalog,
    views: list[ViewCandidate],
    indexes: list[IndexCandidate],
    ctx: CostContext | None = None,
) -> float:
    """Benefit density of any selection object; pairs use combined cost and size."""
    ctx = _context(queries, matrices, catalog, views, indexes, ctx)
    if obj.kind == "view":
        return view_benefit(obj.view, queries, config, matrices, catalog, views, indexes, ctx)
    if obj.kind == "index":
        return index_benefit(obj.index, queries, config, matrices, catalog, views, indexes, ctx)
    before = ctx.workload_total(config)
    after = ctx.workload_total(obj.apply_to(config))
    return benefit_density(before, after, obj.full_size(catalog))


def objective_value(
    obj: SelectionObject,
    queries: list[Query],
    config: Configuration,
    matrices: UsageMatrices,
    catalog: SchemaCatalog,
    views: list[ViewCandidate],
    indexes: list[IndexCandidate],
    params: ObjectiveParams,
    ctx: CostContext | None = None,
) -> float:
    """Benefit minus the maintenance penalty, in the configured mode."""
    ctx = _context(queries, matrices, catalog, views, indexes, ctx)
    gain = object_benefit(obj, queries, config, matrices, catalog, views, indexes, ctx)
    beta = update_weight(params, len(queries))
    if beta == 0.0:
        return gain
    maintenance = obj.maintenance(catalog)
    if params.mode == MODE_LITERAL:
        return gain - beta * maintenance
    return gain - beta * maintenance / max(obj.full_size(catalog), 1)
