"""Block-I/O cost model: storage sizes, query access costs, maintenance costs.

Every cost is a count of disk blocks.  A query's cost is the minimum over
its applicable rewritings:

  (a) scan every joined base table;
  (b) same, but any joined table with a usable selected base index is
      accessed through it: btree descent plus the matching fraction of
      the table's blocks (product of the query's predicate selectivities
      on that table);
  (c) scan a usable selected view;
  (d) access a usable selected view through a selected index built on it.

Joins beyond the scans themselves are not costed, so the workload cost is
the sum of independent per-query minima.  All block arithmetic is integer
(ceiling divisions), which keeps runs bit-identical across platforms.
"""

from __future__ import annotations

from dataclasses import dataclass

from .catalog import SchemaCatalog, btree_height, table_blocks
from .catalog import blocks as blocks_of
from .candidates import IndexCandidate, UsageMatrices, ViewCandidate
from .errors import ValidationError
from .workload import Query

COST_MODEL_ID = "blockscan-btree/1"

DEFAULT_SELECTIVITY_FLOOR = 1e-9


@dataclass(frozen=True)
class CostModelParams:
    """Storage-model knobs; block/fanout/rowid come from the catalog."""

    block_size: int
    btree_fanout: int
    rowid_width: int
    default_selectivity_floor: float = DEFAULT_SELECTIVITY_FLOOR

    @classmethod
    def from_catalog(cls, catalog: SchemaCatalog) -> "CostModelParams":
        return cls(catalog.block_size, catalog.btree_fanout, catalog.rowid_width)


def _ceil_div(a: int, d: int) -> int:
    return -(-a // d)


def _divisor_cap(floor: float) -> int:
    # selectivity 1/d floored at `floor` means d capped at 1/floor
    return max(1, int(1.0 / floor))


def selectivity(cardinality: int, floor: float = DEFAULT_SELECTIVITY_FLOOR) -> float:
    """Uniform-distribution selectivity of an equality predicate: 1/cardinality."""
    if cardinality < 1:
        raise ValidationError("cardinality must be >= 1")
    return max(1.0 / cardinality, floor)


def predicate_selectivity(pred, catalog: SchemaCatalog, floor: float = DEFAULT_SELECTIVITY_FLOOR) -> float:
    return selectivity(catalog.attribute(pred.table, pred.attribute).cardinality, floor)


def object_size(obj, catalog: SchemaCatalog) -> int:
    """Storage bytes of a candidate view or index.

    View: estimated rows times row width.  Index: target row count times
    (key width + rowid width); an on-view index counts the view's rows.
    """
    if isinstance(obj, ViewCandidate):
        return obj.row_count * obj.row_width
    if isinstance(obj, IndexCandidate):
        key_width = catalog.attribute(*obj.attribute).width
        if obj.is_base():
            rows = catalog.table(obj.target).row_count
        else:
            rows = obj.on_view.row_count
        return rows * (key_width + catalog.rowid_width)
    raise ValidationError(f"cannot size object of type {type(obj).__name__}")


def maintenance_cost(obj, catalog: SchemaCatalog) -> int:
    """Blocks written per refresh, under a recompute-and-rewrite model.

    View: re-read its joined tables and rewrite the view.  Index: re-read
    the target and rewrite the index.
    """
    if isinstance(obj, ViewCandidate):
        source = sum(table_blocks(catalog.table(t), catalog) for t in sorted(obj.joined_tables))
        return source + blocks_of(obj.row_count, obj.row_width, catalog)
    if isinstance(obj, IndexCandidate):
        if obj.is_base():
            target = table_blocks(catalog.table(obj.target), catalog)
        else:
            target = blocks_of(obj.on_view.row_count, obj.on_view.row_width, catalog)
        size = object_size(obj, catalog)
        return target + _ceil_div(size, catalog.block_size) if size else target
    raise ValidationError(f"cannot cost object of type {type(obj).__name__}")


@dataclass(frozen=True)
class Configuration:
    """A set of selected objects: views, base indexes and on-view indexes.

    On-view indexes are keyed by (view id, attribute); a configuration
    never holds one without its view.
    """

    views: frozenset[str] = frozenset()
    base_indexes: frozenset[str] = frozenset()
    view_indexes: frozenset[tuple[str, tuple[str, str]]] = frozenset()

    def contains_view(self, vid: str) -> bool:
        return vid in self.views

    def with_members(self, views=(), base_indexes=(), view_indexes=()) -> "Configuration":
        return Configuration(
            views=self.views | frozenset(views),
            base_indexes=self.base_indexes | frozenset(base_indexes),
            view_indexes=self.view_indexes | frozenset(view_indexes),
        )

    def is_empty(self) -> bool:
        return not (self.views or self.base_indexes or self.view_indexes)


EMPTY_CONFIG = Configuration()


@dataclass(frozen=True)
class CostReport:
    """Per-query costs, chosen rewritings and their total for one configuration."""

    per_query_cost: dict[str, int]
    chosen_rewriting: dict[str, str]
    total: int
    cost_model: str = COST_MODEL_ID


@dataclass
class _QueryPlanInfo:
    """Precomputed per-query facts the cost evaluation reads."""

    table_blocks: dict[str, int]
    table_divisor: dict[str, int]  # product of predicate cardinalities per table (capped)
    all_divisor: int  # product over every predicate (capped)
    usable_base: dict[str, list[tuple[str, int]]]  # table -> [(index id, descent height)]
    usable_views: list[tuple[str, int]]  # (view id, view blocks)
    usable_view_indexes: dict[str, list[tuple[tuple[str, tuple[str, str]], int]]]
    # view id -> [((view id, attr), descent height)] for indexes the query can use


class CostContext:
    """Cost evaluator bound to one workload, candidate set and catalog.

    Pure and immutable once built; the selector shares one instance across
    all scoring passes.
    """

    def __init__(
        self,
        queries: list[Query],
        views: list[ViewCandidate],
        indexes: list[IndexCandidate],
        matrices: UsageMatrices,
        catalog: SchemaCatalog,
        floor: float = DEFAULT_SELECTIVITY_FLOOR,
    ):
        self.catalog = catalog
        self.queries = list(queries)
        self.views = {v.id: v for v in views}
        self.indexes = {i.id: i for i in indexes}
        self.floor = floor
        cap = _divisor_cap(floor)
        self._info: dict[str, _QueryPlanInfo] = {}
        self._relevant: dict[str, tuple] = {}
        self._cache: dict[str, dict] = {}

        base = [i for i in indexes if i.is_base()]
        for q in queries:
            tb = {t: table_blocks(catalog.table(t), catalog) for t in sorted(q.joined_tables)}
            divisors = {t: 1 for t in tb}
            all_div = 1
            for p in q.predicates:
                card = catalog.attribute(p.table, p.attribute).cardinality
                divisors[p.table] = min(divisors[p.table] * card, cap)
                all_div = min(all_div * card, cap)

            usable_base: dict[str, list[tuple[str, int]]] = {}
            for i in base:
                if matrices.qi(q.id, i.id):
                    card = catalog.attribute(*i.attribute).cardinality
                    usable_base.setdefault(i.target, []).append((i.id, btree_height(card, catalog)))

            usable_views = []
            view_idx: dict[str, list] = {}
            q_attrs = q.filter_group_attrs()
            for v in views:
                if not matrices.qv(q.id, v.id):
                    continue
                usable_views.append((v.id, blocks_of(v.row_count, v.row_width, catalog)))
                usable = []
                for attr in sorted(v.indexable_attrs()):
                    if attr in q_attrs:
                        card = catalog.attribute(*attr).cardinality
                        usable.append(((v.id, attr), btree_height(card, catalog)))
                view_idx[v.id] = usable

            self._info[q.id] = _QueryPlanInfo(
                table_blocks=tb,
                table_divisor=divisors,
                all_divisor=all_div,
                usable_base=usable_base,
                usable_views=usable_views,
                usable_view_indexes=view_idx,
            )
            self._relevant[q.id] = (
                frozenset(iid for pairs in usable_base.values() for iid, _ in pairs),
                frozenset(vid for vid, _ in usable_views),
                frozenset(key for pairs in view_idx.values() for key, _ in pairs),
            )
            self._cache[q.id] = {}

    def _cache_key(self, qid: str, config: Configuration):
        rel_base, rel_views, rel_keys = self._relevant[qid]
        return (
            config.base_indexes & rel_base,
            config.views & rel_views,
            config.view_indexes & rel_keys,
        )

    def query_cost(self, q: Query, config: Configuration) -> tuple[int, str]:
        """Minimum block cost of answering ``q`` under ``config`` plus its rewriting label."""
        key = self._cache_key(q.id, config)
        hit = self._cache[q.id].get(key)
        if hit is not None:
            return hit
        result = self._query_cost_uncached(q, config)
        self._cache[q.id][key] = result
        return result

    def _query_cost_uncached(self, q: Query, config: Configuration) -> tuple[int, str]:
        info = self._info[q.id]

        scan_cost = 0
        indexed_tables = []
        for t, b in info.table_blocks.items():
            best = b
            best_iid = None
            for iid, height in info.usable_base.get(t, ()):
                if iid in config.base_indexes:
                    alt = height + _ceil_div(b, info.table_divisor[t]) if b else 0
                    if alt < best:
                        best = alt
                        best_iid = iid
            scan_cost += best
            if best_iid is not None:
                indexed_tables.append(best_iid)

        best_cost = scan_cost
        best_label = "base+indexes(" + ",".join(indexed_tables) + ")" if indexed_tables else "base"

        for vid, vblocks in info.usable_views:
            if vid not in config.views:
                continue
            if vblocks < best_cost:
                best_cost = vblocks
                best_label = f"view {vid}"
            for key, height in info.usable_view_indexes[vid]:
                if key in config.view_indexes:
                    alt = height + _ceil_div(vblocks, info.all_divisor) if vblocks else 0
                    if alt < best_cost:
                        best_cost = alt
                        best_label = f"view {vid} + index on {key[1][0]}.{key[1][1]}"
        return best_cost, best_label

    def workload_total(self, config: Configuration) -> int:
        return sum(self.query_cost(q, config)[0] for q in self.queries)

    def total_over(self, qids: list[str], config: Configuration) -> int:
        by_id = {q.id: q for q in self.queries}
        return sum(self.query_cost(by_id[qid], config)[0] for qid in qids)


def query_cost(
    q: Query,
    config: Configuration,
    matrices: UsageMatrices,
    catalog: SchemaCatalog,
    views: list[ViewCandidate],
    indexes: list[IndexCandidate],
    floor: float = DEFAULT_SELECTIVITY_FLOOR,
) -> tuple[int, str]:
    """One-off form of CostContext.query_cost for a single query."""
    ctx = CostContext([q], views, indexes, matrices, catalog, floor)
    return ctx.query_cost(q, config)


def workload_cost(
    queries: list[Query],
    config: Configuration,
    matrices: UsageMatrices,
    catalog: SchemaCatalog,
    views: list[ViewCandidate],
    indexes: list[IndexCandidate],
    floor: float = DEFAULT_SELECTIVITY_FLOOR,
    ctx: CostContext | None = None,
) -> CostReport:
    """Cost report over the whole workload; deterministic, summed in query order."""
    if ctx is None:
        ctx = CostContext(queries, views, indexes, matrices, catalog, floor)
    per_query: dict[str, int] = {}
    rewriting: dict[str, str] = {}
    for q in queries:
        cost, label = ctx.query_cost(q, config)
        per_query[q.id] = cost
        rewriting[q.id] = label
    return CostReport(
        per_query_cost=per_query,
        chosen_rewriting=rewriting,
        total=sum(per_query.values()),
    )
