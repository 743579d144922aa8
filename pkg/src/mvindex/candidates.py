"""Candidate views, candidate indexes and the three usage matrices.

View candidates come from grouping workload queries by identical join-table
signature and merging each group into a single aggregation view.  Index
candidates come from per-attribute support counting over predicates and
group-by lists.  Both generators are deterministic: the same workload
always yields the same candidates with the same ids.

A candidates file can inject fixed sets instead of generating them::

    view v1
      tables sales, times
      join sales.time_id = times.time_id
      group_by sales.time_id, times.time_fiscal_year
      agg sum(sales.amount_sold)
      indexable times.time_fiscal_year     # optional; defaults to all group_by

    index i1 on promotions key promo_category
    index j1 on v1 key times.time_fiscal_year

``indexable`` restricts which group-by attributes admit an index on that
view (the view-index matrix honours it).  An ``index ... on <view-id>``
line declares an index candidate targeting a view instead of a base table.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .catalog import SchemaCatalog
from .errors import ParseError, UnknownNameError, ValidationError
from .workload import Attr, Query, Workload

VIEW_TARGET = "view"
TABLE_TARGET = "table"


@dataclass(frozen=True)
class ViewCandidate:
    """A pre-joined, pre-aggregated view over the fact table and some dimensions."""

    id: str
    joined_tables: frozenset[str]
    join_pairs: tuple[tuple[Attr, Attr], ...]
    group_by: tuple[Attr, ...]
    aggregates: tuple[tuple[str, Attr], ...]
    row_count: int  # estimated distinct groups
    row_width: int  # group-by widths plus 8 bytes per aggregate
    indexable: frozenset[Attr] | None = None  # None means every group_by attribute

    def group_by_set(self) -> frozenset[Attr]:
        return frozenset(self.group_by)

    def indexable_attrs(self) -> frozenset[Attr]:
        return self.group_by_set() if self.indexable is None else self.indexable


@dataclass(frozen=True)
class IndexCandidate:
    """Single-attribute B-tree index on a base table or on a view."""

    id: str
    target: str  # table name or view id
    target_kind: str  # TABLE_TARGET or VIEW_TARGET
    attribute: Attr  # base attribute carrying width/cardinality stats
    on_view: ViewCandidate | None = None  # set when target_kind == VIEW_TARGET

    def is_base(self) -> bool:
        return self.target_kind == TABLE_TARGET


def view_stats(group_by: tuple[Attr, ...], aggregates, catalog: SchemaCatalog) -> tuple[int, int]:
    """Estimated (row_count, row_width) of a view.

    Rows: product of group-by attribute cardinalities, capped at the fact
    table's row count (the standard distinct-group bound).  Width: sum of
    group-by attribute widths plus 8 bytes per aggregate.
    """
    fact_rows = catalog.fact_table.row_count
    prod = 1
    width = 0
    for table, attr in group_by:
        stats = catalog.attribute(table, attr)
        prod = min(prod * stats.cardinality, fact_rows) if fact_rows > 0 else 0
        width += stats.width
    if fact_rows == 0:
        prod = 0
    width += 8 * len(aggregates)
    return min(prod, fact_rows), width


def make_view(vid, joined_tables, join_pairs, group_by, aggregates, catalog, indexable=None):
    rows, width = view_stats(tuple(group_by), tuple(aggregates), catalog)
    return ViewCandidate(
        id=vid,
        joined_tables=frozenset(joined_tables),
        join_pairs=tuple(join_pairs),
        group_by=tuple(group_by),
        aggregates=tuple(aggregates),
        row_count=rows,
        row_width=width,
        indexable=frozenset(indexable) if indexable is not None else None,
    )


def make_base_index(iid: str, attr: Attr, catalog: SchemaCatalog) -> IndexCandidate:
    catalog.attribute(*attr)  # must resolve
    return IndexCandidate(id=iid, target=attr[0], target_kind=TABLE_TARGET, attribute=attr)


def make_view_index(iid: str, view: ViewCandidate, attr: Attr, catalog: SchemaCatalog) -> IndexCandidate:
    if attr not in view.group_by_set():
        raise ValidationError(f"index {iid}: {attr[0]}.{attr[1]} is not grouped by view {view.id}")
    catalog.attribute(*attr)
    return IndexCandidate(
        id=iid, target=view.id, target_kind=VIEW_TARGET, attribute=attr, on_view=view
    )


def generate_view_candidates(workload: Workload, catalog: SchemaCatalog) -> list[ViewCandidate]:
    """One merged view per distinct join-table signature, in first-query order.

    The merged view groups by the union of the group's group-by and
    predicate attributes and carries the union of the group's aggregates.
    """
    groups: dict[frozenset[str], list[Query]] = {}
    order: list[frozenset[str]] = []
    for q in workload.queries:
        if q.joined_tables not in groups:
            groups[q.joined_tables] = []
            order.append(q.joined_tables)
        groups[q.joined_tables].append(q)

    views = []
    for k, signature in enumerate(order, start=1):
        members = groups[signature]
        group_by: list[Attr] = []
        aggregates: list[tuple[str, Attr]] = []
        join_pairs: list[tuple[Attr, Attr]] = []
        for q in members:
            for attr in list(q.group_by) + [p.attr for p in q.predicates]:
                if attr not in group_by:
                    group_by.append(attr)
            for agg in q.aggregates:
                if agg not in aggregates:
                    aggregates.append(agg)
            for jp in q.join_pairs:
                if jp not in join_pairs:
                    join_pairs.append(jp)
        views.append(make_view(f"v{k}", signature, join_pairs, group_by, aggregates, catalog))
    return views


def generate_index_candidates(
    workload: Workload,
    views: list[ViewCandidate],
    catalog: SchemaCatalog,
    min_support: int = 1,
) -> list[IndexCandidate]:
    """Attribute-support index mining.

    Base tables: one candidate per attribute used in at least ``min_support``
    queries' predicates or group-by lists.  Views: one candidate per
    indexable group-by attribute that some matched query filters or groups
    on.  Ordering follows first occurrence in the workload, then view order.
    """
    if min_support < 1:
        raise ValidationError("min_support must be >= 1")
    support: dict[Attr, set[str]] = {}
    first_seen: list[Attr] = []
    for q in workload.queries:
        for attr in [p.attr for p in q.predicates] + list(q.group_by):
            if attr not in support:
                support[attr] = set()
                first_seen.append(attr)
            support[attr].add(q.id)

    candidates = []
    for attr in first_seen:
        if len(support[attr]) >= min_support:
            candidates.append(make_base_index(f"i{len(candidates) + 1}", attr, catalog))

    for view in views:
        used = frozenset()
        for q in workload.queries:
            if usable_view(q, view):
                used |= q.filter_group_attrs()
        for attr in view.group_by:
            if (
                attr in used
                and attr in view.indexable_attrs()
                and len(support.get(attr, ())) >= min_support
            ):
                candidates.append(
                    make_view_index(f"i{len(candidates) + 1}", view, attr, catalog)
                )
    return candidates


def usable_view(q: Query, v: ViewCandidate) -> bool:
    """True when the query can be rewritten to scan the view.

    Requires the query's join set to be contained in the view's (extra
    pre-joined dimensions are harmless under foreign-key integrity), the
    query's group-by and predicate attributes to appear in the view's
    group-by, and the query's aggregates to be carried by the view.
    """
    if not q.joined_tables <= v.joined_tables:
        return False
    gb = v.group_by_set()
    if not frozenset(q.group_by) <= gb:
        return False
    if not q.predicate_attrs() <= gb:
        return False
    return set(q.aggregates) <= set(v.aggregates)


def usable_index(q: Query, i: IndexCandidate) -> bool:
    """True when a base-table index helps the query.

    The indexed attribute must appear among the query's predicate or
    group-by attributes and its table must be joined by the query.
    """
    if not i.is_base():
        raise ValidationError(f"usable_index expects a base-table index, got {i.id} on {i.target}")
    return i.attribute in q.filter_group_attrs() and i.target in q.joined_tables


@dataclass(frozen=True)
class UsageMatrices:
    """The query-view, query-index and view-index boolean matrices.

    ``query_index`` covers base-table candidates only; ``view_index``
    covers the full candidate list.  Rows/columns follow the id lists.
    """

    query_ids: tuple[str, ...]
    view_ids: tuple[str, ...]
    index_ids: tuple[str, ...]  # all index candidates
    base_index_ids: tuple[str, ...]
    query_view: np.ndarray  # bool [n_queries, n_views]
    query_index: np.ndarray  # bool [n_queries, n_base_indexes]
    view_index: np.ndarray  # bool [n_views, n_indexes]

    def qv(self, qid: str, vid: str) -> bool:
        return bool(self.query_view[self.query_ids.index(qid), self.view_ids.index(vid)])

    def qi(self, qid: str, iid: str) -> bool:
        return bool(self.query_index[self.query_ids.index(qid), self.base_index_ids.index(iid)])

    def vi(self, vid: str, iid: str) -> bool:
        return bool(self.view_index[self.view_ids.index(vid), self.index_ids.index(iid)])

    def pair_count(self) -> int:
        return int(self.view_index.sum())


def build_matrices(
    workload: Workload,
    views: list[ViewCandidate],
    indexes: list[IndexCandidate],
) -> UsageMatrices:
    """Populate the three matrices from the usability rules.

    View-index cells: a view-targeted candidate pairs with exactly its
    view; a base-table candidate pairs with every view whose indexable
    group-by attributes contain its attribute, unless a view-targeted
    candidate for the same (view, attribute) already exists (avoids
    enumerating the same physical on-view index twice).
    """
    queries = workload.queries
    base = [i for i in indexes if i.is_base()]
    qv = np.zeros((len(queries), len(views)), dtype=bool)
    qi = np.zeros((len(queries), len(base)), dtype=bool)
    vi = np.zeros((len(views), len(indexes)), dtype=bool)

    for r, q in enumerate(queries):
        for c, v in enumerate(views):
            qv[r, c] = usable_view(q, v)
        for c, i in enumerate(base):
            qi[r, c] = usable_index(q, i)

    dedicated = {(i.target, i.attribute) for i in indexes if not i.is_base()}
    for r, v in enumerate(views):
        indexable = v.indexable_attrs()
        for c, i in enumerate(indexes):
            if i.is_base():
                vi[r, c] = i.attribute in indexable and (v.id, i.attribute) not in dedicated
            else:
                vi[r, c] = i.target == v.id

    return UsageMatrices(
        query_ids=tuple(q.id for q in queries),
        view_ids=tuple(v.id for v in views),
        index_ids=tuple(i.id for i in indexes),
        base_index_ids=tuple(i.id for i in base),
        query_view=qv,
        query_index=qi,
        view_index=vi,
    )


def _parse_attr(token: str, source: str, lineno: int) -> Attr:
    parts = token.split(".")
    if len(parts) != 2 or not all(parts):
        raise ParseError(f"expected table.attribute, got {token!r}", source, lineno)
    return (parts[0].lower(), parts[1].lower())


def _parse_agg(token: str, source: str, lineno: int) -> tuple[str, Attr]:
    token = token.strip()
    if not (token.lower().startswith("sum(") and token.endswith(")")):
        raise ParseError(f"expected sum(table.attribute), got {token!r}", source, lineno)
    return ("sum", _parse_attr(token[4:-1], source, lineno))


def load_candidates(
    text: str, catalog: SchemaCatalog, source: str = "<candidates>"
) -> tuple[list[ViewCandidate], list[IndexCandidate]]:
    """Parse a candidates file into fixed view and index candidate lists."""
    views: list[ViewCandidate] = []
    view_blocks: list[dict] = []
    index_lines: list[tuple[int, list[str]]] = []

    current: dict | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.replace(",", " ").split()
        head = tokens[0].lower()
        if head == "view":
            if len(tokens) != 2:
                raise ParseError("expected: view <id>", source, lineno)
            current = {
                "id": tokens[1].lower(),
                "tables": [],
                "joins": [],
                "group_by": [],
                "aggs": [],
                "indexable": None,
                "line": lineno,
            }
            view_blocks.append(current)
        elif head == "index":
            index_lines.append((lineno, tokens))
            current = None
        elif current is None:
            raise ParseError(f"{tokens[0]!r} outside a view block", source, lineno)
        elif head == "tables":
            current["tables"] = [t.lower() for t in tokens[1:]]
        elif head == "join":
            if len(tokens) != 4 or tokens[2] != "=":
                raise ParseError("expected: join a.x = b.y", source, lineno)
            current["joins"].append(
                (_parse_attr(tokens[1], source, lineno), _parse_attr(tokens[3], source, lineno))
            )
        elif head == "group_by":
            current["group_by"] += [_parse_attr(t, source, lineno) for t in tokens[1:]]
        elif head == "agg":
            current["aggs"] += [_parse_agg(t, source, lineno) for t in tokens[1:]]
        elif head == "indexable":
            if current["indexable"] is None:
                current["indexable"] = []
            current["indexable"] += [_parse_attr(t, source, lineno) for t in tokens[1:]]
        else:
            raise ParseError(f"unrecognized directive {tokens[0]!r}", source, lineno)

    fact = catalog.fact_table.name
    for blk in view_blocks:
        if not blk["group_by"]:
            raise ParseError(f"view {blk['id']}: empty group_by", source, blk["line"])
        for t in blk["tables"]:
            if not catalog.has_table(t):
                raise UnknownNameError(f"view {blk['id']}: unknown table {t!r}")
        if fact not in blk["tables"]:
            raise ValidationError(f"view {blk['id']}: must join the fact table {fact!r}")
        for attr in blk["group_by"]:
            catalog.attribute(*attr)
        views.append(
            make_view(
                blk["id"],
                blk["tables"],
                blk["joins"],
                blk["group_by"],
                blk["aggs"],
                catalog,
                indexable=blk["indexable"],
            )
        )

    by_id = {v.id: v for v in views}
    indexes: list[IndexCandidate] = []
    for lineno, tokens in index_lines:
        # index <id> on <target> key <attr | table.attr>
        if len(tokens) != 6 or tokens[2].lower() != "on" or tokens[4].lower() != "key":
            raise ParseError("expected: index <id> on <target> key <attribute>", source, lineno)
        iid, target, key = tokens[1].lower(), tokens[3].lower(), tokens[5].lower()
        if target in by_id:
            attr = _parse_attr(key, source, lineno)
            indexes.append(make_view_index(iid, by_id[target], attr, catalog))
        elif catalog.has_table(target):
            attr = (target, key) if "." not in key else _parse_attr(key, source, lineno)
            if attr[0] != target:
                raise ValidationError(f"index {iid}: key {key!r} does not belong to {target!r}")
            indexes.append(make_base_index(iid, attr, catalog))
        else:
            raise UnknownNameError(f"index {iid}: unknown target {target!r}")

    ids = [v.id for v in views] + [i.id for i in indexes]
    if len(ids) != len(set(ids)):
        raise ValidationError("duplicate candidate ids in candidates file")
    return views, indexes
