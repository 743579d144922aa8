"""Randomized star-schema instances and independent cost oracles for tests."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from mvindex.candidates import (
    IndexCandidate,
    UsageMatrices,
    ViewCandidate,
    build_matrices,
    generate_index_candidates,
    generate_view_candidates,
    usable_view,
)
from mvindex.catalog import AttributeStats, SchemaCatalog, TableStats, validate_catalog
from mvindex.costmodel import Configuration
from mvindex.workload import Predicate, Query, Workload


@dataclass
class Instance:
    catalog: SchemaCatalog
    workload: Workload
    views: list[ViewCandidate]
    indexes: list[IndexCandidate]
    matrices: UsageMatrices

    @property
    def queries(self):
        return list(self.workload.queries)


def random_instance(
    seed: int,
    max_tables: int = 6,
    max_queries: int = 12,
    min_support: int = 1,
) -> Instance:
    """A small random star schema, workload and generated candidate sets."""
    rng = random.Random(seed)
    n_dims = rng.randint(1, max_tables - 1)

    dims = []
    for d in range(n_dims):
        rows = rng.choice([8, 50, 400, 3000, 20000])
        attrs = [AttributeStats(f"key{d}", rows, 4)]
        for a in range(rng.randint(1, 3)):
            attrs.append(
                AttributeStats(
                    f"a{d}_{a}",
                    min(rng.choice([2, 4, 10, 50, 300, 2000]), rows),
                    rng.choice([4, 8, 16]),
                )
            )
        dims.append(
            TableStats(f"dim{d}", "dimension", rows, rng.choice([16, 40, 80, 160]), tuple(attrs))
        )

    fact_rows = rng.choice([5000, 50000, 400000, 2000000])
    fact_attrs = [AttributeStats(f"fk{d}", min(dims[d].row_count, fact_rows), 4) for d in range(n_dims)]
    fact_attrs.append(AttributeStats("measure", min(1000, fact_rows), 4))
    fact = TableStats("fact", "fact", fact_rows, rng.choice([12, 24, 48]), tuple(fact_attrs))

    catalog = SchemaCatalog(tables=(fact, *dims))
    validate_catalog(catalog)

    queries = []
    for k in range(rng.randint(1, max_queries)):
        joined_dims = rng.sample(range(n_dims), rng.randint(1, n_dims))
        joined = frozenset({"fact"} | {f"dim{d}" for d in joined_dims})
        join_pairs = tuple(
            (("fact", f"fk{d}"), (f"dim{d}", f"key{d}")) for d in sorted(joined_dims)
        )
        dim_attrs = [
            (f"dim{d}", a.name)
            for d in joined_dims
            for a in dims[d].attributes
            if not a.name.startswith("key")
        ]
        rng.shuffle(dim_attrs)
        n_preds = min(rng.randint(0, 2), len(dim_attrs))
        preds = tuple(
            Predicate(t, a, f"'c{rng.randint(0, 9)}'") for t, a in dim_attrs[:n_preds]
        )
        group_pool = dim_attrs[n_preds:] + [("fact", f"fk{d}") for d in joined_dims]
        n_group = min(rng.randint(1, 2), len(group_pool))
        group_by = tuple(group_pool[:n_group])
        queries.append(
            Query(
                id=f"q{k + 1}",
                select_attrs=group_by,
                aggregates=(("sum", ("fact", "measure")),),
                joined_tables=joined,
                join_pairs=join_pairs,
                predicates=preds,
                group_by=group_by,
            )
        )

    workload = Workload(queries=tuple(queries), refresh_ratio=0.0)
    views = generate_view_candidates(workload, catalog)
    indexes = generate_index_candidates(workload, views, catalog, min_support)
    matrices = build_matrices(workload, views, indexes)
    return Instance(catalog, workload, views, indexes, matrices)


def log_uniform_budget(rng: random.Random, total_bytes: int) -> int:
    hi = max(total_bytes * 2, 200)
    return int(math.exp(rng.uniform(math.log(100), math.log(hi))))


def brute_force_query_cost(
    q: Query,
    config: Configuration,
    views: list[ViewCandidate],
    indexes: list[IndexCandidate],
    catalog: SchemaCatalog,
) -> int:
    """Enumerate every rewriting of one query and return the cheapest.

    Written independently of the production evaluator: usability is
    re-derived from first principles and all per-table access choices are
    expanded as an explicit cartesian product.
    """
    import itertools

    def nblocks(rows, width):
        if rows == 0:
            return 0
        return math.ceil(rows * width / catalog.block_size)

    def height(card):
        h, reach = 0, 1
        while reach < card:
            reach *= catalog.btree_fanout
            h += 1
        return h

    q_attrs = set(p.attr for p in q.predicates) | set(q.group_by)

    # per-table options: scan, or any usable selected base index
    per_table = []
    for t in sorted(q.joined_tables):
        stats = catalog.table(t)
        b = nblocks(stats.row_count, stats.row_width)
        divisor = 1
        for p in q.predicates:
            if p.table == t:
                divisor *= catalog.attribute(p.table, p.attribute).cardinality
        divisor = min(divisor, 10**9)
        options = [b]
        for i in indexes:
            if not i.is_base() or i.id not in config.base_indexes:
                continue
            if i.target != t or i.attribute not in q_attrs:
                continue
            card = catalog.attribute(*i.attribute).cardinality
            options.append(height(card) + math.ceil(b / divisor) if b else 0)
        per_table.append(options)

    alternatives = [sum(combo) for combo in itertools.product(*per_table)]

    all_divisor = 1
    for p in q.predicates:
        all_divisor *= catalog.attribute(p.table, p.attribute).cardinality
    all_divisor = min(all_divisor, 10**9)

    for v in views:
        if v.id not in config.views or not usable_view(q, v):
            continue
        vb = nblocks(v.row_count, v.row_width)
        alternatives.append(vb)
        for vid, attr in config.view_indexes:
            if vid != v.id or attr not in q_attrs or attr not in v.indexable_attrs():
                continue
            card = catalog.attribute(*attr).cardinality
            alternatives.append(height(card) + math.ceil(vb / all_divisor) if vb else 0)

    return min(alternatives)


def random_config(rng: random.Random, inst: Instance) -> Configuration:
    """Random subset of the instance's candidates, always dependency-closed."""
    views = frozenset(v.id for v in inst.views if rng.random() < 0.4)
    base = frozenset(i.id for i in inst.indexes if i.is_base() and rng.random() < 0.4)
    view_keys = set()
    for vpos, vid in enumerate(inst.matrices.view_ids):
        if vid not in views:
            continue
        for ipos, iid in enumerate(inst.matrices.index_ids):
            if inst.matrices.view_index[vpos, ipos] and rng.random() < 0.3:
                cand = next(i for i in inst.indexes if i.id == iid)
                view_keys.add((vid, cand.attribute))
    return Configuration(views=views, base_indexes=base, view_indexes=frozenset(view_keys))
