import random

import pytest

from mvindex.baselines import (
    INDEXES_ONLY,
    VIEWS_ONLY,
    enumerate_exhaustive_objects,
    exhaustive_select,
    isolated_select,
)
from mvindex.benefit import ObjectiveParams, view_object
from mvindex.candidates import build_matrices, generate_index_candidates, generate_view_candidates
from mvindex.catalog import AttributeStats, SchemaCatalog, TableStats
from mvindex.costmodel import Configuration, CostContext
from mvindex.errors import TooManyObjectsError
from mvindex.selector import greedy_select
from mvindex.workload import Query, Workload

from util import random_instance


def _params(n):
    return ObjectiveParams(refresh_ratio=0.0, total_object_count=max(1, n))


def test_exhaustive_empty_objects(queries, matrices, catalog, views, indexes):
    res = exhaustive_select(queries, [], matrices, catalog, 10**9, _params(1),
                            views=views, indexes=indexes)
    assert res.selected_ids == ()
    assert res.total_cost == 384_325


def test_exhaustive_guard():
    inst = random_instance(seed=8, max_tables=6, max_queries=12)
    objects = [view_object(v) for v in inst.views]
    while len(objects) < 21:
        objects = objects + objects
    with pytest.raises(TooManyObjectsError):
        exhaustive_select(
            inst.queries, objects[:21], inst.matrices, inst.catalog, 10**9, _params(21),
            views=inst.views, indexes=inst.indexes,
        )


def test_exhaustive_three_object_knapsack():
    """Three non-interacting equal-size objects, budget for two: the oracle
    keeps the two with the larger savings."""
    inst = _uniform_instance(seed=1, n_dims=3)
    objects = [view_object(v) for v in inst.views]
    size = objects[0].full_size(inst.catalog)
    assert all(o.full_size(inst.catalog) == size for o in objects)

    ctx = CostContext(inst.queries, inst.views, inst.indexes, inst.matrices, inst.catalog)
    savings = {}
    base = ctx.workload_total(Configuration())
    for o in objects:
        savings[o.id] = base - ctx.workload_total(o.apply_to(Configuration()))
    keep = sorted(savings, key=lambda k: (-savings[k], k))[:2]

    res = exhaustive_select(
        inst.queries, objects, inst.matrices, inst.catalog, 2 * size, _params(3),
        views=inst.views, indexes=inst.indexes,
    )
    assert sorted(res.selected_ids) == sorted(keep)


def _uniform_instance(seed: int, n_dims: int):
    """Non-interacting family: one query per dimension, one view per query,
    uniform view sizes, no usable indexes."""
    rng = random.Random(seed)
    card = rng.choice([64, 128, 256])
    width = rng.choice([8, 16])
    dims = []
    for d in range(n_dims):
        rows = rng.randint(2000, 4000)
        dims.append(
            TableStats(
                f"dim{d}",
                "dimension",
                rows,
                160,
                (AttributeStats(f"key{d}", rows, 4), AttributeStats(f"a{d}", card, width)),
            )
        )
    fact_rows = 500_000
    fact = TableStats(
        "fact",
        "fact",
        fact_rows,
        24,
        tuple(AttributeStats(f"fk{d}", dims[d].row_count, 4) for d in range(n_dims))
        + (AttributeStats("measure", 1000, 4),),
    )
    catalog = SchemaCatalog(tables=(fact, *dims))
    queries = []
    for d in range(n_dims):
        queries.append(
            Query(
                id=f"q{d + 1}",
                select_attrs=((f"dim{d}", f"a{d}"),),
                aggregates=(("sum", ("fact", "measure")),),
                joined_tables=frozenset({"fact", f"dim{d}"}),
                join_pairs=((("fact", f"fk{d}"), (f"dim{d}", f"key{d}")),),
                predicates=(),
                group_by=(((f"dim{d}", f"a{d}")),),
            )
        )
    workload = Workload(queries=tuple(queries))
    views = generate_view_candidates(workload, catalog)
    indexes = generate_index_candidates(workload, views, catalog, min_support=99)
    assert indexes == []
    matrices = build_matrices(workload, views, indexes)
    from util import Instance

    return Instance(catalog, workload, views, indexes, matrices)


def test_uniform_family_views_identical_size():
    inst = _uniform_instance(seed=3, n_dims=4)
    sizes = {view_object(v).full_size(inst.catalog) for v in inst.views}
    assert len(sizes) == 1


def test_greedy_matches_exhaustive_on_uniform_family():
    for seed in range(12):
        n_dims = 2 + seed % 4
        inst = _uniform_instance(seed=seed, n_dims=n_dims)
        objects = [view_object(v) for v in inst.views]
        size = objects[0].full_size(inst.catalog)
        params = _params(len(objects))
        for m in range(1, n_dims + 1):
            budget = m * size
            greedy = greedy_select(
                inst.queries, inst.views, inst.indexes, inst.matrices, inst.catalog,
                budget, params,
            )
            exact = exhaustive_select(
                inst.queries, objects, inst.matrices, inst.catalog, budget, params,
                views=inst.views, indexes=inst.indexes,
            )
            assert greedy.final_cost == exact.total_cost


def test_exhaustive_never_worse_than_greedy_random():
    checked = 0
    for seed in range(60):
        inst = random_instance(seed=5000 + seed, max_tables=5, max_queries=8)
        objects = enumerate_exhaustive_objects(
            inst.views, inst.indexes, inst.matrices, inst.catalog
        )
        if len(objects) > 12:
            continue
        params = _params(len(inst.views) + len(inst.indexes))
        total = sum(o.full_size(inst.catalog) for o in objects) or 1
        rng = random.Random(seed)
        budget = rng.randint(1, total)
        greedy = greedy_select(
            inst.queries, inst.views, inst.indexes, inst.matrices, inst.catalog, budget, params
        )
        exact = exhaustive_select(
            inst.queries, objects, inst.matrices, inst.catalog, budget, params,
            views=inst.views, indexes=inst.indexes,
        )
        assert exact.total_cost <= greedy.final_cost
        assert exact.used_bytes <= budget
        checked += 1
    assert checked >= 10


def test_isolated_views_only_empty(queries, indexes, matrices, catalog):
    res = isolated_select(VIEWS_ONLY, queries, [], indexes, matrices, catalog, 10**9, _params(12))
    assert res.config.is_empty()


def test_isolated_indexes_only_never_composite(queries, views, indexes, matrices, catalog):
    res = isolated_select(
        INDEXES_ONLY, queries, views, indexes, matrices, catalog, 10**12, _params(19)
    )
    assert not res.config.views
    assert not res.config.view_indexes
    for it in res.iterations:
        assert it.kind == "index"


def test_simultaneous_beats_isolated_at_full_budget(queries, views, indexes, matrices, catalog):
    from mvindex.selector import enumerate_objects

    objects = enumerate_objects(views, indexes, matrices, catalog)
    budget = sum(o.full_size(catalog) for o in objects) + 1
    params = _params(19)
    sim = greedy_select(queries, views, indexes, matrices, catalog, budget, params)
    only_v = isolated_select(VIEWS_ONLY, queries, views, indexes, matrices, catalog, budget, params)
    only_i = isolated_select(INDEXES_ONLY, queries, views, indexes, matrices, catalog, budget, params)
    assert sim.final_cost <= only_v.final_cost
    assert sim.final_cost <= only_i.final_cost
