import numpy as np
import pytest

from mvindex.candidates import (
    build_matrices,
    generate_index_candidates,
    generate_view_candidates,
    load_candidates,
    usable_index,
    usable_view,
)
from mvindex.errors import UnknownNameError, ValidationError
from mvindex.workload import Workload


def _single_query_workload(workload, qid):
    return Workload(queries=(workload.query(qid),), refresh_ratio=0.0)


def test_generate_view_for_q1(workload, catalog):
    views = generate_view_candidates(_single_query_workload(workload, "q1"), catalog)
    assert len(views) == 1
    v = views[0]
    assert v.id == "v1"
    assert v.joined_tables == frozenset({"sales", "times"})
    assert set(v.group_by) == {("sales", "time_id"), ("times", "time_fiscal_year")}
    assert v.aggregates == (("sum", ("sales", "amount_sold")),)


def test_generate_empty_workload(catalog):
    assert generate_view_candidates(Workload(queries=()), catalog) == []
    assert generate_index_candidates(Workload(queries=()), [], catalog, 1) == []


def test_generate_merges_same_join_signature(workload, catalog):
    pair = Workload(queries=(workload.query("q2"), workload.query("q4")))
    views = generate_view_candidates(pair, catalog)
    assert len(views) == 1
    got = set(views[0].group_by)
    assert {("sales", "prod_id"), ("products", "prod_name"), ("promotions", "promo_category")} <= got


def test_generated_ids_stable(workload, catalog):
    a = generate_view_candidates(workload, catalog)
    b = generate_view_candidates(workload, catalog)
    assert a == b
    # five distinct join signatures in the eight-query workload
    assert [v.id for v in a] == ["v1", "v2", "v3", "v4", "v5"]


def test_view_row_estimate_capped_by_fact(workload, catalog):
    for v in generate_view_candidates(workload, catalog):
        assert v.row_count <= catalog.fact_table.row_count


def test_index_candidates_min_support_one(workload, views, catalog):
    cands = generate_index_candidates(workload, [], catalog, 1)
    attrs = {c.attribute for c in cands}
    assert ("promotions", "promo_category") in attrs
    assert ("channels", "channel_class") in attrs
    # group-by attrs of the fact table mine candidates too
    assert ("sales", "time_id") in attrs


def test_index_candidates_min_support_two(workload, catalog):
    cands = generate_index_candidates(workload, [], catalog, 2)
    attrs = {c.attribute for c in cands}
    assert ("promotions", "promo_category") in attrs  # used by q2 and q4
    assert ("channels", "channel_class") not in attrs  # only q8


def test_index_candidates_support_above_workload(workload, catalog):
    assert generate_index_candidates(workload, [], catalog, 99) == []


def test_generated_view_candidates_cover_views(workload, catalog):
    views = generate_view_candidates(workload, catalog)
    cands = generate_index_candidates(workload, views, catalog, 1)
    on_view = [c for c in cands if not c.is_base()]
    assert on_view, "expected on-view index candidates"
    for c in on_view:
        assert c.attribute in c.on_view.group_by_set()


def test_usable_view_fixture_cases(workload, views):
    by_id = {v.id: v for v in views}
    assert usable_view(workload.query("q1"), by_id["v1"])
    assert not usable_view(workload.query("q1"), by_id["v4"])
    assert usable_view(workload.query("q5"), by_id["v7"])
    assert usable_view(workload.query("q8"), by_id["v2"])
    assert usable_view(workload.query("q8"), by_id["v6"])
    assert not usable_view(workload.query("q2"), by_id["v5"])


def test_generated_view_usable_by_its_group(workload, catalog):
    views = generate_view_candidates(workload, catalog)
    for q in workload.queries:
        own = [v for v in views if v.joined_tables == q.joined_tables]
        assert len(own) == 1
        assert usable_view(q, own[0])


def test_usable_index_fixture_cases(workload, indexes):
    by_id = {i.id: i for i in indexes}
    assert usable_index(workload.query("q1"), by_id["i8"])
    assert usable_index(workload.query("q2"), by_id["i1"])
    assert not usable_index(workload.query("q8"), by_id["i1"])


def test_usable_index_rejects_view_target(workload, views, catalog):
    from mvindex.candidates import make_view_index

    v1 = views[0]
    j = make_view_index("j1", v1, v1.group_by[0], catalog)
    with pytest.raises(ValidationError):
        usable_index(workload.query("q1"), j)


def test_build_matrices_empty(catalog):
    w = Workload(queries=())
    m = build_matrices(w, [], [])
    assert m.query_view.size == 0
    assert m.query_index.size == 0
    assert m.view_index.size == 0


def test_vi_requires_target_membership(matrices, views, indexes):
    # every unit cell pairs an index attribute with an indexable view attribute
    by_vid = {v.id: v for v in views}
    by_iid = {i.id: i for i in indexes}
    for vpos, vid in enumerate(matrices.view_ids):
        for ipos, iid in enumerate(matrices.index_ids):
            if matrices.view_index[vpos, ipos]:
                assert by_iid[iid].attribute in by_vid[vid].indexable_attrs()


def test_vi_v7_i11(matrices):
    assert matrices.vi("v7", "i11")


def test_matrices_idempotent(workload, views, indexes):
    a = build_matrices(workload, views, indexes)
    b = build_matrices(workload, views, indexes)
    assert np.array_equal(a.query_view, b.query_view)
    assert np.array_equal(a.query_index, b.query_index)
    assert np.array_equal(a.view_index, b.view_index)


def test_row_sums_for_queries_with_usable_views(workload, catalog):
    views = generate_view_candidates(workload, catalog)
    m = build_matrices(workload, views, [])
    assert (m.query_view.sum(axis=1) >= 1).all()


def test_load_candidates_round_trip_ids(views, indexes):
    assert [v.id for v in views] == [f"v{k}" for k in range(1, 8)]
    assert [i.id for i in indexes] == [f"i{k}" for k in range(1, 13)]


def test_load_candidates_rejects_unknown_names(catalog):
    with pytest.raises(UnknownNameError):
        load_candidates("view v1\n  tables sales, nosuch\n  group_by sales.time_id\n", catalog)
    with pytest.raises(UnknownNameError):
        load_candidates("index i1 on nosuch key attr\n", catalog)


def test_load_candidates_requires_fact(catalog):
    text = "view v1\n  tables times\n  group_by times.time_id\n"
    with pytest.raises(ValidationError):
        load_candidates(text, catalog)


def test_load_candidates_rejects_bad_view_index(catalog):
    text = (
        "view v1\n  tables sales, times\n  group_by sales.time_id\n"
        "index j1 on v1 key times.time_fiscal_year\n"
    )
    with pytest.raises(ValidationError):
        load_candidates(text, catalog)


def test_dedicated_view_index_suppresses_base_pairing(workload, catalog):
    text = (
        "view v1\n"
        "  tables sales, times\n"
        "  join sales.time_id = times.time_id\n"
        "  group_by sales.time_id, times.time_fiscal_year\n"
        "  agg sum(sales.amount_sold)\n"
        "index i1 on times key time_fiscal_year\n"
        "index j1 on v1 key times.time_fiscal_year\n"
    )
    views, indexes = load_candidates(text, catalog)
    m = build_matrices(workload, views, indexes)
    assert m.vi("v1", "j1")
    assert not m.vi("v1", "i1")  # the dedicated candidate owns the cell
    assert m.pair_count() == 1
