import pytest

from mvindex.catalog import (
    AttributeStats,
    SchemaCatalog,
    TableStats,
    blocks,
    btree_height,
    format_catalog,
    load_catalog,
    scale_catalog,
    table_blocks,
)
from mvindex.errors import ParseError, ValidationError


def test_fixture_fact_stats(catalog):
    sales = catalog.table("sales")
    assert sales.kind == "fact"
    assert sales.row_count == 16_260_336
    assert sales.row_width == 24
    assert sales.size_mb == 372.17


def test_fixture_storage_params(catalog):
    assert catalog.block_size == 8192
    assert catalog.btree_fanout == 200
    assert catalog.rowid_width == 10


def test_blocks_empty_relation(catalog):
    assert blocks(0, 24, catalog) == 0
    assert blocks(0, 10_000, catalog) == 0


def test_blocks_fact_table(catalog):
    # ceil(16260336 * 24 / 8192) worked out by hand
    assert blocks(16_260_336, 24, catalog) == 47_638


def test_blocks_single_row(catalog):
    assert blocks(1, 24, catalog) == 1


def test_blocks_small_table_one_block(catalog):
    # 5 rows fit one block for any width up to 1638 bytes
    for width in (1, 21, 100, 1638):
        assert blocks(5, width, catalog) == 1
    assert blocks(5, 1639, catalog) == 2


@pytest.mark.parametrize(
    "name,expected",
    [
        ("sales", 47_638),
        ("customers", 855),
        ("products", 292),
        ("times", 26),
        ("promotions", 6),
        ("channels", 1),
    ],
)
def test_fixture_table_blocks(catalog, name, expected):
    assert table_blocks(catalog.table(name), catalog) == expected


def test_blocks_monotone(catalog):
    import random

    rng = random.Random(7)
    for _ in range(300):
        rows = rng.randint(0, 10**7)
        width = rng.randint(1, 500)
        b = blocks(rows, width, catalog)
        assert blocks(rows + rng.randint(0, 1000), width, catalog) >= b
        assert blocks(rows, width + rng.randint(0, 50), catalog) >= b


def test_load_rejects_missing_fact():
    with pytest.raises(ValidationError):
        load_catalog("table d dimension rows 10 row_width 4\n  attr a card 2 width 4\n")
    with pytest.raises(ValidationError):
        load_catalog("")


def test_load_rejects_two_facts():
    text = (
        "table f1 fact rows 10 row_width 4\n"
        "table f2 fact rows 10 row_width 4\n"
    )
    with pytest.raises(ValidationError):
        load_catalog(text)


def test_load_rejects_duplicate_table():
    text = (
        "table f fact rows 10 row_width 4\n"
        "table f fact rows 10 row_width 4\n"
    )
    with pytest.raises(ValidationError):
        load_catalog(text)


def test_load_rejects_duplicate_attribute():
    text = (
        "table f fact rows 10 row_width 4\n"
        "  attr a card 2 width 4\n"
        "  attr a card 3 width 4\n"
    )
    with pytest.raises(ValidationError):
        load_catalog(text)


def test_load_rejects_cardinality_above_rows():
    text = "table f fact rows 10 row_width 4\n  attr a card 11 width 4\n"
    with pytest.raises(ValidationError):
        load_catalog(text)


def test_parse_error_carries_line():
    with pytest.raises(ParseError) as err:
        load_catalog("table f fact rows ten row_width 4\n")
    assert "line 1" in str(err.value)


def test_unknown_directive():
    with pytest.raises(ParseError):
        load_catalog("tables f fact rows 10 row_width 4\n")


def test_round_trip(catalog):
    assert load_catalog(format_catalog(catalog)) == catalog


def test_round_trip_random():
    import random

    rng = random.Random(3)
    for _ in range(20):
        tables = [
            TableStats(
                "fact",
                "fact",
                rng.randint(1, 10**6),
                rng.randint(1, 200),
                (AttributeStats("m", 1, 4),),
            )
        ]
        for d in range(rng.randint(0, 4)):
            rows = rng.randint(1, 10**4)
            attrs = tuple(
                AttributeStats(f"a{j}", rng.randint(1, rows), rng.randint(1, 32))
                for j in range(rng.randint(1, 4))
            )
            tables.append(TableStats(f"d{d}", "dimension", rows, rng.randint(1, 300), attrs))
        cat = SchemaCatalog(tables=tuple(tables), block_size=rng.choice([512, 4096, 8192]))
        assert load_catalog(format_catalog(cat)) == cat


def test_scale_catalog(catalog):
    scaled = scale_catalog(catalog, 100)
    assert scaled.table("sales").row_count == 162_603
    assert scaled.table("channels").row_count == 1  # never below one row
    for t in scaled.tables:
        for a in t.attributes:
            assert 1 <= a.cardinality <= t.row_count
    assert scaled.block_size == catalog.block_size


def test_btree_height(catalog):
    assert btree_height(1, catalog) == 0
    assert btree_height(2, catalog) == 1
    assert btree_height(200, catalog) == 1
    assert btree_height(201, catalog) == 2
    assert btree_height(40_000, catalog) == 2
    assert btree_height(40_001, catalog) == 3
