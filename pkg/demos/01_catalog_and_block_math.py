"""Walk through the bundled star-schema catalog and the block-level size model.

Every cost in mvindex is a count of disk blocks, so this is the arithmetic
everything else stands on: table scans cost their block count, B-tree
descents cost their height, and structures are charged bytes.
"""

from mvindex.catalog import blocks, btree_height, table_blocks
from mvindex.fixtures import sales_star_catalog

catalog = sales_star_catalog()

print("=== catalog ===")
print(f"block size {catalog.block_size} B, fanout {catalog.btree_fanout}, "
      f"rowid {catalog.rowid_width} B\n")

print(f"{'table':<12} {'kind':<10} {'rows':>12} {'row bytes':>10} {'MB':>9} {'blocks':>8}")
for t in catalog.tables:
    print(f"{t.name:<12} {t.kind:<10} {t.row_count:>12,} {t.row_width:>10} "
          f"{t.size_mb:>9} {table_blocks(t, catalog):>8,}")

print("\nA full scan of the fact table reads", table_blocks(catalog.fact_table, catalog),
      "blocks; every join in this workload pays that unless a view replaces it.")

print("\n=== B-tree descent heights (fanout 200) ===")
for card in (1, 5, 200, 10_000, 50_000):
    print(f"  {card:>7,} distinct keys -> height {btree_height(card, catalog)}")

print("\n=== the size model on a hypothetical rollup ===")
rows, width = 7305, 16
print(f"a view with {rows:,} rows of {width} B occupies "
      f"{rows * width:,} B = {blocks(rows, width, catalog)} blocks")
print("compare: answering the same query from base tables costs "
      f"{table_blocks(catalog.table('sales'), catalog) + table_blocks(catalog.table('times'), catalog):,} blocks")
