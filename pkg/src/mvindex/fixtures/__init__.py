"""Bundled sales-star fixture: catalog, workload and candidate files."""

from __future__ import annotations

from importlib import resources

from ..catalog import SchemaCatalog, load_catalog
from ..candidates import load_candidates
from ..workload import Workload, load_workload

CATALOG_FILE = "sales_star.catalog"
WORKLOAD_FILE = "sales_star.workload"
CANDIDATES_FILE = "sales_star.candidates"


def fixture_text(name: str) -> str:
    return resources.files(__package__).joinpath(name).read_text(encoding="utf-8")


def fixture_path(name: str) -> str:
    return str(resources.files(__package__).joinpath(name))


def sales_star_catalog() -> SchemaCatalog:
    return load_catalog(fixture_text(CATALOG_FILE), CATALOG_FILE)


def sales_star_workload(catalog: SchemaCatalog | None = None) -> Workload:
    catalog = catalog or sales_star_catalog()
    return load_workload(fixture_text(WORKLOAD_FILE), catalog, WORKLOAD_FILE)


def sales_star_candidates(catalog: SchemaCatalog | None = None):
    catalog = catalog or sales_star_catalog()
    return load_candidates(fixture_text(CANDIDATES_FILE), catalog, CANDIDATES_FILE)
