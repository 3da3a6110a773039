import sys
from functools import lru_cache

import pytest

from parasasaki.catalog import parse_catalog
from parasasaki.connection import compute_connection
from parasasaki.sasaki import build_structure, compute_alpha, select_C_tilde, select_k
from parasasaki.symmsys import center_data


@lru_cache(maxsize=None)
def system(spec: str):
    return parse_catalog(spec)


@lru_cache(maxsize=None)
def structure(spec: str, alt: bool = False):
    s = system(spec)
    cd = center_data(s)
    ksel = select_k(s, cd)
    Ct = select_C_tilde(s, cd, ksel, alt=alt)
    return build_structure(s, cd, ksel, Ct, compute_alpha(s, cd, Ct))


@lru_cache(maxsize=None)
def connection(spec: str):
    return compute_connection(structure(spec), strict=True)


@pytest.fixture
def sl2():
    return structure("sl2_std")


@pytest.fixture
def d1():
    return structure("quad_ext:1")


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
