import math
import os
from pathlib import Path

os.environ.setdefault("ZETABOUNDS_CACHE_DIR", str(Path(__file__).parent / ".cache_dir"))

import mpmath
import pytest
from loguru import logger

from config import get_cache
from core import RATIONALS, build_field
from zerodata import load_zeros, write_zeros

ZERO_TABLE_HEIGHT = 1010.0


@pytest.fixture
def rationals():
    return RATIONALS


@pytest.fixture
def quadratic_field():
    """Q(sqrt(-3)): degree 2, one complex place, |disc| = 3."""
    return build_field(2, 0, 1, math.log(3.0))


@pytest.fixture
def cubic_field():
    """A cubic field with one real and one complex place, |disc| = 23."""
    return build_field(3, 1, 1, math.log(23.0))


def _zeta_ordinates(height: float):
    cache = get_cache()
    key = f"zetazero:{height}"
    if cache is not None and key in cache:
        return cache[key]
    ordinates = []
    n = 1
    with mpmath.workdps(20):
        while True:
            gamma = float(mpmath.zetazero(n).imag)
            if gamma > height:
                break
            ordinates.append(gamma)
            n += 1
    logger.info(f"Computed {len(ordinates)} zeta zeros up to {height}")
    if cache is not None:
        cache[key] = ordinates
    return ordinates


@pytest.fixture(scope="session")
def zeta_zero_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("zeros") / "zeta_zeros.txt"
    write_zeros(path, _zeta_ordinates(ZERO_TABLE_HEIGHT), ZERO_TABLE_HEIGHT, comment="zeta zeros from mpmath.zetazero")
    return path


@pytest.fixture(scope="session")
def zeta_table(zeta_zero_file):
    return load_zeros(zeta_zero_file, "Q")
