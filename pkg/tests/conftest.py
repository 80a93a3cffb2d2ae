"""Shared fixtures."""

from __future__ import annotations

import pytest

from raycal.geometry import EnvironmentMap
from raycal.materials import MaterialLibrary, reference_library
from tests.scenes import box_room, square_z, truth_library


@pytest.fixture
def floor_env() -> EnvironmentMap:
    return EnvironmentMap(name="floor", facets=(square_z("floor", "drywall", -100, 100, -100, 100),))


@pytest.fixture
def box_env() -> EnvironmentMap:
    return box_room()


@pytest.fixture
def office_lib() -> MaterialLibrary:
    return reference_library("Indoor Office")


@pytest.fixture
def truth_lib() -> MaterialLibrary:
    return truth_library()
