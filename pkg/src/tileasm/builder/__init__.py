"""Generators for counters, squares and the small worked-example systems."""

from .counter import build_comb, build_counter
from .fixtures import FIXTURES, MARK_TILE, build_fixture, race, race_paths
from .params import BuildParams, counter_params, derive_parameters, height_for
from .result import GeneratedTas
from .square import build_comb_square, build_square, rotate_tileset
from .templates import BuildError

__all__ = [
    "BuildError",
    "BuildParams",
    "FIXTURES",
    "GeneratedTas",
    "MARK_TILE",
    "build_comb",
    "build_comb_square",
    "build_counter",
    "build_fixture",
    "build_square",
    "counter_params",
    "derive_parameters",
    "height_for",
    "race",
    "race_paths",
    "rotate_tileset",
]
