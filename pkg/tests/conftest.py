"""Shared instance registry with per-session caching.

Closure and orbit computations are deterministic, so heavier instances
(wreath p=7 in particular) are computed once and reused across tests.
"""

import numpy as np
import pytest

from orbdiam.diameter import instance_diameter
from orbdiam.families import singer_control, sl_natural, wreath_c2_cp
from orbdiam.groups import AffineInstance, close_group, vector_orbits


def _gl_2_3():
    gens = (
        np.array([[1, 1], [0, 1]]),
        np.array([[1, 0], [1, 1]]),
        np.array([[2, 0], [0, 1]]),
    )
    return AffineInstance(p=3, d=2, generators=gens, label="gl_2_3")


def _c3_perm():
    cyc = np.array([[0, 1, 0], [0, 0, 1], [1, 0, 0]])
    return AffineInstance(p=3, d=3, generators=(cyc,), label="c3_perm")


def _mul2_mod7():
    return AffineInstance(p=7, d=1, generators=(np.array([[2]]),), label="mul2_mod7")


BUILDERS = {
    "wreath3": lambda: wreath_c2_cp(3),
    "wreath5": lambda: wreath_c2_cp(5),
    "wreath7": lambda: wreath_c2_cp(7),
    "sl_2_3": lambda: sl_natural(2, 3),
    "sl_2_5": lambda: sl_natural(2, 5),
    "sl_2_7": lambda: sl_natural(2, 7),
    "sl_2_11": lambda: sl_natural(2, 11),
    "sl_2_37": lambda: sl_natural(2, 37),
    "sl_3_2": lambda: sl_natural(3, 2),
    "singer_2_3": lambda: singer_control(2, 3),
    "singer_3_2": lambda: singer_control(3, 2),
    "singer_2_5": lambda: singer_control(2, 5),
    "gl_2_3": _gl_2_3,
    "c3_perm": _c3_perm,
    "mul2_mod7": _mul2_mod7,
}

# instances small enough for the naive vertex-level BFS oracle, spanning all
# three families plus two extra constructions
DUAL_ORACLE_SET = [
    "wreath3",
    "wreath5",
    "sl_2_3",
    "sl_2_5",
    "sl_2_7",
    "sl_2_11",
    "sl_2_37",
    "sl_3_2",
    "singer_2_3",
    "singer_3_2",
    "singer_2_5",
    "gl_2_3",
    "mul2_mod7",
]

# irreducible instances with p dividing |G| (certification applies)
CERTIFIABLE_SET = [
    "wreath3",
    "wreath5",
    "sl_2_3",
    "sl_2_5",
    "sl_2_7",
    "sl_2_11",
    "sl_2_37",
    "sl_3_2",
    "gl_2_3",
]

SINGER_CONTROLS = ["singer_2_3", "singer_3_2", "singer_2_5"]

_instances = {}
_closures = {}
_partitions = {}
_diameters = {}


def get_instance(name):
    if name not in _instances:
        _instances[name] = BUILDERS[name]()
    return _instances[name]


def get_closure(name):
    if name not in _closures:
        _closures[name] = close_group(get_instance(name))
    return _closures[name]


def get_partition(name):
    if name not in _partitions:
        _partitions[name] = vector_orbits(get_instance(name))
    return _partitions[name]


def get_diameter_report(name, undirected=False):
    key = (name, undirected)
    if key not in _diameters:
        _diameters[key] = instance_diameter(
            get_instance(name),
            undirected=undirected,
            closure=get_closure(name),
            partition=get_partition(name),
        )
    return _diameters[key]


@pytest.fixture
def gl_2_3():
    return get_instance("gl_2_3")


@pytest.fixture
def c3_perm():
    return get_instance("c3_perm")
