"""Refinement mappings and m-bisimulation checking between ground models."""

from .bisim import (
    BisimReport,
    Counterexample,
    check_bisimulation,
    macro_relation,
    soundness_summary,
)
from .mapping import Mapping, MappingError, check_instance, parse_mapping
from .refinement import (
    Act,
    Choice,
    FAnd,
    FAtom,
    FNot,
    FOr,
    ObjRef,
    ParamRef,
    Pick,
    Seq,
)

__all__ = [
    "Act",
    "BisimReport",
    "Choice",
    "Counterexample",
    "FAnd",
    "FAtom",
    "FNot",
    "FOr",
    "Mapping",
    "MappingError",
    "ObjRef",
    "ParamRef",
    "Pick",
    "Seq",
    "check_bisimulation",
    "check_instance",
    "macro_relation",
    "parse_mapping",
    "soundness_summary",
]
