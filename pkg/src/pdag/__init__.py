"""Tools for abstracting typed STRIPS planning domains.

The package bundles a PDDL front end, a grounder and forward-search
planner, prompt assembly and an LLM gateway for generating candidate
abstractions, a ground bisimulation checker for refinement mappings,
and a rubric-based evaluation harness with a review service.
"""

__version__ = "0.1.0"
