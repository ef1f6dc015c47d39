"""Steklov spectra of planar domains: meshes, spectra, graph prescription, nodal audits."""

import json

from . import _core
from ._core import (
    BoundaryTag,
    Graph,
    Mesh,
    SteklovError,
    Spectrum,
    annulus_mesh,
    complete_graph,
    cylinder_formula,
    disk_mesh,
    graph_spectrum,
    load_mesh,
    mixed_disk_mesh,
    nodal_summary,
    prescribe_spectrum,
    spectral_residuals,
    steklov_spectrum,
    strip_mesh,
    thickened_mesh,
)


def run_config(config):
    """Run an experiment config (dict) and return the report as a dict."""
    return json.loads(_core._run_config(json.dumps(config)))


__all__ = [
    "BoundaryTag", "Graph", "Mesh", "SteklovError", "Spectrum", "annulus_mesh", "complete_graph",
    "cylinder_formula", "disk_mesh", "graph_spectrum", "load_mesh", "mixed_disk_mesh", "nodal_summary",
    "prescribe_spectrum", "run_config", "spectral_residuals", "steklov_spectrum", "strip_mesh", "thickened_mesh",
]
