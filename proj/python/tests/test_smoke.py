import math

import numpy as np
import pytest

import steklov


def test_disk_spectrum():
    mesh = steklov.disk_mesh(1.0, 0.05)
    assert mesh.area() == pytest.approx(math.pi, rel=0.01)
    assert mesh.vertices.shape == (mesh.num_vertices, 2)
    r = steklov.steklov_spectrum(mesh, 5)
    assert abs(r.eigenvalues[0]) < 1e-10
    assert r.eigenvalues[1:] == pytest.approx([1, 1, 2, 2], rel=0.01)
    assert r.cluster_sizes == [1, 2, 2]
    assert max(steklov.spectral_residuals(mesh, r)) < 1e-8


def test_nodal_summary():
    mesh = steklov.disk_mesh(1.0, 0.05)
    x = mesh.vertices[:, 0]
    s = steklov.nodal_summary(mesh, x)
    assert s["domains"] == 2
    assert s["cycle_rank"] == 0
    assert s["boundary_endpoints"] == [2]
    assert all(s["touches_steklov"])


def test_graphs():
    assert steklov.graph_spectrum(steklov.complete_graph(3)) == pytest.approx([0, 3, 3])
    g = steklov.prescribe_spectrum([1.0, 2.0, 3.0])
    assert steklov.graph_spectrum(g) == pytest.approx([0, 1, 2, 3], rel=1e-8, abs=1e-12)
    with pytest.raises(steklov.SteklovError):
        steklov.Graph(2, [(0, 0)], [1.0])


def test_thickened_graph():
    mesh = steklov.thickened_mesh(steklov.complete_graph(3), 0.05)
    assert mesh.euler_characteristic() == 0
    assert mesh.boundary_length() == pytest.approx(3 * 0.2)


def test_cylinder_formula():
    assert steklov.cylinder_formula(1.0, 0.5) == pytest.approx(0.46211715726)


def test_run_config():
    report = steklov.run_config({"kind": "spectrum", "params": {"domain": "disk", "h": 0.1, "n_eigs": 5}})
    assert report["kind"] == "spectrum"
    assert all(c["passed"] for c in report["checks"])
    with pytest.raises(steklov.SteklovError):
        steklov.run_config({"kind": "spectrum", "params": {"bogus": 1}})


def test_mixed_disk():
    mesh = steklov.mixed_disk_mesh(1.0, 0.1, 0.0, math.pi)
    assert mesh.boundary_length(steklov.BoundaryTag.Steklov) == pytest.approx(math.pi, rel=0.01)
    r = steklov.steklov_spectrum(mesh, 4)
    field = np.asarray(r.extensions[:, 2])
    assert all(steklov.nodal_summary(mesh, field)["touches_steklov"])
