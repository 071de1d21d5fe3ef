import math
import time

import mpmath
import numpy as np
import pytest

from leadtree import InputError, ParameterError, build, Dataset
from leadtree.datasets import (
    GeneratorSpec,
    ds1_fixture,
    gen_blobs,
    gen_five_spherical,
    gen_five_spiral,
    load_ecoli,
    read_points_csv,
    spiral_points,
    write_manifest,
    write_points_csv,
)


def test_default_sizes():
    sph = gen_five_spherical()
    spi = gen_five_spiral()
    assert sph.n == 2200 and spi.n == 1060
    assert sorted(set(sph.labels.tolist())) == list(range(5))
    assert sorted(set(spi.labels.tolist())) == list(range(5))
    assert sph.dim == spi.dim == 2


def test_spheres_project_inside_their_disks():
    spec = GeneratorSpec("five_spherical", n_points=5, seed=3)
    ds = gen_five_spherical(spec)
    assert ds.labels.tolist() == [0, 1, 2, 3, 4]
    for p, c in zip(ds.points, spec.sphere_centers):
        assert np.hypot(*(p - c)) <= spec.sphere_radius + 1e-12


@pytest.mark.parametrize("kind", ["five_spherical", "five_spiral"])
def test_generators_deterministic(kind, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    write_points_csv(a, gen_five_spherical(GeneratorSpec(kind, seed=9)) if kind == "five_spherical"
                     else gen_five_spiral(GeneratorSpec(kind, seed=9)))
    write_points_csv(b, gen_five_spherical(GeneratorSpec(kind, seed=9)) if kind == "five_spherical"
                     else gen_five_spiral(GeneratorSpec(kind, seed=9)))
    assert a.read_bytes() == b.read_bytes()
    other = gen_five_spiral(GeneratorSpec("five_spiral", seed=10))
    assert not np.array_equal(other.points, gen_five_spiral(GeneratorSpec("five_spiral", seed=9)).points)


def test_spiral_formula_at_start():
    mpmath.mp.dps = 30
    x, y = spiral_points([2.0], 0.0)[0]
    assert x == pytest.approx(float(-mpmath.mpf(2) / 8 * mpmath.cos(2)), rel=1e-15)
    assert y == pytest.approx(float(-mpmath.mpf(2) / 8 * mpmath.sin(2)), rel=1e-15)
    assert (x, y) == pytest.approx((0.10403670913678, -0.22732435670642), abs=1e-13)


def test_spiral_radius_bound():
    spec = GeneratorSpec("five_spiral", seed=4)
    ds = gen_five_spiral(spec)
    for k, c in enumerate(spec.spiral_centers):
        rel = ds.points[ds.labels == k] - c
        r2 = (rel ** 2).sum(axis=1)
        assert r2.max() <= (4 * math.pi) ** 2 / 64 + 1e-12
        assert r2.min() >= 2.0 ** 2 / 64 - 1e-12


def test_spec_validation():
    with pytest.raises(ParameterError):
        GeneratorSpec("five_cubes")
    with pytest.raises(ParameterError):
        GeneratorSpec("five_spiral", n_points=0)
    with pytest.raises(ParameterError):
        GeneratorSpec("five_spiral", seed=-1)
    assert GeneratorSpec("5spiral").kind == "five_spiral"
    assert GeneratorSpec("five_spiral", n_points=7).group_sizes() == [2, 2, 1, 1, 1]


def test_ds1_fixture_rows():
    fx = ds1_fixture(one_based=True)
    assert fx.nneigh.tolist() == [12, 13, 12, 6, 6, 13, 8, 6, 11, 11, 12, 13, 0]
    assert fx.ord_rho.tolist() == [13, 12, 11, 10, 9, 6, 3, 2, 4, 8, 1, 7, 5]
    assert fx.sort_gamma_ind.tolist() == [13, 6, 11, 3, 12, 1, 8, 4, 2, 7, 10, 5, 9]
    assert fx.cl.tolist() == [1, 1, 1, 2, 2, 2, 2, 2, 3, 3, 3, 1, 1]
    assert fx.sort_gamma_ind[0] == 13


def test_ds1_fixture_is_a_valid_peak_structure():
    fx = ds1_fixture()
    assert (fx.nneigh == -1).sum() == 1 and fx.nneigh[12] == -1
    pos = {p: k for k, p in enumerate(fx.ord_rho.tolist())}
    for i, p in enumerate(fx.nneigh.tolist()):
        if p != -1:
            assert pos[p] < pos[i]
    build(fx.nneigh, fx.sort_gamma_ind)  # validates single root and acyclicity


def test_points_csv_roundtrip(tmp_path):
    rng = np.random.default_rng(0)
    ds = Dataset(rng.normal(size=(40, 3)) * 10 ** rng.uniform(-8, 8, size=(40, 3)),
                 rng.integers(0, 4, 40))
    path = tmp_path / "p.csv"
    write_points_csv(path, ds)
    back = read_points_csv(path)
    np.testing.assert_array_equal(back.points, ds.points)
    np.testing.assert_array_equal(back.labels, ds.labels)

    write_points_csv(path, Dataset(ds.points), header=False)
    back = read_points_csv(path, header=False)
    np.testing.assert_array_equal(back.points, ds.points)
    assert back.labels is None


@pytest.mark.parametrize("body, line", [
    ("x1,x2\n1,2\nnan,3\n", 3),
    ("x1,x2\n1,2\n1,2,3\n", 3),
    ("x1,x2\n1,abc\n", 2),
    ("x1,x2,label\n1,2,z\n", 2),
    ("x1,x2\n1,inf\n", 2),
])
def test_points_csv_parse_errors(tmp_path, body, line):
    path = tmp_path / "bad.csv"
    path.write_text(body)
    with pytest.raises(InputError) as err:
        read_points_csv(path)
    assert err.value.line == line


def test_points_csv_load_speed(tmp_path):
    path = tmp_path / "big.csv"
    write_points_csv(path, gen_five_spherical())
    t0 = time.perf_counter()
    ds = read_points_csv(path)
    assert time.perf_counter() - t0 < 1.0
    assert ds.points.shape == (2200, 2)


def test_blobs_with_duplicates():
    ds = gen_blobs(50, k=3, seed=1, duplicates=5)
    assert ds.n == 55
    assert len({tuple(p) for p in ds.points.tolist()}) <= 50


UCI_LINES = [
    "AAT_ECOLI   0.49  0.29  0.48  0.50  0.56  0.24  0.35  cp",
    "ACEA_ECOLI  0.07  0.40  0.48  0.50  0.54  0.35  0.44  cp",
    "ACEK_ECOLI  0.56  0.40  0.48  0.50  0.49  0.37  0.46  im",
]


def test_load_ecoli_small(tmp_path):
    path = tmp_path / "ecoli.data"
    path.write_text("\n".join(UCI_LINES) + "\n")
    ds = load_ecoli(path)
    assert ds.points.shape == (3, 7)
    assert ds.points[0].tolist() == [0.49, 0.29, 0.48, 0.50, 0.56, 0.24, 0.35]
    assert ds.labels.tolist() == [0, 0, 1] and ds.label_names == ("cp", "im")


def test_load_ecoli_errors(tmp_path):
    path = tmp_path / "ecoli.data"
    path.write_text("")
    with pytest.raises(InputError):
        load_ecoli(path)
    path.write_text(UCI_LINES[0] + "\nBAD_ECOLI 0.1 0.2 0.3 0.4 0.5 0.6 cp\n")
    with pytest.raises(InputError) as err:
        load_ecoli(path)
    assert err.value.line == 2


def test_load_ecoli_full(ecoli_path):
    ds = load_ecoli(ecoli_path)
    assert ds.points.shape == (336, 7)


def test_manifest(tmp_path):
    path = tmp_path / "m.json"
    write_manifest(path, seed=np.uint64(5), spec=GeneratorSpec("five_spiral").to_dict())
    text = path.read_text()
    assert '"seed": 5' in text and '"kind": "five_spiral"' in text
