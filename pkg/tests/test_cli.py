import csv
import json

import numpy as np
import pytest

from conftest import unit_measure
from lopt.bench import pairwise_relative_errors
from lopt.cli import main
from lopt.data import add_noise, circle_means, gaussian_corpus, make_rng
from lopt.errors import InputError
from lopt.io import read_measure, write_measure
from lopt.measures import DiscreteMeasure


@pytest.fixture
def corpus(tmp_path):
    out = tmp_path / "g"
    assert main(["generate-gaussians", "--n", "15", "--k", "3", "--seed", "4", "--out", str(out)]) == 0
    return out


def test_generate_is_deterministic(tmp_path):
    for name in ("a", "b"):
        assert main(["generate-gaussians", "--n", "10", "--k", "2", "--seed", "9", "--out", str(tmp_path / name)]) == 0
    for f in (tmp_path / "a").iterdir():
        assert f.read_bytes() == (tmp_path / "b" / f.name).read_bytes()


def test_generate_reference_means(tmp_path):
    main(["generate-gaussians", "--n", "5", "--k", "2", "--out", str(tmp_path / "k2")])
    params = json.loads((tmp_path / "k2" / "params.json").read_text())
    np.testing.assert_allclose(params["reference_mean"], [0.0, 0.0], atol=1e-15)
    main(["generate-gaussians", "--n", "5", "--k", "1", "--out", str(tmp_path / "k1")])
    params = json.loads((tmp_path / "k1" / "params.json").read_text())
    assert params["reference_mean"] == params["means"][0]
    np.testing.assert_allclose(np.linalg.norm(circle_means(5), axis=1), np.sqrt(3.0))


def test_point_set_csv_format(tmp_path):
    mu = DiscreteMeasure([[0.1, -2.0, 3.5]], [0.25])
    write_measure(mu, tmp_path / "m.csv")
    assert (tmp_path / "m.csv").read_text().splitlines()[0] == "x0,x1,x2,w"
    back = read_measure(tmp_path / "m.csv")
    assert np.array_equal(back.points, mu.points) and np.array_equal(back.weights, mu.weights)
    (tmp_path / "bad.csv").write_text("x0,x1\n1,2\n")
    with pytest.raises(InputError):
        read_measure(tmp_path / "bad.csv")


def test_noise_counts_and_mass(rng):
    mu = DiscreteMeasure.uniform(rng.random((100, 2)))
    assert add_noise(mu, 0.0, make_rng(1)) is mu
    noisy = add_noise(mu, 0.5, make_rng(1))
    assert noisy.size == 150
    np.testing.assert_array_equal(noisy.weights[100:], np.full(50, 0.01))
    np.testing.assert_array_equal(noisy.weights[:100], mu.weights)
    assert noisy.mass == pytest.approx(1.5)
    lo, hi = mu.points.min(axis=0), mu.points.max(axis=0)
    assert np.all((noisy.points[100:] >= lo) & (noisy.points[100:] <= hi))
    again = add_noise(mu, 0.5, make_rng(1))
    assert np.array_equal(again.points, noisy.points)


def test_add_noise_cli(corpus, tmp_path):
    src = corpus / "measure_000.csv"
    main(["add-noise", str(src), "--eta", "0", "--out", str(tmp_path / "same.csv")])
    assert (tmp_path / "same.csv").read_bytes() == src.read_bytes()
    for name in ("n1.csv", "n2.csv"):
        main(["add-noise", str(src), "--eta", "0.75", "--seed", "3", "--box=-5,-5,5,5", "--out", str(tmp_path / name)])
    assert (tmp_path / "n1.csv").read_bytes() == (tmp_path / "n2.csv").read_bytes()
    assert read_measure(tmp_path / "n1.csv").size == 15 + 12


def test_solve_commands_emit_plan_json(corpus, tmp_path):
    a, b = corpus / "measure_000.csv", corpus / "measure_001.csv"
    assert main(["solve-ot", str(a), str(b), "--out", str(tmp_path / "ot.json")]) == 0
    obj = json.loads((tmp_path / "ot.json").read_text())
    assert obj["plan"]["n0"] == 15 and obj["plan"]["n1"] == 15
    assert all(len(e) == 3 for e in obj["plan"]["entries"])
    assert main(["solve-opt", str(a), str(b), "--lambda", "2", "--out", str(tmp_path / "opt.json")]) == 0
    obj = json.loads((tmp_path / "opt.json").read_text())
    assert obj["cost"] <= 2 * 2.0
    assert obj["destroyed_mass"] == pytest.approx(obj["created_mass"], abs=1e-12)


def test_embed_discrepancy_and_pca(corpus, tmp_path):
    ref = str(corpus / "reference.csv")
    for i in range(3):
        assert main(["embed", str(corpus / f"measure_{i:03d}.csv"), "--reference", ref, "--lambda", "3",
                     "--out", str(tmp_path / f"e{i}.json")]) == 0
    obj = json.loads((tmp_path / "e0.json").read_text())
    assert set(obj) == {"reference_hash", "lambda", "u", "p_hat", "deficit"}
    assert main(["discrepancy", str(tmp_path / "e0.json"), str(tmp_path / "e1.json"), "--reference", ref,
                 "--include-deficit", "--out", str(tmp_path / "d.json")]) == 0
    assert json.loads((tmp_path / "d.json").read_text())["discrepancy"] > 0
    assert main(["pca", *(str(tmp_path / f"e{i}.json") for i in range(3)), "--reference", ref,
                 "--components", "2", "--out", str(tmp_path / "pca.csv")]) == 0
    rows = list(csv.reader((tmp_path / "pca.csv").open()))
    assert rows[0] == ["pc1", "pc2", "label"]
    assert [r[-1] for r in rows[1:]] == ["e0", "e1", "e2"]


def test_discrepancy_rejects_foreign_reference(corpus, tmp_path):
    main(["embed", str(corpus / "measure_000.csv"), "--reference", str(corpus / "reference.csv"),
          "--out", str(tmp_path / "e.json")])
    code = main(["discrepancy", str(tmp_path / "e.json"), str(tmp_path / "e.json"),
                 "--reference", str(corpus / "measure_001.csv")])
    assert code == 2


def test_project_command(corpus, tmp_path):
    out = tmp_path / "p.csv"
    assert main(["project", str(corpus / "measure_001.csv"), "--reference", str(corpus / "reference.csv"),
                 "--lambda", "1", "--out", str(out)]) == 0
    assert read_measure(out).size == 15


@pytest.mark.parametrize("mode", ["ot-geodesic", "lot-geodesic", "opt-interp", "lopt-interp"])
def test_interpolate_writes_frames_and_manifest(corpus, tmp_path, mode):
    out = tmp_path / mode
    args = ["interpolate", str(corpus / "measure_000.csv"), str(corpus / "measure_001.csv"), "--mode", mode,
            "--reference", str(corpus / "reference.csv"), "--lambda", "20", "--ts", "0,0.25,0.5,0.75,1", "--out", str(out)]
    assert main(args) == 0
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["ts"] == [0.0, 0.25, 0.5, 0.75, 1.0]
    assert manifest["files"] == [f"frame_{i:03d}.csv" for i in range(5)]
    assert manifest["mode"] == mode.replace("-", "_")


def test_interpolate_endpoints_from_files(corpus, tmp_path):
    src = read_measure(corpus / "measure_000.csv")
    main(["interpolate", str(corpus / "measure_000.csv"), str(corpus / "measure_001.csv"),
          "--mode", "ot_geodesic", "--ts", "0,1", "--out", str(tmp_path / "c")])
    first = read_measure(tmp_path / "c" / "frame_000.csv")
    assert np.array_equal(first.points, src.points)


def test_lopt_curve_stays_in_convex_hull(corpus, tmp_path):
    from scipy.spatial import Delaunay

    names = ["measure_000.csv", "measure_002.csv", "reference.csv"]
    pooled = np.vstack([read_measure(corpus / n).points for n in names])
    hull = Delaunay(pooled)
    main(["interpolate", str(corpus / names[0]), str(corpus / names[1]), "--mode", "lopt_interp",
          "--reference", str(corpus / names[2]), "--lambda", "30", "--out", str(tmp_path / "c")])
    for f in sorted((tmp_path / "c").glob("frame_*.csv")):
        assert np.all(hull.find_simplex(read_measure(f).points, tol=1e-9) >= 0)


def test_interpolate_needs_reference(corpus, tmp_path):
    code = main(["interpolate", str(corpus / "measure_000.csv"), str(corpus / "measure_001.csv"),
                 "--mode", "lopt_interp", "--lambda", "1", "--out", str(tmp_path / "c")])
    assert code == 2


def test_input_errors_exit_2(corpus, tmp_path):
    assert main(["solve-ot", str(corpus / "measure_000.csv"), str(tmp_path / "missing.csv")]) == 2
    assert main(["solve-opt", str(corpus / "measure_000.csv"), str(corpus / "measure_001.csv"), "--lambda", "-1"]) == 2
    with pytest.raises(SystemExit) as exc:
        main(["solve-opt", "a.csv"])
    assert exc.value.code == 2


def test_barycenter_command(corpus, tmp_path):
    files = [str(corpus / f"measure_{i:03d}.csv") for i in range(3)]
    assert main(["barycenter", *files, "--support-size", "6", "--iters", "3", "--out", str(tmp_path / "b.csv")]) == 0
    bary = read_measure(tmp_path / "b.csv")
    assert bary.size == 6 and bary.mass == pytest.approx(1.0)
    obj = json.loads((tmp_path / "b.csv.json").read_text())["objective"]
    assert all(b <= a + 1e-9 for a, b in zip(obj, obj[1:]))


def test_bench_relative_error_csv(tmp_path):
    out = tmp_path / "re.csv"
    assert main(["bench", "relative-error", "--n", "12", "--k", "3", "--lambdas", "1,5", "--trials", "2",
                 "--out", str(out)]) == 0
    rows = list(csv.DictReader(out.open()))
    assert len(rows) == 4
    assert set(rows[0]) == {"kind", "method", "n", "k", "lambda", "trial", "seed", "value"}
    assert all(0 <= float(r["value"]) < 1 for r in rows)
    params = json.loads((tmp_path / "re.csv.json").read_text())
    assert params["include_deficit"] is True
    main(["bench", "relative-error", "--n", "12", "--k", "3", "--lambdas", "1,5", "--trials", "2",
          "--out", str(tmp_path / "re2.csv")])
    assert out.read_bytes() == (tmp_path / "re2.csv").read_bytes()


def test_bench_timing_csv(tmp_path):
    out = tmp_path / "t.csv"
    assert main(["bench", "timing", "--n", "10", "--k", "2,3", "--out", str(out)]) == 0
    rows = list(csv.DictReader(out.open()))
    assert sorted((r["method"], r["k"]) for r in rows) == [("lopt", "2"), ("lopt", "3"), ("opt_pairwise", "2"), ("opt_pairwise", "3")]


def test_reference_pairs_have_zero_relative_error(rng):
    ref = unit_measure(rng, 8)
    others = [unit_measure(rng, 8) for _ in range(2)]
    for lam in (0.5, 5.0):
        errs, skipped = pairwise_relative_errors([ref] + others, ref, lam)
        assert skipped == 0
        assert errs[0] <= 1e-8 and errs[1] <= 1e-8


def test_identical_pairs_are_skipped():
    measures, ref, _ = gaussian_corpus(10, 1, 0)
    errs, skipped = pairwise_relative_errors([measures[0], measures[0]], ref, 1.0)
    assert errs.size == 0 and skipped == 1


def test_threads_do_not_change_results(monkeypatch):
    measures, ref, _ = gaussian_corpus(12, 4, 5)
    serial, _ = pairwise_relative_errors(measures, ref, 2.0, threads=1)
    threaded, _ = pairwise_relative_errors(measures, ref, 2.0, threads=3)
    np.testing.assert_array_equal(serial, threaded)
