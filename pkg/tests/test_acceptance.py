"""End-to-end acceptance gates, one per stated criterion.

Each test prints a single PASS/FAIL line (visible with ``pytest -s``) and
asserts the corresponding numeric gate at its stated tolerance.
"""

import json
import math
import time

import numpy as np
import pytest

from fraceig import (ConstantKernel, FracParams, PeriodicProductKernel,
                     SolverOptions, build_box, build_interval, first_eigenpair,
                     gagliardo_energy, get_quadrature, hausdorff_distance,
                     holder_quotient_sup, homogenization_sweep,
                     infinity_eigen_certificate, k_constant,
                     k_constant_closed_form, local_eigenvalue_1d, lq_norm,
                     spectrum_linear, sweep_p, sweep_s, weighted_energy)
from fraceig.cli import run as cli_run

from test_eigensolve import shooting_eigenvalue_1d
from test_functional import naive_form_energy, naive_holder_sup, rand_function


def report(num, ok, detail):
    line = f"ACCEPTANCE {num:2d}: {'PASS' if ok else 'FAIL'} - {detail}"
    print(line)
    assert ok, line


def test_criterion_01_k_constant():
    t0 = time.time()
    worst = 0.0
    for N in (1, 2, 3):
        for p in (1.5, 2.0, 3.0, 10.0):
            exact = k_constant_closed_form(N, p)
            worst = max(worst, abs(k_constant(N, p) - exact) / exact)
    dt = time.time() - t0
    report(1, worst < 1e-10 and dt < 1.0,
           f"K(N,p) quadrature vs closed form, worst rel err {worst:.2e}, {dt:.2f}s")


def test_criterion_02_energy_oracles():
    t0 = time.time()
    rng = np.random.default_rng(42)
    worst = 0.0
    fp = FracParams(s=0.6, p=2.0)
    kern = PeriodicProductKernel(3)
    for d in (build_interval(1.0, 64), build_box(1.0, 1.0, 16)):
        u = rand_function(d, rng)
        form = get_quadrature(d, fp.s, fp.p).form()
        ref = (1 - fp.s) * naive_form_energy(form, list(u.values), fp.p)
        worst = max(worst, abs(gagliardo_energy(u, fp) - ref) / abs(ref))
        wform = get_quadrature(d, fp.s, fp.p).form(kern)
        wref = naive_form_energy(wform, list(u.values), fp.p)
        worst = max(worst,
                    abs(weighted_energy(u, fp, kern) - wref) / abs(wref))
        href = naive_holder_sup(u, 0.5)
        worst = max(worst, abs(holder_quotient_sup(u, 0.5) - href) / href)
    dt = time.time() - t0
    report(2, worst < 1e-12 and dt < 10.0,
           f"optimized vs naive energies/Hölder sup, worst rel err {worst:.2e}, {dt:.1f}s")


def test_criterion_03_homogeneity_convexity():
    t0 = time.time()
    d = build_interval(1.0, 32)
    fp = FracParams(s=0.5, p=3.0)
    kern = PeriodicProductKernel(4)
    one = ConstantKernel(1.0)
    rng = np.random.default_rng(7)
    ok = True
    for _ in range(50):
        u = rand_function(d, rng)
        v = rand_function(d, rng)
        c = float(rng.uniform(0.1, 3.0))
        E = gagliardo_energy(u, fp)
        fn = E ** (1 / fp.p)
        ok &= abs(gagliardo_energy(c * u, fp) - c**fp.p * E) <= 1e-12 * c**fp.p * E
        ok &= abs(gagliardo_energy(-u, fp) - E) <= 1e-12 * E
        ok &= abs(gagliardo_energy(c * u, fp) ** (1 / fp.p) - c * fn) <= 1e-12 * c * fn
        fm = gagliardo_energy(0.5 * (u + v), fp) ** (1 / fp.p)
        fv = gagliardo_energy(v, fp) ** (1 / fp.p)
        ok &= fm <= 0.5 * (fn + fv) + 1e-12
        base = weighted_energy(u, fp, one)
        mid = weighted_energy(u, fp, kern)
        ok &= kern.lower * base - 1e-12 <= mid <= kern.upper * base + 1e-12
    dt = time.time() - t0
    report(3, ok and dt < 10.0,
           f"homogeneity/evenness/convexity/kernel sandwich on 50 functions, {dt:.1f}s")


def test_criterion_04_s_limit_p2():
    t0 = time.time()
    d = build_interval(1.0, 256)
    s_vals = list(np.linspace(0.60, 0.95, 8))
    errs = {}
    for k, tol in ((1, 0.03), (2, 0.05), (3, 0.05)):
        rep = sweep_s(d, 2.0, k, s_vals, mesh_check=False)
        ref = (k * math.pi) ** 2
        assert rep.reference == pytest.approx(ref, rel=1e-12)
        errs[k] = abs(rep.extrapolated - ref) / ref
    dt = time.time() - t0
    ok = errs[1] < 0.03 and errs[2] < 0.05 and errs[3] < 0.05 and dt < 120
    report(4, ok, "s->1 limit p=2 n=256, extrapolation errors "
           + ", ".join(f"k={k}: {e:.2%}" for k, e in errs.items())
           + f", {dt:.1f}s")


def test_criterion_05_s_limit_p3():
    t0 = time.time()
    ref_local = local_eigenvalue_1d(1, 3.0, 1.0)
    shoot = shooting_eigenvalue_1d(1, 3.0, 1.0)
    pre_ok = abs(ref_local - shoot) / shoot < 1e-6
    d = build_interval(1.0, 128)
    rep = sweep_s(d, 3.0, 1, list(np.linspace(0.60, 0.95, 8)), mesh_check=False)
    ref = (2.0 / 3.0) * ref_local
    assert rep.reference == pytest.approx(ref, rel=1e-12)
    err = abs(rep.extrapolated - ref) / ref
    dt = time.time() - t0
    report(5, pre_ok and err < 0.10 and dt < 300,
           f"s->1 limit p=3 n=128: shooting check {abs(ref_local-shoot)/shoot:.1e}, "
           f"extrapolation err {err:.2%}, {dt:.1f}s")


def test_criterion_06_p_limit():
    t0 = time.time()
    d = build_interval(1.0, 128)
    rep = sweep_p(d, 0.5, [8.0, 16.0, 24.0, 32.0, 40.0], mesh_check=False)
    assert rep.reference == pytest.approx(2.0**0.5, rel=1e-14)
    e8, e40 = rep.relative_errors[0], rep.relative_errors[-1]
    dt = time.time() - t0
    report(6, e40 < 0.15 and e40 < e8 and dt < 600,
           f"p->infinity alpha=0.5 n=128: err(8)={e8:.2%}, err(40)={e40:.2%}, {dt:.1f}s")


def test_criterion_07_infinity_certificate():
    t0 = time.time()
    worst = 0.0
    for d, alpha in ((build_interval(1.0, 64), 0.5),
                     (build_box(1.0, 1.0, 16), 0.5)):
        cert = infinity_eigen_certificate(d, alpha)
        assert cert.certified
        ratio = holder_quotient_sup(cert.cone, alpha) / lq_norm(cert.cone, np.inf)
        worst = max(worst, abs(ratio - cert.lam) / cert.lam)
    dt = time.time() - t0
    report(7, worst < 1e-12 and dt < 1.0,
           f"cone certificate ratio vs R^-alpha, worst rel err {worst:.2e}, {dt:.2f}s")


def test_criterion_08_homogenization():
    t0 = time.time()
    d = build_interval(1.0, 128)
    fp = FracParams(s=0.5, p=2.0)
    rep = homogenization_sweep(d, fp, PeriodicProductKernel(1), [1, 2, 4, 8, 16])
    violations = int(np.sum(np.diff(rep.relative_errors) > 0))
    err16 = rep.relative_errors[-1]
    dt = time.time() - t0
    report(8, err16 < 0.02 and violations <= 1 and dt < 120,
           f"homogenization p=2 s=0.5 n=128: err(freq 16)={err16:.3%}, "
           f"{violations} monotonicity violations, {dt:.1f}s")


def test_criterion_09_solver_cross_check():
    t0 = time.time()
    worst = 0.0
    for n in (32, 64, 128):
        d = build_interval(1.0, n)
        dense = spectrum_linear(d, 0.5, 1)[0][0]
        res = first_eigenpair(d, FracParams(s=0.5, p=2.0),
                              SolverOptions(tolerance=1e-12))
        # descent asserts in-loop that the Rayleigh quotient never increases
        assert res.converged
        worst = max(worst, abs(res.lam - dense) / dense)
    dt = time.time() - t0
    report(9, worst < 1e-6,
           f"descent vs dense eigensolve on n=32,64,128, worst rel err {worst:.2e}, {dt:.1f}s")


def test_criterion_10_hausdorff_axioms():
    t0 = time.time()
    d = build_interval(1.0, 16)
    rng = np.random.default_rng(11)

    def rand_set():
        return [d.function(rng.standard_normal(d.num_interior))
                for _ in range(rng.integers(1, 4))]

    ok = True
    for _ in range(100):
        A, B, C = rand_set(), rand_set(), rand_set()
        ok &= hausdorff_distance(A, A, 2.0) <= 1e-12
        ok &= abs(hausdorff_distance(A, B, 2.0)
                  - hausdorff_distance(B, A, 2.0)) <= 1e-12
        ok &= (hausdorff_distance(A, C, 2.0)
               <= hausdorff_distance(A, B, 2.0)
               + hausdorff_distance(B, C, 2.0) + 1e-12)
    dt = time.time() - t0
    report(10, ok and dt < 5.0,
           f"Hausdorff identity/symmetry/triangle on 100 random sets, {dt:.1f}s")


def test_criterion_11_reproducibility(tmp_path, monkeypatch):
    t0 = time.time()
    monkeypatch.chdir(tmp_path)
    argv = ["sweep-s", "--p", "2", "--k", "1", "--n", "64",
            "--s", "0.5:0.9:5", "--format", "both", "--output", "first"]
    assert cli_run(argv) == 0
    doc = json.loads((tmp_path / "first.json").read_text())
    (tmp_path / "cfg.json").write_text(json.dumps(doc["config"]))
    outputs = []
    for threads, name in (("1", "second"), ("4", "third")):
        monkeypatch.setenv("FRACEIG_THREADS", threads)
        assert cli_run(["--config", "cfg.json", "--output", name,
                        "--format", "both"]) == 0
        outputs.append(json.loads((tmp_path / f"{name}.json").read_text()))
    ok = all(out[key] == doc[key]
             for out in outputs
             for key in ("parameters", "eigenvalues", "reference",
                         "extrapolated", "relative_errors"))
    ok &= (tmp_path / "first.csv").read_text() == \
        (tmp_path / "third.csv").read_text()
    dt = time.time() - t0
    report(11, ok, "report re-run from embedded config bit-identical under "
           f"FRACEIG_THREADS in {{1,4}}, {dt:.1f}s")
