"""Acceptance criteria, one test per criterion.

Each test prints a single ACCEPTANCE line (visible under pytest -s) and
asserts the criterion verbatim.  Tolerances are pinned, not tuned.
"""

import math
import time

import numpy as np

from heckop import cli
from heckop import exppoly as ep
from heckop import fourier as fr
from heckop import quadrature as qd
from heckop import specfun as sf

KS = (0.5, 1.0, 2.5)


def report(idx, slug, ok, detail=""):
    line = f"ACCEPTANCE {idx} {slug}: {'PASS' if ok else 'FAIL'}"
    if detail:
        line += f"  ({detail})"
    print(line)
    return line


def test_criterion_1_orthogonality_norms():
    t0 = time.perf_counter()
    worst_off = 0.0
    worst_diag = 0.0
    for k in KS:
        idx = sorted(range(-16, 17), key=ep.enumeration_key)
        es = {n: ep.build_E_gram_schmidt(n, k) for n in idx}
        gams = {n: sf.gamma_coeff(n, k) for n in idx}
        for i, n in enumerate(idx):
            for m in idx[:i + 1]:
                v = ep.inner_product(es[n], es[m], k) * gams[n] * gams[m]
                if n == m:
                    worst_diag = max(worst_diag, abs(v.real - 1.0))
                else:
                    worst_off = max(worst_off, abs(v))
    dt = time.perf_counter() - t0
    ok = worst_off < 1e-9 and worst_diag < 1e-10 and dt < 10.0
    line = report(1, "orthogonality-norms", ok,
                  f"off {worst_off:.2e}, diag {worst_diag:.2e}, {dt:.2f}s")
    assert ok, line


def test_criterion_2_eigen_identities():
    t0 = time.perf_counter()
    worst_eig = 0.0
    worst_sym = 0.0
    for k in KS:
        for n in range(-32, 33):
            rep = ep.identity_checks(n, k)
            worst_eig = max(worst_eig, rep.eigen_residual)
            worst_sym = max(worst_sym, rep.sym_eigen_residual)
    dt = time.perf_counter() - t0
    ok = worst_eig < 1e-12 and worst_sym < 1e-12 and dt < 5.0
    line = report(2, "eigen-identities", ok,
                  f"eig {worst_eig:.2e}, sym {worst_sym:.2e}, {dt:.2f}s")
    assert ok, line


def test_criterion_3_shift_reflection_triangularity():
    worst_shift = 0.0
    worst_reflect = 0.0
    min_coeff = 0.0
    support_ok = True
    for k in KS:
        for n in range(-20, 21):
            rep = ep.identity_checks(n, k)
            worst_shift = max(worst_shift, rep.shift_residual)
            if rep.reflect_residual is not None:
                worst_reflect = max(worst_reflect, rep.reflect_residual)
            e = ep.build_E_gram_schmidt(n, k)
            support_ok &= set(e.support) <= set(ep.predecessors(n)) | {n}
            support_ok &= e.coeff(n) == 1.0
            min_coeff = min(min_coeff, min(c for _, c in e.items()))
    ok = (worst_shift < 1e-12 and worst_reflect < 1e-12
          and support_ok and min_coeff >= -1e-12)
    line = report(3, "shift-reflection-triangularity", ok,
                  f"shift {worst_shift:.2e}, reflect {worst_reflect:.2e}, "
                  f"min coeff {min_coeff:.2e}")
    assert ok, line


def test_criterion_4_kernel_identity():
    t0 = time.perf_counter()
    rng = np.random.default_rng(0)
    worst = 0.0
    for k in KS:
        for _ in range(100):
            x, y = rng.uniform(-math.pi, math.pi, 2)
            n = int(rng.integers(0, 17))
            q = fr.KernelQuery(x=float(x), y=float(y), N=n, k=k)
            worst = max(worst, abs(fr.kernel_direct(q) - fr.kernel_closed(q)))
    worst_dir = 0.0
    for _ in range(50):
        x, y = rng.uniform(-math.pi, math.pi, 2)
        n = int(rng.integers(0, 17))
        q = fr.KernelQuery(x=float(x), y=float(y), N=n, k=0.0)
        u = q.x - q.y
        want = math.sin((n + 0.5) * u) / (2 * math.pi * math.sin(0.5 * u))
        worst_dir = max(worst_dir, abs(fr.kernel_closed(q) - want),
                        abs(fr.kernel_direct(q) - want))
    dt = time.perf_counter() - t0
    ok = worst < 1e-9 and worst_dir < 1e-12 and dt < 5.0
    line = report(4, "kernel-identity", ok,
                  f"absdiff {worst:.2e}, dirichlet {worst_dir:.2e}, {dt:.2f}s")
    assert ok, line


def test_criterion_5_projection():
    grid = np.linspace(-math.pi, math.pi, 256)
    worst = 0.0
    for k in KS:
        for n_trunc in range(0, 13):
            rule = qd.build_rule(k, 2 * n_trunc + 16)
            for m in range(-n_trunc, n_trunc + 1):
                tab = fr.coefficients(lambda x, _m=m, _k=k: sf.e_eval(_m, _k, x),
                                      n_trunc, k, rule)
                err = np.max(np.abs(fr.partial_sum(tab, grid)
                                    - sf.e_eval(m, k, grid)))
                worst = max(worst, err)
    ok = worst < 1e-8
    line = report(5, "projection", ok, f"sup {worst:.2e}")
    assert ok, line


def test_criterion_6_in_window_convergence():
    t0 = time.perf_counter()
    f = fr.builtin_function("expcos", 1.0)
    strict = True
    final_ok = True
    detail = []
    for p in (1.6, 2.0, 2.8):
        rep = fr.converge_experiment(f, 1.0, p, (4, 8, 16, 32))
        errs = [row[3] for row in rep.rows]
        strict &= all(b < a for a, b in zip(errs, errs[1:]))
        final_ok &= errs[-1] < 1e-6
        detail.append("p=%g: %s" % (p, "/".join("%.2e" % e for e in errs)))
    dt = time.perf_counter() - t0
    ok = strict and final_ok and dt < 60.0
    line = report(6, "in-window-convergence", ok,
                  "; ".join(detail) + f"; {dt:.1f}s")
    assert ok, line


def test_criterion_7_counterexample_dichotomy():
    ns = list(range(10, 201))
    rep2 = fr.counterexample_experiment(1.0, 2.0, ns)
    b = dict(rep2.rows)
    decay_ok = b[200] < b[10] / 10.0
    rep145 = fr.counterexample_experiment(1.0, 1.45, ns)
    bs = [v for _, v in rep145.rows]
    nondecay_ok = min(bs) > 0.5 * max(bs)
    worst_ratio = 0.0
    m_nodes = max(64, ns[-1] // 2 + 16)
    for n in ns:
        a_pos = fr.counterexample_coefficient(n, 1.0, m_nodes)
        a_neg = fr.counterexample_coefficient(-n, 1.0, m_nodes)
        worst_ratio = max(worst_ratio,
                          abs(a_neg / a_pos - (n + 1.0) / n) / ((n + 1.0) / n))
    ratio_ok = worst_ratio < 1e-8
    ok = decay_ok and nondecay_ok and ratio_ok
    line = report(7, "counterexample-dichotomy", ok,
                  f"p=2 b_10 {b[10]:.4f} b_200 {b[200]:.4f} decay {decay_ok}; "
                  f"p=1.45 min/max {min(bs) / max(bs):.4f}; "
                  f"ratio err {worst_ratio:.2e}")
    assert ok, line


def test_criterion_8_envelope_boundedness():
    grid = np.linspace(-math.pi, math.pi, 512)
    overall = 0.0
    uniform_ok = True
    for k in KS:
        vals = [sf.envelope(n, k, grid) for n in range(0, 65)]
        running = np.maximum.accumulate(vals)
        overall = max(overall, float(running[-1]))
        # after n = 8 the running max may grow at most 5%
        uniform_ok &= float(running[-1]) <= 1.05 * float(running[8])
    ok = overall <= 10.0 and uniform_ok
    line = report(8, "envelope-boundedness", ok,
                  f"max {overall:.4f}, uniform {uniform_ok}")
    assert ok, line


def test_criterion_9_cli_determinism(tmp_path):
    pairs = []
    for name, argv in [
        ("kernel-check", ["kernel-check", "--k", "1.5", "--N", "12",
                          "--grid", "32", "--seed", "42"]),
        ("converge", ["converge", "--k", "1", "--p", "1.6,2.0",
                      "--N", "4,8", "--f", "expcos"]),
        ("counterexample", ["counterexample", "--k", "1", "--p", "2",
                            "--n", "10,20"]),
    ]:
        a = tmp_path / f"{name}-a.csv"
        c = tmp_path / f"{name}-b.csv"
        assert cli.main(argv + ["--out", str(a)]) == 0
        assert cli.main(argv + ["--out", str(c)]) == 0
        pairs.append(a.read_bytes() == c.read_bytes())
    ok = all(pairs)
    line = report(9, "cli-determinism", ok, f"byte-identical {pairs}")
    assert ok, line
