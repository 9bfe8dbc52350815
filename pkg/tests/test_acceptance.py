"""Acceptance suite: one check per criterion, each printing a single PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v`` (the lines appear in the
terminal summary) or directly with ``python tests/test_acceptance.py``.
"""

import math
import sys
import time

import numpy as np

from mubquant import camsim, gme, noise, oracle, qcore, witness
from mubquant.cli import WORKED_CORR1, WORKED_CORR2

RESULTS = {}


def record(number, title, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title} ({detail})"
    RESULTS[number] = line
    print(line)
    assert ok, line


def test_criterion_1_worked_example():
    t0 = time.perf_counter()
    rep = witness.witness_b_from_counts(np.array(WORKED_CORR1), np.array(WORKED_CORR2))
    elapsed = time.perf_counter() - t0
    checks = {
        "c1": abs(rep.c1 - 0.9693) <= 5e-5,
        "c2": abs(rep.c2 - 0.9681) <= 5e-5,
        "m1": abs(rep.m1 - 0.0852) <= 5e-4,
        "m2": abs(rep.m2 - 0.02856) <= 5e-5,
        "b": abs(rep.b - 1.0338) <= 1e-3,
        "eof": abs(rep.eof_lower_bound_ebits - 1.103) <= 5e-3,
        "schmidt": rep.schmidt_lower_bound == 3,
        "runtime": elapsed < 1.0,
    }
    failed = [k for k, v in checks.items() if not v]
    record(
        1, "three-dimensional worked example", not failed,
        f"B={rep.b:.5f} EoF={rep.eof_lower_bound_ebits:.4f} K={rep.schmidt_lower_bound} "
        f"{elapsed * 1e3:.1f} ms" + (f"; failed {failed}" if failed else ""),
    )


def test_criterion_2_maximal_state():
    t0 = time.perf_counter()
    worst_b = worst_e = 0.0
    for d in range(2, 17):
        rho = qcore.projector(qcore.phi_plus(d))
        target = math.sqrt(2 * (1 - 1 / d))
        for seed in range(20):
            b = witness.witness_b_from_state(rho, qcore.random_mub_pair(d, seed=1000 * d + seed))
            worst_b = max(worst_b, abs(b - target))
            worst_e = max(worst_e, abs(witness.eof_lower_bound(b, d) - math.log2(d)))
    elapsed = time.perf_counter() - t0
    ok = worst_b < 1e-10 and worst_e <= 1e-9 and elapsed < 30
    record(2, "maximal-state exactness, d=2..16", ok,
           f"max |dB|={worst_b:.2e} max |dE|={worst_e:.2e} {elapsed:.2f} s")


def test_criterion_3_separable_states():
    rng = np.random.default_rng(2024)
    max_b = -math.inf
    max_excess = -math.inf
    for d in (2, 3, 4):
        for _ in range(10_000):
            psi = qcore.tensor(qcore.random_pure_state(d, rng), qcore.random_pure_state(d, rng))
            pair = qcore.random_mub_pair(d, rng)
            p1, p2 = witness.expected_populations(np.outer(psi, psi.conj()), pair)
            c1, c2, _, _, b = witness.witness_from_probabilities(p1, p2)
            max_b = max(max_b, b)
            max_excess = max(max_excess, c1 + c2 - (1 + 1 / d))
    ok = max_b <= 1e-9 and max_excess <= 1e-9
    record(3, "separable non-detection, 3x10^4 product states", ok,
           f"max B={max_b:.3e}, max C2-(1+1/d)={max_excess:.3e}")


def test_criterion_4_derivation_chain():
    worst_split = 0.0
    chain_fail = sound_fail = 0
    for d in (2, 3, 4, 5):
        rng = np.random.default_rng(400 + d)
        for k in range(1000):
            pair = qcore.random_mub_pair(d, rng)
            if k % 2:
                psi = qcore.random_pure_state(d * d, rng)
                rho = np.outer(psi, psi.conj())
                b = witness.witness_b_from_state(rho, pair)
                if witness.eof_lower_bound(b) > oracle.pure_state_eof(psi) + 1e-9:
                    sound_fail += 1
                chain = oracle.chain_check(psi, pair)
            else:
                rho = qcore.random_density(d * d, rng, rank=int(rng.integers(1, d * d + 1)))
                chain = oracle.chain_check(rho, pair)
            worst_split = max(worst_split, abs(oracle.sigma_split(rho, pair, tol=1.0).residual))
            chain_fail += not chain.passed
    ok = worst_split < 1e-10 and chain_fail == 0 and sound_fail == 0
    record(4, "derivation chain, 4x10^3 draws", ok,
           f"max split residual={worst_split:.2e}, chain failures={chain_fail}, "
           f"soundness failures={sound_fail}")


def test_criterion_5_noise_thresholds():
    worst = 0.0
    flagged = emitted = True
    lines = []
    for family in noise.Family:
        for d in range(2, 9):
            scan = noise.noise_scan(family, d)
            (p0, b0), (p1, b1) = scan.samples[0], scan.samples[-1]
            affine_root = min(1.0, max(0.0, p0 - b0 * (p1 - p0) / (b1 - b0)))
            worst = max(worst, abs(scan.p_crit_direct - affine_root))
            emitted &= math.isclose(scan.p_crit_paper_formula, noise.closed_form_pcrit(family, d))
            flagged &= bool(scan.notes) == (abs(scan.discrepancy) > 1e-6)
            if d in (2, 3):
                lines.append(f"{family.value} d={d}: {scan.p_crit_direct:.6f} vs {scan.p_crit_paper_formula:.6f}")
    ok = worst <= 1e-9 and flagged and emitted
    record(5, "noise thresholds by direct evaluation", ok,
           f"max |bisection-affine|={worst:.1e}; " + "; ".join(lines))


def test_criterion_6_gme():
    g2 = gme.gme_bound_3qubit(qcore.projector(qcore.ghz(3, 2))).bound
    p2 = gme.critical_visibility(gme.gme_bound_3qubit, 3, 2)
    p3 = gme.critical_visibility(gme.gme_bound_3qutrit, 3, 3)
    c32_plus = {"000", "011", "101", "110"}
    c33_plus = {"000", "111", "222", "012", "120", "201", "102", "021", "210"}
    signs_ok = True
    for d, plus in ((2, c32_plus), (3, c33_plus)):
        signs, _ = gme.sign_vector(3, d)
        for idx, s in enumerate(signs):
            label = np.base_repr(idx, d).zfill(3)
            signs_ok &= s == (1 if label in plus else -1)
    ok = abs(g2 - 1) <= 1e-9 and abs(p2 - 0.6) <= 1e-9 and abs(p3 - 32 / 59) <= 1e-9 and signs_ok
    record(6, "GME bounds and thresholds", ok,
           f"GHZ bound={g2:.12f}, p_crit(3,2)={p2:.10f}, p_crit(3,3)={p3:.10f}, signs match={signs_ok}")


def test_criterion_7_camera():
    t0 = time.perf_counter()
    cfg7 = camsim.camera_preset(region_size=7)
    est7 = camsim.ebit_estimate(cfg7)
    est3 = camsim.ebit_estimate(camsim.camera_preset(region_size=3))
    q = est7.state.white_noise_p
    e7 = est7.report.eof_lower_bound_ebits
    e3 = est3.report.eof_lower_bound_ebits
    grid = np.linspace(0.0, 10 * cfg7.dark_rate, 10)
    ladder = [camsim.ebit_estimate(cfg7.replace(dark_rate=r)).report.eof_lower_bound_ebits for r in grid]
    monotone = all(b <= a for a, b in zip(ladder, ladder[1:])) and ladder[-1] < ladder[0]
    elapsed = time.perf_counter() - t0
    ok = abs(q - 0.006) <= 0.004 and abs(e7 - 2.4) <= 0.5 and abs(e3 - 3.05) <= 0.5 and monotone and elapsed < 120
    record(7, "camera pipeline", ok,
           f"noise={q:.5f}, 7x7 EoF={e7:.3f}, 3x3 EoF={e3:.3f}, monotone={monotone}, {elapsed:.2f} s")


def test_criterion_8_determinism(tmp_path):
    from mubquant.cli import main

    cfg = tmp_path / "cfg.json"
    cfg.write_text('{"num_regions": 10, "frames": 3064, "seed": 17}')
    for run in ("a", "b"):
        assert main(["simulate", str(cfg), "-o", str(tmp_path / run)]) == 0
    names = ("position.json", "momentum.json", "state.json")
    same = all((tmp_path / "a" / n).read_bytes() == (tmp_path / "b" / n).read_bytes() for n in names)
    st = camsim.build_state(camsim.CameraConfig(num_regions=5))
    arrays_same = all(
        np.array_equal(
            camsim.simulate_counts(st, basis, 10_000, seed=s).counts,
            camsim.simulate_counts(st, basis, 10_000, seed=s).counts,
        )
        for basis in camsim.Basis
        for s in range(5)
    )
    record(8, "byte-identical seeded output", same and arrays_same,
           f"files identical={same}, sampled matrices identical={arrays_same}")


if __name__ == "__main__":
    import tempfile
    from pathlib import Path

    failures = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                if "tmp_path" in fn.__code__.co_varnames[: fn.__code__.co_argcount]:
                    with tempfile.TemporaryDirectory() as tmp:
                        fn(Path(tmp))
                else:
                    fn()
            except AssertionError:
                failures += 1
    sys.exit(1 if failures else 0)
