"""One test per acceptance criterion; each prints a single PASS/FAIL line."""

import itertools
import random
import time

from steinberg.apartments import (
    apartment_span_Fq,
    beta_boundary_complex,
    claim_identification,
    rank_one_check,
    relative_decomposition,
    sample_fixing_pair,
    verify_factorization,
)
from steinberg.buildings import build_building, solomon_tits_rank, span_poset_map, verify_restriction_lemmas
from steinberg.cli import run_command
from steinberg.lattice_complexes import ComplexSpec, build_lattice_complex
from steinberg.reduction import manin_reduce
from steinberg.symplectic import SpElement, SymplecticSpace, enumerate_sl2_Z, sample_sp_Z
from steinberg.topology import (
    PosetMap,
    SimplicialComplex,
    cm_certificate,
    face_poset,
    quillen_vdkl_check,
    reduced_homology,
)


def verdict(label, ok, detail=""):
    print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {label} {detail}".rstrip())
    assert ok


def boundary_of_simplex(n):
    return SimplicialComplex(itertools.combinations(range(n + 1), n))


def test_criterion_01_solomon_tits():
    t0 = time.perf_counter()
    seen = {}
    for n, q in [(1, 2), (1, 3), (1, 5), (2, 2), (2, 3)]:
        h = reduced_homology(build_building("full", n, q).order_complex())
        ok = h.is_free() and h.concentrated_in(n - 1) and h.b(n - 1) == q ** (n * n) == solomon_tits_rank(n, q)
        seen[(n, q)] = (h.b(n - 1), ok)
    dt = time.perf_counter() - t0
    verdict("1", all(ok for _, ok in seen.values()) and dt < 120,
            " ".join(f"{k}:{v[0]}" for k, v in seen.items()) + f" ({dt:.1f}s)")


def test_criterion_02_restricted_building():
    t0 = time.perf_counter()
    ok = True
    for n, q in [(2, 2), (2, 3)]:
        B = build_building("restricted", n, q)
        h = reduced_homology(B.order_complex())
        zero = all(b == 0 for b in h.betti.values()) and h.is_free()
        cm = cm_certificate(B.poset, n - 1).passed
        lem = verify_restriction_lemmas(n, q)
        ok &= zero and cm and lem.closure and lem.isomorphism and lem.cone and lem.passed
    dt = time.perf_counter() - t0
    verdict("2", ok and dt < 120, f"({dt:.1f}s)")


def test_criterion_03_span_F2():
    t0 = time.perf_counter()
    r = apartment_span_Fq(2, 2, equivariance_pairs=50, seed=0)
    dt = time.perf_counter() - t0
    ok = (r.group_order == 720 and r.st_rank == 16 and r.span_rank == 16 and r.saturated
          and r.equivariance_checked == 50 and r.equivariance_ok and dt < 300)
    verdict("3", ok, f"rank {r.span_rank}/{r.st_rank}, equivariance {r.equivariance_checked} ({dt:.1f}s)")


def test_criterion_04_rank_one_structure():
    t0 = time.perf_counter()
    r = rank_one_check(10)
    dt = time.perf_counter() - t0
    ok = (r.skeleton_match and r.all_edges_sigma and r.relative_free
          and r.relative_rank == r.sigma_edges and r.generators_hit and dt < 60)
    verdict("4", ok, f"H_1 rank {r.relative_rank}, σ edges {r.sigma_edges} ({dt:.1f}s)")


def test_criterion_05_factorization():
    t0 = time.perf_counter()
    signs = []
    n1 = enumerate_sl2_Z(3)
    for M in n1:
        r = verify_factorization(M, 3)
        signs.append(r.sign if r.passed else 0)
    n2 = sample_sp_Z(2, 3, 20, seed=0)
    for M in n2:
        r = verify_factorization(M, 4)
        signs.append(r.sign if r.passed else 0)
    dt = time.perf_counter() - t0
    ok = len(n2) >= 20 and len(set(signs)) == 1 and signs[0] in (1, -1) and dt < 300
    verdict("5", ok, f"{len(n1)} + {len(n2)} matrices, sign {sorted(set(signs))} ({dt:.1f}s)")


def test_criterion_06_decomposition():
    t0 = time.perf_counter()
    K = build_lattice_complex(ComplexSpec("IA", 0, 2, 2))
    r = relative_decomposition(K, check_link_perp=True, check_union=True)
    dt = time.perf_counter() - t0
    ok = (r.relative_rank == r.summand_rank and r.relative_torsion == r.summand_torsion
          and all(s.suspension_iso and s.connecting_iso and s.link_perp for s in r.summands)
          and r.sigma_edges == len(r.summands) and r.passed and dt < 600)
    verdict("6", ok, f"rank {r.relative_rank} = Σ {r.summand_rank} over {r.sigma_edges} σ edges ({dt:.1f}s)")


def test_criterion_07_two_routes():
    t0 = time.perf_counter()
    e2, f2 = (0, 0, 1, 0), (0, 0, 0, 1)
    mats = [SpElement.identity(SymplecticSpace(2))] + sample_fixing_pair(10, 2, seed=0)
    results = [claim_identification(M, e2, f2, max(1, M.max_entry())).passed for M in mats]
    dt = time.perf_counter() - t0
    verdict("7", len(mats) >= 11 and all(results) and dt < 120, f"{sum(results)}/{len(mats)} ({dt:.1f}s)")


def test_criterion_08_checkers():
    t0 = time.perf_counter()
    ok = all(cm_certificate(face_poset(beta_boundary_complex(n)), n - 1).passed for n in range(1, 5))
    ok &= all(cm_certificate(face_poset(boundary_of_simplex(n)), n - 1).passed for n in range(1, 6))
    T = build_building("full", 2, 2).poset
    ok &= cm_certificate(T, 1).passed
    bad = face_poset(SimplicialComplex([(0, 1), (2,)]))
    cert = cm_certificate(bad, 1)
    ok &= not cert.passed and cert.witness is not None and "at" in cert.witness
    P = face_poset(boundary_of_simplex(3))
    ok &= quillen_vdkl_check(PosetMap(P, P, lambda x: x, strict=True), "quillen", d=2).passed
    ok &= quillen_vdkl_check(span_poset_map(2, 2), "quillen", d=1).passed
    viol = quillen_vdkl_check(PosetMap(bad, bad, lambda x: x, strict=True), "quillen", d=1)
    ok &= not viol.passed and bool(viol.failures)
    dt = time.perf_counter() - t0
    verdict("8", ok and dt < 60, f"witness {cert.witness['part']} at {cert.witness['at']} ({dt:.1f}s)")


def test_criterion_09_manin_reduce():
    rnd = random.Random(2024)

    def point():
        if rnd.random() < 0.05:
            return (1, 0)
        return (rnd.randint(-10 ** 6, 10 ** 6), rnd.randint(1, 10 ** 6))

    pairs = [(point(), point()) for _ in range(100)]
    t0 = time.perf_counter()
    reds = [manin_reduce(a, b) for a, b in pairs]
    ok = all(r.unimodular() and r.telescopes() for r in reds)
    dt = time.perf_counter() - t0
    ok &= len(manin_reduce("inf", "3/7").pairs) == 3
    verdict("9", ok and dt < 1.0, f"100 pairs in {dt * 1000:.1f} ms")


def test_criterion_10_truncation_smoke():
    t0 = time.perf_counter()
    V = "1,0,0,0,0,0;0,0,1,0,0,0;0,0,0,0,1,0"
    out = {}
    for kind in ("B", "BA"):
        report, code = run_command(["complex", "--kind", kind, "--n", "3", "--bound", "3", "--V", V,
                                    "--homology", "--no-cache", "--quiet"])
        out[kind] = report
    dt = time.perf_counter() - t0
    ok = all(r["certification_level"] == "experimental-truncation" and r["results"] is not None
             and "homology" in r["results"] for r in out.values())
    betti = {k: r["results"]["homology"]["betti"] for k, r in out.items()}
    verdict("10", ok and dt < 120, f"{betti} ({dt:.1f}s)")
