"""The ten acceptance criteria, one test each.  Every test prints a single
PASS/FAIL line; the terminal summary repeats them in order."""

import itertools
import time

import numpy as np

from conftest import quick_verdict
from symplift import cocycles as cc
from symplift.checks import cocycle_verdict
from symplift.layers import layer_space


def _report(n: int, title: str, ok: bool, detail: str = "") -> None:
    print(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {title}" + (f"  ({detail})" if detail else ""))
    assert ok, detail


def _verified(*verdicts) -> list[str]:
    return [f"{v.id}@g{v.params['g']}: {v.status} {v.evidence.get('counterexample', '')}"
            for v in verdicts if v.status != "verified"]


def test_criterion_1_layer_structure():
    """layer structure: dim 10 basis, dim N 6, dim M 4, complement identity"""
    vs = [quick_verdict(c) for c in ("prop-2group-a", "prop-N-b", "prop-N-c", "lemma-complement")]
    a, b, c, comp = vs
    problems = _verified(*vs)
    ok = (not problems and a.evidence["dim"] == 10 and a.evidence["rank_T"] == 10
          and b.evidence["span_dim"] == 6 and c.evidence["dim_N"] == 6 and c.evidence["dim_M"] == 4
          and comp.evidence["d5"] and comp.evidence["d6"])
    elapsed = sum(v.wall_time for v in vs)
    _report(1, "layer structure", ok and elapsed < 1.0, f"{elapsed:.2f}s {problems}")


def test_criterion_2_saturation():
    """every x outside N saturates to the full layer; N_0 extension"""
    d, e = quick_verdict("prop-N-d"), quick_verdict("prop-N-e")
    outside = 2 ** 10 - 2 ** 6
    ok = (not _verified(d, e) and d.evidence["cases_d5"] == outside and d.evidence["cases_d6"] == outside
          and e.evidence["codim_N0_in_N"] == 1)
    elapsed = d.wall_time + e.wall_time
    _report(2, "saturation of vectors outside N", ok and elapsed < 5.0, f"{elapsed:.2f}s {_verified(d, e)}")


def test_criterion_3_no_cocycle_for_d6():
    """d=6: rank certificate and full 1024-element layer intersection"""
    v = quick_verdict("thm-mod4-a")
    cert = v.evidence["certificate"]
    ok = (v.status == "verified" and cert["infeasible"] and cert["rank"] == 3 and cert["augmented_rank"] == 4
          and v.evidence["orders"] and all(o == 737280 for o in v.evidence["orders"]))
    _report(3, "mod-4 classification, d = 6", ok and v.wall_time < 30, f"{v.wall_time:.1f}s {_verified(v)}")


def test_criterion_4_sixteen_subgroups_d5():
    """d=5: 16 quasi-cocycles, 16 subgroups of order 7680 meeting the layer in N, one orbit"""
    v = quick_verdict("thm-mod4-b")
    ev = v.evidence
    ok = (v.status == "verified" and ev["cocycles"] == 16 and ev["distinct_subgroups"] == 16
          and ev["order_each"] == [7680] and ev["orbit"] == 16)
    _report(4, "mod-4 classification, d = 5", ok and v.wall_time < 60, f"{v.wall_time:.1f}s {_verified(v)}")


def test_criterion_5_lift_identities():
    """lift identities mod 8 and mod 4, exhaustive at g=2,3 plus perturbed-lift trials"""
    vs = [quick_verdict("lemma-lift-identities"), quick_verdict("lemma-lift-identities", g=3),
          quick_verdict("lemma-lift-identities-mod8"), quick_verdict("lemma-contains-N-mod8")]
    ok = (not _verified(*vs) and vs[0].evidence["triples"] == 60 and vs[1].evidence["triples"] == 210
          and vs[0].evidence["quadruples"] == 120 and vs[1].evidence["quadruples"] == 840
          and all(v.params["trials"] >= 100 for v in vs))
    elapsed = sum(v.wall_time for v in vs)
    _report(5, "lift identities", ok and elapsed < 10, f"{elapsed:.1f}s {_verified(*vs)}")


def test_criterion_6_integer_identities():
    """a+c identity and the -1 lemma on 100 random instances at g=2,3 plus proof instances"""
    vs = [quick_verdict(c, g=g) for c in ("lemma-a-plus-c", "lemma-minus1") for g in (2, 3)]
    ok = (not _verified(*vs) and all(v.params["trials"] >= 100 for v in vs)
          and all(v.evidence["proof_instances"] > 0 for v in vs if v.id == "lemma-a-plus-c"))
    elapsed = sum(v.wall_time for v in vs)
    _report(6, "integer identities", ok and elapsed < 5, f"{elapsed:.1f}s {_verified(*vs)}")


def test_criterion_7_mod8_classification():
    """mod-8 classification: order 491520, N-tilde and N^(4) layers, transitive conjugation"""
    v, w = quick_verdict("thm-mod8"), quick_verdict("cor-contains-tilde-N")
    ev = v.evidence
    ok = (not _verified(v, w) and ev["labels_closed"] >= 8 and ev["order_each"] == [491520]
          and ev["distinct_subgroups"] == ev["labels_closed"] and ev["within_type_orbit"] == 16
          and ev["types_reached"] == 16 and ev["full_orbit"] == 256
          and all(o == 491520 for k, o in w.evidence.items() if k.startswith("order_")))
    elapsed = v.wall_time + w.wall_time
    _report(7, "mod-8 classification", ok and elapsed < 600, f"{elapsed:.1f}s {_verified(v, w)}")


def test_criterion_8_epsilon_uniqueness():
    """only the zero epsilon assignment satisfies the four-term relation"""
    start = time.perf_counter()
    surv = cc.epsilon_uniqueness(2)
    elapsed = time.perf_counter() - start
    ok = (len(surv) == len(list(itertools.combinations(range(1, 6), 3)))
          and all(v == [0] for v in surv.values()))
    v = quick_verdict("prop-tilde-N")
    ok = ok and v.to_json()["evidence"]["epsilon_survivors"] == [[0]]
    _report(8, "epsilon uniqueness", ok and elapsed < 1, f"{elapsed:.2f}s")


def test_criterion_9_gamma8_containment():
    """mod-16 lifts contain Gamma(8), with delta-tilde squared on the pair {4,5}"""
    v = quick_verdict("prop-mod16")
    ev = v.evidence
    runs = ev["runs"]
    ok = (v.status == "verified" and ev["labels"] >= 8 and v.params["trials"] >= 100
          and runs["verified"] == ev["labels"] * (v.params["trials"] + 1)
          and runs["falsified"] == runs["inconclusive"] == 0 and ev["expected_pairs"] == [[4, 5]])
    _report(9, "Gamma(8) containment mod 16", ok and v.wall_time < 60, f"{v.wall_time:.1f}s {_verified(v)}")


def test_criterion_10_negative_controls():
    """negative controls: mutated delta reading and a perturbed cocycle value are falsified"""
    start = time.perf_counter()
    # (a) the meeting-pairs reading of delta must break the delta = Delta mod 4 cross-check
    mutated = quick_verdict("prop-tilde-N", mutate_delta=True)
    broke_delta = mutated.status == "falsified" and any(
        f["claim"] == "delta reduces to Delta mod 4" for f in mutated.evidence.get("counterexample", []))
    # (b) flipping one bit of one star value must fail the conditions
    phi = cc.build_phi_c((0, 0, 0, 0), 2)
    vals = dict(phi.star_values)
    vals[3] = tuple(int(b) ^ (p == 0) for p, b in enumerate(vals[3]))
    bad = cc.Cocycle(4, 2, vals)
    cv = cocycle_verdict(bad, full_rule=False)
    perturbed_ok = (not cc.check_conditions(bad) and cv.status == "falsified"
                    and bool(cv.evidence["counterexample"]))
    elapsed = time.perf_counter() - start
    detail = (f"(a) mutated delta verdict: {mutated.status}, cross-check broken: {broke_delta}; "
              f"(b) perturbed cocycle verdict: {cv.status}; {elapsed:.1f}s")
    _report(10, "negative controls", broke_delta and perturbed_ok and elapsed < 5, detail)
