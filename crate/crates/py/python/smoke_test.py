"""Quick import-and-call check for the certkit_py extension."""

import certkit_py as ck


def main():
    cert = ck.min_moves(4042)
    assert cert["cost"] == 128 and cert["status"] == "certified_optimal", cert
    assert ck.oracle_min_moves(7, ck.pins_lower_bound(7) + 2) == ck.min_moves(7)["cost"]

    assert ck.check_table([1] * 100) == []
    bad = [1] * 100
    bad[4] = 3
    assert ck.check_table(bad), "mutation at f(5) not caught"
    assert ck.replay_forced_trace(10_000)

    elements = ck.construct_gcd_set([2, 5], [3, 7])
    assert elements == [10, 14, 15, 21], elements
    assert ck.is_gcd_perfect(elements)
    assert ck.gcd_structure(elements)["k"] == 2
    assert ck.search_gcd_sets(3, 100) == []

    reports = ck.certify_batch(1, 10)
    assert all(r["passed"] for r in reports)
    perturbed = ck.certify_batch(1, 10, perturb=1.05)
    assert all(r["line_defect"] > 1e-4 * r["scale"] for r in perturbed)

    packing = ck.PackingInstance.tessellate("12")
    report = packing.validate()
    assert report["valid"] and report["count"] == len(packing), report
    again = ck.PackingInstance.parse(packing.to_text())
    assert again.validate(brute_force=True) == report

    start = ck.CycleVector.random(6, 3)
    solution = start.solve()
    canonical = ck.CycleVector.canonical(6)
    assert max(abs(a - b) for a, b in zip(solution.entries(), canonical.entries())) < 1e-6
    assert solution.identity_checks()["passed"]
    assert solution.minmax_certificate()["spread"] < 1e-8

    print("certkit_py smoke test passed")


if __name__ == "__main__":
    main()
