"""Smoke test for the python module: exact values only, no goldens."""

import json
import math
import sys

import ufn


def check(cond, message):
    if not cond:
        print("FAIL:", message)
        sys.exit(1)


def main():
    est = ufn.gowers_norm_exact("sym:4", 2, 6, 4)
    check(est["exact"] is True, "exact flag missing on the exhaustive norm")
    check(est["value"] > 0.5, "quartic norm at N=6 should exceed 0.5")
    rational = int(est["raw_numer"]) / 2.0 ** est["raw_denom_log2"]
    check(
        math.isclose(est["raw_power"], rational, rel_tol=1e-12),
        "raw power disagrees with its exact rational",
    )

    mc1 = ufn.gowers_norm_mc("sym:4", 2, 16, 4, samples=20000, seed=5)
    mc2 = ufn.gowers_norm_mc("sym:4", 2, 16, 4, samples=20000, seed=5, threads=3)
    check(mc1["raw_power"] == mc2["raw_power"], "sampled norm not thread-invariant")

    corr = ufn.max_correlation("sym:4", 2, 4, 3)
    check(corr["max_abs"] == 14.0 / 16.0, "cubic correlation at N=4 should be 0.875")
    check(corr["numer"] == 14, "exact correlation numerator should be 14")
    check("witness" in corr, "exhaustive search should report a witness")
    witness = json.loads(corr["witness"])
    check(witness["p"] == 2, "witness polynomial should live over F_2")

    report = ufn.run_experiment("digits", {"cube_N": "8"})
    check(report["pass"] is True, "digits experiment should pass")
    payload = json.loads(report["json"])
    check(payload["experiment"] == "digits", "report carries the experiment id")
    check("timestamp" not in payload, "timestamp suppressed by default")
    check(report["csv"].startswith("N,metric,value,err,bound,pass"), "csv header")

    check(ufn.lucas_binomial(5, 4, 2) == 1, "C(5,4) is odd")
    check(ufn.lucas_binomial(10, 2, 3) == 0, "C(10,2) = 45 vanishes mod 3")
    check(ufn.symmetric_cube_value(4, 2, 6) == 1, "C(6,4) = 15 is odd")
    check(ufn.symmetric_cube_value(4, 2, 3) == 0, "C(3,4) = 0")
    check(ufn.eval_symmetric(2, 3, [1, 2]) == 2, "S_2(1,2) = 2 over F_3")
    check(ufn.eval_symmetric(2, 2, [1, 1, 1]) == 1, "S_2 on weight 3 is C(3,2) mod 2")

    print("python smoke test passed")


if __name__ == "__main__":
    main()
