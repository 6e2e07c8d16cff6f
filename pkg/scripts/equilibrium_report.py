"""Closed-form equilibria at the reference parameters, each checked by the oracle."""

from announcegame import (REFERENCE, NonKycParams, TieBreakParams, enumerate_symmetric_equilibria,
                          nonkyc_two_validator_equilibrium, single_validator_equilibria,
                          tiebreak_alpha, tiebreak_dEA_dZ, two_validator_equilibria)
from announcegame.closed_form import chance_taker_threshold
from announcegame.extensions import kyc_beta_at


def show(title, results):
    print(title)
    for r in results:
        alphas = ", ".join(f"{a:.6f}" for a in r.profile.alphas)
        gammas = [v.gamma for v in r.profile.validators if v.gamma]
        g = f" gamma={gammas[0]:.6f}" if gammas else ""
        print(f"  {r.kind:<20} beta={r.beta:.6f} alpha=({alphas}){g} "
              f"loss={r.loss:.6f} oracle={'pass' if r.verify() else 'FAIL'}")


def main():
    p = REFERENCE
    c_star = chance_taker_threshold(p)
    print(f"C* = {c_star:.9f}")
    show("one validator, C=8", single_validator_equilibria(p))
    show("one validator, C=12", single_validator_equilibria(p.with_(C=12.0)))
    show("one validator, C=C*", single_validator_equilibria(p.with_(C=c_star)))
    show("two validators", two_validator_equilibria(p.with_(n=2)))
    show("three validators", enumerate_symmetric_equilibria(p.with_(n=3)))
    nk = nonkyc_two_validator_equilibrium(p.with_(n=2), NonKycParams(0.0, 100.0, 50.0))
    show("non-KYC, V_max=100, V*=50", [nk])
    print(f"  KYC beta at V=50: {kyc_beta_at(p, 50.0):.6f}")
    tb = TieBreakParams(-50.0)
    d, a, b = tiebreak_dEA_dZ(p, tb)
    print(f"interference D=-50: alpha={a:.6f} beta={b:.6f} dE_A/dZ={d:.7f}")
    print(f"interference D=0: alpha={tiebreak_alpha(p, TieBreakParams(0.0), b):.6f}")


if __name__ == "__main__":
    main()
