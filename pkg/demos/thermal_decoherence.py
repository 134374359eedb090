"""Effect of oscillator damping and thermal occupation on the pulsed dynamics.

Two runs with the same drive: one from the oscillator ground state with weak
oscillator damping, one from a thermal oscillator state.  Damping pulls the
cat branches toward a saturation radius instead of letting them separate
forever, and thermal occupation broadens each branch.  Both effects show up
in the participation ratio K_r of the reduced oscillator state, which is
compared against the Gaussian phase-space oracles.
"""

import math

import numpy as np

from qubosc import Scenario, derive_params, oracles, run_scenario


def main():
    tau0 = math.pi
    damped = derive_params(gamma_r=0.1 / tau0, temperature_ratio=0.74239)
    thermal = derive_params(temperature_ratio=0.74239)

    print(f"thermal occupation at the working point: nbar_r = {thermal.nbar_r:.6f}")
    sat = abs(oracles.alpha_tilde_strobe(10**6, damped))
    print(f"damped branch radius saturates at |alpha| = {sat:.4f}\n")

    runs = {
        "ground + damping": Scenario(
            name="damped", initial="ground", n_max=64, periods=12.0,
            params=damped, measures=("negativity", "K_r"),
        ),
        "thermal, no damping": Scenario(
            name="thermal", initial="thermal", n_max=64, periods=10.0,
            params=thermal, measures=("negativity", "K_r", "K_sigma"),
        ),
    }

    for label, scenario in runs.items():
        traj = run_scenario(scenario)
        p = scenario.params
        print(label)
        print(f"  {'t/tau0':>7} {'K_r':>9} {'oracle':>9} {'negativity':>11}")
        for k in (1, 3, 6, int(scenario.periods)):
            i = int(np.argmin(np.abs(traj.times - k * p.tau0)))
            t = traj.times[i]
            n = oracles.segment_of(t, p)
            if scenario.initial == "thermal":
                k_ref = oracles.K_r_thermal(t, n, p)
            else:
                k_ref = oracles.K_r_decoh(t, n, p, "ground")
            print(f"  {t / p.tau0:7.1f} {traj['K_r'][i]:9.4f} {k_ref:9.4f} "
                  f"{traj['negativity'][i]:11.6f}")
        print()


if __name__ == "__main__":
    main()
