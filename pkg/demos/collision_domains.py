"""Collision-domain sizes: how many neighbours can break your link?

A link's collision domain is itself plus every transmitter that would,
alone, push its SINR below the decode threshold. Size 1 means the link
is isolated and can ignore the MAC layer entirely. Narrow beams keep
domains tiny even in dense networks; omnidirectional ones merge into a
single shared medium almost immediately.
"""

import math

from mmwmac import DeploymentConfig, collision_domain_histogram
from mmwmac.seeding import derive_seed

BEAMWIDTHS_DEG = (5.0, 30.0, 360.0)
DENSITIES = {0.11: 400, 1.0: 150, 10.0: 30}  # reps shrink as links/rep grow


def main():
    for lam, reps in DENSITIES.items():
        print(f"link density {lam} /m^2:")
        for theta in BEAMWIDTHS_DEG:
            cfg = DeploymentConfig(
                link_density=lam,
                obstacle_density=0.11,
                seed=derive_seed(11, "domains", theta, lam),
            )
            h = collision_domain_histogram(cfg, math.radians(theta), reps)
            bar = "#" * round(40 * h.probability(1))
            print(f"  {theta:>4.0f}deg  P(isolated)={h.probability(1):5.3f} "
                  f"mean size={h.mean():6.2f}  {bar}")
        print()
    print("P(isolated) is the fraction of links that need no coordination.")


if __name__ == "__main__":
    main()
