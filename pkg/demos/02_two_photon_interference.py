"""Two single photons meeting on a beamsplitter.

With one photon in each input port the output count in a given port is 0,
1 or 2.  At a balanced splitter the one-photon outcome disappears: both
photons leave together.  Away from balance the pattern is
[2 eta (1-eta), (1 - 2 eta)^2, 2 eta (1-eta)].
"""

import numpy as np

from beamsplit import beamsplit_add, point_mass

photon = point_mass(1)

print(" eta     P(0)      P(1)      P(2)     |error|")
for eta in np.linspace(0.0, 1.0, 11):
    Z = beamsplit_add(photon, photon, eta)
    h = 2 * eta * (1 - eta)
    expected = np.array([h, (1 - 2 * eta) ** 2, h])
    err = np.max(np.abs(Z.probs - expected))
    print(f"{eta:4.1f}  {Z.probs[0]:8.5f}  {Z.probs[1]:8.5f}  {Z.probs[2]:8.5f}   {err:.1e}")
