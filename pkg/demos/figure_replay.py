"""Walk through the sixteen-site ring example.

A TASEP configuration is mapped to pairs, two steps are taken with the shared
noise, and the Burgers profile carried by the quasi-particles is printed at a
few times, including the moment a coalescing pair is half way through.
"""

from fractions import Fraction

from tasepburgers import abdf_trajectory, profile, reconstruct, trajectory
from tasepburgers.presets import figure1
from tasepburgers.tasep import tasep_trajectory

eta, theta, field = figure1()
print("seed", field.seed)

# %% TASEP and its pair image side by side
for t, (e, th) in enumerate(zip(tasep_trajectory(eta, field, 2), abdf_trajectory(theta, field, 2))):
    print(f"t={t}  eta {e.to_string()}  spins {th.spin_string()}  act {th.act_string()}")

# %% Site classes at t = 0
frames = trajectory(theta, field, 2)
for name, sites in frames[0].classification.as_dict().items():
    print(f"{name:>13}: {sites}")
print("arising at t=1:", sorted(frames[0].next_arising))

# %% Profiles: (position, value to the right) breakpoints
for t in (Fraction(0), Fraction(1, 2), Fraction(3, 4), Fraction(1), Fraction(2)):
    fr = frames[min(int(t), 1)]
    prof = profile(fr, t)
    pretty = " ".join(f"{float(p):g}:{v:+d}" for p, v in prof.breakpoints)
    print(f"u({t}) mass={prof.mass()}  {pretty}")

# %% The profile at t = 2 encodes the ABDF state exactly
print(reconstruct(frames[1], 2))
