# %% [markdown]
# A strictly mixed Markov equilibrium of the 3-cycle.
#
# Payoffs are parametrized by the gap ratios mu.  When their product is below
# 1 there is an interior point where every player is indifferent; otherwise
# every grid point has a profitable deviation.

# %%
from fractions import Fraction as F

import numpy as np

from graphgames import APRIORI, MARKOV, build_g3, is_mixed_une
from graphgames.equilibria import (
    g3_closed_form_ne,
    grid_sweep_no_une,
    interior_point,
    stationarity_residuals,
)
from graphgames.families import payoff_from_mu

g = build_g3()
mu = (1, 1, F(1, 2))
u = payoff_from_mu(mu)
p = interior_point(mu)
print("p =", tuple(str(x) for x in p))

y = g3_closed_form_ne(u)
print("UNE under markov:", is_mixed_une(g, u, y, MARKOV))
print("max |residual|:", np.abs(stationarity_residuals(g, u, y, MARKOV)).max())

# %% [markdown]
# The same point is not an equilibrium once moves are committed in advance.

# %%
print(is_mixed_une(g, u, y, APRIORI))

# %% [markdown]
# With mu = (1, 1, 1) the product reaches 1 and a coarse sweep finds a
# deviation everywhere.

# %%
rows = grid_sweep_no_une(g, payoff_from_mu((1, 1, 1)), MARKOV, F(1, 10))
print(len(rows), "points,", sum(c is None for _, c in rows), "without a certificate")
print(g3_closed_form_ne(payoff_from_mu((1, 1, 1))))
