# %% [markdown]
# A one-player game where the best move depends on where play starts.
#
# Chance at v0 goes to v1 or a2 with probability 1/2 each; the player at v1
# returns to v0 or stops at a1.  Payoffs: a2 = 4, a1 = 2, cycle = 1.

# %%
from fractions import Fraction as F

from graphgames import Payoff, apriori_limit, best_pure_response_at, build_g1, effective_payoff
from graphgames import uniformly_best_pure_response
from graphgames.core import with_strategy

g = build_g1()
u = Payoff.build({1: {"a1": 2, "a2": 4, "c": 1}})
y = {"v1": {"v0": F(1, 2), "a1": F(1, 2)}}

for start in ("v1", "v0"):
    vals = {t: effective_payoff(u, apriori_limit(g, with_strategy(g, y, {"v1": t}), start), 1) for t in ("v0", "a1")}
    print(start, {t: str(x) for t, x in vals.items()}, "best:", best_pure_response_at(g, u, y, 1, start))

# %% [markdown]
# Under the Markov realization returning to v0 is best from both starts.

# %%
print(uniformly_best_pure_response(g, u, y, 1))
