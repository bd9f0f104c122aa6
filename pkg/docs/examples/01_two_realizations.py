# %% [markdown]
# Two ways to play a mixed profile on a cycle.
#
# In the two-player cycle each player either follows the cycle or stops at
# their own terminal.  Under the Markov realization a fresh move is drawn at
# every visit; under the a priori realization one move per position is drawn
# up front and then repeated.

# %%
from fractions import Fraction as F

from graphgames import CYCLE, apriori_limit, build_g2, gn_mixed, markov_limit

g = build_g2()
y = gn_mixed([F(1, 2), F(1, 2)])

for name, limit in (("markov", markov_limit), ("apriori", apriori_limit)):
    d = limit(g, y, "v1")
    print(name, {("c" if a is CYCLE else a): str(x) for a, x in d.probs.items()})

# %% [markdown]
# The Markov cycle probability is 0 for every profile short of "everyone
# follows", then jumps to 1.

# %%
for k in (1, 4, 10, 20):
    p = 1 - F(1, 2**k)
    print(k, markov_limit(g, gn_mixed([p, p]), "v1")[CYCLE])
print("all follow", markov_limit(g, gn_mixed([1, 1]), "v1")[CYCLE])
