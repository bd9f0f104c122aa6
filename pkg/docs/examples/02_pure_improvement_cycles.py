# %% [markdown]
# Games with no pure uniform equilibrium.
#
# With the right payoff orderings every pure profile of the 2- and 3-cycle
# can be improved by somebody from some start, and the improvements chain
# into a cycle.

# %%
from graphgames import build_g2, build_g3, gn_payoff, improvement_graph, pure_equilibria
from graphgames.equilibria import improvement_cycles
from graphgames.families import gn_word, in_u2, in_u3

u2 = gn_payoff({1: [2, 1, 3], 2: [3, 2, 1]})
u3 = gn_payoff({1: [2, 3, 1, 0], 2: [1, 2, 3, 0], 3: [3, 1, 2, 0]})
print(in_u2(u2), in_u3(u3))

for g, u in ((build_g2(), u2), (build_g3(), u3)):
    print("equilibria:", pure_equilibria(g, u))
    G = improvement_graph(g, u)
    for cycle in improvement_cycles(G):
        print(len(cycle), " -> ".join(gn_word(dict(k)) for k in cycle))

# %% [markdown]
# Each arc carries a certificate: which player moves, from which start, and
# the payoff before and after.

# %%
G = improvement_graph(build_g2(), u2)
for a, b, data in G.edges(data=True):
    c = data["certificate"]
    print(gn_word(dict(a)), "->", gn_word(dict(b)), f"player {c.player} from {c.start}: {c.old} -> {c.new}")

# %% [markdown]
# Change the orderings and an equilibrium can appear.

# %%
solvable = gn_payoff({1: [3, 2, 1, 0], 2: [1, 3, 2, 0], 3: [2, 1, 3, 0]})
print([gn_word(s) for s in pure_equilibria(build_g3(), solvable)])
