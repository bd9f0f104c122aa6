# %% [markdown]
# Game files and Monte Carlo checks.
#
# Games round-trip through a small JSON format with exact rational strings.
# Seeded samplers reproduce the exact limits.

# %%
import tempfile
from fractions import Fraction as F
from pathlib import Path

from graphgames import CYCLE, apriori_limit, build_g2, gn_mixed, gn_payoff, load_game, sample_apriori, save_game
from graphgames.markov import empirical

g = build_g2()
u = gn_payoff({1: [2, 1, 3], 2: [3, 2, 1]})
with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "g2.game"
    save_game(path, g, u)
    print(path.read_text()[:200])
    assert load_game(path) == (g, u)

# %%
y = gn_mixed([F(1, 2), F(1, 2)])
emp = empirical(sample_apriori(g, y, "v1", 100_000, seed=1))
exact = apriori_limit(g, y, "v1")
for a in g.outcomes:
    print("c" if a is CYCLE else a, round(emp.get(a, 0.0), 4), exact[a])
