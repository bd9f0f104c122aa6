# %% [markdown]
# Longer cycles without pure uniform equilibria.
#
# For n players on an n-cycle, payoffs satisfying three ordering conditions
# leave every pure profile improvable.  verify_prop8 returns one witness per
# profile and notes whether the move from the case analysis worked.

# %%
from collections import Counter

from graphgames import build_gn, pure_equilibria
from graphgames.families import check_un_conditions, sample_un, verify_prop8

for n in (3, 4, 5, 6):
    u = sample_un(n, seed=n)
    witnesses = verify_prop8(n, u)
    print(n, bool(check_un_conditions(n, u)), len(witnesses), Counter(w.case for w in witnesses), all(w.by_proof for w in witnesses))
    assert pure_equilibria(build_gn(n), u) == []

# %%
w = verify_prop8(4, sample_un(4, seed=0))[0]
print(w.profile, w.certificate)
