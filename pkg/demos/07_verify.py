# %% [markdown]
# The full verification battery, as run by `chromavar verify`.

# %%
from collections import Counter

from chromavar.battery import RunConfig, verify_battery

report = verify_battery(RunConfig(d=2))
print("checks:", len(report.checks), "all pass:", report.passed)
print(Counter(c.name for c in report.checks))

# %%
print(report.to_tsv().splitlines()[0])
for line in report.to_tsv().splitlines()[1:6]:
    print(line[:120])
