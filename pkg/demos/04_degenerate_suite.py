"""beta_- against S^-(1) on every small totally degenerate spec.

beta_- counts blocks combinatorially; S^-(1) comes from index jumps of the
assembled path.  Agreement on every enumerated case is the check.
"""

from collections import Counter

from symindex.verify import prop1_cases, verify_prop1_suite

for bound in (2, 6, 12):
    print(f"dim <= {bound}: {len(prop1_cases(bound))} specs")

report = verify_prop1_suite(12)
print(report.counts())
sizes = Counter(len(s.blocks) for s in prop1_cases(12))
print("specs by block count:", dict(sorted(sizes.items())))
