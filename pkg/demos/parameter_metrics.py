"""Print the security metrics for every builtin parameter set."""

from ldgmsig import builtin_sets, security_report

for ps in builtin_sets():
    report = security_report(ps)
    print(report.as_text())
    print()

# the same numbers as one machine-readable line per set
for ps in builtin_sets():
    print(security_report(ps).as_record())
