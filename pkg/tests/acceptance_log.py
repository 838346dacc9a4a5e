"""Collects one verdict line per acceptance criterion for the terminal summary."""
LINES = []


def record(number, title, checks, elapsed, budget):
    """``checks`` is a list of ``(label, ok, detail)``; the runtime budget is one more check."""
    checks = list(checks) + [(f"runtime {elapsed:.1f}s < {budget:g}s", elapsed < budget, "")]
    failed = [c for c in checks if not c[1]]
    verdict = "PASS" if not failed else "FAIL"
    line = f"{verdict} criterion {number}: {title} ({len(checks) - len(failed)}/{len(checks)} checks)"
    for label, _, detail in failed:
        line += f"\n    failed: {label}" + (f" [{detail}]" if detail else "")
    LINES.append(line)
    print(line)
    return not failed, line
