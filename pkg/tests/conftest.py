from __future__ import annotations


def pytest_terminal_summary(terminalreporter):
    rows = []
    for reports in terminalreporter.stats.values():
        for rep in reports:
            if getattr(rep, "when", None) != "call":
                continue
            props = dict(getattr(rep, "user_properties", ()))
            if "criterion" in props:
                rows.append((props["criterion"], props["passed"], props.get("detail", "")))
    if not rows:
        return
    terminalreporter.section("acceptance criteria")
    for k, ok, detail in sorted(rows):
        line = f"Criterion {k}: {'PASS' if ok else 'FAIL'}"
        terminalreporter.write_line(f"{line}  ({detail})" if detail else line)
