CRITERIA = {}


def record(num, ok, detail=""):
    line = f"criterion {num:>2}: {'PASS' if ok else 'FAIL'}  {detail}".rstrip()
    CRITERIA[num] = line
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(CRITERIA):
        terminalreporter.write_line(CRITERIA[num])
