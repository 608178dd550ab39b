"""Shared test helpers: acceptance-line reporting and an independent
high-precision Mittag-Leffler reference.
"""

import mpmath as mp

ACCEPTANCE_LINES: list[str] = []


def record(line: str) -> None:
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def ml_reference(alpha: float, beta: float, z: float, dps: int = 60) -> float:
    """Brute-force series reference, independent of the package code.

    Plain term-by-term summation with mpmath division by gamma; no stopping
    policy, no compensation, no regime switching.
    """
    with mp.workdps(dps):
        s = mp.mpf(0)
        zm = mp.mpf(z)
        zk = mp.mpf(1)
        for k in range(5000):
            term = zk / mp.gamma(alpha * k + beta)
            s += term
            zk *= zm
            if k > 10 and abs(term) < mp.mpf(10) ** (-(dps - 5)) * max(1, abs(s)):
                break
        return float(s)
