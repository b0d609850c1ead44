# console.py
"""Coloured console output for the command line."""

import logging

from colorama import Fore, Style, init

LEVEL_COLORS = {
    logging.DEBUG: Fore.CYAN,
    logging.INFO: Fore.GREEN,
    logging.WARNING: Fore.YELLOW,
    logging.ERROR: Fore.RED,
    logging.CRITICAL: Fore.MAGENTA,
}


class ColorFormatter(logging.Formatter):
    """Formatter that colours the level name."""

    def format(self, record):
        color = LEVEL_COLORS.get(record.levelno, "")
        record = logging.makeLogRecord(record.__dict__)
        record.levelname = f"{color}{record.levelname}{Style.RESET_ALL}"
        return super().format(record)


def setup_logging(verbose: bool = False):
    init(autoreset=True)
    handler = logging.StreamHandler()
    handler.setFormatter(ColorFormatter("%(levelname)s %(name)s: %(message)s"))
    root = logging.getLogger()
    root.handlers[:] = [handler]
    root.setLevel(logging.DEBUG if verbose else logging.INFO)


def verdict_text(label: str, passed: bool, detail: str = "") -> str:
    mark = f"{Fore.GREEN}PASS" if passed else f"{Fore.RED}FAIL"
    suffix = f" {Fore.WHITE}{detail}" if detail else ""
    return f"{mark}{Style.RESET_ALL} {label}{suffix}{Style.RESET_ALL}"


def print_verdict(label: str, passed: bool, detail: str = ""):
    print(verdict_text(label, passed, detail))


def print_findings(count: int):
    color = Fore.YELLOW if count else Fore.GREEN
    print(f"{color}{count} discrepant finding(s) recorded{Style.RESET_ALL}")
