import sys

print_prefix = "[uniform-bundles]"


def print_prefixed(message: str, file=None):
    print(f'{print_prefix} {message}', file=file or sys.stderr)


def quiet(message: str):
    """drop-in replacement for print_prefixed when verbose output is disabled"""
