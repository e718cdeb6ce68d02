import argparse

from gridvsla.commands.sweep import setup_sweep
from gridvsla.commands.validate import setup_validate
from gridvsla.commands.vsla import setup_vsla


def setup_commands(subparsers: argparse._SubParsersAction) -> None:
    setup_validate(subparsers)
    setup_sweep(subparsers)
    setup_vsla(subparsers)
