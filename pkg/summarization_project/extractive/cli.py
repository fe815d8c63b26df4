"""``summ <command> [options]``: the summarizer commands outside Django's ``manage.py`` dispatcher.

Exit status is 0 on success, 1 on usage errors and 2 on data errors; a
failing command writes exactly one diagnostic line to stderr.
"""
import os
import sys

import django
from django.apps import apps
from django.core.management import load_command_class
from django.core.management.base import CommandError

COMMANDS = ('summarize', 'eval', 'tune', 'compare')
PROG = 'summ'


def usage():
    return (f"usage: {PROG} {{{','.join(COMMANDS)}}} [options]\n"
            f"run '{PROG} <command> --help' for the options of a command\n")


def setup():
    os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'summarization_project.settings')
    if not apps.ready:
        django.setup()


def _one_line(message):
    return " ".join(str(message).split())


def run_cli(argv=None, stdout=None, stderr=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr

    if not argv:
        stderr.write(usage())
        return 1
    if argv[0] in ('-h', '--help', 'help'):
        stdout.write(usage())
        return 0
    name = argv[0]
    if name not in COMMANDS:
        stderr.write(f"{PROG}: unknown command {name!r} (expected one of {', '.join(COMMANDS)})\n")
        return 1

    setup()
    command = load_command_class('extractive', name)
    parser = command.create_parser(PROG, name)
    try:
        options = parser.parse_args(argv[1:])
    except CommandError as exc:
        stderr.write(f"{PROG} {name}: {_one_line(exc)}\n")
        return exc.returncode
    except SystemExit as exc:
        # --help and --version
        return exc.code or 0

    cmd_options = vars(options)
    args = cmd_options.pop('args', ())
    try:
        command.execute(*args, stdout=stdout, stderr=stderr, **cmd_options)
    except CommandError as exc:
        stderr.write(f"{PROG} {name}: {_one_line(exc)}\n")
        return exc.returncode
    return 0

