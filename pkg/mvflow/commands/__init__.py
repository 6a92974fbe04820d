"""
Command implementations behind the mvflow subcommands.

Every command returns a process exit code; diagnostics go to the error
stream and data to files.
"""

from mvflow.commands.plot import cmd_plot
from mvflow.commands.run import cmd_run, execute_run
from mvflow.commands.sweep import cmd_sweep
from mvflow.commands.verify import cmd_verify

__all__ = ['cmd_plot', 'cmd_run', 'cmd_sweep', 'cmd_verify', 'execute_run']
