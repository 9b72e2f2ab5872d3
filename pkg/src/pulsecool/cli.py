"""Command-line interface: `cool <subcommand> --config <file> ...`.

Exit codes: 0 success, 2 config error, 3 acceptance-check failure,
4 numerical failure.  Logging goes to stderr; set COOL_LOG to control the
level (DEBUG/INFO/WARNING/ERROR).
"""
from __future__ import annotations

import json
import logging
import os
import sys

import click

from . import experiments
from .errors import ConfigError, PulsecoolError

EXIT_CONFIG = 2
EXIT_CHECK = 3
EXIT_NUMERICAL = 4


def _setup_logging():
    level = os.environ.get("COOL_LOG", "INFO").upper()
    logging.basicConfig(
        stream=sys.stderr,
        level=getattr(logging, level, logging.INFO),
        format="%(levelname)s %(name)s: %(message)s",
    )


def _run(experiment, config_path, jobs, seed, out):
    _setup_logging()
    try:
        if config_path is not None:
            config = experiments.load_config(config_path, experiment)
        else:
            config = {}
        if jobs is not None:
            config["jobs"] = jobs
        if seed is not None:
            config["seed"] = seed
        if out is not None:
            config["output_path"] = out
        experiments.validate_config(config, experiment)
    except ConfigError as exc:
        click.echo(f"config error: {exc}", err=True)
        sys.exit(EXIT_CONFIG)

    try:
        report = experiments.RUNNERS[experiment](config)
    except ConfigError as exc:
        click.echo(f"config error: {exc}", err=True)
        sys.exit(EXIT_CONFIG)
    except PulsecoolError as exc:
        click.echo(f"numerical failure: {exc}", err=True)
        sys.exit(EXIT_NUMERICAL)

    if experiment == "swap" and not report.get("all_ok", True):
        for check in report["checks"]:
            if not check["ok"]:
                click.echo(
                    "swap purity check failed: expected "
                    f"{check['expected_purity']:.6f}, achieved "
                    f"{check['achieved_purity']:.6f}",
                    err=True,
                )
        sys.exit(EXIT_CHECK)
    click.echo(json.dumps(_summarize(report), indent=2))


def _summarize(report):
    # keep stdout small: drop bulky per-row payloads
    return {k: v for k, v in report.items() if k != "rows"}


def _common_options(fn):
    fn = click.option("--config", "config_path", type=click.Path(exists=True),
                      default=None, help="JSON config file")(fn)
    fn = click.option("--jobs", type=int, default=None, help="worker count")(fn)
    fn = click.option("--seed", type=int, default=None, help="RNG seed")(fn)
    fn = click.option("--out", type=str, default=None, help="output directory")(fn)
    return fn


@click.group()
def main():
    """Design coupling pulses that swap resonator states and cool below the
    sideband limit."""


def _make_command(experiment, help_text):
    @main.command(name=experiment, help=help_text)
    @_common_options
    def _cmd(config_path, jobs, seed, out):
        _run(experiment, config_path, jobs, seed, out)
    return _cmd


_make_command("swap", "Verify the reference state-swap pulses (optionally re-optimize).")
_make_command("sideband", "Constant-coupling steady-state baseline over a kappa grid.")
_make_command("figure1", "Optimized cooling vs sideband baseline across (gamma*n_T, kappa).")
_make_command("figure2", "Optimize one cooling pulse and export shape + trajectory.")
_make_command("naux", "Sensitivity of the cooling floor to auxiliary thermal photons.")
_make_command("twoaux", "Single- vs two-auxiliary cooling comparison.")


if __name__ == "__main__":
    main()
