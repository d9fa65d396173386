"""
wavelab <command> --config <file|preset> [--out DIR] [--seed N] [--format csv|json|svg]

Exit codes: 0 success, 2 success with measured values that differ from the
printed ones, 1 error. Errors are printed to stdout as a JSON object and
also written to error.json in the output directory.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional

from settings import settings
from wavelab import __version__
from wavelab.cli.commands import CommandFactory, RunContext
from wavelab.cli.config import load_scenario, preset_names
from wavelab.core.errors import InternalError, ScenarioError, WavelabError
from wavelab.core.utils import file_header, to_jsonable, write_json_atomic
from wavelab.types import Command, OutputFormat

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_DISCREPANCY = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wavelab", description="Riemann-wave superpositions for 1D Euler")
    parser.add_argument("command", choices=[c.value for c in Command])
    parser.add_argument(
        "--config", required=True, help=f"Scenario JSON file or preset ({', '.join(preset_names())})"
    )
    parser.add_argument("--out", default=None, help="Output directory")
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--format", dest="fmt", choices=[f.value for f in OutputFormat], default=None)
    parser.add_argument("--version", action="version", version=f"wavelab {__version__}")
    return parser


def _emit_error(error: WavelabError, out_dir: Optional[Path]) -> int:
    payload = error.to_dict()
    print(json.dumps(to_jsonable(payload), sort_keys=True))
    if out_dir is not None:
        try:
            write_json_atomic(out_dir / "error.json", payload)
        except OSError:
            logger.exception("Could not write error.json to %s", out_dir)
    return EXIT_ERROR


def run(
    command: str,
    config: str,
    out: Optional[str] = None,
    seed: Optional[int] = None,
    fmt: Optional[str] = None,
) -> int:
    """Execute one scenario and return the process exit code."""
    out_dir = Path(out) if out else None
    try:
        scenario, params = load_scenario(config)
        if scenario.command != Command(command):
            raise ScenarioError(
                f"Scenario {scenario.name!r} is a {scenario.command.value} scenario, not {command}",
                {"scenario_command": scenario.command.value, "requested": command},
            )
        out_dir = out_dir or Path(scenario.output_dir or settings.OUTPUT_DIR) / scenario.name
        seed = seed if seed is not None else scenario.seed if scenario.seed is not None else settings.SEED
        formats = {OutputFormat.JSON}
        if fmt:
            formats.add(OutputFormat(fmt))

        handler = CommandFactory.create_handler(scenario.command)
        ctx = RunContext(out_dir=out_dir, seed=seed, formats=formats)
        result = handler.run(params, ctx)

        header = file_header(seed, {"derivative": settings.DERIVATIVE_TOL, "exact": settings.EXACT_TOL})
        report = {
            "header": header,
            "scenario": scenario.name,
            "command": scenario.command.value,
            "discrepancy": result.discrepancy,
            **result.report,
        }
        path = write_json_atomic(out_dir / "report.json", report)
        for artifact in [path, *result.artifacts]:
            logger.info("Wrote %s", artifact)
    except WavelabError as e:
        logger.error("%s: %s", e.code, e.message)
        return _emit_error(e, out_dir)
    except (ValueError, OSError) as e:
        logger.error("%s", e)
        return _emit_error(WavelabError(str(e), {"type": type(e).__name__}), out_dir)
    except Exception as e:
        logger.exception("Unexpected failure")
        return _emit_error(InternalError(str(e), {"type": type(e).__name__}), out_dir)

    if result.discrepancy:
        logger.warning("Measured values differ from the printed ones; see %s", path)
        return EXIT_DISCREPANCY
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    logging.basicConfig(
        level=settings.LOG_LEVEL,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        stream=sys.stderr,
    )
    args = build_parser().parse_args(argv)
    return run(args.command, args.config, args.out, args.seed, args.fmt)


if __name__ == "__main__":
    sys.exit(main())
