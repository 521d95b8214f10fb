"""
Main application entry point.
"""
import json
import logging
import os
import sys
from typing import List, Optional

# Add the parent directory to Python path for local development
if os.path.basename(os.getcwd()) == 'src':
    sys.path.append(os.path.dirname(os.getcwd()))
else:
    sys.path.append(os.getcwd())
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from config import load_config, parse_args
from errors import DispredError, NumericError
from pipeline import PipelineRunner

logger = logging.getLogger(__name__)


def report_error(error: DispredError) -> None:
    """One machine-parsable line on stderr."""
    print(f"dispred-error kind={error.kind} exit={error.exit_code} message={json.dumps(str(error))}",
          file=sys.stderr)


def run(argv: Optional[List[str]] = None) -> int:
    """Run one subcommand and return its exit code."""
    try:
        args = parse_args(argv)
        config = load_config(args)

        # Configure logging
        logging.basicConfig(
            level=getattr(logging, config.log_level.upper()),
            format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
        )

        PipelineRunner(config, args).run()
        return 0
    except DispredError as e:
        report_error(e)
        return e.exit_code
    except FloatingPointError as e:
        error = NumericError(str(e))
        report_error(error)
        return error.exit_code
    except Exception as e:
        logger.error(f"Unexpected error: {e}", exc_info=True)
        report_error(NumericError(f"unexpected {type(e).__name__}: {e}"))
        return 3


if __name__ == "__main__":
    sys.exit(run())
