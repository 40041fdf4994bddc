import os

from dotenv import load_dotenv
# Only load .env in non-test runs
if os.getenv("SKIP_LOAD_DOTENV") != "1":
    load_dotenv()

import sys

from wres import setup_structured_logging
from wres.cli import run

if __name__ == "__main__":
    setup_structured_logging()
    sys.exit(run(sys.argv[1:]))
