import logging
import os
import sys

from dotenv import load_dotenv

load_dotenv()
logging.basicConfig(
    level=os.getenv("KEYGRAPH_LOG_LEVEL", "INFO").upper(),
    format="%(asctime)s %(levelname)s %(name)s: %(message)s",
)

from app.cli import run  # noqa: E402

if __name__ == "__main__":
    sys.exit(run())
