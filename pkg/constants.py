import os
from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()

# Exact-search limits on |V|; only the CLI --bound flag overrides them.
EXACT_SEARCH_BOUND = 20
PARTITION_SEARCH_BOUND = 16
PARTITION_WORKERS = 1

LOG_LEVEL = os.getenv("LOG_LEVEL", "WARNING")
LOG_FILE = os.getenv("LOG_FILE", None)
