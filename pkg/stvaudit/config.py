"""
Central configuration - all environment variables in one place.
"""

import os

from dotenv import load_dotenv

load_dotenv()

# Paths
LOGS_DIR = os.environ.get('STVAUDIT_LOGS_DIR', 'logs')
LOG_LEVEL = os.environ.get('STVAUDIT_LOG_LEVEL', 'INFO')

# Run log database
DB_PATH = os.environ.get('STVAUDIT_DB_PATH', os.path.join('data', 'stvaudit.db'))

# Corpus worker pool
WORKERS = int(os.environ.get('STVAUDIT_WORKERS', '4'))

# Search budget (0 seconds = no wall-time cap)
BUDGET_PROBES = int(os.environ.get('STVAUDIT_BUDGET_PROBES', '1000000'))
BUDGET_SECONDS = float(os.environ.get('STVAUDIT_BUDGET_SECONDS', '0'))

# Tabulation
TIE_POLICY = os.environ.get('STVAUDIT_TIE_POLICY', 'fail')

# Exhaustive oracle caps
ORACLE_MAX_CANDIDATES = int(os.environ.get('STVAUDIT_ORACLE_MAX_CANDIDATES', '4'))
ORACLE_MAX_TYPES = int(os.environ.get('STVAUDIT_ORACLE_MAX_TYPES', '6'))
ORACLE_MAX_VOTERS = int(os.environ.get('STVAUDIT_ORACLE_MAX_VOTERS', '40'))

# Closeness series range (integer percents, inclusive)
CLOSENESS_P_MIN = int(os.environ.get('STVAUDIT_CLOSENESS_P_MIN', '50'))
CLOSENESS_P_MAX = int(os.environ.get('STVAUDIT_CLOSENESS_P_MAX', '95'))
