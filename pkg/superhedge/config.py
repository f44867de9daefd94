"""
Centralized configuration for the pricing engine.
All numerical tolerances and exit codes live here.
"""
import os
from dotenv import load_dotenv

load_dotenv()


class Config:
    """Application configuration class."""

    # Application
    APP_NAME = "superhedge"
    APP_VERSION = "1.0.0"
    SCHEMA_VERSION = 1

    # Linear programming kernel
    LP_TOLERANCE = float(os.getenv("LP_TOLERANCE", "1e-9"))
    LP_MAX_ITERATIONS = int(os.getenv("LP_MAX_ITERATIONS", "10000"))

    # Priors and supports
    POLAR_THRESHOLD = float(os.getenv("POLAR_THRESHOLD", "1e-12"))
    DEDUP_TOLERANCE = float(os.getenv("DEDUP_TOLERANCE", "1e-12"))
    WEIGHT_SUM_TOLERANCE = float(os.getenv("WEIGHT_SUM_TOLERANCE", "1e-9"))
    WEIGHT_CEILING = float(os.getenv("WEIGHT_CEILING", "1.000000001"))

    # Certificates
    CERTIFICATE_TOLERANCE = float(os.getenv("CERTIFICATE_TOLERANCE", "1e-8"))

    # Theta-grid oracle used by `--oracle`
    ORACLE_GRID_RADIUS = float(os.getenv("ORACLE_GRID_RADIUS", "5.0"))
    ORACLE_GRID_STEP = float(os.getenv("ORACLE_GRID_STEP", "1e-4"))
    ORACLE_MAX_POINTS = int(os.getenv("ORACLE_MAX_POINTS", "200000"))
    ORACLE_ZOOM_ROUNDS = int(os.getenv("ORACLE_ZOOM_ROUNDS", "12"))
    ORACLE_BREACH_TOLERANCE = float(os.getenv("ORACLE_BREACH_TOLERANCE", "1e-6"))

    # Global instantaneous profit brute force
    BRUTE_FORCE_MAX_DEPTH = int(os.getenv("BRUTE_FORCE_MAX_DEPTH", "4"))
    BRUTE_FORCE_MAX_BRANCHING = int(os.getenv("BRUTE_FORCE_MAX_BRANCHING", "4"))
    BRUTE_FORCE_MAX_GRID = int(os.getenv("BRUTE_FORCE_MAX_GRID", "100000"))
    BRUTE_FORCE_RADIUS = float(os.getenv("BRUTE_FORCE_RADIUS", "1.0"))
    BRUTE_FORCE_STEP = float(os.getenv("BRUTE_FORCE_STEP", "1.0"))

    # Reports
    OUTPUT_DIGITS = int(os.getenv("OUTPUT_DIGITS", "17"))

    # Logging
    LOG_LEVEL = os.getenv("LOG_LEVEL", "WARNING")
    LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

    # Exit codes
    EXIT_OK = 0
    EXIT_PARSE_ERROR = 2
    EXIT_INSTANTANEOUS_PROFIT = 3
    EXIT_AIP_ONLY = 4
    EXIT_INTERNAL_ERROR = 5

    # Report messages
    BANNER_IP = "INSTANTANEOUS PROFIT"
    BANNER_GLOBAL_IP = "GLOBAL INSTANTANEOUS PROFIT"
    ERROR_GENERIC = "An internal error occurred while processing the model"


# Global config instance
config = Config()
