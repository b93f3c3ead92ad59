"""Configuration management for the network alignment toolkit"""

import logging
import os
from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()


class Config:
    """Toolkit configuration (environment defaults, CLI flags override them)"""

    # Multi-network PageRank factors
    ALPHA: float = float(os.getenv("MNA_ALPHA", "0.8"))
    ITERATIONS: int = int(os.getenv("MNA_ITERATIONS", "8"))

    # Low-rank bipartite matching window (b)
    MATCH_WINDOW: int = int(os.getenv("MNA_MATCH_WINDOW", "10"))

    # Size caps
    DENSE_TENSOR_CAP: int = int(os.getenv("MNA_DENSE_TENSOR_CAP", "1000000"))
    DENSE_MATCH_CAP: int = int(os.getenv("MNA_DENSE_MATCH_CAP", "4000000"))

    # Harness
    THREADS: int = int(os.getenv("MNA_THREADS", "1"))
    OUTPUT_DIR: str = os.getenv("MNA_OUTPUT_DIR", "results")
    LOG_LEVEL: str = os.getenv("MNA_LOG_LEVEL", "INFO")

    @classmethod
    def validate(cls) -> None:
        """Validate configuration values"""
        errors = []

        if not 0.0 < cls.ALPHA < 1.0:
            errors.append(f"MNA_ALPHA must be in (0, 1), got {cls.ALPHA}")
        if cls.ITERATIONS < 0:
            errors.append(f"MNA_ITERATIONS must be >= 0, got {cls.ITERATIONS}")
        if cls.MATCH_WINDOW < 1:
            errors.append(f"MNA_MATCH_WINDOW must be >= 1, got {cls.MATCH_WINDOW}")
        if cls.DENSE_TENSOR_CAP < 1:
            errors.append("MNA_DENSE_TENSOR_CAP must be >= 1")
        if cls.DENSE_MATCH_CAP < 1:
            errors.append("MNA_DENSE_MATCH_CAP must be >= 1")
        if cls.THREADS < 1:
            errors.append(f"MNA_THREADS must be >= 1, got {cls.THREADS}")
        if not isinstance(logging.getLevelName(cls.LOG_LEVEL.upper()), int):
            errors.append(f"MNA_LOG_LEVEL is not a logging level: {cls.LOG_LEVEL}")

        if errors:
            raise ValueError(f"Configuration errors: {', '.join(errors)}")


# Singleton instance
config = Config()
