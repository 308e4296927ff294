"""Knowledge-base-driven diagnostic scoring engine with a questionnaire service."""

__version__ = "0.1.0"
