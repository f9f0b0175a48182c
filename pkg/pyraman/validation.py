from __future__ import annotations

import math
from typing import Type

from .exceptions import ConfigError, DomainError, PyramanError


class ErrorChecker:
    """Argument checks shared by the physics modules and the config loader.

    Every check takes the value and the name to report, and raises the given
    error class (DomainError unless told otherwise).
    """

    @staticmethod
    def _fail(error: Type[PyramanError], name: str, message: str) -> None:
        if error is ConfigError:
            raise ConfigError(message, field=name)
        raise error(f'Invalid {name}: {message}')

    @staticmethod
    def check_finite(value: float, name: str, error: Type[PyramanError] = DomainError) -> None:
        """Checks the value is a finite real number."""
        if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
            ErrorChecker._fail(error, name, f'{value!r} is not a finite number')

    @staticmethod
    def check_positive(value: float, name: str, error: Type[PyramanError] = DomainError) -> None:
        """Checks the value is finite and strictly positive."""
        ErrorChecker.check_finite(value, name, error)
        if value <= 0:
            ErrorChecker._fail(error, name, f'{value} must be > 0')

    @staticmethod
    def check_non_negative(value: float, name: str, error: Type[PyramanError] = DomainError) -> None:
        """Checks the value is finite and >= 0."""
        ErrorChecker.check_finite(value, name, error)
        if value < 0:
            ErrorChecker._fail(error, name, f'{value} must be >= 0')

    @staticmethod
    def check_probability(value: float, name: str, error: Type[PyramanError] = DomainError) -> None:
        """Checks the value lies in [0, 1]."""
        ErrorChecker.check_finite(value, name, error)
        if value < 0 or value > 1:
            ErrorChecker._fail(error, name, f'{value} must be in [0, 1]')

    @staticmethod
    def check_count(value: int, name: str, minimum: int = 0, error: Type[PyramanError] = DomainError) -> None:
        """Checks the value is an integer >= minimum."""
        if isinstance(value, bool) or not isinstance(value, int):
            ErrorChecker._fail(error, name, f'{value!r} is not an integer')
        if value < minimum:
            ErrorChecker._fail(error, name, f'{value} must be >= {minimum}')

    @staticmethod
    def check_seed(value: int, name: str = 'seed') -> None:
        """Checks the value fits an unsigned 64-bit seed."""
        ErrorChecker.check_count(value, name)
        if value >= 2 ** 64:
            ErrorChecker._fail(DomainError, name, f'{value} does not fit in 64 bits')
