"""
Validation utilities for experiment configurations.

Checks that a merged configuration holds every value a command needs
before it is turned into a typed model.
"""

from typing import Any, Dict, List, Optional

# Fields each command cannot run without. A tuple means "at least one of".
REQUIRED_FIELDS = {
    'simulate': ['seed'],
    'estimate': ['seed', ('tours', 'trace')],
    'probit-regen': ['seed'],
    'diagnose': ['seed'],
}


def _present(data: Dict[str, Any], key: str) -> bool:
    value = data.get(key)
    return value is not None and not (isinstance(value, str) and value.strip() == '')


def validate_config_complete(command: str, data: Dict[str, Any]) -> tuple[bool, Optional[List[str]]]:
    """
    Validate that a configuration has every required field for a command.

    Args:
        command: Subcommand name (simulate, estimate, probit-regen, diagnose)
        data: Merged configuration values

    Returns:
        Tuple of (is_valid, missing_fields)
        - is_valid: True if all required fields are present and non-empty
        - missing_fields: List of missing field names, or None if all present

    Raises:
        ValueError: If the command is unknown
    """
    if command not in REQUIRED_FIELDS:
        raise ValueError(f"Unknown command: {command}")

    missing = []
    for requirement in REQUIRED_FIELDS[command]:
        if isinstance(requirement, tuple):
            if not any(_present(data, key) for key in requirement):
                missing.append(' or '.join(requirement))
        elif not _present(data, requirement):
            missing.append(requirement)

    if missing:
        return False, missing

    return True, None


def get_validation_error_message(command: str, missing_fields: List[str]) -> str:
    """
    Generate a user-friendly error message for an incomplete configuration.

    Args:
        command: Subcommand name
        missing_fields: List of missing field names

    Returns:
        Formatted error message with actionable guidance
    """
    fields_str = ', '.join(missing_fields)
    flags_str = ', '.join('--' + f.replace('_', '-').replace(' or ', ' or --') for f in missing_fields)
    return (
        f"Configuration for '{command}' is incomplete.\n"
        f"Missing required fields: {fields_str}\n\n"
        f"Pass them as flags ({flags_str}) or add them to the --config file.\n"
        f"Seeds are never chosen automatically: every run needs an explicit seed."
    )
