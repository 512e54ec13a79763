"""
quartic-iso Version Information
"""

__version__ = "0.1.0"

# Application metadata
APP_NAME = "quartic-iso"
APP_DESCRIPTION = "Decide equality of simplest quartic fields, issue uniqueness certificates and check the attached curves"
APP_AUTHOR = "quartic-iso developers"
APP_LICENSE = "GPL v3"


def get_app_info() -> dict[str, str]:
    """Get application information."""
    return {
        "name": APP_NAME,
        "version": __version__,
        "description": APP_DESCRIPTION,
        "author": APP_AUTHOR,
        "license": APP_LICENSE,
    }
