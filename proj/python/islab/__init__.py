# Copyright islab contributors.
# SPDX-License-Identifier: Apache-2.0
"""Instruction-sequence fault analysis laboratory."""

try:
    from islab._islab import *  # noqa: F401,F403  (installed package layout)
except ImportError:
    from _islab import *  # noqa: F401,F403  (in-build layout)
