# Copyright (c) 2026 hexsem contributors
# SPDX-License-Identifier: Apache-2.0
"""Python bindings for the hexsem spectral element solver."""

try:
    from ._hexsem import *  # noqa: F401,F403  (installed package layout)
    from ._hexsem import __doc__ as _doc
except ImportError:  # build-tree layout: extension next to the package
    from _hexsem import *  # noqa: F401,F403
    from _hexsem import __doc__ as _doc

__doc__ = _doc
