"""Exact point-interaction scattering in one dimension.

Modules:
    pointcore -- single-site resolvents, Green's functions, S-matrices
    channels  -- n-channel multi-site linear scattering solver
    qmemory   -- scattering-based quantum memory protocol
    verify    -- independent numerical oracles
    cli       -- command-line front end
"""

from . import channels, errors, pointcore, qmemory, verify

__all__ = ["channels", "errors", "pointcore", "qmemory", "verify"]

__version__ = "1.0.0"
