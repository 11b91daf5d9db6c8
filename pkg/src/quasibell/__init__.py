"""Teleportation of a qubit over quasi-Bell entangled coherent-state channels.

Closed forms live in :mod:`quasibell.quasi_bell` and
:mod:`quasibell.teleport_protocol`; :mod:`quasibell.oracle` recomputes them
from explicit truncated Fock-space vectors. :mod:`quasibell.landau_model`
covers the underlying exotic Landau particle.
"""
from .errors import (BasisUndefinedError, CriticalCaseError, DegenerateStateError,
                     InvalidArgumentError, TruncationError, UnsupportedError)
from .quasi_bell import ChannelSpec, channel_from_angles, make_channel

__version__ = "0.1.0"
