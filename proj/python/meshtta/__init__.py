"""Cycle-accurate simulator of a mesh of transport-triggered PEs.

The heavy lifting lives in the compiled ``meshtta._core`` module; this
package re-exports its surface: the assembler (``assemble``/``disassemble``),
the kernel generators (``lbp3x3``, ``conv3x3``, ``maxpool``), the simulator
entry points (``run_program``, ``run_fovea``), the scalar references
(``lbp_ref``, ``conv3x3_ref``, ``maxpool_ref``) and the power/energy/area
model.
"""

from meshtta._core import *  # noqa: F401,F403

__all__ = [name for name in dir() if not name.startswith("_")]
