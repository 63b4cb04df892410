# SPDX-License-Identifier: Apache-2.0
"""Low-coherence sensing matrices from Wigner D-functions and spherical
harmonics: samplers, coherence optimization and basis-pursuit recovery."""

from snfcs._snfcs import *  # noqa: F401,F403
from snfcs._snfcs import __doc__  # noqa: F401
