# Copyright 2026 The meanking Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Mean King retrodiction: exact states, strategy search and optics simulation.

Amplitudes are lists of four complex numbers over (E,h), (E,v), (L,h), (L,v).
"""

from pathlib import Path

from ._meanking import (
    OpticsError,
    ProtocolError,
    SerializationError,
    alice_answer,
    challenge_infer,
    challenge_post_state,
    demonstration_config,
    detector_outcomes,
    evaluate,
    ideal_distribution,
    init_state,
    measure_in_basis,
    project,
    projected_state,
    projection_game_threshold,
    search_optimum,
    second_challenge_threshold,
    simulate,
    vaa_basis,
)
from ._meanking import verify as _verify

PROJECTION_LABELS = ("plus", "minus", "r", "l", "h", "v")
UNITARY_LABELS = ("x+y", "x-y", "y+z", "y-z", "z+x", "z-x")


def verify(golden_dir=None):
    """Run the invariant and golden-file checks; returns (name, passed, detail) tuples."""
    if golden_dir is None:
        bundled = Path(__file__).with_name("golden")
        golden_dir = str(bundled) if bundled.is_dir() else ""
    return _verify(str(golden_dir))


__all__ = [name for name in dir() if not name.startswith("_")]
