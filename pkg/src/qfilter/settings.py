"""Package wide limits and tolerances."""

import os

MAX_QUBITS = int(os.environ.get("QFILTER_MAX_QUBITS", "24"))
MAX_DENSE_QUBITS = 12
MAX_SYNTHESIS_QUBITS = 10

# Norm check on amplitudes handed in by callers.
INPUT_NORM_TOLERANCE = 1e-9
# Norm maintained by every operation on a state.
STATE_NORM_TOLERANCE = 1e-10
# Branch probabilities at or below this are rounding noise.
ZERO_PROBABILITY_TOLERANCE = 1e-20
# Largest imaginary part tolerated by a strict amplitude decode.
STRICT_IMAGINARY_TOLERANCE = 1e-6
# Reference vectors are printed to three decimals.
FIXTURE_TOLERANCE = 5e-3
# MATLAB vectors are printed to four decimals.
CLASSICAL_FIXTURE_TOLERANCE = 5e-4
# Recovered transposes carry the drift of three-decimal amplitudes.
TRANSPOSE_RECOVERY_TOLERANCE = 5e-2
