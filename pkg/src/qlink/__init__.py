"""Remote holonomic two-qubit gates over a multimode cable link.

Simulation and optimization toolkit: device Hamiltonians (lab and rotating
frame), parametric-drive synthesis for SWAP-class holonomic gates, leakage
and robustness analysis, and frequency/waveform optimizers.
"""

from .analysis import (ErrorFit, RobustnessCurve, decoherence_compensated_error,
                       fit_linear_error, gate_loss, leakage, repeated_gate_error,
                       robustness_sweep, state_fidelity, subspace_state)
from .device import (DEFAULT_NOISE, DeviceSpec, NoiseSpec, build_device,
                     dressed_sector_basis, effective_coupling, fsr_length_convert,
                     lab_frame_hamiltonian, paper_device, rotating_frame_hamiltonian,
                     second_order_coupling)
from .hilbert import (HilbertSpace, Trajectory, compose_space, propagate_lindblad,
                      propagate_state, propagate_unitary, restrict_to_sector)
from .holonomic import (GateSchedule, GateTarget, coupling_ratio,
                        dynamic_baseline_schedule, simulate_schedule, sqrt_swap_target,
                        subspace_propagator, swap_target, synthesize_drives,
                        target_unitary)
from .optimize import (AdamConfig, GridConfig, OptimizationResult, adam_minimize,
                       finite_difference_gradient, optimize_frequencies,
                       optimize_lab_frequencies, optimize_waveform)
from .pulse import (DriveSignal, Envelope, envelope_average, gate_duration,
                    sample_envelope)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
