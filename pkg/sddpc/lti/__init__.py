from ._io import read_trajectory_csv, trajectory_header, write_trajectory_csv
from ._model import StateSpaceModel, fourth_order_benchmark
from ._noise import NoiseSpec, draw_disturbance, draw_noise, draw_samples
from ._oracles import observability_stack, true_gamma
from ._simulate import TrajectoryData, simulate

__all__ = [
    "StateSpaceModel",
    "fourth_order_benchmark",
    "TrajectoryData",
    "simulate",
    "NoiseSpec",
    "draw_noise",
    "draw_disturbance",
    "draw_samples",
    "true_gamma",
    "observability_stack",
    "trajectory_header",
    "write_trajectory_csv",
    "read_trajectory_csv",
]
