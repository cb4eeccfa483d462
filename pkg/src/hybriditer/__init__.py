"""Hybrid iterative solvers for Poisson problems: classical smoothers and
geometric multigrid accelerated by a learned (or analytically exact)
low-frequency correction operator, plus the spectral analysis toolkit that
predicts when and how fast the hybrid loop converges."""

from .container import ContainerError, load_container, save_container
from .correctors import (MODE_CONTINUOUS_EIG, MODE_DISCRETE_EXACT, Corrector,
                         MionetCorrector, SpectralOracleCorrector)
from .fem import (PAD_REPLICATE, PAD_ZERO, GridFunction, PiecewiseLinearFn,
                  StructuredGrid, assemble_augmented_2d, assemble_load_1d,
                  assemble_load_2d, assemble_stiffness_1d,
                  assemble_stiffness_2d, boundary_parameter, integrated_hat,
                  interpolate_at_nodes, pad_interior, residual_to_function)
from .gpfield import (EXP_SINE_SQUARED, RBF, GpSpec, covariance,
                      positivity_guard, sample_field)
from .hybrid import (HybridConfig, SweepRow, best_period, hybrid_solve,
                     solve_stationary, sweep_M, sweep_to_csv)
from .iteration import (STATUS_CONVERGED, STATUS_DIVERGED, STATUS_MAX_ITER,
                        IterationTrace, StopRule, empirical_rate)
from .linalg import (CsrMatrix, cholesky, csr_from_coo, csr_transpose,
                     operator_norm_2, sine_modes, sine_transform_1d, spmv)
from .mionet import (Dataset, MionetModel, Mlp, TrainingOptions, build_model,
                     default_architecture, forward, generate_dataset,
                     glorot_uniform, grad_check, load_dataset, load_model,
                     relative_l2_error, save_dataset, save_model, train)
from .multigrid import (MgHierarchy, MgLevel, build_hierarchy,
                        prolongation_1d, prolongation_2d, vcycle)
from .smoothers import (GAUSS_SEIDEL, JACOBI, RICHARDSON, SOR, Smoother,
                        smoother_step)
from .spectral import (RateParams, argmin_rate, eigenpairs_1d,
                       estimate_gs_low_mode_contraction, gs_symbol,
                       heatmap_to_csv, model_error_spectrum, rate_bound,
                       rate_bound_gs, rate_curve_to_csv, richardson_M_bound,
                       smoothing_factor, spectral_heatmap)

__version__ = "0.1.0"
