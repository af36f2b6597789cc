import os

from dotenv import load_dotenv

load_dotenv()


CONFIG = {
    # (n, alpha) pairs covered by verify-all: odd and even n, integer and non-integer alpha
    "DEFAULT_PAIRS": [(3, 0.0), (3, 1.5), (4, 0.5)],

    # Largest degree whose coefficient c_m is computed by quadrature (asymptotic beyond)
    "M_MAX": 400,

    # Order of the asymptotic expansion of c_m
    "K": 4,

    # Absolute tail tolerance of kernel series
    "KERNEL_TOL": 1e-10,

    # Maximum number of series terms for a single kernel evaluation
    "TERM_CAP": 20000,

    # Term cap and tolerance used inside boundary sweeps (1 - |x|^2 down to 1e-3)
    "SWEEP_TERM_CAP": 60000,
    "SWEEP_TOL": 1e-8,

    # Sweeps also accept a tail below this fraction of the majorant sum (kernels reach 1e9 there)
    "SWEEP_REL_TOL": 1e-8,

    # Direct series refuse |x||y| above this value
    "BOUNDARY_PRODUCT_CAP": 1.0 - 1e-4,

    # Finite-difference step for the hyperbolic Laplacian and invariant gradient
    "FD_STEP": 1e-3,

    # Relative tolerance of the radial integrals I_m and allowed node doublings
    "IM_TOL": 1e-12,
    "IM_MAX_DOUBLINGS": 3,

    # Nodes per panel of the graded rule used for S_m(r) moments
    "S_PANEL_ORDER": 20,

    # Block length J of the unit-argument 3F2 tail extrapolation (partial sums at J, 2J, 4J, 8J)
    "HYP_TAIL_BLOCK": 2000,

    # Hard cap on 2F1 series terms
    "HYP_MAX_TERMS": 2_000_000,

    # Boundary shells, values of 1 - |x|^2
    "SHELLS": [1e-1, 10 ** -1.5, 1e-2, 10 ** -2.5, 1e-3],

    # Shells for ball-integral sweeps (kernel series cost grows like 1/(1 - |x|^2))
    "INTEGRAL_SHELLS": [1e-1, 10 ** -1.5, 1e-2, 10 ** -2.5],

    # Shells for integrals with a closed-form integrand
    "BRACKET_SHELLS": [1e-2, 10 ** -2.5, 1e-3, 10 ** -3.5, 1e-4],

    # Shells for the Bloch seminorm sweep
    "BLOCH_SHELLS": [1e-1, 10 ** -1.5, 1e-2],

    # Bound on the Bloch seminorm of P_alpha f over the whole test family (||f||_inf = 1)
    "BLOCH_CONSTANT_MAX": 1e3,

    # Decreasing cone apertures tried by the lower-bound check
    "CONE_APERTURES": [0.25, 0.1, 0.05, 0.02],

    # Pass criteria shared by the checks
    "STABILITY_FACTOR": 10.0,
    "SLOPE_REL_TOL": 0.05,
    "LOG_R2_MIN": 0.99,
    "BOUNDED_RATIO_MAX": 2.0,

    # Nodes per panel of graded ball/sphere rules
    "GRADED_ORDER": 12,

    # |x0| of the extremal test field f_{x0}
    "EXTREMAL_POINT": 0.9,

    # Worker processes for verify-all (overridable with HBERGMAN_JOBS)
    "JOBS": int(os.getenv("HBERGMAN_JOBS", "1")),

    # Seed for randomized grids and identity checks (overridable with HBERGMAN_SEED)
    "SEED": int(os.getenv("HBERGMAN_SEED", "20240917")),

    # Directory for JSON/CSV artifacts (overridable with HBERGMAN_OUTPUT_DIR)
    "OUTPUT_DIR": os.getenv("HBERGMAN_OUTPUT_DIR", os.path.join("data", "output")),
}

"""
# hbergman Configuration

This file contains the user-configurable defaults for the kernel library, the
verification harness and the command-line tool.

## How to Use
- Edit the values in the CONFIG dictionary to change defaults.
- Library functions read CONFIG only for keyword defaults; every call can override them.
- Values marked "overridable" can also be set in the environment or a `.env` file.

## Parameter Reference
- **DEFAULT_PAIRS**: (n, alpha) pairs run by `verify-all`.
- **M_MAX**: Largest m with c_m computed from the radial integral I_m; larger m use the asymptotic series.
- **K**: Number of terms of the asymptotic expansions A_k, B_k, D_k.
- **KERNEL_TOL**: Truncation tolerance of kernel series. The returned tail bound is below KERNEL_TOL.
- **TERM_CAP**: Maximum series length of a kernel evaluation; beyond it a TruncationError is raised.
- **SWEEP_TERM_CAP / SWEEP_TOL / SWEEP_REL_TOL**: Cap and tolerances used by the boundary sweeps of the checks. A sweep stops summing once the tail is below SWEEP_TOL or below SWEEP_REL_TOL times the majorant partial sum.
- **BOUNDARY_PRODUCT_CAP**: Largest |x||y| accepted by the direct series.
- **FD_STEP**: Central-difference step h.
- **IM_TOL / IM_MAX_DOUBLINGS**: Accuracy target of I_m and the number of node doublings allowed before a QuadratureError.
- **S_PANEL_ORDER**: Gauss nodes per panel of the graded rule for S_m(r).
- **HYP_TAIL_BLOCK**: Block length of the 3F2 partial sums used for tail extrapolation.
- **HYP_MAX_TERMS**: Term cap of the 2F1 series.
- **SHELLS**: Values of 1 - |x|^2 used by boundary sweeps.
- **INTEGRAL_SHELLS**: Values of 1 - |x|^2 used by sweeps of kernel integrals over the ball.
- **BRACKET_SHELLS**: Values of 1 - |x|^2 used by sweeps of bracket integrals.
- **BLOCH_SHELLS**: Values of 1 - |x|^2 used by the Bloch seminorm sweep.
- **BLOCH_CONSTANT_MAX**: Uniform bound C on (1 - |x|^2)|grad P_alpha f| over every non-constant test field and shell.
- **CONE_APERTURES**: Apertures s tried, in order, for the nontangential lower bound.
- **STABILITY_FACTOR**: Largest allowed max/min ratio across shells.
- **SLOPE_REL_TOL**: Relative tolerance on fitted growth exponents.
- **LOG_R2_MIN**: Minimum r^2 of a logarithmic growth fit.
- **BOUNDED_RATIO_MAX**: Largest max/min ratio for a quantity expected to stay bounded.
- **GRADED_ORDER**: Gauss nodes per panel of graded ball and sphere rules.
- **EXTREMAL_POINT**: Radius of x0 for the extremal field f_{x0}.
- **JOBS**: Worker processes (overridable: HBERGMAN_JOBS).
- **SEED**: Random seed (overridable: HBERGMAN_SEED).
- **OUTPUT_DIR**: Artifact directory (overridable: HBERGMAN_OUTPUT_DIR).

"""
