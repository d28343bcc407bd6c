from .uniform_bundles import UniformBundles, main
from .argparse_enums import Completeness, OutputFormat, Strategy
from .bundles import chern_total, parse_expr, pullback_target, restrict_to_line
from .chow import chow_equal, normal_form, reduce
from .classify import classify, enumerate_cases, match_solution, verify
from .constraints import build_system, check_solution
from .solver import SolverConfig, dualize_type, solve, transform_solution
from .splitting_type import SplittingType
