"""
Check Runner
Builds the algebra from an AlgebraConfig and runs named checks into CheckReports.
"""

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from config import CHECK_ORDER, DEFAULT_CHECKS, DEFAULT_SEED, DIM_CAP, EXIT_CODES
from core.errors import BadParam, CharTwoUnsupported, FieldTooSmall, Infeasible
from core.galois_field import GaloisField
from core.property_suite import PropertySuite
from core.structure import CheckReport, StructureAnalyzer
from core.two_local import TwoLocalAnalyzer
from core.witt_algebra import WittAlgebra, make_algebra
from utils.logger import logger


@dataclass
class AlgebraConfig:
    """
    Parameters of one W_n over F_{p^deg}.

    deg defaults to n, the smallest degree with regular vectors.
    """
    n: int
    p: int
    deg: Optional[int] = None
    modulus: Optional[Tuple[int, ...]] = None
    dim_cap: int = DIM_CAP
    seed: int = DEFAULT_SEED
    jobs: int = 1
    timings: bool = False

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise BadParam(f"n must be a positive integer, got {self.n}")
        if self.deg is None:
            self.deg = self.n
        if self.modulus is not None:
            self.modulus = tuple(int(c) for c in self.modulus)

    def field(self) -> GaloisField:
        return GaloisField(self.p, self.deg, self.modulus)

    def algebra(self) -> WittAlgebra:
        return make_algebra(self.field(), self.n, self.dim_cap)

    def label(self) -> str:
        return f"W_{self.n} over F_{self.p}^{self.deg}"


CheckFn = Callable[[StructureAnalyzer, TwoLocalAnalyzer, int], CheckReport]

CHECKS: Dict[str, CheckFn] = {
    'der-inn': lambda s, t, seed: s.der_equals_inn(),
    'script-d': lambda s, t, seed: s.script_d_check(),
    'centralizers': lambda s, t, seed: s.centralizer_check(),
    'torus-cartan': lambda s, t, seed: s.torus_cartan_check(),
    'graded-vanishing': lambda s, t, seed: s.graded_vanishing_check(),
    'determining-pair': lambda s, t, seed: s.determining_pair_check(),
    'counterexample': lambda s, t, seed: t.counterexample_check(),
    'roots': lambda s, t, seed: s.roots_check(),
    'change-of-variables': lambda s, t, seed: s.change_of_variables_check(),
    'delta-support': lambda s, t, seed: t.delta_support_check(),
    'properties': lambda s, t, seed: PropertySuite(s.algebra, seed).report(),
}

# every check builds an ad matrix except the fixed-algebra counterexample
_SIZE_FREE = {'counterexample'}


def expand_checks(names: Iterable[str]) -> List[str]:
    """Resolve 'all', drop duplicates and sort into the canonical order."""
    wanted = set()
    for name in names:
        if name == 'all':
            wanted.update(DEFAULT_CHECKS)
        elif name in CHECKS:
            wanted.add(name)
        else:
            raise BadParam(f"unknown check '{name}'")
    return [name for name in CHECK_ORDER if name in wanted]


def infeasible_report(name: str, params: dict, reason: str) -> CheckReport:
    logger.warning(f"⚠️ Check {name} refused: {reason}")
    return CheckReport(check=name, params=params, status='infeasible', reason=reason)


class CheckRunner:
    """Runs checks against one configuration; reports come back in canonical order."""

    def __init__(self, config: AlgebraConfig):
        self.config = config
        self.algebra = config.algebra()
        self.structure = StructureAnalyzer(self.algebra, config.seed)
        self.two_local = TwoLocalAnalyzer(self.algebra, config.seed, config.jobs)

    def run_one(self, name: str) -> CheckReport:
        params = self.structure.params
        if name not in _SIZE_FREE and not self.algebra.within_cap():
            return infeasible_report(name, params,
                                     f"dimension {self.algebra.dim} exceeds cap {self.algebra.dim_cap}")
        start = time.perf_counter()
        try:
            report = CHECKS[name](self.structure, self.two_local, self.config.seed)
        except (Infeasible, CharTwoUnsupported, FieldTooSmall) as e:
            return infeasible_report(name, params, str(e))
        if self.config.timings:
            report.elapsed_ms = int((time.perf_counter() - start) * 1000)
        logger.info(f"✓ {name}: {report.status}")
        return report

    def run(self, names: Sequence[str]) -> List[CheckReport]:
        names = expand_checks(names)
        if self.config.jobs > 1 and len(names) > 1:
            with ThreadPoolExecutor(max_workers=self.config.jobs) as pool:
                return list(pool.map(self.run_one, names))
        return [self.run_one(name) for name in names]


def run_checks(config: AlgebraConfig, names: Sequence[str]) -> List[CheckReport]:
    return CheckRunner(config).run(names)


def overall_status(reports: Sequence[CheckReport]) -> str:
    statuses = {r.status for r in reports}
    if 'fail' in statuses:
        return 'fail'
    if 'infeasible' in statuses:
        return 'infeasible'
    return 'pass'


def exit_code(reports: Sequence[CheckReport]) -> int:
    return EXIT_CODES[overall_status(reports)]
