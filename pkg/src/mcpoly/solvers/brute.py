# src/mcpoly/solvers/brute.py
"""
Exhaustive search over all permissible chains.
"""

import itertools
import logging
from concurrent.futures import ProcessPoolExecutor, as_completed
from fractions import Fraction
from typing import Optional, Sequence, Tuple

from mcpoly.chain import StateFamilies, cost
from mcpoly.config import effective_cores
from mcpoly.errors import BudgetExceededError
from mcpoly.solvers.report import SolveReport

logger = logging.getLogger(__name__)

DEFAULT_BUDGET = 10**6

_Best = Tuple[Fraction, Tuple[int, ...]]


def _search(fams: StateFamilies, first: Sequence[int]) -> Optional[_Best]:
    # Product order is lexicographic, so a strict improvement test keeps the
    # lexicographically smallest minimizer.
    ranges = [first] + [range(len(family)) for family in fams.families[1:]]
    best: Optional[_Best] = None
    for indices in itertools.product(*ranges):
        value = cost(fams.chain(indices))
        if best is None or value < best[0]:
            best = (value, indices)
    return best


def brute_force(fams: StateFamilies, budget: int = DEFAULT_BUDGET, cores: int = 1) -> SolveReport:
    """
    Evaluates the cost of every permissible chain and returns a minimizer.

    Ties are broken by the lexicographically smallest index tuple.

    Args:
        fams: State families.
        budget: Maximum number of chains to evaluate.
        cores: Worker processes; capped by MCPOLY_THREADS. The chain product
            is split by the type-0 state.

    Returns:
        A SolveReport with iterations set to the number of chains evaluated.

    Raises:
        BudgetExceededError: If the chain count exceeds the budget.
    """
    count = fams.chain_count()
    if count > budget:
        raise BudgetExceededError(f"{count} chains exceed the brute-force budget of {budget}")
    workers = min(effective_cores(cores), len(fams.families[0]))
    logger.info(f"Brute force over {count} chains (family sizes {fams.sizes()}, {workers} worker(s))")

    if workers <= 1:
        best = _search(fams, range(len(fams.families[0])))
        candidates = [best] if best is not None else []
    else:
        slices = [list(range(w, len(fams.families[0]), workers)) for w in range(workers)]
        candidates = []
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_search, fams, first) for first in slices if first]
            for future in as_completed(futures):
                result = future.result()
                if result is not None:
                    candidates.append(result)

    best_cost, best_indices = min(candidates)
    logger.info(f"Brute force optimum {best_cost} at indices {best_indices}")
    return SolveReport("brute", fams.chain(best_indices), best_cost, iterations=count, phases=["brute"])
