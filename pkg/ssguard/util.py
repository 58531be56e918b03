import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Sequence, TypeVar

from tqdm import tqdm

from .constants import CONFIG

T = TypeVar("T")
R = TypeVar("R")

_MIN_PROGRESS_ITEMS = 8


def progress_enabled(num_items: int) -> bool:
    """Progress bars are only shown for longer loops on an interactive terminal."""
    return num_items >= _MIN_PROGRESS_ITEMS and sys.stderr.isatty()


def parallel_map(
    func: Callable[[T], R], items: Sequence[T], desc: str = "", max_workers: int = 0
) -> List[R]:
    """Applies func to all items on a thread pool, preserving the input order.

    The worker count is capped by the configuration (and SSGUARD_THREADS).
    """
    items = list(items)
    workers = min(max_workers or CONFIG.threads, CONFIG.threads, max(len(items), 1))
    show = progress_enabled(len(items))
    if workers <= 1:
        return [func(item) for item in tqdm(items, desc=desc, disable=not show, colour="green")]
    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(
            tqdm(
                executor.map(func, items),
                total=len(items),
                desc=desc,
                disable=not show,
                colour="green",
            )
        )
