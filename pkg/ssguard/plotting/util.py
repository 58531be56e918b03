from pathlib import Path
from typing import Union

import matplotlib.pyplot as plt
from matplotlib.figure import Figure

from ..constants import VERDICT_FAIL, VERDICT_INCONCLUSIVE, VERDICT_INFO, VERDICT_PASS
from ..logger import LOGGER

VERDICT_COLORS = {
    VERDICT_PASS: "tab:green",
    VERDICT_FAIL: "tab:red",
    VERDICT_INFO: "tab:blue",
    VERDICT_INCONCLUSIVE: "tab:orange",
}


def save_figure(fig: Figure, path: Union[str, Path], dpi: int = 150, close_fig: bool = True) -> Path:
    """Writes the figure as a static image and closes it."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=dpi, bbox_inches="tight")
    LOGGER.info(f"Saved figure to {path}")
    if close_fig:
        plt.close(fig)
    return path
