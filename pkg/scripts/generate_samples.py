"""Writes the sample inputs used by run.yaml and the README."""  # noqa: INP001

from pathlib import Path

import numpy as np
import typer
from rich import print as echo

from qfilter.io import write_csv, write_netpbm

app = typer.Typer()

WALKTHROUGH = [0, 0, 0, 0, 0, 0, 0.5, 0.5, 0.5, 0.5, 0, 0, 0, 0, 0, 0]


@app.command()
def generate(directory: Path = Path("data"), seed: int = 0) -> None:
    """Write a 16-sample pulse, an 8x8 gradient PGM, a noisy 8x8 PPM and a 4x4 matrix."""
    directory.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(seed)

    write_csv(directory / "signal.csv", WALKTHROUGH)

    gradient = np.tile(np.arange(8, dtype=np.int64) * 32, (8, 1))
    write_netpbm(directory / "gradient.pgm", gradient, 255)

    channels = [gradient, gradient.T, np.full((8, 8), 128)]
    noisy = np.stack(channels, axis=-1) + rng.integers(-16, 17, size=(8, 8, 3))
    write_netpbm(directory / "noisy.ppm", np.clip(noisy, 0, 255), 255)

    write_csv(directory / "matrix.csv", np.arange(16, dtype=np.float64).reshape(4, 4))

    echo(sorted(str(p) for p in directory.iterdir()))


if __name__ == "__main__":
    app()
