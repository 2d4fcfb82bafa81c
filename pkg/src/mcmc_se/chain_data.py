"""Chain containers, CSV ingestion and mean computations.

A :class:`Chain` holds ``g(X_1), ..., g(X_n)`` as an ``(n, d)`` float array
with rows in Markov-chain time order.  A :class:`MultiChain` groups ``M``
equal-shape chains run from the same kernel.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import BinaryIO, Iterable, TextIO

import numpy as np

from .errors import ChainFormatError, ChainTooShortError

__all__ = [
    "Chain",
    "MultiChain",
    "load_chain",
    "read_chain_csv",
    "dump_chain",
    "chain_mean",
    "global_mean",
]


def _column_sums(x):
    # numpy only uses pairwise summation along a contiguous reduction axis
    return np.ascontiguousarray(x.T).sum(axis=1)


@dataclass(frozen=True, eq=False)
class Chain:
    """Output ``g(X_t)`` of a single Markov chain run.

    Parameters
    ----------
    samples : array_like
        Either a length-``n`` vector (``d = 1``) or an ``(n, d)`` matrix.
        A private read-only copy is stored.
    """

    samples: np.ndarray

    def __post_init__(self):
        x = np.array(self.samples, dtype=float, copy=True)
        if x.ndim == 1:
            x = x[:, None]
        if x.ndim != 2:
            raise ChainFormatError(f"chain samples must be 1-D or 2-D, got {x.ndim}-D")
        if x.shape[1] < 1:
            raise ChainFormatError("chain must have at least one coordinate")
        if x.shape[0] < 2:
            raise ChainTooShortError(f"chain needs n >= 2 samples, got {x.shape[0]}")
        if not np.all(np.isfinite(x)):
            raise ChainFormatError("chain contains non-finite values")
        x.setflags(write=False)
        object.__setattr__(self, "samples", x)

    @property
    def n(self) -> int:
        return self.samples.shape[0]

    @property
    def d(self) -> int:
        return self.samples.shape[1]

    def head(self, n: int) -> "Chain":
        """The first ``n`` samples as a new chain."""
        if n == self.n:
            return self
        return Chain(self.samples[:n])

    def column(self, j: int) -> "Chain":
        return Chain(self.samples[:, j])


@dataclass(frozen=True, eq=False)
class MultiChain:
    """``M`` parallel chains sharing length ``n`` and dimension ``d``."""

    chains: tuple

    def __post_init__(self):
        chains = tuple(c if isinstance(c, Chain) else Chain(c) for c in self.chains)
        if not chains:
            raise ChainFormatError("a MultiChain needs at least one chain")
        shape = chains[0].samples.shape
        for m, c in enumerate(chains):
            if c.samples.shape != shape:
                raise ChainFormatError(
                    f"chain {m} has shape {c.samples.shape}, expected {shape}"
                )
        object.__setattr__(self, "chains", chains)

    @property
    def M(self) -> int:
        return len(self.chains)

    @property
    def n(self) -> int:
        return self.chains[0].n

    @property
    def d(self) -> int:
        return self.chains[0].d

    def head(self, n: int) -> "MultiChain":
        if n == self.n:
            return self
        return MultiChain(tuple(c.head(n) for c in self.chains))

    def pooled(self) -> Chain:
        """All ``M * n`` rows stacked into one chain (used for pooled lag-0 covariance)."""
        return Chain(np.vstack([c.samples for c in self.chains]))


def as_multichain(obj) -> MultiChain:
    if isinstance(obj, MultiChain):
        return obj
    if isinstance(obj, Chain):
        return MultiChain((obj,))
    return MultiChain(tuple(obj))


def read_chain_csv(text: Iterable[str], has_header: bool | None = False) -> Chain:
    """Parse CSV lines into a :class:`Chain`.

    ``has_header=None`` treats the first row as a header only when it does not
    parse as numbers.
    """
    rows = [r for r in csv.reader(text) if r and any(cell.strip() for cell in r)]
    if has_header is None:
        has_header = bool(rows) and not _is_numeric_row(rows[0])
    if has_header:
        rows = rows[1:]
    if len(rows) < 2:
        raise ChainTooShortError(f"chain needs n >= 2 rows, got {len(rows)}")

    width = len(rows[0])
    out = np.empty((len(rows), width))
    first_data_line = 2 if has_header else 1
    for i, row in enumerate(rows):
        if len(row) != width:
            raise ChainFormatError(
                f"ragged row {i + first_data_line}: {len(row)} fields, expected {width}"
            )
        for j, cell in enumerate(row):
            try:
                out[i, j] = float(cell)
            except ValueError:
                raise ChainFormatError(
                    f"non-numeric value {cell!r} at row {i + first_data_line}, column {j + 1}"
                ) from None
    return Chain(out)


def _is_numeric_row(row):
    try:
        [float(c) for c in row]
    except ValueError:
        return False
    return True


def load_chain(stream: BinaryIO | TextIO | bytes | str, has_header: bool | None = False) -> Chain:
    """Load a chain from a UTF-8 CSV byte stream, text stream, raw bytes or a path.

    >>> load_chain(b"1\\n2\\n3\\n").samples.ravel()
    array([1., 2., 3.])
    """
    if isinstance(stream, bytes):
        text = io.StringIO(stream.decode("utf-8"))
    elif isinstance(stream, str):
        with open(stream, encoding="utf-8", newline="") as fh:
            return read_chain_csv(fh, has_header)
    else:
        data = stream.read()
        if isinstance(data, bytes):
            data = data.decode("utf-8")
        text = io.StringIO(data)
    return read_chain_csv(text, has_header)


def dump_chain(chain: Chain, stream: TextIO, header: list[str] | None = None) -> None:
    """Write a chain as CSV with round-trip (``repr``) float formatting."""
    writer = csv.writer(stream, lineterminator="\n")
    if header is not None:
        writer.writerow(header)
    for row in chain.samples:
        writer.writerow([repr(float(v)) for v in row])


def chain_mean(chain: Chain) -> np.ndarray:
    """Coordinate-wise mean of the rows, accumulated with pairwise summation."""
    x = chain.samples if isinstance(chain, Chain) else np.atleast_2d(np.asarray(chain, float).T).T
    mean = _column_sums(x) / x.shape[0]
    # constant columns get their exact value so centered data is exactly zero
    const = np.all(x == x[:1], axis=0)
    return np.where(const, x[0], mean)


def global_mean(mc: MultiChain) -> np.ndarray:
    """Mean of the per-chain means.

    For ``M = 1`` this is exactly ``chain_mean`` of the single chain.
    """
    mc = as_multichain(mc)
    means = np.array([chain_mean(c) for c in mc.chains])
    if mc.M == 1:
        return means[0]
    out = _column_sums(means) / mc.M
    return np.where(np.all(means == means[:1], axis=0), means[0], out)
