"""Rayleigh fading with power-law path loss for the BS->surface and surface->user hops.

Path loss is a power gain l = rho * d**(-alpha); channel entries are CN(0, l), i.e. the
amplitude scale is sqrt(l). Correlation is applied on the surface->user side.
"""

from typing import Sequence

import numpy as np

from models.link import ChannelRealization, LinkParams
from models.surface import CorrelationModel
from utils.errors import InvalidInputError, InvalidSelectionError


def path_loss(link: LinkParams) -> float:
    return link.rho * link.distance_m ** (-link.alpha)


def draw_channel(rng: np.random.Generator, m: int, link: LinkParams) -> np.ndarray:
    """Draw m independent CN(0, path_loss(link)) entries (real and imaginary parts each l/2)."""
    if m < 1:
        raise InvalidInputError(f"channel length must be at least 1, got {m}")
    scale = np.sqrt(path_loss(link) / 2.0)
    return scale * (rng.standard_normal(m) + 1j * rng.standard_normal(m))


def draw_realization(
    rng: np.random.Generator,
    corr: CorrelationModel,
    link_br: LinkParams,
    link_ru: LinkParams,
    correlate_both: bool = False,
) -> ChannelRealization:
    h_br = draw_channel(rng, corr.m, link_br)
    h_ru = draw_channel(rng, corr.m, link_ru)
    if correlate_both:
        h_br = corr.j_sqrt @ h_br
    return ChannelRealization(h_br=h_br, h_ru=h_ru, h_ru_corr=corr.j_sqrt @ h_ru)


def validate_selection(selection: Sequence[int], m: int) -> np.ndarray:
    """Return the selection as ascending indices, rejecting duplicates and out-of-range entries."""
    index = np.asarray(selection)
    if index.ndim != 1 or (index.size and not np.issubdtype(index.dtype, np.integer)):
        raise InvalidSelectionError("selection must be a flat list of integer indices")
    index = np.sort(index.astype(np.int64))
    if index.size and (index[0] < 0 or index[-1] >= m):
        raise InvalidSelectionError(f"selection indices must lie in 0..{m - 1}")
    if np.any(np.diff(index) == 0):
        raise InvalidSelectionError("selection indices must be distinct")
    return index


def cascaded_coefficients(ch: ChannelRealization, selection: Sequence[int]) -> np.ndarray:
    """c_k = conj(h_ru_corr[s_k]) * h_br[s_k] for the selected indices in ascending order.

    The effective scalar channel is then sum_k c_k * exp(j phi_k).
    """
    index = validate_selection(selection, ch.m)
    return np.conj(ch.h_ru_corr[index]) * ch.h_br[index]


def selected_indices(xi: np.ndarray, m_hat: int) -> np.ndarray:
    """Ascending active-element indices of each row of a feasible selection batch."""
    return np.argsort(xi == 0, axis=1, kind="stable")[:, :m_hat]


def cascaded_matrix(ch: ChannelRealization, index: np.ndarray) -> np.ndarray:
    """Batch form of cascaded_coefficients for rows of already sorted, valid indices."""
    return np.conj(ch.h_ru_corr[index]) * ch.h_br[index]
