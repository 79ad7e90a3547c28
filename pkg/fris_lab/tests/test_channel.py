import numpy as np
import pytest

from models.link import ChannelRealization, LinkParams
from models.solution import PhaseVector
from models.surface import SurfaceGrid
from physics.channel import (
    cascaded_coefficients,
    cascaded_matrix,
    draw_channel,
    draw_realization,
    path_loss,
    selected_indices,
    validate_selection,
)
from physics.geometry import build_correlation
from physics.rate import effective_gain
from utils.errors import InvalidInputError, InvalidSelectionError


def test_path_loss_examples():
    assert path_loss(LinkParams(rho=1.0, alpha=2.0, distance_m=1.0)) == 1.0
    assert path_loss(LinkParams(rho=0.01, alpha=2.6, distance_m=75.0)) == pytest.approx(0.01 * 75.0 ** -2.6)
    near = path_loss(LinkParams(rho=1.0, alpha=2.0, distance_m=10.0))
    far = path_loss(LinkParams(rho=1.0, alpha=2.0, distance_m=20.0))
    assert far == pytest.approx(near / 4)


@pytest.mark.parametrize("bad", [{"rho": 0.0}, {"alpha": -1.0}, {"distance_m": 0.0}])
def test_link_params_must_be_positive(bad):
    values = {"rho": 1.0, "alpha": 2.0, "distance_m": 1.0, **bad}
    with pytest.raises(ValueError):
        LinkParams(**values)


def test_draw_channel_average_power():
    link = LinkParams(rho=0.01, alpha=2.6, distance_m=75.0)
    h = draw_channel(np.random.default_rng(11), 100_000, link)
    power = np.abs(h) ** 2
    # power of a CN(0, l) entry is exponential with mean l and sd l
    assert abs(power.mean() - path_loss(link)) <= 3 * path_loss(link) / np.sqrt(h.size)
    assert power.mean() == pytest.approx(path_loss(link), rel=0.02)


def test_draw_channel_unit_power_and_replay():
    link = LinkParams(rho=1.0, alpha=2.0, distance_m=1.0)
    first = draw_channel(np.random.default_rng(5), 100_000, link)
    again = draw_channel(np.random.default_rng(5), 100_000, link)
    np.testing.assert_array_equal(first, again)
    assert np.mean(np.abs(first) ** 2) == pytest.approx(1.0, rel=0.02)


def test_draw_channel_rejects_empty():
    with pytest.raises(InvalidInputError):
        draw_channel(np.random.default_rng(0), 0, LinkParams(rho=1.0, alpha=2.0, distance_m=1.0))


def test_draw_realization_applies_correlation(grid3, links):
    corr = build_correlation(grid3)
    ch = draw_realization(np.random.default_rng(1), corr, *links)
    np.testing.assert_array_equal(ch.h_ru_corr, corr.j_sqrt @ ch.h_ru)

    both = draw_realization(np.random.default_rng(1), corr, *links, correlate_both=True)
    np.testing.assert_array_equal(both.h_ru, ch.h_ru)
    np.testing.assert_allclose(both.h_br, corr.j_sqrt @ ch.h_br)


def test_channel_realization_rejects_non_finite():
    good = np.ones(2, dtype=complex)
    with pytest.raises(InvalidInputError):
        ChannelRealization(h_br=np.array([1.0, np.inf], dtype=complex), h_ru=good, h_ru_corr=good.copy())


def test_channel_realization_copies_its_inputs():
    h_br = np.array([1 + 1j, 2 - 1j])
    h_ru = np.array([0.5j, -1.0 + 0j])
    ch = ChannelRealization(h_br=h_br, h_ru=h_ru, h_ru_corr=[0.5j, -1.0])
    assert h_br.flags.writeable and h_ru.flags.writeable
    h_br[0] = 0.0
    assert ch.h_br[0] == 1 + 1j
    assert ch.h_ru_corr.dtype == complex and ch.m == 2
    assert not ch.h_ru.flags.writeable
    with pytest.raises(ValueError):
        ch.h_ru[0] = 0.0


def test_channel_realization_rejects_mismatched_lengths():
    with pytest.raises(InvalidInputError):
        ChannelRealization(h_br=np.ones(3, dtype=complex), h_ru=np.ones(2, dtype=complex), h_ru_corr=np.ones(2))


def test_channel_digest_identifies_the_draw(make_channel, grid3):
    assert make_channel(grid3, 4).digest() == make_channel(grid3, 4).digest()
    assert make_channel(grid3, 4).digest() != make_channel(grid3, 5).digest()


def test_cascaded_coefficient_examples():
    ch = ChannelRealization(h_br=np.array([2 + 0j]), h_ru=np.array([1 + 0j]), h_ru_corr=np.array([1 + 0j]))
    np.testing.assert_array_equal(cascaded_coefficients(ch, [0]), [2 + 0j])

    ch = ChannelRealization(h_br=np.array([1 + 0j]), h_ru=np.array([1j]), h_ru_corr=np.array([1j]))
    np.testing.assert_array_equal(cascaded_coefficients(ch, [0]), [-1j])


def test_cascaded_coefficients_ignore_input_order(iid_channel):
    ch = iid_channel(6, 2)
    np.testing.assert_array_equal(cascaded_coefficients(ch, [4, 1, 3]), cascaded_coefficients(ch, [1, 3, 4]))


@pytest.mark.parametrize("selection", [[0, 0], [0, 6], [-1, 2], [0.5, 1.0]])
def test_invalid_selection(selection, iid_channel):
    with pytest.raises(InvalidSelectionError):
        cascaded_coefficients(iid_channel(6, 0), selection)


def test_validate_selection_sorts():
    np.testing.assert_array_equal(validate_selection((5, 0, 2), 6), [0, 2, 5])


def test_selected_indices_and_matrix_match_single_form(iid_channel):
    ch = iid_channel(5, 9)
    xi = np.array([[1, 0, 1, 0, 1], [0, 1, 1, 1, 0], [1, 1, 0, 0, 1]], dtype=np.int8)
    index = selected_indices(xi, 3)
    np.testing.assert_array_equal(index, [[0, 2, 4], [1, 2, 3], [0, 1, 4]])
    c = cascaded_matrix(ch, index)
    for row, members in zip(c, index):
        np.testing.assert_array_equal(row, cascaded_coefficients(ch, members))


def explicit_gain(ch, root, selection, phi):
    """h_ru^H R^H E^T U E h_br with dense selection and phase matrices."""
    m_hat, m = len(selection), ch.m
    e = np.zeros((m_hat, m))
    e[np.arange(m_hat), np.sort(selection)] = 1.0
    u = np.diag(np.exp(1j * phi.angles))
    return ch.h_ru.conj() @ root.conj().T @ e.T @ u @ e @ ch.h_br


def test_scalar_form_matches_matrix_form(links):
    rng = np.random.default_rng(2024)
    corr = build_correlation(SurfaceGrid(my=4, mz=2, spacing_m=0.01, wavelength_m=0.06))
    for _ in range(1000):
        ch = draw_realization(rng, corr, *links)
        m_hat = int(rng.integers(1, ch.m + 1))
        selection = rng.choice(ch.m, size=m_hat, replace=False)
        bits = int(rng.integers(1, 4))
        phi = PhaseVector(rng.integers(1, 2 ** bits + 1, size=m_hat), bits)

        scalar = abs(effective_gain(cascaded_coefficients(ch, selection), phi)) ** 2
        dense = abs(explicit_gain(ch, corr.j_sqrt, selection, phi)) ** 2
        assert scalar == pytest.approx(dense, rel=1e-10, abs=1e-300)
