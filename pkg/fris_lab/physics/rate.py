import numpy as np

from models.link import RadioParams
from models.solution import PhaseVector
from utils.errors import InvalidInputError


def effective_gain(c: np.ndarray, phi: PhaseVector) -> complex:
    """Sum of c_k * exp(j phi_k)."""
    c = np.asarray(c, dtype=complex)
    if c.shape != (len(phi),):
        raise InvalidInputError(f"{c.size} coefficients but {len(phi)} phases")
    return complex(np.sum(c * np.exp(1j * phi.angles)))


def achievable_rate(c: np.ndarray, phi: PhaseVector, radio: RadioParams) -> float:
    """log2(1 + P |gain|^2 / sigma^2) in bits/s/Hz."""
    gain = effective_gain(c, phi)
    return float(np.log2(1.0 + radio.snr_scale * abs(gain) ** 2))


def batch_rates(c: np.ndarray, levels: np.ndarray, bits: int, radio: RadioParams) -> np.ndarray:
    """Rates of many candidates at once; row a pairs coefficients c[a] with phase levels[a]."""
    angles = levels * (2.0 * np.pi / 2 ** bits)
    gains = np.sum(c * np.exp(1j * angles), axis=1)
    return np.log2(1.0 + radio.snr_scale * np.abs(gains) ** 2)


def rate_upper_bound(c: np.ndarray, radio: RadioParams) -> float:
    """Continuous co-phasing bound log2(1 + P (sum |c_k|)^2 / sigma^2)."""
    return float(np.log2(1.0 + radio.snr_scale * float(np.sum(np.abs(c))) ** 2))
