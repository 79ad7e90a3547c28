import numpy as np

SPEED_OF_LIGHT_M_S = 299_792_458.0


def dbm_to_watt(dbm: float) -> float:
    return float(10.0 ** ((dbm - 30.0) / 10.0))


def watt_to_dbm(watt: float) -> float:
    return float(10.0 * np.log10(watt) + 30.0)


def db_to_linear(db: float) -> float:
    return float(10.0 ** (db / 10.0))


def linear_to_db(linear: float) -> float:
    return float(10.0 * np.log10(linear))


def wavelength_m(fc_hz: float) -> float:
    return SPEED_OF_LIGHT_M_S / fc_hz
