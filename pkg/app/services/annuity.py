"""
Investment Annuities
"""
from app.core.exceptions import ConfigurationError


def annualize_cost(capex: float, lifetime_years: int, annual_rate: float) -> float:
    """Equivalent yearly payment: capex*r / (1 - (1+r)^-L), or capex/L when r = 0"""
    if lifetime_years < 1:
        raise ConfigurationError(f"lifetime must be at least one year (got {lifetime_years})")
    if annual_rate < 0:
        raise ConfigurationError(f"discount rate must be >= 0 (got {annual_rate})")
    if annual_rate == 0.0:
        return capex / lifetime_years
    return capex * annual_rate / (1.0 - (1.0 + annual_rate) ** (-lifetime_years))
