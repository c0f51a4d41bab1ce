"""Dict-based wrapper around the _rsdlab extension.

Game specs, profiles, technologies and reports are plain dicts mirroring the
CLI's JSON schemas. Rationals are exact strings like "1/3"; use
fractions.Fraction to do arithmetic on them.
"""

import json

try:
    from . import _rsdlab as _core
except ImportError:  # in-tree builds put the extension next to the package
    import _rsdlab as _core

__version__ = _core.__version__

InputError = _core.InputError
UnsupportedError = _core.UnsupportedError
ResourceLimitError = _core.ResourceLimitError


def _d(text):
    return json.loads(text)


def _s(obj):
    return json.dumps(obj)


def check_sc(tech, x):
    """Exact consistency certificate for one technology at value vector x."""
    return _d(_core.check_sc(_s(tech), _s(x)))


def check_sc_statistical(tech, x, samples=100000, confidence=0.99, seed=1):
    return _d(_core.check_sc_statistical(_s(tech), _s(x), samples, confidence, seed))


def measure_delta(space, xs):
    """Worst consistency slack over a list of technologies and value vectors."""
    return _d(_core.measure_delta(_s(space), _s(xs)))


def delta_poa_bound(delta):
    """Welfare-ratio bound 1 + 1/(1-delta)^2 as an exact rational string."""
    return _core.delta_poa_bound(str(delta))


def expected_utilities(spec, profile, exact=True, samples=100000, seed=1, workers=1):
    return _d(_core.expected_utilities(_s(spec), _s(profile), exact, samples, seed, workers))


def price_of_anarchy(spec):
    """Exact pure-equilibrium scan with optimum, ratio and noise-floor check."""
    return _d(_core.price_of_anarchy(_s(spec)))


def smoothness(spec):
    return _d(_core.smoothness(_s(spec)))


def ic_audit(spec, profile):
    """Obedience audit over every reachable decision point (unconstrained games)."""
    return _d(_core.ic_audit(_s(spec), _s(profile)))


def deviation_gap(spec, s, s_star, firm, delta="0", firm_slot=None):
    slot = -1 if firm_slot is None else firm_slot
    return _d(_core.deviation_gap(_s(spec), _s(s), _s(s_star), firm, str(delta), slot))


def check_ne_mc(spec, profile, samples=100000, seed=1, epsilon=-1.0):
    return _d(_core.check_ne_mc(_s(spec), _s(profile), samples, seed, epsilon))


def tight_poa(n, mc_samples=0, seed=0):
    """Shared-signal instance family whose welfare ratio climbs toward 2."""
    return _d(_core.tight_poa(n, mc_samples, seed))


def linear_poa(n):
    """Dominant-strategy family whose welfare ratio grows linearly in n."""
    return _d(_core.linear_poa(n))


def deviation_counterexample(n=2, phi="1/2"):
    return _d(_core.deviation_counterexample(n, str(phi)))


def random_sc_game(n, m, seed):
    """Random game certified exactly consistent, with spec and delta* stats."""
    return _d(_core.random_sc_game(n, m, seed))


def obedience_suite():
    return _d(_core.obedience_suite())


def obedience_violations():
    return _d(_core.obedience_violations())


def rank_distance(kind, a, b):
    """Distance between two 1-based rankings; kinds as in the JSON schemas."""
    return _core.rank_distance(kind, _s(a), _s(b))


def inversion_monotone(kind, m):
    return _d(_core.inversion_monotone(kind, m))
