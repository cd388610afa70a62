"""
Time-periodic quadratic Hamiltonians.

The Hamiltonian is ``H(t) = x^T S(t) x / 2`` with ``x = (q_1..q_N, p_1..p_N)``
and the symmetric matrix

    S(t) = [[k_qq(t),   k_qp(t)],
            [k_qp(t)^T, k_pp(t)]]

given as finite Fourier series of period ``T``. The classical (and
Heisenberg) equations of motion are ``dx/dt = Pi(t) x`` with
``Pi = J S`` and ``J = [[0, I], [-I, 0]]``.
"""

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ConfigurationError

DEFAULT_STEPS_PER_PERIOD = 4096
_SYMMETRY_TOL = 1e-12
BLOCK_NAMES = ("k_qq", "k_pp", "k_qp")


def symplectic_form(n_modes):
    """The ``2N x 2N`` matrix ``J = [[0, I], [-I, 0]]``."""
    eye = np.eye(n_modes)
    zero = np.zeros((n_modes, n_modes))
    return np.block([[zero, eye], [-eye, zero]])


def _frozen(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class Harmonic:
    """One term ``cos_ * cos(k w t) + sin_ * sin(k w t)`` with ``w = 2 pi / T``."""

    index: int
    cos: np.ndarray
    sin: np.ndarray


@dataclass(frozen=True)
class FourierSeries:
    """Matrix-valued truncated Fourier series."""

    constant: np.ndarray
    harmonics: tuple = ()

    def __call__(self, t, period):
        t = np.asarray(t, dtype=float)
        out = np.broadcast_to(self.constant, t.shape + self.constant.shape).copy()
        phase = 2.0 * np.pi * np.mod(t, period) / period
        for h in self.harmonics:
            c = np.cos(h.index * phase)[..., None, None]
            s = np.sin(h.index * phase)[..., None, None]
            out += c * h.cos + s * h.sin
        return out

    def to_dict(self):
        return {
            "constant": self.constant.tolist(),
            "harmonics": [
                {"harmonic": h.index, "cos": h.cos.tolist(), "sin": h.sin.tolist()}
                for h in self.harmonics
            ],
        }


@dataclass(frozen=True)
class PeriodicConfiguration:
    """Validated, immutable description of ``S(t)``; build with :func:`build_configuration`."""

    n_modes: int
    period: float
    k_qq: FourierSeries
    k_pp: FourierSeries
    k_qp: FourierSeries
    steps_per_period: int = DEFAULT_STEPS_PER_PERIOD
    _J: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_J", _frozen(symplectic_form(self.n_modes)))

    @property
    def J(self):
        return self._J

    def hamiltonian_matrix(self, t):
        """``S(t)``; vectorized over ``t`` (result shape ``t.shape + (2N, 2N)``)."""
        qq = self.k_qq(t, self.period)
        pp = self.k_pp(t, self.period)
        qp = self.k_qp(t, self.period)
        top = np.concatenate([qq, qp], axis=-1)
        bottom = np.concatenate([np.swapaxes(qp, -1, -2), pp], axis=-1)
        return np.concatenate([top, bottom], axis=-2)

    def to_dict(self):
        out = {
            "n_modes": self.n_modes,
            "period": self.period,
            "steps_per_period": self.steps_per_period,
        }
        for name in BLOCK_NAMES:
            out[name] = getattr(self, name).to_dict()
        return out


def _as_series(raw, n, name):
    if raw is None:
        return np.zeros((n, n)), []
    if isinstance(raw, FourierSeries):
        raw = raw.to_dict()
    if not isinstance(raw, dict):
        # bare matrix means a constant block
        raw = {"constant": raw}
    if "constant" not in raw:
        raise ConfigurationError(f"{name}: missing field 'constant'")

    def matrix(value, where):
        a = np.asarray(value, dtype=float)
        if a.shape != (n, n):
            raise ConfigurationError(
                f"{where}: expected a {n}x{n} matrix, got shape {a.shape}"
            )
        if not np.all(np.isfinite(a)):
            raise ConfigurationError(f"{where}: non-finite entries")
        return a

    constant = matrix(raw["constant"], f"{name}.constant")
    harmonics = []
    seen = set()
    for i, h in enumerate(raw.get("harmonics", [])):
        where = f"{name}.harmonics[{i}]"
        try:
            k = h["harmonic"]
        except (KeyError, TypeError):
            raise ConfigurationError(f"{where}: missing field 'harmonic'") from None
        if int(k) != k or k < 1:
            raise ConfigurationError(f"{where}: harmonic index must be a positive integer")
        if k in seen:
            raise ConfigurationError(f"{where}: duplicate harmonic index {k}")
        seen.add(int(k))
        zero = np.zeros((n, n))
        cos = matrix(h.get("cos", zero), f"{where}.cos")
        sin = matrix(h.get("sin", zero), f"{where}.sin")
        harmonics.append((int(k), cos, sin))
    harmonics.sort(key=lambda item: item[0])
    return constant, harmonics


def _symmetrized(a, where):
    scale = max(np.abs(a).max(), 1.0)
    if np.abs(a - a.T).max() > _SYMMETRY_TOL * scale:
        raise ConfigurationError(f"{where} is not symmetric")
    return 0.5 * (a + a.T)


def build_configuration(n_modes, period, s_blocks, steps_per_period=DEFAULT_STEPS_PER_PERIOD):
    """Validate Fourier data and return a :class:`PeriodicConfiguration`.

    Parameters
    ----------
    n_modes : int
        Number of oscillators ``N >= 1``.
    period : float
        Drive period ``T > 0``.
    s_blocks : dict
        Keys ``k_qq``, ``k_pp`` and optionally ``k_qp``. Each value is either
        a constant ``N x N`` matrix, a :class:`FourierSeries`, or a mapping
        ``{"constant": M0, "harmonics": [{"harmonic": k, "cos": Mc, "sin": Ms}, ...]}``.
    steps_per_period : int
        Number of fixed RK4 steps per period.

    Raises
    ------
    ConfigurationError
        Wrong shapes, non-finite data, asymmetric ``k_qq``/``k_pp``,
        non-positive period or step count.
    """
    if int(n_modes) != n_modes or n_modes < 1:
        raise ConfigurationError(f"n_modes must be a positive integer, got {n_modes!r}")
    n = int(n_modes)
    try:
        period = float(period)
    except (TypeError, ValueError):
        raise ConfigurationError(f"period must be a number, got {period!r}") from None
    if not np.isfinite(period) or period <= 0:
        raise ConfigurationError(f"period must be positive, got {period!r}")
    if int(steps_per_period) != steps_per_period or steps_per_period < 1:
        raise ConfigurationError("steps_per_period must be a positive integer")
    unknown = set(s_blocks) - set(BLOCK_NAMES)
    if unknown:
        raise ConfigurationError(f"unknown blocks: {sorted(unknown)}")
    for name in ("k_qq", "k_pp"):
        if name not in s_blocks:
            raise ConfigurationError(f"missing block {name!r}")

    series = {}
    for name in BLOCK_NAMES:
        constant, harmonics = _as_series(s_blocks.get(name), n, name)
        if name != "k_qp":
            constant = _symmetrized(constant, f"{name}.constant")
            harmonics = [
                (k, _symmetrized(c, f"{name}[{k}].cos"), _symmetrized(s, f"{name}[{k}].sin"))
                for k, c, s in harmonics
            ]
        series[name] = FourierSeries(
            _frozen(constant),
            tuple(Harmonic(k, _frozen(c), _frozen(s)) for k, c, s in harmonics),
        )
    return PeriodicConfiguration(n, period, steps_per_period=int(steps_per_period), **series)


def evaluate_pi(config, t):
    """Coefficient matrix ``Pi(t) = J S(t)`` of ``dx/dt = Pi(t) x``.

    Vectorized over ``t``. The phase is reduced modulo ``T`` before the
    Fourier sum, so shifts by whole periods agree to rounding.
    """
    return config.J @ config.hamiltonian_matrix(t)


def preset_mathieu_pair(a1, a2, q_drive, coupling, period, steps_per_period=DEFAULT_STEPS_PER_PERIOD):
    """Two unit-mass oscillators with a common Mathieu drive.

    ``k_qq(t) = diag(a1, a2) - 2 q_drive cos(2 pi t / T) I + coupling * sigma_x``,
    ``k_pp = I``, ``k_qp = 0``.
    """
    eye = np.eye(2)
    blocks = {
        "k_qq": {
            "constant": [[a1, coupling], [coupling, a2]],
            "harmonics": [{"harmonic": 1, "cos": (-2.0 * q_drive * eye).tolist()}],
        },
        "k_pp": eye,
    }
    return build_configuration(2, period, blocks, steps_per_period)


def is_time_reversal_symmetric(config):
    """True when ``S(-t) = S(t)`` with no position-momentum coupling.

    For such drives the Floquet vectors at ``t = 0`` can be taken with real
    position and imaginary momentum components.
    """
    if np.any(config.k_qp.constant) or config.k_qp.harmonics:
        return False
    return all(
        not np.any(h.sin) for s in (config.k_qq, config.k_pp) for h in s.harmonics
    )


def config_from_dict(data):
    """Build a configuration from the file schema; raises :class:`ConfigurationError`."""
    if not isinstance(data, dict):
        raise ConfigurationError("configuration document must be a mapping")
    for key in ("n_modes", "period"):
        if key not in data:
            raise ConfigurationError(f"missing field {key!r}")
    blocks = {k: data[k] for k in BLOCK_NAMES if k in data}
    return build_configuration(
        data["n_modes"],
        data["period"],
        blocks,
        data.get("steps_per_period", DEFAULT_STEPS_PER_PERIOD),
    )


def load_configuration(path):
    """Read a JSON configuration file."""
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"{path}: not valid JSON ({exc})") from None
    return config_from_dict(data)


def save_configuration(config, path):
    Path(path).write_text(json.dumps(config.to_dict(), indent=2) + "\n")
