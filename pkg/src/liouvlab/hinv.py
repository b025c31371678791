"""Harmonic inversion of uniformly sampled time traces into complex
exponential modes, via window-based filter diagonalization.

A trace y_n sampled at t_n = t0 + n*dt is modeled as
y_n = sum_k c_k exp(lambda_k t_n). The signal is projected onto a small
Fourier-filtered basis confined to a frequency window, which turns the
extraction into a generalized eigenproblem between two small matrices
built from the signal. Frequencies are not limited by the observation
period as they would be with a plain Fourier transform, which matters for
strongly decaying signals. From N samples at most ~N/4 complex pairs
(c_k, lambda_k) are informationally available, and that bound is enforced.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

MIN_SAMPLES = 8

# relative singular value cutoff regularizing the small eigenproblem
SVD_RCOND = 1e-12


@dataclass(frozen=True)
class TimeTrace:
    """Uniformly sampled expectation values with acquisition metadata."""

    values: np.ndarray
    t0: int = 0
    dt: float = 1.0
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        values = np.asarray(self.values)
        object.__setattr__(self, "values", values)
        if values.ndim != 1 or len(values) < MIN_SAMPLES:
            raise ValueError(f"need a 1-D trace of at least {MIN_SAMPLES} samples")
        if self.dt <= 0:
            raise ValueError("dt must be positive")

    @property
    def times(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(len(self.values))

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class Mode:
    """One extracted complex exponential: amplitude * exp(lam * t)."""

    lam: complex
    amplitude: complex
    error: float = 0.0

    def __post_init__(self):
        if not (np.isfinite(self.error) and self.error >= 0):
            raise ValueError(f"invalid error metric {self.error}")
        if not (np.isfinite(self.lam) and np.isfinite(self.amplitude)):
            raise ValueError("non-finite mode parameters")


def default_window(dt: float) -> tuple[float, float]:
    """Low-frequency half of the Nyquist band, where decay-dominated
    signals concentrate."""
    return (-np.pi / (2.0 * dt), np.pi / (2.0 * dt))


def harmonic_inversion(
    trace: TimeTrace,
    window: tuple[float, float] | None = None,
    max_modes: int | None = None,
) -> list[Mode]:
    """Decompose a trace into modes with Im(lambda) inside the window.

    Modes are returned sorted by |amplitude|, at most max_modes of them
    (default and hard cap: len(trace) // 4). Each mode carries the
    residual of its eigenpair in the small generalized eigenproblem as
    error metric. An ill-conditioned filter basis raises; a window without
    signal content yields an empty list.
    """
    y = np.asarray(trace.values, dtype=complex)
    n = len(y)
    cap = n // 4
    if max_modes is None:
        max_modes = cap
    if max_modes < 1:
        raise ValueError("max_modes must be at least 1")
    if max_modes > cap:
        raise ValueError(
            f"max_modes={max_modes} exceeds the information bound "
            f"len/4={cap} for {n} samples"
        )
    dt = trace.dt
    if window is None:
        window = default_window(dt)
    wmin, wmax = window
    nyq = np.pi / dt
    if wmin >= wmax or wmin < -nyq - 1e-12 or wmax > nyq + 1e-12:
        raise ValueError(f"window {window} outside the Nyquist band (+-{nyq})")

    if np.max(np.abs(y)) == 0.0:
        return []

    m = (n - 2) // 2  # signal index reaches 2m + 1 <= n - 1
    # basis density per the window's share of the information content
    rho = (m + 1) * (wmax - wmin) * dt / (2.0 * np.pi)
    n_basis = min(m + 1, max(int(np.ceil(rho)) + 4, 8))
    # filter frequencies strictly inside the window
    phis = np.linspace(wmin * dt, wmax * dt, n_basis + 2)[1:-1]
    z = np.exp(1j * phis)

    steps = -np.arange(m + 1)
    basis = z[None, :] ** steps[:, None]  # (m+1, n_basis), entries z_j^-n
    h0 = scipy.linalg.hankel(y[: m + 1], y[m : 2 * m + 1])
    h1 = scipy.linalg.hankel(y[1 : m + 2], y[m + 1 : 2 * m + 2])
    u0 = basis.T @ h0 @ basis
    u1 = basis.T @ h1 @ basis

    u0_pinv = np.linalg.pinv(u0, rcond=SVD_RCOND)
    evals, evecs = np.linalg.eig(u0_pinv @ u1)
    if not np.all(np.isfinite(evals)):
        raise ValueError("filter basis is too ill-conditioned for this trace")

    lams = []
    errors = []
    scale = max(np.linalg.norm(u1), np.linalg.norm(u0))
    for u, b in zip(evals, evecs.T):
        # decay past resolution within one sample step is pure noise
        if abs(u) < 1e-6:
            continue
        lam = np.log(u) / dt
        if not (wmin - 1e-9 <= lam.imag <= wmax + 1e-9):
            continue
        resid = np.linalg.norm(u1 @ b - u * (u0 @ b))
        denom = max(abs(u) * np.linalg.norm(u0 @ b), 1e-300)
        err = resid / denom
        # pairs whose residual rivals the matrix scale carry no information
        if scale > 0 and np.linalg.norm(u0 @ b) < SVD_RCOND * scale:
            continue
        lams.append(lam)
        errors.append(err)
    if not lams:
        return []

    lams = np.array(lams)
    errors = np.array(errors)
    # drop near-duplicate eigenvalues (degenerate copies from the filter basis)
    keep = []
    for i in np.argsort(errors):
        if all(abs(lams[i] - lams[j]) > 1e-9 for j in keep):
            keep.append(i)
    lams = lams[keep]
    errors = errors[keep]

    amps = _least_squares_amplitudes(y, lams, dt)
    order = np.argsort(-np.abs(amps))[:max_modes]
    return [
        Mode(lam=complex(lams[i]), amplitude=complex(amps[i]), error=float(errors[i]))
        for i in order
    ]


def _least_squares_amplitudes(y: np.ndarray, lams: np.ndarray, dt: float) -> np.ndarray:
    steps = np.arange(len(y))
    design = np.exp(np.outer(steps * dt, lams))
    # rcond truncation keeps nearly collinear mode pairs from trading huge
    # canceling amplitudes
    amps, *_ = np.linalg.lstsq(design, y, rcond=1e-8)
    return amps


def filter_spurious(
    modes: list[Mode],
    amp_floor: float | None = None,
    err_ceiling: float = 0.2,
    positivity_tol: float = 1e-6,
) -> list[Mode]:
    """Keep credible modes: amplitude above the floor, error metric below
    the ceiling, and no growth beyond the positivity tolerance.

    amp_floor defaults to 2% of the largest amplitude present.
    """
    if amp_floor is not None and amp_floor < 0 or err_ceiling < 0:
        raise ValueError("thresholds must be nonnegative")
    if not modes:
        return []
    credible = [
        m for m in modes if m.error <= err_ceiling and m.lam.real <= positivity_tol
    ]
    if not credible:
        return []
    if amp_floor is None:
        # the floor is anchored to credible modes so that high-amplitude
        # noise artifacts cannot mask the physical ones
        amp_floor = 0.02 * max(abs(m.amplitude) for m in credible)
    return [m for m in credible if abs(m.amplitude) >= amp_floor]


def reconstruct(modes: list[Mode], times: np.ndarray, meta: dict | None = None) -> TimeTrace:
    """Evaluate sum_k c_k exp(lambda_k t) on a uniform grid."""
    times = np.asarray(times, dtype=float)
    values = np.zeros(len(times), dtype=complex)
    for m in modes:
        values += m.amplitude * np.exp(m.lam * times)
    dt = float(times[1] - times[0]) if len(times) > 1 else 1.0
    return TimeTrace(values=values, t0=int(round(times[0])), dt=dt, meta=meta or {})


def fit_single_exponential(trace: TimeTrace) -> Mode:
    """Cross-check fit of a real decaying exponential c * exp(lam * t).

    Least squares over (c, lam) both real, initialized by log-linear
    regression. A best fit that grows is flagged as an error; constant
    signals come out at lam = 0.
    """
    y = np.asarray(trace.values, dtype=float)
    t = trace.times
    pos = y > 0
    if pos.sum() < max(3, len(y) // 2):
        raise ValueError("signal is not positive on a majority of samples")
    slope, logc = np.polyfit(t[pos], np.log(y[pos]), 1)
    from scipy.optimize import curve_fit

    def model(tt, c, lam):
        return c * np.exp(lam * tt)

    try:
        popt, _ = curve_fit(
            model, t, y, p0=[np.exp(logc), slope], maxfev=10000
        )
    except RuntimeError as exc:
        raise ValueError(f"exponential fit did not converge: {exc}") from exc
    c, lam = popt
    if lam > 1e-8:
        raise ValueError(f"signal does not decay (fitted rate {lam})")
    resid = float(np.sqrt(np.mean((model(t, c, lam) - y) ** 2)))
    return Mode(lam=complex(lam), amplitude=complex(c), error=resid)


# ---------------------------------------------------------------------------
# Columnar text input/output.
# ---------------------------------------------------------------------------


def write_trace(path, trace: TimeTrace):
    """Write "t value" lines under '# key=value' metadata headers."""
    with open(path, "w") as fh:
        fh.write(f"# t0={trace.t0}\n")
        fh.write(f"# dt={trace.dt!r}\n")
        for key, value in trace.meta.items():
            fh.write(f"# {key}={value}\n")
        fh.write("# columns: t value\n")
        for t, v in zip(trace.times, trace.values):
            fh.write(f"{t!r} {np.real(v)!r}\n")


def read_trace(path) -> TimeTrace:
    meta: dict = {}
    values = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if "=" in body:
                    key, _, value = body.partition("=")
                    meta[key.strip()] = value.strip()
                continue
            _, value = line.split()
            values.append(float(value))
    t0 = int(meta.pop("t0", 0))
    dt = float(meta.pop("dt", 1.0))
    return TimeTrace(values=np.array(values), t0=t0, dt=dt, meta=meta)


def write_modes(path, modes: list[Mode], header: dict | None = None):
    """Records (re lam, im lam, re c, im c, error) per mode."""
    with open(path, "w") as fh:
        for key, value in (header or {}).items():
            fh.write(f"# {key}={value}\n")
        fh.write("# columns: re_lambda im_lambda re_c im_c error\n")
        for m in modes:
            fh.write(
                f"{m.lam.real!r} {m.lam.imag!r} "
                f"{m.amplitude.real!r} {m.amplitude.imag!r} {m.error!r}\n"
            )


def read_modes(path) -> list[Mode]:
    modes = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            rl, il, rc, ic, err = (float(v) for v in line.split())
            modes.append(Mode(lam=rl + 1j * il, amplitude=rc + 1j * ic, error=err))
    return modes
