"""Seedable geometric Brownian motion panels and the nested one-step panel.

Every path owns a counter-based random stream keyed by its index, so panels are
bit-identical for a given seed no matter how generation is scheduled. Nested
draws live in a disjoint stream range and never reuse outer-path randomness.
"""

from dataclasses import dataclass

import numpy as np

from .validation import check_panel, check_positive_int

# Stream ids >= this belong to nested sub-simulations; outer paths use ids < 2**32.
NESTED_STREAM_OFFSET = 2**32


def rng_stream(seed, stream_id):
    """Independent reproducible generator for (seed, stream_id), Philox-backed."""
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(stream_id,))
    return np.random.Generator(np.random.Philox(ss))


@dataclass(frozen=True)
class GbmParams:
    """Geometric Brownian motion step parameters, already scaled by the time step.

    drift is the per-step exponent contribution (e.g. rate * step) and vol the
    per-step volatility (e.g. sigma * sqrt(step)); the simulator has no separate
    time-step argument.
    """

    start: float
    drift: float
    vol: float
    antithetic: bool = False

    def __post_init__(self):
        if not np.isfinite(self.start) or self.start <= 0.0:
            raise ValueError(f"start must be positive, got {self.start}")
        if not np.isfinite(self.drift):
            raise ValueError("drift must be finite")
        if not np.isfinite(self.vol) or self.vol < 0.0:
            raise ValueError(f"vol must be nonnegative, got {self.vol}")

    def step_factors(self, normals):
        """Multiplicative one-step growth factors for an array of normal draws."""
        return np.exp((self.drift - 0.5 * self.vol**2) + self.vol * normals)


def _pair_normals(params, n_path, n_steps, seed):
    """Normals per path; under antithetic, path 2m+1 negates the draws of path 2m."""
    normals = np.empty((n_path, n_steps))
    if params.antithetic:
        if n_path % 2 != 0:
            raise ValueError(f"antithetic sampling needs an even path count, got {n_path}")
        for m in range(n_path // 2):
            w = rng_stream(seed, 2 * m).standard_normal(n_steps)
            normals[2 * m] = w
            normals[2 * m + 1] = -w
    else:
        for i in range(n_path):
            normals[i] = rng_stream(seed, i).standard_normal(n_steps)
    return normals


def gbm_paths(params, n_dec, n_path, seed):
    """Simulate a GBM path panel of shape [n_path, 1, n_dec].

    Entry [i, 0, k] is the state at epoch k on path i, with [i, 0, 0] equal to
    params.start. Identical (params, n_dec, n_path, seed) give a bit-identical
    panel on every run.
    """
    n_dec = check_positive_int(n_dec, "n_dec", minimum=2)
    n_path = check_positive_int(n_path, "n_path")
    normals = _pair_normals(params, n_path, n_dec - 1, seed)
    factors = params.step_factors(normals)
    data = np.empty((n_path, 1, n_dec))
    data[:, 0, 0] = params.start
    # sequential products keep nested one-step states bit-identical to realized ones
    for k in range(n_dec - 1):
        data[:, 0, k + 1] = data[:, 0, k] * factors[:, k]
    data.setflags(write=False)
    return data


def nested_gbm(paths, params, n_subsim, seed):
    """One-step sub-simulations from every panel state before the horizon.

    Returns an array of shape [n_subsim, dim, n_path, n_dec - 1] whose entry
    [i, j, k, l] is a fresh GBM step from paths[k, j, l]. The draws use stream
    ids disjoint from the ones gbm_paths consumes, so the nested panel is
    independent of the outer panel even under the same seed.
    """
    paths = check_panel(paths)
    n_subsim = check_positive_int(n_subsim, "n_subsim")
    n_path, dim, n_dec = paths.shape
    if dim != 1:
        raise ValueError(f"built-in GBM nesting supports dim=1 panels, got dim={dim}")
    if params.antithetic and n_subsim % 2 != 0:
        raise ValueError(f"antithetic sampling needs an even n_subsim, got {n_subsim}")
    n_steps = n_dec - 1
    out = np.empty((n_subsim, 1, n_path, n_steps))
    for k in range(n_path):
        gen = rng_stream(seed, NESTED_STREAM_OFFSET + k)
        if params.antithetic:
            w_half = gen.standard_normal((n_subsim // 2, n_steps))
            w = np.empty((n_subsim, n_steps))
            w[0::2] = w_half
            w[1::2] = -w_half
        else:
            w = gen.standard_normal((n_subsim, n_steps))
        out[:, 0, k, :] = params.step_factors(w) * paths[k, 0, :n_steps]
    out.setflags(write=False)
    return out


# ---------------------------------------------------------------------------
# Panel persistence: header (n_path, dim, n_dec) then row-major [i][j][k] values.
# Binary files use little-endian int64/float64; CSV files put the header on the
# first line and one comma-separated line of n_dec values per (path, component).
# ---------------------------------------------------------------------------

def save_panel(path, panel):
    """Write a path panel to ``path``; '.csv' selects text, anything else binary."""
    panel = check_panel(panel)
    if str(path).endswith(".csv"):
        _save_panel_csv(path, panel)
    else:
        _save_panel_bin(path, panel)


def load_panel(path):
    """Read a panel written by save_panel."""
    if str(path).endswith(".csv"):
        return _load_panel_csv(path)
    return _load_panel_bin(path)


def _save_panel_bin(path, panel):
    with open(path, "wb") as fh:
        np.asarray(panel.shape, dtype="<i8").tofile(fh)
        np.ascontiguousarray(panel, dtype="<f8").tofile(fh)


def _load_panel_bin(path):
    with open(path, "rb") as fh:
        header = np.fromfile(fh, dtype="<i8", count=3)
        if header.size != 3:
            raise ValueError(f"truncated panel header in {path}")
        n_path, dim, n_dec = (int(v) for v in header)
        data = np.fromfile(fh, dtype="<f8", count=n_path * dim * n_dec)
    if data.size != n_path * dim * n_dec:
        raise ValueError(f"truncated panel data in {path}")
    return data.reshape(n_path, dim, n_dec)


def _save_panel_csv(path, panel):
    n_path, dim, n_dec = panel.shape
    lines = [f"{n_path},{dim},{n_dec}"]
    for i in range(n_path):
        for j in range(dim):
            lines.append(",".join(f"{v:.17g}" for v in panel[i, j]))
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def _load_panel_csv(path):
    with open(path) as fh:
        header = fh.readline().strip()
        try:
            n_path, dim, n_dec = (int(v) for v in header.split(","))
        except ValueError:
            raise ValueError(f"bad panel header {header!r} in {path}") from None
        data = np.empty((n_path, dim, n_dec))
        for i in range(n_path):
            for j in range(dim):
                row = fh.readline().split(",")
                if len(row) != n_dec:
                    raise ValueError(f"bad panel row length in {path}")
                data[i, j] = [float(v) for v in row]
    return data
