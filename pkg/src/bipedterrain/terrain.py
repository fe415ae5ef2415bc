"""Procedural training terrains rasterized as heightfields.

Five generation modes (hills, edges, squares, quantized hills, stairs) plus
flat ground, each scaled by a curriculum intensity factor in [0, 1].  All
generation is deterministic in (spec, size, resolution, intensity).
"""

from __future__ import annotations

import functools
import json
import re
from dataclasses import dataclass, field, replace

import numpy as np

DEFAULT_RESOLUTION = 0.05  # m per cell
DEFAULT_SIZE = (400, 400)  # (H, W) cells, 20 m x 20 m at default resolution

MODES = ("hills", "edges", "squares", "quantized_hills", "stairs", "flat")

# Paper parameter ranges per mode.
EDGE_LEVEL_RANGE = (0.15, 0.25)
SQUARE_SIDE_RANGE = (0.4, 0.6)
SQUARE_HEIGHT_MAX = 0.4
QUANT_STEP_RANGE = (0.12, 0.18)
STAIR_RUN_RANGE = (0.3, 0.4)
STAIR_RISE_RANGE = (0.1, 0.22)
HILLS_MAX_HEIGHT = 0.8


# ---------------------------------------------------------------------------
# Gradient-lattice (Perlin) noise
# ---------------------------------------------------------------------------

_N_GRADS = 8
_angles = 2.0 * np.pi * np.arange(_N_GRADS) / _N_GRADS
_GRADS_X = np.cos(_angles)
_GRADS_Y = np.sin(_angles)
del _angles

# With unit gradients the 2D noise magnitude is bounded by sqrt(2)/2;
# rescaling by sqrt(2) stretches the range to [-1, 1].
_RANGE_SCALE = np.sqrt(2.0)


@functools.lru_cache(maxsize=256)
def _perm_table(seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    perm = rng.permutation(256)
    return np.concatenate([perm, perm])


def _fade(t):
    return t * t * t * (t * (t * 6.0 - 15.0) + 10.0)


def perlin2(x, y, seed: int, frequency: float = 1.0):
    """Gradient-lattice noise in [-1, 1] at (x, y) scaled by `frequency`.

    Accepts scalars or broadcastable arrays.  Values vanish at lattice
    points of the scaled coordinates and are deterministic in
    (x, y, seed, frequency).
    """
    if frequency <= 0.0:
        raise ValueError(f"frequency must be > 0, got {frequency}")
    perm = _perm_table(int(seed))

    xs = np.asarray(x, dtype=np.float64) * frequency
    ys = np.asarray(y, dtype=np.float64) * frequency
    xs, ys = np.broadcast_arrays(xs, ys)

    xi = np.floor(xs).astype(np.int64)
    yi = np.floor(ys).astype(np.int64)
    xf = xs - xi
    yf = ys - yi

    def corner_dot(ix, iy, dx, dy):
        h = perm[perm[ix & 255] + (iy & 255)] & (_N_GRADS - 1)
        return _GRADS_X[h] * dx + _GRADS_Y[h] * dy

    n00 = corner_dot(xi, yi, xf, yf)
    n10 = corner_dot(xi + 1, yi, xf - 1.0, yf)
    n01 = corner_dot(xi, yi + 1, xf, yf - 1.0)
    n11 = corner_dot(xi + 1, yi + 1, xf - 1.0, yf - 1.0)

    u = _fade(xf)
    v = _fade(yf)
    nx0 = n00 + u * (n10 - n00)
    nx1 = n01 + u * (n11 - n01)
    value = np.clip((nx0 + v * (nx1 - nx0)) * _RANGE_SCALE, -1.0, 1.0)
    if np.isscalar(x) and np.isscalar(y):
        return float(value)
    return value


# ---------------------------------------------------------------------------
# Specs and curriculum
# ---------------------------------------------------------------------------


def _check_range(name: str, value: float, lo: float, hi: float) -> float:
    if not lo <= value <= hi:
        raise ValueError(f"{name} = {value} outside [{lo}, {hi}]")
    return float(value)


@dataclass(frozen=True)
class HillsParams:
    low_frequency: float = 0.15   # cycles per meter
    octave_ratio: float = 4.0     # high frequency = ratio * low frequency
    low_weight: float = 0.7
    high_weight: float = 0.3

    def validate(self):
        if self.low_frequency <= 0:
            raise ValueError(f"low_frequency = {self.low_frequency} must be > 0")
        if self.octave_ratio <= 0:
            raise ValueError(f"octave_ratio = {self.octave_ratio} must be > 0")


@dataclass(frozen=True)
class EdgesParams:
    level: float = 0.2
    frequency: float = 0.25

    def validate(self):
        _check_range("edges level", self.level, *EDGE_LEVEL_RANGE)
        if self.frequency <= 0:
            raise ValueError(f"frequency = {self.frequency} must be > 0")


@dataclass(frozen=True)
class SquaresParams:
    side: float = 0.5
    height_max: float = SQUARE_HEIGHT_MAX

    def validate(self):
        _check_range("squares side", self.side, *SQUARE_SIDE_RANGE)
        _check_range("squares height_max", self.height_max, 0.0, SQUARE_HEIGHT_MAX)


@dataclass(frozen=True)
class QuantizedHillsParams:
    step: float = 0.15
    hills: HillsParams = field(default_factory=HillsParams)

    def validate(self):
        _check_range("quantized_hills step", self.step, *QUANT_STEP_RANGE)
        self.hills.validate()


@dataclass(frozen=True)
class StairsParams:
    run: float = 0.35
    rise: float = 0.16
    count: int = 10
    landing: float = 1.0  # flat stretch between flights, meters

    def validate(self):
        _check_range("stairs run", self.run, *STAIR_RUN_RANGE)
        _check_range("stairs rise", self.rise, *STAIR_RISE_RANGE)
        if self.count < 1:
            raise ValueError(f"stairs count = {self.count} must be >= 1")
        if self.landing <= 0:
            raise ValueError(f"stairs landing = {self.landing} must be > 0")


@dataclass(frozen=True)
class FlatParams:
    def validate(self):
        pass


_PARAM_TYPES = {
    "hills": HillsParams,
    "edges": EdgesParams,
    "squares": SquaresParams,
    "quantized_hills": QuantizedHillsParams,
    "stairs": StairsParams,
    "flat": FlatParams,
}


@dataclass(frozen=True)
class TerrainSpec:
    mode: str
    seed: int
    params: object = None

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown terrain mode {self.mode!r}, expected one of {MODES}")
        if self.params is None:
            object.__setattr__(self, "params", _PARAM_TYPES[self.mode]())
        if not isinstance(self.params, _PARAM_TYPES[self.mode]):
            raise ValueError(f"params for mode {self.mode!r} must be {_PARAM_TYPES[self.mode].__name__}")
        self.params.validate()

    @classmethod
    def random(cls, mode: str, seed: int) -> "TerrainSpec":
        """Draw mode parameters uniformly from their allowed ranges."""
        rng = np.random.default_rng(seed)
        if mode == "hills":
            params = HillsParams()
        elif mode == "edges":
            params = EdgesParams(level=rng.uniform(*EDGE_LEVEL_RANGE))
        elif mode == "squares":
            params = SquaresParams(side=rng.uniform(*SQUARE_SIDE_RANGE))
        elif mode == "quantized_hills":
            params = QuantizedHillsParams(step=rng.uniform(*QUANT_STEP_RANGE))
        elif mode == "stairs":
            params = StairsParams(run=rng.uniform(*STAIR_RUN_RANGE), rise=rng.uniform(*STAIR_RISE_RANGE))
        elif mode == "flat":
            params = FlatParams()
        else:
            raise ValueError(f"unknown terrain mode {mode!r}")
        return cls(mode=mode, seed=seed, params=params)


@dataclass(frozen=True)
class CurriculumState:
    """Terrain intensity c_t plus the gait-reward regime switch c_r."""

    c_t: float = 0.0
    c_r: float = 1.0
    ramp_start_step: int = 0
    ramp_end_step: int = 1
    reward_switch_step: int = 0

    def __post_init__(self):
        if not 0.0 <= self.c_t <= 1.0:
            raise ValueError(f"c_t = {self.c_t} outside [0, 1]")
        if not 0.0 <= self.c_r <= 1.0:
            raise ValueError(f"c_r = {self.c_r} outside [0, 1]")
        if self.ramp_start_step > self.ramp_end_step:
            raise ValueError("ramp_start_step must be <= ramp_end_step")


def curriculum_step(state: CurriculumState, global_step: int) -> CurriculumState:
    """Advance the curriculum to `global_step`.

    c_t ramps linearly from 0 to 1 across [ramp_start, ramp_end] (a step
    function if the two coincide); c_r drops from 1 to 0 at the reward
    switch step.
    """
    if global_step < 0:
        raise ValueError(f"global_step must be >= 0, got {global_step}")
    span = state.ramp_end_step - state.ramp_start_step
    if span == 0:
        c_t = 1.0 if global_step >= state.ramp_start_step else 0.0
    else:
        c_t = float(np.clip((global_step - state.ramp_start_step) / span, 0.0, 1.0))
    c_r = 1.0 if global_step < state.reward_switch_step else 0.0
    return replace(state, c_t=c_t, c_r=c_r)


# ---------------------------------------------------------------------------
# Heightfield
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class HeightField:
    """Terrain elevation raster: heights[iy, ix] in meters at world position
    (origin + (ix, iy) * resolution)."""

    heights: np.ndarray
    resolution: float
    origin: np.ndarray = field(default_factory=lambda: np.zeros(2))

    def __post_init__(self):
        arr = np.asarray(self.heights, dtype=np.float64)
        if arr.ndim != 2:
            raise ValueError(f"heights must be 2-D, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("heights contain non-finite values")
        arr.flags.writeable = False
        object.__setattr__(self, "heights", arr)
        if self.resolution <= 0:
            raise ValueError(f"resolution = {self.resolution} must be > 0")
        origin = np.asarray(self.origin, dtype=np.float64)
        if origin.shape != (2,):
            raise ValueError(f"origin must have shape (2,), got {origin.shape}")
        origin.flags.writeable = False
        object.__setattr__(self, "origin", origin)

    @property
    def shape(self):
        return self.heights.shape

    def extent(self):
        """((x_min, x_max), (y_min, y_max)) of the cell-center grid."""
        h, w = self.heights.shape
        x0, y0 = self.origin
        return (
            (x0, x0 + (w - 1) * self.resolution),
            (y0, y0 + (h - 1) * self.resolution),
        )

    def contains(self, x, y) -> bool:
        (x_min, x_max), (y_min, y_max) = self.extent()
        return bool(np.all((x >= x_min) & (x <= x_max) & (y >= y_min) & (y <= y_max)))


def height_at(fld: HeightField, x, y):
    """Bilinear height lookup at world (x, y); clamps to the nearest edge
    outside the extent.  Accepts scalars or arrays."""
    xs = (np.asarray(x, dtype=np.float64) - fld.origin[0]) / fld.resolution
    ys = (np.asarray(y, dtype=np.float64) - fld.origin[1]) / fld.resolution
    h, w = fld.heights.shape
    xs = np.clip(xs, 0.0, w - 1.0)
    ys = np.clip(ys, 0.0, h - 1.0)
    x0 = np.minimum(np.floor(xs), w - 2 if w > 1 else 0).astype(np.int64)
    y0 = np.minimum(np.floor(ys), h - 2 if h > 1 else 0).astype(np.int64)
    x1 = np.minimum(x0 + 1, w - 1)
    y1 = np.minimum(y0 + 1, h - 1)
    tx = xs - x0
    ty = ys - y0
    z00 = fld.heights[y0, x0]
    z10 = fld.heights[y0, x1]
    z01 = fld.heights[y1, x0]
    z11 = fld.heights[y1, x1]
    top = z00 + tx * (z10 - z00)
    bot = z01 + tx * (z11 - z01)
    value = top + ty * (bot - top)
    if np.isscalar(x) and np.isscalar(y):
        return float(value)
    return value


# ---------------------------------------------------------------------------
# Generation
# ---------------------------------------------------------------------------


def _grid(size, resolution, origin):
    h, w = size
    xs = origin[0] + np.arange(w) * resolution
    ys = origin[1] + np.arange(h) * resolution
    return np.meshgrid(xs, ys)


def _hills_raw(params: HillsParams, size, resolution, origin, seed: int) -> np.ndarray:
    """Two-octave noise min-max normalized to [0, HILLS_MAX_HEIGHT]."""
    gx, gy = _grid(size, resolution, origin)
    low = perlin2(gx, gy, seed, params.low_frequency)
    high = perlin2(gx, gy, seed + 1, params.low_frequency * params.octave_ratio)
    raw = params.low_weight * low + params.high_weight * high
    lo, hi = raw.min(), raw.max()
    if hi - lo < 1e-12:
        return np.zeros(size)
    return (raw - lo) / (hi - lo) * HILLS_MAX_HEIGHT


def _stairs_profile(params: StairsParams, n_cells: int, resolution: float) -> np.ndarray:
    """Height profile along +x: alternating ascending/descending flights of
    `count` equal stairs, joined by flat landings at the flight end level."""
    profile = np.zeros(n_cells)
    x_edge = params.landing  # opening landing at height 0
    level = 0.0
    direction = 1.0
    i = int(np.ceil(x_edge / resolution))
    profile[:i] = 0.0
    while i < n_cells:
        for _ in range(params.count):
            level += direction * params.rise
            x_edge += params.run
            j = min(n_cells, int(np.ceil(x_edge / resolution)))
            profile[i:j] = level
            i = j
            if i >= n_cells:
                break
        x_edge += params.landing
        j = min(n_cells, int(np.ceil(x_edge / resolution)))
        profile[i:j] = level
        i = j
        direction = -direction
    return profile


def generate(spec: TerrainSpec, size=DEFAULT_SIZE, resolution: float = DEFAULT_RESOLUTION,
             c_t: float = 1.0, origin=(0.0, 0.0)) -> HeightField:
    """Rasterize a terrain spec at curriculum intensity `c_t`.

    The raw field is intensity independent; `c_t` scales it linearly, so
    every cell's height is monotone in `c_t` and `c_t = 0` is flat.
    """
    if not 0.0 <= c_t <= 1.0:
        raise ValueError(f"c_t = {c_t} outside [0, 1]")
    h, w = size
    if h < 1 or w < 1:
        raise ValueError(f"size must be at least 1x1, got {size}")
    if resolution <= 0:
        raise ValueError(f"resolution = {resolution} must be > 0")
    origin = np.asarray(origin, dtype=np.float64)
    params = spec.params

    if spec.mode == "flat":
        raw = np.zeros(size)
    elif spec.mode == "hills":
        raw = _hills_raw(params, size, resolution, origin, spec.seed)
    elif spec.mode == "edges":
        gx, gy = _grid(size, resolution, origin)
        noise = perlin2(gx, gy, spec.seed, params.frequency)
        raw = np.where(noise > 0.0, params.level, 0.0)
    elif spec.mode == "squares":
        sq_x = np.floor((origin[0] + np.arange(w) * resolution) / params.side).astype(np.int64)
        sq_y = np.floor((origin[1] + np.arange(h) * resolution) / params.side).astype(np.int64)
        nx = sq_x.max() - sq_x.min() + 1
        ny = sq_y.max() - sq_y.min() + 1
        rng = np.random.default_rng(spec.seed)
        square_heights = rng.uniform(0.0, params.height_max, size=(ny, nx))
        raw = square_heights[np.ix_(sq_y - sq_y.min(), sq_x - sq_x.min())]
    elif spec.mode == "quantized_hills":
        base = _hills_raw(params.hills, size, resolution, origin, spec.seed)
        raw = np.floor(base / params.step) * params.step
    elif spec.mode == "stairs":
        profile = _stairs_profile(params, w, resolution)
        raw = np.tile(profile, (h, 1))
    else:  # pragma: no cover - guarded by TerrainSpec
        raise ValueError(f"unknown terrain mode {spec.mode!r}")

    return HeightField(heights=raw * c_t, resolution=resolution, origin=origin)


# ---------------------------------------------------------------------------
# Export / import
# ---------------------------------------------------------------------------

_PGM_SCALE = 1000.0  # millimeter quantization
_PGM_MAXVAL = 65535


def write_pgm(fld: HeightField, path) -> None:
    """Write a 16-bit PGM (big-endian, millimeter quantized).  Header
    comments carry resolution, origin, and the height offset so the raster
    can be read back into world units."""
    offset = float(fld.heights.min())
    quantized = np.round((fld.heights - offset) * _PGM_SCALE)
    if quantized.max() > _PGM_MAXVAL:
        raise ValueError("height span exceeds the 16-bit PGM range (65.535 m)")
    data = quantized.astype(">u2")
    h, w = fld.heights.shape
    header = (
        f"P5\n"
        f"# resolution {fld.resolution!r}\n"
        f"# origin {fld.origin[0]!r} {fld.origin[1]!r}\n"
        f"# offset {offset!r}\n"
        f"{w} {h}\n{_PGM_MAXVAL}\n"
    )
    with open(path, "wb") as fh:
        fh.write(header.encode("ascii"))
        fh.write(data.tobytes())


def read_pgm(path) -> HeightField:
    with open(path, "rb") as fh:
        blob = fh.read()
    if not blob.startswith(b"P5"):
        raise ValueError("not a binary PGM file")
    meta = {"resolution": None, "origin": (0.0, 0.0), "offset": 0.0}
    pos = 2
    tokens = []
    while len(tokens) < 3:
        if blob[pos : pos + 1].isspace():
            pos += 1
            continue
        if blob[pos : pos + 1] == b"#":
            end = blob.index(b"\n", pos)
            comment = blob[pos + 1 : end].decode("ascii").strip()
            m = re.match(r"resolution\s+(\S+)", comment)
            if m:
                meta["resolution"] = float(m.group(1))
            m = re.match(r"origin\s+(\S+)\s+(\S+)", comment)
            if m:
                meta["origin"] = (float(m.group(1)), float(m.group(2)))
            m = re.match(r"offset\s+(\S+)", comment)
            if m:
                meta["offset"] = float(m.group(1))
            pos = end + 1
            continue
        end = pos
        while not blob[end : end + 1].isspace():
            end += 1
        tokens.append(blob[pos:end])
        pos = end
    pos += 1  # single whitespace after maxval
    w, h = int(tokens[0]), int(tokens[1])
    maxval = int(tokens[2])
    if maxval != _PGM_MAXVAL:
        raise ValueError(f"expected 16-bit PGM with maxval {_PGM_MAXVAL}, got {maxval}")
    if meta["resolution"] is None:
        raise ValueError("PGM header lacks the resolution comment")
    data = np.frombuffer(blob, dtype=">u2", count=h * w, offset=pos).reshape(h, w)
    heights = data.astype(np.float64) / _PGM_SCALE + meta["offset"]
    return HeightField(heights=heights, resolution=meta["resolution"], origin=np.asarray(meta["origin"]))


def write_json(fld: HeightField, path) -> None:
    doc = {
        "resolution": fld.resolution,
        "origin": fld.origin.tolist(),
        "heights": fld.heights.tolist(),
    }
    with open(path, "w") as fh:
        json.dump(doc, fh, sort_keys=True)


def read_json(path) -> HeightField:
    with open(path) as fh:
        doc = json.load(fh)
    return HeightField(
        heights=np.asarray(doc["heights"]),
        resolution=doc["resolution"],
        origin=np.asarray(doc["origin"]),
    )
