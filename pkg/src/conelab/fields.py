"""Scalar fields on cone grids: gradients, weighted norms, splits, local ratios.

A Field stacks one sample sheet per half-cone (or one periodic sheet for the
full plane).  All reductions are plain measure-weighted sums over the grid's
exact cell measures; divergent quantities are never reported as infinities but
as partial-integral tables over the inner truncation radius.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dfield

import numpy as np

from .grids import PolarGrid

INF = float("inf")


@dataclass(frozen=True, eq=False)
class Field:
    """Samples f(r_k, theta_j) on each sheet of a polar grid."""

    grid: PolarGrid
    values: np.ndarray
    name: str = ""
    params: dict = dfield(default_factory=dict)
    vertex_limits: tuple | None = None
    _cache: dict = dfield(default_factory=dict, repr=False)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.shape != self.grid.shape:
            raise ValueError(f"sample shape {v.shape} != grid shape {self.grid.shape}")
        object.__setattr__(self, "values", v)
        v.flags.writeable = False

    @classmethod
    def from_function(cls, grid: PolarGrid, fn, name: str = "", params=None,
                      vertex_limits=None):
        """Build a field from fn(r, theta, half) evaluated on sheet meshes."""
        sheets = []
        for h in grid.halves:
            rr, tt = np.meshgrid(grid.r, grid.theta, indexing="ij")
            sheets.append(np.asarray(fn(rr, tt, h), dtype=float))
        return cls(grid, np.stack(sheets), name=name, params=dict(params or {}),
                   vertex_limits=vertex_limits)

    def with_values(self, values: np.ndarray, name: str | None = None,
                    vertex_limits="keep") -> "Field":
        vl = self.vertex_limits if vertex_limits == "keep" else vertex_limits
        return Field(self.grid, np.array(values, dtype=float),
                     name=self.name if name is None else name,
                     params=dict(self.params), vertex_limits=vl)

    def sheet(self, half: str) -> np.ndarray:
        return self.values[self.grid.half_index(half)]

    def __add__(self, other):
        return self.with_values(self.values + other.values, name="", vertex_limits=None)

    def __sub__(self, other):
        return self.with_values(self.values - other.values, name="", vertex_limits=None)

    def __mul__(self, c: float):
        return self.with_values(self.values * c, name="", vertex_limits=None)

    __rmul__ = __mul__


@dataclass(frozen=True, eq=False)
class GradientField:
    """Radial and tangential components of a discrete gradient."""

    grid: PolarGrid
    radial: np.ndarray
    angular: np.ndarray   # (1/r) d/dtheta per sheet

    def magnitude(self) -> np.ndarray:
        return np.sqrt(self.radial**2 + self.angular**2)


@dataclass(frozen=True)
class NormSpec:
    """Exponent / weight / norm-kind selector.

    kind: "lp" plain Lebesgue norm; "sobolev" adds the gradient term;
    "hardy_sobolev" additionally the 1/r-weighted term; "antiradial_sobolev"
    is the critical-exponent norm with the 1/r weight on the anti-radial part
    only (requires p equal to the dimension).
    """

    p: float
    weight: str = "none"
    kind: str = "lp"

    def __post_init__(self):
        if not (self.p == INF or self.p >= 1.0):
            raise ValueError("exponent must be in [1, inf]")
        if self.weight not in ("none", "inv_r"):
            raise ValueError(f"unknown weight {self.weight!r}")
        if self.kind not in ("lp", "sobolev", "hardy_sobolev", "antiradial_sobolev"):
            raise ValueError(f"unknown norm kind {self.kind!r}")


@dataclass(frozen=True, eq=False)
class RadialSplit:
    """f = radial + antiradial, the radial part being the per-ring cap mean."""

    radial: Field
    antiradial: Field
    profile: np.ndarray   # (nr,) cap means


def gradient(f: Field) -> GradientField:
    """Central finite differences in (r, theta); one-sided at edges.

    Cached on the field; second order for smooth samples.
    """
    if "gradient" in f._cache:
        return f._cache["gradient"]
    g = f.grid
    if g.nr < 3 or g.nt < 3:
        raise ValueError("gradient needs at least 3 nodes per direction")
    rad = g.d_dr(f.values)
    ang = g.d_dtheta(f.values) / g.r[None, :, None]
    out = GradientField(g, rad, ang)
    f._cache["gradient"] = out
    return out


def _samples_for_norm(obj) -> tuple[PolarGrid, np.ndarray]:
    if isinstance(obj, Field):
        return obj.grid, np.abs(obj.values)
    if isinstance(obj, GradientField):
        return obj.grid, obj.magnitude()
    raise TypeError("expected a Field or GradientField")


def lp_norm(obj, p: float, weight: str = "none", half: str | None = None) -> float:
    """Quadrature L^p norm; sample sup for p = inf; weight 'inv_r' divides by r.

    half restricts the norm to one half-cone's sheet (default: whole domain).
    """
    grid, vals = _samples_for_norm(obj)
    if vals.size == 0:
        raise ValueError("empty field")
    if half is not None:
        vals = vals[grid.half_index(half)][None]
    if weight == "inv_r":
        vals = vals / grid.r[None, :, None]
    elif weight != "none":
        raise ValueError(f"unknown weight {weight!r}")
    if p == INF:
        return float(vals.max())
    if p < 1:
        raise ValueError("exponent must be in [1, inf]")
    return float(np.sum(vals**p * grid.cell_measure[None, :, :]) ** (1.0 / p))


def norm(obj, spec: NormSpec) -> float:
    """Norm dispatch on a NormSpec (see NormSpec.kind)."""
    if spec.kind == "lp":
        return lp_norm(obj, spec.p, spec.weight)
    f = obj
    if not isinstance(f, Field):
        raise TypeError("Sobolev-type norms need a Field")
    base = lp_norm(f, spec.p) + lp_norm(gradient(f), spec.p)
    if spec.kind == "sobolev":
        return base
    if spec.kind == "hardy_sobolev":
        return base + lp_norm(f, spec.p, weight="inv_r")
    # antiradial_sobolev
    if spec.p != f.grid.n:
        raise ValueError("the anti-radial norm is defined at p = n only")
    fa = radial_split(f).antiradial
    return base + lp_norm(fa, spec.p, weight="inv_r")


def sobolev_norm(f: Field, spec: NormSpec) -> float:
    return norm(f, spec)


def hardy_quotient(f: Field, p: float) -> float:
    """||f/r||_p divided by the L^p norm of the radial derivative."""
    den = lp_norm_radial_derivative(f, p)
    if den == 0.0:
        raise ValueError("zero gradient")
    return lp_norm(f, p, weight="inv_r") / den


def lp_norm_radial_derivative(f: Field, p: float) -> float:
    g = gradient(f)
    rad = GradientField(f.grid, g.radial, np.zeros_like(g.radial))
    return lp_norm(rad, p)


def cap_mean(f: Field, halves=None) -> np.ndarray:
    """(nr,) mean of f over the sphere of each radius restricted to the cone.

    halves selects the sheets entering the mean (default: all sheets), using
    the same angular weights as volume integrals.
    """
    g = f.grid
    idx = range(g.nhalves) if halves is None else [g.half_index(h) for h in halves]
    w = g.angular_weight
    tot = len(idx) * float(np.sum(w))
    acc = np.zeros(g.nr)
    for i in idx:
        acc += f.values[i] @ w
    return acc / tot


def radial_split(f: Field, halves=None) -> RadialSplit:
    """Split into the per-ring cap mean and the mean-zero remainder."""
    prof = cap_mean(f, halves)
    fr = f.with_values(np.broadcast_to(prof[None, :, None], f.grid.shape),
                       name=f.name + "_radial" if f.name else "",
                       vertex_limits=None)
    fa = f.with_values(f.values - fr.values,
                       name=f.name + "_antiradial" if f.name else "",
                       vertex_limits=None)
    return RadialSplit(fr, fa, prof)


def even_odd_split(f: Field) -> tuple[Field, Field]:
    """f_e = (f + f o S)/2, f_o = (f - f o S)/2 with S the point reflection.

    On the symmetric double cone S swaps the two sheets; the local angular
    coordinate is oriented the same way on both sheets, so no index flip.
    """
    if f.grid.nhalves != 2:
        raise ValueError("even/odd split needs both half-cones")
    swapped = f.values[::-1]
    fe = f.with_values(0.5 * (f.values + swapped), name="", vertex_limits=None)
    fo = f.with_values(0.5 * (f.values - swapped), name="", vertex_limits=None)
    return fe, fo


# -- local inequality ratios ------------------------------------------------


def poincare_cap_ratio(f: Field, ring: int, p: float, half: str = "plus") -> float:
    """Mean-oscillation ratio on one spherical cap:
    (int_cap |f-mean|^p dsigma)^{1/p} / (diam * (int_cap |grad_theta f|^p)^{1/p})."""
    g = f.grid
    r = float(g.r[ring])
    w = g.angular_weight * r ** (g.n - 1)
    vals = f.sheet(half)[ring]
    mean = float(vals @ w / np.sum(w))
    dev = np.abs(vals - mean)
    tang = np.abs(gradient(f).angular[g.half_index(half), ring])
    if p == INF:
        num, den = dev.max(), tang.max()
    else:
        num = float((dev**p) @ w) ** (1.0 / p)
        den = float((tang**p) @ w) ** (1.0 / p)
    diam = 2.0 * g.domain.omega * r
    if num < 1e-300:
        return 0.0
    if den == 0.0:
        return INF
    return num / (diam * den)


def poincare_ball_ratio(f: Field, ball, q: float) -> float:
    """(avg_B |f - f_B|^q)^{1/q} / (radius * (avg_B |grad f|^q)^{1/q}) over the
    ball of the double cone B(center, radius) cap X."""
    g = f.grid
    if g.n != 2:
        raise ValueError("ball ratios are implemented on planar grids")
    c = np.asarray(ball.center, dtype=float)
    rad = float(ball.radius)
    if rad <= 0:
        raise ValueError("degenerate ball")
    gm = gradient(f).magnitude()
    num_acc, grad_acc, meas = 0.0, 0.0, 0.0
    masks, vals_list, meas_list = [], [], []
    for h in g.halves:
        pts = g.points(h)
        d = np.linalg.norm(pts - c, axis=-1)
        m = d < rad
        masks.append(m)
        vals_list.append(f.sheet(h))
        meas_list.append(np.broadcast_to(g.cell_measure, m.shape))
    tot = sum(float(mm[msk].sum()) for msk, mm in zip(masks, meas_list))
    if tot == 0.0:
        raise ValueError("ball does not meet the grid")
    fbar = sum(float((vv * mm)[msk].sum()) for msk, vv, mm in
               zip(masks, vals_list, meas_list)) / tot
    for i, h in enumerate(g.halves):
        msk, mm = masks[i], meas_list[i]
        num_acc += float((np.abs(vals_list[i] - fbar) ** q * mm)[msk].sum())
        grad_acc += float((gm[g.half_index(h)] ** q * mm)[msk].sum())
    num = (num_acc / tot) ** (1.0 / q)
    den = rad * (grad_acc / tot) ** (1.0 / q)
    if num < 1e-300:
        return 0.0
    if den == 0.0:
        return INF
    return num / den


def morrey_quotient(f: Field, p: float, eps: float) -> float:
    """sup over |x| < eps of |f(x)/eps| / ((|x|/eps)^{1-n/p} (avg_{|y|<2eps}|grad f|^p)^{1/p}).

    Quantifies the Hoelder decay rate at the vertex for p > n; requires a
    declared zero vertex value.
    """
    g = f.grid
    if p <= g.n:
        raise ValueError("Morrey quotient needs p > n")
    if f.vertex_limits is not None and any(v != 0.0 for v in f.vertex_limits):
        raise ValueError("needs a field with declared zero vertex value")
    gm = gradient(f).magnitude()
    inner = g.r < eps
    outer = g.r < 2.0 * eps
    if not inner.any():
        raise ValueError("eps below the grid's inner radius")
    meas = g.cell_measure[outer]
    avg = float((gm[:, outer, :] ** p * meas[None, :, :]).sum()
                / (g.nhalves * meas.sum())) ** (1.0 / p)
    if avg == 0.0:
        return 0.0 if np.all(f.values[:, inner, :] == 0.0) else INF
    ratio = (np.abs(f.values[:, inner, :]) / eps) / (
        (g.r[inner][None, :, None] / eps) ** (1.0 - g.n / p) * avg)
    return float(ratio.max())


# -- partial-integral tables and divergence gates ----------------------------


def partial_norm_power_table(f_vals: np.ndarray, grid: PolarGrid, p: float,
                             weight: str = "inv_r", decades: int | None = None):
    """Partial integrals P(r_min') = int_{r >= r_min'} |v/r|^p dlambda per decade.

    Returns (r_mins, P) with r_mins descending by decades from just below
    r_max down to the grid's inner radius.
    """
    vals = np.abs(f_vals)
    if weight == "inv_r":
        vals = vals / grid.r[None, :, None]
    per_ring = (vals**p * grid.cell_measure[None, :, :]).sum(axis=(0, 2))
    # cumulative from the outside in: P[k] = integral over rings >= k
    tail = np.cumsum(per_ring[::-1])[::-1]
    lo = math.ceil(math.log10(grid.r_min))
    hi = math.floor(math.log10(grid.r_max)) - 1
    if decades is not None:
        lo = max(lo, hi - decades + 1)
    r_mins = 10.0 ** np.arange(hi, lo - 1, -1.0)
    idx = np.searchsorted(grid.r, r_mins, side="left")
    P = tail[np.minimum(idx, len(tail) - 1)]
    return r_mins, P


def decade_growth(r_mins: np.ndarray, P: np.ndarray, last: int = 4) -> float:
    """Mean relative growth of P per decade of r_min over the last `last` decades."""
    if len(P) < last + 1:
        raise ValueError("table too short")
    seg = P[-(last + 1):]
    if seg[-1] == 0.0:
        return 0.0
    rel = np.diff(seg) / np.maximum(seg[:-1], 1e-300)
    return float(np.mean(rel))


def integrability_gate(f_vals: np.ndarray, grid: PolarGrid, p: float,
                       threshold: float = 0.015, last: int = 4):
    """Decide whether the 1/r-weighted L^p integral trends finite.

    Divergent iff the partial integrals keep growing by more than `threshold`
    per decade of the truncation radius over the last `last` decades.  Returns
    (accepted, growth_per_decade, table).
    """
    r_mins, P = partial_norm_power_table(f_vals, grid, p)
    growth = decade_growth(r_mins, P, last=last)
    return growth <= threshold, growth, (r_mins, P)


def log_log_increment_slope(r_mins: np.ndarray, P: np.ndarray,
                            skip: int = 1) -> float:
    """Growth exponent s of P(r_min) ~ A + B|ln r_min|^s via increments.

    Regressing ln(P(u_{k+1}) - P(u_k)) on ln u removes the additive constant A
    that biases a direct log-log fit; the slope is s - 1.
    """
    u = np.abs(np.log(r_mins))
    dP = np.diff(P)
    du = np.diff(u)
    um = 0.5 * (u[1:] + u[:-1])
    good = dP > 0
    good[:skip] = False
    if good.sum() < 3:
        raise ValueError("not enough growing increments to fit")
    x = np.log(um[good])
    y = np.log(dP[good] / du[good])
    slope = np.polyfit(x, y, 1)[0]
    return float(1.0 + slope)


# -- plain-text dump format ---------------------------------------------------


def save_field(f: Field, path: str) -> None:
    """Text dump: header lines then one `r theta value` line per sample,
    radially outside-in, sheets ordered by global angle."""
    g = f.grid
    order = sorted(range(g.nhalves), key=lambda i: g.global_theta(g.halves[i])[0])
    lines = [f"n={g.n}",
             f"omega={g.domain.omega!r}",
             f"variant={'fullspace' if g.kind == 'fullplane' else g.domain.variant}",
             f"K={g.nr}",
             f"J={g.nt * g.nhalves}",
             f"q={g.q!r}",
             f"rmax={g.r_max!r}"]
    for k in range(g.nr - 1, -1, -1):
        r = float(g.r[k])
        for i in order:
            th = g.global_theta(g.halves[i])
            for j in range(g.nt):
                lines.append(f"{r!r} {float(th[j])!r} {float(f.values[i, k, j])!r}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def load_field(path: str) -> Field:
    from .geometry import ConeDomain

    with open(path) as fh:
        raw = [ln.strip() for ln in fh if ln.strip()]
    head = {}
    body_start = 0
    for i, ln in enumerate(raw):
        if "=" in ln and " " not in ln:
            k, v = ln.split("=", 1)
            head[k] = v
            body_start = i + 1
        else:
            break
    n, nr = int(head["n"]), int(head["K"])
    jtot, q, rmax = int(head["J"]), float(head["q"]), float(head["rmax"])
    omega, variant = float(head["omega"]), head["variant"]
    if variant == "fullspace":
        dom = ConeDomain(n, omega, "double")
        grid = PolarGrid.fullplane(dom, nr=nr, nt=jtot, r_max=rmax, q=q)
    else:
        dom = ConeDomain(n, omega, variant)
        grid = PolarGrid.cone(dom, nr=nr, nt=jtot // 2, r_max=rmax, q=q)
    vals = np.empty(grid.shape)
    order = sorted(range(grid.nhalves),
                   key=lambda i: grid.global_theta(grid.halves[i])[0])
    rows = [ln.split() for ln in raw[body_start:]]
    if len(rows) != nr * jtot:
        raise ValueError("sample count does not match the header")
    pos = 0
    for k in range(nr - 1, -1, -1):
        for i in order:
            for j in range(grid.nt):
                vals[i, k, j] = float(rows[pos][2])
                pos += 1
    return Field(grid, vals)
