"""Library of named test fields and the standard verification suites.

Families (parameters in brackets):
  logcounter(beta)    sign-split log profile |ln r|^{-beta} below r=1/4, smooth
                      cutoff to 0 by r=1/2; the critical-exponent counterexample.
  radial_exp          r e^{-r}, radial.
  radial_power(a)     r^a e^{-r}, radial.
  angular_bump        r e^{-r} times a smooth even bump in the local angle.
  jump                sign-split radial plateau: +1 near the vertex on the plus
                      half, -1 on the minus half, supported in r <= 1/2.
  lipschitz_compact   the radial tent max(0, 1-r).
  constant(c)         the constant field.
"""

from __future__ import annotations

import numpy as np

from .fields import Field
from .grids import PolarGrid
from .profiles import plateau

_LOG_PLATEAU = (0.25, 0.5)


def _sign(half: str) -> float:
    return 1.0 if half == "plus" else -1.0


def _radial_cut(r):
    return plateau(r, *_LOG_PLATEAU)


def make_test_field(name: str, grid: PolarGrid, **params) -> Field:
    """Construct a named test field on the given grid."""
    if name == "logcounter":
        beta = float(params.get("beta", 1.0))

        def fn(r, t, half):
            prof = np.abs(np.log(r)) ** (-beta) * _radial_cut(r)
            return _sign(half) * prof

        return Field.from_function(grid, fn, name=f"logcounter(b={beta:g})",
                                   params={"beta": beta}, vertex_limits=(0.0, 0.0))
    if name == "radial_exp":
        return Field.from_function(grid, lambda r, t, h: r * np.exp(-r),
                                   name="radial_exp", vertex_limits=(0.0, 0.0))
    if name == "radial_power":
        a = float(params.get("a", 2.0))
        if a > 0:
            limits = (0.0, 0.0)
        elif a == 0:
            limits = (1.0, 1.0)
        else:
            limits = None
        return Field.from_function(grid, lambda r, t, h: r**a * np.exp(-r),
                                   name=f"radial_power(a={a:g})", params={"a": a},
                                   vertex_limits=limits)
    if name == "angular_bump":
        omega = grid.domain.omega
        lo = 0.0 if grid.domain.n == 3 else -omega

        def fn(r, t, half):
            s = (t - lo) / (omega - lo)          # 0..1 across the sheet
            bump = plateau(np.abs(s - 0.5), 0.1, 0.45)
            return r * np.exp(-r) * bump

        return Field.from_function(grid, fn, name="angular_bump",
                                   vertex_limits=(0.0, 0.0))
    if name == "jump":
        return Field.from_function(grid, lambda r, t, h: _sign(h) * _radial_cut(r),
                                   name="jump", vertex_limits=(1.0, -1.0))
    if name == "lipschitz_compact":
        return Field.from_function(grid, lambda r, t, h: np.maximum(0.0, 1.0 - r),
                                   name="lipschitz_compact", vertex_limits=(1.0, 1.0))
    if name == "constant":
        c = float(params.get("c", 1.0))
        return Field.from_function(grid, lambda r, t, h: np.full_like(r, c),
                                   name=f"constant(c={c:g})", params={"c": c},
                                   vertex_limits=(c, c))
    raise ValueError(f"unknown test field {name!r}")


def suite_hardy(grid: PolarGrid) -> list[Field]:
    """Ten fields exercising the 1/r-weighted gradient bound below the
    critical exponent, including near-extremal radial profiles."""
    return [
        make_test_field("logcounter", grid, beta=0.25),
        make_test_field("logcounter", grid, beta=0.5),
        make_test_field("logcounter", grid, beta=1.0),
        make_test_field("radial_exp", grid),
        make_test_field("radial_power", grid, a=0.0),
        make_test_field("radial_power", grid, a=0.5),
        make_test_field("radial_power", grid, a=2.0),
        make_test_field("angular_bump", grid),
        make_test_field("jump", grid),
        make_test_field("lipschitz_compact", grid),
    ]


def suite_cz(grid: PolarGrid) -> list[Field]:
    """Five fields with finite weighted Sobolev data at p=2, the inputs of the
    decomposition and K-functional sweeps."""
    return [
        make_test_field("logcounter", grid, beta=1.0),
        make_test_field("radial_exp", grid),
        make_test_field("radial_power", grid, a=0.5),
        make_test_field("radial_power", grid, a=2.0),
        make_test_field("angular_bump", grid),
    ]


def suite_extension(grid: PolarGrid, p: float) -> list[Field]:
    """Fields admissible for the extension operator at exponent p:
    membership in the unweighted space constrains the vertex behavior."""
    base = [
        make_test_field("radial_exp", grid),
        make_test_field("radial_power", grid, a=2.0),
        make_test_field("angular_bump", grid),
        make_test_field("lipschitz_compact", grid),
    ]
    n = grid.domain.n
    if p < n:
        return base + [make_test_field("jump", grid),
                       make_test_field("logcounter", grid, beta=1.0)]
    if p == n:
        return base + [make_test_field("logcounter", grid, beta=1.0),
                       make_test_field("radial_power", grid, a=0.5)]
    if p == float("inf"):
        return base
    return base + [make_test_field("radial_power", grid, a=0.5)]


def suite_fullplane(grid: PolarGrid) -> list[Field]:
    """Five smooth compactly-decaying fields on the full plane."""
    if grid.kind != "fullplane":
        raise ValueError("needs a full-plane grid")

    def gauss(cx, cy, s):
        def fn(r, t, h):
            x, y = r * np.cos(t), r * np.sin(t)
            return np.exp(-(((x - cx) ** 2 + (y - cy) ** 2) / (2 * s * s)))
        return fn

    def modulated(fn0, mod):
        def fn(r, t, h):
            x, y = r * np.cos(t), r * np.sin(t)
            return fn0(r, t, h) * mod(x, y)
        return fn

    g0 = gauss(0.0, 0.0, 0.8)
    fields = [
        Field.from_function(grid, gauss(0.5, 0.3, 0.7), name="gauss_offset"),
        Field.from_function(grid, g0, name="gauss_centered"),
        Field.from_function(grid, modulated(g0, lambda x, y: x), name="gauss_x"),
        Field.from_function(grid, modulated(g0, lambda x, y: np.sin(2 * x) + 0.5 * y),
                            name="gauss_wave"),
        Field.from_function(grid, gauss(-0.8, 0.6, 1.1), name="gauss_far"),
    ]
    return fields


def vertex_corrected(f: Field) -> Field:
    """Subtract the common vertex value times a fixed radial plateau, producing
    a field with zero vertex limits (used above the critical exponent)."""
    if f.vertex_limits is None or f.vertex_limits[0] != f.vertex_limits[1]:
        raise ValueError("needs equal declared vertex limits")
    c = f.vertex_limits[0]
    chi = plateau(f.grid.r, 0.5, 1.0)
    vals = f.values - c * chi[None, :, None]
    return f.with_values(vals, name=f.name + "-centered", vertex_limits=(0.0, 0.0))
