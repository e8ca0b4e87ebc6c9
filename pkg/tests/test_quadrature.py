import cmath

import numpy as np
import pytest

from epolylog.errors import PathTooClose, QuadratureDiverged
from epolylog.quadrature import (
    BranchedForm,
    LineArc,
    PathSpec,
    SpiralArc,
    convolve_product,
    iterated_integral,
    iterated_integral_all_prefixes,
    path_integral,
)


def line(a, b):
    return PathSpec([LineArc(a, b)])


def test_polynomial_integral_exact():
    p = line(0.2 - 0.3j, 1.1 + 0.7j)
    val = path_integral(p, lambda z, v: z**2 * v)
    a, b = 0.2 - 0.3j, 1.1 + 0.7j
    assert abs(val - (b**3 - a**3) / 3) < 1e-13


def test_winding_integral():
    # full loop around the origin picked up by a spiral with real tau
    loop = PathSpec([SpiralArc(1.0, 1, 1.0)])
    val = path_integral(loop, lambda z, v: v / z)
    assert abs(val - 2j * cmath.pi) < 1e-12


def test_spiral_endpoint_and_log():
    tau = 0.1 + 0.9j
    arc = SpiralArc(0.5 + 0.2j, 3, tau)
    q = cmath.exp(2j * cmath.pi * tau)
    assert abs(arc.point(1.0) - (0.5 + 0.2j) * q**3) < 1e-14
    assert abs(arc.end_log() - (cmath.log(0.5 + 0.2j) + 3 * 2j * cmath.pi * tau)) < 1e-14


def test_line_log_tracking():
    start = 1.0 + 0.0j
    arc = LineArc(start, -1.0 + 0.5j, start_log=0.0)
    l = arc.log_point(1.0)
    assert abs(cmath.exp(l) - (-1.0 + 0.5j)) < 1e-14
    # stays on the branch reached through the upper half plane
    assert 0 < l.imag < cmath.pi


def test_iterated_matches_closed_form():
    b = 0.8 + 0.6j
    p = line(0.0, b)
    w1 = lambda z, v: z * v
    w2 = lambda z, v: z**2 * v
    val = iterated_integral(p, [w1, w2])
    # int_0^b z (z^3/3) dz = b^5/15
    assert abs(val - b**5 / 15) < 1e-13


def test_shuffle_identity():
    p = line(0.1, 1.3 + 0.4j)
    f = lambda z, v: v / (1 + z)
    g = lambda z, v: z * v
    single_f = path_integral(p, f)
    single_g = path_integral(p, g)
    fg = iterated_integral(p, [f, g])
    gf = iterated_integral(p, [g, f])
    assert abs(single_f * single_g - (fg + gf)) < 1e-11


def test_path_composition():
    # holomorphic forms: value independent of the intermediate point
    a, m1, m2, b = 0.0, 0.7 + 0.2j, 0.3 + 0.8j, 1.0 + 1.0j
    f = lambda z, v: z * v
    g = lambda z, v: cmath.exp(z) * v
    v1 = iterated_integral(PathSpec([LineArc(a, m1), LineArc(m1, b)]), [f, g])
    v2 = iterated_integral(PathSpec([LineArc(a, m2), LineArc(m2, b)]), [f, g])
    assert abs(v1 - v2) < 1e-11


def test_reversal_antisymmetry():
    p = line(0.0, 1.0 + 0.5j)
    f = lambda z, v: z * v
    assert abs(path_integral(p.reversed(), f) + path_integral(p, f)) < 1e-12
    g = lambda z, v: z**2 * v
    rev = iterated_integral(p.reversed(), [f, g])
    swapped = iterated_integral(p, [g, f])
    assert abs(rev - swapped) < 1e-11


def test_all_prefixes_ladder():
    p = line(0.0, 1.0)
    f = lambda z, v: v
    g = lambda z, v: z * v
    ladder = iterated_integral_all_prefixes(p, [f, g])
    assert abs(ladder[0] - 1.0) < 1e-15
    assert abs(ladder[1] - 0.5) < 1e-13  # int z dz
    assert abs(ladder[2] - 1.0 / 6.0) < 1e-13  # int dz z dz


def test_branched_form_sees_arc():
    tau = 0.05 + 0.9j
    arc = SpiralArc(1.0, 2, tau)
    p = PathSpec([arc])
    # integrate d(log z) using the arc's own branch data
    w = BranchedForm(lambda a, u: a.velocity(u) / a.point(u))
    val = path_integral(p, w)
    assert abs(val - 2 * 2j * cmath.pi * tau) < 1e-11


def test_clearance_validation():
    p = PathSpec([LineArc(0.0, 1.0)], singular=[0.5 + 1e-5j], clearance=1e-3)
    with pytest.raises(PathTooClose):
        p.validate()
    ok = PathSpec([LineArc(0.0, 1.0)], singular=[0.5 + 0.2j], clearance=1e-3)
    ok.validate()


def test_divergence_reported():
    p = line(0.0, 1.0)
    f = lambda z, v: v / (z - (0.5 + 1e-12j))
    with pytest.raises(QuadratureDiverged):
        path_integral(p, f, tol=1e-13, max_depth=6)


def test_vector_valued_single_form():
    p = line(0.0, 1.0)
    f = lambda z, v: np.array([v, z * v, z**2 * v])
    vals = path_integral(p, f)
    assert np.allclose(vals, [1.0, 0.5, 1.0 / 3.0])


def test_convolution_product_iterated():
    # coefficient rows stand for c0 + c1*B; check the B-expansion of the
    # iterated integral against scalar runs of each coefficient combination
    p = line(0.0, 1.0)
    f0 = lambda z, v: v
    f1 = lambda z, v: z * v
    g0 = lambda z, v: 2.0 * v
    g1 = lambda z, v: z**2 * v
    F = lambda z, v: np.array([f0(z, v), f1(z, v)])
    G = lambda z, v: np.array([g0(z, v), g1(z, v)])
    out = iterated_integral(p, [F, G], product=convolve_product)
    order0 = iterated_integral(p, [f0, g0])
    order1 = iterated_integral(p, [f0, g1]) + iterated_integral(p, [f1, g0])
    assert abs(out[0] - order0) < 1e-12
    assert abs(out[1] - order1) < 1e-12


def test_convolution_outer_product_shapes():
    # disjoint variables: (P,1) x (1,Q) convolves to the full (P,Q) table
    p = line(0.0, 1.0)
    F = lambda z, v: np.array([[v], [z * v]])
    G = lambda z, v: np.array([[v, z * v]])
    out = iterated_integral(p, [F, G], product=convolve_product)
    assert out.shape == (2, 2)
    assert abs(out[0, 0] - iterated_integral(p, [lambda z, v: v] * 2)) < 1e-12
    assert (
        abs(
            out[1, 1]
            - iterated_integral(p, [lambda z, v: z * v, lambda z, v: z * v])
        )
        < 1e-12
    )
