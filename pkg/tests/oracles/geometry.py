"""Plain numpy line geometry: common normals, distances, angles."""
import numpy as np


def line_point_direction(h):
    """(point closest to the origin, unit direction) of a line given as 8 coefficients."""
    c = np.array([float(x) for x in h.coeffs])
    d, m = c[1:4], c[5:8]
    return np.cross(d, m), d


def common_normal_feet(p1, d1, p2, d2):
    """Parameters (l1, l2) of the closest points p1 + l1 d1 and p2 + l2 d2."""
    A = np.array([[d1 @ d1, -d1 @ d2], [d1 @ d2, -d2 @ d2]])
    rhs = np.array([(p2 - p1) @ d1, (p2 - p1) @ d2])
    return np.linalg.solve(A, rhs)


def dh_parameters(lines):
    """(c, d, s) with c the direction dot product, d the unsigned distance and s the offset."""
    pd = [line_point_direction(h) for h in lines]
    c, d, s = [], [], []
    for k in range(6):
        (p1, d1), (p2, d2) = pd[k], pd[(k + 1) % 6]
        l1, l2 = common_normal_feet(p1, d1, p2, d2)
        c.append(float(d1 @ d2))
        d.append(float(np.linalg.norm(p1 + l1 * d1 - p2 - l2 * d2)))
    for k in range(6):
        p, u = pd[k]
        pn, un = pd[(k + 1) % 6]
        pp, up = pd[(k - 1) % 6]
        nxt = common_normal_feet(p, u, pn, un)[0]
        prv = common_normal_feet(p, u, pp, up)[0]
        s.append(float(nxt - prv))
    return c, d, s
