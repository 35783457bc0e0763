#!/usr/bin/env python3
"""Builds configs/quadrotor.json: a planar quadrotor linearized about hover,
discretized with a zero-order hold, plus a robust control invariant zonotope.

State (x, z, theta, vx, vz, omega); inputs are the two rotor thrust
deviations from hover. The invariant set is a box in the real Schur basis
of the closed loop A - B K, sized by a weighted infinity-norm contraction so
that A s + B(-K s) + w stays inside it for every disturbance w in W.
Because its generators are orthogonal, the support constraints along +-G_S
are exact facet constraints, which keeps the learned-action feasible sets
invariant rather than merely approximately so.
"""
import json
import pathlib

import numpy as np
from scipy.linalg import expm, schur
from scipy.signal import place_poles

MASS, ARM, INERTIA, GRAVITY, DT = 1.0, 0.2, 0.01, 9.81, 0.05
POLES = [0.60, 0.65, 0.70, 0.75, 0.80, 0.85]
DIST = np.array([0.0, 0.0, 0.0, 0.002, 0.002, 0.004])  # half widths of W
ACTION_MARGIN = 1.5


def plant():
    ac = np.zeros((6, 6))
    ac[0:3, 3:6] = np.eye(3)
    ac[3, 2] = -GRAVITY
    bc = np.zeros((6, 2))
    bc[4, :] = 1.0 / MASS
    bc[5, :] = [-ARM / INERTIA, ARM / INERTIA]
    big = np.zeros((8, 8))
    big[:6, :6] = ac
    big[:6, 6:] = bc
    phi = expm(big * DT)
    return phi[:6, :6], phi[:6, 6:]


def main():
    a, b = plant()
    k = place_poles(a, b, POLES).gain_matrix
    acl = a - b @ k
    u, q = schur(acl, output="real")
    mag = np.abs(u) + 1e-3
    vals, vecs = np.linalg.eig(mag)
    top = np.argmax(vals.real)
    contraction = vals[top].real
    v = np.abs(vecs[:, top].real)
    v /= v.max()
    assert contraction < 1.0, contraction

    gw = np.diag(DIST)[:, DIST > 0]
    e = np.abs(q.T) @ np.abs(gw) @ np.ones(gw.shape[1])
    h = float(np.max(e / ((1.0 - contraction) * v)))
    gs = q @ np.diag(h * v)

    # Every vertex of the invariant box under u = -K s must hit the box again.
    reach = np.abs(u) @ (h * v) + e
    assert np.all(reach <= h * v + 1e-12)

    a_half = ACTION_MARGIN * (np.abs(k @ gs) @ np.ones(6))
    config = {
        "A": a.tolist(),
        "B": b.tolist(),
        "W": {"type": "zonotope", "center": [0.0] * 6, "generators": gw.tolist()},
        "Sr": {"type": "zonotope", "center": [0.0] * 6, "generators": gs.tolist()},
        "action_set": {"type": "interval", "lower": (-a_half).tolist(), "upper": a_half.tolist()},
        "goal_state": [0.0] * 6,
        "max_steps": 200,
        "start_fraction": 0.5,
        "feedback_gain": k.tolist(),
    }
    out = pathlib.Path(__file__).resolve().parent.parent / "configs" / "quadrotor.json"
    out.write_text(json.dumps(config, indent=1) + "\n")
    print(f"contraction {contraction:.4f}, scale {h:.4g}, action half widths {a_half}")
    print("S^r half extents per state:", np.abs(gs) @ np.ones(6))


if __name__ == "__main__":
    main()
