#!/usr/bin/env python3
"""Generate the synthetic FT trajectories and the task-suite file.

Each of the 30 tasks gets a deterministic 2-second recording at 100 Hz in
the tool-base cylinder frame (header `t,Fx,Fy,Fz,Tx,Ty,Tz`). Instead of
drawing wrench components directly, the generator samples smooth per-contact
force profiles that stay strictly inside the friction cones of the task's
grasp (as read from data/grasps/library.toml) and maps them through the
static-equilibrium matrix. Every recorded wrench is therefore resistible by
its grasp with margin, just like a wrench recorded from a real, stable grip.
Signal shapes rotate through four families (hold+ramp, sinusoid, spiked,
multi-harmonic). Run from anywhere; paths are resolved relative to this
file. Requires numpy and toml.
"""

import pathlib

import numpy as np
import toml

# (name, size, grasp, palm) in suite order
TASKS = [
    ("stir with spatula", "large", "L-Pinch", True),
    ("sprinkle, shake pepper", "medium", "Tripod1", True),
    ("spread/oil", "small", "M-Pinch", False),
    ("vertical cut", "large", "L-Pinch", True),
    ("use spoon to pick up", "small", "Tripod3", False),
    ("pizza wheel", "medium", "Tripod2", True),
    ("use black brush", "medium", "M-Pinch", True),
    ("spear object using fork", "small", "L-Pinch", True),
    ("stir water using spoon", "small", "M-Pinch", True),
    ("fasten screw with screwdriver", "medium", "M-Pinch", True),
    ("loosen screw with screwdriver", "medium", "M-Pinch", True),
    ("unlock lock with key", "small", "Tripod1", False),
    ("fasten nut with wrench", "medium", "L-Pinch", True),
    ("use paint brush to dip and spread", "medium", "M-Pinch", True),
    ("use hammer to hammer in nail", "large", "L-Pinch", True),
    ("brush teeth", "medium", "M-Pinch", True),
    ("use file to file wooden thing", "medium", "L-Pinch", True),
    ("comb hair", "medium", "L-Pinch", True),
    ("scrape substance from surface", "large", "L-Pinch", True),
    ("peel cucumber/potato", "medium", "L-Pinch", True),
    ("slice cucumber", "medium", "L-Pinch", True),
    ("flip bread", "medium", "Tripod3", False),
    ("use spoon to scoop and pour", "medium", "M-Pinch", True),
    ("shave object", "medium", "L-Pinch", True),
    ("use roller to roll out dough", "large", "M-Pinch", True),
    ("loosen nut with wrench", "medium", "L-Pinch", True),
    ("scoop and pour with measuring spoon/cup", "medium", "M-Pinch", True),
    ("insert peg into pegboard", "small", "Tripod1", False),
    ("brush powder accross grey tray", "small", "M-Pinch", True),
    ("insert straw through to-go cup lid", "small", "M-Pinch", True),
]

RADIUS = {"small": 0.008, "medium": 0.015, "large": 0.022}
MU = 0.6
RATE = 100.0
SAMPLES = 200


def slug(name: str) -> str:
    return "".join(c if c.isalnum() else "_" for c in name.lower())


def equilibrium_matrix(contacts, radius):
    """6 x 3n map from per-contact (N, f_z, f_theta) to the tool-base wrench."""
    a = np.zeros((6, 3 * len(contacts)))
    for i, c in enumerate(contacts):
        th, z = c["theta"], c["z"]
        co, s = np.cos(th), np.sin(th)
        a[:, 3 * i : 3 * i + 3] = [
            [co, 0, -s],
            [s, 0, co],
            [0, 1, 0],
            [-z * s, radius * s, -z * co],
            [z * co, -radius * co, -z * s],
            [0, 0, radius],
        ]
    return a


def smooth_noise(rng: np.random.Generator, n: int, scale: float) -> np.ndarray:
    """Band-limited noise: white noise convolved with a Hann window."""
    raw = rng.standard_normal(n + 40)
    win = np.hanning(41)
    win /= win.sum()
    return scale * np.convolve(raw, win, mode="valid")[:n]


def envelope(rng: np.random.Generator, t: np.ndarray, family: int) -> np.ndarray:
    """Smooth modulation in [-1, 1] from one of four signal families."""
    if family == 0:
        e = 0.4 * np.sin(2 * np.pi * rng.uniform(0.4, 0.8) * t) + np.clip(
            t - 0.5, 0.0, 1.0
        ) * 0.6 - 0.3
    elif family == 1:
        e = 0.8 * np.sin(2 * np.pi * rng.uniform(0.5, 1.2) * t + rng.uniform(0, 6.28))
    elif family == 2:
        e = 0.5 * np.sin(2 * np.pi * rng.uniform(0.4, 0.9) * t) + smooth_noise(
            rng, len(t), 0.15
        )
        spike = rng.integers(40, 140)
        e[spike : spike + 30] += 0.4 * np.hanning(30)
    else:
        e = 0.5 * np.sin(2 * np.pi * rng.uniform(0.5, 1.0) * t) + 0.3 * np.sin(
            2 * np.pi * rng.uniform(1.2, 2.0) * t + 0.7
        )
    return np.clip(e, -1.0, 1.0)


def contact_forces(rng, t, family, n_contacts):
    """Per-contact (N, f_z, f_theta) profiles strictly inside the mu-cone."""
    forces = []
    for _ in range(n_contacts):
        base = rng.uniform(1.5, 3.0)
        amp = rng.uniform(0.3, 0.9)
        normal = base + amp * envelope(rng, t, family)
        # tangential utilisation capped at 60% of the cone
        rho = 0.35 + 0.2 * envelope(rng, t, (family + 1) % 4)
        phi = rng.uniform(0, 2 * np.pi) + rng.uniform(0.3, 0.8) * np.sin(
            2 * np.pi * rng.uniform(0.2, 0.5) * t
        )
        fz = MU * normal * rho * np.cos(phi)
        ft = MU * normal * rho * np.sin(phi)
        forces += [normal, fz, ft]
    return np.stack(forces, axis=1)  # (SAMPLES, 3n)


def main() -> None:
    root = pathlib.Path(__file__).resolve().parent.parent
    library = toml.loads((root / "data" / "grasps" / "library.toml").read_text())
    grasps = {g["name"]: g["contacts"] for g in library["grasp"]}
    traj_dir = root / "data" / "trajectories"
    task_dir = root / "data" / "tasks"
    traj_dir.mkdir(parents=True, exist_ok=True)
    task_dir.mkdir(parents=True, exist_ok=True)

    t = np.arange(SAMPLES) / RATE
    suite_lines = ["# 30-task everyday-manipulation suite", ""]
    for i, (name, size, grasp, palm) in enumerate(TASKS):
        rng = np.random.default_rng(1000 + i)
        contacts = [c for c in grasps[grasp] if palm or not c.get("palm", False)]
        a = equilibrium_matrix(contacts, RADIUS[size])
        f = contact_forces(rng, t, i % 4, len(contacts))
        w = f @ a.T  # (SAMPLES, 6)

        fname = slug(name) + ".csv"
        with open(traj_dir / fname, "w") as fh:
            fh.write("t,Fx,Fy,Fz,Tx,Ty,Tz\n")
            for k in range(SAMPLES):
                row = ",".join(f"{v:.9g}" for v in w[k])
                fh.write(f"{t[k]:.9g},{row}\n")
        suite_lines += [
            "[[task]]",
            f'name = "{name}"',
            f'handle_size = "{size}"',
            f'grasp = "{grasp}"',
            f"palm = {str(palm).lower()}",
            f'trajectory = "../trajectories/{fname}"',
            "",
        ]
    (task_dir / "suite.toml").write_text("\n".join(suite_lines))
    print(f"wrote {len(TASKS)} trajectories and {task_dir / 'suite.toml'}")


if __name__ == "__main__":
    main()
