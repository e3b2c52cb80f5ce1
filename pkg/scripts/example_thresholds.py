"""Locate the detection thresholds of the isotropic and Werner families by grid scan.

Prints the scanned crossing next to the closed-form value for each d.

    python3 scripts/example_thresholds.py --dims 2 3 4 --step 1e-4
"""
import argparse

from geamlab.cli import crossing, sweep_grid
from geamlab.entangle import (
    build_reference,
    conjugate_geam,
    criterion_F,
    criterion_G,
    isotropic_threshold,
    werner_p_from_x,
)
from geamlab.geam import build_geam


def scan(values, verdict):
    return crossing(list(values), [verdict(v) for v in values])


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--dims", type=int, nargs="+", default=[2, 3, 4])
    ap.add_argument("--preset", default="mub")
    ap.add_argument("--f", default="sld")
    ap.add_argument("--step", type=float, default=1e-3)
    args = ap.parse_args()

    print(f"{'family':<10} {'d':>2} {'scan':>10} {'closed form':>12}")
    for d in args.dims:
        g = build_geam(args.preset, d)
        gc = conjugate_geam(g)
        qs = sweep_grid(0.0, 1.0, args.step)
        q = scan(qs, lambda v: criterion_F(build_reference("isotropic", d, v).state, g, gc, args.f).verdict)
        print(f"{'isotropic':<10} {d:>2} {q:>10.5f} {isotropic_threshold(d):>12.6f}")
        xs = sweep_grid(-1.0, 1.0, args.step)
        x = scan(xs, lambda v: criterion_G(build_reference("werner", d, v).state, g, g).verdict)
        print(f"{'werner':<10} {d:>2} {x:>10.5f} {2 / d - 1:>12.6f}")
        if d == 2:
            print(f"{'  as p':<10} {d:>2} {werner_p_from_x(x):>10.5f} {1 / 3:>12.6f}")


if __name__ == "__main__":
    main()
