"""Which conical GEAMs are positive on which realization.

For every preset and d, reports the minimum operator eigenvalue on the
Gell-Mann basis and (where one exists) on the projective basis, plus the
largest positive S on the Gell-Mann basis next to the preset's S.

    python3 scripts/positivity_survey.py --dims 2 3 4 5
"""
import argparse

from geamlab.geam import build_geam, gell_mann_basis, max_feasible_S, nm_shapes, parse_preset


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--dims", type=int, nargs="+", default=[2, 3, 4])
    args = ap.parse_args()

    print(f"{'d':>2} {'preset':<12} {'S':>11} {'max S (GM)':>11} {'min eig GM':>11} {'min eig proj':>12}")
    for d in args.dims:
        presets = ["mub", "mum:0.8", "sic", "gsic:0.7"] + [f"nm:{n},{m}" for n, m in nm_shapes(d)]
        for name in presets:
            spec = parse_preset(name, d)
            gm = build_geam(spec, realization="gell-mann")
            smax = max_feasible_S(spec.N, spec.M, spec.gamma, gell_mann_basis(d, spec.M))
            proj = "-"
            if name.split(":")[0] in ("mub", "mum", "sic", "gsic") and d >= 3:
                proj = f"{build_geam(spec, realization='projective').min_eigenvalue:.3e}"
            print(f"{d:>2} {name:<12} {spec.S:>11.4e} {smax:>11.4e} {gm.min_eigenvalue:>11.3e} {proj:>12}")


if __name__ == "__main__":
    main()
