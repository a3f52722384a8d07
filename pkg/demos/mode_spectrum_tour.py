"""Per-mode linear stability of one flock ring, three ways.

For a single (a, b) the script prints the 4x4 eigenvalues mode by mode
for the self-propelled flock, the velocity-alignment flock, and the
rotating mill, and shows where the worst mode sits.  Pass different
parameters on the command line to explore.

Run:  python demos/mode_spectrum_tour.py [a] [b] [n]
"""

import sys

from swarmlab.spectra import mode_envelope


def show(model, a, b, n, **kw):
    summary, reports = mode_envelope(model, a, b, n, **kw)
    print(f"{model}: aggregate {summary.classification.value}, "
          f"worst mode m={summary.m} (max Re {summary.max_real:+.3e})")
    for r in reports:
        if r.m > 8 and r.m != summary.m:
            continue
        eigs = " ".join(f"{v.real:+.4f}{v.imag:+.4f}j" for v in r.eigenvalues)
        marker = " <- worst" if r.m == summary.m else ""
        print(f"   m={r.m:>3} [{r.classification.value:>8}]  {eigs}{marker}")
    print()


def main(argv):
    a = float(argv[1]) if len(argv) > 1 else 5.0
    b = float(argv[2]) if len(argv) > 2 else 1.5
    n = int(argv[3]) if len(argv) > 3 else 100
    print(f"ring at a={a}, b={b}, N={n}; modes m=2..8 plus the worst one\n")
    show("flock", a, b, n, alpha=1.0)
    show("flock-cs", a, b, n, gamma=1.0)
    show("mill", a, b, n, alpha=1.0, speed=0.5)


if __name__ == "__main__":
    main(sys.argv)
