"""ASCII stability map of the attraction/repulsion plane.

Scans the (a, b) plane for the self-propelled flock ring, prints the map
with one character per cell, and overlays the b = a/(a-1) curve that the
lower boundary approaches for large N.  Also writes the CSV + JSON pair
that the `swarmlab region` command would produce.

Run:  python demos/stability_region_map.py
"""

from swarmlab.regions import GridSpec, scan_flock, separatrix_check

GLYPH = {"stable": "#", "unstable": ".", "marginal": "o", "invalid": " "}


def main():
    spec = GridSpec(
        x_name="a", x_min=2.2, x_max=7.0, x_count=25,
        y_name="b", y_min=0.2, y_max=3.0, y_count=15,
        fixed={"n": 500, "m_max": 60},
    )
    region = scan_flock(spec)
    grid = region.classification_grid()

    ys = [spec.y_min + i * (spec.y_max - spec.y_min) / (spec.y_count - 1)
          for i in range(spec.y_count)]
    xs = [spec.x_min + i * (spec.x_max - spec.x_min) / (spec.x_count - 1)
          for i in range(spec.x_count)]
    print("flock ring stability, N=500  (# stable, . unstable, o marginal)\n")
    for iy in reversed(range(spec.y_count)):
        row = "".join(GLYPH[grid[ix][iy]] for ix in range(spec.x_count))
        print(f"  b={ys[iy]:5.2f} |{row}|")
    print(f"          a: {xs[0]:.1f} ... {xs[-1]:.1f}")
    print()

    print("bisected lower boundary vs a/(a-1), N=2000:")
    for a, boundary, target, gap in separatrix_check([3.0, 4.0, 5.0], 2000):
        print(f"  a={a:.0f}: boundary b = {boundary:.4f}, a/(a-1) = {target:.4f}, gap {gap:+.4f}")

    paths = region.write("region_demo")
    print(f"\nwrote {paths[0]} and {paths[1]}")


if __name__ == "__main__":
    main()
