import argparse
import time
from pathlib import Path

from smg.constructions.registry import CONSTRUCTION_MAP
from smg.core.config import load_settings
from smg.graph.verifier import elliptic_quotient, is_centrally_symmetric
from smg.io.graph_file import write_graph

# ---------------------------------------------------------------------
# Census runner
# ---------------------------------------------------------------------


def run_census(names: list[str], out_dir: Path | None):
    settings = load_settings()
    rows = []

    for name in names:
        if name not in CONSTRUCTION_MAP:
            raise ValueError(
                f"Unknown construction '{name}'. "
                f"Available: {', '.join(CONSTRUCTION_MAP.keys())}"
            )

        print(f"\n▶ Constructing {name} ...")
        started = time.perf_counter()
        result = CONSTRUCTION_MAP[name](settings)
        elapsed = time.perf_counter() - started

        g = result.graph
        faces = result.audit.euler.F if result.audit is not None else None
        symmetric = is_centrally_symmetric(g.vertices, settings.verifier.tol)
        rows.append((name, g.n_vertices, g.n_edges, faces, g.lam, result.residual_max, result.certified, symmetric, elapsed))

        if symmetric:
            quotient = elliptic_quotient(g, settings.verifier.tol)
            print(
                f"▶ {name}: centrally symmetric, elliptic quotient on "
                f"{len(quotient.representatives)} points, complete={quotient.complete}"
            )

        if out_dir is not None:
            out_dir.mkdir(parents=True, exist_ok=True)
            write_graph(g, out_dir / f"{name}.json", residual_max=result.residual_max)

    # ---------------------------------------------------------------
    # Census table
    # ---------------------------------------------------------------
    print("\n=== CENSUS ===\n")
    print(f"{'graph':<18} {'V':>4} {'E':>4} {'F':>4} {'lambda':>20} {'residual':>10} {'cert':>5} {'sym':>4} {'secs':>7}")
    for name, v, e, f, lam, res, cert, sym, secs in rows:
        print(f"{name:<18} {v:>4} {e:>4} {str(f):>4} {lam:>20.15f} {res:>10.2e} {str(cert):>5} {str(sym):>4} {secs:>7.2f}")

    print("\n--- Done ---\n")
    return rows


# ---------------------------------------------------------------------
# CLI entrypoint
# ---------------------------------------------------------------------


def main():
    parser = argparse.ArgumentParser(
        description="Build every census graph and print V, E, F, lambda and certificates"
    )

    parser.add_argument(
        "--only",
        type=str,
        nargs="*",
        default=list(CONSTRUCTION_MAP.keys()),
        help="Constructions to run (default: all five)",
    )
    parser.add_argument(
        "--out",
        type=Path,
        default=None,
        help="Directory to write smg-1 graph files into",
    )

    args = parser.parse_args()
    run_census(args.only, args.out)


if __name__ == "__main__":
    main()
