#!/usr/bin/env python3
"""
Gibbs Explorer - config-driven entry point
"""

import argparse
import sys


def main(argv=None):
    """Parse flags and run the configured command"""
    parser = argparse.ArgumentParser(
        description="Gibbs Explorer - finite-volume Gibbs point process simulation and verification",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  python main.py --config config/examples/poisson_sample.yaml
  python main.py --config config/examples/strauss_gnz.yaml --threads 4 --output ./output/gnz
  python main.py --config config/examples/hard_sphere_partition.yaml --seed 7 --verbose

Exit codes: 0 ok, 1 invalid configuration, 2 runtime error, 3 verification failure
        """
    )

    parser.add_argument('--config', type=str, default=None,
                        help='Configuration file path (default: $GIBBS_EXPLORER_CONFIG or config/config.yaml)')
    parser.add_argument('--output', type=str, default=None,
                        help='Output directory (default: output.directory from the config)')
    parser.add_argument('--threads', type=int, default=None,
                        help='Worker threads; outputs do not depend on this')
    parser.add_argument('--seed', type=int, default=None,
                        help='Master seed override (unsigned 64-bit)')
    parser.add_argument('--verbose', '-v', action='store_true',
                        help='Enable verbose output')

    args = parser.parse_args(argv)

    try:
        from gibbs_explorer.cli import run_cli
    except ImportError as e:
        print(f"Import failed: {e}")
        print("Install required dependencies: pip install -r requirements.txt")
        return 2

    return run_cli(
        config_path=args.config,
        output_dir=args.output,
        threads=args.threads,
        seed=args.seed,
        verbose=args.verbose,
    )


if __name__ == "__main__":
    sys.exit(main())
