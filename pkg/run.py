"""
Startup script for the Bayesian adaptive smoothing spline tools

Usage:
    python run.py fit --input data.csv --output out/ --model bass1
    python run.py simulate --example 2 --reps 50 --output bench/
    python run.py matrices --which q --grid knots.txt
"""
import sys

from bass.main import main


if __name__ == "__main__":
    sys.exit(main())
