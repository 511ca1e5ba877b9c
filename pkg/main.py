"""
Entry point for the GMELab command-line toolkit
"""
import sys

from gmelab.main import main

if __name__ == "__main__":
    sys.exit(main())
