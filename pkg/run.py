"""
vtalign - Command Line Entry Point
Run this file to register, inspect or synthesize visual/thermal frame pairs
"""
import sys

from vtalign.cli import main

if __name__ == '__main__':
    sys.exit(main())
