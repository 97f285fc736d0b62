#!/usr/bin/env python3
"""Klein-Gordon spectral toolkit entry point."""

from kg_spectra import run

if __name__ == "__main__":
    run()
