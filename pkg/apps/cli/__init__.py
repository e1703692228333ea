"""flatcurve command-line application."""
