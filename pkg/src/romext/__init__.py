"""Romanovski polynomials, rationally extended Scarf II / Rosen-Morse I
potentials and their exceptional-type polynomial families."""
