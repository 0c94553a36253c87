"""States, operators, two-state vectors, pointers, modular variables and interferometers."""
